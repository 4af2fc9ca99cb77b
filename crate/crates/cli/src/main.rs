// Copyright 2026 The qcontract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `qcontract`: run circuit files with contracts, built-in examples, and
//! gate decomposition from the command line.
//!
//! Exit status: 0 when every contract passed, 1 on a contract violation,
//! 2 on usage, parse or build errors. Results go to stdout, diagnostics to
//! stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use qcontract::algorithms::{hadamard_test_pipeline, qft_circuit, qpe_circuit};
use qcontract::decompose::{decompose_circuit, DEFAULT_BASIS};
use qcontract::dsl::{compile_with, DslError, DslErrorKind, ElaborateOptions, Program};
use qcontract::expressions::EQ_STATE_TOL;
use qcontract::numerics::c;
use qcontract::random::random_state;
use qcontract::simulator::sequence_unitary;
use qcontract::{ContractCircuit, Error, GateSpec, OperatorExpr, StateVector};

const DEFAULT_SHOTS: u64 = 100_000;
const MAX_RESIDUAL_QUBITS: usize = 12;

#[derive(Parser)]
#[command(
    name = "qcontract",
    version,
    about = "Quantum circuits with runtime contracts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, elaborate and run a `.qc` file, checking every contract.
    Run {
        path: PathBuf,
        /// Shots for the final measurement [default: the file's, else 100000]
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fidelity tolerance for declarative asserts.
        #[arg(long, default_value_t = EQ_STATE_TOL)]
        tolerance: f64,
    },
    /// Build and run a built-in algorithm with its default parameters.
    Example {
        name: ExampleName,
        #[arg(long, default_value_t = DEFAULT_SHOTS)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Rewrite a `.qc` file's gates into a basis and report the residual.
    Decompose {
        path: PathBuf,
        /// Comma-separated basis gate names; must include h, rx, rz and cx.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BASIS.map(String::from))]
        basis: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    /// U = T, psi = |+>.
    HadamardTest,
    /// n = 3 on a random seeded input.
    Qft,
    /// U = T, eigenstate |1>, 3 counting qubits.
    Qpe,
}

enum Failure {
    Violation(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Violation(v) => Failure::Violation(v.to_string()),
            other => Failure::Usage(format!("error: {other}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            path,
            shots,
            seed,
            tolerance,
        } => cmd_run(&path, shots, seed, tolerance),
        Command::Example { name, shots, seed } => cmd_example(name, shots, seed),
        Command::Decompose { path, basis } => cmd_decompose(&path, &basis),
    };
    match outcome {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, opts: &ElaborateOptions) -> Result<Program, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("error: cannot read {}: {e}", path.display())))?;
    compile_with(&src, opts).map_err(|e| Failure::Usage(render_dsl_error(path, &src, &e)))
}

fn render_dsl_error(path: &Path, src: &str, e: &DslError) -> String {
    let kind = match e.kind {
        DslErrorKind::Lex => "lexical",
        DslErrorKind::Syntax => "syntax",
        DslErrorKind::Elaboration => "elaboration",
    };
    let mut out = format!(
        "{}:{}:{}: {kind} error: {}",
        path.display(),
        e.span.line,
        e.span.start,
        e.message
    );
    if let Some(line) = src.lines().nth(e.span.line - 1) {
        let width = e.span.end + 1 - e.span.start;
        let _ = write!(
            out,
            "\n  | {line}\n  | {}{}",
            " ".repeat(e.span.start - 1),
            "^".repeat(width)
        );
    }
    out
}

fn cmd_run(path: &Path, shots: Option<u64>, seed: u64, tolerance: f64) -> Result<String, Failure> {
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Failure::Usage(format!(
            "error: invalid tolerance {tolerance}"
        )));
    }
    let program = load(path, &ElaborateOptions { tolerance })?;
    let mut out = String::new();
    match program {
        Program::Circuit(circ) => {
            let state = circ.run()?;
            out.push_str(&state_summary(&state));
        }
        Program::Measured {
            circuit,
            shots: declared,
        } => {
            let shots = shots.or(declared).unwrap_or(DEFAULT_SHOTS);
            let (value, counts) = circuit.run(shots, seed)?;
            let _ = writeln!(out, "value: {value}");
            let _ = writeln!(out, "counts: {counts}");
        }
    }
    out.push_str("all contracts passed\n");
    Ok(out)
}

fn state_summary(s: &StateVector) -> String {
    let mut out = format!("final state ({} qubits):\n", s.num_qubits());
    for (k, a) in s.amps().iter().enumerate() {
        if a.norm() > 1e-12 {
            let _ = writeln!(
                out,
                "  |{:0width$b}>  {:+.6} {:+.6}i  p={:.6}",
                k,
                a.re,
                a.im,
                a.norm_sqr(),
                width = s.num_qubits()
            );
        }
    }
    out
}

fn cmd_example(name: ExampleName, shots: u64, seed: u64) -> Result<String, Failure> {
    let mut out = String::new();
    match name {
        ExampleName::HadamardTest => {
            let t = GateSpec::t();
            let mut prep = ContractCircuit::named("prep", 1)?;
            prep.append_gate(GateSpec::h(), &[0])?;
            let pipeline = hadamard_test_pipeline(&t, &OperatorExpr::Gate(t.clone()), &prep)?;
            let (value, _) = pipeline.run(shots, seed)?;
            let exact = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
            let _ = writeln!(out, "value: {value}");
            let _ = writeln!(out, "exact: {exact:.6}");
        }
        ExampleName::Qft => {
            let n = 3;
            let input = random_state(n, &mut Xoshiro256PlusPlus::seed_from_u64(seed));
            let output = qft_circuit(n)?.run_state(&input)?;
            out.push_str(&state_summary(&output));
        }
        ExampleName::Qpe => {
            let mut prep = ContractCircuit::named("eigenstate", 1)?;
            prep.append_gate(GateSpec::x(), &[0])?;
            let qpe = qpe_circuit(&GateSpec::t(), &prep, 3, Some(0.125))?;
            let (estimate, _) = qpe.run(shots, seed)?;
            let _ = writeln!(out, "outcome: {}", estimate.mode_bitstring);
            let _ = writeln!(out, "phase: {}", estimate.phase);
        }
    }
    out.push_str("all contracts passed\n");
    Ok(out)
}

fn cmd_decompose(path: &Path, basis: &[String]) -> Result<String, Failure> {
    let program = load(path, &ElaborateOptions::default())?;
    let original = program.circuit();
    let names: Vec<String> = basis
        .iter()
        .map(|b| b.trim().to_ascii_lowercase())
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let decomposed = decompose_circuit(original, &refs)?;
    let (gates, phase) = decomposed.flatten();
    let n = original.size();
    let mut out = format!("circuit {n}\n");
    for (g, qubits) in &gates {
        out.push_str(g.name());
        if !g.params().is_empty() {
            let params: Vec<String> = g.params().iter().map(f64::to_string).collect();
            let _ = write!(out, "({})", params.join(", "));
        }
        for q in qubits {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "# global phase: {phase}");
    let _ = writeln!(out, "# gates: {}", gates.len());
    if n <= MAX_RESIDUAL_QUBITS {
        let (orig_gates, orig_phase) = original.flatten();
        let before = sequence_unitary(&orig_gates, n)?.scale(c(orig_phase.cos(), orig_phase.sin()));
        let after = sequence_unitary(&gates, n)?.scale(c(phase.cos(), phase.sin()));
        let _ = writeln!(out, "# residual: {:e}", before.max_abs_diff(&after));
    } else {
        let _ = writeln!(
            out,
            "# residual: skipped above {MAX_RESIDUAL_QUBITS} qubits"
        );
    }
    Ok(out)
}
