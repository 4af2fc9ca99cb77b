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

use std::fs;
use std::path::{Path, PathBuf};

use qcontract::dsl::{compile, parse_file, print_file, DslErrorKind, Program, SourceSpan};
use qcontract::expressions::hadamard_test_state;
use qcontract::gates::controlled;
use qcontract::{
    eq_state, ContractCircuit, Error, GateSpec, NamedState, OperatorExpr, ViolationKind,
};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

fn qc_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "qc"))
        .collect();
    files.sort();
    files
}

/// Reads `# error: <Kind> <line>:<start>-<end>` from the first line.
fn expected_error(src: &str) -> (DslErrorKind, SourceSpan) {
    let header = src
        .lines()
        .next()
        .unwrap()
        .strip_prefix("# error: ")
        .unwrap();
    let (kind, span) = header.split_once(' ').unwrap();
    let kind = match kind {
        "Lex" => DslErrorKind::Lex,
        "Syntax" => DslErrorKind::Syntax,
        "Elaboration" => DslErrorKind::Elaboration,
        other => panic!("unknown kind {other}"),
    };
    let (line, cols) = span.split_once(':').unwrap();
    let (start, end) = cols.split_once('-').unwrap();
    (
        kind,
        SourceSpan::new(
            line.parse().unwrap(),
            start.parse().unwrap(),
            end.parse().unwrap(),
        ),
    )
}

#[test]
fn malformed_files_fail_with_exact_spans() {
    let files = qc_files(&corpus().join("malformed"));
    assert!(files.len() >= 20);
    for path in files {
        let src = fs::read_to_string(&path).unwrap();
        let (kind, span) = expected_error(&src);
        let err = compile(&src).expect_err(&path.display().to_string());
        assert_eq!(err.kind, kind, "{}: {err}", path.display());
        assert_eq!(err.span, span, "{}: {err}", path.display());
        assert!(err.span.end >= err.span.start);
    }
}

#[test]
fn valid_files_round_trip_through_the_printer() {
    let files = qc_files(&corpus());
    assert!(files.len() >= 3);
    for path in files {
        let src = fs::read_to_string(&path).unwrap();
        let ast = parse_file(&src).unwrap();
        let printed = print_file(&ast);
        assert_eq!(parse_file(&printed).unwrap(), ast, "{}", path.display());
        assert_eq!(print_file(&parse_file(&printed).unwrap()), printed);
    }
}

fn measured(
    name: &str,
) -> (
    qcontract::MeasuredCircuit<qcontract::dsl::MeasuredValue>,
    Option<u64>,
) {
    let src = fs::read_to_string(corpus().join(name)).unwrap();
    match compile(&src).unwrap() {
        Program::Measured { circuit, shots } => (circuit, shots),
        Program::Circuit(_) => panic!("{name} has no measurement"),
    }
}

#[test]
fn hadamard_files_run_in_their_interval() {
    for name in ["hadamard_test.qc", "hadamard_test_nested.qc"] {
        let (circuit, shots) = measured(name);
        let (value, counts) = circuit.run(shots.unwrap(), 1).unwrap();
        let x = value.as_real().unwrap();
        assert!((x - 0.853_553).abs() <= 0.01, "{name}: {x}");
        assert_eq!(counts.total_shots(), 100_000);
    }
}

#[test]
fn wrong_hadamard_file_reports_c1() {
    let (circuit, shots) = measured("hadamard_test_wrong.qc");
    match circuit.run(shots.unwrap(), 1).unwrap_err() {
        Error::Violation(v) => {
            assert_eq!(v.kind, ViolationKind::StateCondition);
            assert_eq!(v.tag, "c1");
            assert!(v.to_string().contains("Condition Error occurred in 'c1'"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn qpe_file_reads_one_eighth() {
    let (circuit, shots) = measured("qpe_t.qc");
    let (value, counts) = circuit.run(shots.unwrap(), 7).unwrap();
    assert_eq!(value.as_real(), Some(0.125));
    assert_eq!(counts.get("001"), 1000);
}

#[test]
fn plain_files_run() {
    for name in ["qft2.qc", "identity.qc", "controlled_t.qc"] {
        let src = fs::read_to_string(corpus().join(name)).unwrap();
        let Program::Circuit(c) = compile(&src).unwrap() else {
            panic!("{name}")
        };
        c.run().unwrap();
    }
}

const HADAMARD_TEMPLATE: &str = "circuit 2\nh 1\nh 0\nGATE 0 1\nh 0\n\
    assert c1: post == (|+> + T @ |+>) / 2 ^ |0> + (|+> - T @ |+>) / 2 ^ |1>\n";

fn host_circuit(cu: &GateSpec) -> ContractCircuit {
    let mut c = ContractCircuit::named("main", 2).unwrap();
    c.append_gate(GateSpec::h(), &[1]).unwrap();
    c.append_gate(GateSpec::h(), &[0]).unwrap();
    c.append_gate(cu.clone(), &[0, 1]).unwrap();
    c.append_gate(GateSpec::h(), &[0]).unwrap();
    let expected = hadamard_test_state(
        &NamedState::Plus.vector(),
        &OperatorExpr::Gate(GateSpec::t()),
    )
    .eval()
    .unwrap();
    c.add_condition("c1", move |_, post| eq_state(post, &expected, 1e-8))
        .unwrap();
    c
}

#[test]
fn declarative_and_host_asserts_agree() {
    let cases = [
        (
            "controlled-t",
            GateSpec::from_name("controlled-t", &[]).unwrap(),
            true,
        ),
        ("controlled-s", controlled(&GateSpec::s()), false),
        ("controlled-z", controlled(&GateSpec::z()), false),
        (
            "controlled-p(pi/4)",
            controlled(&GateSpec::p(std::f64::consts::FRAC_PI_4)),
            true,
        ),
        (
            "controlled-rz(pi/4)",
            controlled(&GateSpec::rz(std::f64::consts::FRAC_PI_4)),
            false,
        ),
        ("controlled-p(0.78)", controlled(&GateSpec::p(0.78)), false),
        ("cx", GateSpec::cx(), false),
        ("swap", GateSpec::swap(), false),
    ];
    for (name, gate, should_pass) in cases {
        let src = HADAMARD_TEMPLATE.replace("GATE", name);
        let Program::Circuit(dsl) = compile(&src).unwrap() else {
            panic!()
        };
        let dsl_ok = dsl.run().is_ok();
        let host_ok = host_circuit(&gate).run().is_ok();
        assert_eq!(dsl_ok, host_ok, "{name}");
        assert_eq!(dsl_ok, should_pass, "{name}");
    }
}
