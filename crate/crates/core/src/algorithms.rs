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

//! Contract-annotated builders for the Hadamard test, the quantum Fourier
//! transform and quantum phase estimation.
//!
//! The QFT and QPE contracts (`qft_spec`, `iqft_spec`, `phase_close`) are
//! this crate's own formulation of what those circuits must satisfy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contracts::{ContractCircuit, MeasuredCircuit};
use crate::decompose::decompose_controlled;
use crate::error::{Error, Result};
use crate::expressions::{
    eq_state, expectation, hadamard_test_state, partial_state, OperatorExpr, StateExpr,
    EQ_STATE_TOL,
};
use crate::gates::{adjoint, controlled, embed, GateSpec};
use crate::numerics::{ComplexScalar, StateVector};
use crate::simulator::Counts;

/// Absolute tolerance of the Hadamard-test measure condition.
pub const HADAMARD_ABS_TOL: f64 = 0.01;
pub const MAX_QFT_QUBITS: usize = 12;
pub const MAX_QPE_COUNTING: usize = 10;

/// Decoded QPE outcome: `phase = int(mode_bitstring) / 2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEstimate {
    pub phase: f64,
    pub m: usize,
    pub mode_bitstring: String,
}

fn require_single_qubit(g: &GateSpec) -> Result<()> {
    if g.arity() != 1 {
        return Err(Error::ArityMismatch {
            gate: g.name().to_string(),
            expected: 1,
            found: g.arity(),
        });
    }
    Ok(())
}

/// `controlled(U)` decomposed into `{rz, rx, cx}` on (control 0, target 1),
/// carrying `controlled_spec`: the block acts as the exact controlled gate.
pub fn controlled_unitary_circuit(ugate: &GateSpec) -> Result<ContractCircuit> {
    require_single_qubit(ugate)?;
    let seq = decompose_controlled(ugate.unitary())?;
    let mut circ = seq.to_circuit(&format!("controlled_{}", ugate.name()))?;
    let target = embed(controlled(ugate).unitary(), &[0, 1], 2);
    circ.add_condition("controlled_spec", move |pre, post| {
        eq_state(post, &target.apply(pre)?, EQ_STATE_TOL)
    })?;
    Ok(circ)
}

/// Hadamard test for `ugate` with the ancilla on qubit 0 and the target on
/// qubit 1. `u` is the operator the caller claims `ugate` implements;
/// `condition1` checks the post-state against
/// `((ψ + Uψ)/2) ⊗ |0⟩ + ((ψ − Uψ)/2) ⊗ |1⟩`.
pub fn hadamard_test_circuit(ugate: &GateSpec, u: &OperatorExpr) -> Result<ContractCircuit> {
    require_single_qubit(ugate)?;
    let mut circ = ContractCircuit::named("hadamard_test", ugate.arity() + 1)?;
    circ.append_gate(GateSpec::h(), &[0])?;
    circ.append_sub(&controlled_unitary_circuit(ugate)?, &[0, 1])?;
    circ.append_gate(GateSpec::h(), &[0])?;
    let u = u.clone();
    circ.add_condition("condition1", move |pre, post| {
        let psi = partial_state(pre, &[1], 1e-8)?;
        let expected = hadamard_test_state(&psi, &u).eval()?;
        eq_state(post, &expected, EQ_STATE_TOL)
    })?;
    Ok(circ)
}

/// `(N₀ − N₁) / (N₀ + N₁)` over single-qubit counts.
pub fn estimate_real_expectation(counts: &Counts) -> Result<f64> {
    match counts.width() {
        Some(1) => {}
        Some(w) => {
            return Err(Error::Postprocess(format!(
                "expected single-qubit counts, got {w}-qubit outcomes"
            )))
        }
        None => return Err(Error::Postprocess("no outcomes recorded".into())),
    }
    let (n0, n1) = (counts.get("0") as f64, counts.get("1") as f64);
    if n0 + n1 == 0.0 {
        return Err(Error::Postprocess("N0 + N1 = 0".into()));
    }
    Ok((n0 - n1) / (n0 + n1))
}

/// The full measured pipeline: `prep` prepares `ψ` on qubit 1, the Hadamard
/// test runs on `[0, 1]`, qubit 0 is measured and `condition2` checks the
/// estimate against `Re⟨ψ|U|ψ⟩` within [`HADAMARD_ABS_TOL`].
pub fn hadamard_test_pipeline(
    ugate: &GateSpec,
    u: &OperatorExpr,
    prep: &ContractCircuit,
) -> Result<MeasuredCircuit<f64>> {
    if prep.size() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: prep.size(),
        });
    }
    let mut circ = ContractCircuit::named("main", 2)?;
    circ.append_sub(prep, &[1])?;
    circ.append_sub(&hadamard_test_circuit(ugate, u)?, &[0, 1])?;
    let mut measured = circ.measure(&[0], estimate_real_expectation)?;
    let psi = StateExpr::vector(prep.run()?);
    let u = u.clone();
    measured.add_condition("condition2", move |_, _, est: &f64| {
        let actual = expectation(&psi, &u)?.re;
        Ok((actual - est).abs() <= HADAMARD_ABS_TOL)
    })?;
    Ok(measured)
}

fn unit_phase(theta: f64) -> ComplexScalar {
    Complex64::from_polar(1.0, theta)
}

/// `F·v` (or `F†·v`) with `F[j][k] = ω^{jk}/√N`, `ω = e^{2πi/N}`, evaluated
/// directly from the definition.
pub fn apply_dft(v: &StateVector, inverse: bool) -> StateVector {
    let n = v.dim();
    let sign = if inverse { -1.0 } else { 1.0 };
    let norm = 1.0 / (n as f64).sqrt();
    let amps = (0..n)
        .map(|j| {
            v.amps()
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    let e = ((j * k) % n) as f64 / n as f64;
                    a * unit_phase(sign * 2.0 * PI * e)
                })
                .sum::<ComplexScalar>()
                * norm
        })
        .collect();
    StateVector::new(amps).expect("length is unchanged")
}

fn qft_gates(n: usize) -> Vec<(GateSpec, Vec<usize>)> {
    let mut gates = Vec::new();
    for j in (0..n).rev() {
        gates.push((GateSpec::h(), vec![j]));
        for k in (0..j).rev() {
            let angle = PI / (1u64 << (j - k)) as f64;
            gates.push((controlled(&GateSpec::p(angle)), vec![k, j]));
        }
    }
    for i in 0..n / 2 {
        gates.push((GateSpec::swap(), vec![i, n - 1 - i]));
    }
    gates
}

fn check_qft_size(n: usize) -> Result<()> {
    if !(1..=MAX_QFT_QUBITS).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "QFT size must be in 1..={MAX_QFT_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

/// H + controlled-phase ladder followed by qubit-reversal swaps, so the
/// circuit's unitary is exactly the DFT matrix. Carries `qft_spec`.
pub fn qft_circuit(n: usize) -> Result<ContractCircuit> {
    check_qft_size(n)?;
    let mut circ = ContractCircuit::named("qft", n)?;
    for (g, qs) in qft_gates(n) {
        circ.append_gate(g, &qs)?;
    }
    circ.add_condition("qft_spec", |pre, post| {
        eq_state(post, &apply_dft(pre, false), EQ_STATE_TOL)
    })?;
    Ok(circ)
}

/// Adjoint of [`qft_circuit`], carrying `iqft_spec`.
pub fn inverse_qft_circuit(n: usize) -> Result<ContractCircuit> {
    check_qft_size(n)?;
    let mut circ = ContractCircuit::named("inverse_qft", n)?;
    for (g, qs) in qft_gates(n).into_iter().rev() {
        circ.append_gate(adjoint(&g), &qs)?;
    }
    circ.add_condition("iqft_spec", |pre, post| {
        eq_state(post, &apply_dft(pre, true), EQ_STATE_TOL)
    })?;
    Ok(circ)
}

/// Reads the most frequent outcome as a binary fraction, first key character
/// most significant.
pub fn decode_phase(counts: &Counts, m: usize) -> Result<PhaseEstimate> {
    let mode = counts
        .mode()
        .ok_or_else(|| Error::Postprocess("no outcomes recorded".into()))?;
    if mode.len() != m {
        return Err(Error::Postprocess(format!(
            "expected {m}-bit outcomes, got '{mode}'"
        )));
    }
    let k = u64::from_str_radix(mode, 2).map_err(|e| Error::Postprocess(e.to_string()))?;
    Ok(PhaseEstimate {
        phase: k as f64 / (1u64 << m) as f64,
        m,
        mode_bitstring: mode.to_string(),
    })
}

/// Distance between two phases on the unit circle of `[0, 1)`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Phase estimation of `ugate` with `m` counting qubits (qubits `0..m`) and
/// the target on qubit `m`, prepared by `eigenprep`. Controlled powers
/// `U^{2^j}` are formed by repeated squaring and decomposed. Counting qubits
/// are measured most significant first. When `known_phase` is given, the
/// `phase_close` measure condition requires the decoded phase to lie within
/// `1/2^m` of it (circularly).
pub fn qpe_circuit(
    ugate: &GateSpec,
    eigenprep: &ContractCircuit,
    m: usize,
    known_phase: Option<f64>,
) -> Result<MeasuredCircuit<PhaseEstimate>> {
    require_single_qubit(ugate)?;
    if !(1..=MAX_QPE_COUNTING).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "counting register must have 1..={MAX_QPE_COUNTING} qubits, got {m}"
        )));
    }
    if eigenprep.size() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: eigenprep.size(),
        });
    }
    let mut circ = ContractCircuit::named("qpe", m + 1)?;
    circ.append_sub(eigenprep, &[m])?;
    for j in 0..m {
        circ.append_gate(GateSpec::h(), &[j])?;
    }
    for j in 0..m {
        let power = ugate.unitary().pow(1u64 << j);
        let block = controlled_unitary_circuit(&GateSpec::matrix(power)?)?.with_name(format!(
            "controlled_{}^{}",
            ugate.name(),
            1u64 << j
        ));
        circ.append_sub(&block, &[j, m])?;
    }
    let counting: Vec<usize> = (0..m).collect();
    circ.append_sub(&inverse_qft_circuit(m)?, &counting)?;
    let order: Vec<usize> = (0..m).rev().collect();
    let mut measured = circ.measure(&order, move |counts: &Counts| decode_phase(counts, m))?;
    if let Some(phi) = known_phase {
        let tol = 1.0 / (1u64 << m) as f64;
        measured.add_condition("phase_close", move |_, _, est: &PhaseEstimate| {
            Ok(circular_distance(est.phase, phi) <= tol)
        })?;
    }
    Ok(measured)
}

/// Eigenvalue phase `φ ∈ [0, 1)` with `U|v⟩ = e^{2πiφ}|v⟩`, or `None` when
/// `v` is not an eigenvector within `1e-9`.
pub fn eigenphase(u: &GateSpec, v: &StateVector) -> Option<f64> {
    let uv = u.unitary().apply(v).ok()?;
    let lambda = crate::numerics::inner(v, &uv).ok()?;
    if uv.max_abs_diff(&v.scale(lambda)) > 1e-9 {
        return None;
    }
    Some((lambda.arg() / (2.0 * PI)).rem_euclid(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ViolationKind;
    use crate::expressions::NamedState;
    use crate::numerics::{c, tensor_states};
    use crate::simulator::marginal_probabilities;
    use std::collections::BTreeMap;

    fn counts(pairs: &[(&str, u64)]) -> Counts {
        let map: BTreeMap<String, u64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Counts::from_map(map).unwrap()
    }

    fn prep(gates: &[GateSpec]) -> ContractCircuit {
        let mut p = ContractCircuit::named("prep", 1).unwrap();
        for g in gates {
            p.append_gate(g.clone(), &[0]).unwrap();
        }
        p
    }

    #[test]
    fn hadamard_test_t_on_plus_passes() {
        let circ =
            hadamard_test_circuit(&GateSpec::t(), &OperatorExpr::Gate(GateSpec::t())).unwrap();
        assert_eq!(circ.size(), 2);
        let input = tensor_states(&NamedState::Plus.vector(), &StateVector::zero(1));
        let out = circ.run_state(&input).unwrap();
        let p = marginal_probabilities(&out, &[0]).unwrap();
        assert!((p[0] - 0.926777).abs() < 1e-6);
    }

    #[test]
    fn hadamard_test_detects_wrong_operator() {
        let circ =
            hadamard_test_circuit(&GateSpec::t(), &OperatorExpr::Gate(GateSpec::s())).unwrap();
        let input = tensor_states(&NamedState::Plus.vector(), &StateVector::zero(1));
        let err = circ.run_state(&input).unwrap_err();
        let v = err.violation().unwrap();
        assert_eq!(v.kind, ViolationKind::StateCondition);
        assert_eq!(v.tag, "condition1");
    }

    #[test]
    fn hadamard_test_identity_leaves_ancilla_zero() {
        let circ =
            hadamard_test_circuit(&GateSpec::i(), &OperatorExpr::Gate(GateSpec::i())).unwrap();
        let psi = StateVector::new(vec![c(0.6, 0.), c(0., 0.8)]).unwrap();
        let input = tensor_states(&psi, &StateVector::zero(1));
        let out = circ.run_state(&input).unwrap();
        assert!(eq_state(&out, &input, 1e-12).unwrap());
    }

    #[test]
    fn hadamard_test_rejects_two_qubit_gate() {
        let op = OperatorExpr::Gate(GateSpec::cx());
        assert!(matches!(
            hadamard_test_circuit(&GateSpec::cx(), &op),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn estimator_examples() {
        let est = estimate_real_expectation(&counts(&[("0", 92678), ("1", 7322)])).unwrap();
        assert!((est - 0.85356).abs() < 1e-12);
        assert_eq!(
            estimate_real_expectation(&counts(&[("0", 100)])).unwrap(),
            1.0
        );
        assert_eq!(
            estimate_real_expectation(&counts(&[("0", 50), ("1", 50)])).unwrap(),
            0.0
        );
        assert!(estimate_real_expectation(&counts(&[("00", 5)])).is_err());
        assert!(estimate_real_expectation(&counts(&[])).is_err());
    }

    #[test]
    fn pipeline_with_z_estimates_zero() {
        let z = GateSpec::z();
        let mc =
            hadamard_test_pipeline(&z, &OperatorExpr::Gate(z.clone()), &prep(&[GateSpec::h()]))
                .unwrap();
        let (value, counts) = mc.run(100_000, 1).unwrap();
        assert!(value.abs() < 0.01, "{value}");
        assert_eq!(counts.total_shots(), 100_000);
    }

    #[test]
    fn qft_small_cases() {
        let circ = qft_circuit(1).unwrap();
        assert_eq!(circ.gate_count(), 1);
        let out = qft_circuit(3).unwrap().run().unwrap();
        let uniform = 1.0 / 8f64.sqrt();
        assert!(out
            .amps()
            .iter()
            .all(|a| (a - c(uniform, 0.)).norm() < 1e-12));
        assert!(qft_circuit(0).is_err());
        assert!(qft_circuit(13).is_err());
    }

    #[test]
    fn inverse_qft_undoes_qft() {
        let mut circ = ContractCircuit::new(3).unwrap();
        circ.append_sub(&qft_circuit(3).unwrap(), &[0, 1, 2])
            .unwrap();
        circ.append_sub(&inverse_qft_circuit(3).unwrap(), &[0, 1, 2])
            .unwrap();
        let input = StateVector::basis(3, 5);
        assert!(circ.run_state(&input).unwrap().max_abs_diff(&input) < 1e-12);
    }

    #[test]
    fn qpe_exact_phases() {
        let cases = [
            (GateSpec::t(), vec![GateSpec::x()], 3, 0.125, "001"),
            (GateSpec::z(), vec![GateSpec::x()], 1, 0.5, "1"),
            (GateSpec::i(), vec![GateSpec::i()], 2, 0.0, "00"),
        ];
        for (u, p, m, phi, key) in cases {
            let mc = qpe_circuit(&u, &prep(&p), m, Some(phi)).unwrap();
            let (est, counts) = mc.run(1000, 7).unwrap();
            assert_eq!(est.phase, phi);
            assert_eq!(est.mode_bitstring, key);
            assert_eq!(counts.get(key), 1000);
        }
    }

    #[test]
    fn qpe_argument_errors() {
        let p = prep(&[GateSpec::x()]);
        assert!(qpe_circuit(&GateSpec::t(), &p, 0, None).is_err());
        assert!(qpe_circuit(&GateSpec::t(), &p, 11, None).is_err());
        assert!(qpe_circuit(&GateSpec::cx(), &p, 2, None).is_err());
        assert!(qpe_circuit(&GateSpec::t(), &ContractCircuit::new(2).unwrap(), 2, None).is_err());
    }

    #[test]
    fn qpe_wrong_known_phase_fails_measure_condition() {
        let mc = qpe_circuit(&GateSpec::t(), &prep(&[GateSpec::x()]), 3, Some(0.6)).unwrap();
        let err = mc.run(100, 1).unwrap_err();
        let v = err.violation().unwrap();
        assert_eq!(v.kind, ViolationKind::MeasureCondition);
        assert_eq!(v.tag, "phase_close");
    }

    #[test]
    fn circular_distance_wraps() {
        assert!((circular_distance(0.95, 0.05) - 0.1).abs() < 1e-12);
        assert!((circular_distance(0.2, 0.3) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn eigenphase_of_t_on_one() {
        assert_eq!(
            eigenphase(&GateSpec::t(), &StateVector::basis(1, 1)),
            Some(0.125)
        );
        assert_eq!(eigenphase(&GateSpec::t(), &NamedState::Plus.vector()), None);
    }
}
