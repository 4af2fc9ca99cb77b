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

//! Rewriting gates into the `{h, rx, rz, cx}` basis.
//!
//! Single-qubit gates go through a ZYZ Euler split
//! `U = e^{iα}·RZ(β)·RY(γ)·RZ(δ)` with each `RY` expressed as
//! `RZ(π/2)·RX(γ)·RZ(−π/2)`. Singly-controlled single-qubit gates use the
//! two-CNOT construction `controlled(U) = (P(α) ⊗ A)·CX·(I ⊗ B)·CX·(I ⊗ C)`
//! with `ABC = I`. Global phase is recorded rather than dropped.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contracts::{ContractCircuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{ry_via_rx, GateSpec};
use crate::numerics::{Matrix, UNITARY_TOL};
use crate::simulator::sequence_unitary;

/// The basis targeted by [`decompose_circuit`] at minimum.
pub const DEFAULT_BASIS: [&str; 4] = ["h", "rx", "rz", "cx"];

const ANGLE_EPS: f64 = 1e-12;

/// Euler angles of a 2×2 unitary: `U = e^{iα}·RZ(β)·RY(γ)·RZ(δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedSequence {
    /// Gates in time order with their local qubit arguments.
    pub gates: Vec<(GateSpec, Vec<usize>)>,
    /// Radians of global phase such that `e^{iφ}·(product of gates)` equals
    /// the source unitary.
    pub global_phase: f64,
    pub num_qubits: usize,
}

impl DecomposedSequence {
    /// `e^{iφ}` times the product of the gate unitaries, in the gate-matrix
    /// convention (local qubit 0 most significant) so it compares directly
    /// with [`GateSpec::unitary`].
    pub fn reconstruct(&self) -> Result<Matrix> {
        let top = self.num_qubits - 1;
        let flipped: Vec<(GateSpec, Vec<usize>)> = self
            .gates
            .iter()
            .map(|(g, qs)| (g.clone(), qs.iter().map(|&q| top - q).collect()))
            .collect();
        let m = sequence_unitary(&flipped, self.num_qubits)?;
        Ok(m.scale(Complex64::from_polar(1.0, self.global_phase)))
    }

    pub fn to_circuit(&self, name: &str) -> Result<ContractCircuit> {
        let mut circ = ContractCircuit::named(name, self.num_qubits)?;
        for (g, qs) in &self.gates {
            circ.append_gate(g.clone(), qs)?;
        }
        circ.add_global_phase(self.global_phase);
        Ok(circ)
    }
}

fn require_unitary_2x2(u: &Matrix) -> Result<()> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let err = u.unitarity_error();
    if err > UNITARY_TOL {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

/// ZYZ split with `γ ∈ [0, π]`; when `γ < 1e-12` the `Z` rotation is put
/// entirely into `δ` (so `β = 0`).
pub fn zyz_angles(u: &Matrix) -> Result<ZyzAngles> {
    require_unitary_2x2(u)?;
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let alpha = det.arg() / 2.0;
    let unphase = Complex64::from_polar(1.0, -alpha);
    let v10 = u.get(1, 0) * unphase;
    let v00 = u.get(0, 0) * unphase;
    let v11 = u.get(1, 1) * unphase;
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    let (beta, delta) = if gamma < ANGLE_EPS {
        (0.0, 2.0 * v11.arg())
    } else if PI - gamma < ANGLE_EPS {
        (2.0 * v10.arg(), 0.0)
    } else {
        (v11.arg() + v10.arg(), v11.arg() - v10.arg())
    };
    Ok(ZyzAngles {
        alpha,
        beta,
        gamma,
        delta,
    })
}

fn push_rz(out: &mut Vec<(GateSpec, Vec<usize>)>, theta: f64, q: usize) {
    if theta.abs() > ANGLE_EPS {
        out.push((GateSpec::rz(theta), vec![q]));
    }
}

fn push_ry(out: &mut Vec<(GateSpec, Vec<usize>)>, theta: f64, q: usize) {
    if theta.abs() > ANGLE_EPS {
        for g in ry_via_rx(theta) {
            out.push((g, vec![q]));
        }
    }
}

/// Single-qubit sequence over `{rz, rx}`.
pub fn decompose_1q(u: &Matrix) -> Result<DecomposedSequence> {
    let a = zyz_angles(u)?;
    let mut gates = Vec::new();
    if a.gamma < ANGLE_EPS {
        push_rz(&mut gates, a.beta + a.delta, 0);
    } else {
        push_rz(&mut gates, a.delta, 0);
        push_ry(&mut gates, a.gamma, 0);
        push_rz(&mut gates, a.beta, 0);
    }
    Ok(DecomposedSequence {
        gates,
        global_phase: a.alpha,
        num_qubits: 1,
    })
}

/// The `A`, `B`, `C` factors of the controlled construction as matrices.
pub fn abc_factors(a: &ZyzAngles) -> [Matrix; 3] {
    let rz = |t: f64| GateSpec::rz(t).unitary().clone();
    let ry = |t: f64| GateSpec::ry(t).unitary().clone();
    let am = &rz(a.beta) * &ry(a.gamma / 2.0);
    let bm = &ry(-a.gamma / 2.0) * &rz(-(a.delta + a.beta) / 2.0);
    let cm = rz((a.delta - a.beta) / 2.0);
    [am, bm, cm]
}

/// Two-qubit sequence over `{rz, rx, cx}` for `controlled(U)`, control on
/// local qubit 0 and target on local qubit 1.
pub fn decompose_controlled(u: &Matrix) -> Result<DecomposedSequence> {
    let a = zyz_angles(u)?;
    let (ctrl, tgt) = (0, 1);
    let mut gates = Vec::new();
    // C
    push_rz(&mut gates, (a.delta - a.beta) / 2.0, tgt);
    gates.push((GateSpec::cx(), vec![ctrl, tgt]));
    // B, rightmost factor first
    push_rz(&mut gates, -(a.delta + a.beta) / 2.0, tgt);
    push_ry(&mut gates, -a.gamma / 2.0, tgt);
    gates.push((GateSpec::cx(), vec![ctrl, tgt]));
    // A
    push_ry(&mut gates, a.gamma / 2.0, tgt);
    push_rz(&mut gates, a.beta, tgt);
    // controlled phase e^{iα} = e^{iα/2}·RZ(α) on the control
    push_rz(&mut gates, a.alpha, ctrl);
    Ok(DecomposedSequence {
        gates,
        global_phase: a.alpha / 2.0,
        num_qubits: 2,
    })
}

/// Decomposes an arbitrary gate whose shape is supported: in-basis gates,
/// single-qubit gates, and singly-controlled single-qubit gates. The idle
/// gate `i` is kept as is.
pub fn decompose_gate(g: &GateSpec, basis: &[&str]) -> Result<DecomposedSequence> {
    if basis.contains(&g.name()) || g.name() == "i" {
        let args = (0..g.arity()).collect();
        return Ok(DecomposedSequence {
            gates: vec![(g.clone(), args)],
            global_phase: 0.0,
            num_qubits: g.arity(),
        });
    }
    match (g.arity(), g.control_base()) {
        (1, _) => decompose_1q(g.unitary()),
        (2, Some(base)) if base.arity() == 1 => decompose_controlled(base.unitary()),
        _ => Err(Error::UnsupportedGate(g.to_string())),
    }
}

fn check_basis(basis: &[&str]) -> Result<()> {
    for required in DEFAULT_BASIS {
        if !basis.contains(&required) {
            return Err(Error::IncompleteBasis(required.to_string()));
        }
    }
    Ok(())
}

/// Rewrites every gate of `c` (recursively through nested blocks) into
/// `basis`. Conditions, names and qubit counts are preserved; the global
/// phase each rewrite introduces is recorded on the owning circuit so the
/// result acts identically.
pub fn decompose_circuit(c: &ContractCircuit, basis: &[&str]) -> Result<ContractCircuit> {
    check_basis(basis)?;
    let mut instructions = Vec::new();
    let mut phase = 0.0;
    for ins in c.instructions() {
        match ins {
            Instruction::Gate { gate, qubits } => {
                let seq = decompose_gate(gate, basis)?;
                phase += seq.global_phase;
                for (g, local) in seq.gates {
                    let mapped = local.iter().map(|&q| qubits[q]).collect();
                    instructions.push(Instruction::Gate {
                        gate: g,
                        qubits: mapped,
                    });
                }
            }
            Instruction::Sub { circuit, qubits } => {
                instructions.push(Instruction::Sub {
                    circuit: decompose_circuit(circuit, basis)?.into(),
                    qubits: qubits.clone(),
                });
            }
        }
    }
    Ok(c.with_instructions(instructions, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::controlled;
    use crate::numerics::c;
    use crate::random::haar_unitary;
    use crate::simulator::apply_gate;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn zyz_product(a: &ZyzAngles) -> Matrix {
        let m = &(GateSpec::rz(a.beta).unitary() * GateSpec::ry(a.gamma).unitary())
            * GateSpec::rz(a.delta).unitary();
        m.scale(Complex64::from_polar(1.0, a.alpha))
    }

    #[test]
    fn zyz_of_h() {
        let a = zyz_angles(GateSpec::h().unitary()).unwrap();
        assert!(close(a.alpha, FRAC_PI_2) && close(a.beta, 0.0));
        assert!(close(a.gamma, FRAC_PI_2) && close(a.delta, PI), "{a:?}");
        assert!(zyz_product(&a).max_abs_diff(GateSpec::h().unitary()) < 1e-12);
    }

    #[test]
    fn zyz_of_t_and_identity() {
        let a = zyz_angles(GateSpec::t().unitary()).unwrap();
        assert!(
            close(a.alpha, PI / 8.)
                && a.beta == 0.0
                && close(a.gamma, 0.)
                && close(a.delta, PI / 4.)
        );
        let a = zyz_angles(&Matrix::identity(2)).unwrap();
        assert_eq!(
            a,
            ZyzAngles {
                alpha: 0.,
                beta: 0.,
                gamma: 0.,
                delta: 0.
            }
        );
    }

    #[test]
    fn zyz_rejects_non_unitary() {
        let m = Matrix::diagonal(&[c(1., 0.), c(0.5, 0.)]);
        assert!(matches!(zyz_angles(&m), Err(Error::NotUnitary(_))));
        assert!(decompose_1q(&m).is_err());
        assert!(decompose_controlled(&m).is_err());
    }

    #[test]
    fn zyz_gamma_pi_branch() {
        for u in [GateSpec::x(), GateSpec::y()] {
            let a = zyz_angles(u.unitary()).unwrap();
            assert!(close(a.gamma, PI));
            assert!(zyz_product(&a).max_abs_diff(u.unitary()) < 1e-12);
        }
    }

    #[test]
    fn decompose_1q_trivial_cases() {
        let seq = decompose_1q(&Matrix::identity(2)).unwrap();
        assert!(seq.gates.is_empty() && seq.global_phase == 0.0);
        let seq = decompose_1q(GateSpec::rz(0.3).unitary()).unwrap();
        assert_eq!(seq.gates, vec![(GateSpec::rz(0.3), vec![0])]);
        assert!(close(seq.global_phase, 0.0));
    }

    #[test]
    fn decompose_1q_haar_round_trip() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(2024);
        for _ in 0..100 {
            let u = haar_unitary(2, &mut rng);
            let seq = decompose_1q(&u).unwrap();
            assert!(seq
                .gates
                .iter()
                .all(|(g, _)| g.name() == "rz" || g.name() == "rx"));
            assert!(seq.reconstruct().unwrap().max_abs_diff(&u) < 1e-9);
        }
    }

    #[test]
    fn decompose_controlled_examples() {
        for (u, target) in [
            (GateSpec::x(), GateSpec::cx().unitary().clone()),
            (GateSpec::t(), controlled(&GateSpec::t()).unitary().clone()),
            (GateSpec::i(), Matrix::identity(4)),
        ] {
            let seq = decompose_controlled(u.unitary()).unwrap();
            assert!(seq
                .gates
                .iter()
                .all(|(g, _)| ["rz", "rx", "cx"].contains(&g.name())));
            let (err, _) = seq.reconstruct().unwrap().phase_aligned_diff(&target);
            assert!(err < 1e-9, "{u}: {err}");
            // phase is tracked exactly, not just up to a scalar
            assert!(seq.reconstruct().unwrap().max_abs_diff(&target) < 1e-9);
        }
    }

    #[test]
    fn abc_multiplies_to_identity() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(99);
        for _ in 0..50 {
            let a = zyz_angles(&haar_unitary(2, &mut rng)).unwrap();
            let [am, bm, cm] = abc_factors(&a);
            assert!((&(&am * &bm) * &cm).max_abs_diff(&Matrix::identity(2)) < 1e-9);
        }
    }

    #[test]
    fn decompose_circuit_keeps_basis_gates() {
        let mut circ = ContractCircuit::new(1).unwrap();
        circ.append_gate(GateSpec::h(), &[0]).unwrap();
        let out = decompose_circuit(&circ, &DEFAULT_BASIS).unwrap();
        assert_eq!(out.instructions().len(), 1);
        assert_eq!(out.global_phase(), 0.0);
    }

    #[test]
    fn decompose_circuit_t_to_rz() {
        let mut circ = ContractCircuit::new(1).unwrap();
        circ.append_gate(GateSpec::t(), &[0]).unwrap();
        let out = decompose_circuit(&circ, &DEFAULT_BASIS).unwrap();
        let (gates, phase) = out.flatten();
        assert_eq!(gates.len(), 1);
        assert_eq!(gates[0].0.name(), "rz");
        assert!(close(gates[0].0.params()[0], PI / 4.));
        assert!(close(phase, PI / 8.));
    }

    #[test]
    fn decompose_circuit_controlled_t_same_action() {
        let mut circ = ContractCircuit::new(2).unwrap();
        circ.append_gate(controlled(&GateSpec::t()), &[0, 1])
            .unwrap();
        circ.add_condition("kept", |_, _| Ok(true)).unwrap();
        let out = decompose_circuit(&circ, &DEFAULT_BASIS).unwrap();
        assert_eq!(out.condition_tags().collect::<Vec<_>>(), ["kept"]);
        assert_eq!(out.size(), 2);
        for k in 0..4 {
            let input = crate::numerics::StateVector::basis(2, k);
            let want = apply_gate(&input, &controlled(&GateSpec::t()), &[0, 1]).unwrap();
            let got = out.run_state(&input).unwrap();
            assert!(got.max_abs_diff(&want) < 1e-9);
        }
    }

    #[test]
    fn decompose_circuit_errors() {
        let mut circ = ContractCircuit::new(2).unwrap();
        circ.append_gate(GateSpec::swap(), &[0, 1]).unwrap();
        assert!(matches!(
            decompose_circuit(&circ, &DEFAULT_BASIS),
            Err(Error::UnsupportedGate(_))
        ));
        let mut circ = ContractCircuit::new(3).unwrap();
        circ.append_gate(controlled(&GateSpec::cx()), &[0, 1, 2])
            .unwrap();
        assert!(matches!(
            decompose_circuit(&circ, &DEFAULT_BASIS),
            Err(Error::UnsupportedGate(_))
        ));
        assert!(matches!(
            decompose_circuit(&ContractCircuit::new(1).unwrap(), &["h", "rx", "rz"]),
            Err(Error::IncompleteBasis(b)) if b == "cx"
        ));
    }

    #[test]
    fn identity_and_basis_gates_pass_through() {
        let mut circ = ContractCircuit::new(2).unwrap();
        circ.append_gate(GateSpec::i(), &[1]).unwrap();
        circ.append_gate(GateSpec::h(), &[0]).unwrap();
        let out = decompose_circuit(&circ, &DEFAULT_BASIS).unwrap();
        assert_eq!(out.flatten(), circ.flatten());
    }
}
