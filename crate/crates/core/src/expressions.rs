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

//! Symbolic state and operator expressions used to write assertions, plus
//! the `partial_state` / `eq_state` helpers conditions are built from.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::numerics::{
    c, inner, kron, split_amplitudes, tensor_states, ComplexScalar, Matrix, StateVector,
};

/// Default fidelity tolerance for [`eq_state`].
pub const EQ_STATE_TOL: f64 = 1e-8;
/// Default purity tolerance for [`partial_state`].
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    Zero,
    One,
    Plus,
    Minus,
}

impl NamedState {
    pub fn from_label(label: char) -> Option<Self> {
        match label {
            '0' => Some(NamedState::Zero),
            '1' => Some(NamedState::One),
            '+' => Some(NamedState::Plus),
            '-' => Some(NamedState::Minus),
            _ => None,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "zero" => Some(NamedState::Zero),
            "one" => Some(NamedState::One),
            "plus" => Some(NamedState::Plus),
            "minus" => Some(NamedState::Minus),
            _ => None,
        }
    }

    pub fn label(self) -> char {
        match self {
            NamedState::Zero => '0',
            NamedState::One => '1',
            NamedState::Plus => '+',
            NamedState::Minus => '-',
        }
    }

    pub fn vector(self) -> StateVector {
        let r = FRAC_1_SQRT_2;
        let amps = match self {
            NamedState::Zero => vec![c(1., 0.), c(0., 0.)],
            NamedState::One => vec![c(0., 0.), c(1., 0.)],
            NamedState::Plus => vec![c(r, 0.), c(r, 0.)],
            NamedState::Minus => vec![c(r, 0.), c(-r, 0.)],
        };
        StateVector::from_raw(1, amps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateExpr {
    /// Product of single-qubit labels, leftmost label on the highest qubit.
    Ket(Vec<NamedState>),
    Named(NamedState),
    Vector(Arc<StateVector>),
    Scaled(ComplexScalar, Box<StateExpr>),
    Sum(Box<StateExpr>, Box<StateExpr>),
    Tensor(Box<StateExpr>, Box<StateExpr>),
    Apply(Box<OperatorExpr>, Box<StateExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    Gate(GateSpec),
    Matrix(Arc<Matrix>),
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Scaled(ComplexScalar, Box<OperatorExpr>),
    Tensor(Box<OperatorExpr>, Box<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
}

impl StateExpr {
    pub fn vector(v: StateVector) -> Self {
        StateExpr::Vector(Arc::new(v))
    }

    pub fn scaled(self, k: ComplexScalar) -> Self {
        StateExpr::Scaled(k, Box::new(self))
    }

    pub fn plus(self, rhs: StateExpr) -> Self {
        StateExpr::Sum(Box::new(self), Box::new(rhs))
    }

    pub fn minus(self, rhs: StateExpr) -> Self {
        self.plus(rhs.scaled(c(-1., 0.)))
    }

    /// `self ⊗ rhs`; `rhs` occupies the lower qubits.
    pub fn tensor(self, rhs: StateExpr) -> Self {
        StateExpr::Tensor(Box::new(self), Box::new(rhs))
    }

    pub fn eval(&self) -> Result<StateVector> {
        eval_state(self)
    }
}

impl OperatorExpr {
    pub fn matrix(m: Matrix) -> Self {
        OperatorExpr::Matrix(Arc::new(m))
    }

    pub fn apply(self, s: StateExpr) -> StateExpr {
        StateExpr::Apply(Box::new(self), Box::new(s))
    }

    pub fn compose(self, rhs: OperatorExpr) -> Self {
        OperatorExpr::Compose(Box::new(self), Box::new(rhs))
    }

    pub fn eval(&self) -> Result<Matrix> {
        eval_operator(self)
    }
}

pub fn eval_state(e: &StateExpr) -> Result<StateVector> {
    match e {
        StateExpr::Ket(labels) => {
            let mut iter = labels.iter();
            let first = iter
                .next()
                .ok_or_else(|| Error::InvalidArgument("empty ket".into()))?;
            Ok(iter.fold(first.vector(), |acc, l| tensor_states(&acc, &l.vector())))
        }
        StateExpr::Named(n) => Ok(n.vector()),
        StateExpr::Vector(v) => Ok((**v).clone()),
        StateExpr::Scaled(k, inner) => Ok(eval_state(inner)?.scale(*k)),
        StateExpr::Sum(a, b) => eval_state(a)?.try_add(&eval_state(b)?),
        StateExpr::Tensor(a, b) => Ok(tensor_states(&eval_state(a)?, &eval_state(b)?)),
        StateExpr::Apply(op, s) => eval_operator(op)?.apply(&eval_state(s)?),
    }
}

pub fn eval_operator(e: &OperatorExpr) -> Result<Matrix> {
    match e {
        OperatorExpr::Gate(g) => Ok(g.unitary().clone()),
        OperatorExpr::Matrix(m) => Ok((**m).clone()),
        OperatorExpr::Compose(a, b) => eval_operator(a)?.try_matmul(&eval_operator(b)?),
        OperatorExpr::Sum(a, b) => eval_operator(a)?.try_add(&eval_operator(b)?),
        OperatorExpr::Scaled(k, a) => Ok(eval_operator(a)?.scale(*k)),
        OperatorExpr::Tensor(a, b) => Ok(kron(&eval_operator(a)?, &eval_operator(b)?)),
        OperatorExpr::Adjoint(a) => Ok(eval_operator(a)?.dagger()),
    }
}

/// `⟨ψ|Op|ψ⟩` for a normalized `ψ`.
pub fn expectation(psi: &StateExpr, op: &OperatorExpr) -> Result<ComplexScalar> {
    let v = eval_state(psi)?;
    let n2 = v.norm_sqr();
    if (n2 - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(n2));
    }
    let m = eval_operator(op)?;
    inner(&v, &m.apply(&v)?)
}

/// Pure state of the `keep` qubits (bit `j` of the result is `keep[j]`),
/// defined only when they are unentangled from the rest of the register.
///
/// The returned vector has its global phase fixed so that the first amplitude
/// with modulus above `1e-9` is real and positive.
pub fn partial_state(s: &StateVector, keep: &[usize], purity_tol: f64) -> Result<StateVector> {
    let (rows, kd, ed) = split_amplitudes(s, keep)?;
    let p = split_purity(&rows, kd, ed);
    if p < 1.0 - purity_tol {
        return Err(Error::EntangledSubset {
            purity: p,
            tolerance: purity_tol,
        });
    }
    let top = dominant_eigenvector(&rows, kd, ed);
    Ok(StateVector::from_raw(keep.len(), top).with_canonical_phase())
}

/// `tr(ρ²)` from whichever Gram matrix of the rows is smaller.
fn split_purity(rows: &[ComplexScalar], kd: usize, ed: usize) -> f64 {
    let row = |e: usize| &rows[e * kd..(e + 1) * kd];
    if ed <= kd {
        let mut total = 0.0;
        for e in 0..ed {
            for f in 0..ed {
                let g: ComplexScalar = row(e).iter().zip(row(f)).map(|(a, b)| a * b.conj()).sum();
                total += g.norm_sqr();
            }
        }
        total
    } else {
        let mut rho = vec![c(0., 0.); kd * kd];
        for e in 0..ed {
            let b = row(e);
            for r in 0..kd {
                if b[r] != c(0., 0.) {
                    for col in 0..kd {
                        rho[r * kd + col] += b[r] * b[col].conj();
                    }
                }
            }
        }
        rho.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Power iteration on `ρ v = Σ_e b_e (b_eᴴ v)`, started from the heaviest row.
fn dominant_eigenvector(rows: &[ComplexScalar], kd: usize, ed: usize) -> Vec<ComplexScalar> {
    let row = |e: usize| &rows[e * kd..(e + 1) * kd];
    let weight = |e: usize| row(e).iter().map(|a| a.norm_sqr()).sum::<f64>();
    let start = (0..ed)
        .max_by(|&a, &b| weight(a).total_cmp(&weight(b)))
        .unwrap_or(0);
    let normalize = |v: &mut Vec<ComplexScalar>| {
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            v.iter_mut().for_each(|a| *a /= n);
        }
    };
    let mut v = row(start).to_vec();
    normalize(&mut v);
    for _ in 0..100 {
        let mut w = vec![c(0., 0.); kd];
        for e in 0..ed {
            let b = row(e);
            let overlap: ComplexScalar = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            if overlap != c(0., 0.) {
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi += bi * overlap);
            }
        }
        normalize(&mut w);
        let change = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        v = w;
        if change < 1e-15 {
            break;
        }
    }
    v
}

/// Global-phase-insensitive equality: `|⟨a|b⟩|² ≥ 1 − tol`.
pub fn eq_state(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    for s in [a, b] {
        if !s.is_normalized(1e-6) {
            return Err(Error::NotNormalized(s.norm_sqr()));
        }
    }
    Ok(fidelity(a, b)? >= 1.0 - tol)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner(a, b)?.norm_sqr())
}

/// The state `((ψ + Uψ)/2) ⊗ |0⟩ + ((ψ − Uψ)/2) ⊗ |1⟩` a Hadamard test leaves
/// behind, with the ancilla as qubit 0.
pub fn hadamard_test_state(psi: &StateVector, u: &OperatorExpr) -> StateExpr {
    let psi = StateExpr::vector(psi.clone());
    let u_psi = u.clone().apply(psi.clone());
    let half = c(0.5, 0.);
    let state0 = psi
        .clone()
        .plus(u_psi.clone())
        .scaled(half)
        .tensor(StateExpr::Named(NamedState::Zero));
    let state1 = psi
        .minus(u_psi)
        .scaled(half)
        .tensor(StateExpr::Named(NamedState::One));
    state0.plus(state1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::apply_gate;
    use std::f64::consts::PI;

    fn ket(labels: &str) -> StateExpr {
        StateExpr::Ket(
            labels
                .chars()
                .map(|ch| NamedState::from_label(ch).unwrap())
                .collect(),
        )
    }

    #[test]
    fn sum_of_halves_is_zero_ket() {
        let half = c(0.5, 0.);
        let e = ket("0").scaled(half).plus(ket("0").scaled(half));
        assert!(e.eval().unwrap().max_abs_diff(&StateVector::zero(1)) < 1e-15);
    }

    #[test]
    fn tensor_one_zero() {
        let v = ket("1").tensor(ket("0")).eval().unwrap();
        assert_eq!(v.amps(), StateVector::basis(2, 2).amps());
        assert_eq!(ket("10").eval().unwrap(), v);
    }

    #[test]
    fn hadamard_test_expression_matches_simulation() {
        let plus = NamedState::Plus.vector();
        let expr = hadamard_test_state(&plus, &OperatorExpr::Gate(GateSpec::t()));
        let v = expr.eval().unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);

        let mut s = tensor_states(&plus, &StateVector::zero(1));
        s = apply_gate(&s, &GateSpec::h(), &[0]).unwrap();
        s = apply_gate(&s, &crate::gates::controlled(&GateSpec::t()), &[0, 1]).unwrap();
        s = apply_gate(&s, &GateSpec::h(), &[0]).unwrap();
        assert!(eq_state(&s, &v, EQ_STATE_TOL).unwrap());
        assert!(s.max_abs_diff(&v) < 1e-12);
    }

    #[test]
    fn expectation_examples() {
        let t = OperatorExpr::Gate(GateSpec::t());
        let e = expectation(&ket("+"), &t).unwrap();
        let expect = (c(1., 0.) + ComplexScalar::from_polar(1.0, PI / 4.)) / 2.0;
        assert!((e - expect).norm() < 1e-15);
        assert!((e.re - 0.8535534).abs() < 1e-7);
        let z = OperatorExpr::Gate(GateSpec::z());
        assert!((expectation(&ket("0"), &z).unwrap() - c(1., 0.)).norm() < 1e-15);
        assert!(expectation(&ket("+"), &z).unwrap().norm() < 1e-15);
        let unnormalized = ket("0").scaled(c(2., 0.));
        assert!(matches!(
            expectation(&unnormalized, &z),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            expectation(&ket("00"), &z),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_state_examples() {
        let s = ket("+0").eval().unwrap();
        let got = partial_state(&s, &[1], PURITY_TOL).unwrap();
        assert!(got.max_abs_diff(&NamedState::Plus.vector()) < 1e-12);

        let bell = StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
            c(0., 0.),
            c(FRAC_1_SQRT_2, 0.),
        ])
        .unwrap();
        match partial_state(&bell, &[0], PURITY_TOL) {
            Err(Error::EntangledSubset { purity, .. }) => assert!((purity - 0.5).abs() < 1e-12),
            other => panic!("expected entangled error, got {other:?}"),
        }

        let one = StateVector::new(vec![c(0., 0.6), c(0.8, 0.)]).unwrap();
        let got = partial_state(&one, &[0], PURITY_TOL).unwrap();
        assert!(eq_state(&got, &one, 1e-12).unwrap());
        assert!(got.amps()[0].im.abs() < 1e-12 && got.amps()[0].re > 0.0);
    }

    #[test]
    fn eq_state_examples() {
        let z = StateVector::zero(1);
        for theta in [0.0, 0.4, PI, -2.0] {
            let rotated = z.scale(ComplexScalar::from_polar(1.0, theta));
            assert!(eq_state(&z, &rotated, EQ_STATE_TOL).unwrap());
        }
        assert!(!eq_state(&z, &StateVector::basis(1, 1), EQ_STATE_TOL).unwrap());
        assert!(eq_state(&z, &StateVector::zero(2), EQ_STATE_TOL).is_err());
        assert!(eq_state(&z, &z.scale(c(2., 0.)), EQ_STATE_TOL).is_err());
    }

    #[test]
    fn operator_tree_evaluation() {
        let x = OperatorExpr::Gate(GateSpec::x());
        let xx = x.clone().compose(x.clone()).eval().unwrap();
        assert!(xx.max_abs_diff(&Matrix::identity(2)) < 1e-15);
        let xi = OperatorExpr::Tensor(
            Box::new(x.clone()),
            Box::new(OperatorExpr::Gate(GateSpec::i())),
        );
        let out = xi.apply(ket("00")).eval().unwrap();
        assert_eq!(out, ket("10").eval().unwrap());
        let adj = OperatorExpr::Adjoint(Box::new(OperatorExpr::Gate(GateSpec::s())));
        assert!(
            adj.eval()
                .unwrap()
                .max_abs_diff(GateSpec::from_name("adjoint-s", &[]).unwrap().unitary())
                < 1e-15
        );
        let bad = OperatorExpr::Gate(GateSpec::cx()).apply(ket("0"));
        assert!(matches!(bad.eval(), Err(Error::DimensionMismatch { .. })));
    }
}
