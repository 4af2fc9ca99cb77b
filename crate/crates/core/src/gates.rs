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

//! Named gates, their unitaries, and the `controlled` / `adjoint` modifiers.
//!
//! Inside a multi-qubit gate matrix the first qubit argument is the most
//! significant bit, so `controlled(U) = [[I, 0], [0, U]]` with the control
//! listed first.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{c, kron, ComplexScalar, Matrix, UNITARY_TOL};

/// Canonical lowercase spellings of the catalog gates.
pub const CATALOG: &[&str] = &[
    "i", "x", "y", "z", "h", "s", "t", "p", "rx", "ry", "rz", "cx", "cz", "swap", "matrix",
];

const CONTROLLED_PREFIX: &str = "controlled-";
const ADJOINT_PREFIX: &str = "adjoint-";

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    name: String,
    params: Vec<f64>,
    arity: usize,
    unitary: Matrix,
    /// The single-target gate this one controls, for `cx`, `cz` and anything
    /// built by [`controlled`].
    control_base: Option<Box<GateSpec>>,
}

fn phase(theta: f64) -> ComplexScalar {
    Complex64::from_polar(1.0, theta)
}

fn m2(a: ComplexScalar, b: ComplexScalar, cc: ComplexScalar, d: ComplexScalar) -> Matrix {
    Matrix::from_raw(2, vec![a, b, cc, d])
}

impl GateSpec {
    fn fixed(name: &str, unitary: Matrix) -> Self {
        let arity = unitary.num_qubits();
        Self {
            name: name.to_string(),
            params: Vec::new(),
            arity,
            unitary,
            control_base: None,
        }
    }

    fn param(name: &str, theta: f64, unitary: Matrix) -> Self {
        Self {
            name: name.to_string(),
            params: vec![theta],
            arity: 1,
            unitary,
            control_base: None,
        }
    }

    pub fn i() -> Self {
        Self::fixed("i", Matrix::identity(2))
    }

    pub fn x() -> Self {
        let (o, l) = (c(0., 0.), c(1., 0.));
        Self::fixed("x", m2(o, l, l, o))
    }

    pub fn y() -> Self {
        let o = c(0., 0.);
        Self::fixed("y", m2(o, c(0., -1.), c(0., 1.), o))
    }

    pub fn z() -> Self {
        Self::fixed("z", Matrix::diagonal(&[c(1., 0.), c(-1., 0.)]))
    }

    pub fn h() -> Self {
        let (p, m) = (c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.));
        Self::fixed("h", m2(p, p, p, m))
    }

    pub fn s() -> Self {
        Self::fixed("s", Matrix::diagonal(&[c(1., 0.), c(0., 1.)]))
    }

    pub fn t() -> Self {
        Self::fixed("t", Matrix::diagonal(&[c(1., 0.), phase(FRAC_PI_4)]))
    }

    /// Phase gate `diag(1, e^{iλ})`.
    pub fn p(lambda: f64) -> Self {
        Self::param("p", lambda, Matrix::diagonal(&[c(1., 0.), phase(lambda)]))
    }

    pub fn rx(theta: f64) -> Self {
        let (co, si) = ((theta / 2.).cos(), (theta / 2.).sin());
        Self::param(
            "rx",
            theta,
            m2(c(co, 0.), c(0., -si), c(0., -si), c(co, 0.)),
        )
    }

    pub fn ry(theta: f64) -> Self {
        let (co, si) = ((theta / 2.).cos(), (theta / 2.).sin());
        Self::param("ry", theta, m2(c(co, 0.), c(-si, 0.), c(si, 0.), c(co, 0.)))
    }

    /// Symmetric rotation `diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn rz(theta: f64) -> Self {
        Self::param(
            "rz",
            theta,
            Matrix::diagonal(&[phase(-theta / 2.), phase(theta / 2.)]),
        )
    }

    pub fn cx() -> Self {
        let mut g = controlled(&Self::x());
        g.name = "cx".into();
        g
    }

    pub fn cz() -> Self {
        let mut g = controlled(&Self::z());
        g.name = "cz".into();
        g
    }

    pub fn swap() -> Self {
        let (o, l) = (c(0., 0.), c(1., 0.));
        #[rustfmt::skip]
        let data = vec![
            l, o, o, o,
            o, o, l, o,
            o, l, o, o,
            o, o, o, l,
        ];
        Self::fixed("swap", Matrix::from_raw(4, data))
    }

    /// A gate with an arbitrary user-supplied unitary.
    pub fn matrix(unitary: Matrix) -> Result<Self> {
        let err = unitary.unitarity_error();
        if err > UNITARY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self::fixed("matrix", unitary))
    }

    /// Resolves a gate by its canonical name, accepting any number of
    /// `controlled-` and `adjoint-` prefixes (`controlled-t`, `adjoint-s`).
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix(CONTROLLED_PREFIX) {
            return Ok(controlled(&Self::from_name(rest, params)?));
        }
        if let Some(rest) = lower.strip_prefix(ADJOINT_PREFIX) {
            return Ok(adjoint(&Self::from_name(rest, params)?));
        }
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "gate '{lower}' takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let g = match lower.as_str() {
            "i" | "id" => Self::i(),
            "x" => Self::x(),
            "y" => Self::y(),
            "z" => Self::z(),
            "h" => Self::h(),
            "s" => Self::s(),
            "t" => Self::t(),
            "cx" | "cnot" => Self::cx(),
            "cz" => Self::cz(),
            "swap" => Self::swap(),
            "p" | "rx" | "ry" | "rz" => {
                want(1)?;
                return Ok(match lower.as_str() {
                    "p" => Self::p(params[0]),
                    "rx" => Self::rx(params[0]),
                    "ry" => Self::ry(params[0]),
                    _ => Self::rz(params[0]),
                });
            }
            _ => return Err(Error::UnknownGate(name.to_string())),
        };
        want(0)?;
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn unitary(&self) -> &Matrix {
        &self.unitary
    }

    /// For a singly-controlled gate, the gate applied to the target.
    pub fn control_base(&self) -> Option<&GateSpec> {
        self.control_base.as_deref()
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| format!("{p}")).collect();
            write!(f, "({})", ps.join(", "))?;
        }
        Ok(())
    }
}

pub fn unitary_of(g: &GateSpec) -> &Matrix {
    g.unitary()
}

/// Adds one control qubit in front of `g`'s arguments.
pub fn controlled(g: &GateSpec) -> GateSpec {
    let dim = g.unitary.dim();
    let n = 2 * dim;
    let mut data = vec![c(0., 0.); n * n];
    for i in 0..dim {
        data[i * n + i] = c(1., 0.);
        for j in 0..dim {
            data[(dim + i) * n + dim + j] = g.unitary.get(i, j);
        }
    }
    GateSpec {
        name: format!("{CONTROLLED_PREFIX}{}", g.name),
        params: g.params.clone(),
        arity: g.arity + 1,
        unitary: Matrix::from_raw(n, data),
        control_base: Some(Box::new(g.clone())),
    }
}

/// The inverse gate. Rotations and phases negate their angle; Hermitian
/// catalog gates map to themselves.
pub fn adjoint(g: &GateSpec) -> GateSpec {
    if let Some(base) = &g.control_base {
        if g.name == "cx" || g.name == "cz" {
            return g.clone();
        }
        return controlled(&adjoint(base));
    }
    match g.name.as_str() {
        "i" | "x" | "y" | "z" | "h" | "swap" => g.clone(),
        "p" => GateSpec::p(-g.params[0]),
        "rx" => GateSpec::rx(-g.params[0]),
        "ry" => GateSpec::ry(-g.params[0]),
        "rz" => GateSpec::rz(-g.params[0]),
        "matrix" => GateSpec::fixed("matrix", g.unitary.dagger()),
        name => {
            let new_name = match name.strip_prefix(ADJOINT_PREFIX) {
                Some(inner) => inner.to_string(),
                None => format!("{ADJOINT_PREFIX}{name}"),
            };
            GateSpec {
                name: new_name,
                params: g.params.clone(),
                arity: g.arity,
                unitary: g.unitary.dagger(),
                control_base: None,
            }
        }
    }
}

/// `RY(θ) = RZ(π/2)·RX(θ)·RZ(−π/2)`, used to keep decompositions inside
/// the `{h, rx, rz, cx}` basis.
pub(crate) fn ry_via_rx(theta: f64) -> [GateSpec; 3] {
    [
        GateSpec::rz(-FRAC_PI_2),
        GateSpec::rx(theta),
        GateSpec::rz(FRAC_PI_2),
    ]
}

/// Embeds a gate matrix acting on the ordered `args` (first argument most
/// significant) into a full `num_qubits` register matrix. Used by tests and
/// diagnostics only; the simulator never materializes this.
pub fn embed(g: &Matrix, args: &[usize], num_qubits: usize) -> Matrix {
    let k = args.len();
    let n = 1usize << num_qubits;
    let mut data = vec![c(0., 0.); n * n];
    let local = |idx: usize| -> usize {
        args.iter()
            .enumerate()
            .fold(0, |acc, (i, &q)| acc | (((idx >> q) & 1) << (k - 1 - i)))
    };
    let mask: usize = args.iter().map(|&q| 1usize << q).sum();
    for col in 0..n {
        let lc = local(col);
        for lr in 0..(1 << k) {
            let mut row = col & !mask;
            for (i, &q) in args.iter().enumerate() {
                row |= ((lr >> (k - 1 - i)) & 1) << q;
            }
            data[row * n + col] = g.get(lr, lc);
        }
    }
    Matrix::from_raw(n, data)
}

/// `I^{⊗n}` as a gate matrix; handy for identity checks on register size.
pub fn identity_on(num_qubits: usize) -> Matrix {
    (1..num_qubits).fold(Matrix::identity(2), |acc, _| {
        kron(&acc, &Matrix::identity(2))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;
    use std::f64::consts::PI;

    #[test]
    fn t_matrix_matches_operator_literal() {
        let expect = Matrix::diagonal(&[c(1., 0.), phase(PI / 4.)]);
        assert!(GateSpec::t().unitary().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn h_and_rz_pi() {
        let h = GateSpec::h();
        let r = FRAC_1_SQRT_2;
        let expect =
            Matrix::from_rows(&[vec![c(r, 0.), c(r, 0.)], vec![c(r, 0.), c(-r, 0.)]]).unwrap();
        assert!(h.unitary().max_abs_diff(&expect) < 1e-15);
        let rz = GateSpec::rz(PI);
        let expect = Matrix::diagonal(&[c(0., -1.), c(0., 1.)]);
        assert!(rz.unitary().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn controlled_examples() {
        assert_eq!(
            controlled(&GateSpec::x()).unitary(),
            GateSpec::cx().unitary()
        );
        assert_eq!(
            controlled(&GateSpec::z()).unitary(),
            GateSpec::cz().unitary()
        );
        let ct = controlled(&GateSpec::t());
        let expect = Matrix::diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), phase(PI / 4.)]);
        assert!(ct.unitary().max_abs_diff(&expect) < 1e-15);
        assert_eq!(ct.arity(), 2);
        assert_eq!(ct.name(), "controlled-t");
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&GateSpec::h()).unitary(), GateSpec::h().unitary());
        let td = adjoint(&GateSpec::t());
        let expect = Matrix::diagonal(&[c(1., 0.), phase(-PI / 4.)]);
        assert!(td.unitary().max_abs_diff(&expect) < 1e-15);
        assert_eq!(adjoint(&GateSpec::rz(0.7)), GateSpec::rz(-0.7));
        let twice = adjoint(&adjoint(&GateSpec::t()));
        assert!(twice.unitary().max_abs_diff(GateSpec::t().unitary()) < 1e-12);
        assert_eq!(twice.name(), "t");
    }

    #[test]
    fn t_is_phase_times_symmetric_rz() {
        let rz = GateSpec::rz(PI / 4.).unitary().scale(phase(PI / 8.));
        assert!(rz.max_abs_diff(GateSpec::t().unitary()) < 1e-15);
    }

    #[test]
    fn ry_rewrite_identity() {
        for theta in [0.0, 0.3, -1.2, PI, 2.9] {
            let [a, b, cc] = ry_via_rx(theta);
            let m = &(cc.unitary() * b.unitary()) * a.unitary();
            assert!(m.max_abs_diff(GateSpec::ry(theta).unitary()) < 1e-14);
        }
    }

    #[test]
    fn catalog_unitarity_under_random_parameters() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        for _ in 0..200 {
            let theta = rng.random_range(-4.0 * PI..4.0 * PI);
            for g in [
                GateSpec::p(theta),
                GateSpec::rx(theta),
                GateSpec::ry(theta),
                GateSpec::rz(theta),
            ] {
                assert!(g.unitary().unitarity_error() < 1e-10, "{g}");
                assert!(controlled(&g).unitary().unitarity_error() < 1e-10);
                assert!(adjoint(&g).unitary().unitarity_error() < 1e-10);
            }
        }
        for name in CATALOG
            .iter()
            .filter(|n| !matches!(**n, "p" | "rx" | "ry" | "rz" | "matrix"))
        {
            let g = GateSpec::from_name(name, &[]).unwrap();
            assert!(g.unitary().unitarity_error() < 1e-10, "{name}");
            assert_eq!(g.unitary().dim(), 1 << g.arity());
        }
    }

    #[test]
    fn matrix_gate_rejects_non_unitary() {
        let m = Matrix::diagonal(&[c(1., 0.), c(2., 0.)]);
        assert!(matches!(GateSpec::matrix(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn from_name_resolves_modifiers_and_rejects_unknown() {
        let g = GateSpec::from_name("controlled-rz", &[0.5]).unwrap();
        assert_eq!(g.arity(), 2);
        assert_eq!(g.control_base().unwrap().name(), "rz");
        let a = GateSpec::from_name("adjoint-s", &[]).unwrap();
        assert!(
            a.unitary()
                .max_abs_diff(&Matrix::diagonal(&[c(1., 0.), c(0., -1.)]))
                < 1e-15
        );
        assert!(matches!(
            GateSpec::from_name("foo", &[]),
            Err(Error::UnknownGate(_))
        ));
        assert!(GateSpec::from_name("rx", &[]).is_err());
        assert!(GateSpec::from_name("h", &[1.0]).is_err());
    }

    #[test]
    fn embed_places_first_argument_on_msb() {
        // cx with control q0, target q1 maps |q1 q0> = |01> to |11>
        let m = embed(GateSpec::cx().unitary(), &[0, 1], 2);
        assert_eq!(m.get(3, 1), c(1., 0.));
        assert_eq!(m.get(2, 2), c(1., 0.));
        assert_eq!(identity_on(3), Matrix::identity(8));
    }
}
