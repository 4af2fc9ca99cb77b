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

//! Dense complex linear algebra for small registers.
//!
//! Amplitude index `k` encodes qubit `i` as bit `i` of `k`, so qubit 0 is the
//! least significant bit. In a tensor product `a ⊗ b` the right factor `b`
//! occupies the lower qubit indices.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

pub const NORM_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// Builds a scalar, rejecting NaN and infinities.
pub fn checked_scalar(re: f64, im: f64) -> Result<ComplexScalar> {
    if re.is_finite() && im.is_finite() {
        Ok(c(re, im))
    } else {
        Err(Error::NonFinite("complex scalar"))
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

pub(crate) fn check_indices(indices: &[usize], size: usize) -> Result<()> {
    for (pos, &q) in indices.iter().enumerate() {
        if q >= size {
            return Err(Error::QubitOutOfRange { index: q, size });
        }
        if indices[..pos].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// A (possibly subnormalized) pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<ComplexScalar>,
}

impl StateVector {
    pub fn new(amps: Vec<ComplexScalar>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        Ok(Self { num_qubits, amps })
    }

    /// Like [`StateVector::new`] but also requires unit norm within
    /// [`NORM_TOL`].
    pub fn normalized(amps: Vec<ComplexScalar>) -> Result<Self> {
        let s = Self::new(amps)?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(num_qubits >= 1, "state needs at least one qubit");
        let mut amps = vec![c(0.0, 0.0); 1 << num_qubits];
        amps[index] = c(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub(crate) fn from_raw(num_qubits: usize, amps: Vec<ComplexScalar>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[ComplexScalar] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [ComplexScalar] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<ComplexScalar> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn scale(&self, k: ComplexScalar) -> Self {
        Self::from_raw(self.num_qubits, self.amps.iter().map(|a| a * k).collect())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
    ) -> Result<Self> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_raw(self.num_qubits, amps))
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies by a global phase so that the first amplitude with modulus
    /// above `1e-9` is real and positive.
    pub fn with_canonical_phase(&self) -> Self {
        match self.amps.iter().find(|a| a.norm() > 1e-9) {
            Some(first) => {
                let phase = first.conj() / first.norm();
                self.scale(phase)
            }
            None => self.clone(),
        }
    }
}

/// Tensor product `a ⊗ b`; `b` takes the lower qubit indices.
pub fn tensor_states(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for &x in &a.amps {
        for &y in &b.amps {
            amps.push(x * y);
        }
    }
    StateVector::from_raw(a.num_qubits + b.num_qubits, amps)
}

/// `⟨a|b⟩ = Σ conj(a_k) b_k`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<ComplexScalar> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// A dense square complex matrix whose dimension is a power of two, stored
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if dim < 1 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            let bad = rows.iter().find(|r| r.len() != dim).map_or(0, Vec::len);
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad,
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![c(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[ComplexScalar]) -> Self {
        let dim = diag.len();
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = d;
        }
        Self { dim, data }
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<ComplexScalar>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut data = vec![c(0.0, 0.0); n * n];
        for r in 0..n {
            for col in 0..n {
                data[col * n + r] = self.data[r * n + col].conj();
            }
        }
        Self { dim: n, data }
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut data = vec![c(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == c(0.0, 0.0) {
                    continue;
                }
                for col in 0..n {
                    data[r * n + col] += a * other.data[k * n + col];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn scale(&self, k: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if self.dim != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: s.dim(),
            });
        }
        let n = self.dim;
        let amps = (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(s.amps())
                    .map(|(m, a)| m * a)
                    .sum()
            })
            .collect();
        Ok(StateVector::from_raw(s.num_qubits(), amps))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.dagger() * self;
        prod.max_abs_diff(&Matrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Smallest `max |e^{iφ}·self − other|` over a single phase `φ`, with the
    /// phase taken from the largest entry of `other`. Returns `(error, φ)`.
    pub fn phase_aligned_diff(&self, other: &Self) -> (f64, f64) {
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, v)| {
                if v.norm() > best.1 {
                    (i, v.norm())
                } else {
                    best
                }
            });
        let a = self.data[idx];
        let b = other.data[idx];
        let phase = if a.norm() > 0.0 { (b / a).arg() } else { 0.0 };
        let aligned = self.scale(Complex64::from_polar(1.0, phase));
        (aligned.max_abs_diff(other), phase)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &rhs.scale(c(-1.0, 0.0))
    }
}

/// Kronecker product `a ⊗ b` with `b` on the lower indices.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut data = vec![c(0.0, 0.0); n * n];
    for ar in 0..na {
        for ac in 0..na {
            let x = a.get(ar, ac);
            if x == c(0.0, 0.0) {
                continue;
            }
            for br in 0..nb {
                for bc in 0..nb {
                    data[(ar * nb + br) * n + ac * nb + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    Matrix::from_raw(n, data)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let herm = m.max_abs_diff(&m.dagger());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr: f64 = (0..m.dim()).map(|i| m.get(i, i).re).sum();
        if (tr - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let rho = DensityMatrix(m);
        let (values, _) = rho.eigen();
        if let Some(&min) = values.first() {
            if min < -HERMITIAN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Eigenvalues in ascending order with their eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<ComplexScalar>>) {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |r, col| self.0.get(r, col));
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        (values, vectors)
    }
}

/// Amplitudes regrouped as rows `b_e` (one per environment index `e`) over
/// the kept-qubit index, so that `ρ = Σ_e b_e b_eᴴ`. Returns
/// `(rows, kept_dim, env_dim)`.
pub(crate) fn split_amplitudes(
    s: &StateVector,
    keep: &[usize],
) -> Result<(Vec<ComplexScalar>, usize, usize)> {
    check_indices(keep, s.num_qubits())?;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("no qubits to keep".into()));
    }
    let n = s.num_qubits();
    let env: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kd = 1usize << keep.len();
    let ed = 1usize << env.len();
    let mut rows = vec![c(0.0, 0.0); ed * kd];
    for (k, &amp) in s.amps().iter().enumerate() {
        let r = keep
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (((k >> q) & 1) << j));
        let e = env
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (((k >> q) & 1) << j));
        rows[e * kd + r] = amp;
    }
    Ok((rows, kd, ed))
}

/// Partial trace over every qubit not listed in `keep`; bit `j` of the
/// result's row and column index is qubit `keep[j]`.
pub fn reduced_density(s: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let (rows, kd, ed) = split_amplitudes(s, keep)?;
    let mut data = vec![c(0.0, 0.0); kd * kd];
    for e in 0..ed {
        let row = &rows[e * kd..(e + 1) * kd];
        for r in 0..kd {
            if row[r] == c(0.0, 0.0) {
                continue;
            }
            for col in 0..kd {
                data[r * kd + col] += row[r] * row[col].conj();
            }
        }
    }
    Ok(DensityMatrix(Matrix::from_raw(kd, data)))
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    rho.0.data().iter().map(|a| a.norm_sqr()).sum()
}
