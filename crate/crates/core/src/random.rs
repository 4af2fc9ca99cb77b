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

//! Seeded random states and unitaries for tests, benches and examples.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{c, ComplexScalar, Matrix, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix,
/// which already leaves `R` with a positive real diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let mut cols: Vec<Vec<ComplexScalar>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let proj: ComplexScalar = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let qi = cols[i].clone();
            for (x, q) in cols[j].iter_mut().zip(&qi) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    let mut data = vec![c(0., 0.); dim * dim];
    for (col, v) in cols.iter().enumerate() {
        for (row, x) in v.iter().enumerate() {
            data[row * dim + col] = *x;
        }
    }
    Matrix::new(dim, data).expect("dimension is a power of two")
}

/// Uniformly random normalized state.
pub fn random_state<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> StateVector {
    let amps: Vec<ComplexScalar> = (0..1usize << num_qubits).map(|_| gaussian(rng)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::new(amps.into_iter().map(|a| a / norm).collect()).expect("valid length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        for dim in [2, 4, 8] {
            assert!(haar_unitary(dim, &mut rng).unitarity_error() < 1e-12);
        }
    }

    #[test]
    fn random_states_are_normalized_and_seeded() {
        let a = random_state(3, &mut Xoshiro256PlusPlus::seed_from_u64(5));
        let b = random_state(3, &mut Xoshiro256PlusPlus::seed_from_u64(5));
        assert_eq!(a, b);
        assert!(a.is_normalized(1e-12));
    }
}
