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

//! Statevector evolution and seeded final-measurement sampling.
//!
//! Sampling draws from a xoshiro256++ stream seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Each shot consumes one 64-bit word,
//! whose top 53 bits give a uniform `u ∈ [0, 1)`; the outcome is the first
//! table entry whose cumulative probability exceeds `u`. Counts are therefore
//! reproducible across builds and platforms for a fixed seed.

use std::collections::BTreeMap;
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::numerics::{c, check_indices, ComplexScalar, Matrix, StateVector};

/// Outcome histogram. Key character `j` is the result of the `j`-th measured
/// qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

impl Counts {
    pub fn from_map(counts: BTreeMap<String, u64>) -> Result<Self> {
        let width = counts.keys().next().map(String::len);
        if counts
            .keys()
            .any(|k| Some(k.len()) != width || k.chars().any(|ch| ch != '0' && ch != '1'))
        {
            return Err(Error::InvalidArgument(
                "counts keys must be equal-length bitstrings".into(),
            ));
        }
        let total_shots = counts.values().sum();
        Ok(Self {
            counts,
            total_shots,
        })
    }

    /// Count for `outcome`; absent outcomes read as 0.
    pub fn get(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    /// Number of measured qubits, if any outcome was recorded.
    pub fn width(&self) -> Option<usize> {
        self.counts.keys().next().map(String::len)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Most frequent outcome; ties go to the lexicographically smallest key.
    pub fn mode(&self) -> Option<&str> {
        let mut best: Option<(&str, u64)> = None;
        for (k, v) in self.iter() {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((k, v));
            }
        }
        best.map(|(k, _)| k)
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "\"{k}\": {v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub counts: Counts,
    pub pre_measure_state: StateVector,
    pub seed: u64,
}

/// Applies `g` to the listed qubits; the first listed qubit is the gate's
/// first (most significant) argument.
pub fn apply_gate(s: &StateVector, g: &GateSpec, qubits: &[usize]) -> Result<StateVector> {
    if qubits.len() != g.arity() {
        return Err(Error::ArityMismatch {
            gate: g.name().to_string(),
            expected: g.arity(),
            found: qubits.len(),
        });
    }
    let mut out = s.clone();
    apply_matrix_in_place(&mut out, g.unitary(), qubits)?;
    Ok(out)
}

pub(crate) fn apply_matrix_in_place(
    s: &mut StateVector,
    m: &Matrix,
    qubits: &[usize],
) -> Result<()> {
    check_indices(qubits, s.num_qubits())?;
    let k = qubits.len();
    if m.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            found: m.dim(),
        });
    }
    if k == 1 {
        apply_single(s.amps_mut(), m, qubits[0]);
        return Ok(());
    }
    let kd = 1usize << k;
    // offsets[l]: global index bits set by local index l
    let offsets: Vec<usize> = (0..kd)
        .map(|l| {
            qubits
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &q)| acc | (((l >> (k - 1 - i)) & 1) << q))
        })
        .collect();
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let amps = s.amps_mut();
    let mut local = vec![c(0., 0.); kd];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            local[l] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = c(0., 0.);
            for (col, v) in local.iter().enumerate() {
                acc += m.get(r, col) * v;
            }
            amps[base | off] = acc;
        }
    }
    Ok(())
}

fn apply_single(amps: &mut [ComplexScalar], m: &Matrix, q: usize) {
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let stride = 1usize << q;
    for block in (0..amps.len()).step_by(2 * stride) {
        for i in block..block + stride {
            let (a0, a1) = (amps[i], amps[i + stride]);
            amps[i] = m00 * a0 + m01 * a1;
            amps[i + stride] = m10 * a0 + m11 * a1;
        }
    }
}

/// Probability of each outcome on `qubits`; bit `j` of the table index is
/// the outcome of `qubits[j]`.
pub fn marginal_probabilities(s: &StateVector, qubits: &[usize]) -> Result<Vec<f64>> {
    check_indices(qubits, s.num_qubits())?;
    let mut probs = vec![0.0; 1 << qubits.len()];
    for (k, a) in s.amps().iter().enumerate() {
        let idx = qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (((k >> q) & 1) << j));
        probs[idx] += a.norm_sqr();
    }
    Ok(probs)
}

/// Renders table index `idx` as a key: character `j` is bit `j`.
pub fn outcome_key(idx: usize, width: usize) -> String {
    (0..width)
        .map(|j| if (idx >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draws `shots` outcomes from a probability table produced by
/// [`marginal_probabilities`].
pub fn sample_counts(probs: &[f64], shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if probs.is_empty() || !probs.len().is_power_of_two() {
        return Err(Error::InvalidProbabilities(format!(
            "table length {} is not a power of two",
            probs.len()
        )));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidProbabilities(
            "entries must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidProbabilities(format!(
            "entries sum to {total}"
        )));
    }
    let width = probs.len().trailing_zeros() as usize;
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut hist = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let idx = cdf.partition_point(|&x| x <= u).min(last_nonzero);
        hist[idx] += 1;
    }
    let counts = hist
        .into_iter()
        .enumerate()
        .filter(|(_, n)| *n > 0)
        .map(|(i, n)| (outcome_key(i, width), n))
        .collect();
    Ok(Counts {
        counts,
        total_shots: shots,
    })
}

/// Full register unitary of a gate list, built column by column.
pub fn sequence_unitary(gates: &[(GateSpec, Vec<usize>)], num_qubits: usize) -> Result<Matrix> {
    let n = 1usize << num_qubits;
    let mut data = vec![c(0., 0.); n * n];
    for col in 0..n {
        let mut s = StateVector::basis(num_qubits, col);
        for (g, qs) in gates {
            if qs.len() != g.arity() {
                return Err(Error::ArityMismatch {
                    gate: g.name().to_string(),
                    expected: g.arity(),
                    found: qs.len(),
                });
            }
            apply_matrix_in_place(&mut s, g.unitary(), qs)?;
        }
        for (row, a) in s.amps().iter().enumerate() {
            data[row * n + col] = *a;
        }
    }
    Matrix::new(n, data)
}
