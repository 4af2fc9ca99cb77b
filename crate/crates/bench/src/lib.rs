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

//! Workloads shared by the benchmarks.

use qcontract::{ContractCircuit, GateSpec, Result};

/// `layers` rounds of H on every qubit, a CX ladder and an RZ per qubit.
pub fn layered_circuit(num_qubits: usize, layers: usize) -> Result<ContractCircuit> {
    let mut circ = ContractCircuit::named("layered", num_qubits)?;
    for layer in 0..layers {
        for q in 0..num_qubits {
            circ.append_gate(GateSpec::h(), &[q])?;
        }
        for q in 0..num_qubits.saturating_sub(1) {
            circ.append_gate(GateSpec::cx(), &[q, q + 1])?;
        }
        for q in 0..num_qubits {
            circ.append_gate(
                GateSpec::rz(0.1 * (layer * num_qubits + q + 1) as f64),
                &[q],
            )?;
        }
    }
    Ok(circ)
}

/// The same layered circuit wrapped in a block carrying a norm condition.
pub fn checked_circuit(num_qubits: usize, layers: usize) -> Result<ContractCircuit> {
    let body = layered_circuit(num_qubits, layers)?;
    let mut inner = body.clone().with_name("checked");
    inner.add_condition("norm", |_, post| Ok((post.norm() - 1.0).abs() < 1e-9))?;
    let mut outer = ContractCircuit::named("outer", num_qubits)?;
    let all: Vec<usize> = (0..num_qubits).collect();
    outer.append_sub(&inner, &all)?;
    Ok(outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build_and_run() {
        let c = layered_circuit(4, 2).unwrap();
        assert_eq!(c.gate_count(), 2 * (4 + 3 + 4));
        assert!((checked_circuit(4, 2).unwrap().run().unwrap().norm() - 1.0).abs() < 1e-12);
    }
}
