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

//! Circuits carrying named state conditions, module-like nesting of those
//! circuits, and measurement with postprocessing contracts.
//!
//! Every run checks every condition: the top-level circuit's conditions see
//! the full initial and final register states, while a nested circuit's
//! conditions see the pure states of the qubits it was appended on,
//! extracted with [`partial_state`] right before and after the nested block
//! executes. Conditions are evaluated depth-first in registration order and
//! the first failure aborts the run.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ContractViolation, Error, Result, ViolationKind};
use crate::expressions::{partial_state, PURITY_TOL};
use crate::gates::GateSpec;
use crate::numerics::{check_indices, StateVector};
use crate::simulator::{
    apply_matrix_in_place, marginal_probabilities, sample_counts, Counts, RunResult,
};

/// `(pre_state, post_state) -> passed?`
pub type StatePredicate = dyn Fn(&StateVector, &StateVector) -> Result<bool> + Send + Sync;
/// `(pre_measure_state, counts, postprocessed value) -> passed?`
pub type MeasurePredicate<T> = dyn Fn(&StateVector, &Counts, &T) -> Result<bool> + Send + Sync;
pub type Postprocess<T> = dyn Fn(&Counts) -> Result<T> + Send + Sync;

#[derive(Clone)]
pub struct StateCondition {
    tag: String,
    predicate: Arc<StatePredicate>,
}

impl StateCondition {
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn check(&self, pre: &StateVector, post: &StateVector) -> Result<bool> {
        (self.predicate)(pre, post)
    }
}

impl fmt::Debug for StateCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateCondition")
            .field("tag", &self.tag)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum Instruction {
    Gate {
        gate: GateSpec,
        qubits: Vec<usize>,
    },
    Sub {
        circuit: Arc<ContractCircuit>,
        qubits: Vec<usize>,
    },
}

impl Instruction {
    pub fn qubits(&self) -> &[usize] {
        match self {
            Instruction::Gate { qubits, .. } | Instruction::Sub { qubits, .. } => qubits,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContractCircuit {
    name: String,
    size: usize,
    instructions: Vec<Instruction>,
    conditions: Vec<StateCondition>,
    global_phase: f64,
    purity_tol: f64,
}

/// Whether a run evaluates conditions. Disabling them is only useful for
/// comparing a circuit's raw action against another route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checking {
    Enabled,
    Disabled,
}

struct Frame<'a> {
    root: &'a str,
    path: Vec<usize>,
    checking: Checking,
}

impl Frame<'_> {
    fn violation(&self, kind: ViolationKind, tag: &str, detail: Option<String>) -> Error {
        ContractViolation {
            kind,
            tag: tag.to_string(),
            root: self.root.to_string(),
            path: self.path.clone(),
            detail,
        }
        .into()
    }
}

impl ContractCircuit {
    pub fn new(size: usize) -> Result<Self> {
        Self::named("circuit", size)
    }

    /// A circuit whose name roots the nesting path in violation reports.
    pub fn named(name: impl Into<String>, size: usize) -> Result<Self> {
        if size < 1 {
            return Err(Error::InvalidSize);
        }
        Ok(Self {
            name: name.into(),
            size,
            instructions: Vec::new(),
            conditions: Vec::new(),
            global_phase: 0.0,
            purity_tol: PURITY_TOL,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn conditions(&self) -> &[StateCondition] {
        &self.conditions
    }

    pub fn condition_tags(&self) -> impl Iterator<Item = &str> {
        self.conditions.iter().map(|c| c.tag.as_str())
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    /// Adds `phase` radians of global phase, applied at the end of each run.
    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    /// Purity threshold used when extracting the partial states handed to
    /// this circuit's conditions while it runs nested.
    pub fn set_purity_tolerance(&mut self, tol: f64) {
        self.purity_tol = tol;
    }

    pub fn append_gate(&mut self, gate: GateSpec, qubits: &[usize]) -> Result<()> {
        if qubits.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                gate: gate.name().to_string(),
                expected: gate.arity(),
                found: qubits.len(),
            });
        }
        check_indices(qubits, self.size)?;
        self.instructions.push(Instruction::Gate {
            gate,
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    /// Appends `sub` as a block acting on `qubits` (sub-circuit qubit `j` is
    /// parent qubit `qubits[j]`). The block's conditions are checked each
    /// time the parent runs.
    pub fn append_sub(&mut self, sub: &ContractCircuit, qubits: &[usize]) -> Result<()> {
        if qubits.len() != sub.size {
            return Err(Error::DimensionMismatch {
                expected: sub.size,
                found: qubits.len(),
            });
        }
        check_indices(qubits, self.size)?;
        self.instructions.push(Instruction::Sub {
            circuit: Arc::new(sub.clone()),
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    pub fn add_condition<F>(&mut self, tag: impl Into<String>, predicate: F) -> Result<()>
    where
        F: Fn(&StateVector, &StateVector) -> Result<bool> + Send + Sync + 'static,
    {
        let tag = tag.into();
        if self.conditions.iter().any(|c| c.tag == tag) {
            return Err(Error::DuplicateTag(tag));
        }
        self.conditions.push(StateCondition {
            tag,
            predicate: Arc::new(predicate),
        });
        Ok(())
    }

    /// Runs from `|0…0⟩`.
    pub fn run(&self) -> Result<StateVector> {
        self.run_state(&StateVector::zero(self.size))
    }

    pub fn run_state(&self, initial: &StateVector) -> Result<StateVector> {
        self.run_with(initial, Checking::Enabled)
    }

    pub fn run_with(&self, initial: &StateVector, checking: Checking) -> Result<StateVector> {
        if initial.num_qubits() != self.size {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.size,
                found: initial.dim(),
            });
        }
        let mut frame = Frame {
            root: &self.name,
            path: Vec::new(),
            checking,
        };
        let mut state = initial.clone();
        let identity: Vec<usize> = (0..self.size).collect();
        self.execute(&mut state, &identity, &mut frame)?;
        if checking == Checking::Enabled && !self.conditions.is_empty() {
            self.check_conditions(initial, &state, &frame)?;
        }
        Ok(state)
    }

    fn execute(&self, state: &mut StateVector, map: &[usize], frame: &mut Frame<'_>) -> Result<()> {
        for (idx, ins) in self.instructions.iter().enumerate() {
            match ins {
                Instruction::Gate { gate, qubits } => {
                    let global: Vec<usize> = qubits.iter().map(|&q| map[q]).collect();
                    apply_matrix_in_place(state, gate.unitary(), &global)?;
                }
                Instruction::Sub { circuit, qubits } => {
                    let global: Vec<usize> = qubits.iter().map(|&q| map[q]).collect();
                    frame.path.push(idx);
                    let checked =
                        frame.checking == Checking::Enabled && !circuit.conditions.is_empty();
                    let pre = checked.then(|| state.clone());
                    circuit.execute(state, &global, frame)?;
                    if let Some(pre) = pre {
                        circuit.check_nested(&pre, state, &global, frame)?;
                    }
                    frame.path.pop();
                }
            }
        }
        if self.global_phase != 0.0 {
            let k = Complex64::from_polar(1.0, self.global_phase);
            for a in state.amps_mut() {
                *a *= k;
            }
        }
        Ok(())
    }

    fn check_nested(
        &self,
        pre: &StateVector,
        post: &StateVector,
        global: &[usize],
        frame: &Frame<'_>,
    ) -> Result<()> {
        let extract = |s: &StateVector| {
            partial_state(s, global, self.purity_tol).map_err(|e| match e {
                Error::EntangledSubset { .. } => frame.violation(
                    ViolationKind::EntangledSubset,
                    &self.conditions[0].tag,
                    Some(e.to_string()),
                ),
                other => other,
            })
        };
        let pre = extract(pre)?;
        let post = extract(post)?;
        self.check_conditions(&pre, &post, frame)
    }

    fn check_conditions(
        &self,
        pre: &StateVector,
        post: &StateVector,
        frame: &Frame<'_>,
    ) -> Result<()> {
        for cond in &self.conditions {
            match cond.check(pre, post) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(frame.violation(ViolationKind::StateCondition, &cond.tag, None))
                }
                Err(e @ Error::EntangledSubset { .. }) => {
                    return Err(frame.violation(
                        ViolationKind::EntangledSubset,
                        &cond.tag,
                        Some(e.to_string()),
                    ))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Same circuit with a replaced instruction list and extra global phase.
    pub(crate) fn with_instructions(
        &self,
        instructions: Vec<Instruction>,
        extra_phase: f64,
    ) -> Self {
        Self {
            instructions,
            global_phase: self.global_phase + extra_phase,
            ..self.clone()
        }
    }

    /// The gate list obtained by inlining every nested block, and the total
    /// global phase.
    pub fn flatten(&self) -> (Vec<(GateSpec, Vec<usize>)>, f64) {
        let mut gates = Vec::new();
        let identity: Vec<usize> = (0..self.size).collect();
        let phase = self.flatten_into(&identity, &mut gates);
        (gates, phase)
    }

    fn flatten_into(&self, map: &[usize], out: &mut Vec<(GateSpec, Vec<usize>)>) -> f64 {
        let mut phase = self.global_phase;
        for ins in &self.instructions {
            let global: Vec<usize> = ins.qubits().iter().map(|&q| map[q]).collect();
            match ins {
                Instruction::Gate { gate, .. } => out.push((gate.clone(), global)),
                Instruction::Sub { circuit, .. } => phase += circuit.flatten_into(&global, out),
            }
        }
        phase
    }

    /// Number of gate instructions after inlining nested blocks.
    pub fn gate_count(&self) -> usize {
        self.flatten().0.len()
    }

    /// Wraps this circuit with a final measurement of `qubits` (counts keys
    /// list outcomes in this order) and a postprocess function.
    pub fn measure<T, F>(&self, qubits: &[usize], postprocess: F) -> Result<MeasuredCircuit<T>>
    where
        F: Fn(&Counts) -> Result<T> + Send + Sync + 'static,
    {
        if qubits.is_empty() {
            return Err(Error::EmptyMeasurement);
        }
        check_indices(qubits, self.size)?;
        Ok(MeasuredCircuit {
            circuit: self.clone(),
            measured_qubits: qubits.to_vec(),
            postprocess: Arc::new(postprocess),
            conditions: Vec::new(),
        })
    }
}

/// A circuit plus its final measurement, postprocess and measure conditions.
pub struct MeasuredCircuit<T> {
    circuit: ContractCircuit,
    measured_qubits: Vec<usize>,
    postprocess: Arc<Postprocess<T>>,
    conditions: Vec<(String, Arc<MeasurePredicate<T>>)>,
}

impl<T> Clone for MeasuredCircuit<T> {
    fn clone(&self) -> Self {
        Self {
            circuit: self.circuit.clone(),
            measured_qubits: self.measured_qubits.clone(),
            postprocess: Arc::clone(&self.postprocess),
            conditions: self.conditions.clone(),
        }
    }
}

impl<T> fmt::Debug for MeasuredCircuit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasuredCircuit")
            .field("circuit", &self.circuit)
            .field("measured_qubits", &self.measured_qubits)
            .field(
                "conditions",
                &self.conditions.iter().map(|(t, _)| t).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Everything a measured run produced.
#[derive(Debug, Clone)]
pub struct MeasuredRun<T> {
    pub value: T,
    pub result: RunResult,
}

impl<T> MeasuredCircuit<T> {
    pub fn circuit(&self) -> &ContractCircuit {
        &self.circuit
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured_qubits
    }

    pub fn condition_tags(&self) -> impl Iterator<Item = &str> {
        self.conditions.iter().map(|(t, _)| t.as_str())
    }

    pub fn add_condition<F>(&mut self, tag: impl Into<String>, predicate: F) -> Result<()>
    where
        F: Fn(&StateVector, &Counts, &T) -> Result<bool> + Send + Sync + 'static,
    {
        let tag = tag.into();
        if self.conditions.iter().any(|(t, _)| *t == tag) {
            return Err(Error::DuplicateTag(tag));
        }
        self.conditions.push((tag, Arc::new(predicate)));
        Ok(())
    }

    /// Runs from `|0…0⟩` and returns the postprocessed value and the counts.
    pub fn run(&self, shots: u64, seed: u64) -> Result<(T, Counts)> {
        let out = self.run_from(&StateVector::zero(self.circuit.size), shots, seed)?;
        Ok((out.value, out.result.counts))
    }

    pub fn run_from(&self, initial: &StateVector, shots: u64, seed: u64) -> Result<MeasuredRun<T>> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let state = self.circuit.run_state(initial)?;
        let probs = marginal_probabilities(&state, &self.measured_qubits)?;
        let counts = sample_counts(&probs, shots, seed)?;
        let frame = Frame {
            root: &self.circuit.name,
            path: Vec::new(),
            checking: Checking::Enabled,
        };
        let value = (self.postprocess)(&counts).map_err(|e| {
            frame.violation(
                ViolationKind::Postprocess,
                "postprocess",
                Some(e.to_string()),
            )
        })?;
        for (tag, predicate) in &self.conditions {
            if !predicate(&state, &counts, &value)? {
                return Err(frame.violation(ViolationKind::MeasureCondition, tag, None));
            }
        }
        Ok(MeasuredRun {
            value,
            result: RunResult {
                counts,
                pre_measure_state: state,
                seed,
            },
        })
    }
}
