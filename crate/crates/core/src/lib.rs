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

//! Statevector simulation of quantum circuits with runtime contracts.
//!
//! Circuits are built with [`ContractCircuit`]; tagged state conditions are
//! checked against each block's pre- and post-state on every run, and a
//! [`MeasuredCircuit`] adds sampling, postprocessing and measure conditions.
//! Qubit 0 is the least significant bit of an amplitude index.

pub mod algorithms;
pub mod contracts;
pub mod decompose;
pub mod dsl;
pub mod error;
pub mod expressions;
pub mod gates;
pub mod numerics;
pub mod random;
pub mod simulator;

pub use contracts::{
    Checking, ContractCircuit, Instruction, MeasuredCircuit, MeasuredRun, StateCondition,
};
pub use error::{ContractViolation, Error, Result, ViolationKind};
pub use expressions::{eq_state, partial_state, NamedState, OperatorExpr, StateExpr};
pub use gates::GateSpec;
pub use numerics::{ComplexScalar, DensityMatrix, Matrix, StateVector};
pub use simulator::{Counts, RunResult};
