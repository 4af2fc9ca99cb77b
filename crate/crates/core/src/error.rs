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

use std::fmt;

/// The ways a contract can be broken while a circuit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A state condition returned `false`.
    StateCondition,
    /// A measure condition returned `false`.
    MeasureCondition,
    /// The qubits of a contract-bearing sub-circuit were entangled with the
    /// rest of the register when its condition had to be evaluated.
    EntangledSubset,
    /// The postprocess function of a measured circuit failed.
    Postprocess,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::StateCondition => "StateConditionError",
            ViolationKind::MeasureCondition => "MeasureConditionError",
            ViolationKind::EntangledSubset => "EntangledSubsetError",
            ViolationKind::Postprocess => "PostprocessError",
        }
    }
}

/// A tagged contract failure together with where in the nesting it happened.
///
/// `path` holds the instruction indices of the sub-circuits walked from the
/// top-level circuit (named `root`) down to the circuit owning the condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractViolation {
    pub kind: ViolationKind,
    pub tag: String,
    pub root: String,
    pub path: Vec<usize>,
    pub detail: Option<String>,
}

impl ContractViolation {
    pub fn path_string(&self) -> String {
        let mut out = self.root.clone();
        for idx in &self.path {
            out.push('/');
            out.push_str(&idx.to_string());
        }
        out
    }
}

impl fmt::Display for ContractViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::StateCondition | ViolationKind::MeasureCondition => write!(
                f,
                "{}: Condition Error occurred in '{}' (path: {})",
                self.kind.name(),
                self.tag,
                self.path_string()
            )?,
            _ => write!(
                f,
                "{}: in '{}' (path: {})",
                self.kind.name(),
                self.tag,
                self.path_string()
            )?,
        }
        if let Some(detail) = &self.detail {
            write!(f, "\n  {detail}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("qubit index {index} out of range for {size} qubit(s)")]
    QubitOutOfRange { index: usize, size: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateQubit(usize),
    #[error("gate '{gate}' acts on {expected} qubit(s) but {found} were given")]
    ArityMismatch {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),
    #[error("invalid probability table: {0}")]
    InvalidProbabilities(String),
    #[error("shots must be at least 1")]
    ZeroShots,
    #[error("circuit size must be at least 1")]
    InvalidSize,
    #[error("measurement list is empty")]
    EmptyMeasurement,
    #[error("condition tag '{0}' already registered")]
    DuplicateTag(String),
    #[error("unsupported gate for decomposition: {0}")]
    UnsupportedGate(String),
    #[error("basis must contain h, rx, rz and cx; missing '{0}'")]
    IncompleteBasis(String),
    #[error("unknown gate '{0}'")]
    UnknownGate(String),
    #[error("entangled subset: purity {purity:.6} below 1 - {tolerance:e}")]
    EntangledSubset { purity: f64, tolerance: f64 },
    #[error("postprocess failed: {0}")]
    Postprocess(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Violation(Box<ContractViolation>),
}

impl Error {
    /// The violation carried by this error, if it is a contract failure.
    pub fn violation(&self) -> Option<&ContractViolation> {
        match self {
            Error::Violation(v) => Some(v),
            _ => None,
        }
    }
}

impl From<ContractViolation> for Error {
    fn from(v: ContractViolation) -> Self {
        Error::Violation(Box::new(v))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
