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

use super::SourceSpan;

/// A node together with its source location. Equality ignores the span so
/// that reparsed trees compare structurally.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: SourceSpan,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: SourceSpan) -> Self {
        Self { node, span }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `@`: operator application or composition.
    At,
    /// `^`: tensor product, right factor on the lower qubits.
    Tensor,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::At => "@",
            BinOp::Tensor => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Imag(f64),
    Pi,
    Ket(String),
    /// Gate name, named state, function, or the imaginary unit `i`.
    Ident(String),
    Call(String, Vec<Expr>),
    /// `pre` or `pre[start..end]` (end exclusive).
    Pre(Option<(usize, usize)>),
    Matrix(Vec<Vec<Expr>>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Adjoint(Box<Expr>),
}

pub type Expr = Spanned<ExprKind>;

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    /// A catalog gate or an earlier `sub` block applied to qubits.
    Apply {
        name: Spanned<String>,
        params: Vec<Expr>,
        qubits: Vec<Spanned<usize>>,
    },
    /// `assert <tag>: post == <expr>`.
    Assert {
        tag: Spanned<String>,
        expected: Expr,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Postprocess {
    RealExpectation,
    Phase,
    Raw,
}

impl Postprocess {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "real_expectation" => Some(Postprocess::RealExpectation),
            "phase" => Some(Postprocess::Phase),
            "raw" => Some(Postprocess::Raw),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Postprocess::RealExpectation => "real_expectation",
            Postprocess::Phase => "phase",
            Postprocess::Raw => "raw",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    pub qubits: Vec<Spanned<usize>>,
    pub shots: Option<Spanned<u64>>,
    pub postprocess: Spanned<Postprocess>,
    /// Closed interval the postprocessed value must fall in.
    pub expect: Option<(Expr, Expr)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: Spanned<String>,
    pub size: Spanned<usize>,
    pub statements: Vec<Spanned<Statement>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    /// `sub` blocks in definition order.
    pub subs: Vec<Block>,
    /// The `circuit` block.
    pub main: Block,
    pub measure: Option<Spanned<MeasureSpec>>,
}
