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

//! A line-oriented text format for circuits with declarative contracts.
//!
//! ```text
//! # Hadamard test of T on |+>
//! circuit 2
//! h 1
//! h 0
//! controlled-t 0 1
//! h 0
//! assert c1: post == (|+> + T @ |+>) / 2 ^ |0> + (|+> - T @ |+>) / 2 ^ |1>
//! measure 0 shots 100000 expect real_expectation in [0.8436, 0.8636]
//! ```
//!
//! Grammar (EBNF; one statement per line, `#` comments):
//!
//! ```text
//! file      = { sub_block } circuit_block ;
//! sub_block = "sub" IDENT INT NL { stmt NL } ;
//! circuit_block = "circuit" INT NL { stmt NL } [ measure NL ] ;
//! stmt      = apply | assert ;
//! apply     = gate_name [ "(" expr { "," expr } ")" ] qubit { [","] qubit } ;
//! gate_name = IDENT { "-" IDENT } ;          (* no spaces around "-" *)
//! assert    = "assert" IDENT ":" "post" "==" expr ;
//! measure   = "measure" qubit { "," qubit } [ "shots" INT ]
//!             [ "post" IDENT | "expect" IDENT "in" "[" expr "," expr "]" ] ;
//! expr      = tensor { ( "+" | "-" ) tensor } ;
//! tensor    = product { "^" product } ;
//! product   = unary { ( "*" | "/" | "@" ) unary } ;
//! unary     = ( "~" | "-" ) unary | atom ;
//! atom      = KET | NUMBER | IMAG | "pi" | "pre" [ "[" INT [ ".." INT ] "]" ]
//!           | IDENT [ "(" expr { "," expr } ")" ]
//!           | "[" row { "," row } "]" | "(" expr ")" ;
//! row       = "[" expr { "," expr } "]" ;
//! ```
//!
//! `^` binds looser than `*`, `/` and `@` so that `(ψ + U @ ψ) / 2 ^ |0>`
//! reads as `((ψ + U @ ψ) / 2) ^ |0>`. Inside an assertion, `pre` is the
//! block's pre-state and `pre[a..b]` the pure state of qubits `a..b`
//! (qubit `a` lowest). Kets list qubits highest first: `|10>` has qubit 1 set.
//! A block name applied like a gate inlines that block, whose assertions are
//! then checked on every run.

mod ast;
mod elaborate;
mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use ast::{
    BinOp, Block, CircuitFile, Expr, ExprKind, MeasureSpec, Postprocess, Spanned, Statement,
};
pub use elaborate::{
    elaborate, elaborate_with, eval_expr, ElaborateOptions, MeasuredValue, Program, Term,
};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_expr, parse_file, parse_state_expr};
pub use printer::{print_expr, print_file};

/// 1-based line and inclusive column range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(line: usize, start: usize, end: usize) -> Self {
        Self {
            line,
            start,
            end: end.max(start),
        }
    }

    /// Smallest span covering both, assuming they share a line; otherwise
    /// `self`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        if self.line != other.line {
            return self;
        }
        SourceSpan::new(
            self.line,
            self.start.min(other.start),
            self.end.max(other.end),
        )
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.line == other.line && self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.line, self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DslErrorKind {
    Lex,
    Syntax,
    Elaboration,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {}, column {}: {message}", span.line, span.start)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

impl DslError {
    pub(crate) fn lex(message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            kind: DslErrorKind::Lex,
            message: message.into(),
            span,
        }
    }

    pub(crate) fn syntax(message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            kind: DslErrorKind::Syntax,
            message: message.into(),
            span,
        }
    }

    pub(crate) fn elab(message: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            kind: DslErrorKind::Elaboration,
            message: message.into(),
            span,
        }
    }
}

/// Parses and elaborates `src` with default options.
pub fn compile(src: &str) -> Result<Program, DslError> {
    elaborate(&parse_file(src)?)
}

/// Parses and elaborates `src` with `opts`.
pub fn compile_with(src: &str, opts: &ElaborateOptions) -> Result<Program, DslError> {
    elaborate_with(&parse_file(src)?, opts)
}
