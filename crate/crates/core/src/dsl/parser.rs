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

use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::{DslError, SourceSpan};

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Self { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn at_end(&self) -> bool {
        matches!(self.peek_kind(), None | Some(TokenKind::Newline))
    }

    fn here(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => t.span,
            None => self
                .tokens
                .last()
                .map(|t| SourceSpan::new(t.span.line, t.span.end + 1, t.span.end + 1))
                .unwrap_or(SourceSpan::new(1, 1, 1)),
        }
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        let found = match self.peek() {
            Some(t) => t.kind.to_string(),
            None => "end of input".into(),
        };
        DslError::syntax(format!("expected {wanted}, found {found}"), self.here())
    }

    fn expect(&mut self, kind: &TokenKind, wanted: &str) -> PResult<SourceSpan> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump().expect("peeked").span)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<Spanned<String>> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                span,
            }) => {
                self.pos += 1;
                Ok(Spanned::new(s.clone(), *span))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn int(&mut self, wanted: &str) -> PResult<Spanned<u64>> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Int(n),
                span,
            }) => {
                self.pos += 1;
                Ok(Spanned::new(*n, *span))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn qubit(&mut self) -> PResult<Spanned<usize>> {
        let n = self.int("qubit index")?;
        Ok(Spanned::new(n.node as usize, n.span))
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    // expr = tensor { (+|-) tensor }
    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.tensor()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.tensor()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn tensor(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        while self.eat(&TokenKind::Caret) {
            let rhs = self.product()?;
            lhs = binary(BinOp::Tensor, lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                Some(TokenKind::At) => BinOp::At,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.here();
        if self.eat(&TokenKind::Tilde) {
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Spanned::new(ExprKind::Adjoint(Box::new(inner)), span));
        }
        if self.eat(&TokenKind::Minus) {
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Spanned::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Expr> {
        let Some(tok) = self.peek() else {
            return Err(self.unexpected("an expression"));
        };
        let span = tok.span;
        let simple = |kind| Ok(Spanned::new(kind, span));
        match &tok.kind {
            TokenKind::Ket(labels) => {
                self.pos += 1;
                simple(ExprKind::Ket(labels.clone()))
            }
            TokenKind::Int(n) => {
                self.pos += 1;
                simple(ExprKind::Number(*n as f64))
            }
            TokenKind::Real(x) => {
                self.pos += 1;
                simple(ExprKind::Number(*x))
            }
            TokenKind::Imag(x) => {
                self.pos += 1;
                simple(ExprKind::Imag(*x))
            }
            TokenKind::Pi => {
                self.pos += 1;
                simple(ExprKind::Pi)
            }
            TokenKind::Pre => {
                self.pos += 1;
                if !self.eat(&TokenKind::LBracket) {
                    return simple(ExprKind::Pre(None));
                }
                let lo = self.int("qubit index")?;
                let hi = if self.eat(&TokenKind::DotDot) {
                    self.int("range end")?
                } else {
                    Spanned::new(lo.node + 1, lo.span)
                };
                let close = self.expect(&TokenKind::RBracket, "']'")?;
                if hi.node <= lo.node {
                    return Err(DslError::syntax("empty qubit range", lo.span.to(hi.span)));
                }
                Ok(Spanned::new(
                    ExprKind::Pre(Some((lo.node as usize, hi.node as usize))),
                    span.to(close),
                ))
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                if self.eat(&TokenKind::LParen) {
                    let args = self.args()?;
                    let close = self.expect(&TokenKind::RParen, "')'")?;
                    return Ok(Spanned::new(
                        ExprKind::Call(name.clone(), args),
                        span.to(close),
                    ));
                }
                simple(ExprKind::Ident(name.clone()))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            TokenKind::LBracket => {
                self.pos += 1;
                let mut rows = Vec::new();
                loop {
                    self.expect(&TokenKind::LBracket, "'[' starting a matrix row")?;
                    rows.push(self.args()?);
                    self.expect(&TokenKind::RBracket, "']'")?;
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                let close = self.expect(&TokenKind::RBracket, "']'")?;
                Ok(Spanned::new(ExprKind::Matrix(rows), span.to(close)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        let mut args = vec![self.expr()?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.expr()?);
        }
        Ok(args)
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(rhs.span);
    Spanned::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span)
}

/// Parses a complete expression from `tokens` (a trailing newline is allowed).
pub fn parse_state_expr(tokens: &[Token]) -> Result<Expr, DslError> {
    let mut cur = Cursor::new(tokens);
    let e = cur.expr()?;
    cur.end_of_statement()?;
    Ok(e)
}

/// Tokenizes and parses a single-line expression.
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    parse_state_expr(&tokenize(src)?)
}

enum Current {
    None,
    Sub,
    Main,
}

pub fn parse_file(src: &str) -> Result<CircuitFile, DslError> {
    let tokens = tokenize(src)?;
    let mut subs: Vec<Block> = Vec::new();
    let mut main: Option<Block> = None;
    let mut measure: Option<Spanned<MeasureSpec>> = None;
    let mut current = Current::None;
    let mut tags: HashSet<String> = HashSet::new();

    for line in tokens.split_inclusive(|t| t.kind == TokenKind::Newline) {
        let mut cur = Cursor::new(line);
        if cur.at_end() {
            continue;
        }
        let first = cur.peek().expect("non-empty line");
        if measure.is_some() {
            return Err(DslError::syntax(
                "measure must be the last statement",
                first.span,
            ));
        }
        match first.kind {
            TokenKind::Circuit | TokenKind::Sub => {
                let is_main = first.kind == TokenKind::Circuit;
                if main.is_some() {
                    let msg = if is_main {
                        "only one circuit block is allowed"
                    } else {
                        "sub blocks must precede the circuit block"
                    };
                    return Err(DslError::syntax(msg, first.span));
                }
                cur.pos += 1;
                let name = if is_main {
                    Spanned::new("main".to_string(), first.span)
                } else {
                    let name = cur.ident("block name")?;
                    if subs.iter().any(|b| b.name.node == name.node) {
                        return Err(DslError::syntax(
                            format!("sub '{}' is already defined", name.node),
                            name.span,
                        ));
                    }
                    name
                };
                let size = cur.int("qubit count")?;
                if size.node < 1 {
                    return Err(DslError::syntax(
                        "circuit size must be at least 1",
                        size.span,
                    ));
                }
                cur.end_of_statement()?;
                let block = Block {
                    name,
                    size: Spanned::new(size.node as usize, size.span),
                    statements: Vec::new(),
                };
                tags.clear();
                if is_main {
                    main = Some(block);
                    current = Current::Main;
                } else {
                    subs.push(block);
                    current = Current::Sub;
                }
            }
            TokenKind::Measure => {
                if !matches!(current, Current::Main) {
                    return Err(DslError::syntax(
                        "measure is only allowed in the circuit block",
                        first.span,
                    ));
                }
                let spec = parse_measure(&mut cur)?;
                measure = Some(spec);
            }
            _ => {
                let block = match current {
                    Current::None => {
                        return Err(DslError::syntax(
                            "statement before any 'circuit' or 'sub' header",
                            first.span,
                        ))
                    }
                    Current::Sub => subs.last_mut().expect("sub block open"),
                    Current::Main => main.as_mut().expect("main block open"),
                };
                let stmt = parse_statement(&mut cur)?;
                if let Statement::Assert { tag, .. } = &stmt.node {
                    if !tags.insert(tag.node.clone()) {
                        return Err(DslError::syntax(
                            format!("duplicate condition tag '{}'", tag.node),
                            tag.span,
                        ));
                    }
                }
                block.statements.push(stmt);
            }
        }
    }
    let main = main.ok_or_else(|| {
        let line = src.lines().count().max(1);
        DslError::syntax("missing 'circuit' block", SourceSpan::new(line, 1, 1))
    })?;
    Ok(CircuitFile {
        subs,
        main,
        measure,
    })
}

fn parse_statement(cur: &mut Cursor<'_>) -> Result<Spanned<Statement>, DslError> {
    let start = cur.here();
    if cur.eat(&TokenKind::Assert) {
        let tag = cur.ident("condition tag")?;
        cur.expect(&TokenKind::Colon, "':'")?;
        cur.expect(&TokenKind::Post, "'post'")?;
        cur.expect(&TokenKind::EqEq, "'=='")?;
        let expected = cur.expr()?;
        cur.end_of_statement()?;
        let span = start.to(expected.span);
        return Ok(Spanned::new(Statement::Assert { tag, expected }, span));
    }
    let name = gate_name(cur)?;
    let mut params = Vec::new();
    if cur.eat(&TokenKind::LParen) {
        params = cur.args()?;
        cur.expect(&TokenKind::RParen, "')'")?;
    }
    let mut qubits = vec![cur.qubit()?];
    while !cur.at_end() {
        cur.eat(&TokenKind::Comma);
        qubits.push(cur.qubit()?);
    }
    let span = start.to(qubits.last().expect("at least one qubit").span);
    Ok(Spanned::new(
        Statement::Apply {
            name,
            params,
            qubits,
        },
        span,
    ))
}

fn gate_name(cur: &mut Cursor<'_>) -> Result<Spanned<String>, DslError> {
    let mut name = cur.ident("gate or block name")?;
    while let (Some(dash), Some(next)) = (cur.tokens.get(cur.pos), cur.tokens.get(cur.pos + 1)) {
        let adjacent = dash.span.line == name.span.line
            && dash.span.start == name.span.end + 1
            && next.span.start == dash.span.end + 1;
        match (&dash.kind, &next.kind) {
            (TokenKind::Minus, TokenKind::Ident(part)) if adjacent => {
                name.node.push('-');
                name.node.push_str(part);
                name.span = name.span.to(next.span);
                cur.pos += 2;
            }
            _ => break,
        }
    }
    Ok(name)
}

fn parse_measure(cur: &mut Cursor<'_>) -> Result<Spanned<MeasureSpec>, DslError> {
    let start = cur.expect(&TokenKind::Measure, "'measure'")?;
    let mut qubits = vec![cur.qubit()?];
    while cur.eat(&TokenKind::Comma) {
        qubits.push(cur.qubit()?);
    }
    let mut end = qubits.last().expect("one qubit").span;
    let mut shots = None;
    if cur.eat(&TokenKind::Shots) {
        let n = cur.int("shot count")?;
        if n.node == 0 {
            return Err(DslError::syntax("shots must be at least 1", n.span));
        }
        end = n.span;
        shots = Some(n);
    }
    let mut postprocess = Spanned::new(Postprocess::Raw, end);
    let mut expect = None;
    if cur.eat(&TokenKind::Post) {
        let name = cur.ident("postprocess name")?;
        postprocess = builtin(&name)?;
        end = name.span;
    } else if cur.eat(&TokenKind::Expect) {
        let name = cur.ident("postprocess name")?;
        postprocess = builtin(&name)?;
        match cur.ident("'in'") {
            Ok(word) if word.node == "in" => {}
            Ok(word) => return Err(DslError::syntax("expected 'in'", word.span)),
            Err(e) => return Err(e),
        }
        cur.expect(&TokenKind::LBracket, "'['")?;
        let lo = cur.expr()?;
        cur.expect(&TokenKind::Comma, "','")?;
        let hi = cur.expr()?;
        end = cur.expect(&TokenKind::RBracket, "']'")?;
        expect = Some((lo, hi));
    }
    cur.end_of_statement()?;
    Ok(Spanned::new(
        MeasureSpec {
            qubits,
            shots,
            postprocess,
            expect,
        },
        start.to(end),
    ))
}

fn builtin(name: &Spanned<String>) -> Result<Spanned<Postprocess>, DslError> {
    Postprocess::from_name(&name.node)
        .map(|p| Spanned::new(p, name.span))
        .ok_or_else(|| {
            DslError::syntax(
                format!(
                    "unknown postprocess '{}' (expected real_expectation, phase or raw)",
                    name.node
                ),
                name.span,
            )
        })
}
