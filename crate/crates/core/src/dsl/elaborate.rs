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

use std::collections::HashMap;

use num_complex::Complex64;

use super::ast::*;
use super::{DslError, SourceSpan};
use crate::algorithms::{decode_phase, estimate_real_expectation, PhaseEstimate};
use crate::contracts::{ContractCircuit, MeasuredCircuit};
use crate::error::Error;
use crate::expressions::{
    eq_state, eval_state, partial_state, NamedState, OperatorExpr, StateExpr, EQ_STATE_TOL,
    PURITY_TOL,
};
use crate::gates::{GateSpec, CATALOG};
use crate::numerics::{c, inner, ComplexScalar, Matrix, StateVector};
use crate::simulator::Counts;

/// A typed value of a DSL expression.
#[derive(Debug, Clone)]
pub enum Term {
    Scalar(ComplexScalar),
    Ket(StateExpr, usize),
    /// Conjugate transpose of the stored ket.
    Bra(StateExpr, usize),
    Op(OperatorExpr, usize),
}

impl Term {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Term::Scalar(_) => "scalar",
            Term::Ket(..) => "state",
            Term::Bra(..) => "bra",
            Term::Op(..) => "operator",
        }
    }

    pub fn num_qubits(&self) -> Option<usize> {
        match self {
            Term::Scalar(_) => None,
            Term::Ket(_, n) | Term::Bra(_, n) | Term::Op(_, n) => Some(*n),
        }
    }
}

/// Result of a builtin postprocess.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasuredValue {
    Real(f64),
    Phase(PhaseEstimate),
    Counts(Counts),
}

impl MeasuredValue {
    /// The scalar checked by an `expect` interval.
    pub fn as_real(&self) -> Option<f64> {
        match self {
            MeasuredValue::Real(x) => Some(*x),
            MeasuredValue::Phase(p) => Some(p.phase),
            MeasuredValue::Counts(_) => None,
        }
    }
}

impl std::fmt::Display for MeasuredValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasuredValue::Real(x) => write!(f, "{x}"),
            MeasuredValue::Phase(p) => write!(f, "{} (outcome {})", p.phase, p.mode_bitstring),
            MeasuredValue::Counts(counts) => write!(f, "{counts}"),
        }
    }
}

/// An elaborated file.
#[derive(Debug, Clone)]
pub enum Program {
    Circuit(ContractCircuit),
    Measured {
        circuit: MeasuredCircuit<MeasuredValue>,
        shots: Option<u64>,
    },
}

impl Program {
    pub fn circuit(&self) -> &ContractCircuit {
        match self {
            Program::Circuit(c) => c,
            Program::Measured { circuit, .. } => circuit.circuit(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElaborateOptions {
    /// `eq_state` tolerance for declarative asserts.
    pub tolerance: f64,
}

impl Default for ElaborateOptions {
    fn default() -> Self {
        Self {
            tolerance: EQ_STATE_TOL,
        }
    }
}

enum Failure {
    Dsl(DslError),
    Core(Error, SourceSpan),
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::Dsl(e)
    }
}

impl Failure {
    fn into_dsl(self) -> DslError {
        match self {
            Failure::Dsl(e) => e,
            Failure::Core(e, span) => DslError::elab(e.to_string(), span),
        }
    }

    fn into_core(self) -> Error {
        match self {
            Failure::Dsl(e) => Error::InvalidArgument(e.to_string()),
            Failure::Core(e, _) => e,
        }
    }
}

type EResult<T> = Result<T, Failure>;

fn core<T>(r: crate::error::Result<T>, span: SourceSpan) -> EResult<T> {
    r.map_err(|e| Failure::Core(e, span))
}

fn err<T>(msg: impl Into<String>, span: SourceSpan) -> EResult<T> {
    Err(Failure::Dsl(DslError::elab(msg, span)))
}

/// Evaluates `expr` with `pre` bound (if given) as the pre-state.
pub fn eval_expr(expr: &Expr, pre: Option<&StateVector>) -> Result<Term, DslError> {
    eval(expr, pre).map_err(Failure::into_dsl)
}

fn eval(expr: &Expr, pre: Option<&StateVector>) -> EResult<Term> {
    let span = expr.span;
    match &expr.node {
        ExprKind::Number(x) => Ok(Term::Scalar(c(*x, 0.0))),
        ExprKind::Imag(x) => Ok(Term::Scalar(c(0.0, *x))),
        ExprKind::Pi => Ok(Term::Scalar(c(std::f64::consts::PI, 0.0))),
        ExprKind::Ket(labels) => {
            let states = labels
                .chars()
                .map(|l| NamedState::from_label(l).expect("lexer validated ket labels"))
                .collect::<Vec<_>>();
            let n = states.len();
            Ok(Term::Ket(StateExpr::Ket(states), n))
        }
        ExprKind::Ident(name) => ident(name, span),
        ExprKind::Call(name, args) => call(name, args, span, pre),
        ExprKind::Pre(range) => {
            let Some(pre) = pre else {
                return err("'pre' is only available inside an assert", span);
            };
            match range {
                None => Ok(Term::Ket(StateExpr::vector(pre.clone()), pre.num_qubits())),
                Some((lo, hi)) => {
                    if *hi > pre.num_qubits() {
                        return err(
                            format!(
                                "pre[{lo}..{hi}] exceeds the {}-qubit block",
                                pre.num_qubits()
                            ),
                            span,
                        );
                    }
                    let keep: Vec<usize> = (*lo..*hi).collect();
                    let v = core(partial_state(pre, &keep, PURITY_TOL), span)?;
                    Ok(Term::Ket(StateExpr::vector(v), hi - lo))
                }
            }
        }
        ExprKind::Matrix(rows) => matrix(rows, span, pre),
        ExprKind::Neg(inner) => scale(eval(inner, pre)?, c(-1.0, 0.0)),
        ExprKind::Adjoint(inner) => Ok(match eval(inner, pre)? {
            Term::Scalar(z) => Term::Scalar(z.conj()),
            Term::Ket(s, n) => Term::Bra(s, n),
            Term::Bra(s, n) => Term::Ket(s, n),
            Term::Op(o, n) => Term::Op(OperatorExpr::Adjoint(Box::new(o)), n),
        }),
        ExprKind::Binary(op, a, b) => binary(*op, a, b, span, pre),
    }
}

fn is_unit_i(e: &Expr) -> bool {
    matches!(&e.node, ExprKind::Ident(n) if n == "i")
}

fn identity_term() -> Term {
    Term::Op(OperatorExpr::Gate(GateSpec::i()), 1)
}

fn ident(name: &str, span: SourceSpan) -> EResult<Term> {
    if name == "i" {
        return Ok(Term::Scalar(c(0.0, 1.0)));
    }
    if let Some(s) = NamedState::from_name(name) {
        return Ok(Term::Ket(StateExpr::Named(s), 1));
    }
    gate_term(name, &[], span)
}

fn gate_term(name: &str, params: &[f64], span: SourceSpan) -> EResult<Term> {
    match GateSpec::from_name(name, params) {
        Ok(g) => {
            let n = g.arity();
            Ok(Term::Op(OperatorExpr::Gate(g), n))
        }
        Err(Error::UnknownGate(_)) => err(format!("unknown name '{name}'"), span),
        Err(e) => err(format!("{name}: {e}"), span),
    }
}

fn call(name: &str, args: &[Expr], span: SourceSpan, pre: Option<&StateVector>) -> EResult<Term> {
    let func: Option<fn(Complex64) -> Complex64> = match name {
        "exp" => Some(|z| z.exp()),
        "sqrt" => Some(|z| z.sqrt()),
        "cos" => Some(|z| z.cos()),
        "sin" => Some(|z| z.sin()),
        _ => None,
    };
    if let Some(f) = func {
        if args.len() != 1 {
            return err(format!("{name} takes 1 argument, got {}", args.len()), span);
        }
        return Ok(Term::Scalar(f(scalar(&args[0], pre)?)));
    }
    let params = args
        .iter()
        .map(|a| real(a, pre))
        .collect::<EResult<Vec<_>>>()?;
    gate_term(name, &params, span)
}

fn scalar(e: &Expr, pre: Option<&StateVector>) -> EResult<ComplexScalar> {
    match eval(e, pre)? {
        Term::Scalar(z) if z.re.is_finite() && z.im.is_finite() => Ok(z),
        Term::Scalar(_) => err("scalar is not finite", e.span),
        other => err(
            format!("expected a scalar, found {}", other.kind_name()),
            e.span,
        ),
    }
}

fn real(e: &Expr, pre: Option<&StateVector>) -> EResult<f64> {
    let z = scalar(e, pre)?;
    if z.im.abs() > 1e-12 {
        return err(format!("expected a real number, found {z}"), e.span);
    }
    Ok(z.re)
}

fn matrix(rows: &[Vec<Expr>], span: SourceSpan, pre: Option<&StateVector>) -> EResult<Term> {
    let dim = rows.len();
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            let at = row.first().map(|e| e.span).unwrap_or(span);
            return err(
                format!(
                    "matrix must be square: {dim} rows but a row of {}",
                    row.len()
                ),
                at,
            );
        }
        for e in row {
            data.push(scalar(e, pre)?);
        }
    }
    let m = core(Matrix::new(dim, data), span)?;
    let n = m.num_qubits();
    Ok(Term::Op(OperatorExpr::matrix(m), n))
}

fn scale(t: Term, k: ComplexScalar) -> EResult<Term> {
    Ok(match t {
        Term::Scalar(z) => Term::Scalar(z * k),
        Term::Ket(s, n) => Term::Ket(s.scaled(k), n),
        Term::Bra(s, n) => Term::Bra(s.scaled(k.conj()), n),
        Term::Op(o, n) => Term::Op(OperatorExpr::Scaled(k, Box::new(o)), n),
    })
}

fn same_size(a: usize, b: usize, what: &str, span: SourceSpan) -> EResult<()> {
    if a != b {
        return err(
            format!("dimension mismatch: {what} of {a} and {b} qubits"),
            span,
        );
    }
    Ok(())
}

fn binary(
    op: BinOp,
    a: &Expr,
    b: &Expr,
    span: SourceSpan,
    pre: Option<&StateVector>,
) -> EResult<Term> {
    let (lhs, rhs) = match (is_unit_i(a), is_unit_i(b)) {
        (true, false) => {
            let r = eval(b, pre)?;
            (unit_for(op, &r), r)
        }
        (false, true) => {
            let l = eval(a, pre)?;
            let r = unit_for(op, &l);
            (l, r)
        }
        _ => (eval(a, pre)?, eval(b, pre)?),
    };
    let mismatch = |l: &Term, r: &Term| {
        err(
            format!(
                "cannot combine {} {} {}",
                l.kind_name(),
                op.symbol(),
                r.kind_name()
            ),
            span,
        )
    };
    match op {
        BinOp::Add | BinOp::Sub => {
            let sign = if op == BinOp::Add { 1.0 } else { -1.0 };
            match (lhs, rhs) {
                (Term::Scalar(x), Term::Scalar(y)) => Ok(Term::Scalar(x + y * sign)),
                (Term::Ket(x, n), Term::Ket(y, m)) => {
                    same_size(n, m, "sum", span)?;
                    Ok(Term::Ket(x.plus(y.scaled(c(sign, 0.0))), n))
                }
                (Term::Bra(x, n), Term::Bra(y, m)) => {
                    same_size(n, m, "sum", span)?;
                    Ok(Term::Bra(x.plus(y.scaled(c(sign, 0.0))), n))
                }
                (Term::Op(x, n), Term::Op(y, m)) => {
                    same_size(n, m, "sum", span)?;
                    let y = OperatorExpr::Scaled(c(sign, 0.0), Box::new(y));
                    Ok(Term::Op(OperatorExpr::Sum(Box::new(x), Box::new(y)), n))
                }
                (l, r) => mismatch(&l, &r),
            }
        }
        BinOp::Mul => match (lhs, rhs) {
            (Term::Scalar(k), t) | (t, Term::Scalar(k)) => scale(t, k),
            (l, r) => mismatch(&l, &r),
        },
        BinOp::Div => match (lhs, rhs) {
            (t, Term::Scalar(k)) => {
                if k.norm() == 0.0 {
                    return err("division by zero", b.span);
                }
                scale(t, k.inv())
            }
            (l, r) => mismatch(&l, &r),
        },
        BinOp::At => match (lhs, rhs) {
            (Term::Op(x, n), Term::Op(y, m)) => {
                same_size(n, m, "product", span)?;
                Ok(Term::Op(x.compose(y), n))
            }
            (Term::Op(x, n), Term::Ket(s, m)) => {
                same_size(n, m, "application", span)?;
                Ok(Term::Ket(x.apply(s), n))
            }
            (Term::Bra(s, n), Term::Op(x, m)) => {
                same_size(n, m, "application", span)?;
                Ok(Term::Bra(OperatorExpr::Adjoint(Box::new(x)).apply(s), n))
            }
            (Term::Bra(x, n), Term::Ket(y, m)) => {
                same_size(n, m, "inner product", span)?;
                let x = core(eval_state(&x), a.span)?;
                let y = core(eval_state(&y), b.span)?;
                Ok(Term::Scalar(core(inner(&x, &y), span)?))
            }
            (l, r) => mismatch(&l, &r),
        },
        BinOp::Tensor => match (lhs, rhs) {
            (Term::Ket(x, n), Term::Ket(y, m)) => Ok(Term::Ket(x.tensor(y), n + m)),
            (Term::Bra(x, n), Term::Bra(y, m)) => Ok(Term::Bra(x.tensor(y), n + m)),
            (Term::Op(x, n), Term::Op(y, m)) => Ok(Term::Op(
                OperatorExpr::Tensor(Box::new(x), Box::new(y)),
                n + m,
            )),
            (l, r) => mismatch(&l, &r),
        },
    }
}

/// `i` is the identity gate next to operators and the imaginary unit otherwise.
fn unit_for(op: BinOp, other: &Term) -> Term {
    let operator_context = match op {
        BinOp::At | BinOp::Tensor => true,
        BinOp::Add | BinOp::Sub => matches!(other, Term::Op(..)),
        BinOp::Mul | BinOp::Div => false,
    };
    if operator_context {
        identity_term()
    } else {
        Term::Scalar(c(0.0, 1.0))
    }
}

/// Elaborates with default options.
pub fn elaborate(file: &CircuitFile) -> Result<Program, DslError> {
    elaborate_with(file, &ElaborateOptions::default())
}

pub fn elaborate_with(file: &CircuitFile, opts: &ElaborateOptions) -> Result<Program, DslError> {
    let mut subs: HashMap<String, ContractCircuit> = HashMap::new();
    for block in &file.subs {
        if is_gate_name(&block.name.node) || NamedState::from_name(&block.name.node).is_some() {
            return Err(DslError::elab(
                format!("sub name '{}' shadows a builtin name", block.name.node),
                block.name.span,
            ));
        }
        let circ = build_block(block, &subs, opts)?;
        subs.insert(block.name.node.clone(), circ);
    }
    let main = build_block(&file.main, &subs, opts)?;
    let Some(measure) = &file.measure else {
        return Ok(Program::Circuit(main));
    };
    let spec = &measure.node;
    let size = main.size();
    let mut qubits = Vec::with_capacity(spec.qubits.len());
    for q in &spec.qubits {
        check_qubit(q, size)?;
        if qubits.contains(&q.node) {
            return Err(DslError::elab(
                format!("qubit {} measured twice", q.node),
                q.span,
            ));
        }
        qubits.push(q.node);
    }
    let post = spec.postprocess.node;
    let m = qubits.len();
    if post == Postprocess::RealExpectation && m != 1 {
        return Err(DslError::elab(
            format!("real_expectation needs exactly one measured qubit, got {m}"),
            spec.postprocess.span,
        ));
    }
    let mut measured = main
        .measure(&qubits, move |counts: &Counts| {
            Ok(match post {
                Postprocess::RealExpectation => {
                    MeasuredValue::Real(estimate_real_expectation(counts)?)
                }
                Postprocess::Phase => MeasuredValue::Phase(decode_phase(counts, m)?),
                Postprocess::Raw => MeasuredValue::Counts(counts.clone()),
            })
        })
        .map_err(|e| DslError::elab(e.to_string(), measure.span))?;
    if let Some((lo_e, hi_e)) = &spec.expect {
        if post == Postprocess::Raw {
            return Err(DslError::elab(
                "expect needs a scalar postprocess (real_expectation or phase)",
                spec.postprocess.span,
            ));
        }
        let lo = real(lo_e, None).map_err(Failure::into_dsl)?;
        let hi = real(hi_e, None).map_err(Failure::into_dsl)?;
        if lo > hi {
            return Err(DslError::elab(
                format!("empty interval [{lo}, {hi}]"),
                lo_e.span.to(hi_e.span),
            ));
        }
        measured
            .add_condition("expect", move |_, _, v: &MeasuredValue| {
                Ok(v.as_real().is_some_and(|x| lo <= x && x <= hi))
            })
            .map_err(|e| DslError::elab(e.to_string(), measure.span))?;
    }
    Ok(Program::Measured {
        circuit: measured,
        shots: spec.shots.as_ref().map(|s| s.node),
    })
}

fn is_gate_name(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    CATALOG.contains(&lower.as_str())
        || matches!(lower.as_str(), "id" | "cnot")
        || lower.starts_with("controlled-")
        || lower.starts_with("adjoint-")
}

fn check_qubit(q: &Spanned<usize>, size: usize) -> Result<(), DslError> {
    if q.node >= size {
        return Err(DslError::elab(
            format!(
                "line {}: qubit {} is out of range for a {size}-qubit block",
                q.span.line, q.node
            ),
            q.span,
        ));
    }
    Ok(())
}

fn build_block(
    block: &Block,
    subs: &HashMap<String, ContractCircuit>,
    opts: &ElaborateOptions,
) -> Result<ContractCircuit, DslError> {
    let size = block.size.node;
    let mut circ = ContractCircuit::named(block.name.node.clone(), size)
        .map_err(|e| DslError::elab(e.to_string(), block.size.span))?;
    for stmt in &block.statements {
        match &stmt.node {
            Statement::Apply {
                name,
                params,
                qubits,
            } => {
                for q in qubits {
                    check_qubit(q, size)?;
                }
                for (k, q) in qubits.iter().enumerate() {
                    if qubits[..k].iter().any(|p| p.node == q.node) {
                        return Err(DslError::elab(
                            format!("qubit {} used twice", q.node),
                            q.span,
                        ));
                    }
                }
                let idx: Vec<usize> = qubits.iter().map(|q| q.node).collect();
                if let Some(sub) = subs.get(&name.node) {
                    if !params.is_empty() {
                        return Err(DslError::elab(
                            format!("sub '{}' takes no parameters", name.node),
                            name.span,
                        ));
                    }
                    if idx.len() != sub.size() {
                        return Err(DslError::elab(
                            format!(
                                "sub '{}' acts on {} qubits, got {}",
                                name.node,
                                sub.size(),
                                idx.len()
                            ),
                            stmt.span,
                        ));
                    }
                    circ.append_sub(sub, &idx)
                        .map_err(|e| DslError::elab(e.to_string(), stmt.span))?;
                    continue;
                }
                let values = params
                    .iter()
                    .map(|p| real(p, None))
                    .collect::<EResult<Vec<_>>>()
                    .map_err(Failure::into_dsl)?;
                let gate = match GateSpec::from_name(&name.node, &values) {
                    Ok(g) => g,
                    Err(Error::UnknownGate(_)) => {
                        return Err(DslError::elab(
                            format!("unknown gate or sub '{}'", name.node),
                            name.span,
                        ))
                    }
                    Err(e) => return Err(DslError::elab(e.to_string(), name.span)),
                };
                if gate.arity() != idx.len() {
                    return Err(DslError::elab(
                        format!(
                            "gate '{}' acts on {} qubit(s), got {}",
                            name.node,
                            gate.arity(),
                            idx.len()
                        ),
                        stmt.span,
                    ));
                }
                circ.append_gate(gate, &idx)
                    .map_err(|e| DslError::elab(e.to_string(), stmt.span))?;
            }
            Statement::Assert { tag, expected } => {
                check_assert(expected, size)?;
                let expr = expected.clone();
                let tol = opts.tolerance;
                circ.add_condition(tag.node.clone(), move |pre, post| {
                    let term = eval(&expr, Some(pre)).map_err(Failure::into_core)?;
                    let Term::Ket(s, _) = term else {
                        return Err(Error::InvalidArgument("assert is not a state".into()));
                    };
                    let want = eval_state(&s)?;
                    if (want.norm_sqr() - 1.0).abs() > 1e-6 {
                        return Ok(false);
                    }
                    eq_state(post, &want, tol)
                })
                .map_err(|e| DslError::elab(e.to_string(), tag.span))?;
            }
        }
    }
    Ok(circ)
}

/// Type-checks an assert against a dummy `|0…0⟩` pre-state.
fn check_assert(expected: &Expr, size: usize) -> Result<(), DslError> {
    let dummy = StateVector::zero(size);
    let term = eval_expr(expected, Some(&dummy))?;
    match term {
        Term::Ket(s, n) => {
            if n != size {
                return Err(DslError::elab(
                    format!("dimension mismatch: asserted state has {n} qubits, block has {size}"),
                    expected.span,
                ));
            }
            let v = eval_state(&s).map_err(|e| DslError::elab(e.to_string(), expected.span))?;
            let n2 = v.norm_sqr();
            if !pre_dependent(expected) && (n2 - 1.0).abs() > 1e-6 {
                return Err(DslError::elab(
                    format!("asserted state is not normalized (norm squared {n2:.6})"),
                    expected.span,
                ));
            }
            Ok(())
        }
        other => Err(DslError::elab(
            format!("assert needs a state, found {}", other.kind_name()),
            expected.span,
        )),
    }
}

fn pre_dependent(e: &Expr) -> bool {
    match &e.node {
        ExprKind::Pre(_) => true,
        ExprKind::Call(_, args) => args.iter().any(pre_dependent),
        ExprKind::Matrix(rows) => rows.iter().flatten().any(pre_dependent),
        ExprKind::Binary(_, a, b) => pre_dependent(a) || pre_dependent(b),
        ExprKind::Neg(a) | ExprKind::Adjoint(a) => pre_dependent(a),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{compile, parse_expr};
    use crate::error::ViolationKind;
    use std::f64::consts::PI;

    const HADAMARD: &str = "circuit 2\nh 1\nh 0\ncontrolled-t 0 1\nh 0\n\
        assert c1: post == (|+> + T @ |+>) / 2 ^ |0> + (|+> - T @ |+>) / 2 ^ |1>\n\
        measure 0 shots 100000 expect real_expectation in [0.8436, 0.8636]\n";

    fn state(src: &str) -> StateVector {
        match eval_expr(&parse_expr(src).unwrap(), None).unwrap() {
            Term::Ket(s, _) => eval_state(&s).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hadamard_expression_matches_direct_construction() {
        let got = state("(|+> + T @ |+>) / 2 ^ |0>");
        let plus = NamedState::Plus.vector();
        let tplus = GateSpec::t().unitary().apply(&plus).unwrap();
        let half = plus.try_add(&tplus).unwrap().scale(c(0.5, 0.0));
        let want = crate::numerics::tensor_states(&half, &NamedState::Zero.vector());
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn expectation_form() {
        let t = eval_expr(&parse_expr("~|+> @ T @ |+>").unwrap(), None).unwrap();
        let Term::Scalar(z) = t else { panic!() };
        let want = (c(1.0, 0.0) + Complex64::from_polar(1.0, PI / 4.0)) / 2.0;
        assert!((z - want).norm() < 1e-15);
    }

    #[test]
    fn complex_literals_and_unit() {
        let Term::Scalar(z) = eval_expr(&parse_expr("2+3i").unwrap(), None).unwrap() else {
            panic!()
        };
        assert_eq!(z, c(2.0, 3.0));
        let Term::Scalar(z) = eval_expr(&parse_expr("i * i").unwrap(), None).unwrap() else {
            panic!()
        };
        assert_eq!(z, c(-1.0, 0.0));
        let t = eval_expr(&parse_expr("i ^ X").unwrap(), None).unwrap();
        assert_eq!(t.num_qubits(), Some(2));
        let v = state("exp(i*pi/4) * |1>");
        assert!((v.amps()[1] - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn type_errors_have_spans() {
        let e = eval_expr(&parse_expr("|0> + |01>").unwrap(), None).unwrap_err();
        assert!(e.message.contains("dimension"), "{e}");
        assert_eq!((e.span.start, e.span.end), (1, 10));
        let e = eval_expr(&parse_expr("|0> @ X").unwrap(), None).unwrap_err();
        assert!(e.message.contains("cannot combine"));
        let e = eval_expr(&parse_expr("foo @ |0>").unwrap(), None).unwrap_err();
        assert_eq!((e.span.start, e.span.end), (1, 3));
        let e = eval_expr(&parse_expr("rx @ |0>").unwrap(), None).unwrap_err();
        assert_eq!((e.span.start, e.span.end), (1, 2));
        let e = eval_expr(&parse_expr("pre").unwrap(), None).unwrap_err();
        assert!(e.message.contains("pre"));
    }

    #[test]
    fn matrix_literals() {
        let v = state("[[0, 1], [1, 0]] @ |0>");
        assert_eq!(v.amps()[1], c(1.0, 0.0));
        assert!(eval_expr(
            &parse_expr("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]").unwrap(),
            None
        )
        .is_err());
        assert!(eval_expr(&parse_expr("[[1, 0], [0]]").unwrap(), None).is_err());
    }

    #[test]
    fn hadamard_file_runs_in_interval() {
        let Program::Measured { circuit, shots } = compile(HADAMARD).unwrap() else {
            panic!("expected a measured program")
        };
        assert_eq!(shots, Some(100_000));
        let (value, _) = circuit.run(100_000, 1).unwrap();
        let x = value.as_real().unwrap();
        assert!((0.8436..=0.8636).contains(&x), "{x}");
    }

    #[test]
    fn corrupted_hadamard_file_violates_c1() {
        let src = HADAMARD.replace("controlled-t", "controlled-s");
        let Program::Measured { circuit, .. } = compile(&src).unwrap() else {
            panic!()
        };
        let v = match circuit.run(1000, 1).unwrap_err() {
            Error::Violation(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(v.kind, ViolationKind::StateCondition);
        assert_eq!(v.tag, "c1");
    }

    #[test]
    fn three_qubit_ket_in_two_qubit_circuit() {
        let e = compile("circuit 2\nassert a: post == |000>\n").unwrap_err();
        assert!(e.message.contains("dimension"), "{e}");
        assert_eq!(e.span, SourceSpan::new(2, 19, 23));
    }

    #[test]
    fn no_asserts_gives_plain_circuit() {
        let Program::Circuit(circ) = compile("circuit 1\nx 0\n").unwrap() else {
            panic!()
        };
        assert_eq!(circ.run().unwrap().amps()[1], c(1.0, 0.0));
    }

    #[test]
    fn out_of_range_qubit_names_line() {
        let e = compile("circuit 2\nh 0\ncx 0 2\n").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(3, 6, 6));
        assert!(e.to_string().contains("line 3"));
    }

    #[test]
    fn unknown_gate_and_arity() {
        let e = compile("circuit 2\nfoo 0\n").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(2, 1, 3));
        let e = compile("circuit 2\ncx 0\n").unwrap_err();
        assert_eq!(e.span.line, 2);
        let e = compile("circuit 1\nrz 0\n").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(2, 1, 2));
    }

    #[test]
    fn sub_blocks_with_pre() {
        let src = "sub flip 1\nx 0\nassert flipped: post == X @ pre\n\
                   circuit 2\nh 1\nflip 0\nflip 1\nassert end: post == |+1>\n";
        let Program::Circuit(circ) = compile(src).unwrap() else {
            panic!()
        };
        let out = circ.run().unwrap();
        assert!(eq_state(&out, &state("|+1>"), 1e-12).unwrap());
        let bad = src.replace("X @ pre", "pre");
        let Program::Circuit(circ) = compile(&bad).unwrap() else {
            panic!()
        };
        let v = match circ.run().unwrap_err() {
            Error::Violation(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(v.tag, "flipped");
        assert_eq!(v.path_string(), "main/1");
    }

    #[test]
    fn partial_pre_state() {
        let src = "sub id2 2\nassert keep: post == pre[1] ^ pre[0]\ncircuit 2\nh 0\nid2 0 1\n";
        let Program::Circuit(circ) = compile(src).unwrap() else {
            panic!()
        };
        circ.run().unwrap();
        let ent =
            "sub id2 2\nassert keep: post == pre[1] ^ pre[0]\ncircuit 2\nh 0\ncx 0 1\nid2 0 1\n";
        let Program::Circuit(circ) = compile(ent).unwrap() else {
            panic!()
        };
        let v = match circ.run().unwrap_err() {
            Error::Violation(v) => v,
            other => panic!("{other:?}"),
        };
        assert_eq!(v.kind, ViolationKind::EntangledSubset);
    }

    #[test]
    fn phase_postprocess() {
        let src = "circuit 2\nx 0\nx 1\nmeasure 1, 0 expect phase in [0.74, 0.76]\n";
        let Program::Measured { circuit, .. } = compile(src).unwrap() else {
            panic!()
        };
        let (v, _) = circuit.run(10, 1).unwrap();
        assert_eq!(v.as_real(), Some(0.75));
    }

    #[test]
    fn sub_name_cannot_shadow_gate() {
        let e = compile("sub h 1\nx 0\ncircuit 1\nh 0\n").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(1, 5, 5));
    }

    #[test]
    fn tolerance_option() {
        let src = "circuit 1\nh 0\nrz(0.001) 0\nassert near: post == |+>\n";
        let file = crate::dsl::parse_file(src).unwrap();
        let Program::Circuit(strict) = elaborate(&file).unwrap() else {
            panic!()
        };
        assert!(strict.run().is_err());
        let loose = ElaborateOptions { tolerance: 1e-3 };
        let Program::Circuit(loose) = elaborate_with(&file, &loose).unwrap() else {
            panic!()
        };
        assert!(loose.run().is_ok());
    }
}
