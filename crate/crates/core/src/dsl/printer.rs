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

use std::fmt::Write;

use super::ast::*;

/// Prints an expression with every binary operation parenthesized.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn write_list(out: &mut String, items: &[Expr]) {
    for (k, e) in items.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.node {
        ExprKind::Number(x) => write!(out, "{x}").unwrap(),
        ExprKind::Imag(x) => write!(out, "{x}i").unwrap(),
        ExprKind::Pi => out.push_str("pi"),
        ExprKind::Ket(labels) => write!(out, "|{labels}>").unwrap(),
        ExprKind::Ident(name) => out.push_str(name),
        ExprKind::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            write_list(out, args);
            out.push(')');
        }
        ExprKind::Pre(None) => out.push_str("pre"),
        ExprKind::Pre(Some((lo, hi))) => write!(out, "pre[{lo}..{hi}]").unwrap(),
        ExprKind::Matrix(rows) => {
            out.push('[');
            for (k, row) in rows.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push('[');
                write_list(out, row);
                out.push(']');
            }
            out.push(']');
        }
        ExprKind::Binary(op, a, b) => {
            out.push('(');
            write_expr(out, a);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, b);
            out.push(')');
        }
        ExprKind::Neg(a) => {
            out.push('-');
            write_expr(out, a);
        }
        ExprKind::Adjoint(a) => {
            out.push('~');
            write_expr(out, a);
        }
    }
}

fn write_block(out: &mut String, header: &str, block: &Block) {
    writeln!(out, "{header} {}", block.size.node).unwrap();
    for stmt in &block.statements {
        match &stmt.node {
            Statement::Apply {
                name,
                params,
                qubits,
            } => {
                out.push_str(&name.node);
                if !params.is_empty() {
                    out.push('(');
                    write_list(out, params);
                    out.push(')');
                }
                for q in qubits {
                    write!(out, " {}", q.node).unwrap();
                }
                out.push('\n');
            }
            Statement::Assert { tag, expected } => {
                writeln!(out, "assert {}: post == {}", tag.node, print_expr(expected)).unwrap();
            }
        }
    }
}

/// Prints a file in canonical form; the output reparses to the same tree.
pub fn print_file(file: &CircuitFile) -> String {
    let mut out = String::new();
    for sub in &file.subs {
        write_block(&mut out, &format!("sub {}", sub.name.node), sub);
    }
    write_block(&mut out, "circuit", &file.main);
    if let Some(m) = &file.measure {
        let m = &m.node;
        let qubits: Vec<String> = m.qubits.iter().map(|q| q.node.to_string()).collect();
        write!(out, "measure {}", qubits.join(", ")).unwrap();
        if let Some(shots) = &m.shots {
            write!(out, " shots {}", shots.node).unwrap();
        }
        match &m.expect {
            Some((lo, hi)) => write!(
                out,
                " expect {} in [{}, {}]",
                m.postprocess.node.name(),
                print_expr(lo),
                print_expr(hi)
            )
            .unwrap(),
            None => write!(out, " post {}", m.postprocess.node.name()).unwrap(),
        }
        out.push('\n');
    }
    out
}
