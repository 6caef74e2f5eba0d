//! Canonical pretty-printer; `parse(print(ast))` is the identity on ASTs.

use super::ast::{BoolAst, CircuitAst, Ctor, StmtKind};
use std::fmt::Write;

fn level(e: &BoolAst) -> u8 {
    match e {
        BoolAst::Eq(..) => 0,
        BoolAst::Or(..) => 1,
        BoolAst::And(..) => 2,
        BoolAst::Xor(..) => 3,
        BoolAst::Not(..) => 4,
        BoolAst::Int(_) | BoolAst::Var(_) => 5,
    }
}

fn print_expr(e: &BoolAst, parent: u8, out: &mut String) {
    let me = level(e);
    let parens = me < parent;
    if parens {
        out.push('(');
    }
    match e {
        BoolAst::Int(n) => {
            write!(out, "{n}").unwrap();
        }
        BoolAst::Var(v) => out.push_str(v),
        BoolAst::Not(a) => {
            out.push_str("not ");
            print_expr(a, 4, out);
        }
        BoolAst::Xor(a, b) => {
            print_expr(a, 3, out);
            out.push_str(" xor ");
            print_expr(b, 4, out);
        }
        BoolAst::And(a, b) => {
            print_expr(a, 2, out);
            out.push_str(" and ");
            print_expr(b, 3, out);
        }
        BoolAst::Or(a, b) => {
            print_expr(a, 1, out);
            out.push_str(" or ");
            print_expr(b, 2, out);
        }
        BoolAst::Eq(a, b) => {
            print_expr(a, 1, out);
            out.push_str(" == ");
            print_expr(b, 1, out);
        }
    }
    if parens {
        out.push(')');
    }
}

fn print_ctor(c: &Ctor, out: &mut String) {
    out.push_str(&c.name);
    out.push('(');
    for (i, a) in c.args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{a}").unwrap();
    }
    out.push(')');
}

fn join(names: &[String]) -> String {
    names.join(", ")
}

/// Canonical text form of an AST.
pub fn print(ast: &CircuitAst) -> String {
    let mut out = String::new();
    writeln!(out, "theory {}", ast.theory).unwrap();
    for stmt in &ast.statements {
        match &stmt.kind {
            StmtKind::System { name, ty } => writeln!(out, "system {name}:{ty}").unwrap(),
            StmtKind::Aux { name, ty } => writeln!(out, "aux {name}:{ty}").unwrap(),
            StmtKind::Prepare { ctor, wires } => {
                out.push_str("prepare ");
                print_ctor(ctor, &mut out);
                writeln!(out, " -> {}", join(wires)).unwrap();
            }
            StmtKind::Apply {
                gate,
                inputs,
                outputs,
            } => {
                writeln!(out, "apply {gate} {} -> {}", join(inputs), join(outputs)).unwrap();
            }
            StmtKind::Measure { ctor, wires, vars } => {
                out.push_str("measure ");
                print_ctor(ctor, &mut out);
                writeln!(out, " {} -> {}", join(wires), join(vars)).unwrap();
            }
            StmtKind::PostSelect { expr } => {
                out.push_str("post-select ");
                print_expr(expr, 0, &mut out);
                out.push('\n');
            }
        }
    }
    out.push_str("accept ");
    print_expr(&ast.accept, 0, &mut out);
    out.push('\n');
    out
}
