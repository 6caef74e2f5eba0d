//! Type-checking and elaboration of ASTs into core circuits.

use super::ast::{BoolAst, CircuitAst, StmtKind};
use super::resolve::{resolve_measurement, resolve_state};
use super::{DslError, ValidateKind};
use crate::model::{AcceptExpr, Circuit, CircuitBuilder, Device, OutcomeVar, SystemType};
use crate::theories::TheorySpec;
use std::collections::HashMap;

fn err(line: usize, kind: ValidateKind, msg: impl Into<String>) -> DslError {
    DslError::Validate {
        line,
        kind,
        msg: msg.into(),
    }
}

struct NameEnv {
    /// Declared wire names and their types.
    types: HashMap<String, SystemType>,
    /// Currently live wire instance per name.
    live: HashMap<String, usize>,
    /// Outcome variable bindings.
    vars: HashMap<String, OutcomeVar>,
}

impl NameEnv {
    fn take_live(&mut self, name: &str, line: usize) -> Result<usize, DslError> {
        if !self.types.contains_key(name) {
            return Err(err(
                line,
                ValidateKind::UnknownSystem,
                format!("wire `{name}` is not declared"),
            ));
        }
        self.live.remove(name).ok_or_else(|| {
            err(
                line,
                ValidateKind::WireUnavailable,
                format!("wire `{name}` has no live value here"),
            )
        })
    }

    fn bind_live(&mut self, name: &str, wire: usize, line: usize) -> Result<(), DslError> {
        if !self.types.contains_key(name) {
            return Err(err(
                line,
                ValidateKind::UnknownSystem,
                format!("wire `{name}` is not declared"),
            ));
        }
        if self.live.insert(name.to_string(), wire).is_some() {
            return Err(err(
                line,
                ValidateKind::WireUnavailable,
                format!("wire `{name}` already holds a live value"),
            ));
        }
        Ok(())
    }
}

fn compile_expr(
    e: &BoolAst,
    vars: &HashMap<String, OutcomeVar>,
    line: usize,
) -> Result<AcceptExpr, DslError> {
    Ok(match e {
        BoolAst::Int(n) => AcceptExpr::Lit(*n),
        BoolAst::Var(name) => {
            let v = vars.get(name).ok_or_else(|| {
                err(
                    line,
                    ValidateKind::UnboundVariable,
                    format!("outcome variable `{name}` is not bound"),
                )
            })?;
            AcceptExpr::Var(*v)
        }
        BoolAst::Not(a) => AcceptExpr::not(compile_expr(a, vars, line)?),
        BoolAst::Xor(a, b) => {
            AcceptExpr::xor(compile_expr(a, vars, line)?, compile_expr(b, vars, line)?)
        }
        BoolAst::And(a, b) => {
            AcceptExpr::and(compile_expr(a, vars, line)?, compile_expr(b, vars, line)?)
        }
        BoolAst::Or(a, b) => {
            AcceptExpr::or(compile_expr(a, vars, line)?, compile_expr(b, vars, line)?)
        }
        BoolAst::Eq(a, b) => {
            AcceptExpr::eq(compile_expr(a, vars, line)?, compile_expr(b, vars, line)?)
        }
    })
}

/// Type-checks the AST against a theory and builds the core circuit. The
/// auxiliary register is ordered as declared.
pub fn validate(ast: &CircuitAst, theory: &TheorySpec) -> Result<Circuit, DslError> {
    validate_with_bindings(ast, theory).map(|(c, _)| c)
}

/// Like [`validate`], also returning the outcome-variable bindings
/// `(name, device index)` in binding order.
pub fn validate_with_bindings(
    ast: &CircuitAst,
    theory: &TheorySpec,
) -> Result<(Circuit, Vec<(String, usize)>), DslError> {
    let mut env = NameEnv {
        types: HashMap::new(),
        live: HashMap::new(),
        vars: HashMap::new(),
    };
    let mut b = CircuitBuilder::new();
    let mut post_select: Option<AcceptExpr> = None;

    for stmt in &ast.statements {
        let line = stmt.line;
        match &stmt.kind {
            StmtKind::System { name, ty } | StmtKind::Aux { name, ty } => {
                let spec = theory
                    .system(ty)
                    .map_err(|e| err(line, ValidateKind::UnknownSystem, e.to_string()))?;
                if env
                    .types
                    .insert(name.clone(), spec.system.clone())
                    .is_some()
                {
                    return Err(err(
                        line,
                        ValidateKind::DuplicateBinding,
                        format!("wire name `{name}` declared twice"),
                    ));
                }
                if matches!(stmt.kind, StmtKind::Aux { .. }) {
                    let w = b.aux(spec.system.clone());
                    env.bind_live(name, w, line)?;
                }
            }
            StmtKind::Prepare { ctor, wires } => {
                let targets: Vec<SystemType> = wires
                    .iter()
                    .map(|w| {
                        env.types.get(w).cloned().ok_or_else(|| {
                            err(
                                line,
                                ValidateKind::UnknownSystem,
                                format!("wire `{w}` is not declared"),
                            )
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let state = resolve_state(theory, ctor, &targets, line)?;
                let (_, outs) = b.prepare(Device::preparation(ctor.name.clone(), vec![state]));
                for (w, wire) in wires.iter().zip(outs) {
                    env.bind_live(w, wire, line)?;
                }
            }
            StmtKind::Apply {
                gate,
                inputs,
                outputs,
            } => {
                let g = theory
                    .gate(gate)
                    .map_err(|e| err(line, ValidateKind::UnknownGate, e.to_string()))?;
                if inputs.len() != g.transform.in_systems.len()
                    || outputs.len() != g.transform.out_systems.len()
                {
                    return Err(err(
                        line,
                        ValidateKind::Arity,
                        format!("gate `{gate}` arity mismatch"),
                    ));
                }
                let mut in_wires = Vec::new();
                for (name, want) in inputs.iter().zip(&g.transform.in_systems) {
                    let got = env.types.get(name).cloned().ok_or_else(|| {
                        err(
                            line,
                            ValidateKind::UnknownSystem,
                            format!("wire `{name}` is not declared"),
                        )
                    })?;
                    if got != *want {
                        return Err(err(
                            line,
                            ValidateKind::TypeMismatch,
                            format!(
                                "gate `{gate}` expects {} on `{name}`, found {}",
                                want.name, got.name
                            ),
                        ));
                    }
                    in_wires.push(env.take_live(name, line)?);
                }
                let (_, outs) = b.apply(
                    Device::transformation(gate.clone(), vec![g.transform.clone()]),
                    &in_wires,
                );
                for ((name, wire), want) in outputs.iter().zip(outs).zip(&g.transform.out_systems) {
                    let got = env.types.get(name).cloned().ok_or_else(|| {
                        err(
                            line,
                            ValidateKind::UnknownSystem,
                            format!("wire `{name}` is not declared"),
                        )
                    })?;
                    if got != *want {
                        return Err(err(
                            line,
                            ValidateKind::TypeMismatch,
                            format!(
                                "gate `{gate}` outputs {} into `{name}` of type {}",
                                want.name, got.name
                            ),
                        ));
                    }
                    env.bind_live(name, wire, line)?;
                }
            }
            StmtKind::Measure { ctor, wires, vars } => {
                if wires.len() != vars.len() {
                    return Err(err(
                        line,
                        ValidateKind::Arity,
                        "measure needs one outcome variable per wire",
                    ));
                }
                for (wname, vname) in wires.iter().zip(vars) {
                    let ty = env.types.get(wname).cloned().ok_or_else(|| {
                        err(
                            line,
                            ValidateKind::UnknownSystem,
                            format!("wire `{wname}` is not declared"),
                        )
                    })?;
                    let effects = resolve_measurement(theory, ctor, &ty, line)?;
                    let wire = env.take_live(wname, line)?;
                    let var = b.measure(Device::measurement(ctor.name.clone(), effects), &[wire]);
                    if env.vars.insert(vname.clone(), var).is_some() {
                        return Err(err(
                            line,
                            ValidateKind::DuplicateBinding,
                            format!("outcome variable `{vname}` bound twice"),
                        ));
                    }
                }
            }
            StmtKind::PostSelect { expr } => {
                let compiled = compile_expr(expr, &env.vars, line)?;
                post_select = Some(match post_select.take() {
                    None => compiled,
                    Some(prev) => AcceptExpr::and(prev, compiled),
                });
            }
        }
    }
    let accept = compile_expr(&ast.accept, &env.vars, ast.accept_line)?;
    if let Some(ps) = post_select {
        b.post_select(ps);
    }
    let circuit = b.finish(accept);
    // Surface wiring problems (cycles cannot arise from the linear statement
    // form, but type checks run once more here).
    circuit
        .topological_order()
        .map_err(|e| err(ast.accept_line, ValidateKind::TypeMismatch, e.to_string()))?;
    let mut bindings: Vec<(String, usize)> = env
        .vars
        .into_iter()
        .map(|(name, OutcomeVar(d))| (name, d))
        .collect();
    bindings.sort_by_key(|(_, d)| *d);
    Ok((circuit, bindings))
}
