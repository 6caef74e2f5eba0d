//! Constructor resolution: maps `.gpc` constructor calls onto theory states
//! and measurements.

use super::ast::{Arg, Ctor};
use super::{DslError, ValidateKind};
use crate::model::{GVector, SystemType, Tensor};
use crate::scalar::{Mode, Scalar};
use crate::theories::{quantum, rho_f, TheorySpec, TruthTable};

fn err(line: usize, kind: ValidateKind, msg: impl Into<String>) -> DslError {
    DslError::Validate {
        line,
        kind,
        msg: msg.into(),
    }
}

fn arg_scalar(a: &Arg, mode: Mode) -> Scalar {
    match *a {
        Arg::Int(n) => Scalar::from_int(n, mode),
        Arg::Ratio(p, q) => Scalar::ratio(p, q, mode),
    }
}

fn arg_usize(a: &Arg, line: usize) -> Result<usize, DslError> {
    match *a {
        Arg::Int(n) if n >= 0 => Ok(n as usize),
        _ => Err(err(
            line,
            ValidateKind::Arity,
            "expected a nonnegative integer argument",
        )),
    }
}

/// Resolves a state constructor for a register of the given system types.
pub fn resolve_state(
    theory: &TheorySpec,
    ctor: &Ctor,
    targets: &[SystemType],
    line: usize,
) -> Result<GVector, DslError> {
    let mode = theory.mode;
    let state = match (theory.name.as_str(), ctor.name.as_str()) {
        (_, "maxmix") => {
            require_args(ctor, 0, line)?;
            let mut out: Option<GVector> = None;
            for ty in targets {
                let m = theory
                    .system(&ty.name)
                    .map_err(|e| err(line, ValidateKind::UnknownSystem, e.to_string()))?
                    .uniform_mixture();
                out = Some(match out {
                    None => m,
                    Some(acc) => acc
                        .tensor(&m)
                        .map_err(|e| err(line, ValidateKind::TypeMismatch, e.to_string()))?,
                });
            }
            out.ok_or_else(|| err(line, ValidateKind::Arity, "maxmix needs a target wire"))?
        }
        ("classical", "basis") => {
            require_args(ctor, 1, line)?;
            let i = arg_usize(&ctor.args[0], line)?;
            basis_product(targets, i, mode, line)?
        }
        ("classical", "dist") => {
            if targets.len() != 1 {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    "dist prepares a single system",
                ));
            }
            let d = targets[0].dim;
            require_args(ctor, d, line)?;
            let coords: Vec<Scalar> = ctor.args.iter().map(|a| arg_scalar(a, mode)).collect();
            let total = Scalar::sum(coords.iter(), mode);
            if !total.is_one_tol(crate::scalar::DEFAULT_TOL)
                || !coords
                    .iter()
                    .all(|c| c.is_nonneg_tol(crate::scalar::DEFAULT_TOL))
            {
                return Err(err(
                    line,
                    ValidateKind::Unphysical,
                    "dist needs a probability vector",
                ));
            }
            GVector::new(targets.to_vec(), coords)
        }
        ("boxworld", "vertex") => {
            if targets.len() != 1 {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    "vertex prepares a single gbit",
                ));
            }
            require_args(ctor, 3, line)?;
            let coords: Vec<Scalar> = ctor.args.iter().map(|a| arg_scalar(a, mode)).collect();
            let v = GVector::new(targets.to_vec(), coords);
            let is_vertex = theory
                .system("gbit")
                .map_err(|e| err(line, ValidateKind::UnknownSystem, e.to_string()))?
                .pure_states
                .iter()
                .any(|s| s.coords == v.coords);
            if !is_vertex {
                return Err(err(
                    line,
                    ValidateKind::Unphysical,
                    "vertex coordinates must be (1, ±1, ±1)",
                ));
            }
            v
        }
        ("boxworld", "box") => {
            // Raw coordinates; membership-checked.
            let dim: usize = targets.iter().map(|t| t.dim).product();
            require_args(ctor, dim, line)?;
            let coords: Vec<Scalar> = ctor.args.iter().map(|a| arg_scalar(a, mode)).collect();
            let v = GVector::new(targets.to_vec(), coords);
            match theory.membership(&v) {
                Ok(true) => v,
                Ok(false) => {
                    return Err(err(
                        line,
                        ValidateKind::Unphysical,
                        "box coordinates fail membership",
                    ))
                }
                Err(e) => return Err(err(line, ValidateKind::Unphysical, e.to_string())),
            }
        }
        ("boxworld", "pr") => {
            require_args(ctor, 0, line)?;
            crate::theories::pr_state(mode)
        }
        ("boxworld", "rhof") => {
            let n_bits = ctor.args.len();
            let arity = n_bits.trailing_zeros() as usize;
            if n_bits == 0 || 1usize << arity != n_bits {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    "rhof takes 2^n truth-table bits",
                ));
            }
            let bits: Vec<bool> = ctor
                .args
                .iter()
                .map(|a| match *a {
                    Arg::Int(0) => Ok(false),
                    Arg::Int(1) => Ok(true),
                    _ => Err(err(line, ValidateKind::Arity, "rhof bits must be 0 or 1")),
                })
                .collect::<Result<_, _>>()?;
            let f = TruthTable::new(arity, bits)
                .map_err(|e| err(line, ValidateKind::Arity, e.to_string()))?;
            rho_f(&f, mode).map_err(|e| err(line, ValidateKind::Arity, e.to_string()))?
        }
        ("quantum", "ket") => {
            require_args(ctor, 1, line)?;
            let i = arg_usize(&ctor.args[0], line)?;
            let m = targets.len();
            let d = 1usize << m;
            if i >= d {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    format!("ket index {i} out of range for {m} qubit(s)"),
                ));
            }
            let mut rho = quantum::CMatrix::zeros(d);
            rho.data[i * d + i] = quantum::CRat::one();
            quantum::embed(&rho, mode)
                .map_err(|e| err(line, ValidateKind::Unphysical, e.to_string()))?
        }
        ("quantum", "plus") | ("quantum", "minus") => {
            require_args(ctor, 0, line)?;
            if targets.len() != 1 {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    "plus/minus prepare one qubit",
                ));
            }
            let sign = if ctor.name == "plus" { 1 } else { -1 };
            GVector::new(
                targets.to_vec(),
                vec![
                    Scalar::one(mode),
                    Scalar::from_int(sign, mode),
                    Scalar::zero(mode),
                    Scalar::zero(mode),
                ],
            )
        }
        _ => {
            return Err(err(
                line,
                ValidateKind::UnknownConstructor,
                format!(
                    "state constructor `{}` for theory `{}`",
                    ctor.name, theory.name
                ),
            ))
        }
    };
    if state.systems.as_slice() != targets {
        return Err(err(
            line,
            ValidateKind::TypeMismatch,
            format!(
                "constructor builds {}, target wires are {}",
                state
                    .systems
                    .iter()
                    .map(|s| s.name.as_str())
                    .collect::<Vec<_>>()
                    .join("⊗"),
                targets
                    .iter()
                    .map(|s| s.name.as_str())
                    .collect::<Vec<_>>()
                    .join("⊗"),
            ),
        ));
    }
    Ok(state)
}

fn basis_product(
    targets: &[SystemType],
    index: usize,
    mode: Mode,
    line: usize,
) -> Result<GVector, DslError> {
    let dim: usize = targets.iter().map(|t| t.dim).product();
    if index >= dim {
        return Err(err(
            line,
            ValidateKind::Arity,
            format!("basis index {index} out of range"),
        ));
    }
    let mut coords = vec![Scalar::zero(mode); dim];
    coords[index] = Scalar::one(mode);
    Ok(GVector::new(targets.to_vec(), coords))
}

fn require_args(ctor: &Ctor, want: usize, line: usize) -> Result<(), DslError> {
    if ctor.args.len() != want {
        return Err(err(
            line,
            ValidateKind::Arity,
            format!(
                "`{}` takes {want} argument(s), got {}",
                ctor.name,
                ctor.args.len()
            ),
        ));
    }
    Ok(())
}

/// Resolves a per-system measurement constructor name.
pub fn resolve_measurement(
    theory: &TheorySpec,
    ctor: &Ctor,
    system: &SystemType,
    line: usize,
) -> Result<Vec<crate::model::GEffect>, DslError> {
    let name = match (theory.name.as_str(), ctor.name.as_str()) {
        ("boxworld", "fiducial") => {
            require_args(ctor, 1, line)?;
            let x = arg_usize(&ctor.args[0], line)?;
            if x > 1 {
                return Err(err(
                    line,
                    ValidateKind::Arity,
                    "fiducial setting must be 0 or 1",
                ));
            }
            format!("fiducial{x}")
        }
        (_, other) => {
            require_args(ctor, 0, line)?;
            other.to_string()
        }
    };
    theory
        .measurement(&system.name, &name)
        .map(|m| m.effects.clone())
        .map_err(|e| err(line, ValidateKind::UnknownConstructor, e.to_string()))
}
