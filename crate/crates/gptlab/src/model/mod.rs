//! Vector-space semantics of GPT circuits: states, effects and
//! transformations in fiducial coordinates, devices with outcome-labelled
//! components, typed circuit DAGs, closed-circuit evaluation, acceptance
//! maps, post-selection and sampling.

mod circuit;
mod distribution;
mod eval;
mod expr;

pub use circuit::{Circuit, CircuitBuilder, Device, DeviceKind, OutcomeVar, Wire, WireSource};
pub use distribution::{post_select, sample, OutcomeDistribution};
pub use eval::{accept_map, accept_probability, evaluate_closed, plug_aux};
pub use expr::AcceptExpr;

use crate::scalar::{Mode, Scalar};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Hard cap on the number of joint outcome strings a circuit may enumerate.
pub const MAX_OUTCOME_STRINGS: usize = 1 << 20;
/// Hard cap on the entry count of any intermediate contraction matrix.
pub const MAX_LIVE_ENTRIES: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("system type mismatch: expected {expected}, got {got}")]
    TypeMismatch { expected: String, got: String },
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("circuit has open ports: {0}")]
    OpenPorts(String),
    #[error("circuit is closed (no auxiliary ports)")]
    NoAuxPorts,
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("post-selection impossible: the selected event has probability zero")]
    PostSelectionImpossible,
    #[error("distribution is not normalised (total {0})")]
    Unnormalised(String),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// A system type: a label plus its fiducial representation dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemType {
    pub name: String,
    pub dim: usize,
}

impl SystemType {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        SystemType {
            name: name.into(),
            dim,
        }
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

pub(crate) fn total_dim(systems: &[SystemType]) -> usize {
    systems.iter().map(|s| s.dim).product()
}

pub(crate) fn systems_label(systems: &[SystemType]) -> String {
    if systems.is_empty() {
        "I".to_string()
    } else {
        systems
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

/// A state vector in fiducial coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GVector {
    pub systems: Vec<SystemType>,
    pub coords: Vec<Scalar>,
    /// Classical pointer value attached to the preparation, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome_label: Option<usize>,
}

impl GVector {
    pub fn new(systems: Vec<SystemType>, coords: Vec<Scalar>) -> Self {
        assert_eq!(
            total_dim(&systems),
            coords.len(),
            "coordinate length mismatch"
        );
        GVector {
            systems,
            coords,
            outcome_label: None,
        }
    }

    pub fn mode(&self) -> Mode {
        self.coords.first().map_or(Mode::Exact, Scalar::mode)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// An effect (dual vector) in fiducial coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GEffect {
    pub systems: Vec<SystemType>,
    pub coords: Vec<Scalar>,
}

impl GEffect {
    pub fn new(systems: Vec<SystemType>, coords: Vec<Scalar>) -> Self {
        assert_eq!(
            total_dim(&systems),
            coords.len(),
            "coordinate length mismatch"
        );
        GEffect { systems, coords }
    }

    pub fn mode(&self) -> Mode {
        self.coords.first().map_or(Mode::Exact, Scalar::mode)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The pairing `(e|s)`.
    pub fn apply(&self, state: &GVector) -> Result<Scalar> {
        if self.systems != state.systems {
            return Err(ModelError::TypeMismatch {
                expected: systems_label(&self.systems),
                got: systems_label(&state.systems),
            });
        }
        let mode = state.mode();
        let mut acc = Scalar::zero(mode);
        for (e, s) in self.coords.iter().zip(&state.coords) {
            acc = &acc + &(e * s);
        }
        Ok(acc)
    }
}

/// A linear map between fiducial coordinate spaces, stored row-major
/// (`out_dim × in_dim`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GTransform {
    pub in_systems: Vec<SystemType>,
    pub out_systems: Vec<SystemType>,
    pub matrix: Vec<Scalar>,
}

impl GTransform {
    pub fn new(
        in_systems: Vec<SystemType>,
        out_systems: Vec<SystemType>,
        matrix: Vec<Scalar>,
    ) -> Self {
        assert_eq!(
            total_dim(&in_systems) * total_dim(&out_systems),
            matrix.len(),
            "matrix shape mismatch"
        );
        GTransform {
            in_systems,
            out_systems,
            matrix,
        }
    }

    pub fn identity(systems: Vec<SystemType>, mode: Mode) -> Self {
        let d = total_dim(&systems);
        let mut m = vec![Scalar::zero(mode); d * d];
        for i in 0..d {
            m[i * d + i] = Scalar::one(mode);
        }
        GTransform::new(systems.clone(), systems, m)
    }

    pub fn in_dim(&self) -> usize {
        total_dim(&self.in_systems)
    }

    pub fn out_dim(&self) -> usize {
        total_dim(&self.out_systems)
    }

    pub fn mode(&self) -> Mode {
        self.matrix.first().map_or(Mode::Exact, Scalar::mode)
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.matrix[row * self.in_dim() + col]
    }

    /// Applies the map to a state.
    pub fn apply(&self, state: &GVector) -> Result<GVector> {
        if self.in_systems != state.systems {
            return Err(ModelError::TypeMismatch {
                expected: systems_label(&self.in_systems),
                got: systems_label(&state.systems),
            });
        }
        let mode = state.mode();
        let (rows, cols) = (self.out_dim(), self.in_dim());
        let mut out = vec![Scalar::zero(mode); rows];
        for r in 0..rows {
            let mut acc = Scalar::zero(mode);
            for c in 0..cols {
                let m = &self.matrix[r * cols + c];
                if !m.is_zero() {
                    acc = &acc + &(m * &state.coords[c]);
                }
            }
            out[r] = acc;
        }
        Ok(GVector::new(self.out_systems.clone(), out))
    }

    pub fn transpose(&self) -> GTransform {
        let (rows, cols) = (self.out_dim(), self.in_dim());
        let mode = self.mode();
        let mut m = vec![Scalar::zero(mode); rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                m[c * rows + r] = self.matrix[r * cols + c].clone();
            }
        }
        GTransform::new(self.out_systems.clone(), self.in_systems.clone(), m)
    }
}

fn kron(
    a: &[Scalar],
    (ar, ac): (usize, usize),
    b: &[Scalar],
    (br, bc): (usize, usize),
) -> Vec<Scalar> {
    let mode = a
        .first()
        .or_else(|| b.first())
        .map_or(Mode::Exact, Scalar::mode);
    let mut out = vec![Scalar::zero(mode); ar * br * ac * bc];
    let cols = ac * bc;
    for i1 in 0..ar {
        for j1 in 0..ac {
            let x = &a[i1 * ac + j1];
            if x.is_zero() {
                continue;
            }
            for i2 in 0..br {
                for j2 in 0..bc {
                    let y = &b[i2 * bc + j2];
                    if y.is_zero() {
                        continue;
                    }
                    out[(i1 * br + i2) * cols + (j1 * bc + j2)] = x * y;
                }
            }
        }
    }
    out
}

fn check_modes(a: Mode, b: Mode) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(ModelError::ModeMismatch)
    }
}

/// Parallel composition of values of the same kind: Kronecker product in
/// row-major port order; system lists concatenate.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl Tensor for GVector {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode(), other.mode())?;
        let coords = kron(
            &self.coords,
            (self.dim(), 1),
            &other.coords,
            (other.dim(), 1),
        );
        let mut systems = self.systems.clone();
        systems.extend(other.systems.iter().cloned());
        Ok(GVector::new(systems, coords))
    }
}

impl Tensor for GEffect {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode(), other.mode())?;
        let coords = kron(
            &self.coords,
            (1, self.dim()),
            &other.coords,
            (1, other.dim()),
        );
        let mut systems = self.systems.clone();
        systems.extend(other.systems.iter().cloned());
        Ok(GEffect::new(systems, coords))
    }
}

impl Tensor for GTransform {
    fn tensor(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode(), other.mode())?;
        let m = kron(
            &self.matrix,
            (self.out_dim(), self.in_dim()),
            &other.matrix,
            (other.out_dim(), other.in_dim()),
        );
        let mut in_systems = self.in_systems.clone();
        in_systems.extend(other.in_systems.iter().cloned());
        let mut out_systems = self.out_systems.clone();
        out_systems.extend(other.out_systems.iter().cloned());
        Ok(GTransform::new(in_systems, out_systems, m))
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

/// Sequential composition `t2 ∘ t1` (first `t1`, then `t2`): matrix product.
pub fn sequential_compose(t2: &GTransform, t1: &GTransform) -> Result<GTransform> {
    check_modes(t1.mode(), t2.mode())?;
    if t2.in_systems != t1.out_systems {
        return Err(ModelError::Wiring(format!(
            "sequential composition type mismatch: {} feeds {}",
            systems_label(&t1.out_systems),
            systems_label(&t2.in_systems),
        )));
    }
    let mode = t1.mode();
    let (m, k, n) = (t2.out_dim(), t2.in_dim(), t1.in_dim());
    let mut out = vec![Scalar::zero(mode); m * n];
    for i in 0..m {
        for l in 0..k {
            let x = &t2.matrix[i * k + l];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &t1.matrix[l * n + j];
                if y.is_zero() {
                    continue;
                }
                out[i * n + j] = &out[i * n + j] + &(x * y);
            }
        }
    }
    Ok(GTransform::new(
        t1.in_systems.clone(),
        t2.out_systems.clone(),
        out,
    ))
}

/// Entrywise sums of device outcome components over a disjoint partition of
/// the outcome set.
pub fn coarse_grain(dev: &Device, partition: &[Vec<usize>]) -> Result<Device> {
    let n = dev.n_outcomes();
    let mut seen = vec![false; n];
    for cell in partition {
        for &i in cell {
            if i >= n {
                return Err(ModelError::BadPartition(format!(
                    "outcome {i} out of range"
                )));
            }
            if seen[i] {
                return Err(ModelError::BadPartition(format!(
                    "outcome {i} appears twice"
                )));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(ModelError::BadPartition(
            "partition does not cover all outcomes".into(),
        ));
    }
    dev.coarse_grained(partition)
}

#[cfg(test)]
mod tests;
