//! Simulator and verification laboratory for circuits in generalised
//! probabilistic theories (GPTs).
//!
//! A theory is specified by finite lists of states, effects, measurements and
//! reversible generators per system type, all represented as real vectors and
//! matrices in fiducial coordinates ([`theories::TheorySpec`]). Circuits are
//! typed DAGs of outcome-labelled devices ([`model::Circuit`]); closed circuits
//! evaluate to exact joint outcome distributions, and circuits with an open
//! auxiliary register induce linear acceptance maps. On top of the circuit
//! semantics sit verifiers for physical principles (causality, tomographic
//! locality, distinguishability via exact rational linear programming,
//! symmetry search) and an experiment harness for advice/proof protocols
//! (deterministic parity evaluation from PR-type correlations, von Neumann
//! unbiasing, gentle measurement, advice distillation, spectral acceptance
//! bounds and exact gap traces).
//!
//! Scalars are either arbitrary-precision rationals or binary64 floats,
//! selected once per run ([`scalar::Mode`]); all exact-mode arithmetic is
//! rounding-free.

pub mod dsl;
pub mod model;
pub mod numeric;
pub mod par;
pub mod principles;
pub mod protocols;
pub mod scalar;
pub mod theories;

pub use scalar::{Mode, Scalar, DEFAULT_TOL};
