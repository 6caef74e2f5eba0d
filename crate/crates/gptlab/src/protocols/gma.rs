//! Threshold classification of proof-verification circuits via exact gap
//! traces and the spectral sandwich.

use super::spectral::{gap_trace, sigma_max, verify_sigma_bound};
use crate::model::{accept_map, Circuit};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::theories::{TheoryError, TheorySpec};
use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive};
use serde::Serialize;

/// Trusted-advice experiment: a circuit family with one advice state per
/// input length and completeness/soundness thresholds.
pub struct AdviceExperiment<'t> {
    pub theory: &'t TheorySpec,
    pub family: Box<dyn Fn(&[bool]) -> Result<Circuit, TheoryError> + Send + Sync + 't>,
    /// Advice depends only on the input length.
    pub advice: Box<dyn Fn(usize) -> Result<crate::model::GVector, TheoryError> + Send + Sync + 't>,
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl<'t> AdviceExperiment<'t> {
    pub fn with_default_thresholds(
        theory: &'t TheorySpec,
        family: Box<dyn Fn(&[bool]) -> Result<Circuit, TheoryError> + Send + Sync + 't>,
        advice: Box<dyn Fn(usize) -> Result<crate::model::GVector, TheoryError> + Send + Sync + 't>,
    ) -> Self {
        let mode = theory.mode;
        AdviceExperiment {
            theory,
            family,
            advice,
            alpha: Scalar::ratio(2, 3, mode),
            beta: Scalar::ratio(1, 3, mode),
        }
    }

    /// Completeness/soundness acceptance on every input of length `n`, with
    /// the experiment's own advice state.
    pub fn check_thresholds(&self, n: usize) -> Result<Vec<(Vec<bool>, Scalar)>, TheoryError> {
        if self.alpha.to_f64() <= self.beta.to_f64() {
            return Err(TheoryError::Invalid("thresholds need α > β".into()));
        }
        let advice = (self.advice)(n)?;
        let mut out = Vec::new();
        for x in 0..1usize << n {
            let bits: Vec<bool> = (0..n).map(|j| (x >> (n - 1 - j)) & 1 == 1).collect();
            let circuit = (self.family)(&bits)?;
            let p = self.theory.accept_probability(&circuit, &advice)?;
            out.push((bits, p));
        }
        Ok(out)
    }

    /// Runs iterative distillation over all inputs of length `n` with this
    /// experiment's circuits and completeness threshold.
    pub fn distill(
        &self,
        n: usize,
        t_max: usize,
    ) -> Result<crate::protocols::DistillationResult, TheoryError> {
        if self.alpha.to_f64() <= self.beta.to_f64() {
            return Err(TheoryError::Invalid("thresholds need α > β".into()));
        }
        let mut circuits = Vec::new();
        for x in 0..1usize << n {
            let bits: Vec<bool> = (0..n).map(|j| (x >> (n - 1 - j)) & 1 == 1).collect();
            circuits.push((self.family)(&bits)?);
        }
        crate::protocols::advice_distillation(self.theory, &circuits, &self.alpha, t_max)
    }
}

/// Untrusted-proof experiment: the verifier circuit family plus the exponent
/// rule `n ↦ d` for the gap trace.
pub struct ProofExperiment<'t> {
    pub theory: &'t TheorySpec,
    pub family: Box<dyn Fn(&[bool]) -> Result<Circuit, TheoryError> + Send + Sync + 't>,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub d_rule: fn(usize) -> u32,
}

/// The tightest exponent satisfying the growth requirement
/// `2^{n+1} ≤ 4^d`: `d = ⌈(n+1)/2⌉`.
pub fn default_d_rule(n: usize) -> u32 {
    ((n + 2) / 2) as u32
}

/// Exact check of `2^{n+1} ≤ 4^d`.
pub fn d_rule_satisfies_growth(n: usize, d: u32) -> bool {
    // 2^{n+1} ≤ 2^{2d}  ⇔  n + 1 ≤ 2d.
    n + 1 <= 2 * d as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    AcceptSide,
    RejectSide,
    Violation,
}

/// Verified links of the reject-side inequality chain
/// `f(x) ≤ 2^n σ_max^{2d} ≤ 2^n (1/3)^{2d} ≤ ½ (2/3)^{2d}`.
#[derive(Clone, Debug, Serialize)]
pub struct RejectChain {
    pub f_le_2n_sigma: bool,
    pub sigma_le_beta: bool,
    pub growth_arithmetic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// The input as a bit string.
    pub input: String,
    pub n: usize,
    pub d: u32,
    pub sigma_max: f64,
    /// Largest acceptance over physical proof states (exact vertex or
    /// eigenvalue maximisation).
    pub max_accept: f64,
    /// Exact gap trace `Tr((MᵀM)^d)` as a rational.
    pub gap_trace: Scalar,
    /// Accept-side threshold `(2/3)^{2d}`.
    pub accept_threshold: Scalar,
    /// Reject-side threshold `½ (2/3)^{2d}`.
    pub reject_threshold: Scalar,
    pub classification: Classification,
    /// Present when the report classifies reject-side.
    pub reject_chain: Option<RejectChain>,
    /// The normalised spectral bound on acceptance (see `SigmaBoundReport`).
    pub sigma_bound: f64,
    pub bound_holds: bool,
}

/// Classifies each input's circuit by its exact gap trace against the
/// `(2/3)^{2d}` / `½(2/3)^{2d}` thresholds, with the reject-side chain
/// verified on reject-side classifications.
pub fn gma_threshold_report(
    exp: &ProofExperiment<'_>,
    inputs: &[Vec<bool>],
) -> Result<Vec<BoundReport>, TheoryError> {
    if exp.theory.mode != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "threshold reports run in exact mode".into(),
        ));
    }
    for x in inputs {
        let d = (exp.d_rule)(x.len());
        if !d_rule_satisfies_growth(x.len(), d) {
            return Err(TheoryError::Invalid(format!(
                "d rule violates the growth requirement 2^(n+1) <= 4^d at n = {} (d = {d})",
                x.len()
            )));
        }
    }
    // Inputs evaluated independently; merged in input order.
    let results = crate::par::indexed_map(inputs.len(), |i| single_report(exp, &inputs[i]));
    results.into_iter().collect()
}

fn single_report(exp: &ProofExperiment<'_>, x: &[bool]) -> Result<BoundReport, TheoryError> {
    let n = x.len();
    let d = (exp.d_rule)(n);
    let circuit = (exp.family)(x)?;
    let input: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
    circuit_bound_report(exp.theory, &circuit, &input, n, d, &exp.beta)
}

/// Classifies one aux-ported circuit: exact gap trace vs the `(2/3)^{2d}` and
/// `½(2/3)^{2d}` thresholds, the spectral bound report, and the reject-side
/// chain when applicable.
pub fn circuit_bound_report(
    theory: &TheorySpec,
    circuit: &Circuit,
    input: &str,
    n: usize,
    d: u32,
    beta: &Scalar,
) -> Result<BoundReport, TheoryError> {
    let m = accept_map(circuit, true)?;
    let f = gap_trace(&m, d)?;
    let sigma = sigma_max(&m)?;
    let bound = verify_sigma_bound(theory, circuit)?;

    let two_thirds = BigRational::new(BigInt::from(2), BigInt::from(3));
    let accept_threshold = pow_rational(&two_thirds, 2 * d);
    let reject_threshold = &accept_threshold / BigRational::from_integer(2.into());
    let classification = if f >= accept_threshold {
        Classification::AcceptSide
    } else if f <= reject_threshold {
        Classification::RejectSide
    } else {
        Classification::Violation
    };
    let reject_chain = if classification == Classification::RejectSide {
        let beta_f = beta.to_f64();
        let sigma_slack = sigma + DEFAULT_TOL;
        let f_f64 = f.to_f64().unwrap_or(f64::INFINITY);
        let two_n = (1u64 << n) as f64;
        let f_le_2n_sigma = f_f64 <= two_n * sigma_slack.powi(2 * d as i32) + DEFAULT_TOL;
        let sigma_le_beta = sigma <= beta_f + DEFAULT_TOL;
        // 2^n (1/3)^{2d} ≤ ½ (2/3)^{2d} ⇔ 2^{n+1} ≤ 4^d, exactly.
        let growth_arithmetic = d_rule_satisfies_growth(n, d);
        Some(RejectChain {
            f_le_2n_sigma,
            sigma_le_beta,
            growth_arithmetic,
        })
    } else {
        None
    };
    Ok(BoundReport {
        input: input.to_string(),
        n,
        d,
        sigma_max: sigma,
        max_accept: bound.max_accept,
        gap_trace: Scalar::Exact(f),
        accept_threshold: Scalar::Exact(accept_threshold),
        reject_threshold: Scalar::Exact(reject_threshold),
        classification,
        reject_chain,
        sigma_bound: bound.sigma_bound,
        bound_holds: bound.bound_holds,
    })
}

fn pow_rational(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}
