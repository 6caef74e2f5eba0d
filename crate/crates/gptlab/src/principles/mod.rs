//! Verifiers for physical principles on finite theory specifications:
//! causality, tomographic locality (exact rank), perfect distinguishability
//! (exact LP feasibility), completely mixed states and refinement, bounded
//! symmetry search, and the self-dual norms.
//!
//! Principles are universally quantified, so search-based checks can only
//! witness or refute within their bound; inconclusive outcomes are reported
//! as such and never upgraded to passes.

pub mod lp;
mod rank;

pub use rank::exact_rank;

use crate::model::{GEffect, GTransform, GVector, Tensor};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::theories::{quantum, MembershipTag, TheoryError, TheorySpec};
use lp::{LpOutcome, LpProblem};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashSet;

/// Outcome of checking one principle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CausalityReport {
    pub system: String,
    pub verdict: Verdict,
    /// Human-readable witnesses for failures.
    pub failures: Vec<String>,
}

/// Checks that every measurement of each system shares one deterministic
/// effect, and that preparation marginals agree across measurement choices.
pub fn check_causality(theory: &TheorySpec) -> Vec<CausalityReport> {
    let tol = DEFAULT_TOL;
    let mut out = Vec::new();
    for spec in &theory.systems {
        let mut failures = Vec::new();
        for m in &spec.measurements {
            let mut sum = vec![Scalar::zero(theory.mode); spec.system.dim];
            for e in &m.effects {
                for (s, c) in sum.iter_mut().zip(&e.coords) {
                    *s = &*s + c;
                }
            }
            if !sum
                .iter()
                .zip(&spec.unit.coords)
                .all(|(a, b)| a.eq_tol(b, tol))
            {
                failures.push(format!(
                    "measurement `{}` does not sum to the unit effect",
                    m.name
                ));
            }
        }
        // Preparation marginals P(s | M) across measurement pairs.
        for state in &spec.pure_states {
            for i in 0..spec.measurements.len() {
                for j in (i + 1)..spec.measurements.len() {
                    let total = |k: usize| -> Scalar {
                        let mut acc = Scalar::zero(theory.mode);
                        for e in &spec.measurements[k].effects {
                            acc = &acc + &e.apply(state).expect("matching system");
                        }
                        acc
                    };
                    let (a, b) = (total(i), total(j));
                    if !a.eq_tol(&b, tol) {
                        failures.push(format!(
                            "marginal of a preparation differs between `{}` ({a}) and `{}` ({b})",
                            spec.measurements[i].name, spec.measurements[j].name
                        ));
                    }
                }
            }
        }
        out.push(CausalityReport {
            system: spec.system.name.clone(),
            verdict: if failures.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            failures,
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TomographicReport {
    pub systems: (String, String),
    pub state_rank: usize,
    pub effect_rank: usize,
    pub expected: usize,
    pub verdict: Verdict,
}

/// Rank of the span of product states (and dually product effects) must equal
/// `dim(A)·dim(B)`; ranks are exact via fraction-free elimination.
pub fn check_tomographic_locality(
    theory: &TheorySpec,
    a: &str,
    b: &str,
) -> Result<TomographicReport, TheoryError> {
    if theory.mode != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "exact rank needs exact mode".into(),
        ));
    }
    let sa = theory.system(a)?;
    let sb = theory.system(b)?;
    let expected = sa.system.dim * sb.system.dim;
    let mut state_rows = Vec::new();
    for x in &sa.pure_states {
        for y in &sb.pure_states {
            state_rows.push(x.tensor(y)?.coords);
        }
    }
    let mut effect_rows = Vec::new();
    for x in &sa.extremal_effects {
        for y in &sb.extremal_effects {
            effect_rows.push(x.tensor(y)?.coords);
        }
    }
    let state_rank = exact_rank(&state_rows)?;
    let effect_rank = exact_rank(&effect_rows)?;
    Ok(TomographicReport {
        systems: (a.to_string(), b.to_string()),
        state_rank,
        effect_rank,
        expected,
        verdict: if state_rank == expected && effect_rank == expected {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}

/// Result of the perfect-distinguishability decision.
#[derive(Clone, Debug)]
pub enum Distinguishability {
    /// Effects `e_i` with `(e_i|σ_j) = δ_ij` and `Σ e_i = u`.
    Found(Vec<GEffect>),
    /// No such measurement exists; for polytope/simplex theories the exact
    /// Farkas certificate is attached (and has been verified).
    Infeasible {
        certificate: Option<lp::FarkasCertificate>,
        reason: String,
    },
}

/// Decides whether `states` are perfectly distinguishable.
///
/// Polytope and simplex theories run an exact rational LP over the cone of
/// extremal effects. Quantum registers are decided exactly through the
/// algebra: pure states are perfectly distinguishable iff pairwise orthogonal.
pub fn find_distinguishing_measurement(
    theory: &TheorySpec,
    states: &[GVector],
) -> Result<Distinguishability, TheoryError> {
    if states.is_empty() || states.len() > 8 {
        return Err(TheoryError::Guard(
            "distinguishability supports 1..=8 states".into(),
        ));
    }
    if theory.mode != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "distinguishability needs exact mode".into(),
        ));
    }
    let systems = states[0].systems.clone();
    if states.iter().any(|s| s.systems != systems) {
        return Err(TheoryError::Invalid(
            "states live on different registers".into(),
        ));
    }
    match theory.membership {
        MembershipTag::Psd => quantum_distinguishability(theory, states),
        MembershipTag::Simplex | MembershipTag::Polytope => {
            // Extremal effects of the register: products of per-site extremal
            // effects and the per-site unit (the unit is not extremal but is
            // harmless as a generator: it is itself a sum of extremals).
            let mut gens: Vec<GEffect> = Vec::new();
            for ty in &systems {
                let spec = theory.system(&ty.name)?;
                let mut site: Vec<GEffect> = spec.extremal_effects.clone();
                site.push(spec.unit.clone());
                gens = if gens.is_empty() {
                    site
                } else {
                    let mut next = Vec::with_capacity(gens.len() * site.len());
                    for g in &gens {
                        for e in &site {
                            next.push(g.tensor(e)?);
                        }
                    }
                    next
                };
            }
            let unit = theory.unit_for(&systems)?;
            lp_distinguishability(states, &gens, &unit)
        }
    }
}

fn rat(s: &Scalar) -> BigRational {
    s.as_rational().expect("exact mode").clone()
}

fn lp_distinguishability(
    states: &[GVector],
    gens: &[GEffect],
    unit: &GEffect,
) -> Result<Distinguishability, TheoryError> {
    let n = states.len();
    let k = gens.len();
    let dim = unit.coords.len();
    // Variables λ_{i,κ} ≥ 0 with e_i = Σ_κ λ_{i,κ} E_κ.
    let mut prob = LpProblem::new(n * k);
    // (e_i | σ_j) = δ_ij.
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![BigRational::zero(); n * k];
            for (kk, g) in gens.iter().enumerate() {
                row[i * k + kk] = rat(&g.apply(&states[j])?);
            }
            let rhs = if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            prob.equality(row, rhs);
        }
    }
    // Σ_i e_i = u, coordinatewise.
    for d in 0..dim {
        let mut row = vec![BigRational::zero(); n * k];
        for i in 0..n {
            for (kk, g) in gens.iter().enumerate() {
                row[i * k + kk] = rat(&g.coords[d]);
            }
        }
        prob.equality(row, rat(&unit.coords[d]));
    }
    match lp::feasible_point(&prob) {
        Ok(x) => {
            let mut effects = Vec::with_capacity(n);
            for i in 0..n {
                let mut coords = vec![BigRational::zero(); dim];
                for (kk, g) in gens.iter().enumerate() {
                    let lam = &x[i * k + kk];
                    if lam.is_zero() {
                        continue;
                    }
                    for (c, gc) in coords.iter_mut().zip(&g.coords) {
                        *c += lam * &rat(gc);
                    }
                }
                effects.push(GEffect::new(
                    states[0].systems.clone(),
                    coords.into_iter().map(Scalar::Exact).collect(),
                ));
            }
            Ok(Distinguishability::Found(effects))
        }
        Err(cert) => {
            let valid = lp::verify_farkas(&prob, &cert);
            debug_assert!(valid);
            Ok(Distinguishability::Infeasible {
                certificate: Some(cert),
                reason: "the exact LP over the effect cone is infeasible".into(),
            })
        }
    }
}

fn quantum_distinguishability(
    theory: &TheorySpec,
    states: &[GVector],
) -> Result<Distinguishability, TheoryError> {
    let mats: Vec<quantum::CMatrix> = states
        .iter()
        .map(quantum::extract_state)
        .collect::<Result<_, _>>()?;
    for rho in &mats {
        if rho.mul(rho) != *rho {
            return Ok(Distinguishability::Infeasible {
                certificate: None,
                reason:
                    "a state is not a pure projector; the exact quantum route covers pure states"
                        .into(),
            });
        }
    }
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            let prod = mats[i].mul(&mats[j]);
            if prod != quantum::CMatrix::zeros(prod.dim) {
                return Ok(Distinguishability::Infeasible {
                    certificate: None,
                    reason: format!("states {i} and {j} are not orthogonal"),
                });
            }
        }
    }
    // Projective effects P_1..P_{n-1} plus the completion u - Σ P_i.
    let mode = theory.mode;
    let mut effects = Vec::with_capacity(mats.len());
    let unit = theory.unit_for(&states[0].systems)?;
    let mut acc = vec![Scalar::zero(mode); unit.coords.len()];
    for rho in mats.iter().take(mats.len() - 1) {
        let e = quantum::effect_from_matrix(rho, mode)?;
        for (a, c) in acc.iter_mut().zip(&e.coords) {
            *a = &*a + c;
        }
        effects.push(e);
    }
    let last: Vec<Scalar> = unit.coords.iter().zip(&acc).map(|(u, a)| u - a).collect();
    effects.push(GEffect::new(states[0].systems.clone(), last));
    Ok(Distinguishability::Found(effects))
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedStateReport {
    pub state: Vec<Scalar>,
    pub invariant_under_generators: bool,
    /// Per pure state: the maximal `p > 0` with `c − p·ρ` still in the cone
    /// generated by the listed states.
    pub refinement_weights: Vec<Scalar>,
    pub verdict: Verdict,
}

/// The completely mixed state of a system with its refinement structure.
pub fn completely_mixed(
    theory: &TheorySpec,
    system: &str,
) -> Result<(GVector, MixedStateReport), TheoryError> {
    if theory.mode != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "refinement LP needs exact mode".into(),
        ));
    }
    let spec = theory.system(system)?;
    let c = spec.uniform_mixture();
    let invariant = spec.generators.iter().all(|g| {
        g.transform
            .apply(&c)
            .map(|img| img.coords == c.coords)
            .unwrap_or(false)
    });
    let dim = c.coords.len();
    let n = spec.pure_states.len();
    let mut weights = Vec::with_capacity(n);
    let mut all_positive = true;
    for rho in &spec.pure_states {
        // Variables (p, λ_1..λ_n): p·ρ + Σ λ_k s_k = c; maximise p.
        let mut prob = LpProblem::new(1 + n);
        for d in 0..dim {
            let mut row = vec![BigRational::zero(); 1 + n];
            row[0] = rat(&rho.coords[d]);
            for (k, s) in spec.pure_states.iter().enumerate() {
                row[1 + k] = rat(&s.coords[d]);
            }
            prob.equality(row, rat(&c.coords[d]));
        }
        let mut obj = vec![BigRational::zero(); 1 + n];
        obj[0] = -BigRational::one();
        match lp::solve(&prob, Some(&obj)) {
            LpOutcome::Optimal { value, .. } => {
                let p = -value;
                if !p.is_positive() {
                    all_positive = false;
                }
                weights.push(Scalar::Exact(p));
            }
            LpOutcome::Infeasible(_) => {
                all_positive = false;
                weights.push(Scalar::zero(Mode::Exact));
            }
            LpOutcome::Unbounded => {
                return Err(TheoryError::Invalid(
                    "refinement LP unbounded; the state cone is degenerate".into(),
                ))
            }
        }
    }
    let report = MixedStateReport {
        state: c.coords.clone(),
        invariant_under_generators: invariant,
        refinement_weights: weights,
        verdict: if invariant && all_positive {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    };
    Ok((c, report))
}

/// Result of the bounded reversible-symmetry search.
#[derive(Clone, Debug)]
pub enum SymmetrySearch {
    Found {
        word: Vec<String>,
        transform: GTransform,
    },
    /// Exhausted the depth bound: inconclusive, not a disproof.
    NotFound { depth: usize, explored: usize },
}

/// Breadth-first search over the group generated by the register's listed
/// generators for `T` with `T·src_i = dst_i` for all `i`. Matrices are
/// deduplicated by canonical form; the result, if any, is post-verified by
/// multiplication.
pub fn search_symmetry(
    theory: &TheorySpec,
    src: &[GVector],
    dst: &[GVector],
    max_depth: usize,
) -> Result<SymmetrySearch, TheoryError> {
    if src.len() != dst.len() || src.is_empty() {
        return Err(TheoryError::Invalid("tuple length mismatch".into()));
    }
    if max_depth > 12 {
        return Err(TheoryError::Guard("search depth capped at 12".into()));
    }
    let systems = src[0].systems.clone();
    for v in src.iter().chain(dst) {
        if v.systems != systems {
            return Err(TheoryError::Invalid(
                "tuple states live on different registers".into(),
            ));
        }
    }
    let generators = theory.generators_for(&systems)?;
    let tol = DEFAULT_TOL;
    let matches = |t: &GTransform| -> bool {
        src.iter().zip(dst).all(|(s, d)| {
            t.apply(s)
                .map(|img| {
                    img.coords
                        .iter()
                        .zip(&d.coords)
                        .all(|(a, b)| a.eq_tol(b, tol))
                })
                .unwrap_or(false)
        })
    };
    let key = |t: &GTransform| -> String {
        let mut s = String::new();
        for x in &t.matrix {
            s.push_str(&x.to_string());
            s.push(',');
        }
        s
    };
    let identity = GTransform::identity(systems.clone(), theory.mode);
    if matches(&identity) {
        return Ok(SymmetrySearch::Found {
            word: Vec::new(),
            transform: identity,
        });
    }
    let mut visited: HashSet<String> = HashSet::new();
    visited.insert(key(&identity));
    let mut frontier: Vec<(GTransform, Vec<String>)> = vec![(identity, Vec::new())];
    let mut explored = 1usize;
    for _d in 1..=max_depth {
        // Expand the whole frontier in parallel, merge deterministically.
        let expansions = crate::par::indexed_map(frontier.len(), |i| {
            let (t, word) = &frontier[i];
            let mut out = Vec::with_capacity(generators.len());
            for g in &generators {
                if let Ok(next) = crate::model::sequential_compose(&g.transform, t) {
                    let mut w = word.clone();
                    w.push(g.name.clone());
                    out.push((next, w));
                }
            }
            out
        });
        let mut next_frontier = Vec::new();
        for batch in expansions {
            for (t, word) in batch {
                let k = key(&t);
                if visited.insert(k) {
                    explored += 1;
                    if matches(&t) {
                        debug_assert!(matches(&t), "post-verified by multiplication");
                        return Ok(SymmetrySearch::Found { word, transform: t });
                    }
                    next_frontier.push((t, word));
                }
            }
        }
        if next_frontier.is_empty() {
            // Group exhausted below the depth bound: a genuine refutation
            // within the listed generators.
            return Ok(SymmetrySearch::NotFound {
                depth: _d,
                explored,
            });
        }
        frontier = next_frontier;
    }
    Ok(SymmetrySearch::NotFound {
        depth: max_depth,
        explored,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    /// `[v, v]` under the self-dualising pairing, exact (quantum only).
    pub e_pairing: Option<Scalar>,
    /// `‖v‖_E = √[v,v]`.
    pub e_norm: Option<f64>,
    /// `2 · max over effects |(e|v)|`.
    pub phy_norm: f64,
    /// The distinguishability constant: `√d` for d-dimensional quantum
    /// systems; the reciprocal of the completely mixed state's E-norm.
    pub c_constant: Option<f64>,
}

/// Norms of a state-space vector (typically a difference of states).
///
/// Quantum registers use the trace pairing `[ρ,σ] = Tr(ρσ)`, normalised so
/// pure states have unit self-pairing; `phy_norm` is the trace norm of the
/// reconstructed matrix. Polytope theories maximise over extremal product
/// effects and carry no self-dual pairing, so only `phy_norm` is reported.
pub fn norms(theory: &TheorySpec, v: &GVector) -> Result<NormReport, TheoryError> {
    match theory.membership {
        MembershipTag::Psd => {
            let m = quantum::qubits_of_dim(v.dim())
                .ok_or_else(|| TheoryError::Invalid("state dimension is not 4^m".into()))?;
            let d = 1usize << m;
            // [v, v] = 2^{-m} Σ c_P².
            let pairing = match theory.mode {
                Mode::Exact => {
                    let mut acc = BigRational::zero();
                    for c in &v.coords {
                        let r = rat(c);
                        acc += &r * &r;
                    }
                    acc /= BigRational::from_integer(d.into());
                    Scalar::Exact(acc)
                }
                Mode::Approx => {
                    let s: f64 = v.coords.iter().map(|c| c.to_f64().powi(2)).sum();
                    Scalar::Approx(s / d as f64)
                }
            };
            let e_norm = pairing.to_f64().max(0.0).sqrt();
            // phy norm: 2·max(Σλ₊, Σλ₋) of the reconstructed matrix.
            let (re, im) = density_parts_f64(v, m);
            let eigs = crate::numeric::hermitian_eigenvalues(&re, &im, d);
            let pos: f64 = eigs.iter().filter(|&&l| l > 0.0).sum();
            let neg: f64 = eigs.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
            let phy = 2.0 * pos.max(neg);
            Ok(NormReport {
                e_pairing: Some(pairing),
                e_norm: Some(e_norm),
                phy_norm: phy,
                c_constant: Some((d as f64).sqrt()),
            })
        }
        MembershipTag::Simplex | MembershipTag::Polytope => {
            // Maximise |(e|v)| over products of extremal effects and units.
            let mut best = 0.0f64;
            let mut gens: Vec<GEffect> = Vec::new();
            for ty in &v.systems {
                let spec = theory.system(&ty.name)?;
                let mut site = spec.extremal_effects.clone();
                site.push(spec.unit.clone());
                gens = if gens.is_empty() {
                    site
                } else {
                    let mut next = Vec::with_capacity(gens.len() * site.len());
                    for g in &gens {
                        for e in &site {
                            next.push(g.tensor(e)?);
                        }
                    }
                    next
                };
            }
            for e in &gens {
                let val = e.apply(v)?.to_f64().abs();
                if val > best {
                    best = val;
                }
            }
            Ok(NormReport {
                e_pairing: None,
                e_norm: None,
                phy_norm: 2.0 * best,
                c_constant: None,
            })
        }
    }
}

pub(crate) fn density_parts_f64(v: &GVector, m: usize) -> (Vec<f64>, Vec<f64>) {
    use num::ToPrimitive;
    let d = 1usize << m;
    let mut re = vec![0.0; d * d];
    let mut im = vec![0.0; d * d];
    let scale = 1.0 / d as f64;
    for (p, c) in v.coords.iter().enumerate() {
        let w = c.to_f64() * scale;
        if w == 0.0 {
            continue;
        }
        let pm = quantum::pauli_string(p, m);
        for i in 0..d {
            for j in 0..d {
                let e = pm.get(i, j);
                re[i * d + j] += w * e.re.to_f64().unwrap();
                im[i * d + j] += w * e.im.to_f64().unwrap();
            }
        }
    }
    (re, im)
}

/// Reconstructs the effect matrix `Σ_P d_P P` in binary64 parts.
pub(crate) fn effect_parts_f64(e: &GEffect, m: usize) -> (Vec<f64>, Vec<f64>) {
    use num::ToPrimitive;
    let d = 1usize << m;
    let mut re = vec![0.0; d * d];
    let mut im = vec![0.0; d * d];
    for (p, c) in e.coords.iter().enumerate() {
        let w = c.to_f64();
        if w == 0.0 {
            continue;
        }
        let pm = quantum::pauli_string(p, m);
        for i in 0..d {
            for j in 0..d {
                let x = pm.get(i, j);
                re[i * d + j] += w * x.re.to_f64().unwrap();
                im[i * d + j] += w * x.im.to_f64().unwrap();
            }
        }
    }
    (re, im)
}
