//! Protocol experiments: deterministic parity evaluation from PR-type
//! advice, von Neumann unbiasing, permutation dynamics, measurement updates,
//! the gentle-measurement sweep, majority amplification, advice distillation
//! and post-selected acceptance checks.

use crate::model::{
    evaluate_closed, post_select, AcceptExpr, Circuit, CircuitBuilder, Device, GEffect, GTransform,
    GVector, SystemType, Wire, WireSource,
};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::theories::{quantum, rho_f, TheoryError, TheorySpec, TruthTable};
use num::rational::BigRational;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

/// Builds the n-party parity circuit: prepare `ρ_f`, measure party `j` with
/// fiducial setting `x_j`, accept on odd parity.
pub fn parity_circuit(
    theory: &TheorySpec,
    f: &TruthTable,
    x: &[bool],
) -> Result<Circuit, TheoryError> {
    if x.len() != f.arity {
        return Err(TheoryError::Invalid(format!(
            "input length {} does not match arity {}",
            x.len(),
            f.arity
        )));
    }
    let state = rho_f(f, theory.mode)?;
    let mut b = CircuitBuilder::new();
    let (_, wires) = b.prepare(Device::preparation("rho_f", vec![state]));
    let mut vars = Vec::with_capacity(x.len());
    for (j, &w) in wires.iter().enumerate() {
        let name = if x[j] { "fiducial1" } else { "fiducial0" };
        let m = theory.measurement("gbit", name)?;
        vars.push(b.measure(Device::measurement(name, m.effects.clone()), &[w]));
    }
    Ok(b.finish(AcceptExpr::eq(AcceptExpr::parity(vars), AcceptExpr::Lit(1))))
}

/// Evaluates `f(x)` through the advice state: in exact mode every supported
/// outcome string has parity `f(x)`, so the returned bit is deterministic.
pub fn advice_parity_eval(
    theory: &TheorySpec,
    f: &TruthTable,
    x: &[bool],
) -> Result<bool, TheoryError> {
    let circuit = parity_circuit(theory, f, x)?;
    let dist = evaluate_closed(&circuit)?;
    let mut parity: Option<usize> = None;
    for (string, p) in dist.iter() {
        if p.is_zero() {
            continue;
        }
        // string[0] is the preparation pointer; the rest are party outcomes.
        let bit = string[1..].iter().fold(0usize, |acc, &a| acc ^ a);
        match parity {
            None => parity = Some(bit),
            Some(prev) if prev != bit => {
                return Err(TheoryError::Invalid(
                    "outcome support has mixed parity; the advice state is corrupted".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(parity.expect("closed circuits have support") == 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct VonNeumannReport {
    pub pairs: usize,
    pub kept: usize,
    pub ones: usize,
    pub p: f64,
    pub p_hat_one: f64,
    pub keep_rate: f64,
    pub expected_keep_rate: f64,
    pub seed: u64,
}

/// Von Neumann unbiasing: measure two fresh copies of `y` per round, output
/// 0 on outcomes `01`, 1 on `10`, discard `00`/`11`.
pub fn von_neumann_bit(
    y: &GVector,
    e0: &GEffect,
    n_pairs: usize,
    seed: u64,
) -> Result<(Vec<u8>, VonNeumannReport), TheoryError> {
    let p = e0.apply(y)?.to_f64();
    if !(p > 0.0 && p < 1.0) {
        return Err(TheoryError::Invalid(format!(
            "state is deterministic for this effect (p = {p}); unbiasing needs 0 < p < 1"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut bits = Vec::new();
    let mut ones = 0usize;
    for _ in 0..n_pairs {
        let a = !(rng.gen::<f64>() < p) as u8; // outcome 0 with probability p
        let b = !(rng.gen::<f64>() < p) as u8;
        match (a, b) {
            (0, 1) => bits.push(0),
            (1, 0) => {
                bits.push(1);
                ones += 1;
            }
            _ => {}
        }
    }
    let kept = bits.len();
    let report = VonNeumannReport {
        pairs: n_pairs,
        kept,
        ones,
        p,
        p_hat_one: if kept > 0 {
            ones as f64 / kept as f64
        } else {
            f64::NAN
        },
        keep_rate: kept as f64 / n_pairs as f64,
        expected_keep_rate: 2.0 * p * (1.0 - p),
        seed,
    };
    Ok((bits, report))
}

/// The reversible transformation `T_f |x⟩ = |f(x)⟩` of a bijection on n-bit
/// strings, as a permutation matrix over n classical bits.
pub fn permutation_transform(images: &[usize], mode: Mode) -> Result<GTransform, TheoryError> {
    let size = images.len();
    if !size.is_power_of_two() || size < 2 {
        return Err(TheoryError::Invalid(
            "the table must cover all n-bit strings".into(),
        ));
    }
    let n = size.trailing_zeros() as usize;
    if n > 10 {
        return Err(TheoryError::Guard(
            "permutation dynamics capped at 10 bits".into(),
        ));
    }
    let mut seen = vec![false; size];
    for &img in images {
        if img >= size || seen[img] {
            return Err(TheoryError::Invalid(
                "the function is not a bijection".into(),
            ));
        }
        seen[img] = true;
    }
    let bit = SystemType::new("bit", 2);
    let mut m = vec![Scalar::zero(mode); size * size];
    for (x, &fx) in images.iter().enumerate() {
        m[fx * size + x] = Scalar::one(mode);
    }
    Ok(GTransform::new(vec![bit.clone(); n], vec![bit; n], m))
}

/// Post-measurement state update for pure effects in a self-dual theory: the
/// state collapses to the unique pure state dual to the observed effect.
/// Repeatability holds: a state already giving the outcome with certainty is
/// left unchanged.
pub fn measurement_update(
    theory: &TheorySpec,
    state: &GVector,
    effect: &GEffect,
) -> Result<GVector, TheoryError> {
    if theory.membership != crate::theories::MembershipTag::Psd {
        return Err(TheoryError::Unsupported(
            "the update rule needs the self-dual (quantum) pairing".into(),
        ));
    }
    if theory.mode != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "measurement update runs in exact mode".into(),
        ));
    }
    let e_mat = quantum::extract_effect(effect)?;
    if e_mat.mul(&e_mat) != e_mat || e_mat.trace() != quantum::CRat::one() {
        return Err(TheoryError::Invalid(
            "the effect is not a rank-one projector (pure effect required)".into(),
        ));
    }
    let prob = effect.apply(state)?;
    if !prob.is_nonneg_tol(0.0) || prob.is_zero() {
        return Err(TheoryError::Model(
            crate::model::ModelError::PostSelectionImpossible,
        ));
    }
    // Dual pure state: coordinates 2^m · effect coordinates.
    let m = state.systems.len();
    let scale = Scalar::from_int(1 << m, Mode::Exact);
    let coords: Vec<Scalar> = effect.coords.iter().map(|c| c * &scale).collect();
    Ok(GVector::new(state.systems.clone(), coords))
}

#[derive(Clone, Debug, Serialize)]
pub struct GentleReport {
    pub trials: usize,
    pub violations: usize,
    /// max over trials of lhs/rhs (rhs > 0 trials only).
    pub max_ratio: f64,
    /// max lhs over the ε = 0 control trials (exactly zero expected).
    pub eps0_max_lhs: f64,
    pub dims: (usize, usize),
    pub seed: u64,
}

fn gentle_trial(
    trial: usize,
    seed: u64,
    dims: &std::ops::RangeInclusive<usize>,
) -> (bool, f64, f64) {
    let mut rng =
        ChaCha12Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15));
    let span = dims.end() - dims.start() + 1;
    let d = dims.start() + trial % span;
    // Random pure |ψ⟩ (Gaussian complex entries, normalised).
    let mut psi_re = vec![0.0; d];
    let mut psi_im = vec![0.0; d];
    let mut norm = 0.0;
    for i in 0..d {
        psi_re[i] = standard_normal(&mut rng);
        psi_im[i] = standard_normal(&mut rng);
        norm += psi_re[i] * psi_re[i] + psi_im[i] * psi_im[i];
    }
    let norm = norm.sqrt();
    for i in 0..d {
        psi_re[i] /= norm;
        psi_im[i] /= norm;
    }
    let eps0_control = trial % 17 == 0;
    // Random mixed ρ = GG†/Tr (Ginibre), or exactly |ψ⟩⟨ψ| for ε = 0 controls.
    let (rho_re, rho_im) = if eps0_control {
        let mut re = vec![0.0; d * d];
        let mut im = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                re[i * d + j] = psi_re[i] * psi_re[j] + psi_im[i] * psi_im[j];
                im[i * d + j] = psi_im[i] * psi_re[j] - psi_re[i] * psi_im[j];
            }
        }
        (re, im)
    } else {
        let mut g_re = vec![0.0; d * d];
        let mut g_im = vec![0.0; d * d];
        for x in g_re.iter_mut().chain(g_im.iter_mut()) {
            *x = standard_normal(&mut rng);
        }
        let mut re = vec![0.0; d * d];
        let mut im = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut ar = 0.0;
                let mut ai = 0.0;
                for k in 0..d {
                    // (G G†)_{ij} = Σ_k G_{ik} conj(G_{jk})
                    let (gr, gi) = (g_re[i * d + k], g_im[i * d + k]);
                    let (hr, hi) = (g_re[j * d + k], -g_im[j * d + k]);
                    ar += gr * hr - gi * hi;
                    ai += gr * hi + gi * hr;
                }
                re[i * d + j] = ar;
                im[i * d + j] = ai;
            }
        }
        let tr: f64 = (0..d).map(|i| re[i * d + i]).sum();
        for x in re.iter_mut().chain(im.iter_mut()) {
            *x /= tr;
        }
        (re, im)
    };
    // ε = 1 − ⟨ψ|ρ|ψ⟩.
    let mut fid = 0.0;
    for i in 0..d {
        for j in 0..d {
            // conj(ψ_i) ρ_ij ψ_j, real part.
            let (ar, ai) = (psi_re[i], -psi_im[i]);
            let (br, bi) = (rho_re[i * d + j], rho_im[i * d + j]);
            let (cr, ci) = (psi_re[j], psi_im[j]);
            let (t1r, t1i) = (ar * br - ai * bi, ar * bi + ai * br);
            fid += t1r * cr - t1i * ci;
        }
    }
    let eps = (1.0 - fid).max(0.0);
    // lhs = ‖ρ − ψψ†‖₁, rhs = √d · √(2ε).
    let mut diff_re = rho_re.clone();
    let mut diff_im = rho_im.clone();
    for i in 0..d {
        for j in 0..d {
            diff_re[i * d + j] -= psi_re[i] * psi_re[j] + psi_im[i] * psi_im[j];
            diff_im[i * d + j] -= psi_im[i] * psi_re[j] - psi_re[i] * psi_im[j];
        }
    }
    let lhs = crate::numeric::trace_norm_hermitian(&diff_re, &diff_im, d);
    let rhs = (d as f64).sqrt() * (2.0 * eps).sqrt();
    let violation = lhs > rhs + DEFAULT_TOL;
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    (violation, ratio, if eps0_control { lhs } else { 0.0 })
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one value per call keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gentle_summary(
    results: Vec<(bool, f64, f64)>,
    seed: u64,
    dims: std::ops::RangeInclusive<usize>,
) -> GentleReport {
    let trials = results.len();
    let violations = results.iter().filter(|(v, _, _)| *v).count();
    let max_ratio = results.iter().map(|(_, r, _)| *r).fold(0.0, f64::max);
    let eps0_max_lhs = results.iter().map(|(_, _, l)| *l).fold(0.0, f64::max);
    GentleReport {
        trials,
        violations,
        max_ratio,
        eps0_max_lhs,
        dims: (*dims.start(), *dims.end()),
        seed,
    }
}

/// Monte-Carlo sweep of the post-measurement disturbance inequality
/// `‖ρ − ρ₀‖_phy ≤ c·√(2ε)` with `c = √d`, over random states and pure
/// effects in the given Hilbert dimensions. Every 17th trial pins `ε = 0`
/// (then the left side is exactly zero).
pub fn gentle_measurement_check(
    n_trials: usize,
    seed: u64,
    dims: std::ops::RangeInclusive<usize>,
) -> Result<GentleReport, TheoryError> {
    check_gentle_dims(&dims)?;
    let results = crate::par::indexed_map(n_trials, |t| gentle_trial(t, seed, &dims));
    Ok(gentle_summary(results, seed, dims))
}

/// Sequential twin of [`gentle_measurement_check`] (same results).
pub fn gentle_measurement_check_seq(
    n_trials: usize,
    seed: u64,
    dims: std::ops::RangeInclusive<usize>,
) -> Result<GentleReport, TheoryError> {
    check_gentle_dims(&dims)?;
    let results = crate::par::indexed_map_seq(n_trials, |t| gentle_trial(t, seed, &dims));
    Ok(gentle_summary(results, seed, dims))
}

fn check_gentle_dims(dims: &std::ops::RangeInclusive<usize>) -> Result<(), TheoryError> {
    if *dims.start() < 2 || *dims.end() > 8 || dims.is_empty() {
        return Err(TheoryError::Guard(
            "gentle-measurement dims must lie in 2..=8".into(),
        ));
    }
    Ok(())
}

/// `k` parallel copies of the circuit with majority acceptance. The auxiliary
/// register becomes the k-fold tensor power, ordered copy by copy.
pub fn amplify(c: &Circuit, k: usize) -> Result<Circuit, TheoryError> {
    if k % 2 == 0 || k == 0 {
        return Err(TheoryError::Invalid(
            "amplification count must be odd".into(),
        ));
    }
    if k == 1 {
        return Ok(c.clone());
    }
    let strings = c.n_outcome_strings();
    if strings
        .checked_pow(k as u32)
        .map_or(true, |total| total > crate::model::MAX_OUTCOME_STRINGS)
    {
        return Err(TheoryError::Guard(format!(
            "amplified circuit would exceed {} outcome strings",
            crate::model::MAX_OUTCOME_STRINGS
        )));
    }
    let n_dev = c.devices.len();
    let n_wires = c.wires.len();
    let mut devices = Vec::with_capacity(n_dev * k);
    let mut wires: Vec<Wire> = Vec::with_capacity(n_wires * k);
    let mut aux_wires = Vec::new();
    let mut parts = Vec::with_capacity(k);
    for copy in 0..k {
        let dev_off = copy * n_dev;
        let wire_off = copy * n_wires;
        for d in &c.devices {
            devices.push(d.clone());
        }
        for w in &c.wires {
            let source = match &w.source {
                WireSource::Device(d, p) => WireSource::Device(d + dev_off, *p),
                WireSource::Aux(_) => WireSource::Aux(0), // re-indexed below
            };
            wires.push(Wire {
                ty: w.ty.clone(),
                source,
                sink: w.sink.map(|(d, p)| (d + dev_off, p)),
            });
        }
        for &aw in &c.aux_wires {
            aux_wires.push(aw + wire_off);
        }
        parts.push(c.accept.shift_vars(dev_off));
    }
    // Re-index aux positions in declaration order.
    for (pos, &wi) in aux_wires.iter().enumerate() {
        wires[wi].source = WireSource::Aux(pos);
    }
    Ok(Circuit {
        devices,
        wires,
        aux_wires,
        accept: AcceptExpr::Majority(parts),
        post_select: None,
    })
}

/// Exact binomial majority tail `Σ_{j > k/2} C(k,j) p^j (1−p)^{k−j}`.
pub fn majority_tail(p: &BigRational, k: usize) -> BigRational {
    let one = BigRational::one();
    let q = &one - p;
    let mut total = BigRational::zero();
    for j in (k / 2 + 1)..=k {
        let mut term = BigRational::from_integer(binomial(k, j).into());
        for _ in 0..j {
            term *= p;
        }
        for _ in 0..(k - j) {
            term *= &q;
        }
        total += term;
    }
    total
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct DistillationStep {
    pub input: usize,
    pub pre_accept: Scalar,
    pub postselect_prob: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistillationResult {
    pub steps: Vec<DistillationStep>,
    pub final_state: Vec<Scalar>,
    /// Acceptance of the final state on every input.
    pub final_accepts: Vec<Scalar>,
    pub complete: bool,
}

/// Iterative advice distillation: start from the completely mixed state,
/// repeatedly pick an input whose circuit accepts the current advice with
/// probability below `alpha`, run it, and post-select on acceptance (the
/// update rule collapses the register onto the pure accept effect). Stops
/// when every input accepts with probability at least `alpha`, or after
/// `t_max` iterations (reported as incomplete, not an error).
pub fn advice_distillation(
    theory: &TheorySpec,
    circuits: &[Circuit],
    alpha: &Scalar,
    t_max: usize,
) -> Result<DistillationResult, TheoryError> {
    if circuits.is_empty() || circuits.len() > 8 {
        return Err(TheoryError::Guard(
            "toy distillation supports 1..=8 inputs".into(),
        ));
    }
    let aux = circuits[0].aux_systems();
    if aux.is_empty() || circuits.iter().any(|c| c.aux_systems() != aux) {
        return Err(TheoryError::Invalid(
            "all circuits must share one auxiliary register".into(),
        ));
    }
    if aux.len() > 2 {
        return Err(TheoryError::Guard(
            "toy distillation advice capped at 2 qubits".into(),
        ));
    }
    let effects: Vec<GEffect> = circuits
        .iter()
        .map(|c| theory.acceptance_effect(c))
        .collect::<Result<_, _>>()?;
    let mut state: Option<GVector> = None;
    for ty in &aux {
        let m = theory.system(&ty.name)?.uniform_mixture();
        state = Some(match state {
            None => m,
            Some(acc) => crate::model::tensor(&acc, &m)?,
        });
    }
    let mut state = state.unwrap();
    let mut steps = Vec::new();
    let alpha_f = alpha.to_f64();
    let mut complete = false;
    for _ in 0..t_max {
        let accepts: Vec<Scalar> = effects
            .iter()
            .map(|e| e.apply(&state))
            .collect::<Result<_, _>>()?;
        match accepts.iter().position(|p| p.to_f64() < alpha_f) {
            None => {
                complete = true;
                break;
            }
            Some(i) => {
                let pre = accepts[i].clone();
                match measurement_update(theory, &state, &effects[i]) {
                    Ok(updated) => {
                        steps.push(DistillationStep {
                            input: i,
                            pre_accept: pre.clone(),
                            postselect_prob: pre,
                        });
                        state = updated;
                    }
                    Err(TheoryError::Model(crate::model::ModelError::PostSelectionImpossible)) => {
                        // The accept outcome has zero probability: the run
                        // cannot move forward, so it ends incomplete.
                        steps.push(DistillationStep {
                            input: i,
                            pre_accept: pre,
                            postselect_prob: Scalar::zero(theory.mode),
                        });
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let final_accepts: Vec<Scalar> = effects
        .iter()
        .map(|e| e.apply(&state))
        .collect::<Result<_, _>>()?;
    if !complete {
        complete = final_accepts.iter().all(|p| p.to_f64() >= alpha_f);
    }
    Ok(DistillationResult {
        steps,
        final_state: state.coords,
        final_accepts,
        complete,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PostBgpReport {
    pub p_selected: Scalar,
    /// The promised lower bound `1/D^w`.
    pub selection_bound: Scalar,
    pub selection_ok: bool,
    pub conditional_accept: Option<Scalar>,
    pub meets_alpha: Option<bool>,
    pub meets_beta: Option<bool>,
}

/// Checks the post-selected acceptance clauses of a closed circuit: the
/// selection probability must reach `1/D^w`, and the conditional acceptance
/// is compared against the (2/3, 1/3) thresholds.
pub fn postbgp_check<F>(
    circuit: &Circuit,
    selected: F,
    d_base: u64,
    w_exp: u32,
) -> Result<PostBgpReport, TheoryError>
where
    F: Fn(&[usize]) -> bool,
{
    let dist = evaluate_closed(circuit)?;
    let mode = dist.mode();
    let bound = match mode {
        Mode::Exact => Scalar::Exact(BigRational::new(
            1.into(),
            num::BigInt::from(d_base).pow(w_exp),
        )),
        Mode::Approx => Scalar::Approx(1.0 / (d_base as f64).powi(w_exp as i32)),
    };
    match post_select(&dist, &selected) {
        Err(crate::model::ModelError::PostSelectionImpossible) => Err(TheoryError::Model(
            crate::model::ModelError::PostSelectionImpossible,
        )),
        Err(e) => Err(TheoryError::Model(e)),
        Ok((cond, p_s)) => {
            let selection_ok = p_s.to_f64() >= bound.to_f64() - DEFAULT_TOL;
            let mut acc = Scalar::zero(mode);
            for (string, p) in cond.iter() {
                if circuit.accept.accepts(&string) {
                    acc = &acc + p;
                }
            }
            let alpha = 2.0 / 3.0;
            let beta = 1.0 / 3.0;
            Ok(PostBgpReport {
                p_selected: p_s,
                selection_bound: bound,
                selection_ok,
                meets_alpha: Some(acc.to_f64() >= alpha - DEFAULT_TOL),
                meets_beta: Some(acc.to_f64() <= beta + DEFAULT_TOL),
                conditional_accept: Some(acc),
            })
        }
    }
}

/// Convenience: acceptance probability on a product advice state `base^{⊗k}`
/// for an amplified circuit.
pub fn product_power(base: &GVector, k: usize) -> Result<GVector, TheoryError> {
    let mut out = base.clone();
    for _ in 1..k {
        out = crate::model::tensor(&out, base)?;
    }
    Ok(out)
}

/// One-qubit verifier that measures the advice against a pure effect and
/// accepts on success.
pub fn projector_circuit(theory: &TheorySpec, effect: &GEffect) -> Result<Circuit, TheoryError> {
    if effect.systems.len() != 1 {
        return Err(TheoryError::Invalid(
            "projector circuits take one-system effects".into(),
        ));
    }
    let sys = effect.systems[0].clone();
    let unit = theory.system(&sys.name)?.unit.clone();
    let mut b = CircuitBuilder::new();
    let aux = b.aux(sys);
    let complement = GEffect::new(
        effect.systems.clone(),
        unit.coords
            .iter()
            .zip(&effect.coords)
            .map(|(a, e)| a - e)
            .collect(),
    );
    let v = b.measure(
        Device::measurement("check", vec![effect.clone(), complement]),
        &[aux],
    );
    Ok(b.finish(AcceptExpr::eq(AcceptExpr::Var(v), AcceptExpr::Lit(0))))
}

/// The shipped distillable toy family: two 1-qubit inputs whose accept
/// effects are the |+⟩ projector and a (3/5, 0, 4/5)-direction projector.
/// |+⟩ is a common advice state (acceptances 1 and 4/5 ≥ 2/3).
pub fn toy_plus_family(theory: &TheorySpec) -> Result<Vec<Circuit>, TheoryError> {
    let eplus = theory.system("qubit")?.extremal_effects[2].clone();
    let skew = GEffect::new(
        eplus.systems.clone(),
        vec![
            Scalar::ratio(1, 2, theory.mode),
            Scalar::ratio(3, 10, theory.mode),
            Scalar::zero(theory.mode),
            Scalar::ratio(2, 5, theory.mode),
        ],
    );
    Ok(vec![
        projector_circuit(theory, &eplus)?,
        projector_circuit(theory, &skew)?,
    ])
}

/// The shipped contradictory family: |0⟩ and |+⟩ projectors, whose update
/// flip-flops between two pure states forever, each accepting the other
/// input with probability 1/2 < 2/3.
pub fn toy_contradictory_family(theory: &TheorySpec) -> Result<Vec<Circuit>, TheoryError> {
    let e0 = theory.system("qubit")?.extremal_effects[0].clone();
    let eplus = theory.system("qubit")?.extremal_effects[2].clone();
    Ok(vec![
        projector_circuit(theory, &e0)?,
        projector_circuit(theory, &eplus)?,
    ])
}
