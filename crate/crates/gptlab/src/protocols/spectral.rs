//! Spectral acceptance bounds: largest singular values, exact gap traces and
//! the state-space re-parametrisation.

use crate::model::{accept_map, GTransform, GVector, SystemType, Tensor};
use crate::numeric;
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use crate::theories::{MembershipTag, TheoryError, TheorySpec};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

/// Cap on the square dimension of exact matrix powers.
pub const MAX_GAP_DIM: usize = 64;
/// Cap on the exponent of exact matrix powers.
pub const MAX_GAP_EXPONENT: u32 = 64;

/// Largest singular value of a transform's matrix, via the eigen-decomposition
/// of `MᵀM` (cyclic Jacobi), absolute tolerance well below `1e-9`.
/// Zero-padding to square shape does not change the value.
pub fn sigma_max(t: &GTransform) -> Result<f64, TheoryError> {
    let (rows, cols) = (t.out_dim(), t.in_dim());
    if t.matrix.is_empty() {
        return Err(TheoryError::Invalid("sigma_max of an empty matrix".into()));
    }
    let m: Vec<f64> = t.matrix.iter().map(Scalar::to_f64).collect();
    Ok(numeric::largest_singular_value(&m, rows, cols))
}

/// Exact two-sided bounds `lo ≤ σ_max² ≤ hi` in rational arithmetic:
/// a Rayleigh quotient from power iteration below, the Геršgorin row bound
/// above. The gap shrinks with `iters`.
pub fn sigma_max_exact_bounds(
    t: &GTransform,
    iters: usize,
) -> Result<(BigRational, BigRational), TheoryError> {
    let cols = t.in_dim();
    let rows = t.out_dim();
    let entry = |r: usize, c: usize| -> Result<BigRational, TheoryError> {
        t.matrix[r * cols + c]
            .as_rational()
            .cloned()
            .ok_or_else(|| TheoryError::Unsupported("exact bounds need exact mode".into()))
    };
    // A = MᵀM.
    let mut a = vec![BigRational::zero(); cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = BigRational::zero();
            for r in 0..rows {
                acc += entry(r, i)? * entry(r, j)?;
            }
            a[i * cols + j] = acc;
        }
    }
    // Gershgorin upper bound: max row sum of |A|.
    let mut hi = BigRational::zero();
    for i in 0..cols {
        let mut row = BigRational::zero();
        for j in 0..cols {
            row += a[i * cols + j].abs();
        }
        if row > hi {
            hi = row;
        }
    }
    // Power iteration with the Rayleigh quotient as the lower bound.
    let mut v = vec![BigRational::one(); cols];
    let mut lo = BigRational::zero();
    for _ in 0..iters {
        let mut next = vec![BigRational::zero(); cols];
        for i in 0..cols {
            for j in 0..cols {
                if !a[i * cols + j].is_zero() {
                    next[i] += &a[i * cols + j] * &v[j];
                }
            }
        }
        let vv: BigRational = v.iter().map(|x| x * x).sum();
        if vv.is_zero() {
            break;
        }
        let vav: BigRational = v.iter().zip(&next).map(|(x, y)| x * y).sum();
        let rayleigh = vav / vv;
        if rayleigh > lo {
            lo = rayleigh;
        }
        // Rescale to keep numbers small.
        let norm1: BigRational = next.iter().map(|x| x.abs()).sum();
        if norm1.is_zero() {
            break;
        }
        v = next.into_iter().map(|x| x / &norm1).collect();
    }
    if lo.is_negative() {
        lo = BigRational::zero();
    }
    Ok((lo, hi))
}

/// Exact `Tr((MᵀM)^d)` by repeated squaring over rationals.
pub fn gap_trace(t: &GTransform, d: u32) -> Result<BigRational, TheoryError> {
    if t.mode() != Mode::Exact {
        return Err(TheoryError::Unsupported(
            "gap traces need exact mode".into(),
        ));
    }
    if d == 0 || d > MAX_GAP_EXPONENT {
        return Err(TheoryError::Guard(format!(
            "gap-trace exponent must be 1..={MAX_GAP_EXPONENT}"
        )));
    }
    let cols = t.in_dim();
    let rows = t.out_dim();
    if cols > MAX_GAP_DIM || rows > MAX_GAP_DIM {
        return Err(TheoryError::Guard(format!(
            "gap-trace dimension capped at {MAX_GAP_DIM}"
        )));
    }
    let entry = |r: usize, c: usize| -> Result<BigRational, TheoryError> {
        t.matrix[r * cols + c]
            .as_rational()
            .cloned()
            .ok_or_else(|| TheoryError::Unsupported("gap traces need exact mode".into()))
    };
    let mut a = vec![BigRational::zero(); cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = BigRational::zero();
            for r in 0..rows {
                acc += entry(r, i)? * entry(r, j)?;
            }
            a[i * cols + j] = acc;
        }
    }
    let mul = |x: &[BigRational], y: &[BigRational]| -> Vec<BigRational> {
        let n = cols;
        let mut out = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                if x[i * n + k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !y[k * n + j].is_zero() {
                        out[i * n + j] += &x[i * n + k] * &y[k * n + j];
                    }
                }
            }
        }
        out
    };
    // Binary decomposition of d.
    let mut result: Option<Vec<BigRational>> = None;
    let mut base = a;
    let mut e = d;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul(&r, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    let power = result.expect("d >= 1");
    let mut trace = BigRational::zero();
    for i in 0..cols {
        trace += &power[i * cols + i];
    }
    Ok(trace)
}

/// An affine re-parametrisation of a register's state space: the completely
/// mixed state moves to the origin of the non-unit coordinates and the free
/// block is scaled by the inscribed-ball radius, so the Euclidean unit ball
/// of the free coordinates sits inside the re-parametrised state space.
#[derive(Clone, Debug)]
pub struct Reparam {
    pub systems: Vec<SystemType>,
    pub dim: usize,
    /// Row-major `dim × dim` change-of-coordinates matrix and its inverse.
    pub phi: Vec<f64>,
    pub phi_inv: Vec<f64>,
    /// Inscribed-ball radius squared (exact when facet-derived).
    pub radius_sq: f64,
    /// Euclidean norm bound over re-parametrised extremal states.
    pub state_norm_bound: f64,
}

impl Reparam {
    pub fn apply_state(&self, coords: &[f64]) -> Vec<f64> {
        mat_vec(&self.phi, self.dim, coords)
    }
}

fn mat_vec(m: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

fn mat_mul_f64(a: &[f64], (ar, ac): (usize, usize), b: &[f64], bc: usize) -> Vec<f64> {
    let mut out = vec![0.0; ar * bc];
    for i in 0..ar {
        for k in 0..ac {
            let x = a[i * ac + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..bc {
                out[i * bc + j] += x * b[k * bc + j];
            }
        }
    }
    out
}

/// Facet inequalities `a · v ≥ 0` of a register's normalised state space.
fn register_facets(
    theory: &TheorySpec,
    systems: &[SystemType],
) -> Result<Vec<Vec<f64>>, TheoryError> {
    match theory.membership {
        MembershipTag::Psd => Ok(Vec::new()),
        MembershipTag::Simplex | MembershipTag::Polytope => {
            let mut facets: Vec<crate::model::GEffect> = Vec::new();
            for ty in systems {
                let spec = theory.system(&ty.name)?;
                if spec.facets.is_empty() {
                    return Err(TheoryError::Unsupported(format!(
                        "no facet list for system {}",
                        ty.name
                    )));
                }
                let site: Vec<crate::model::GEffect> = spec
                    .facets
                    .iter()
                    .map(|f| crate::model::GEffect::new(vec![ty.clone()], f.clone()))
                    .collect();
                facets = if facets.is_empty() {
                    site
                } else {
                    // Composite facet set: products of per-site facets; for
                    // simplices this is exactly the product simplex facet set,
                    // for boxes it is the fiducial positivity set.
                    let mut next = Vec::with_capacity(facets.len() * site.len());
                    for a in &facets {
                        for b in &site {
                            next.push(a.tensor(b)?);
                        }
                    }
                    next
                };
            }
            Ok(facets
                .into_iter()
                .map(|e| e.coords.iter().map(Scalar::to_f64).collect())
                .collect())
        }
    }
}

/// Builds the re-parametrisation for a register.
pub fn reparametrise(theory: &TheorySpec, systems: &[SystemType]) -> Result<Reparam, TheoryError> {
    if systems.is_empty() {
        return Err(TheoryError::Invalid("empty register".into()));
    }
    let dim: usize = systems.iter().map(|s| s.dim).product();
    // Completely mixed state of the register and the unit effect.
    let mut cm: Option<GVector> = None;
    for ty in systems {
        let m = theory.system(&ty.name)?.uniform_mixture();
        cm = Some(match cm {
            None => m,
            Some(acc) => acc.tensor(&m)?,
        });
    }
    let cm = cm.unwrap();
    let c: Vec<f64> = cm.coords.iter().map(Scalar::to_f64).collect();
    let u: Vec<f64> = theory
        .unit_for(systems)?
        .coords
        .iter()
        .map(Scalar::to_f64)
        .collect();
    let u_norm_sq: f64 = u.iter().map(|x| x * x).sum();

    // Orthonormal basis of ker(u) by Gram-Schmidt over the centred
    // coordinate directions.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..dim {
        // e_k projected off u.
        let uk = u[k];
        let mut w: Vec<f64> = (0..dim)
            .map(|i| (if i == k { 1.0 } else { 0.0 }) - uk * u[i] / u_norm_sq)
            .collect();
        for b in &basis {
            let dot: f64 = w.iter().zip(b).map(|(a, x)| a * x).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= dot * bi;
            }
        }
        let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for wi in w.iter_mut() {
                *wi /= norm;
            }
            basis.push(w);
        }
        if basis.len() == dim - 1 {
            break;
        }
    }
    if basis.len() != dim - 1 {
        return Err(TheoryError::Invalid("degenerate unit effect".into()));
    }

    // Inscribed radius.
    let radius_sq = match theory.membership {
        MembershipTag::Psd => {
            // PSD set around I/d: coordinate-space inscribed radius
            // 1/(hilbert_dim − 1).
            let m = systems.len();
            let hd = 1usize << m;
            1.0 / (hd as f64 - 1.0)
        }
        _ => {
            let facets = register_facets(theory, systems)?;
            let mut best: Option<f64> = None;
            for a in &facets {
                let ac: f64 = a.iter().zip(&c).map(|(x, y)| x * y).sum();
                let au: f64 = a.iter().zip(&u).map(|(x, y)| x * y).sum();
                let a_sq: f64 = a.iter().map(|x| x * x).sum();
                let par_sq = a_sq - au * au / u_norm_sq;
                if par_sq <= 1e-18 {
                    continue; // facet parallel to the state hyperplane
                }
                let d_sq = ac * ac / par_sq;
                best = Some(match best {
                    None => d_sq,
                    Some(b) => b.min(d_sq),
                });
            }
            best.ok_or_else(|| TheoryError::Unsupported("no usable facets".into()))?
        }
    };
    let r = radius_sq.sqrt();

    // φ rows: the unit effect first, then the centred ON basis over r.
    let mut phi = vec![0.0; dim * dim];
    phi[..dim].copy_from_slice(&u);
    for (k, b) in basis.iter().enumerate() {
        let bc: f64 = b.iter().zip(&c).map(|(x, y)| x * y).sum();
        for j in 0..dim {
            phi[(k + 1) * dim + j] = (b[j] - bc * u[j]) / r;
        }
    }
    // φ⁻¹ columns: the completely mixed state, then r·basis vectors.
    let mut phi_inv = vec![0.0; dim * dim];
    for i in 0..dim {
        phi_inv[i * dim] = c[i];
        for (k, b) in basis.iter().enumerate() {
            phi_inv[i * dim + k + 1] = r * b[i];
        }
    }

    // Norm bound over extremal states (for quantum the analytic bound
    // √(1 + (d_h²−1)/r²·(1/(d_h... )) reduces to the same computation over
    // the listed pure-product states plus the exact pure-state norm).
    let mut nu: f64 = 1.0; // the completely mixed state maps to (1, 0, …)
    match theory.membership {
        MembershipTag::Psd => {
            // Any pure state has Σ_{P≠I} c_P² = d_h − 1 in Pauli coordinates.
            let hd = 1usize << systems.len();
            let free = (hd as f64) - 1.0;
            nu = (1.0 + free / radius_sq).sqrt();
        }
        _ => {
            for v in theory.extremal_states(systems)? {
                let coords: Vec<f64> = v.coords.iter().map(Scalar::to_f64).collect();
                let img = mat_vec(&phi, dim, &coords);
                let n: f64 = img.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > nu {
                    nu = n;
                }
            }
        }
    }

    Ok(Reparam {
        systems: systems.to_vec(),
        dim,
        phi,
        phi_inv,
        radius_sq,
        state_norm_bound: nu,
    })
}

/// Verification report for the spectral acceptance bound of one circuit.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaBoundReport {
    pub aux_systems: Vec<String>,
    /// Largest singular value of the re-parametrised acceptance map.
    pub sigma_max: f64,
    /// Exact (vertex) or eigenvalue maximisation of the acceptance over
    /// physical auxiliary states.
    pub max_accept: f64,
    /// Exact rational value when the maximisation ran over listed vertices.
    pub max_accept_exact: Option<Scalar>,
    /// Euclidean norm bound of re-parametrised physical states.
    pub state_norm_bound: f64,
    /// `sigma_max · state_norm_bound`: the proven upper bound on acceptance.
    pub sigma_bound: f64,
    /// `max_accept ≤ sigma_bound + tol` (the normalised inequality; always
    /// expected to hold).
    pub bound_holds: bool,
    /// `max_accept ≤ sigma_max + tol` (the unnormalised comparison;
    /// informative, can fail for register-consuming circuits).
    pub raw_bound_holds: bool,
    pub inscribed_radius_sq: f64,
}

/// Computes the acceptance maximum over physical auxiliary states and checks
/// it against the spectral bound after re-parametrisation.
///
/// The proven inequality is `max_accept ≤ σ_max(M̃) · ν` where `ν` bounds the
/// Euclidean norm of re-parametrised physical states and `M̃` is the
/// conjugated acceptance map (the residual output is contracted with the
/// re-parametrised unit effect, whose norm is one). The bare comparison with
/// `σ_max(M̃)` alone is reported as well; it fails in general (a circuit can
/// consume the register and accept a vertex with certainty while the map's
/// singular value stays at the effect's norm), so it is informative only.
pub fn verify_sigma_bound(
    theory: &TheorySpec,
    circuit: &crate::model::Circuit,
) -> Result<SigmaBoundReport, TheoryError> {
    let tol = DEFAULT_TOL;
    let aux_systems = circuit.aux_systems();
    if aux_systems.is_empty() {
        return Err(TheoryError::Invalid(
            "circuit has no auxiliary register".into(),
        ));
    }
    let rep_in = reparametrise(theory, &aux_systems)?;

    // Acceptance functional (residual contracted with the unit effect).
    let acc = theory.acceptance_effect(circuit)?;
    let acc_f64: Vec<f64> = acc.coords.iter().map(Scalar::to_f64).collect();

    // max over physical states.
    let (max_accept, max_accept_exact) = match theory.membership {
        MembershipTag::Psd => {
            let m = aux_systems.len();
            let e_mat = crate::principles::effect_parts_f64(&acc, m);
            let eigs = numeric::hermitian_eigenvalues(&e_mat.0, &e_mat.1, 1 << m);
            (eigs[0], None)
        }
        _ => {
            let mut best: Option<Scalar> = None;
            for v in theory.extremal_states(&aux_systems)? {
                let val = acc.apply(&v)?;
                best = Some(match best {
                    None => val,
                    Some(b) => {
                        if val.to_f64() > b.to_f64() {
                            val
                        } else {
                            b
                        }
                    }
                });
            }
            let b = best.expect("at least one extremal state");
            (b.to_f64(), Some(b))
        }
    };

    // Conjugate the full acceptance map: ũ M̃ = (u_res M) φ_in⁻¹, and σ_max
    // of the conjugated map equals σ_max of the padded square matrix.
    let m_full = accept_map(circuit, false)?;
    let res_systems = m_full.out_systems.clone();
    let m_f64: Vec<f64> = m_full.matrix.iter().map(Scalar::to_f64).collect();
    let (rows, cols) = (m_full.out_dim(), m_full.in_dim());
    let conj = if res_systems.is_empty() {
        // Already a row functional on the auxiliary register.
        mat_mul_f64(&acc_f64, (1, cols), &rep_in.phi_inv, cols)
    } else {
        let rep_out = reparametrise(theory, &res_systems)?;
        let left = mat_mul_f64(&rep_out.phi, (rows, rows), &m_f64, cols);
        mat_mul_f64(&left, (rows, cols), &rep_in.phi_inv, cols)
    };
    let out_rows = if res_systems.is_empty() { 1 } else { rows };
    let sigma = numeric::largest_singular_value(&conj, out_rows, cols);
    let sigma_bound = sigma * rep_in.state_norm_bound;
    Ok(SigmaBoundReport {
        aux_systems: aux_systems.iter().map(|s| s.name.clone()).collect(),
        sigma_max: sigma,
        max_accept,
        max_accept_exact,
        state_norm_bound: rep_in.state_norm_bound,
        sigma_bound,
        bound_holds: max_accept <= sigma_bound + tol,
        raw_bound_holds: max_accept <= sigma + tol,
        inscribed_radius_sq: rep_in.radius_sq,
    })
}
