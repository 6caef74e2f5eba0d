//! Built-in theory specifications: classical probability, quantum theory in
//! the Pauli transfer representation, and Boxworld.

pub mod boxworld;
pub mod quantum;
mod serialize;

pub use boxworld::{
    boxworld_theory, gbit_effect, gbit_system, gbit_vertex, pr_state, rho_f, TruthTable,
};
pub use quantum::{quantum_theory, qubit_system};
pub use serialize::{theory_from_json, theory_to_json};

use crate::model::{
    accept_map, accept_probability, sequential_compose, Circuit, Device, GEffect, GTransform,
    GVector, ModelError, SystemType, Tensor,
};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("unknown system type `{0}`")]
    UnknownSystem(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("unknown state constructor `{0}`")]
    UnknownState(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How physical membership is decided for this theory's state spaces.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembershipTag {
    Simplex,
    Psd,
    Polytope,
}

#[derive(Clone, Debug)]
pub struct NamedMeasurement {
    pub name: String,
    pub effects: Vec<GEffect>,
}

#[derive(Clone, Debug)]
pub struct NamedGate {
    pub name: String,
    pub transform: GTransform,
}

/// Per-system-type data of a theory.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub system: SystemType,
    pub pure_states: Vec<GVector>,
    pub extremal_effects: Vec<GEffect>,
    pub measurements: Vec<NamedMeasurement>,
    pub unit: GEffect,
    /// Single-system reversible generators.
    pub generators: Vec<NamedGate>,
    /// Facet inequalities `a · v ≥ 0` of the (normalised) state space, as
    /// homogeneous dual vectors. Empty when unknown.
    pub facets: Vec<Vec<Scalar>>,
}

impl SystemSpec {
    /// The uniform mixture of the listed pure states.
    pub fn uniform_mixture(&self) -> GVector {
        let mode = self.unit.mode();
        let n = self.pure_states.len();
        let w = Scalar::ratio(1, n as i64, mode);
        let mut coords = vec![Scalar::zero(mode); self.system.dim];
        for s in &self.pure_states {
            for (c, x) in coords.iter_mut().zip(&s.coords) {
                *c = &*c + &(&w * x);
            }
        }
        GVector::new(vec![self.system.clone()], coords)
    }
}

/// A named GPT: system types with their states, effects, measurements, unit
/// effect and reversible generators, plus multi-system gates.
#[derive(Clone, Debug)]
pub struct TheorySpec {
    pub name: String,
    pub mode: Mode,
    pub membership: MembershipTag,
    /// Guard on the number of sites in a composite register.
    pub max_sites: usize,
    pub systems: Vec<SystemSpec>,
    /// Gates, possibly spanning several systems.
    pub gates: Vec<NamedGate>,
}

impl TheorySpec {
    pub fn system(&self, name: &str) -> Result<&SystemSpec, TheoryError> {
        self.systems
            .iter()
            .find(|s| s.system.name == name)
            .ok_or_else(|| TheoryError::UnknownSystem(name.to_string()))
    }

    pub fn base_system(&self) -> &SystemSpec {
        &self.systems[0]
    }

    pub fn gate(&self, name: &str) -> Result<&NamedGate, TheoryError> {
        self.gates
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| TheoryError::UnknownGate(name.to_string()))
    }

    pub fn measurement(&self, system: &str, name: &str) -> Result<&NamedMeasurement, TheoryError> {
        self.system(system)?
            .measurements
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| TheoryError::UnknownMeasurement(format!("{name} on {system}")))
    }

    /// Tensor product of the per-type unit effects.
    pub fn unit_for(&self, systems: &[SystemType]) -> Result<GEffect, TheoryError> {
        if systems.is_empty() {
            return Ok(GEffect::new(Vec::new(), vec![Scalar::one(self.mode)]));
        }
        let mut out: Option<GEffect> = None;
        for ty in systems {
            let u = self.system(&ty.name)?.unit.clone();
            out = Some(match out {
                None => u,
                Some(acc) => acc.tensor(&u)?,
            });
        }
        Ok(out.unwrap())
    }

    /// Appends single-outcome unit-effect measurements on every residual
    /// output wire, so the circuit's only open ports are auxiliary.
    pub fn close_residuals(&self, c: &Circuit) -> Result<Circuit, TheoryError> {
        let mut out = c.clone();
        for wi in c.residual_wires() {
            let ty = &c.wires[wi].ty;
            let u = self.system(&ty.name)?.unit.clone();
            let di = out.devices.len();
            out.devices.push(Device::measurement("u", vec![u]));
            out.wires[wi].sink = Some((di, 0));
        }
        Ok(out)
    }

    /// Acceptance probability with `aux` plugged into the auxiliary register;
    /// residual outputs are contracted with unit effects.
    pub fn accept_probability(&self, c: &Circuit, aux: &GVector) -> Result<Scalar, TheoryError> {
        let closed = self.close_residuals(c)?;
        Ok(accept_probability(&closed, aux)?)
    }

    /// The acceptance functional on the auxiliary register: the unit effect on
    /// the residual output composed with the acceptance map.
    pub fn acceptance_effect(&self, c: &Circuit) -> Result<GEffect, TheoryError> {
        let m = accept_map(c, false)?;
        let u = self.unit_for(&m.out_systems)?;
        let row = GTransform::new(m.out_systems.clone(), Vec::new(), u.coords.clone());
        let contracted = sequential_compose(&row, &m)?;
        Ok(GEffect::new(contracted.in_systems, contracted.matrix))
    }

    /// The completely mixed state of a single system: the uniform mixture of
    /// its pure states.
    pub fn completely_mixed(&self, system: &str) -> Result<GVector, TheoryError> {
        Ok(self.system(system)?.uniform_mixture())
    }

    /// Extremal normalised states of a (possibly composite) register.
    ///
    /// Products of single-site pure states always appear. For two gbits the
    /// eight PR-type boxes are appended, which completes the vertex list of
    /// the bipartite no-signalling polytope. Larger Boxworld composites are
    /// product-only (vertex enumeration for n-party boxes is out of scope);
    /// quantum lists are product-only as well.
    pub fn extremal_states(&self, systems: &[SystemType]) -> Result<Vec<GVector>, TheoryError> {
        if systems.len() > self.max_sites {
            return Err(TheoryError::Guard(format!(
                "register of {} sites exceeds the {}-site guard",
                systems.len(),
                self.max_sites
            )));
        }
        let mut products: Vec<GVector> = vec![];
        for ty in systems {
            let pures = &self.system(&ty.name)?.pure_states;
            products = if products.is_empty() {
                pures.clone()
            } else {
                let mut next = Vec::with_capacity(products.len() * pures.len());
                for p in &products {
                    for s in pures {
                        next.push(p.tensor(s)?);
                    }
                }
                next
            };
        }
        if self.membership == MembershipTag::Polytope
            && systems.len() == 2
            && systems.iter().all(|t| t.name == "gbit")
        {
            for alpha in 0..2i64 {
                for beta in 0..2i64 {
                    for gamma in 0..2i64 {
                        let mut coords = vec![Scalar::zero(self.mode); 9];
                        coords[0] = Scalar::one(self.mode);
                        for x in 0..2i64 {
                            for y in 0..2i64 {
                                let sign = (x * y + alpha * x + beta * y + gamma) % 2;
                                coords[(1 + x as usize) * 3 + 1 + y as usize] =
                                    Scalar::from_int(if sign == 0 { 1 } else { -1 }, self.mode);
                            }
                        }
                        products.push(GVector::new(systems.to_vec(), coords));
                    }
                }
            }
        }
        Ok(products)
    }

    /// Generator set for a composite register: every single-site generator
    /// embedded at each site, plus swaps of adjacent equal-type sites.
    pub fn generators_for(&self, systems: &[SystemType]) -> Result<Vec<NamedGate>, TheoryError> {
        let mut out = Vec::new();
        for (site, ty) in systems.iter().enumerate() {
            for g in &self.system(&ty.name)?.generators {
                out.push(NamedGate {
                    name: if systems.len() == 1 {
                        g.name.clone()
                    } else {
                        format!("{}@{site}", g.name)
                    },
                    transform: embed_at_site(&g.transform, systems, site, self.mode)?,
                });
            }
        }
        for site in 0..systems.len().saturating_sub(1) {
            if systems[site] == systems[site + 1] {
                let swap = swap_transform(&systems[site], &systems[site + 1], self.mode);
                out.push(NamedGate {
                    name: format!("swap@{site}"),
                    transform: embed_at_site_multi(&swap, systems, site, self.mode)?,
                });
            }
        }
        Ok(out)
    }

    /// Tests physical membership of a normalised state vector.
    pub fn membership(&self, v: &GVector) -> Result<bool, TheoryError> {
        let tol = DEFAULT_TOL;
        for ty in &v.systems {
            self.system(&ty.name)?;
        }
        match self.membership {
            MembershipTag::Simplex => {
                let total = Scalar::sum(v.coords.iter(), v.mode());
                Ok(v.coords.iter().all(|c| c.is_nonneg_tol(tol)) && total.is_one_tol(tol))
            }
            MembershipTag::Psd => {
                let unit = self.unit_for(&v.systems)?;
                if !unit.apply(v)?.is_one_tol(tol) {
                    return Ok(false);
                }
                match self.mode {
                    Mode::Exact => {
                        let rho = quantum::extract_state(v)?;
                        quantum::is_psd_exact(&rho)
                    }
                    Mode::Approx => {
                        let m = quantum::qubits_of_dim(v.dim()).ok_or_else(|| {
                            TheoryError::Invalid("state dimension is not 4^m".into())
                        })?;
                        let d = 1usize << m;
                        let (re, im) = approx_density_parts(v, m);
                        let eigs = crate::numeric::hermitian_eigenvalues(&re, &im, d);
                        Ok(eigs.iter().all(|&l| l >= -tol))
                    }
                }
            }
            MembershipTag::Polytope => {
                let unit = self.unit_for(&v.systems)?;
                if !unit.apply(v)?.is_one_tol(tol) {
                    return Ok(false);
                }
                if v.systems.len() == 1 {
                    let spec = self.system(&v.systems[0].name)?;
                    for facet in &spec.facets {
                        let mut acc = Scalar::zero(v.mode());
                        for (a, x) in facet.iter().zip(&v.coords) {
                            acc = &acc + &(a * x);
                        }
                        if !acc.is_nonneg_tol(tol) {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                } else {
                    self.composite_polytope_membership(v, tol)
                }
            }
        }
    }

    /// Full fiducial-table membership for composite Boxworld registers:
    /// positivity of every joint fiducial probability plus the no-signalling
    /// marginals (the latter hold identically in the correlator basis and are
    /// still checked).
    fn composite_polytope_membership(&self, v: &GVector, tol: f64) -> Result<bool, TheoryError> {
        let n = v.systems.len();
        if n > 6 {
            return Err(TheoryError::Guard(
                "composite polytope membership supports at most 6 sites".into(),
            ));
        }
        let table = self.fiducial_table(v)?;
        if !table.iter().all(|p| p.is_nonneg_tol(tol)) {
            return Ok(false);
        }
        // No-signalling: the marginal over any one party is independent of
        // that party's setting.
        let mode = v.mode();
        for j in 0..n {
            for rest in 0..(1usize << (2 * (n - 1))) {
                // rest encodes (x, a) digits for all parties except j.
                let mut marg = [Scalar::zero(mode), Scalar::zero(mode)];
                for (xj, m) in marg.iter_mut().enumerate() {
                    for aj in 0..2usize {
                        let idx = insert_digit(rest, j, 2 * xj + aj, n);
                        *m = &*m + &table[idx];
                    }
                }
                if !marg[0].eq_tol(&marg[1], tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Joint fiducial probability table of an n-gbit vector, indexed by
    /// base-4 digits `2·x_j + a_j` per site (first site most significant).
    pub fn fiducial_table(&self, v: &GVector) -> Result<Vec<Scalar>, TheoryError> {
        let mode = v.mode();
        let n = v.systems.len();
        // Per-site stacked fiducial effect matrix: rows (x,a), cols gbit dim.
        let mut rows = Vec::with_capacity(4);
        for x in 0..2 {
            for a in 0..2 {
                rows.push(gbit_effect(x, a, mode));
            }
        }
        // Contract site by site: current tensor has digits (already-processed
        // (x,a) pairs ... remaining gbit sites).
        let mut cur = v.coords.clone();
        let mut done = 1usize; // product of 4s for processed sites
        let mut remaining = 3usize.pow(n as u32);
        for _site in 0..n {
            remaining /= 3;
            let mut next = vec![Scalar::zero(mode); done * 4 * remaining];
            for d in 0..done {
                for (r, eff) in rows.iter().enumerate() {
                    for rem in 0..remaining {
                        let mut acc = Scalar::zero(mode);
                        for k in 0..3usize {
                            let x = &cur[(d * 3 + k) * remaining + rem];
                            if !x.is_zero() {
                                acc = &acc + &(&eff.coords[k] * x);
                            }
                        }
                        next[(d * 4 + r) * remaining + rem] = acc;
                    }
                }
            }
            cur = next;
            done *= 4;
        }
        Ok(cur)
    }
}

fn insert_digit(rest: usize, pos: usize, digit: usize, n: usize) -> usize {
    // rest has n-1 base-4 digits; insert `digit` at position `pos` (from the
    // most significant side).
    let mut digits = Vec::with_capacity(n);
    let mut r = rest;
    for _ in 0..n - 1 {
        digits.push(r % 4);
        r /= 4;
    }
    digits.reverse();
    digits.insert(pos, digit);
    digits.iter().fold(0usize, |acc, &d| acc * 4 + d)
}

fn approx_density_parts(v: &GVector, m: usize) -> (Vec<f64>, Vec<f64>) {
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

/// Embeds a single-system transform at `site` of a register (identity on the
/// other sites).
pub fn embed_at_site(
    t: &GTransform,
    systems: &[SystemType],
    site: usize,
    mode: Mode,
) -> Result<GTransform, TheoryError> {
    embed_at_site_multi(t, systems, site, mode)
}

/// Embeds a transform covering sites `site..site+k` of a register.
pub fn embed_at_site_multi(
    t: &GTransform,
    systems: &[SystemType],
    site: usize,
    mode: Mode,
) -> Result<GTransform, TheoryError> {
    let k = t.in_systems.len();
    if t.in_systems != systems[site..site + k] {
        return Err(TheoryError::Invalid(format!(
            "transform expects {:?} at site {site}",
            t.in_systems.iter().map(|s| &s.name).collect::<Vec<_>>()
        )));
    }
    let mut out: Option<GTransform> = None;
    let mut push = |next: GTransform| -> Result<(), TheoryError> {
        out = Some(match out.take() {
            None => next,
            Some(acc) => acc.tensor(&next)?,
        });
        Ok(())
    };
    let mut idx = 0;
    while idx < systems.len() {
        if idx == site {
            push(t.clone())?;
            idx += k;
        } else {
            push(GTransform::identity(vec![systems[idx].clone()], mode))?;
            idx += 1;
        }
    }
    Ok(out.expect("nonempty register"))
}

/// The swap of two adjacent systems as a permutation matrix.
pub fn swap_transform(a: &SystemType, b: &SystemType, mode: Mode) -> GTransform {
    let (da, db) = (a.dim, b.dim);
    let d = da * db;
    let mut m = vec![Scalar::zero(mode); d * d];
    for i in 0..da {
        for j in 0..db {
            // (i, j) -> (j, i)
            m[(j * da + i) * d + (i * db + j)] = Scalar::one(mode);
        }
    }
    GTransform::new(vec![a.clone(), b.clone()], vec![b.clone(), a.clone()], m)
}

/// Classical probability theory on `n_levels`-valued systems.
pub fn classical_theory(n_levels: usize, mode: Mode) -> Result<TheorySpec, TheoryError> {
    if n_levels < 2 {
        return Err(TheoryError::Invalid(format!(
            "classical theory needs at least 2 levels, got {n_levels}"
        )));
    }
    let name = if n_levels == 2 {
        "bit".to_string()
    } else {
        format!("dit{n_levels}")
    };
    let sys = SystemType::new(name, n_levels);
    let basis = |i: usize| {
        let mut coords = vec![Scalar::zero(mode); n_levels];
        coords[i] = Scalar::one(mode);
        GVector::new(vec![sys.clone()], coords)
    };
    let basis_effect = |i: usize| {
        let mut coords = vec![Scalar::zero(mode); n_levels];
        coords[i] = Scalar::one(mode);
        GEffect::new(vec![sys.clone()], coords)
    };
    let pure_states: Vec<GVector> = (0..n_levels).map(basis).collect();
    let effects: Vec<GEffect> = (0..n_levels).map(basis_effect).collect();
    let unit = GEffect::new(vec![sys.clone()], vec![Scalar::one(mode); n_levels]);
    let measurements = vec![NamedMeasurement {
        name: "basis".into(),
        effects: effects.clone(),
    }];
    // Reversible generators: all transpositions of levels.
    let mut generators = Vec::new();
    for i in 0..n_levels {
        for j in (i + 1)..n_levels {
            let mut m = vec![Scalar::zero(mode); n_levels * n_levels];
            for k in 0..n_levels {
                let dst = if k == i {
                    j
                } else if k == j {
                    i
                } else {
                    k
                };
                m[dst * n_levels + k] = Scalar::one(mode);
            }
            generators.push(NamedGate {
                name: if n_levels == 2 {
                    "NOT".into()
                } else {
                    format!("t{i}{j}")
                },
                transform: GTransform::new(vec![sys.clone()], vec![sys.clone()], m),
            });
        }
    }
    let mut gates = generators.clone();
    if n_levels == 2 {
        // CNOT: (x1, x2) -> (x1, x1 ⊕ x2).
        let mut m = vec![Scalar::zero(mode); 16];
        for x1 in 0..2usize {
            for x2 in 0..2usize {
                let dst = x1 * 2 + (x1 ^ x2);
                m[dst * 4 + (x1 * 2 + x2)] = Scalar::one(mode);
            }
        }
        gates.push(NamedGate {
            name: "CNOT".into(),
            transform: GTransform::new(
                vec![sys.clone(), sys.clone()],
                vec![sys.clone(), sys.clone()],
                m,
            ),
        });
    }
    gates.push(NamedGate {
        name: "SWAP".into(),
        transform: swap_transform(&sys, &sys, mode),
    });
    let facets: Vec<Vec<Scalar>> = (0..n_levels)
        .map(|i| {
            let mut f = vec![Scalar::zero(mode); n_levels];
            f[i] = Scalar::one(mode);
            f
        })
        .collect();
    Ok(TheorySpec {
        name: "classical".into(),
        mode,
        membership: MembershipTag::Simplex,
        max_sites: 12,
        systems: vec![SystemSpec {
            system: sys,
            pure_states,
            extremal_effects: effects,
            measurements,
            unit,
            generators,
            facets,
        }],
        gates,
    })
}

/// Looks up a built-in theory by name: `classical`, `classical<k>`,
/// `boxworld` or `quantum`.
pub fn builtin_theory(name: &str, mode: Mode) -> Result<TheorySpec, TheoryError> {
    if name == "classical" {
        return classical_theory(2, mode);
    }
    if let Some(levels) = name.strip_prefix("classical") {
        let k: usize = levels
            .parse()
            .map_err(|_| TheoryError::UnknownTheory(name.to_string()))?;
        return classical_theory(k, mode);
    }
    match name {
        "boxworld" => Ok(boxworld_theory(mode)),
        "quantum" => quantum_theory(2, mode),
        _ => Err(TheoryError::UnknownTheory(name.to_string())),
    }
}

#[cfg(test)]
mod tests;
