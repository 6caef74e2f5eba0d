//! Boxworld: the gbit and its PR-type correlations.
//!
//! A gbit has two binary fiducial measurements. Coordinates are
//! `(unit, X₀, X₁)` where `X_x` is the outcome bias of measurement `x`; the
//! four pure states are the square vertices `(1, ±1, ±1)` and the fiducial
//! effects are `(x_a| = ½(u + (−1)^a X*_x)`. Composites use the tensor-product
//! (correlator) basis, in which every vector is automatically no-signalling.

use super::{MembershipTag, NamedGate, NamedMeasurement, SystemSpec, TheoryError, TheorySpec};
use crate::model::{GEffect, GTransform, GVector, SystemType};
use crate::scalar::{Mode, Scalar};
use rand::Rng;

pub fn gbit_system() -> SystemType {
    SystemType::new("gbit", 3)
}

/// Maximum number of parties in a single `rho_f` advice state.
pub const MAX_RHO_F_ARITY: usize = 12;

fn sc(n: i64, mode: Mode) -> Scalar {
    Scalar::from_int(n, mode)
}

/// The gbit vertex with deterministic outcomes `a_x` for measurement `x`:
/// coordinates `(1, (−1)^{a_0}, (−1)^{a_1})`.
pub fn gbit_vertex(a0: usize, a1: usize, mode: Mode) -> GVector {
    let s = |a: usize| if a == 0 { sc(1, mode) } else { sc(-1, mode) };
    GVector::new(vec![gbit_system()], vec![sc(1, mode), s(a0), s(a1)])
}

/// The fiducial effect `(x_a|`.
pub fn gbit_effect(x: usize, a: usize, mode: Mode) -> GEffect {
    assert!(x < 2 && a < 2);
    let half = Scalar::ratio(1, 2, mode);
    let signed = if a == 0 { half.clone() } else { -&half };
    let mut coords = vec![half, Scalar::zero(mode), Scalar::zero(mode)];
    coords[1 + x] = signed;
    GEffect::new(vec![gbit_system()], coords)
}

pub fn boxworld_theory(mode: Mode) -> TheorySpec {
    let sys = gbit_system();
    let pure_states = vec![
        gbit_vertex(0, 0, mode),
        gbit_vertex(0, 1, mode),
        gbit_vertex(1, 0, mode),
        gbit_vertex(1, 1, mode),
    ];
    let effects: Vec<GEffect> = (0..2)
        .flat_map(|x| (0..2).map(move |a| (x, a)))
        .map(|(x, a)| gbit_effect(x, a, mode))
        .collect();
    let unit = GEffect::new(
        vec![sys.clone()],
        vec![sc(1, mode), sc(0, mode), sc(0, mode)],
    );
    let measurements = vec![
        NamedMeasurement {
            name: "fiducial0".into(),
            effects: vec![gbit_effect(0, 0, mode), gbit_effect(0, 1, mode)],
        },
        NamedMeasurement {
            name: "fiducial1".into(),
            effects: vec![gbit_effect(1, 0, mode), gbit_effect(1, 1, mode)],
        },
    ];
    // Local relabellings generate the dihedral symmetry group of the square:
    // swap the two measurements, or flip the outcome of measurement 0.
    let swapx = GTransform::new(
        vec![sys.clone()],
        vec![sys.clone()],
        vec![
            sc(1, mode),
            sc(0, mode),
            sc(0, mode),
            sc(0, mode),
            sc(0, mode),
            sc(1, mode),
            sc(0, mode),
            sc(1, mode),
            sc(0, mode),
        ],
    );
    let negx0 = GTransform::new(
        vec![sys.clone()],
        vec![sys.clone()],
        vec![
            sc(1, mode),
            sc(0, mode),
            sc(0, mode),
            sc(0, mode),
            sc(-1, mode),
            sc(0, mode),
            sc(0, mode),
            sc(0, mode),
            sc(1, mode),
        ],
    );
    let generators = vec![
        NamedGate {
            name: "swapx".into(),
            transform: swapx.clone(),
        },
        NamedGate {
            name: "negx0".into(),
            transform: negx0.clone(),
        },
    ];
    let gates = vec![
        NamedGate {
            name: "swapx".into(),
            transform: swapx,
        },
        NamedGate {
            name: "negx0".into(),
            transform: negx0,
        },
    ];
    // Square facets: u ± X_x ≥ 0.
    let facets = vec![
        vec![sc(1, mode), sc(1, mode), sc(0, mode)],
        vec![sc(1, mode), sc(-1, mode), sc(0, mode)],
        vec![sc(1, mode), sc(0, mode), sc(1, mode)],
        vec![sc(1, mode), sc(0, mode), sc(-1, mode)],
    ];
    TheorySpec {
        name: "boxworld".into(),
        mode,
        membership: MembershipTag::Polytope,
        max_sites: MAX_RHO_F_ARITY,
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
    }
}

/// A Boolean function `f: {0,1}^n -> {0,1}` as its full truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self, TheoryError> {
        if bits.len() != 1 << arity {
            return Err(TheoryError::Invalid(format!(
                "truth table for arity {arity} needs {} bits, got {}",
                1usize << arity,
                bits.len()
            )));
        }
        Ok(TruthTable { arity, bits })
    }

    /// Table from the low `2^arity` bits of `index` (input `x` selects bit
    /// `x` interpreted big-endian: `x = x_1 x_2 … x_n`).
    pub fn from_index(arity: usize, index: u64) -> Result<Self, TheoryError> {
        let n = 1usize << arity;
        let bits = (0..n).map(|i| (index >> i) & 1 == 1).collect();
        TruthTable::new(arity, bits)
    }

    pub fn random<R: Rng>(arity: usize, rng: &mut R) -> Self {
        let bits = (0..1usize << arity).map(|_| rng.gen::<bool>()).collect();
        TruthTable { arity, bits }
    }

    /// Deterministic random table from a bare seed.
    pub fn random_seeded(arity: usize, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        TruthTable::random(arity, &mut rng)
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        TruthTable {
            arity,
            bits: vec![value; 1 << arity],
        }
    }

    pub fn and2() -> Self {
        TruthTable {
            arity: 2,
            bits: vec![false, false, false, true],
        }
    }

    pub fn eval_index(&self, x: usize) -> bool {
        self.bits[x]
    }

    /// Evaluates on explicit input bits `x_1 … x_n`.
    pub fn eval(&self, x: &[bool]) -> bool {
        let idx = x.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.bits[idx]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// The bipartite PR state: unit component 1, vanishing local biases, full
/// correlators `E_xy = (−1)^{xy}`.
pub fn pr_state(mode: Mode) -> GVector {
    rho_f(&TruthTable::and2(), mode).expect("arity 2 is within the guard")
}

/// The n-party state `ρ_f` whose fiducial outcomes satisfy `⊕ a_j = f(x)`
/// deterministically: the all-units component is 1, each pure correlator
/// component `X_{x_1}⊗…⊗X_{x_n}` equals `(−1)^{f(x)}`, and every component
/// mixing unit and X factors vanishes.
pub fn rho_f(f: &TruthTable, mode: Mode) -> Result<GVector, TheoryError> {
    let n = f.arity;
    if n == 0 || n > MAX_RHO_F_ARITY {
        return Err(TheoryError::Guard(format!(
            "rho_f supports 1..={MAX_RHO_F_ARITY} parties, got {n}"
        )));
    }
    let dim = 3usize.pow(n as u32);
    let mut coords = vec![Scalar::zero(mode); dim];
    // Component index digits over (unit, X0, X1) per site, first site most
    // significant.
    coords[0] = sc(1, mode);
    for x in 0..1usize << n {
        let mut idx = 0usize;
        for j in 0..n {
            let bit = (x >> (n - 1 - j)) & 1;
            idx = idx * 3 + 1 + bit;
        }
        coords[idx] = if f.eval_index(x) {
            sc(-1, mode)
        } else {
            sc(1, mode)
        };
    }
    Ok(GVector::new(vec![gbit_system(); n], coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Tensor;

    /// Independent oracle: the fiducial probability of outcomes `a` given
    /// settings `x`, evaluated directly from the closed-form parity rule.
    fn table_prob(f: &TruthTable, x: usize, a: usize) -> (i64, i64) {
        let n = f.arity;
        let parity = (a.count_ones() & 1) as usize;
        if parity == f.eval_index(x) as usize {
            (1, 1 << (n - 1))
        } else {
            (0, 1)
        }
    }

    fn fiducial_prob(state: &GVector, x: usize, a: usize, n: usize) -> Scalar {
        let mut effect = gbit_effect((x >> (n - 1)) & 1, (a >> (n - 1)) & 1, state.mode());
        for j in 1..n {
            let xj = (x >> (n - 1 - j)) & 1;
            let aj = (a >> (n - 1 - j)) & 1;
            effect = effect.tensor(&gbit_effect(xj, aj, state.mode())).unwrap();
        }
        effect.apply(state).unwrap()
    }

    #[test]
    fn pr_state_reproduces_the_pr_table() {
        let pr = pr_state(Mode::Exact);
        for x in 0..4usize {
            for a in 0..4usize {
                let p = fiducial_prob(&pr, x, a, 2);
                let (x1, x2) = (x >> 1, x & 1);
                let (a1, a2) = (a >> 1, a & 1);
                let expected = if (a1 ^ a2) == (x1 & x2) {
                    Scalar::ratio(1, 2, Mode::Exact)
                } else {
                    Scalar::zero(Mode::Exact)
                };
                assert_eq!(p, expected, "x={x:02b} a={a:02b}");
            }
        }
    }

    #[test]
    fn pr_marginals_are_maximally_mixed() {
        let pr = pr_state(Mode::Exact);
        let u = boxworld_theory(Mode::Exact).systems[0].unit.clone();
        // Contract party 1 with u: marginal coordinates of party 2.
        for k in 0..3 {
            let mut acc = Scalar::zero(Mode::Exact);
            for i in 0..3 {
                acc = &acc + &(&u.coords[i] * &pr.coords[i * 3 + k]);
            }
            let expected = if k == 0 {
                Scalar::one(Mode::Exact)
            } else {
                Scalar::zero(Mode::Exact)
            };
            assert_eq!(acc, expected);
        }
    }

    #[test]
    fn rho_f_arity_one_constant_zero_is_the_deterministic_vertex() {
        let f = TruthTable::constant(1, false);
        let v = rho_f(&f, Mode::Exact).unwrap();
        assert_eq!(v, gbit_vertex(0, 0, Mode::Exact));
    }

    #[test]
    fn rho_f_three_party_xor_matches_brute_force_table() {
        // f = XOR of three inputs.
        let bits = (0..8).map(|x: usize| (x.count_ones() & 1) == 1).collect();
        let f = TruthTable::new(3, bits).unwrap();
        let v = rho_f(&f, Mode::Exact).unwrap();
        for x in 0..8usize {
            for a in 0..8usize {
                let p = fiducial_prob(&v, x, a, 3);
                let (num, den) = table_prob(&f, x, a);
                assert_eq!(
                    p,
                    Scalar::ratio(num, den, Mode::Exact),
                    "x={x:03b} a={a:03b}"
                );
            }
        }
    }

    #[test]
    fn rho_f_of_and_is_the_pr_state() {
        assert_eq!(
            rho_f(&TruthTable::and2(), Mode::Exact).unwrap(),
            pr_state(Mode::Exact)
        );
    }

    #[test]
    fn fiducial_effects_sum_to_unit() {
        let mode = Mode::Exact;
        let u = boxworld_theory(mode).systems[0].unit.clone();
        for x in 0..2 {
            let sum: Vec<Scalar> = (0..3)
                .map(|i| &gbit_effect(x, 0, mode).coords[i] + &gbit_effect(x, 1, mode).coords[i])
                .collect();
            assert_eq!(sum, u.coords);
        }
    }

    #[test]
    fn vertices_give_deterministic_fiducial_outcomes() {
        let mode = Mode::Exact;
        for (a0, a1) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let v = gbit_vertex(a0, a1, mode);
            for x in 0..2 {
                for a in 0..2 {
                    let p = gbit_effect(x, a, mode).apply(&v).unwrap();
                    let det = if x == 0 { a0 } else { a1 };
                    let expected = if a == det {
                        Scalar::one(mode)
                    } else {
                        Scalar::zero(mode)
                    };
                    assert_eq!(p, expected);
                }
            }
        }
    }

    #[test]
    fn rho_f_six_party_support_and_mass() {
        // A random 6-party table: mass exactly 2^{1-n} on correct-parity
        // strings, zero elsewhere.
        let f = TruthTable::random_seeded(6, 99);
        let v = rho_f(&f, Mode::Exact).unwrap();
        for x in [0usize, 13, 37, 63] {
            for a in [0usize, 1, 21, 62] {
                let p = fiducial_prob(&v, x, a, 6);
                let (num, den) = table_prob(&f, x, a);
                assert_eq!(
                    p,
                    Scalar::ratio(num, den, Mode::Exact),
                    "x={x:06b} a={a:06b}"
                );
            }
        }
    }

    #[test]
    fn arity_guard_enforced() {
        assert!(rho_f(&TruthTable::constant(1, false), Mode::Exact).is_ok());
        let too_big = TruthTable::constant(MAX_RHO_F_ARITY + 1, false);
        assert!(matches!(
            rho_f(&too_big, Mode::Exact),
            Err(TheoryError::Guard(_))
        ));
    }
}
