//! Exact rational linear programming: a dense two-phase simplex with Bland's
//! anti-cycling rule, plus Farkas certificates for infeasibility.
//!
//! Problems are in standard form `A x = b, x ≥ 0` with every coefficient an
//! arbitrary-precision rational, so feasibility answers are exact. Bland's
//! rule guarantees termination.

use num::rational::BigRational;
use num::{Signed, Zero};

/// `A x = b, x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub n_vars: usize,
    /// `(row, rhs)` pairs: `row · x = rhs`.
    pub rows: Vec<(Vec<BigRational>, BigRational)>,
}

impl LpProblem {
    pub fn new(n_vars: usize) -> Self {
        LpProblem {
            n_vars,
            rows: Vec::new(),
        }
    }

    pub fn equality(&mut self, row: Vec<BigRational>, rhs: BigRational) {
        assert_eq!(row.len(), self.n_vars);
        self.rows.push((row, rhs));
    }
}

/// A certificate `y` with `yᵀA ≤ 0` and `yᵀb > 0`, proving `A x = b, x ≥ 0`
/// infeasible.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub y: Vec<BigRational>,
}

/// Checks a Farkas certificate exactly.
pub fn verify_farkas(prob: &LpProblem, cert: &FarkasCertificate) -> bool {
    if cert.y.len() != prob.rows.len() {
        return false;
    }
    for j in 0..prob.n_vars {
        let mut acc = BigRational::zero();
        for (yi, (row, _)) in cert.y.iter().zip(&prob.rows) {
            acc += yi * &row[j];
        }
        if acc.is_positive() {
            return false;
        }
    }
    let mut yb = BigRational::zero();
    for (yi, (_, rhs)) in cert.y.iter().zip(&prob.rows) {
        yb += yi * rhs;
    }
    yb.is_positive()
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    /// Optimal solution of the minimisation, with the objective value.
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible(FarkasCertificate),
    Unbounded,
}

struct Tableau {
    /// Rows over columns `0..n_total` plus rhs at index `n_total`.
    t: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n_total: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.t[row][col].clone();
        for x in self.t[row].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = self.t[row].clone();
        for (r, trow) in self.t.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let factor = trow[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, p) in trow.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Minimises `cost` with Bland's rule. Returns `false` on unboundedness.
    fn run_simplex(&mut self, cost: &[BigRational], forbidden: &[bool]) -> bool {
        loop {
            // Bland: entering column is the smallest index with a negative
            // reduced cost c_j - Σ_r c_{basis[r]} T[r][j].
            let mut entering = None;
            'cols: for j in 0..self.n_total {
                if forbidden[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (r, &bv) in self.basis.iter().enumerate() {
                    if !cost[bv].is_zero() && !self.t[r][j].is_zero() {
                        reduced -= &cost[bv] * &self.t[r][j];
                    }
                }
                if reduced.is_negative() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else { return true };
            // Ratio test; ties resolved by the smallest basis variable index.
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.t.len() {
                if self.t[r][col].is_positive() {
                    let ratio = &self.t[r][self.n_total] / &self.t[r][col];
                    match &leave {
                        None => leave = Some((r, ratio)),
                        Some((best_r, best)) => {
                            if ratio < *best
                                || (ratio == *best && self.basis[r] < self.basis[*best_r])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else { return false };
            self.pivot(row, col);
        }
    }

    fn value_of(&self, j: usize) -> BigRational {
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv == j {
                return self.t[r][self.n_total].clone();
            }
        }
        BigRational::zero()
    }
}

/// Solves `min objective · x` over `A x = b, x ≥ 0`. With `objective = None`
/// only feasibility is decided (the reported value is 0).
pub fn solve(prob: &LpProblem, objective: Option<&[BigRational]>) -> LpOutcome {
    let m = prob.rows.len();
    let n = prob.n_vars;
    let n_total = n + m; // artificials appended
                         // Sign-flip rows to make rhs nonnegative; remember the flips for the
                         // Farkas certificate.
    let mut flip = vec![false; m];
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (r, (row, rhs)) in prob.rows.iter().enumerate() {
        let neg = rhs.is_negative();
        flip[r] = neg;
        let mut trow: Vec<BigRational> = Vec::with_capacity(n_total + 1);
        for a in row {
            trow.push(if neg { -a } else { a.clone() });
        }
        for k in 0..m {
            trow.push(if k == r {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            });
        }
        trow.push(if neg { -rhs } else { rhs.clone() });
        t.push(trow);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n_total).collect(),
        n_total,
    };

    // Phase 1: minimise the sum of artificials.
    let mut phase1_cost = vec![BigRational::zero(); n_total];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = BigRational::from_integer(1.into());
    }
    let forbidden = vec![false; n_total];
    let ok = tab.run_simplex(&phase1_cost, &forbidden);
    debug_assert!(ok, "phase 1 is bounded below by zero");
    let mut infeasibility = BigRational::zero();
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv >= n {
            infeasibility += &tab.t[r][tab.n_total];
        }
    }
    if infeasibility.is_positive() {
        // Phase-1 duals y = c_B B⁻¹, read off the artificial columns (they
        // carry B⁻¹). Unflip the row signs.
        let mut y = Vec::with_capacity(m);
        for i in 0..m {
            let mut yi = BigRational::zero();
            for (r, &bv) in tab.basis.iter().enumerate() {
                if bv >= n {
                    yi += &tab.t[r][n + i];
                }
            }
            if flip[i] {
                yi = -yi;
            }
            y.push(yi);
        }
        let cert = FarkasCertificate { y };
        debug_assert!(
            verify_farkas(prob, &cert),
            "phase-1 dual must certify infeasibility"
        );
        return LpOutcome::Infeasible(cert);
    }

    // Drive any degenerate zero-valued artificials out of the basis where
    // possible; fully redundant rows keep them harmlessly at zero.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, col);
            }
        }
    }

    // Phase 2.
    let value;
    let mut forbidden = vec![false; n_total];
    for f in forbidden.iter_mut().skip(n) {
        *f = true;
    }
    match objective {
        None => value = BigRational::zero(),
        Some(obj) => {
            assert_eq!(obj.len(), n);
            let mut cost = vec![BigRational::zero(); n_total];
            cost[..n].clone_from_slice(obj);
            if !tab.run_simplex(&cost, &forbidden) {
                return LpOutcome::Unbounded;
            }
            let mut v = BigRational::zero();
            for (r, &bv) in tab.basis.iter().enumerate() {
                if bv < n {
                    v += &cost[bv] * &tab.t[r][tab.n_total];
                }
            }
            value = v;
        }
    }
    let x: Vec<BigRational> = (0..n).map(|j| tab.value_of(j)).collect();
    LpOutcome::Optimal { x, value }
}

/// Exact feasibility of `A x = b, x ≥ 0`.
pub fn feasible_point(prob: &LpProblem) -> Result<Vec<BigRational>, FarkasCertificate> {
    match solve(prob, None) {
        LpOutcome::Optimal { x, .. } => Ok(x),
        LpOutcome::Infeasible(cert) => Err(cert),
        LpOutcome::Unbounded => unreachable!("feasibility runs have no objective"),
    }
}
