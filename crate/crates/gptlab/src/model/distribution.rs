//! Joint outcome distributions, post-selection and sampling.

use super::{ModelError, Result};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A probability table over joint outcome strings, indexed by device
/// declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    radices: Vec<usize>,
    probs: Vec<Scalar>,
}

impl OutcomeDistribution {
    pub fn new(radices: Vec<usize>, probs: Vec<Scalar>) -> Self {
        assert_eq!(radices.iter().product::<usize>(), probs.len());
        OutcomeDistribution { radices, probs }
    }

    pub fn mode(&self) -> Mode {
        self.probs.first().map_or(Mode::Exact, Scalar::mode)
    }

    /// Outcome counts per device.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn rank_of(&self, string: &[usize]) -> usize {
        debug_assert_eq!(string.len(), self.radices.len());
        let mut rank = 0;
        for (digit, radix) in string.iter().zip(&self.radices) {
            debug_assert!(digit < radix);
            rank = rank * radix + digit;
        }
        rank
    }

    pub fn string_of(&self, mut rank: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.radices.len()];
        for i in (0..self.radices.len()).rev() {
            out[i] = rank % self.radices[i];
            rank /= self.radices[i];
        }
        out
    }

    pub fn prob(&self, string: &[usize]) -> &Scalar {
        &self.probs[self.rank_of(string)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        (0..self.probs.len()).map(|rank| (self.string_of(rank), &self.probs[rank]))
    }

    pub fn total(&self) -> Scalar {
        Scalar::sum(self.probs.iter(), self.mode())
    }

    /// All probabilities nonnegative (up to `tol` in approx mode) and total 1.
    pub fn check_normalised(&self, tol: f64) -> Result<()> {
        for p in &self.probs {
            if !p.is_nonneg_tol(tol) {
                return Err(ModelError::Invalid(format!("negative probability {p}")));
            }
        }
        let total = self.total();
        if !total.is_one_tol(tol) {
            return Err(ModelError::Unnormalised(total.to_string()));
        }
        Ok(())
    }
}

/// Conditions `d` on the event `S`, returning the renormalised conditional
/// distribution and the selection probability `p_S`.
pub fn post_select<F>(d: &OutcomeDistribution, event: F) -> Result<(OutcomeDistribution, Scalar)>
where
    F: Fn(&[usize]) -> bool,
{
    let mode = d.mode();
    let mut p_s = Scalar::zero(mode);
    let mut selected = vec![false; d.len()];
    for (rank, (string, p)) in d.iter().enumerate() {
        if event(&string) {
            selected[rank] = true;
            p_s = &p_s + p;
        }
    }
    if p_s.is_zero() || !p_s.is_nonneg_tol(0.0) {
        return Err(ModelError::PostSelectionImpossible);
    }
    let probs = d
        .probs
        .iter()
        .enumerate()
        .map(|(rank, p)| {
            if selected[rank] {
                p / &p_s
            } else {
                Scalar::zero(mode)
            }
        })
        .collect();
    Ok((OutcomeDistribution::new(d.radices.clone(), probs), p_s))
}

/// Draws `n` outcome strings by inverse-CDF sampling with a ChaCha12 stream
/// seeded from `seed`. Deterministic: identical seeds give identical output.
pub fn sample(d: &OutcomeDistribution, seed: u64, n: usize) -> Result<Vec<Vec<usize>>> {
    d.check_normalised(DEFAULT_TOL)?;
    let cdf: Vec<f64> = d
        .probs
        .iter()
        .scan(0.0f64, |acc, p| {
            *acc += p.to_f64();
            Some(*acc)
        })
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let rank = cdf.partition_point(|&c| c <= u).min(d.len() - 1);
        out.push(d.string_of(rank));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    fn uniform4() -> OutcomeDistribution {
        OutcomeDistribution::new(vec![2, 2], vec![Scalar::ratio(1, 4, Mode::Exact); 4])
    }

    #[test]
    fn post_select_uniform_on_mixed_strings() {
        let d = uniform4();
        let (cond, p) = post_select(&d, |z| z[0] != z[1]).unwrap();
        assert_eq!(p, Scalar::ratio(1, 2, Mode::Exact));
        assert_eq!(*cond.prob(&[0, 1]), Scalar::ratio(1, 2, Mode::Exact));
        assert_eq!(*cond.prob(&[1, 0]), Scalar::ratio(1, 2, Mode::Exact));
        assert_eq!(*cond.prob(&[0, 0]), Scalar::zero(Mode::Exact));
    }

    #[test]
    fn post_select_on_everything_is_identity() {
        let d = uniform4();
        let (cond, p) = post_select(&d, |_| true).unwrap();
        assert_eq!(p, Scalar::one(Mode::Exact));
        assert_eq!(cond, d);
    }

    #[test]
    fn post_select_on_nothing_fails() {
        let d = uniform4();
        assert!(matches!(
            post_select(&d, |_| false),
            Err(ModelError::PostSelectionImpossible)
        ));
    }

    #[test]
    fn sampling_point_distribution_repeats_the_string() {
        let mut probs = vec![Scalar::zero(Mode::Exact); 4];
        probs[2] = Scalar::one(Mode::Exact);
        let d = OutcomeDistribution::new(vec![2, 2], probs);
        let draws = sample(&d, 7, 20).unwrap();
        assert!(draws.iter().all(|z| z == &vec![1, 0]));
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let d = uniform4();
        let a = sample(&d, 42, 1000).unwrap();
        let b = sample(&d, 42, 1000).unwrap();
        assert_eq!(a, b);
        let c = sample(&d, 43, 1000).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn fair_coin_frequency_within_binomial_bound() {
        let d = OutcomeDistribution::new(vec![2], vec![Scalar::ratio(1, 2, Mode::Exact); 2]);
        let n = 100_000usize;
        let draws = sample(&d, 123, n).unwrap();
        let zeros = draws.iter().filter(|z| z[0] == 0).count() as f64;
        let freq = zeros / n as f64;
        // 4σ binomial window around 1/2.
        let sigma = (0.25 / n as f64).sqrt();
        assert!((freq - 0.5).abs() < 4.0 * sigma, "frequency {freq}");
    }

    #[test]
    fn unnormalised_distribution_rejected() {
        let d = OutcomeDistribution::new(vec![2], vec![Scalar::ratio(1, 2, Mode::Exact); 2]);
        assert!(sample(&d, 0, 1).is_ok());
        let bad = OutcomeDistribution::new(vec![2], vec![Scalar::ratio(1, 3, Mode::Exact); 2]);
        assert!(matches!(
            sample(&bad, 0, 1),
            Err(ModelError::Unnormalised(_))
        ));
    }
}
