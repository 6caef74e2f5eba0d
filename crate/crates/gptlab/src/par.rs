//! Data-parallel trial loops with a sequential fallback.
//!
//! With the `parallel` feature (default) the indexed map runs on the rayon
//! pool; without it the same entry point runs sequentially. Results are
//! collected in index order either way, so callers are deterministic
//! independent of thread count. The `_seq` variant is always available for
//! benchmark comparisons.

/// Maps `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    indexed_map_seq(n, f)
}

/// Sequential twin of [`indexed_map`], kept unconditionally for benches.
pub fn indexed_map_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Configures the rayon thread pool size. No-op without the `parallel` feature.
pub fn configure_threads(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            // Ignore the error if a global pool was already installed.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let a = indexed_map(100, |i| i * i);
        let b = indexed_map_seq(100, |i| i * i);
        assert_eq!(a, b);
    }
}
