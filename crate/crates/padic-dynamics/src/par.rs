//! Batch mapping with a data-parallel core and a sequential fallback.
//!
//! The `parallel` feature (on by default) routes [`map`] through rayon's
//! global pool; without it the same call runs sequentially. Results are
//! returned in input order either way, so downstream output is identical
//! across the two builds. [`map_seq`] is always sequential and serves as
//! the comparison baseline for the benchmark suite.

/// Whether this build actually parallelizes [`map`].
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Sequential reference implementation with the same contract as [`map`].
pub fn map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let items: Vec<u64> = (0..500).collect();
        let square = |x: u64| x * x + 1;
        assert_eq!(map(items.clone(), square), map_seq(items, square));
    }
}
