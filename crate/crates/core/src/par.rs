//! Data-parallel reduction helpers with a guaranteed-sequential twin.
//!
//! All reductions in this crate are over exact integers or rationals, so the
//! reduction order is irrelevant and both paths produce identical results.
//! The `*_seq` variants exist even when the `parallel` feature is enabled so
//! benchmarks can compare the two directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `0..n` through `f` and combine with `join`, in parallel when the
/// `parallel` feature is enabled.
pub(crate) fn map_reduce<T, F, J>(n: u64, f: F, join: J) -> T
where
    T: Default + Send,
    F: Fn(u64) -> T + Sync + Send,
    J: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).reduce(T::default, join)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_reduce_seq(n, f, join)
    }
}

pub(crate) fn map_reduce_seq<T, F, J>(n: u64, f: F, join: J) -> T
where
    T: Default,
    F: Fn(u64) -> T,
    J: Fn(T, T) -> T,
{
    (0..n).map(f).fold(T::default(), join)
}

#[inline]
pub(crate) fn checked_add_i128(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("i128 accumulator overflow")
}

/// Checked sum of `f(i)` for `i ∈ 0..n`.
pub(crate) fn sum_i128<F>(n: u64, f: F) -> i128
where
    F: Fn(u64) -> i128 + Sync + Send,
{
    map_reduce(n, f, checked_add_i128)
}

pub(crate) fn sum_i128_seq<F>(n: u64, f: F) -> i128
where
    F: Fn(u64) -> i128,
{
    map_reduce_seq(n, f, checked_add_i128)
}

/// Installs a global thread pool with the given worker count (0 keeps the
/// default). Call at most once, before any parallel work; later calls are
/// ignored. A no-op without the `parallel` feature.
pub fn set_worker_count(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
    }
}
