//! Order-preserving execution helpers.
//!
//! With the `parallel` feature (default) the searches fan out over rayon;
//! without it they run sequentially. Either way results are deterministic:
//! maps preserve index order and searches return the first hit in index
//! order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether this build fans work out over a thread pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// First index in `0..n` satisfying `pred`, in index order.
#[cfg(feature = "parallel")]
pub(crate) fn find_first_index<F>(n: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).into_par_iter().find_first(|&i| pred(i))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first_index<F>(n: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).find(|&i| pred(i))
}

/// True iff some index in `0..n` satisfies `pred`.
#[cfg(feature = "parallel")]
pub(crate) fn any_index<F>(n: u64, pred: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).into_par_iter().any(pred)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn any_index<F>(n: u64, pred: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..n).any(pred)
}
