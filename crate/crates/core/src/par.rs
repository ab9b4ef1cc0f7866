//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! plain iterator loops. Every helper preserves input order in its output so
//! results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Concatenation of `f(i)` over `0..n`, in index order.
#[cfg(feature = "parallel")]
pub(crate) fn flat_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Vec<R> + Sync + Send,
{
    let chunks: Vec<Vec<R>> = (0..n).into_par_iter().map(f).collect();
    chunks.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn flat_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> Vec<R>,
{
    (0..n).flat_map(f).collect()
}

/// First `Some` in index order (not first to finish).
#[cfg(feature = "parallel")]
pub(crate) fn find_map_first<R, F>(n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    (0..n).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_map_first<R, F>(n: usize, f: F) -> Option<R>
where
    F: Fn(usize) -> Option<R>,
{
    (0..n).find_map(f)
}

#[cfg(feature = "parallel")]
pub(crate) fn all_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    (0..n).into_par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn all_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool,
{
    (0..n).all(f)
}
