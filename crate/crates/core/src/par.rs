//! Index-range helpers that run on rayon when the `parallel` feature is on and
//! fall back to plain iterators otherwise. Both paths return identical results:
//! searches report the least matching index and maps preserve index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Least `i` in `0..len` with `pred(i)`.
pub fn find_first<F>(len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..len).into_par_iter().find_first(|&i| pred(i));
    #[cfg(not(feature = "parallel"))]
    return (0..len).find(|&i| pred(i));
}

/// `f(0), f(1), ..., f(len - 1)` in order.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..len).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return (0..len).map(f).collect();
}

/// Maps over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(f).collect();
}

/// Whether the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
