//! Per-point work distribution: data-parallel with the `parallel` feature,
//! sequential otherwise.  Both paths preserve input order, so downstream
//! reductions are deterministic either way.

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map_points<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map_points<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map `f` over `items` on the current thread regardless of features, for
/// equivalence tests and benchmark baselines.
pub fn map_points_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Whether this build distributes per-point work across threads.
pub const PARALLEL: bool = cfg!(feature = "parallel");
