//! Map helper that runs on rayon when the `parallel` feature is enabled and
//! the caller asked for it, and falls back to a plain sequential loop
//! otherwise. Sweeps and characteristic-function scans route through here.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to every element of `items`.
///
/// `parallel = true` uses the rayon thread pool (when compiled in); the
/// sequential path is always available and is the one benchmarks compare
/// against.
pub fn run_map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return items.par_iter().map(&f).collect();
        }
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Index-based variant for workloads that are cheaper to describe by index.
pub fn run_map_idx<R, F>(n: usize, parallel: bool, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return (0..n).into_par_iter().map(&f).collect();
        }
    }
    let _ = parallel;
    (0..n).map(f).collect()
}
