//! Cell-range execution helpers.
//!
//! Every kernel in the crate goes through [`map_cells`] or [`chunked_sums`],
//! which dispatch to rayon when the `parallel` feature is enabled and the
//! caller asked for [`ExecMode::Parallel`]. Reductions are always performed
//! over fixed-size chunks summed in index order, so the sequential and
//! parallel paths produce bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many cells the parallel path falls back to a plain loop.
pub const PARALLEL_THRESHOLD: usize = 2048;

/// Fixed reduction chunk; independent of the thread count.
pub const REDUCTION_CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    fn use_threads(self, n: usize) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel && n >= PARALLEL_THRESHOLD
    }
}

/// Evaluates `f(i)` for `i in 0..n` and collects the results in order.
pub fn map_cells<T, F>(mode: ExecMode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.use_threads(n) {
        return (0..n).into_par_iter().with_min_len(256).map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Sums the `K`-component vectors `f(i)` for `i in 0..n`.
///
/// Partial sums are formed over chunks of [`REDUCTION_CHUNK`] cells and then
/// added left to right, which fixes the floating-point association order.
pub fn chunked_sums<const K: usize, F>(mode: ExecMode, n: usize, f: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync + Send,
{
    let chunks = n.div_ceil(REDUCTION_CHUNK);
    let partial = |c: usize| {
        let mut acc = [0.0; K];
        let hi = ((c + 1) * REDUCTION_CHUNK).min(n);
        for i in c * REDUCTION_CHUNK..hi {
            let v = f(i);
            for k in 0..K {
                acc[k] += v[k];
            }
        }
        acc
    };
    let partials: Vec<[f64; K]> = if mode.use_threads(n) {
        #[cfg(feature = "parallel")]
        {
            (0..chunks).into_par_iter().map(partial).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..chunks).map(partial).collect()
        }
    } else {
        (0..chunks).map(partial).collect()
    };
    let mut total = [0.0; K];
    for p in partials {
        for k in 0..K {
            total[k] += p[k];
        }
    }
    total
}

/// Maximum of `f(i)` over `0..n`; `f64::max` is order independent.
pub fn max_over<F>(mode: ExecMode, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.use_threads(n) {
        return (0..n).into_par_iter().map(f).reduce(|| f64::NEG_INFINITY, f64::max);
    }
    let _ = mode;
    (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
}
