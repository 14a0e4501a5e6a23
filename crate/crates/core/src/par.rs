//! Data-parallel kernels with a sequential fallback.
//!
//! The `parallel` feature (on by default) routes the hot inner loops —
//! series convolution coefficients, matrix-product entries, independent
//! verification jobs — through rayon. With the feature off every helper
//! degrades to a plain sequential loop, so results are bit-identical either
//! way; the criterion bench suite compares the two.

/// Map `0..n` through `f`, in parallel when enabled and the job is big
/// enough to amortize the fork.
pub fn map_indexed<T, F>(n: usize, threshold: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if n >= threshold {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = threshold;
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept callable so benches can compare.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Run independent jobs, in parallel when enabled.
pub fn run_jobs<T, F>(jobs: Vec<F>) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        jobs.into_par_iter().map(|f| f()).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.into_iter().map(|f| f()).collect()
    }
}
