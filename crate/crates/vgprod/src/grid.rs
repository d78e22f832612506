//! Deterministic grid evaluation, data-parallel when the `parallel` feature
//! is enabled. Output order always matches input order.

/// Evaluates `f` over `points`, in parallel when built with the `parallel`
/// feature (the default). Row order is the input order regardless of
/// scheduling.
pub fn eval_grid<T, F>(points: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|&x| f(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        eval_grid_serial(points, f)
    }
}

/// Sequential reference path, always available (the benchmarks compare the
/// two).
pub fn eval_grid_serial<T, F>(points: &[f64], f: F) -> Vec<T>
where
    F: Fn(f64) -> T,
{
    points.iter().map(|&x| f(x)).collect()
}

/// Parallel (or sequential, without the `parallel` feature) map over a
/// slice, preserving order.
pub fn par_map<U, T, F>(items: &[U], f: F) -> Vec<T>
where
    U: Sync,
    T: Send,
    F: Fn(&U) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|u| f(u)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(|u| f(u)).collect()
    }
}

/// Builds a linearly or logarithmically spaced grid of `count >= 1` points.
pub fn linspace(start: f64, stop: f64, count: usize, log_spacing: bool) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let n = (count - 1) as f64;
    if log_spacing {
        let (ls, le) = (start.ln(), stop.ln());
        (0..count)
            .map(|i| (ls + (le - ls) * i as f64 / n).exp())
            .collect()
    } else {
        (0..count)
            .map(|i| start + (stop - start) * i as f64 / n)
            .collect()
    }
}
