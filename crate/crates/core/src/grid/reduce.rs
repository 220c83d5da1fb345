//! Reductions whose result does not depend on the number of worker threads.
//!
//! Inputs are cut into fixed-size chunks, each chunk is summed sequentially
//! (possibly on different threads), and the chunk partials are combined by a
//! fixed pairwise tree. The association order is therefore a function of
//! the input length alone.

use rayon::prelude::*;

/// Elements per leaf of the reduction tree.
pub const CHUNK: usize = 4096;

fn pairwise(mut parts: Vec<f64>) -> f64 {
    if parts.is_empty() {
        return 0.0;
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| if p.len() == 2 { p[0] + p[1] } else { p[0] })
            .collect();
    }
    parts[0]
}

/// `Σ f(i)` for `i in 0..len`.
pub fn sum_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let parts: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(len);
            (c * CHUNK..end).map(&f).sum()
        })
        .collect();
    pairwise(parts)
}

pub fn sum(values: &[f64]) -> f64 {
    sum_by(values.len(), |i| values[i])
}

/// `max f(i)`, or `0` for an empty range. NaN propagates.
pub fn max_by<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let parts: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(len);
            (c * CHUNK..end).map(&f).fold(0.0f64, nan_max)
        })
        .collect();
    parts.into_iter().fold(0.0, nan_max)
}

/// Index and value of the largest `f(i)`; ties resolve to the smallest index.
pub fn argmax_by<F>(len: usize, f: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let parts: Vec<Option<(usize, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(len);
            (c * CHUNK..end).map(|i| (i, f(i))).fold(None, better)
        })
        .collect();
    parts.into_iter().flatten().fold(None, better)
}

fn better(best: Option<(usize, f64)>, cand: (usize, f64)) -> Option<(usize, f64)> {
    match best {
        None => Some(cand),
        Some(b) if b.1.is_nan() => Some(b),
        Some(b) if cand.1.is_nan() || cand.1 > b.1 => Some(cand),
        Some(b) => Some(b),
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
