//! Monte-Carlo sweep of normalized Procrustes distance against noise.

use rayon::prelude::*;
use serde::Serialize;

use super::report::report_for_matrices;
use crate::error::{Error, Result};
use crate::synth::{noisy_rotation_pair, stream_rng};

/// One `(noise level, seed)` sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub noise: f64,
    pub seed: u64,
    /// `‖XᵀX − YᵀY‖_F / ‖YᵀY‖_F`.
    pub epsilon_normalized: f64,
    /// `‖Q*X − Y‖_F / ‖Y‖_F`.
    pub normalized_distance: f64,
    pub residual: f64,
    pub theorem1_bound: f64,
    pub within_bound: bool,
}

/// Draws `X` Gaussian (`dims × count`) and `Y = Q₀·X + s·G` for every noise
/// level `s` and seed index.
///
/// Seed index `k` always uses random stream `k` of `base_seed`, so all noise
/// levels share the same `X`, `Q₀` and `G` for a given seed. Rows come back
/// sorted by noise level, then seed.
pub fn perturbation_sweep(
    dims: usize,
    count: usize,
    noise_levels: &[f64],
    seeds: u64,
    base_seed: u64,
) -> Result<Vec<SweepRow>> {
    if dims == 0 || count == 0 {
        return Err(Error::InvalidArgument("dims and count must be positive".into()));
    }
    if let Some(bad) = noise_levels.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(Error::InvalidArgument(format!("noise level {bad} is not a finite non-negative number")));
    }
    let mut levels = noise_levels.to_vec();
    levels.sort_by(f64::total_cmp);

    let tasks: Vec<(f64, u64)> = levels
        .iter()
        .flat_map(|&s| (0..seeds).map(move |k| (s, k)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(noise, seed)| {
            let mut rng = stream_rng(base_seed, seed);
            let (x, y, _) = noisy_rotation_pair(dims, count, noise, &mut rng);
            let report = report_for_matrices(&x, &y);
            let gram_y = y.tr_mul(&y).norm();
            SweepRow {
                noise,
                seed,
                epsilon_normalized: if gram_y > 0.0 { report.epsilon / gram_y } else { 0.0 },
                normalized_distance: report.normalized_distance,
                residual: report.residual,
                theorem1_bound: report.theorem1_bound,
                within_bound: report.checks[0].holds,
            }
        })
        .collect();
    Ok(rows)
}

/// Median normalized distance per distinct noise level, in level order.
pub fn median_by_level(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let level = rows[i].noise;
        let mut vals: Vec<f64> = rows[i..]
            .iter()
            .take_while(|r| r.noise == level)
            .map(|r| r.normalized_distance)
            .collect();
        i += vals.len();
        out.push((level, median(&mut vals)));
    }
    out
}

pub(crate) fn median(vals: &mut [f64]) -> f64 {
    vals.sort_by(f64::total_cmp);
    let n = vals.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        vals[n / 2]
    } else {
        0.5 * (vals[n / 2 - 1] + vals[n / 2])
    }
}
