//! End-to-end evaluation: cross-model retrieval and sample complexity of
//! the alignment fit.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::judgments::RelevanceJudgments;
use super::metrics::{ndcg_at_k, recall_at_k, MetricScores};
use super::run::top_k;
use crate::align::{apply_transform, procrustes, Transform};
use crate::bounds::median;
use crate::embedding::{ensure_paired, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::synth::sample_indices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Ndcg,
    Recall,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Ndcg => "ndcg",
            Metric::Recall => "recall",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ndcg" => Some(Metric::Ndcg),
            "recall" => Some(Metric::Recall),
            _ => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub config: String,
    pub metric: Metric,
    pub k: usize,
    pub scores: MetricScores,
}

/// Retrieval quality of `queries` against `documents`, after mapping the
/// queries through `transform` when one is given.
///
/// Rows are labelled `aligned` when a transform is applied and `raw`
/// otherwise; one row per `(metric, k)`.
pub fn cross_model_eval(
    documents: &EmbeddingMatrix,
    queries: &EmbeddingMatrix,
    transform: Option<&dyn Transform>,
    truth: &RelevanceJudgments,
    metrics: &[Metric],
    ks: &[usize],
    exclude_self: bool,
) -> Result<Vec<MetricRow>> {
    let max_k = *ks
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArgument("at least one cutoff k is required".into()))?;
    let (queries, config) = match transform {
        Some(t) => (apply_transform(t, queries)?, "aligned"),
        None => (queries.clone(), "raw"),
    };
    let run = top_k(&queries, documents, max_k, exclude_self)?;
    let mut rows = Vec::new();
    for &metric in metrics {
        for &k in ks {
            let scores = match metric {
                Metric::Ndcg => ndcg_at_k(&run, truth, k)?,
                Metric::Recall => recall_at_k(&run, truth, k)?,
            };
            rows.push(MetricRow {
                config: config.to_owned(),
                metric,
                k,
                scores,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSweepConfig {
    pub sizes: Vec<usize>,
    pub seeds: u64,
    pub base_seed: u64,
    /// Permit holdout ids that also occur in the pool (self-test only).
    pub allow_overlap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub n: usize,
    pub seed: u64,
    /// `‖Q̂·X_h − Y_h‖_F / ‖Y_h‖_F` on the holdout pair.
    pub residual_on_holdout: f64,
}

/// Fits the orthogonal alignment on `n` pairs drawn uniformly without
/// replacement from the pool, for every size and seed, and measures the
/// normalized residual on a held-out pair. Rows are ordered by size, then
/// seed; task `(size i, seed k)` uses random stream `i · seeds + k`.
pub fn sample_complexity_sweep(
    pool: (&EmbeddingMatrix, &EmbeddingMatrix),
    holdout: (&EmbeddingMatrix, &EmbeddingMatrix),
    config: &SampleSweepConfig,
) -> Result<Vec<SampleRow>> {
    let (source, target) = pool;
    let (hold_x, hold_y) = holdout;
    ensure_paired(source, target)?;
    ensure_paired(hold_x, hold_y)?;
    if source.dims() != hold_x.dims() {
        return Err(Error::DimensionMismatch {
            expected: source.dims(),
            found: hold_x.dims(),
        });
    }
    if let Some(&n) = config.sizes.iter().find(|&&n| n == 0 || n > source.count()) {
        return Err(Error::InvalidArgument(format!(
            "sample size {n} outside 1..={}",
            source.count()
        )));
    }
    if !config.allow_overlap {
        let pool_ids: HashSet<&str> = source.ids().iter().map(String::as_str).collect();
        if let Some(id) = hold_x.ids().iter().find(|id| pool_ids.contains(id.as_str())) {
            return Err(Error::InvalidArgument(format!("holdout id {id:?} also occurs in the pool")));
        }
    }
    let hold_norm = hold_y.values().norm();

    let tasks: Vec<(usize, usize, u64)> = config
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| (0..config.seeds).map(move |k| (i, n, k)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(i, n, seed)| {
            let picked = sample_indices(source.count(), n, config.base_seed, i as u64 * config.seeds + seed)
                .expect("sizes validated above");
            let x = source.values().select_columns(picked.iter());
            let y = target.values().select_columns(picked.iter());
            let q = procrustes(&x, &y);
            let residual = (q * hold_x.values() - hold_y.values()).norm();
            SampleRow {
                n,
                seed,
                residual_on_holdout: if hold_norm > 0.0 { residual / hold_norm } else { residual },
            }
        })
        .collect();
    Ok(rows)
}

/// Median holdout residual per sample size, in row order.
pub fn median_by_size(rows: &[SampleRow]) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let n = rows[i].n;
        let mut vals: Vec<f64> = rows[i..]
            .iter()
            .take_while(|r| r.n == n)
            .map(|r| r.residual_on_holdout)
            .collect();
        i += vals.len();
        out.push((n, median(&mut vals)));
    }
    out
}
