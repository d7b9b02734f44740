use std::cmp::Ordering;

use rayon::prelude::*;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub doc_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryHits {
    pub query_id: String,
    pub hits: Vec<Hit>,
}

/// Ranked documents per query, in query column order.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalRun {
    pub k: usize,
    pub queries: Vec<QueryHits>,
    /// Set when `k` exceeded the number of candidate documents for some query.
    pub truncated: bool,
}

/// Ranking order: higher score first, ties broken by ascending document id.
pub fn rank_order(a: (f64, &str), b: (f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

/// Exact dot-product search: the `k` best documents for every query column.
///
/// With `exclude_self`, the document sharing the query's id is skipped.
/// Queries are scored in parallel; each query's result does not depend on
/// the schedule.
pub fn top_k(
    queries: &EmbeddingMatrix,
    documents: &EmbeddingMatrix,
    k: usize,
    exclude_self: bool,
) -> Result<RetrievalRun> {
    if queries.dims() != documents.dims() {
        return Err(Error::DimensionMismatch {
            expected: documents.dims(),
            found: queries.dims(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let doc_ids = documents.ids();
    let results: Vec<(QueryHits, bool)> = (0..queries.count())
        .into_par_iter()
        .map(|qi| {
            let query_id = &queries.ids()[qi];
            let q = queries.column(qi);
            let mut scored: Vec<(f64, usize)> = documents
                .values()
                .column_iter()
                .enumerate()
                .filter(|(di, _)| !(exclude_self && &doc_ids[*di] == query_id))
                .map(|(di, d)| (d.dot(&q), di))
                .collect();
            let truncated = scored.len() < k;
            let cmp = |a: &(f64, usize), b: &(f64, usize)| {
                rank_order((a.0, &doc_ids[a.1]), (b.0, &doc_ids[b.1]))
            };
            if scored.len() > k {
                scored.select_nth_unstable_by(k - 1, cmp);
                scored.truncate(k);
            }
            scored.sort_unstable_by(cmp);
            let hits = scored
                .into_iter()
                .map(|(score, di)| Hit {
                    doc_id: doc_ids[di].clone(),
                    score,
                })
                .collect();
            (
                QueryHits {
                    query_id: query_id.clone(),
                    hits,
                },
                truncated,
            )
        })
        .collect();
    let truncated = results.iter().any(|(_, t)| *t);
    Ok(RetrievalRun {
        k,
        queries: results.into_iter().map(|(q, _)| q).collect(),
        truncated,
    })
}
