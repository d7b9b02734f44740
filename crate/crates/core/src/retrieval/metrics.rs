use super::judgments::RelevanceJudgments;
use super::run::RetrievalRun;
use crate::error::{Error, Result};

/// Per-query metric values (in run order) and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricScores {
    pub per_query: Vec<(String, f64)>,
    pub mean: f64,
}

impl MetricScores {
    fn from_values(per_query: Vec<(String, f64)>) -> Self {
        let mean = if per_query.is_empty() {
            0.0
        } else {
            per_query.iter().map(|(_, v)| v).sum::<f64>() / per_query.len() as f64
        };
        Self { per_query, mean }
    }
}

/// Fraction of a query's relevant documents (grade > 0) found in its top
/// `k`, with denominator `min(k, |relevant|)`. Queries without relevant
/// documents score 0.
pub fn recall_at_k(run: &RetrievalRun, truth: &RelevanceJudgments, k: usize) -> Result<MetricScores> {
    score_each(run, truth, |hits, judged| {
        let relevant = judged.values().filter(|g| **g > 0.0).count();
        if relevant == 0 {
            return 0.0;
        }
        let found = hits
            .iter()
            .take(k)
            .filter(|h| judged.get(&h.doc_id).is_some_and(|g| *g > 0.0))
            .count();
        found as f64 / k.min(relevant) as f64
    })
}

/// nDCG@k with exponential gain `2^grade − 1` and discount `log₂(rank + 1)`.
/// The ideal ranking is taken over the query's judged documents. Queries
/// whose ideal DCG is 0 score 0.
pub fn ndcg_at_k(run: &RetrievalRun, truth: &RelevanceJudgments, k: usize) -> Result<MetricScores> {
    score_each(run, truth, |hits, judged| {
        let dcg: f64 = hits
            .iter()
            .take(k)
            .enumerate()
            .map(|(r, h)| gain(judged.get(&h.doc_id).copied().unwrap_or(0.0)) / discount(r))
            .sum();
        let mut ideal: Vec<f64> = judged.values().copied().collect();
        ideal.sort_by(|a, b| b.total_cmp(a));
        let idcg: f64 = ideal
            .iter()
            .take(k)
            .enumerate()
            .map(|(r, g)| gain(*g) / discount(r))
            .sum();
        if idcg > 0.0 {
            dcg / idcg
        } else {
            0.0
        }
    })
}

fn gain(grade: f64) -> f64 {
    grade.exp2() - 1.0
}

/// Discount for the 0-based rank `r`.
fn discount(r: usize) -> f64 {
    ((r + 2) as f64).log2()
}

fn score_each(
    run: &RetrievalRun,
    truth: &RelevanceJudgments,
    f: impl Fn(&[super::run::Hit], &std::collections::BTreeMap<String, f64>) -> f64,
) -> Result<MetricScores> {
    let mut per_query = Vec::with_capacity(run.queries.len());
    for q in &run.queries {
        let judged = truth
            .get(&q.query_id)
            .ok_or_else(|| Error::MissingQuery(q.query_id.clone()))?;
        per_query.push((q.query_id.clone(), f(&q.hits, judged)));
    }
    Ok(MetricScores::from_values(per_query))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::run::{Hit, QueryHits};

    fn run_of(ids: &[&str]) -> RetrievalRun {
        RetrievalRun {
            k: ids.len(),
            queries: vec![QueryHits {
                query_id: "q".into(),
                hits: ids
                    .iter()
                    .enumerate()
                    .map(|(i, d)| Hit {
                        doc_id: d.to_string(),
                        score: -(i as f64),
                    })
                    .collect(),
            }],
            truncated: false,
        }
    }

    fn truth(pairs: &[(&str, f64)]) -> RelevanceJudgments {
        let mut t = RelevanceJudgments::new();
        for (d, g) in pairs {
            t.insert("q", d, *g).unwrap();
        }
        t
    }

    #[test]
    fn recall_cases() {
        let all = truth(&[("a", 1.0), ("b", 1.0)]);
        assert_eq!(recall_at_k(&run_of(&["b", "a", "c"]), &all, 3).unwrap().mean, 1.0);
        assert_eq!(recall_at_k(&run_of(&["x", "y"]), &all, 2).unwrap().mean, 0.0);
        let three = truth(&[("a", 1.0), ("b", 1.0), ("c", 1.0)]);
        let r = recall_at_k(&run_of(&["a", "x", "y", "c", "z"]), &three, 5).unwrap();
        assert!((r.mean - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn recall_denominator_is_capped_by_k() {
        let many = truth(&[("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)]);
        assert_eq!(recall_at_k(&run_of(&["a", "b"]), &many, 2).unwrap().mean, 1.0);
    }

    #[test]
    fn ndcg_perfect_and_rank_two() {
        let one = truth(&[("a", 1.0)]);
        assert_eq!(ndcg_at_k(&run_of(&["a", "b"]), &one, 10).unwrap().mean, 1.0);
        let v = ndcg_at_k(&run_of(&["b", "a"]), &one, 10).unwrap().mean;
        assert!((v - 1.0 / 3f64.log2()).abs() < 1e-12);
        assert!((v - 0.63093).abs() < 1e-5);
    }

    #[test]
    fn ndcg_graded() {
        // Hand computation: DCG = 1/log2(2) + 3/log2(3); IDCG = 3/1 + 1/log2(3).
        let t = truth(&[("a", 1.0), ("b", 2.0)]);
        let v = ndcg_at_k(&run_of(&["a", "b"]), &t, 10).unwrap().mean;
        let expected = (1.0 + 3.0 / 3f64.log2()) / (3.0 + 1.0 / 3f64.log2());
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn no_relevant_scores_zero() {
        let t = truth(&[("a", 0.0)]);
        assert_eq!(ndcg_at_k(&run_of(&["a"]), &t, 10).unwrap().mean, 0.0);
        assert_eq!(recall_at_k(&run_of(&["a"]), &t, 10).unwrap().mean, 0.0);
    }

    #[test]
    fn missing_query_is_an_error() {
        let t = RelevanceJudgments::new();
        assert_eq!(ndcg_at_k(&run_of(&["a"]), &t, 10).unwrap_err().code(), "missing_query");
    }
}
