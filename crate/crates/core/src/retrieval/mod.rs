//! Dot-product retrieval, relevance judgments and ranking metrics.

mod eval;
mod judgments;
mod metrics;
mod run;

pub use eval::{
    cross_model_eval, median_by_size, sample_complexity_sweep, Metric, MetricRow, SampleRow, SampleSweepConfig,
};
pub use judgments::{parse_judgments, read_judgments, RelevanceJudgments};
pub use metrics::{ndcg_at_k, recall_at_k, MetricScores};
pub use run::{rank_order, top_k, Hit, QueryHits, RetrievalRun};
