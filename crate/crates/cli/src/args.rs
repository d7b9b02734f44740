use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthalign::io::{Dtype, PairPolicy};
use orthalign::retrieval::Metric;

#[derive(Debug, Parser)]
#[command(name = "orthalign", version, about = "Align embedding spaces with orthogonal maps and check how well they can align")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a transform mapping --source embeddings onto --target.
    Fit(FitArgs),
    /// Apply a stored transform to embeddings.
    Apply(ApplyArgs),
    /// Retrieval metrics for queries against documents, optionally aligned.
    Eval(EvalArgs),
    /// Alignment report with every bound check; exits 1 if a check fails.
    BoundReport(BoundReportArgs),
    /// Build the pair that attains the worst-case distance bound.
    Tightness(TightnessArgs),
    /// Monte-Carlo sweeps over noise level or sample size.
    Sweep(SweepArgs),
    /// Subtract the mean embedding, optionally renormalizing.
    Center(CenterArgs),
    /// Convex combination of two paired embedding sets.
    Fuse(FuseArgs),
    /// Write each query's top-k documents as relevance judgments.
    Neighbors(NeighborsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Procrustes,
    Linear,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Pairing {
    Intersect,
    Strict,
}

impl From<Pairing> for PairPolicy {
    fn from(p: Pairing) -> Self {
        match p {
            Pairing::Intersect => PairPolicy::Intersect,
            Pairing::Strict => PairPolicy::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DtypeArg {
    F32,
    F64,
}

impl From<DtypeArg> for Dtype {
    fn from(d: DtypeArg) -> Self {
        match d {
            DtypeArg::F32 => Dtype::F32,
            DtypeArg::F64 => Dtype::F64,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Ndcg,
    Recall,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Ndcg => Metric::Ndcg,
            MetricArg::Recall => Metric::Recall,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Noise,
    Samples,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum, default_value = "procrustes")]
    pub method: Method,
    /// Ridge penalty for --method linear.
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    /// Fit on this many pairs drawn without replacement.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scale every embedding to unit norm before fitting.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value = "intersect")]
    pub pairing: Pairing,
    /// Transform file; the report goes to `<out>.report.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub transform: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output path; a `.tsv` extension selects text output.
    #[arg(long)]
    pub out: PathBuf,
    /// Binary output precision (defaults to the input's).
    #[arg(long, value_enum)]
    pub dtype: Option<DtypeArg>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub qrels: PathBuf,
    /// Map queries through this transform before retrieval.
    #[arg(long)]
    pub transform: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub k: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ndcg,recall")]
    pub metrics: Vec<MetricArg>,
    /// Skip the document whose id equals the query id.
    #[arg(long)]
    pub exclude_self: bool,
    /// Summary CSV; per-query values go to `<out>.per_query.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundReportArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, value_enum, default_value = "intersect")]
    pub pairing: Pairing,
    #[arg(long)]
    pub normalize: bool,
    /// Slack allowed in every inequality check.
    #[arg(long, default_value_t = orthalign::bounds::CHECK_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TightnessArgs {
    #[arg(long)]
    pub dims: usize,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the source half of the pair.
    #[arg(long, requires = "target_out")]
    pub source_out: Option<PathBuf>,
    /// Also write the target half of the pair.
    #[arg(long, requires = "source_out")]
    pub target_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "f64")]
    pub dtype: DtypeArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub mode: SweepMode,
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,

    /// Noise mode: embedding dimension.
    #[arg(long, default_value_t = 16)]
    pub dims: usize,
    /// Noise mode: items per instance.
    #[arg(long, default_value_t = 256)]
    pub count: usize,
    /// Noise mode: noise scales.
    #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.1,1")]
    pub levels: Vec<f64>,

    /// Samples mode: source pool.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Samples mode: target pool.
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub holdout_source: Option<PathBuf>,
    #[arg(long)]
    pub holdout_target: Option<PathBuf>,
    /// Samples mode: training-set sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Samples mode: allow holdout ids that also occur in the pool.
    #[arg(long)]
    pub allow_overlap: bool,
}

#[derive(Debug, Args)]
pub struct CenterArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub renormalize: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub dtype: Option<DtypeArg>,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[arg(long)]
    pub first: PathBuf,
    #[arg(long)]
    pub second: PathBuf,
    /// Weight of --first.
    #[arg(long, default_value_t = orthalign::align::FusionSpec::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long)]
    pub renormalize: bool,
    #[arg(long, value_enum, default_value = "intersect")]
    pub pairing: Pairing,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub dtype: Option<DtypeArg>,
}

#[derive(Debug, Args)]
pub struct NeighborsArgs {
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long)]
    pub exclude_self: bool,
    #[arg(long)]
    pub out: PathBuf,
}
