use serde::Serialize;

use orthalign::align::{
    apply_centering, apply_transform, fit_centering, fuse, pad_transform, solve_linear, solve_procrustes, zero_pad,
    AnyTransform, FusionSpec, Transform,
};
use orthalign::bounds::{build_report, median_by_level, perturbation_sweep, theorem1_bound, tightness_example, AlignmentReport};
use orthalign::io::{encode_transform, pair_by_id, read_transform, PairPolicy};
use orthalign::retrieval::{
    cross_model_eval, median_by_size, read_judgments, sample_complexity_sweep, top_k, Metric, RelevanceJudgments,
    SampleSweepConfig,
};
use orthalign::synth::sample_indices;
use orthalign::EmbeddingMatrix;

use crate::args::*;
use crate::files::*;

pub fn fit(args: &FitArgs) -> Outcome {
    if matches!(args.method, Method::Procrustes) && args.ridge != 0.0 {
        return Err(Failure::Usage("--ridge only applies to --method linear".into()));
    }
    let (source, _) = load(&args.source)?;
    let (target, _) = load(&args.target)?;
    let (mut x, mut y) = pair_by_id(&source, &target, args.pairing.into())?;
    if x.count() == 0 {
        return Err(Failure::Usage("source and target share no ids".into()));
    }
    if let Some(n) = args.sample {
        if n == 0 || n > x.count() {
            return Err(Failure::Usage(format!(
                "--sample {n} is outside 1..={} (the number of paired items)",
                x.count()
            )));
        }
        let picked = sample_indices(x.count(), n, args.seed, 0)?;
        x = x.select(&picked);
        y = y.select(&picked);
    }
    if args.normalize {
        x = normalize(x, "source");
        y = normalize(y, "target");
    }
    let (x, y) = pad_to_common(&x, &y)?;

    let transform: AnyTransform = match args.method {
        Method::Procrustes => solve_procrustes(&x, &y)?.into(),
        Method::Linear => solve_linear(&x, &y, args.ridge)?.into(),
    };
    let report = build_report(&x, &y)?;
    let fitted = apply_transform(&transform, &x)?;
    eprintln!(
        "fitted {} pairs in {} dims; residual {:.6e} (orthogonal optimum {:.6e})",
        x.count(),
        x.dims(),
        (fitted.values() - y.values()).norm(),
        report.residual
    );
    write_outputs(vec![
        (args.out.clone(), encode_transform(&transform)?),
        (sibling(&args.out, ".report.json"), json_bytes(&report)?),
    ])
}

pub fn apply(args: &ApplyArgs) -> Outcome {
    let t = reading(&args.transform, read_transform(&args.transform))?;
    let (m, dtype) = load(&args.input)?;
    let m = if m.dims() < t.dims() { zero_pad(&m, t.dims())? } else { m };
    let out = apply_transform(&t, &m)?;
    let bytes = embedding_bytes(&args.out, &out, args.dtype.map(Into::into), dtype)?;
    write_outputs(vec![(args.out.clone(), bytes)])
}

#[derive(Serialize)]
struct EvalRow<'a> {
    config: &'a str,
    metric: &'static str,
    k: usize,
    mean: f64,
    per_query_path: String,
}

#[derive(Serialize)]
struct PerQueryRow<'a> {
    config: &'a str,
    metric: &'static str,
    k: usize,
    query_id: &'a str,
    value: f64,
}

pub fn eval(args: &EvalArgs) -> Outcome {
    if args.k.contains(&0) {
        return Err(Failure::Usage("--k values must be positive".into()));
    }
    let (docs, _) = load(&args.docs)?;
    let (queries, _) = load(&args.queries)?;
    let truth = reading(&args.qrels, read_judgments(&args.qrels))?;
    let transform = match &args.transform {
        Some(path) => Some(reading(path, read_transform(path))?),
        None => None,
    };

    // Zero-pad everything to one shared dimension; the transform acts as the
    // identity on the padding.
    let mut dims = docs.dims().max(queries.dims());
    if let Some(t) = &transform {
        if queries.dims() > t.dims() {
            return Err(orthalign::Error::DimensionMismatch {
                expected: t.dims(),
                found: queries.dims(),
            }
            .into());
        }
        dims = dims.max(t.dims());
    }
    let docs = zero_pad(&docs, dims)?;
    let queries = zero_pad(&queries, dims)?;
    let transform = transform.map(|t| pad_transform(&t, dims)).transpose()?;

    let metrics: Vec<Metric> = args.metrics.iter().map(|m| (*m).into()).collect();
    let rows = cross_model_eval(
        &docs,
        &queries,
        transform.as_ref().map(|t| t as &dyn Transform),
        &truth,
        &metrics,
        &args.k,
        args.exclude_self,
    )?;

    let per_query_path = sibling(&args.out, ".per_query.csv");
    let summary = csv_bytes(rows.iter().map(|r| EvalRow {
        config: &r.config,
        metric: r.metric.name(),
        k: r.k,
        mean: r.scores.mean,
        per_query_path: per_query_path.display().to_string(),
    }))?;
    let detail = csv_bytes(rows.iter().flat_map(|r| {
        r.scores.per_query.iter().map(move |(q, v)| PerQueryRow {
            config: &r.config,
            metric: r.metric.name(),
            k: r.k,
            query_id: q,
            value: *v,
        })
    }))?;
    for r in &rows {
        println!("{}\t{}@{}\t{:.6}", r.config, r.metric, r.k, r.scores.mean);
    }
    write_outputs(vec![(args.out.clone(), summary), (per_query_path, detail)])
}

fn report_fields(report: &AlignmentReport) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = [
        ("residual", report.residual),
        ("epsilon", report.epsilon),
        ("delta_sq", report.delta_sq),
        ("theorem1_bound", report.theorem1_bound),
        ("corollary2_bound", report.corollary2_bound),
        ("mean_sq_alignment_error", report.mean_sq_alignment_error),
        ("sigma_min", report.sigma_min),
        ("prior_bound", report.prior_bound),
        ("normalized_distance", report.normalized_distance),
        ("cross_sim_errors.0", report.cross_sim_errors[0]),
        ("cross_sim_errors.1", report.cross_sim_errors[1]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_string()))
    .collect();
    for c in &report.checks {
        out.push((format!("checks.{}.lhs", c.name), c.lhs.to_string()));
        out.push((format!("checks.{}.rhs", c.name), c.rhs.to_string()));
        out.push((format!("checks.{}.holds", c.name), c.holds.to_string()));
    }
    out
}

pub fn bound_report(args: &BoundReportArgs) -> Outcome {
    if !(args.tolerance >= 0.0 && args.tolerance.is_finite()) {
        return Err(Failure::Usage("--tolerance must be finite and non-negative".into()));
    }
    let (source, _) = load(&args.source)?;
    let (target, _) = load(&args.target)?;
    let (mut x, mut y) = pair_by_id(&source, &target, args.pairing.into())?;
    if x.count() == 0 {
        return Err(Failure::Usage("source and target share no ids".into()));
    }
    if args.normalize {
        x = normalize(x, "source");
        y = normalize(y, "target");
    }
    let (x, y) = pad_to_common(&x, &y)?;
    let mut report = build_report(&x, &y)?;
    for c in &mut report.checks {
        c.holds = c.lhs <= c.rhs + args.tolerance;
    }
    let bytes = match args.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => key_value_csv(&report_fields(&report))?,
    };
    for c in &report.checks {
        println!("{}\t{}\t{:.6e} <= {:.6e}", if c.holds { "ok" } else { "VIOLATED" }, c.name, c.lhs, c.rhs);
    }
    write_outputs(vec![(args.out.clone(), bytes)])?;
    let failed: Vec<&str> = report.violations().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct TightnessSummary {
    dims: usize,
    epsilon: f64,
    gram_discrepancy: f64,
    residual: f64,
    theorem1_bound: f64,
    ratio: f64,
}

pub fn tightness(args: &TightnessArgs) -> Outcome {
    let (x, y) = tightness_example(args.dims, args.epsilon)?;
    let report = build_report(&x, &y)?;
    let bound = theorem1_bound(args.dims, args.epsilon);
    let summary = TightnessSummary {
        dims: args.dims,
        epsilon: args.epsilon,
        gram_discrepancy: report.epsilon,
        residual: report.residual,
        theorem1_bound: bound,
        ratio: report.residual / bound,
    };
    let bytes = match args.format {
        Format::Json => json_bytes(&summary)?,
        Format::Csv => key_value_csv(&[
            ("dims".into(), summary.dims.to_string()),
            ("epsilon".into(), summary.epsilon.to_string()),
            ("gram_discrepancy".into(), summary.gram_discrepancy.to_string()),
            ("residual".into(), summary.residual.to_string()),
            ("theorem1_bound".into(), summary.theorem1_bound.to_string()),
            ("ratio".into(), summary.ratio.to_string()),
        ])?,
    };
    println!("residual {:.12} bound {:.12} ratio {:.12}", summary.residual, bound, summary.ratio);
    let mut outputs = vec![(args.out.clone(), bytes)];
    if let (Some(s), Some(t)) = (&args.source_out, &args.target_out) {
        let dtype = Some(args.dtype.into());
        outputs.push((s.clone(), embedding_bytes(s, &x, dtype, None)?));
        outputs.push((t.clone(), embedding_bytes(t, &y, dtype, None)?));
    }
    write_outputs(outputs)
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    match args.mode {
        SweepMode::Noise => {
            let rows = perturbation_sweep(args.dims, args.count, &args.levels, args.seeds, args.seed)?;
            for (level, median) in median_by_level(&rows) {
                println!("noise {level}\tmedian normalized distance {median:.6}");
            }
            write_outputs(vec![(args.out.clone(), csv_bytes(&rows)?)])
        }
        SweepMode::Samples => {
            let need = |p: &Option<std::path::PathBuf>, flag: &str| {
                p.clone()
                    .ok_or_else(|| Failure::Usage(format!("--mode samples requires {flag}")))
            };
            let source = need(&args.source, "--source")?;
            let target = need(&args.target, "--target")?;
            let hold_source = need(&args.holdout_source, "--holdout-source")?;
            let hold_target = need(&args.holdout_target, "--holdout-target")?;
            if args.sizes.is_empty() {
                return Err(Failure::Usage("--mode samples requires --sizes".into()));
            }
            let (px, py) = pair_by_id(&load(&source)?.0, &load(&target)?.0, PairPolicy::Intersect)?;
            let (hx, hy) = pair_by_id(&load(&hold_source)?.0, &load(&hold_target)?.0, PairPolicy::Intersect)?;
            let (px, py) = pad_to_common(&px, &py)?;
            let (hx, hy) = pad_to_common(&hx, &hy)?;
            let config = SampleSweepConfig {
                sizes: args.sizes.clone(),
                seeds: args.seeds,
                base_seed: args.seed,
                allow_overlap: args.allow_overlap,
            };
            let rows = sample_complexity_sweep((&px, &py), (&hx, &hy), &config)?;
            for (n, median) in median_by_size(&rows) {
                println!("n {n}\tmedian holdout residual {median:.6}");
            }
            write_outputs(vec![(args.out.clone(), csv_bytes(&rows)?)])
        }
    }
}

pub fn center(args: &CenterArgs) -> Outcome {
    let (m, dtype) = load(&args.input)?;
    let c = fit_centering(&m, args.renormalize)?;
    let centered = apply_centering(&c, &m)?;
    if centered.zero_columns > 0 {
        eprintln!("warning: {} embeddings equal the mean and were left at zero", centered.zero_columns);
    }
    let bytes = embedding_bytes(&args.out, &centered.matrix, args.dtype.map(Into::into), dtype)?;
    write_outputs(vec![(args.out.clone(), bytes)])
}

pub fn fuse_cmd(args: &FuseArgs) -> Outcome {
    let spec = FusionSpec::new(args.alpha, args.renormalize)?;
    let (first, dtype) = load(&args.first)?;
    let (second, _) = load(&args.second)?;
    let (a, b) = pair_by_id(&first, &second, args.pairing.into())?;
    let (a, b) = pad_to_common(&a, &b)?;
    let fused = fuse(&a, &b, spec)?;
    let bytes = embedding_bytes(&args.out, &fused, args.dtype.map(Into::into), dtype)?;
    write_outputs(vec![(args.out.clone(), bytes)])
}

pub fn neighbors(args: &NeighborsArgs) -> Outcome {
    let (docs, _) = load(&args.docs)?;
    let (queries, _) = load(&args.queries)?;
    let (docs, queries): (EmbeddingMatrix, EmbeddingMatrix) = pad_to_common(&docs, &queries)?;
    let run = top_k(&queries, &docs, args.k, args.exclude_self)?;
    if run.truncated {
        eprintln!("warning: fewer than {} candidate documents for some queries", args.k);
    }
    let mut truth = RelevanceJudgments::new();
    for q in &run.queries {
        for h in &q.hits {
            truth.insert(&q.query_id, &h.doc_id, 1.0)?;
        }
    }
    write_outputs(vec![(args.out.clone(), truth.to_tsv().into_bytes())])
}
