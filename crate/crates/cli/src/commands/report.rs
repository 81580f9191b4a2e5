use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::records::{CorrelationRecord, ScoreRecord};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Score-record JSON files produced by `score`.
    #[arg(long, num_args = 0..)]
    pub scores: Vec<PathBuf>,
    /// Correlation-record JSON files produced by `correlate`.
    #[arg(long, num_args = 0..)]
    pub correlations: Vec<PathBuf>,
    /// Directory receiving the aggregate tables.
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

#[derive(Default)]
struct MethodAgg {
    traces: usize,
    changepoints: usize,
    precision: Vec<f64>,
    recall: Vec<f64>,
    recall_w: Vec<f64>,
    f2: Vec<f64>,
    f2_w: Vec<f64>,
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

pub fn run(args: Args) -> anyhow::Result<()> {
    if args.scores.is_empty() && args.correlations.is_empty() {
        anyhow::bail!("nothing to report: pass --scores and/or --correlations");
    }
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;

    let mut score_records: Vec<ScoreRecord> = args
        .scores
        .iter()
        .map(|p| read_json(p))
        .collect::<anyhow::Result<_>>()?;
    score_records.sort_by(|a, b| (&a.trace_id, &a.method).cmp(&(&b.trace_id, &b.method)));

    let mut corr_records: Vec<CorrelationRecord> = args
        .correlations
        .iter()
        .map(|p| read_json(p))
        .collect::<anyhow::Result<_>>()?;
    corr_records.sort_by(|a, b| a.probe.cmp(&b.probe));

    if !score_records.is_empty() {
        // Per-trace score table, the evaluation-figure analog.
        let mut w = csv::Writer::from_path(args.out_dir.join("scores.csv"))?;
        w.write_record([
            "trace_id", "method", "tp", "fp", "fn", "precision", "recall", "recall_w", "f2",
            "f2_w",
        ])?;
        for r in &score_records {
            w.write_record([
                r.trace_id.clone(),
                r.method.clone(),
                r.report.tp.to_string(),
                r.report.fp.to_string(),
                r.report.fn_.to_string(),
                r.report.precision.to_string(),
                r.report.recall.to_string(),
                r.report.recall_w.to_string(),
                r.report.f2.to_string(),
                r.report.f2_w.to_string(),
            ])?;
        }
        w.flush()?;

        // Long-format changepoint counts, the CDF/density plot input.
        let mut w = csv::Writer::from_path(args.out_dir.join("change_counts.csv"))?;
        w.write_record(["trace_id", "method", "n_changepoints"])?;
        for r in &score_records {
            w.write_record([
                r.trace_id.clone(),
                r.method.clone(),
                r.report.n_detections.to_string(),
            ])?;
        }
        w.flush()?;
    }

    if !corr_records.is_empty() {
        let mut w = csv::Writer::from_path(args.out_dir.join("correlation.csv"))?;
        w.write_record(["probe", "kind", "n_path_changes", "n_matched", "precision"])?;
        for r in &corr_records {
            for k in &r.report.precision_per_kind {
                w.write_record([
                    r.probe.clone(),
                    k.kind.to_string(),
                    k.n_path_changes.to_string(),
                    k.n_matched.to_string(),
                    k.precision.map_or(String::new(), |p| p.to_string()),
                ])?;
            }
        }
        w.flush()?;
    }

    // Aggregate JSON across probes.
    let mut methods: BTreeMap<String, MethodAgg> = BTreeMap::new();
    for r in &score_records {
        let agg = methods.entry(r.method.clone()).or_default();
        agg.traces += 1;
        agg.changepoints += r.report.n_detections;
        agg.precision.push(r.report.precision);
        agg.recall.push(r.report.recall);
        agg.recall_w.push(r.report.recall_w);
        agg.f2.push(r.report.f2);
        agg.f2_w.push(r.report.f2_w);
    }
    let mut kinds: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in &corr_records {
        for k in &r.report.precision_per_kind {
            let entry = kinds.entry(k.kind.to_string()).or_default();
            entry.0 += k.n_path_changes;
            entry.1 += k.n_matched;
        }
    }
    let aggregate = serde_json::json!({
        "methods": methods.iter().map(|(name, a)| {
            (name.clone(), serde_json::json!({
                "traces": a.traces,
                "total_changepoints": a.changepoints,
                "precision": { "mean": mean(&a.precision), "median": median(&a.precision) },
                "recall": { "mean": mean(&a.recall), "median": median(&a.recall) },
                "recall_w": { "mean": mean(&a.recall_w), "median": median(&a.recall_w) },
                "f2": { "mean": mean(&a.f2), "median": median(&a.f2) },
                "f2_w": { "mean": mean(&a.f2_w), "median": median(&a.f2_w) },
            }))
        }).collect::<serde_json::Map<_, _>>(),
        "path_change_kinds": kinds.iter().map(|(kind, (total, matched))| {
            (kind.clone(), serde_json::json!({
                "n_path_changes": total,
                "n_matched": matched,
                "precision": if *total > 0 {
                    serde_json::json!(*matched as f64 / *total as f64)
                } else {
                    serde_json::Value::Null
                },
            }))
        }).collect::<serde_json::Map<_, _>>(),
    });
    std::fs::write(
        args.out_dir.join("aggregate.json"),
        serde_json::to_string_pretty(&aggregate)? + "\n",
    )?;
    Ok(())
}
