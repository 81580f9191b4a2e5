use std::path::PathBuf;

use anyhow::Context;

use netchange::formats;
use netchange::model::TruthSource;
use netchange::score::{score, MatchConfig};

use crate::commands::{to_pretty_json, write_output};
use crate::records::{id_from_path, ScoreRecord};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Ground-truth label CSV.
    #[arg(long)]
    pub truth: PathBuf,
    /// Detected changepoint CSV.
    #[arg(long)]
    pub detected: PathBuf,
    /// The trace both index into (CSV `epoch,rtt`).
    #[arg(long)]
    pub trace: PathBuf,
    /// Shift tolerance window, samples.
    #[arg(long, default_value_t = 2)]
    pub window: usize,
    /// Minimum following-segment length ρ, samples.
    #[arg(long, default_value_t = 2)]
    pub rho: usize,
    /// Identifier recorded in the report (defaults to the trace file stem).
    #[arg(long)]
    pub trace_id: Option<String>,
    /// Method name recorded in the report (defaults to the detection file stem).
    #[arg(long)]
    pub method: Option<String>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let trace = formats::read_trace_file(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    let n = trace.len();
    let truth = formats::read_truth_file(&args.truth, n, TruthSource::Human)
        .with_context(|| format!("reading {}", args.truth.display()))?;
    let detected = formats::read_changepoints_file(&args.detected, n, "detected")
        .with_context(|| format!("reading {}", args.detected.display()))?;
    let cfg = MatchConfig {
        window: args.window,
        rho: args.rho,
    };
    let report = score(&truth, &detected, &trace, &cfg)?;
    let record = ScoreRecord {
        trace_id: args
            .trace_id
            .unwrap_or_else(|| id_from_path(&args.trace)),
        method: args
            .method
            .unwrap_or_else(|| id_from_path(&args.detected)),
        report,
    };
    write_output(args.output.as_deref(), &to_pretty_json(&record)?)
}
