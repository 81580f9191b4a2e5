use std::path::PathBuf;

use anyhow::Context;

use netchange::correlate::{correlate, DEFAULT_WINDOW_SECS};
use netchange::formats;

use crate::commands::{to_pretty_json, write_output};
use crate::records::{id_from_path, CorrelationRecord};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Detected RTT changepoints (label CSV, indices into --trace).
    #[arg(long)]
    pub rtt_changes: PathBuf,
    /// The RTT trace the changepoint indices refer to.
    #[arg(long)]
    pub trace: PathBuf,
    /// Path-change CSV from `pathscan`.
    #[arg(long)]
    pub path_changes: PathBuf,
    /// Shift tolerance, seconds; defaults to one traceroute interval.
    #[arg(long, default_value_t = DEFAULT_WINDOW_SECS)]
    pub window_secs: i64,
    /// Probe identifier recorded in the report (defaults to the trace stem).
    #[arg(long)]
    pub probe: Option<String>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let trace = formats::read_trace_file(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    let positions = formats::read_changepoints_file(&args.rtt_changes, trace.len(), "rtt")
        .with_context(|| format!("reading {}", args.rtt_changes.display()))?;
    let rtt_epochs: Vec<i64> = positions
        .positions()
        .iter()
        .map(|&p| {
            trace
                .epoch_at(p)
                .ok_or_else(|| anyhow::anyhow!("changepoint {p} outside trace"))
        })
        .collect::<anyhow::Result<_>>()?;
    let path_changes = formats::read_path_changes_file(&args.path_changes)
        .with_context(|| format!("reading {}", args.path_changes.display()))?;

    let report = correlate(&rtt_epochs, &path_changes, args.window_secs)?;
    let record = CorrelationRecord {
        probe: args.probe.unwrap_or_else(|| id_from_path(&args.trace)),
        report,
    };
    write_output(args.output.as_deref(), &to_pretty_json(&record)?)
}
