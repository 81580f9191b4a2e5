use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;

use netchange::detect::{detect, DetectorPreset, PenaltyCriterion, PresetName};
use netchange::formats;
use netchange::model::RttTrace;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Trace files: CSV (`epoch,rtt`) or ping JSON lines (`.jsonl`/`.json`).
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_parser = parse_preset)]
    pub preset: PresetName,
    #[arg(long, default_value = "MBIC", value_parser = parse_penalty)]
    pub penalty: PenaltyCriterion,
    /// Output changepoint CSV (single input only).
    #[arg(long, conflicts_with = "out_dir")]
    pub output: Option<PathBuf>,
    /// Directory for per-input outputs, named `<stem>.<preset>.csv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Skip traces with fewer samples than this.
    #[arg(long, default_value_t = 0)]
    pub min_samples: usize,
    /// Worker threads for multi-file runs (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

fn parse_preset(s: &str) -> Result<PresetName, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_penalty(s: &str) -> Result<PenaltyCriterion, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn load_trace(path: &Path) -> anyhow::Result<RttTrace> {
    let is_jsonl = path
        .extension()
        .is_some_and(|e| e == "jsonl" || e == "json" || e == "ndjson");
    if is_jsonl {
        let (trace, stats) = formats::read_ping_file(path)?;
        if stats.skipped_lines > 0 {
            log::warn!(
                "{}: skipped {} malformed lines",
                path.display(),
                stats.skipped_lines
            );
        }
        Ok(trace)
    } else {
        Ok(formats::read_trace_file(path)?)
    }
}

pub fn run(args: Args) -> anyhow::Result<()> {
    if args.input.len() > 1 && args.out_dir.is_none() {
        anyhow::bail!("multiple inputs require --out-dir");
    }
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    if args.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build_global()
            .ok();
    }
    let preset = DetectorPreset::new(args.preset, args.penalty);

    let results: Vec<anyhow::Result<bool>> = args
        .input
        .par_iter()
        .map(|path| -> anyhow::Result<bool> {
            let trace =
                load_trace(path).with_context(|| format!("reading {}", path.display()))?;
            if trace.len() < args.min_samples {
                log::warn!(
                    "{}: {} samples below --min-samples {}; skipped",
                    path.display(),
                    trace.len(),
                    args.min_samples
                );
                return Ok(false);
            }
            let cps = detect(&trace, &preset)
                .with_context(|| format!("detecting on {}", path.display()))?;
            match (&args.output, &args.out_dir) {
                (Some(out), _) => formats::write_labels_file(out, cps.positions())?,
                (None, Some(dir)) => {
                    let stem = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "trace".to_string());
                    let out = dir.join(format!("{stem}.{}.csv", preset.name.name()));
                    formats::write_labels_file(&out, cps.positions())?;
                }
                (None, None) => {
                    let mut buf = Vec::new();
                    formats::write_labels_csv(&mut buf, cps.positions())?;
                    print!("{}", String::from_utf8_lossy(&buf));
                }
            }
            Ok(true)
        })
        .collect();

    let mut processed = 0usize;
    for r in results {
        if r? {
            processed += 1;
        }
    }
    if processed == 0 {
        anyhow::bail!("no input trace passed the --min-samples gate");
    }
    Ok(())
}
