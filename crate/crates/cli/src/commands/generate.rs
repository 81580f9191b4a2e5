use std::path::PathBuf;

use anyhow::Context;

use netchange::formats;
use netchange::synth::{generate, SynthConfig};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory receiving trace_<seed>.csv and labels_<seed>.csv files.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Number of traces to generate; seeds run from --seed upward.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per trace.
    #[arg(long, default_value_t = 6480)]
    pub n_samples: usize,
    /// Per-sample probability of entering a congestion phase.
    #[arg(long, default_value_t = 0.002)]
    pub congestion_enter_prob: f64,
    /// Per-sample probability of leaving a congestion phase.
    #[arg(long, default_value_t = 0.05)]
    pub congestion_exit_prob: f64,
    /// Per-sample timeout probability.
    #[arg(long, default_value_t = 0.0005)]
    pub timeout_prob: f64,
    /// Seconds between consecutive samples.
    #[arg(long, default_value_t = 240.0)]
    pub interval_secs: f64,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let base = SynthConfig {
        n_samples: args.n_samples,
        congestion_enter_prob: args.congestion_enter_prob,
        congestion_exit_prob: args.congestion_exit_prob,
        timeout_prob: args.timeout_prob,
        interval_secs: args.interval_secs,
        ..SynthConfig::default()
    };
    let mut manifest = Vec::new();
    for seed in args.seed..args.seed + args.count {
        let cfg = SynthConfig { seed, ..base.clone() };
        let labelled = generate(&cfg)?;
        let trace_path = args.out_dir.join(format!("trace_{seed:04}.csv"));
        let labels_path = args.out_dir.join(format!("labels_{seed:04}.csv"));
        formats::write_trace_file(&trace_path, &labelled.trace)?;
        formats::write_labels_file(&labels_path, labelled.truth.positions())?;
        manifest.push(serde_json::json!({
            "seed": seed,
            "trace": trace_path.file_name().unwrap().to_string_lossy(),
            "labels": labels_path.file_name().unwrap().to_string_lossy(),
            "n_samples": labelled.trace.len(),
            "n_changes": labelled.truth.len(),
            "provenance": labelled.provenance,
        }));
    }
    let manifest_path = args.out_dir.join("manifest.json");
    std::fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    log::info!("wrote {} traces to {}", args.count, args.out_dir.display());
    Ok(())
}
