mod commands;
mod records;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "netchange",
    version,
    about = "Detect significant RTT changes, score detectors against labelled truth, \
             scan Paris-traceroute series for path changes, and correlate the two."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate labelled synthetic RTT traces.
    Generate(commands::generate::Args),
    /// Detect changepoints in RTT traces.
    Detect(commands::detect::Args),
    /// Score detected changepoints against labelled ground truth.
    Score(commands::score::Args),
    /// Detect path changes in a Paris-traceroute series.
    Pathscan(commands::pathscan::Args),
    /// Match RTT changes one-to-one with path changes.
    Correlate(commands::correlate::Args),
    /// Aggregate score and correlation reports across probes.
    Report(commands::report::Args),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(args) => commands::generate::run(args),
        Command::Detect(args) => commands::detect::run(args),
        Command::Score(args) => commands::score::run(args),
        Command::Pathscan(args) => commands::pathscan::run(args),
        Command::Correlate(args) => commands::correlate::run(args),
        Command::Report(args) => commands::report::run(args),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
        std::process::exit(1);
    }
}
