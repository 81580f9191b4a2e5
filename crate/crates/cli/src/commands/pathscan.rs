use std::path::PathBuf;

use anyhow::Context;

use netchange::formats;
use netchange::pathscan::{detect_path_changes, IfpMode};

pub const PREFIX_TABLE_ENV: &str = "NETCHANGE_PREFIX_TABLE";
pub const IXP_TABLE_ENV: &str = "NETCHANGE_IXP_TABLE";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Traceroute JSON-lines file.
    #[arg(long)]
    pub input: PathBuf,
    /// IFP boundary placement: forward inclusion or backward extension.
    #[arg(long, default_value = "backward", value_parser = parse_mode)]
    pub ifp_mode: IfpMode,
    /// Prefix-to-ASN table (`prefix/len<TAB>ASN`); also read from
    /// NETCHANGE_PREFIX_TABLE. AS/IXP changes need both tables.
    #[arg(long)]
    pub prefix_table: Option<PathBuf>,
    /// IXP prefix table (`prefix/len<TAB>name`); also read from
    /// NETCHANGE_IXP_TABLE.
    #[arg(long)]
    pub ixp_table: Option<PathBuf>,
    /// Output path-change CSV (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<IfpMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn table_path(flag: Option<PathBuf>, env: &str) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(env).map(PathBuf::from))
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let (measurements, stats) = formats::read_traceroute_file(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    if stats.skipped_lines > 0 {
        log::warn!(
            "{}: skipped {} malformed lines",
            args.input.display(),
            stats.skipped_lines
        );
    }

    let prefix_path = table_path(args.prefix_table, PREFIX_TABLE_ENV);
    let ixp_path = table_path(args.ixp_table, IXP_TABLE_ENV);
    let tables = match (prefix_path, ixp_path) {
        (Some(p), Some(x)) => Some((
            formats::read_asn_table_file(&p)
                .with_context(|| format!("reading {}", p.display()))?,
            formats::read_ixp_table_file(&x)
                .with_context(|| format!("reading {}", x.display()))?,
        )),
        (None, None) => None,
        _ => anyhow::bail!("AS/IXP detection needs both --prefix-table and --ixp-table"),
    };

    let changes = detect_path_changes(
        &measurements,
        tables.as_ref().map(|(a, i)| (a, i)),
        args.ifp_mode,
    );

    match &args.output {
        Some(path) => formats::write_path_changes_file(path, &changes)?,
        None => {
            let mut buf = Vec::new();
            formats::write_path_changes_csv(&mut buf, &changes)?;
            print!("{}", String::from_utf8_lossy(&buf));
        }
    }
    Ok(())
}
