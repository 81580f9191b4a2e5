pub mod correlate;
pub mod detect;
pub mod generate;
pub mod pathscan;
pub mod report;
pub mod score;

use std::io::Write;
use std::path::Path;

/// Write either to a file or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, contents)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            if !contents.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
