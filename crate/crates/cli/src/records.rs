//! On-disk JSON wrappers tying reports to probe/method identifiers so that
//! `report` can aggregate across runs.

use serde::{Deserialize, Serialize};

use netchange::correlate::CorrelationReport;
use netchange::score::ScoreReport;

#[derive(Debug, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub trace_id: String,
    pub method: String,
    pub report: ScoreReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub probe: String,
    pub report: CorrelationReport,
}

/// Derive an identifier from a file path: the stem, minus a trailing
/// `.<something>` tag if present.
pub fn id_from_path(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unknown".to_string())
}
