//! One-to-one temporal matching of detected RTT changes with path changes.
//!
//! The matcher is the same minimum-cost maximum-cardinality matching used for
//! detector scoring, run on epochs instead of sample indices. The tolerance
//! window defaults to one traceroute interval (1800 s), within which a causal
//! relationship between the two changes is plausible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::min_cost_max_matching;
use crate::pathscan::{ChangeKind, PathChange};

/// Default tolerance: the RIPE Atlas built-in traceroute interval, seconds.
pub const DEFAULT_WINDOW_SECS: i64 = 1800;

/// A matched (RTT change, path change) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatedPair {
    pub rtt_epoch: i64,
    pub path_epoch: i64,
    pub kind: ChangeKind,
}

/// Per-kind matching counts; `precision` is the fraction of path changes of
/// the kind that found an RTT change, `None` when there were none to match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KindPrecision {
    pub kind: ChangeKind,
    pub n_path_changes: usize,
    pub n_matched: usize,
    pub precision: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub pairs: Vec<CorrelatedPair>,
    pub precision_per_kind: Vec<KindPrecision>,
    pub unmatched_rtt_count: usize,
    pub unmatched_path_count: usize,
    pub window_secs: i64,
}

impl CorrelationReport {
    pub fn precision_for(&self, kind: ChangeKind) -> Option<f64> {
        self.precision_per_kind
            .iter()
            .find(|k| k.kind == kind)
            .and_then(|k| k.precision)
    }
}

fn ensure_sorted(epochs: impl Iterator<Item = i64>, what: &str) -> Result<()> {
    let mut prev: Option<i64> = None;
    for e in epochs {
        if prev.is_some_and(|p| e < p) {
            return Err(Error::invalid_input(format!("{what} must be time-ordered")));
        }
        prev = Some(e);
    }
    Ok(())
}

/// Match RTT change epochs against path changes, one-to-one, pooling all
/// path-change kinds in a single pass.
pub fn correlate(
    rtt_changes: &[i64],
    path_changes: &[PathChange],
    window_secs: i64,
) -> Result<CorrelationReport> {
    if window_secs < 0 {
        return Err(Error::invalid_input("window must be non-negative"));
    }
    ensure_sorted(rtt_changes.iter().copied(), "rtt changes")?;
    ensure_sorted(path_changes.iter().map(|p| p.epoch), "path changes")?;

    let path_epochs: Vec<i64> = path_changes.iter().map(|p| p.epoch).collect();
    let matching = min_cost_max_matching(rtt_changes, &path_epochs, window_secs);

    let pairs: Vec<CorrelatedPair> = matching
        .pairs
        .iter()
        .map(|&(i, j)| CorrelatedPair {
            rtt_epoch: rtt_changes[i],
            path_epoch: path_changes[j].epoch,
            kind: path_changes[j].kind,
        })
        .collect();

    let matched_path: std::collections::HashSet<usize> =
        matching.pairs.iter().map(|&(_, j)| j).collect();
    let precision_per_kind = [ChangeKind::As, ChangeKind::Ixp, ChangeKind::Ifp]
        .into_iter()
        .map(|kind| {
            let total = path_changes.iter().filter(|p| p.kind == kind).count();
            let matched = path_changes
                .iter()
                .enumerate()
                .filter(|(j, p)| p.kind == kind && matched_path.contains(j))
                .count();
            KindPrecision {
                kind,
                n_path_changes: total,
                n_matched: matched,
                precision: (total > 0).then(|| matched as f64 / total as f64),
            }
        })
        .collect();

    Ok(CorrelationReport {
        unmatched_rtt_count: rtt_changes.len() - pairs.len(),
        unmatched_path_count: path_changes.len() - pairs.len(),
        pairs,
        precision_per_kind,
        window_secs,
    })
}
