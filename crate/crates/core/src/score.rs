//! Evaluation of detected changepoints against labelled ground truth:
//! optimal truth/detection matching with shift tolerance, importance weights
//! and the Precision / Recall / Recall_W / F2 score suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::min_cost_max_matching;
use crate::model::{self, ChangepointSet, GroundTruth, RttTrace};

/// Matching tolerances, in samples. The defaults correspond to 8 minutes at
/// the 4-minute ping cadence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Shift tolerance window `w`.
    pub window: usize,
    /// Minimum following-segment length `ρ`; truths leading into a shorter
    /// segment are ignored by the recall metrics.
    pub rho: usize,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig { window: 2, rho: 2 }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rho < 1 {
            return Err(Error::invalid_input("rho must be >= 1"));
        }
        Ok(())
    }

    /// Convert a tolerance expressed in seconds to samples using the trace's
    /// nominal sampling period.
    pub fn samples_from_seconds(seconds: f64, interval_hint: f64) -> usize {
        (seconds / interval_hint).round().max(0.0) as usize
    }
}

/// An optimal one-to-one matching between truth and detection positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSet {
    /// `(truth_position, detection_position)` pairs.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_truth: Vec<usize>,
    pub unmatched_detections: Vec<usize>,
    pub total_shift: i64,
}

impl MatchSet {
    pub fn cardinality(&self) -> usize {
        self.pairs.len()
    }
}

/// Maximum-cardinality, minimum-total-shift matching of truth positions to
/// detected positions under `|T - τ| <= window`.
pub fn optimal_match(
    truth: &GroundTruth,
    detections: &ChangepointSet,
    cfg: &MatchConfig,
) -> MatchSet {
    let t: Vec<i64> = truth.positions().iter().map(|&p| p as i64).collect();
    let d: Vec<i64> = detections.positions().iter().map(|&p| p as i64).collect();
    let matching = min_cost_max_matching(&t, &d, cfg.window as i64);

    let matched_t: std::collections::HashSet<usize> =
        matching.pairs.iter().map(|&(i, _)| i).collect();
    let matched_d: std::collections::HashSet<usize> =
        matching.pairs.iter().map(|&(_, j)| j).collect();
    MatchSet {
        pairs: matching
            .pairs
            .iter()
            .map(|&(i, j)| (truth.positions()[i], detections.positions()[j]))
            .collect(),
        unmatched_truth: truth
            .positions()
            .iter()
            .enumerate()
            .filter(|(i, _)| !matched_t.contains(i))
            .map(|(_, &p)| p)
            .collect(),
        unmatched_detections: detections
            .positions()
            .iter()
            .enumerate()
            .filter(|(j, _)| !matched_d.contains(j))
            .map(|(_, &p)| p)
            .collect(),
        total_shift: matching.total_shift,
    }
}

/// Truths whose following segment is shorter than `ρ`, per truth index.
pub fn ignored_mask(truth: &GroundTruth, n: usize, rho: usize) -> Vec<bool> {
    let b = model::boundaries(truth.positions(), n);
    (1..=truth.len()).map(|i| b[i + 1] - b[i] < rho).collect()
}

/// Importance weight of each truth position:
/// `Ω_i = max(log2((T_{i+1} - T_i) / ρ), 0) × (M_i + Δ_i)`.
///
/// Truths leading into a segment shorter than `ρ` receive weight 0 (and are
/// ignored by the recall denominators).
pub fn omega_weights(
    trace: &RttTrace,
    truth: &GroundTruth,
    cfg: &MatchConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = trace.len();
    let b = model::boundaries(truth.positions(), n);
    let mut weights = Vec::with_capacity(truth.len());
    for i in 1..=truth.len() {
        let following = (b[i + 1] - b[i]) as f64;
        let length_factor = (following / cfg.rho as f64).log2().max(0.0);
        let (m, delta) = model::level_and_volatility_diff(trace, truth, i)?;
        weights.push(length_factor * (m + delta));
    }
    Ok(weights)
}

/// Detection quality report.
///
/// `tp` counts matched detections; a detection matched to an ignored truth is
/// still not a false positive. The recall metrics run over non-ignored truths
/// only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub recall_w: f64,
    pub f2: f64,
    pub f2_w: f64,
    /// Per-truth importance weights, in truth order.
    pub omega: Vec<f64>,
    pub n_truths: usize,
    pub n_detections: usize,
    pub n_ignored_truths: usize,
}

fn f_beta2(precision: f64, recall: f64) -> f64 {
    if precision == 0.0 && recall == 0.0 {
        return 0.0;
    }
    5.0 * precision * recall / (4.0 * precision + recall)
}

/// Score a detection against ground truth on a common trace.
pub fn score(
    truth: &GroundTruth,
    detections: &ChangepointSet,
    trace: &RttTrace,
    cfg: &MatchConfig,
) -> Result<ScoreReport> {
    cfg.validate()?;
    let n = trace.len();
    if truth.positions().last().is_some_and(|&p| p >= n)
        || detections.positions().last().is_some_and(|&p| p >= n)
    {
        return Err(Error::invalid_input(
            "truth and detections must index into the trace",
        ));
    }

    let matches = optimal_match(truth, detections, cfg);
    let omega = omega_weights(trace, truth, cfg)?;
    let ignored = ignored_mask(truth, n, cfg.rho);

    let matched_truth: std::collections::HashSet<usize> =
        matches.pairs.iter().map(|&(t, _)| t).collect();
    let considered = truth.len() - ignored.iter().filter(|&&b| b).count();
    let matched_considered = truth
        .positions()
        .iter()
        .zip(&ignored)
        .filter(|(p, &ign)| !ign && matched_truth.contains(p))
        .count();

    let tp = matches.cardinality();
    let fp = detections.len() - tp;
    let fn_ = considered - matched_considered;

    let precision = if detections.is_empty() {
        1.0
    } else {
        tp as f64 / detections.len() as f64
    };
    let recall = if considered == 0 {
        1.0
    } else {
        matched_considered as f64 / considered as f64
    };
    let omega_total: f64 = omega.iter().sum();
    let recall_w = if omega_total == 0.0 {
        // No operationally important weight to recover.
        1.0
    } else {
        let matched_weight: f64 = truth
            .positions()
            .iter()
            .zip(&omega)
            .filter(|(p, _)| matched_truth.contains(p))
            .map(|(_, &w)| w)
            .sum();
        matched_weight / omega_total
    };

    Ok(ScoreReport {
        tp,
        fp,
        fn_,
        precision,
        recall,
        recall_w,
        f2: f_beta2(precision, recall),
        f2_w: f_beta2(precision, recall_w),
        omega,
        n_truths: truth.len(),
        n_detections: detections.len(),
        n_ignored_truths: ignored.iter().filter(|&&b| b).count(),
    })
}
