//! Changepoint detection on RTT traces: cost families, penalty criteria, the
//! baseline-removal transform and the exact segmentation search.

mod cost;
mod pelt;
mod penalty;

pub use cost::{
    segment_cost, CostEvaluator, CostFamily, DEFAULT_QUANTILE_COUNT, EXPONENTIAL_FLOOR,
    VARIANCE_FLOOR,
};
pub use pelt::{optimal_segmentation, MIN_SEG_LEN};
pub use penalty::{penalty_value, PenaltyCriterion};

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChangepointSet, Rtt, RttSample, RttTrace};

/// The candidate detector configurations evaluated in this project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    CptNormal,
    CptPoisson,
    CptPoissonNaive,
    CptExp,
    CptNp,
}

impl PresetName {
    pub const ALL: [PresetName; 5] = [
        PresetName::CptNormal,
        PresetName::CptPoisson,
        PresetName::CptPoissonNaive,
        PresetName::CptExp,
        PresetName::CptNp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetName::CptNormal => "cpt_normal",
            PresetName::CptPoisson => "cpt_poisson",
            PresetName::CptPoissonNaive => "cpt_poisson_naive",
            PresetName::CptExp => "cpt_exp",
            PresetName::CptNp => "cpt_np",
        }
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cpt_normal" => Ok(PresetName::CptNormal),
            "cpt_poisson" => Ok(PresetName::CptPoisson),
            "cpt_poisson_naive" => Ok(PresetName::CptPoissonNaive),
            "cpt_exp" => Ok(PresetName::CptExp),
            "cpt_np" => Ok(PresetName::CptNp),
            other => Err(Error::parse(format!("unknown detector preset: {other}"))),
        }
    }
}

/// A named detector configuration: cost family, whether the baseline-removal
/// transform is applied first, and the penalty criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorPreset {
    pub name: PresetName,
    pub family: CostFamily,
    pub baseline_removed: bool,
    pub penalty: PenaltyCriterion,
}

impl DetectorPreset {
    /// The canonical preset for a name. The rate-coupled families get the
    /// baseline transform (`cpt_poisson`, `cpt_exp`); `cpt_poisson_naive`,
    /// `cpt_normal` and `cpt_np` run on the initial measurements.
    pub fn new(name: PresetName, penalty: PenaltyCriterion) -> Self {
        let (family, baseline_removed) = match name {
            PresetName::CptNormal => (CostFamily::Normal, false),
            PresetName::CptPoisson => (CostFamily::Poisson, true),
            PresetName::CptPoissonNaive => (CostFamily::Poisson, false),
            PresetName::CptExp => (CostFamily::Exponential, true),
            PresetName::CptNp => (CostFamily::empirical_default(), false),
        };
        DetectorPreset {
            name,
            family,
            baseline_removed,
            penalty,
        }
    }

    pub fn theta_dim(&self) -> usize {
        self.family.theta_dim()
    }
}

/// Subtract the trace's minimum value so its level no longer dominates the
/// rate-coupled distributions.
///
/// Timeouts are mapped to 1000 ms first, then the minimum of the mapped
/// values is subtracted from every value; the output minimum is exactly 0.
/// An all-timeout trace maps to all zeros (minimum 1000), which is flagged
/// with a warning.
pub fn baseline_transform(trace: &RttTrace) -> Result<RttTrace> {
    if trace.is_empty() {
        return Err(Error::invalid_trace("cannot baseline-transform an empty trace"));
    }
    if trace.timeout_count() == trace.len() {
        log::warn!("baseline transform of an all-timeout trace yields an all-zero trace");
    }
    let values = trace.detection_values();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let samples: Vec<RttSample> = trace
        .samples()
        .iter()
        .zip(&values)
        .map(|(s, &v)| RttSample {
            epoch: s.epoch,
            rtt: Rtt::Ms(v - min),
        })
        .collect();
    Ok(RttTrace::from_raw(samples, trace.interval_hint()))
}

fn baseline_removed(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values.iter().map(|v| v - min).collect()
}

/// Round each value half-up to the nearest non-negative integer, as the
/// Poisson cost requires.
pub fn quantize_for_poisson(values: &[f64]) -> Result<Vec<i64>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if !(v.is_finite() && v >= 0.0) {
                Err(Error::invalid_input(format!(
                    "poisson quantization requires non-negative values; sample {i} is {v}"
                )))
            } else {
                Ok(v.round() as i64)
            }
        })
        .collect()
}

/// Run a detector preset on a trace.
///
/// Applies the timeout mapping, the baseline transform iff the preset calls
/// for it, Poisson quantization iff the family is Poisson, then the exact
/// segmentation search. The result is tagged with the preset name.
pub fn detect(trace: &RttTrace, preset: &DetectorPreset) -> Result<ChangepointSet> {
    if trace.is_empty() {
        return Err(Error::invalid_trace("cannot detect changes on an empty trace"));
    }
    let mut values = trace.detection_values();
    if preset.baseline_removed {
        values = baseline_removed(&values);
    }
    match preset.family {
        CostFamily::Poisson => {
            values = quantize_for_poisson(&values)?
                .into_iter()
                .map(|v| v as f64)
                .collect();
        }
        CostFamily::Exponential => {
            for v in &mut values {
                if *v < EXPONENTIAL_FLOOR {
                    *v = EXPONENTIAL_FLOOR;
                }
            }
        }
        CostFamily::Normal | CostFamily::Empirical { .. } => {}
    }
    let cps = optimal_segmentation(&values, &preset.family, preset.penalty)?;
    ChangepointSet::new(cps.positions().to_vec(), trace.len(), preset.name.name())
}
