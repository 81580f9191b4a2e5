//! Penalty criteria for penalized-cost segmentation.
//!
//! AIC, BIC and Hannan-Quinn all share the linear parameter count
//! `f(m) = m + (m + 1) * theta_dim` and differ only in the multiplier `β`.
//! MBIC charges `((d + 2) / 2) m ln n` plus a segment-proportion term
//! `(1/2) Σ ln(l_i / n)`, which the segmentation search folds into the
//! per-segment cost so its dynamic program stays exact. At `d = 1` the
//! leading term is the classic `(3/2) m ln n`; `d` is the family's
//! MBIC-effective dimension, not necessarily its nominal `theta_dim`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PenaltyCriterion {
    Aic,
    Bic,
    HannanQuinn,
    Mbic,
}

impl PenaltyCriterion {
    pub const ALL: [PenaltyCriterion; 4] = [
        PenaltyCriterion::Aic,
        PenaltyCriterion::Bic,
        PenaltyCriterion::HannanQuinn,
        PenaltyCriterion::Mbic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PenaltyCriterion::Aic => "AIC",
            PenaltyCriterion::Bic => "BIC",
            PenaltyCriterion::HannanQuinn => "HQ",
            PenaltyCriterion::Mbic => "MBIC",
        }
    }

    /// The multiplier β for the `β·f(m)` criteria. `None` for MBIC, whose
    /// penalty is not of that form.
    pub(crate) fn beta(self, n: usize) -> Result<Option<f64>> {
        match self {
            PenaltyCriterion::Aic => Ok(Some(2.0)),
            PenaltyCriterion::Bic => Ok(Some((n as f64).ln())),
            PenaltyCriterion::HannanQuinn => {
                if n < 3 {
                    return Err(Error::invalid_input(format!(
                        "Hannan-Quinn requires n >= 3 (log log n); got n = {n}"
                    )));
                }
                Ok(Some(2.0 * (n as f64).ln().ln()))
            }
            PenaltyCriterion::Mbic => Ok(None),
        }
    }
}

impl FromStr for PenaltyCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AIC" => Ok(PenaltyCriterion::Aic),
            "BIC" | "SIC" => Ok(PenaltyCriterion::Bic),
            "HQ" | "HANNANQUINN" | "HANNAN-QUINN" => Ok(PenaltyCriterion::HannanQuinn),
            "MBIC" => Ok(PenaltyCriterion::Mbic),
            other => Err(Error::parse(format!("unknown penalty criterion: {other}"))),
        }
    }
}

/// Total penalty charged for a segmentation with the given segment lengths.
///
/// `segment_lengths` has `m + 1` entries for `m` changepoints. AIC, BIC and
/// Hannan-Quinn only use its length; MBIC also uses the lengths themselves
/// and requires them to sum to `n`.
pub fn penalty_value(
    criterion: PenaltyCriterion,
    n: usize,
    theta_dim: usize,
    segment_lengths: &[usize],
) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid_input(format!(
            "penalty requires n >= 2; got {n}"
        )));
    }
    if theta_dim == 0 {
        return Err(Error::invalid_input("theta_dim must be >= 1"));
    }
    if segment_lengths.is_empty() {
        return Err(Error::invalid_input(
            "segment_lengths must have at least one entry",
        ));
    }
    let m = segment_lengths.len() - 1;
    match criterion.beta(n)? {
        Some(beta) => {
            let f_m = (m + (m + 1) * theta_dim) as f64;
            Ok(beta * f_m)
        }
        None => {
            let total: usize = segment_lengths.iter().sum();
            if total != n {
                return Err(Error::invalid_input(format!(
                    "MBIC segment lengths must sum to n = {n}; got {total}"
                )));
            }
            if segment_lengths.contains(&0) {
                return Err(Error::invalid_input("MBIC segment lengths must be >= 1"));
            }
            let n_f = n as f64;
            let proportions: f64 = segment_lengths
                .iter()
                .map(|&l| (l as f64 / n_f).ln())
                .sum();
            Ok((theta_dim as f64 + 2.0) / 2.0 * m as f64 * n_f.ln() + 0.5 * proportions)
        }
    }
}
