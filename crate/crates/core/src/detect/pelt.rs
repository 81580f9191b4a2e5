//! Exact penalized segmentation search (PELT).
//!
//! The dynamic program minimizes `sum of segment costs + penalty` over all
//! segmentations respecting [`MIN_SEG_LEN`]. Pruning drops a candidate split
//! only when it is strictly dominated, which cannot change the optimum
//! because every cost family here is superadditive under splitting. For MBIC
//! the segment-length term is folded into the per-segment cost so the search
//! stays exact.
//!
//! Ties are broken toward fewer changepoints, then toward the smaller
//! predecessor at each step.

use crate::detect::cost::{CostEvaluator, CostFamily};
use crate::detect::penalty::PenaltyCriterion;
use crate::error::Result;
use crate::model::ChangepointSet;

/// Minimum segment length, applied uniformly across families (the Normal
/// cost needs at least two samples for a variance).
pub const MIN_SEG_LEN: usize = 2;

/// Exact minimizer of total segment cost plus penalty.
///
/// Series shorter than `2 * MIN_SEG_LEN` admit no changepoint at all; they
/// yield an empty set with a logged warning rather than an error.
pub fn optimal_segmentation(
    values: &[f64],
    family: &CostFamily,
    criterion: PenaltyCriterion,
) -> Result<ChangepointSet> {
    let tag = format!("{}+{}", family.name(), criterion.name());
    let n = values.len();
    if n < 2 * MIN_SEG_LEN {
        log::warn!("series of length {n} is too short to segment; returning no changepoints");
        return Ok(ChangepointSet::empty(tag));
    }
    let eval = CostEvaluator::new(values, family)?;
    let positions = pelt(&eval, family, criterion)?;
    ChangepointSet::new(positions, n, tag)
}

/// Per-changepoint penalty increment and per-segment additive term for the
/// dynamic program.
///
/// The `β·f(m)` criteria grow by `β·(1 + d)` per changepoint since
/// `f(m) = m + (m+1)·d` (the constant `β·d` offset affects neither the
/// argmin nor the comparisons). MBIC charges `((d_mbic + 2) / 2)·ln n` per
/// changepoint plus `0.5·ln(len/n)` per segment.
fn dp_penalty(
    criterion: PenaltyCriterion,
    n: usize,
    family: &CostFamily,
) -> Result<(f64, Option<f64>)> {
    match criterion.beta(n)? {
        Some(beta) => Ok((beta * (1.0 + family.theta_dim() as f64), None)),
        None => Ok((
            (family.mbic_theta_dim() as f64 + 2.0) / 2.0 * (n as f64).ln(),
            Some(n as f64),
        )),
    }
}

fn pelt(
    eval: &CostEvaluator,
    family: &CostFamily,
    criterion: PenaltyCriterion,
) -> Result<Vec<usize>> {
    let n = eval.n();
    let (beta, mbic_n) = dp_penalty(criterion, n, family)?;
    let seg_cost = |s: usize, t: usize| -> f64 {
        let c = eval.segment_cost(s, t);
        match mbic_n {
            Some(n_f) => c + 0.5 * ((t - s) as f64 / n_f).ln(),
            None => c,
        }
    };

    let mut best = vec![f64::INFINITY; n + 1];
    let mut count = vec![usize::MAX; n + 1];
    let mut prev = vec![usize::MAX; n + 1];
    best[0] = -beta;
    count[0] = 0;

    // Candidate split points paired with the step at which they leave the
    // set. A candidate failing the pruning test at step t is only provably
    // dominated once the dominating predecessor t itself becomes usable, so
    // removal takes effect at t + MIN_SEG_LEN, not immediately.
    let mut candidates: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let last_cut = n - MIN_SEG_LEN;
    // Endpoints worth evaluating: feasible cut positions plus n itself.
    let endpoints = (MIN_SEG_LEN..=last_cut).chain(std::iter::once(n));

    for t in endpoints {
        candidates.retain(|&(_, remove_at)| remove_at > t);
        let mut best_cost = f64::INFINITY;
        let mut best_count = usize::MAX;
        let mut best_prev = usize::MAX;
        let mut scores: Vec<Option<f64>> = Vec::with_capacity(candidates.len());
        for &(tau, _) in &candidates {
            if t < tau + MIN_SEG_LEN {
                // Not yet evaluable; must survive pruning untouched.
                scores.push(None);
                continue;
            }
            let unpenalized = best[tau] + seg_cost(tau, t);
            scores.push(Some(unpenalized));
            let cand = unpenalized + beta;
            let cand_count = count[tau] + 1;
            if cand < best_cost || (cand == best_cost && cand_count < best_count) {
                best_cost = cand;
                best_count = cand_count;
                best_prev = tau;
            }
        }
        best[t] = best_cost;
        count[t] = best_count;
        prev[t] = best_prev;

        if t < n {
            // Mark strictly dominated candidates for delayed removal; ties
            // survive so the tie-breaking rule sees the same candidate set
            // as an unpruned search.
            for ((_, remove_at), score) in candidates.iter_mut().zip(&scores) {
                if *remove_at == usize::MAX && score.is_some_and(|s| s > best_cost) {
                    *remove_at = t + MIN_SEG_LEN;
                }
            }
            candidates.push((t, usize::MAX));
        }
    }

    let mut positions = Vec::new();
    let mut t = n;
    while prev[t] != 0 {
        t = prev[t];
        positions.push(t);
    }
    positions.reverse();
    Ok(positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(values: &[f64], family: CostFamily, criterion: PenaltyCriterion) -> Vec<usize> {
        optimal_segmentation(values, &family, criterion)
            .unwrap()
            .positions()
            .to_vec()
    }

    #[test]
    fn constant_series_has_no_changepoints() {
        let values = vec![42.0; 60];
        for family in [
            CostFamily::Normal,
            CostFamily::Poisson,
            CostFamily::Exponential,
            CostFamily::empirical_default(),
        ] {
            for criterion in PenaltyCriterion::ALL {
                assert!(
                    segment(&values, family, criterion).is_empty(),
                    "{} + {} split a constant series",
                    family.name(),
                    criterion.name()
                );
            }
        }
    }

    #[test]
    fn clean_step_is_found_exactly() {
        let mut values = vec![10.0; 50];
        values.extend(vec![110.0; 50]);
        let cps = segment(&values, CostFamily::Normal, PenaltyCriterion::Bic);
        assert_eq!(cps, vec![50]);
    }

    #[test]
    fn short_series_yields_empty_set() {
        let cps = optimal_segmentation(
            &[1.0, 2.0, 3.0],
            &CostFamily::Normal,
            PenaltyCriterion::Bic,
        )
        .unwrap();
        assert!(cps.is_empty());
    }

    #[test]
    fn shift_invariance_of_normal_detection() {
        let mut values: Vec<f64> = Vec::new();
        for i in 0..40 {
            values.push(20.0 + (i % 3) as f64);
        }
        for i in 0..40 {
            values.push(60.0 + (i % 5) as f64);
        }
        let base = segment(&values, CostFamily::Normal, PenaltyCriterion::Mbic);
        let shifted: Vec<f64> = values.iter().map(|v| v + 123.25).collect();
        let moved = segment(&shifted, CostFamily::Normal, PenaltyCriterion::Mbic);
        assert_eq!(base, moved);
    }

    #[test]
    fn min_segment_length_respected() {
        let mut values = vec![5.0; 30];
        values.extend(vec![50.0; 30]);
        for family in [CostFamily::Normal, CostFamily::empirical_default()] {
            for criterion in PenaltyCriterion::ALL {
                let cps = segment(&values, family, criterion);
                let mut bounds = vec![0];
                bounds.extend(&cps);
                bounds.push(values.len());
                for w in bounds.windows(2) {
                    assert!(w[1] - w[0] >= MIN_SEG_LEN);
                }
            }
        }
    }

    #[test]
    fn two_steps_found() {
        let mut values = vec![10.0; 30];
        values.extend(vec![200.0; 30]);
        values.extend(vec![10.0; 30]);
        let cps = segment(&values, CostFamily::Normal, PenaltyCriterion::Mbic);
        assert_eq!(cps, vec![30, 60]);
    }
}
