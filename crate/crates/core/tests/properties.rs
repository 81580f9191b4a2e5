//! Property tests for the crate-wide invariants.

use proptest::collection::vec;
use proptest::prelude::*;

use netchange::detect::{baseline_transform, optimal_segmentation, CostFamily, PenaltyCriterion, MIN_SEG_LEN};
use netchange::matching::min_cost_max_matching;
use netchange::model::{segments, ChangepointSet, Rtt, RttSample, RttTrace};
use netchange::pathscan::{
    backward_extension, forward_inclusion, validate_partition, Hop, ParisMeasurement,
    PARIS_ID_COUNT,
};

fn trace_from(values: &[f64]) -> RttTrace {
    RttTrace::from_ms(values.iter().copied()).unwrap()
}

/// Values plus a valid set of changepoint positions for them.
fn trace_and_positions() -> impl Strategy<Value = (Vec<f64>, Vec<usize>)> {
    vec(0.5f64..500.0, 2..120).prop_flat_map(|values| {
        let n = values.len();
        (
            Just(values),
            prop::collection::btree_set(1..n, 0..6)
                .prop_map(|s| s.into_iter().collect::<Vec<_>>()),
        )
    })
}

proptest! {
    #[test]
    fn segment_lengths_partition_the_trace((values, positions) in trace_and_positions()) {
        let n = values.len();
        let trace = trace_from(&values);
        let cps = ChangepointSet::new(positions, n, "prop").unwrap();
        let segs = segments(&trace, &cps).unwrap();
        prop_assert_eq!(segs.iter().map(|s| s.len).sum::<usize>(), n);
        prop_assert!(segs.iter().all(|s| s.len >= 1 && s.std >= 0.0));
    }

    #[test]
    fn baseline_transform_is_idempotent_with_zero_minimum(
        values in vec(0.5f64..1500.0, 1..200),
        timeout_mask in vec(any::<bool>(), 1..200),
    ) {
        let samples: Vec<RttSample> = values
            .iter()
            .zip(timeout_mask.iter().chain(std::iter::repeat(&false)))
            .enumerate()
            .map(|(i, (&v, &t))| RttSample {
                epoch: i as i64 * 240,
                rtt: if t { Rtt::Timeout } else { Rtt::Ms(v) },
            })
            .collect();
        let trace = RttTrace::new(samples).unwrap();
        let once = baseline_transform(&trace).unwrap();
        let min = once
            .detection_values()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(min, 0.0);
        let twice = baseline_transform(&once).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn segmentation_respects_structure(values in vec(1.0f64..300.0, 4..80)) {
        let n = values.len();
        let cps = optimal_segmentation(&values, &CostFamily::Normal, PenaltyCriterion::Mbic)
            .unwrap();
        let mut bounds = vec![0usize];
        bounds.extend_from_slice(cps.positions());
        bounds.push(n);
        for w in bounds.windows(2) {
            prop_assert!(w[1] > w[0], "bounds not increasing: {:?}", bounds);
            prop_assert!(w[1] - w[0] >= MIN_SEG_LEN);
        }
    }

    #[test]
    fn matching_is_one_to_one_within_window_and_monotone(
        left in vec(0i64..500, 0..12),
        right in vec(0i64..500, 0..12),
        window in 0i64..40,
    ) {
        let m = min_cost_max_matching(&left, &right, window);
        let mut seen_l = std::collections::HashSet::new();
        let mut seen_r = std::collections::HashSet::new();
        let mut shift = 0;
        for &(i, j) in &m.pairs {
            prop_assert!(seen_l.insert(i));
            prop_assert!(seen_r.insert(j));
            prop_assert!((left[i] - right[j]).abs() <= window);
            shift += (left[i] - right[j]).abs();
        }
        prop_assert_eq!(shift, m.total_shift);
        let wider = min_cost_max_matching(&left, &right, window + 25);
        prop_assert!(wider.cardinality() >= m.cardinality());
    }

    #[test]
    fn ifp_partitions_stay_valid(
        ids in vec(0u8..(PARIS_ID_COUNT as u8), 1..150),
        paths in vec(0u8..3, 1..150),
    ) {
        let measurements: Vec<ParisMeasurement> = ids
            .iter()
            .zip(paths.iter().chain(std::iter::repeat(&0)))
            .enumerate()
            .map(|(i, (&id, &p))| {
                ParisMeasurement::new(
                    i as i64 * 1800,
                    id,
                    vec![Hop::Addr(format!("path-{p}"))],
                )
                .unwrap()
            })
            .collect();
        let forward = forward_inclusion(&measurements);
        prop_assert!(validate_partition(&forward, &measurements).is_ok());
        let backward = backward_extension(&forward, &measurements);
        prop_assert!(validate_partition(&backward, &measurements).is_ok());
        prop_assert!(backward.len() <= forward.len());
    }
}
