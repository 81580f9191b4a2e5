//! Core data types and segment-statistics primitives.
//!
//! Index convention used everywhere: a changepoint position `p` is the number
//! of samples to the left of the boundary, i.e. the new segment starts at
//! 0-based sample index `p`. Valid positions lie in `1..=n-1`; together with
//! the sentinels `0` and `n` they induce `m + 1` non-empty segments
//! `trace[p_i..p_{i+1}]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value substituted for timeout samples before any statistic is computed.
pub const TIMEOUT_MS: f64 = 1000.0;

/// A single RTT observation: either a finite value in milliseconds or a
/// timeout marker. The marker is preserved in storage so reports can count
/// timeouts separately; all numeric processing maps it to [`TIMEOUT_MS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rtt {
    Ms(f64),
    Timeout,
}

impl Rtt {
    /// The value used for detection and statistics (timeouts become 1000 ms).
    pub fn detection_ms(self) -> f64 {
        match self {
            Rtt::Ms(v) => v,
            Rtt::Timeout => TIMEOUT_MS,
        }
    }

    pub fn is_timeout(self) -> bool {
        matches!(self, Rtt::Timeout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RttSample {
    /// Measurement time, epoch seconds.
    pub epoch: i64,
    pub rtt: Rtt,
}

/// A timestamped RTT sample sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RttTrace {
    samples: Vec<RttSample>,
    interval_hint: f64,
}

impl RttTrace {
    /// Nominal sampling period of RIPE Atlas built-in pings, seconds.
    pub const DEFAULT_INTERVAL: f64 = 240.0;

    pub fn new(samples: Vec<RttSample>) -> Result<Self> {
        Self::with_interval(samples, Self::DEFAULT_INTERVAL)
    }

    pub fn with_interval(samples: Vec<RttSample>, interval_hint: f64) -> Result<Self> {
        if !(interval_hint.is_finite() && interval_hint > 0.0) {
            return Err(Error::invalid_trace(format!(
                "interval hint must be finite and positive; got {interval_hint}"
            )));
        }
        for pair in samples.windows(2) {
            if pair[1].epoch <= pair[0].epoch {
                return Err(Error::invalid_trace(format!(
                    "epochs must be strictly increasing; got {} then {}",
                    pair[0].epoch, pair[1].epoch
                )));
            }
        }
        for (i, s) in samples.iter().enumerate() {
            if let Rtt::Ms(v) = s.rtt {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::invalid_trace(format!(
                        "sample {i}: rtt must be finite and > 0 or a timeout; got {v}"
                    )));
                }
            }
        }
        Ok(RttTrace {
            samples,
            interval_hint,
        })
    }

    /// Construct a trace from plain millisecond values with synthetic epochs
    /// spaced at the default interval. Convenient for tests and generators.
    pub fn from_ms<I: IntoIterator<Item = f64>>(values: I) -> Result<Self> {
        let samples = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| RttSample {
                epoch: i as i64 * Self::DEFAULT_INTERVAL as i64,
                rtt: Rtt::Ms(v),
            })
            .collect();
        Self::new(samples)
    }

    /// Internal constructor for derived traces (e.g. baseline-removed values,
    /// whose minimum is exactly 0 and thus would fail the `> 0` check).
    pub(crate) fn from_raw(samples: Vec<RttSample>, interval_hint: f64) -> Self {
        RttTrace {
            samples,
            interval_hint,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[RttSample] {
        &self.samples
    }

    pub fn interval_hint(&self) -> f64 {
        self.interval_hint
    }

    /// RTT values with timeouts mapped to [`TIMEOUT_MS`].
    pub fn detection_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rtt.detection_ms()).collect()
    }

    pub fn timeout_count(&self) -> usize {
        self.samples.iter().filter(|s| s.rtt.is_timeout()).count()
    }

    /// Epoch of the first sample of the segment starting at `position`.
    pub fn epoch_at(&self, position: usize) -> Option<i64> {
        self.samples.get(position).map(|s| s.epoch)
    }
}

fn validate_positions(positions: &[usize], n: usize, what: &str) -> Result<()> {
    for pair in positions.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid_changepoints(format!(
                "{what} positions must be strictly increasing; got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if let (Some(&first), Some(&last)) = (positions.first(), positions.last()) {
        if first < 1 || last > n.saturating_sub(1) {
            return Err(Error::invalid_changepoints(format!(
                "{what} positions must lie in 1..={}; got range {first}..={last}",
                n.saturating_sub(1)
            )));
        }
    }
    Ok(())
}

/// Ordered changepoint positions produced by a detector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangepointSet {
    positions: Vec<usize>,
    method_tag: String,
}

impl ChangepointSet {
    pub fn new(positions: Vec<usize>, n: usize, method_tag: impl Into<String>) -> Result<Self> {
        validate_positions(&positions, n, "changepoint")?;
        Ok(ChangepointSet {
            positions,
            method_tag: method_tag.into(),
        })
    }

    pub fn empty(method_tag: impl Into<String>) -> Self {
        ChangepointSet {
            positions: Vec::new(),
            method_tag: method_tag.into(),
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn method_tag(&self) -> &str {
        &self.method_tag
    }
}

/// Where a set of labelled change positions came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthSource {
    Human,
    Synthetic,
}

/// Labelled ground-truth change positions, same index convention as
/// [`ChangepointSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    positions: Vec<usize>,
    source: TruthSource,
}

impl GroundTruth {
    pub fn new(positions: Vec<usize>, n: usize, source: TruthSource) -> Result<Self> {
        validate_positions(&positions, n, "ground-truth")?;
        Ok(GroundTruth { positions, source })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn source(&self) -> TruthSource {
        self.source
    }
}

/// Summary statistics of one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentStats {
    pub median: f64,
    /// Population standard deviation (one-sample segments have std 0).
    pub std: f64,
    pub len: usize,
}

/// Median of a non-empty slice; averages the two middle values for even
/// lengths.
pub(crate) fn median(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN values"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Population standard deviation of a non-empty slice.
pub(crate) fn population_std(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.max(0.0).sqrt()
}

pub(crate) fn segment_stats(values: &[f64]) -> SegmentStats {
    SegmentStats {
        median: median(values),
        std: population_std(values),
        len: values.len(),
    }
}

/// Segment boundaries `[0, p_1, .., p_m, n]` for a position list.
pub(crate) fn boundaries(positions: &[usize], n: usize) -> Vec<usize> {
    let mut b = Vec::with_capacity(positions.len() + 2);
    b.push(0);
    b.extend_from_slice(positions);
    b.push(n);
    b
}

/// Cut the trace at the changepoints and return per-segment statistics, in
/// order. Timeouts are mapped to [`TIMEOUT_MS`] first.
pub fn segments(trace: &RttTrace, cps: &ChangepointSet) -> Result<Vec<SegmentStats>> {
    let n = trace.len();
    if n == 0 {
        return Err(Error::invalid_trace("empty trace has no segments"));
    }
    validate_positions(cps.positions(), n, "changepoint")?;
    let values = trace.detection_values();
    let b = boundaries(cps.positions(), n);
    Ok(b.windows(2)
        .map(|w| segment_stats(&values[w[0]..w[1]]))
        .collect())
}

/// Level difference `M` and volatility difference `Δ` across the `i`-th truth
/// position (1-based, `1 <= i <= k`).
///
/// `M` is the absolute difference of the adjacent segments' medians, `Δ` the
/// absolute difference of their population standard deviations, where the
/// adjacent segments run from the previous truth position (or the trace start)
/// to `T_i`, and from `T_i` to the next truth position (or the trace end).
pub fn level_and_volatility_diff(
    trace: &RttTrace,
    truth: &GroundTruth,
    i: usize,
) -> Result<(f64, f64)> {
    let k = truth.len();
    if i < 1 || i > k {
        return Err(Error::invalid_input(format!(
            "truth index {i} out of range 1..={k}"
        )));
    }
    let n = trace.len();
    validate_positions(truth.positions(), n, "ground-truth")?;
    let values = trace.detection_values();
    let b = boundaries(truth.positions(), n);
    let left = &values[b[i - 1]..b[i]];
    let right = &values[b[i]..b[i + 1]];
    let m = (median(left) - median(right)).abs();
    let delta = (population_std(left) - population_std(right)).abs();
    Ok((m, delta))
}
