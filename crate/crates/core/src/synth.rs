//! Generator of synthetic RTT traces with known ground-truth changepoints.
//!
//! A trace is a sequence of path stages, each with its own RTT level and
//! noise; every stage runs a two-state Markov process that moves it into and
//! out of congestion phases. Ground truth records every stage boundary and
//! every congestion toggle. The published corpus only pins the overall
//! change density, so everything else is config-driven; the defaults below
//! are calibrated to land near that density and are not normative.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GroundTruth, Rtt, RttSample, RttTrace, TruthSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Samples per trace; 6480 is 18 days at the 4-minute cadence.
    pub n_samples: usize,
    /// Inclusive range of path-stage counts.
    pub stage_count: (usize, usize),
    /// RTT level of the first stage, ms.
    pub base_level_ms: (f64, f64),
    /// Absolute level shift between consecutive stages, ms.
    pub stage_shift_ms: (f64, f64),
    /// Per-sample probability of entering a congestion phase.
    pub congestion_enter_prob: f64,
    /// Per-sample probability of leaving a congestion phase.
    pub congestion_exit_prob: f64,
    /// RTT offset added during a congestion phase, ms.
    pub congestion_amp_ms: (f64, f64),
    /// Gaussian noise standard deviation, drawn once per stage, ms.
    pub noise_std_ms: (f64, f64),
    /// Per-sample probability of a timeout.
    pub timeout_prob: f64,
    /// Spacing between consecutive samples, seconds.
    pub interval_secs: f64,
    /// Minimum stage length, samples.
    pub min_stage_len: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_samples: 6480,
            stage_count: (3, 8),
            base_level_ms: (20.0, 300.0),
            stage_shift_ms: (10.0, 150.0),
            congestion_enter_prob: 0.002,
            congestion_exit_prob: 0.05,
            congestion_amp_ms: (10.0, 200.0),
            noise_std_ms: (0.5, 5.0),
            timeout_prob: 0.0005,
            interval_secs: RttTrace::DEFAULT_INTERVAL,
            min_stage_len: 50,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(seed: u64) -> Self {
        SynthConfig {
            seed,
            ..SynthConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let ranges = [
            ("base_level_ms", self.base_level_ms),
            ("stage_shift_ms", self.stage_shift_ms),
            ("congestion_amp_ms", self.congestion_amp_ms),
            ("noise_std_ms", self.noise_std_ms),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
                return Err(Error::invalid_input(format!(
                    "{name} must be a non-negative range; got ({lo}, {hi})"
                )));
            }
        }
        for (name, p) in [
            ("congestion_enter_prob", self.congestion_enter_prob),
            ("congestion_exit_prob", self.congestion_exit_prob),
            ("timeout_prob", self.timeout_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid_input(format!(
                    "{name} must be in [0, 1]; got {p}"
                )));
            }
        }
        if self.stage_count.0 < 1 || self.stage_count.1 < self.stage_count.0 {
            return Err(Error::invalid_input(format!(
                "stage_count must be a non-empty range starting at 1; got {:?}",
                self.stage_count
            )));
        }
        if self.min_stage_len < 1 {
            return Err(Error::invalid_input("min_stage_len must be >= 1"));
        }
        if self.n_samples < self.stage_count.0 * self.min_stage_len {
            return Err(Error::invalid_input(format!(
                "n_samples = {} cannot hold {} stages of at least {} samples",
                self.n_samples, self.stage_count.0, self.min_stage_len
            )));
        }
        if !(self.interval_secs.is_finite() && self.interval_secs > 0.0) {
            return Err(Error::invalid_input("interval_secs must be positive"));
        }
        Ok(())
    }
}

/// A generated trace with its ground truth and the configuration that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledTrace {
    pub trace: RttTrace,
    pub truth: GroundTruth,
    pub provenance: SynthConfig,
}

fn sample_range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Stage lengths: the slack beyond the per-stage minimum is cut at
/// uniformly-random points, so boundaries are uniform subject to the minimum
/// stage length.
fn stage_lengths(rng: &mut ChaCha8Rng, n: usize, stages: usize, min_len: usize) -> Vec<usize> {
    let slack = n - stages * min_len;
    let mut cuts: Vec<usize> = (0..stages - 1)
        .map(|_| rng.random_range(0..=slack))
        .collect();
    cuts.sort_unstable();
    let mut lengths = Vec::with_capacity(stages);
    let mut prev = 0;
    for &c in &cuts {
        lengths.push(min_len + (c - prev));
        prev = c;
    }
    lengths.push(min_len + (slack - prev));
    lengths
}

/// Generate one labelled trace. Deterministic given the config (including
/// its seed).
pub fn generate(cfg: &SynthConfig) -> Result<LabelledTrace> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_samples;

    let max_stages = cfg
        .stage_count
        .1
        .min(n / cfg.min_stage_len)
        .max(cfg.stage_count.0);
    let stages = if cfg.stage_count.0 == max_stages {
        cfg.stage_count.0
    } else {
        rng.random_range(cfg.stage_count.0..=max_stages)
    };
    let lengths = stage_lengths(&mut rng, n, stages, cfg.min_stage_len);

    // Per-stage levels: a random walk of shifts from the base level, kept
    // at or above 1 ms by flipping the direction when a downward shift
    // would go below it.
    let mut levels = Vec::with_capacity(stages);
    let mut noise_stds = Vec::with_capacity(stages);
    let base = sample_range(&mut rng, cfg.base_level_ms).max(1.0);
    levels.push(base);
    noise_stds.push(sample_range(&mut rng, cfg.noise_std_ms));
    for _ in 1..stages {
        let prev = *levels.last().unwrap();
        let shift = sample_range(&mut rng, cfg.stage_shift_ms);
        let down = rng.random_bool(0.5);
        let level = if down && prev - shift >= 1.0 {
            prev - shift
        } else {
            prev + shift
        };
        levels.push(level);
        noise_stds.push(sample_range(&mut rng, cfg.noise_std_ms));
    }

    let mut stage_starts = Vec::with_capacity(stages);
    let mut acc = 0;
    for &l in &lengths {
        stage_starts.push(acc);
        acc += l;
    }

    let mut samples = Vec::with_capacity(n);
    let mut truth_positions: Vec<usize> = Vec::new();
    let mut stage = 0usize;
    let mut congested = false;
    let mut congestion_amp = 0.0;

    for i in 0..n {
        if stage + 1 < stages && i == stage_starts[stage + 1] {
            let was_congested = congested;
            stage += 1;
            congested = false;
            if levels[stage] != levels[stage - 1] || was_congested {
                truth_positions.push(i);
            }
        } else if i > 0 {
            if congested {
                if rng.random_bool(cfg.congestion_exit_prob) {
                    congested = false;
                    truth_positions.push(i);
                }
            } else if rng.random_bool(cfg.congestion_enter_prob) {
                congested = true;
                congestion_amp = sample_range(&mut rng, cfg.congestion_amp_ms);
                truth_positions.push(i);
            }
        }

        let noise = if noise_stds[stage] > 0.0 {
            Normal::new(0.0, noise_stds[stage])
                .expect("validated std")
                .sample(&mut rng)
        } else {
            0.0
        };
        let mut value = levels[stage] + noise;
        if congested {
            value += congestion_amp;
        }
        let rtt = if cfg.timeout_prob > 0.0 && rng.random_bool(cfg.timeout_prob) {
            Rtt::Timeout
        } else {
            Rtt::Ms(value.max(1.0))
        };
        samples.push(RttSample {
            epoch: (i as f64 * cfg.interval_secs) as i64,
            rtt,
        });
    }

    let trace = RttTrace::with_interval(samples, cfg.interval_secs)?;
    let truth = GroundTruth::new(truth_positions, n, TruthSource::Synthetic)?;
    Ok(LabelledTrace {
        trace,
        truth,
        provenance: cfg.clone(),
    })
}
