//! Detection and correlation of significant changes in RTT measurement series.
//!
//! The crate is organized around the pipeline stages:
//!
//! * [`model`] — traces, changepoint sets and segment statistics shared by
//!   every other module.
//! * [`detect`] — penalized-likelihood changepoint detection (PELT search over
//!   Normal / Poisson / Exponential / empirical-distribution costs) plus the
//!   baseline-removal transform that makes rate-coupled families sensitive to
//!   small shifts.
//! * [`score`] — evaluation of a detector against labelled ground truth via a
//!   minimum-cost maximum-cardinality matching with a shift-tolerance window,
//!   importance weights and the precision / recall / weighted-recall / F2
//!   suite.
//! * [`synth`] — generator of labelled synthetic RTT traces.
//! * [`pathscan`] — routing-level change detection on Paris-traceroute series:
//!   IP forwarding pattern (IFP) changes via forward inclusion and backward
//!   extension, AS-path and IXP changes.
//! * [`correlate`] — one-to-one temporal matching of RTT changes with path
//!   changes.
//! * [`formats`] — the CSV / JSON-lines file formats used by the CLI.

pub mod correlate;
pub mod detect;
mod error;
pub mod formats;
pub mod matching;
pub mod model;
pub mod pathscan;
pub mod score;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    ChangepointSet, GroundTruth, Rtt, RttSample, RttTrace, SegmentStats, TruthSource, TIMEOUT_MS,
};
