//! File formats shared between the library and the CLI.
//!
//! * Trace file: CSV with header `epoch,rtt`; a timeout is the literal `-1`.
//! * Label file: CSV with header `index`, one changepoint position per row.
//! * Ping input: JSON lines, one measurement per line; the per-measurement
//!   minimum RTT is used and a measurement without a successful reply becomes
//!   a timeout.
//! * Traceroute input: JSON lines with `epoch`, `paris_id` and `hops` (a null
//!   or absent entry is a non-responding hop).
//! * Path changes: CSV with header `epoch,kind,before,after`.
//! * Prefix tables: text lines `prefix/len<TAB>value`.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{ChangepointSet, GroundTruth, Rtt, RttSample, RttTrace, TruthSource};
use crate::pathscan::{AsnTable, ChangeKind, Hop, IxpTable, ParisMeasurement, PathChange};

/// Number of input lines skipped while ingesting a file, reported alongside
/// the parsed value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub skipped_lines: usize,
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path)
        .map_err(|e| Error::invalid_input(format!("cannot open {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Trace CSV

pub fn write_trace_csv<W: Write>(writer: W, trace: &RttTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["epoch", "rtt"])?;
    for s in trace.samples() {
        let rtt = match s.rtt {
            Rtt::Ms(v) => v.to_string(),
            Rtt::Timeout => "-1".to_string(),
        };
        w.write_record([s.epoch.to_string(), rtt])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<RttTrace> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "epoch" || &headers[1] != "rtt" {
        return Err(Error::parse(format!(
            "trace CSV must have header epoch,rtt; got {headers:?}"
        )));
    }
    let mut samples = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let epoch: i64 = record
            .get(0)
            .ok_or_else(|| Error::parse(format!("row {line}: missing epoch")))?
            .trim()
            .parse()
            .map_err(|e| Error::parse(format!("row {line}: bad epoch: {e}")))?;
        let raw = record
            .get(1)
            .ok_or_else(|| Error::parse(format!("row {line}: missing rtt")))?
            .trim();
        let rtt = if raw == "-1" {
            Rtt::Timeout
        } else {
            let v: f64 = raw
                .parse()
                .map_err(|e| Error::parse(format!("row {line}: bad rtt: {e}")))?;
            Rtt::Ms(v)
        };
        samples.push(RttSample { epoch, rtt });
    }
    RttTrace::new(samples)
}

pub fn write_trace_file(path: &Path, trace: &RttTrace) -> Result<()> {
    write_trace_csv(std::fs::File::create(path)?, trace)
}

pub fn read_trace_file(path: &Path) -> Result<RttTrace> {
    read_trace_csv(open(path)?)
}

// ---------------------------------------------------------------------------
// Label / changepoint CSV (same format for ground truth and detections)

pub fn write_labels_csv<W: Write>(writer: W, positions: &[usize]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index"])?;
    for p in positions {
        w.write_record([p.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels_csv<R: Read>(reader: R) -> Result<Vec<usize>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.is_empty() || &headers[0] != "index" {
        return Err(Error::parse(format!(
            "label CSV must have header index; got {headers:?}"
        )));
    }
    let mut positions = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let idx: usize = record
            .get(0)
            .ok_or_else(|| Error::parse(format!("row {line}: missing index")))?
            .trim()
            .parse()
            .map_err(|e| Error::parse(format!("row {line}: bad index: {e}")))?;
        positions.push(idx);
    }
    Ok(positions)
}

pub fn write_labels_file(path: &Path, positions: &[usize]) -> Result<()> {
    write_labels_csv(std::fs::File::create(path)?, positions)
}

pub fn read_truth_file(path: &Path, n: usize, source: TruthSource) -> Result<GroundTruth> {
    GroundTruth::new(read_labels_csv(open(path)?)?, n, source)
}

pub fn read_changepoints_file(path: &Path, n: usize, tag: &str) -> Result<ChangepointSet> {
    ChangepointSet::new(read_labels_csv(open(path)?)?, n, tag)
}

// ---------------------------------------------------------------------------
// Ping JSON lines

#[derive(Debug, Deserialize)]
struct PingLine {
    #[serde(alias = "timestamp")]
    epoch: i64,
    /// Plain list of RTTs in ms.
    #[serde(default)]
    rtts: Option<Vec<f64>>,
    /// RIPE-Atlas-style result array; entries without an `rtt` field are
    /// failed probes.
    #[serde(default)]
    result: Option<Vec<PingReply>>,
    /// Pre-aggregated minimum, used when no per-reply data is present.
    #[serde(default)]
    min: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct PingReply {
    #[serde(default)]
    rtt: Option<f64>,
}

impl PingLine {
    fn sample(&self) -> RttSample {
        let mut best: Option<f64> = None;
        let mut consider = |v: f64| {
            if v.is_finite() && v > 0.0 && best.is_none_or(|b| v < b) {
                best = Some(v);
            }
        };
        if let Some(rtts) = &self.rtts {
            rtts.iter().copied().for_each(&mut consider);
        }
        if let Some(replies) = &self.result {
            replies.iter().filter_map(|r| r.rtt).for_each(&mut consider);
        }
        if let Some(min) = self.min {
            consider(min);
        }
        RttSample {
            epoch: self.epoch,
            rtt: best.map_or(Rtt::Timeout, Rtt::Ms),
        }
    }
}

/// Ingest a JSON-lines ping file. Malformed lines and lines breaking epoch
/// monotonicity are skipped and counted.
pub fn read_ping_jsonl<R: Read>(reader: R) -> Result<(RttTrace, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut samples: Vec<RttSample> = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<PingLine>(&line) {
            Ok(parsed) => {
                let sample = parsed.sample();
                if samples.last().is_some_and(|prev| sample.epoch <= prev.epoch) {
                    log::warn!("line {}: epoch not increasing; skipped", i + 1);
                    stats.skipped_lines += 1;
                    continue;
                }
                samples.push(sample);
            }
            Err(e) => {
                log::warn!("line {}: {e}; skipped", i + 1);
                stats.skipped_lines += 1;
            }
        }
    }
    Ok((RttTrace::new(samples)?, stats))
}

pub fn read_ping_file(path: &Path) -> Result<(RttTrace, IngestStats)> {
    read_ping_jsonl(open(path)?)
}

/// Write a trace back out in the ping JSON-lines format (used by `generate`
/// when JSON output is requested, and by round-trip tests).
pub fn write_ping_jsonl<W: Write>(writer: W, trace: &RttTrace) -> Result<()> {
    let mut w = std::io::BufWriter::new(writer);
    for s in trace.samples() {
        let line = match s.rtt {
            Rtt::Ms(v) => serde_json::json!({ "epoch": s.epoch, "rtts": [v] }),
            Rtt::Timeout => serde_json::json!({ "epoch": s.epoch, "rtts": [] }),
        };
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Traceroute JSON lines

#[derive(Debug, Deserialize)]
struct TracerouteLine {
    #[serde(alias = "timestamp")]
    epoch: i64,
    paris_id: u8,
    hops: Vec<Option<String>>,
}

/// Ingest a JSON-lines traceroute file. Malformed lines and lines breaking
/// epoch monotonicity are skipped and counted.
pub fn read_traceroute_jsonl<R: Read>(reader: R) -> Result<(Vec<ParisMeasurement>, IngestStats)> {
    let mut stats = IngestStats::default();
    let mut measurements: Vec<ParisMeasurement> = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TracerouteLine = match serde_json::from_str(&line) {
            Ok(p) => p,
            Err(e) => {
                log::warn!("line {}: {e}; skipped", i + 1);
                stats.skipped_lines += 1;
                continue;
            }
        };
        let path = parsed
            .hops
            .into_iter()
            .map(|h| match h {
                Some(addr) => Hop::Addr(addr),
                None => Hop::NoResponse,
            })
            .collect();
        match ParisMeasurement::new(parsed.epoch, parsed.paris_id, path) {
            Ok(m) => {
                if measurements.last().is_some_and(|prev| m.epoch < prev.epoch) {
                    log::warn!("line {}: epoch not ordered; skipped", i + 1);
                    stats.skipped_lines += 1;
                    continue;
                }
                measurements.push(m);
            }
            Err(e) => {
                log::warn!("line {}: {e}; skipped", i + 1);
                stats.skipped_lines += 1;
            }
        }
    }
    Ok((measurements, stats))
}

pub fn read_traceroute_file(path: &Path) -> Result<(Vec<ParisMeasurement>, IngestStats)> {
    read_traceroute_jsonl(open(path)?)
}

pub fn write_traceroute_jsonl<W: Write>(
    writer: W,
    measurements: &[ParisMeasurement],
) -> Result<()> {
    let mut w = std::io::BufWriter::new(writer);
    for m in measurements {
        let hops: Vec<Option<&str>> = m
            .path
            .iter()
            .map(|h| match h {
                Hop::Addr(a) => Some(a.as_str()),
                Hop::NoResponse => None,
            })
            .collect();
        let line = serde_json::json!({
            "epoch": m.epoch,
            "paris_id": m.paris_id,
            "hops": hops,
        });
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Path change CSV

pub fn write_path_changes_csv<W: Write>(writer: W, changes: &[PathChange]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["epoch", "kind", "before", "after"])?;
    for c in changes {
        w.write_record([
            c.epoch.to_string(),
            c.kind.to_string(),
            c.before.clone(),
            c.after.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_path_changes_csv<R: Read>(reader: R) -> Result<Vec<PathChange>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.len() < 4 || &headers[0] != "epoch" || &headers[1] != "kind" {
        return Err(Error::parse(format!(
            "path-change CSV must have header epoch,kind,before,after; got {headers:?}"
        )));
    }
    let mut changes = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let epoch: i64 = record
            .get(0)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|e| Error::parse(format!("row {line}: bad epoch: {e}")))?;
        let kind: ChangeKind = record.get(1).unwrap_or_default().parse()?;
        changes.push(PathChange {
            epoch,
            kind,
            before: record.get(2).unwrap_or_default().to_string(),
            after: record.get(3).unwrap_or_default().to_string(),
        });
    }
    Ok(changes)
}

pub fn read_path_changes_file(path: &Path) -> Result<Vec<PathChange>> {
    read_path_changes_csv(open(path)?)
}

pub fn write_path_changes_file(path: &Path, changes: &[PathChange]) -> Result<()> {
    write_path_changes_csv(std::fs::File::create(path)?, changes)
}

// ---------------------------------------------------------------------------
// Prefix tables

fn parse_table_lines<R: Read>(reader: R) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (Some(prefix), Some(value)) = (parts.next(), parts.next()) else {
            return Err(Error::parse(format!(
                "table line {}: expected `prefix/len<TAB>value`",
                i + 1
            )));
        };
        entries.push((prefix.to_string(), value.to_string()));
    }
    Ok(entries)
}

pub fn read_asn_table<R: Read>(reader: R) -> Result<AsnTable> {
    let mut table = AsnTable::new();
    for (prefix, value) in parse_table_lines(reader)? {
        let asn: u32 = value
            .trim_start_matches("AS")
            .parse()
            .map_err(|e| Error::parse(format!("bad ASN {value}: {e}")))?;
        table.insert(&prefix, asn)?;
    }
    Ok(table)
}

pub fn read_ixp_table<R: Read>(reader: R) -> Result<IxpTable> {
    let mut table = IxpTable::new();
    for (prefix, value) in parse_table_lines(reader)? {
        table.insert(&prefix, value)?;
    }
    Ok(table)
}

pub fn read_asn_table_file(path: &Path) -> Result<AsnTable> {
    read_asn_table(open(path)?)
}

pub fn read_ixp_table_file(path: &Path) -> Result<IxpTable> {
    read_ixp_table(open(path)?)
}
