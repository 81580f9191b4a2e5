//! Path-change detection for Paris-traceroute series.
//!
//! RIPE Atlas built-in traceroute cycles its Paris ID from 0 to 15, so plain
//! IP-path differences between neighbouring measurements usually reflect
//! load balancing, not routing. A routing change shows up as *conflicting*
//! measurements: the same Paris ID mapped to different IP paths. This module
//! partitions a measurement sequence into conflict-free IFP series (forward
//! inclusion, optionally refined by backward extension), derives AS-level
//! and IXP changes from translated paths, and reports the three change kinds
//! with IFP changes suppressed wherever they coincide with an AS or IXP
//! change.

mod prefix;

pub use prefix::{AsnTable, IxpTable, PrefixTable};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PARIS_ID_COUNT: usize = 16;

/// One hop of a traceroute path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hop {
    Addr(String),
    NoResponse,
}

impl fmt::Display for Hop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hop::Addr(a) => f.write_str(a),
            Hop::NoResponse => f.write_str("*"),
        }
    }
}

pub type IpPath = Vec<Hop>;

fn render_path(path: &[Hop]) -> String {
    path.iter()
        .map(Hop::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// A single Paris-traceroute measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParisMeasurement {
    pub epoch: i64,
    pub paris_id: u8,
    pub path: IpPath,
}

impl ParisMeasurement {
    pub fn new(epoch: i64, paris_id: u8, path: IpPath) -> Result<Self> {
        if paris_id as usize >= PARIS_ID_COUNT {
            return Err(Error::invalid_input(format!(
                "paris_id must be in 0..{PARIS_ID_COUNT}; got {paris_id}"
            )));
        }
        Ok(ParisMeasurement {
            epoch,
            paris_id,
            path,
        })
    }
}

/// A maximal run of measurements with no conflicting pair, described by the
/// Paris-ID-to-path association observed inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct IfpSeries {
    /// Measurement index range, half-open.
    pub start: usize,
    pub end: usize,
    pub mapping: BTreeMap<u8, IpPath>,
}

impl IfpSeries {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    fn from_range(measurements: &[ParisMeasurement], start: usize, end: usize) -> Self {
        let mut mapping = BTreeMap::new();
        for m in &measurements[start..end] {
            mapping.entry(m.paris_id).or_insert_with(|| m.path.clone());
        }
        IfpSeries {
            start,
            end,
            mapping,
        }
    }

    fn conflicts_with(&self, m: &ParisMeasurement) -> bool {
        self.mapping
            .get(&m.paris_id)
            .is_some_and(|path| *path != m.path)
    }
}

/// Greedy left-to-right partition: each measurement joins the current series
/// unless its Paris ID is already mapped to a different path there, in which
/// case a new series starts at it.
pub fn forward_inclusion(measurements: &[ParisMeasurement]) -> Vec<IfpSeries> {
    let mut series: Vec<IfpSeries> = Vec::new();
    if measurements.is_empty() {
        return series;
    }
    let mut start = 0usize;
    let mut mapping: BTreeMap<u8, IpPath> = BTreeMap::new();
    for (i, m) in measurements.iter().enumerate() {
        match mapping.get(&m.paris_id) {
            Some(path) if *path != m.path => {
                series.push(IfpSeries {
                    start,
                    end: i,
                    mapping: std::mem::take(&mut mapping),
                });
                start = i;
                mapping.insert(m.paris_id, m.path.clone());
            }
            Some(_) => {}
            None => {
                mapping.insert(m.paris_id, m.path.clone());
            }
        }
    }
    series.push(IfpSeries {
        start,
        end: measurements.len(),
        mapping,
    });
    series
}

/// Whether a series observed every Paris ID at least twice.
fn covers_all_ids_twice(measurements: &[ParisMeasurement], s: &IfpSeries) -> bool {
    let mut counts = [0usize; PARIS_ID_COUNT];
    for m in &measurements[s.start..s.end] {
        counts[m.paris_id as usize] += 1;
    }
    counts.iter().all(|&c| c >= 2)
}

/// Refine forward-inclusion boundaries by moving them backward.
///
/// A boundary moves only when the latter series is longer than the one before
/// it and has observed every Paris ID at least twice; it then moves to the
/// earliest measurement such that everything from there to the old boundary
/// is non-conflicting with the latter series' association. The move never
/// crosses the start of the preceding series; a series emptied by the move is
/// deleted.
pub fn backward_extension(
    series: &[IfpSeries],
    measurements: &[ParisMeasurement],
) -> Vec<IfpSeries> {
    let mut out: Vec<IfpSeries> = Vec::new();
    for s in series {
        let mut cur = s.clone();
        if let Some(prev) = out.last() {
            if cur.len() > prev.len() && covers_all_ids_twice(measurements, &cur) {
                let floor = prev.start;
                let mut new_start = cur.start;
                while new_start > floor && !cur.conflicts_with(&measurements[new_start - 1]) {
                    new_start -= 1;
                }
                if new_start < cur.start {
                    let prev_start = prev.start;
                    out.pop();
                    if new_start > prev_start {
                        out.push(IfpSeries::from_range(measurements, prev_start, new_start));
                    }
                    cur = IfpSeries::from_range(measurements, new_start, cur.end);
                }
            }
        }
        out.push(cur);
    }
    // Deleting an emptied series can leave two compatible neighbours; merge
    // them so that adjacent series always conflict.
    let mut merged: Vec<IfpSeries> = Vec::new();
    for s in out {
        if let Some(last) = merged.last() {
            if !mappings_conflict(last, &s) {
                let start = last.start;
                merged.pop();
                merged.push(IfpSeries::from_range(measurements, start, s.end));
                continue;
            }
        }
        merged.push(s);
    }
    merged
}

fn mappings_conflict(a: &IfpSeries, b: &IfpSeries) -> bool {
    a.mapping
        .iter()
        .any(|(id, path)| b.mapping.get(id).is_some_and(|other| other != path))
}

/// Check that every series is internally conflict-free and that each adjacent
/// pair conflicts (otherwise they should have been merged).
pub fn validate_partition(
    series: &[IfpSeries],
    measurements: &[ParisMeasurement],
) -> Result<()> {
    let mut expected_start = 0usize;
    for (k, s) in series.iter().enumerate() {
        if s.start != expected_start || s.is_empty() {
            return Err(Error::invalid_input(format!(
                "series {k} does not tile the measurements: [{}, {})",
                s.start, s.end
            )));
        }
        expected_start = s.end;
        let mut seen: BTreeMap<u8, &IpPath> = BTreeMap::new();
        for m in &measurements[s.start..s.end] {
            if let Some(p) = seen.get(&m.paris_id) {
                if **p != m.path {
                    return Err(Error::invalid_input(format!(
                        "series {k} contains conflicting measurements for paris id {}",
                        m.paris_id
                    )));
                }
            } else {
                seen.insert(m.paris_id, &m.path);
            }
        }
    }
    if expected_start != measurements.len() {
        return Err(Error::invalid_input("series do not cover all measurements"));
    }
    for (k, pair) in series.windows(2).enumerate() {
        if !mappings_conflict(&pair[0], &pair[1]) {
            return Err(Error::invalid_input(format!(
                "adjacent series {k} and {} have no conflicting pair",
                k + 1
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ChangeKind {
    As,
    Ixp,
    Ifp,
}

impl ChangeKind {
    pub fn name(self) -> &'static str {
        match self {
            ChangeKind::As => "AS",
            ChangeKind::Ixp => "IXP",
            ChangeKind::Ifp => "IFP",
        }
    }
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ChangeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AS" => Ok(ChangeKind::As),
            "IXP" => Ok(ChangeKind::Ixp),
            "IFP" => Ok(ChangeKind::Ifp),
            other => Err(Error::parse(format!("unknown change kind: {other}"))),
        }
    }
}

/// A detected routing-level change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathChange {
    pub epoch: i64,
    pub kind: ChangeKind,
    pub before: String,
    pub after: String,
}

/// One IFP change per series boundary, timestamped at the first measurement
/// of the latter series. The summaries show the lowest Paris ID whose path
/// differs across the boundary.
pub fn ifp_changes(
    series: &[IfpSeries],
    measurements: &[ParisMeasurement],
) -> Vec<PathChange> {
    series
        .windows(2)
        .map(|pair| {
            let epoch = measurements[pair[1].start].epoch;
            let witness = pair[0].mapping.iter().find_map(|(id, before)| {
                pair[1]
                    .mapping
                    .get(id)
                    .filter(|after| *after != before)
                    .map(|after| (id, before, after))
            });
            let (before, after) = match witness {
                Some((id, b, a)) => (
                    format!("{id}:{}", render_path(b)),
                    format!("{id}:{}", render_path(a)),
                ),
                None => (String::new(), String::new()),
            };
            PathChange {
                epoch,
                kind: ChangeKind::Ifp,
                before,
                after,
            }
        })
        .collect()
}

/// One hop of an AS-level path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsLabel {
    Asn(u32),
    Ixp(String),
    NoResponse,
    /// Private, unrouted or malformed address.
    Unmapped,
}

impl fmt::Display for AsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsLabel::Asn(a) => write!(f, "{a}"),
            AsLabel::Ixp(name) => f.write_str(name),
            AsLabel::NoResponse => f.write_str("*"),
            AsLabel::Unmapped => f.write_str("private"),
        }
    }
}

pub type AsPath = Vec<AsLabel>;

pub fn render_as_path(path: &[AsLabel]) -> String {
    path.iter()
        .map(AsLabel::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn collapse_consecutive(path: Vec<AsLabel>) -> AsPath {
    let mut out: AsPath = Vec::with_capacity(path.len());
    for label in path {
        if out.last() != Some(&label) {
            out.push(label);
        }
    }
    out
}

/// Translate an IP path to an AS path: IXP prefixes first, then longest
/// prefix match in the ASN table; unmatched or malformed hops become
/// [`AsLabel::Unmapped`], no-response hops are preserved, and consecutive
/// identical labels collapse to one.
pub fn map_as_path(ip_path: &[Hop], asn_table: &AsnTable, ixp_table: &IxpTable) -> AsPath {
    let labels: Vec<AsLabel> = ip_path
        .iter()
        .map(|hop| match hop {
            Hop::NoResponse => AsLabel::NoResponse,
            Hop::Addr(addr) => match addr.trim().parse::<std::net::IpAddr>() {
                Err(_) => {
                    log::warn!("malformed hop address {addr:?}; labelling unmapped");
                    AsLabel::Unmapped
                }
                Ok(ip) => {
                    if let Some(name) = ixp_table.lookup(ip) {
                        AsLabel::Ixp(name.clone())
                    } else if let Some(asn) = asn_table.lookup(ip) {
                        AsLabel::Asn(*asn)
                    } else {
                        AsLabel::Unmapped
                    }
                }
            },
        })
        .collect();
    collapse_consecutive(labels)
}

fn strip_no_response(path: &[AsLabel]) -> (AsPath, bool) {
    let had_nr = path.contains(&AsLabel::NoResponse);
    let stripped = collapse_consecutive(
        path.iter()
            .filter(|l| **l != AsLabel::NoResponse)
            .cloned()
            .collect(),
    );
    (stripped, had_nr)
}

fn is_subsequence(shorter: &[AsLabel], longer: &[AsLabel]) -> bool {
    let mut it = longer.iter();
    shorter.iter().all(|s| it.any(|l| l == s))
}

/// Classify the difference between two consecutive AS paths.
///
/// No-response hops are deleted before comparison, and a difference that is
/// explainable purely by that deletion (one side a subsequence of the other,
/// with the shorter side actually containing no-response hops) is ignored.
/// Otherwise the first differing position decides: public ASNs on both sides
/// make an AS change, an IXP label on either side makes an IXP change, and
/// anything else (private or unmapped hops, or one path simply ending) is
/// not an event.
fn classify_pair(before: &[AsLabel], after: &[AsLabel]) -> Option<ChangeKind> {
    let (a, a_had_nr) = strip_no_response(before);
    let (b, b_had_nr) = strip_no_response(after);
    if a == b {
        return None;
    }
    if a.len() < b.len() && a_had_nr && is_subsequence(&a, &b) {
        return None;
    }
    if b.len() < a.len() && b_had_nr && is_subsequence(&b, &a) {
        return None;
    }
    let first_diff = a
        .iter()
        .zip(b.iter())
        .position(|(x, y)| x != y)
        .unwrap_or_else(|| a.len().min(b.len()));
    match (a.get(first_diff), b.get(first_diff)) {
        (Some(AsLabel::Ixp(_)), _) | (_, Some(AsLabel::Ixp(_))) => Some(ChangeKind::Ixp),
        (Some(AsLabel::Asn(x)), Some(AsLabel::Asn(y))) if x != y => Some(ChangeKind::As),
        _ => None,
    }
}

/// AS-level and IXP changes from a time-ordered sequence of AS paths, one per
/// measurement. An event is timestamped at the later measurement of the
/// differing pair.
pub fn as_path_changes(as_paths: &[(i64, AsPath)]) -> Vec<PathChange> {
    as_paths
        .windows(2)
        .filter_map(|pair| {
            let (_, ref before) = pair[0];
            let (epoch, ref after) = pair[1];
            classify_pair(before, after).map(|kind| {
                let (a, _) = strip_no_response(before);
                let (b, _) = strip_no_response(after);
                PathChange {
                    epoch,
                    kind,
                    before: render_as_path(&a),
                    after: render_as_path(&b),
                }
            })
        })
        .collect()
}

/// Which IFP boundary-placement heuristic to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IfpMode {
    Forward,
    Backward,
}

impl std::str::FromStr for IfpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "forward" => Ok(IfpMode::Forward),
            "backward" => Ok(IfpMode::Backward),
            other => Err(Error::parse(format!("unknown ifp mode: {other}"))),
        }
    }
}

/// Full path-change detection: AS and IXP changes when tables are available,
/// plus IFP changes from the selected heuristic. An IFP change whose epoch
/// coincides with an AS or IXP change is reported under the latter only.
pub fn detect_path_changes(
    measurements: &[ParisMeasurement],
    tables: Option<(&AsnTable, &IxpTable)>,
    mode: IfpMode,
) -> Vec<PathChange> {
    let mut events: Vec<PathChange> = Vec::new();
    if let Some((asn_table, ixp_table)) = tables {
        let as_paths: Vec<(i64, AsPath)> = measurements
            .iter()
            .map(|m| (m.epoch, map_as_path(&m.path, asn_table, ixp_table)))
            .collect();
        events.extend(as_path_changes(&as_paths));
    }

    let series = forward_inclusion(measurements);
    let series = match mode {
        IfpMode::Forward => series,
        IfpMode::Backward => backward_extension(&series, measurements),
    };
    let taken: std::collections::HashSet<i64> = events.iter().map(|e| e.epoch).collect();
    events.extend(
        ifp_changes(&series, measurements)
            .into_iter()
            .filter(|e| !taken.contains(&e.epoch)),
    );
    events.sort_by_key(|e| e.epoch);
    events
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> Hop {
        Hop::Addr(s.to_string())
    }

    /// Build measurements with cycling Paris IDs (0..16) from single-letter
    /// path names, 1800 s apart.
    fn cycle(paths: &[&str]) -> Vec<ParisMeasurement> {
        paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                ParisMeasurement::new(i as i64 * 1800, (i % PARIS_ID_COUNT) as u8, vec![addr(p)])
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn paris_id_range_is_validated() {
        assert!(ParisMeasurement::new(0, 16, vec![]).is_err());
        assert!(ParisMeasurement::new(0, 15, vec![]).is_ok());
    }

    #[test]
    fn single_series_when_no_conflicts() {
        let ms = cycle(&["A"; 40]);
        let series = forward_inclusion(&ms);
        assert_eq!(series.len(), 1);
        assert_eq!((series[0].start, series[0].end), (0, 40));
        validate_partition(&series, &ms).unwrap();
    }

    #[test]
    fn alternating_paths_split_everywhere() {
        // Same Paris ID, alternating paths: every measurement conflicts with
        // the one before it.
        let ms: Vec<ParisMeasurement> = (0..6)
            .map(|i| {
                ParisMeasurement::new(i as i64, 0, vec![addr(if i % 2 == 0 { "X" } else { "Y" })])
                    .unwrap()
            })
            .collect();
        let series = forward_inclusion(&ms);
        assert_eq!(series.len(), 6);
        validate_partition(&series, &ms).unwrap();
    }

    /// First verbatim layout: IDs 0,1,2,3,4..15,0,1,2,3 with paths
    /// A,B,B,A,A..C,A,B,E,E — the boundary falls before the second
    /// Paris-ID-2 measurement.
    fn first_example() -> Vec<ParisMeasurement> {
        let mut paths = vec!["A", "B", "B", "A", "A"];
        paths.extend(std::iter::repeat_n("C", 11)); // ids 5..=15
        paths.extend(["A", "B", "E", "E"]); // ids 0, 1, 2, 3
        cycle(&paths)
    }

    #[test]
    fn forward_inclusion_matches_first_example() {
        let ms = first_example();
        let series = forward_inclusion(&ms);
        assert_eq!(series.len(), 2);
        // Second Paris-ID-2 measurement is index 18.
        assert_eq!(series[0].end, 18);
        assert_eq!(series[1].start, 18);
        validate_partition(&series, &ms).unwrap();
    }

    /// Second verbatim layout: a short deviation at one cycle's IDs 2 and 3
    /// (B,A instead of the dominant E,E). Forward inclusion cuts at the next
    /// appearance of ID 2; backward extension relocates the boundary to the
    /// first appearance of ID 4, where the dominant pattern resumed.
    fn second_example() -> Vec<ParisMeasurement> {
        let dominant = |id: usize| match id {
            0 => "A",
            1 => "B",
            2 | 3 => "E",
            4 => "A",
            _ => "C",
        };
        let mut paths: Vec<&str> = Vec::new();
        // One dominant cycle starting at ID 2 (indices 0..16).
        for id in 0..16 {
            paths.push(dominant((id + 2) % 16));
        }
        // Deviation: IDs 2 and 3 take B and A (indices 16, 17).
        paths.push("B");
        paths.push("A");
        // Dominant resumes at ID 4 (index 18) and runs two more full cycles.
        for i in 0..46 {
            paths.push(dominant((4 + i) % 16));
        }
        paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                ParisMeasurement::new(i as i64 * 1800, ((i + 2) % 16) as u8, vec![addr(p)])
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn backward_extension_matches_second_example() {
        let ms = second_example();
        let forward = forward_inclusion(&ms);
        // Deviation starts a series at 16; the next ID-2 measurement is 32.
        assert_eq!(forward.len(), 3);
        assert_eq!(forward[1].start, 16);
        assert_eq!(forward[2].start, 32);

        let backward = backward_extension(&forward, &ms);
        validate_partition(&backward, &ms).unwrap();
        // Boundary relocated to index 18, the first appearance of ID 4.
        assert_eq!(backward.len(), 3);
        assert_eq!(backward[1].start, 16);
        assert_eq!(backward[1].end, 18);
        assert_eq!(backward[2].start, 18);
        assert_eq!(ms[18].paris_id, 4);

        // Brute-force check of the placement: the new boundary must be the
        // earliest j such that everything in [j, old_boundary) is
        // non-conflicting with the latter series' association.
        let latter = &forward[2];
        let earliest = (forward[1].start..=forward[2].start)
            .find(|&j| (j..forward[2].start).all(|i| !latter.conflicts_with(&ms[i])))
            .unwrap();
        assert_eq!(backward[2].start, earliest);
    }

    #[test]
    fn backward_extension_requires_longer_latter_series() {
        // Two conflicting cycles of equal length: guard fails, boundaries stay.
        let mut paths = vec!["A"; 16];
        paths.extend(std::iter::repeat_n("B", 16));
        let ms = cycle(&paths);
        let forward = forward_inclusion(&ms);
        let backward = backward_extension(&forward, &ms);
        assert_eq!(forward, backward);
    }

    #[test]
    fn backward_extension_requires_full_double_coverage() {
        // Latter series longer but spans the IDs only once: unchanged.
        let mut paths = vec!["A"; 8];
        paths.extend(std::iter::repeat_n("B", 14));
        let ms = cycle(&paths);
        let forward = forward_inclusion(&ms);
        let backward = backward_extension(&forward, &ms);
        assert_eq!(forward, backward);
    }

    #[test]
    fn backward_extension_never_adds_series() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.random_range(1..200);
            let ms: Vec<ParisMeasurement> = (0..n)
                .map(|i| {
                    let path = match rng.random_range(0..3) {
                        0 => "A",
                        1 => "B",
                        _ => "C",
                    };
                    ParisMeasurement::new(
                        i as i64 * 1800,
                        (i % PARIS_ID_COUNT) as u8,
                        vec![addr(path)],
                    )
                    .unwrap()
                })
                .collect();
            let forward = forward_inclusion(&ms);
            validate_partition(&forward, &ms).unwrap();
            let backward = backward_extension(&forward, &ms);
            validate_partition(&backward, &ms).unwrap();
            assert!(backward.len() <= forward.len());
        }
    }

    #[test]
    fn ifp_change_reports_boundary_epoch_and_witness() {
        let ms = first_example();
        let series = forward_inclusion(&ms);
        let changes = ifp_changes(&series, &ms);
        assert_eq!(changes.len(), 1);
        assert_eq!(changes[0].epoch, ms[18].epoch);
        assert_eq!(changes[0].kind, ChangeKind::Ifp);
        assert_eq!(changes[0].before, "2:B");
        assert_eq!(changes[0].after, "2:E");
    }

    fn test_tables() -> (AsnTable, IxpTable) {
        let mut asn = AsnTable::new();
        asn.insert("10.1.0.0/16", 1).unwrap();
        asn.insert("10.2.0.0/16", 2).unwrap();
        asn.insert("10.3.0.0/16", 3).unwrap();
        asn.insert("10.4.0.0/16", 4).unwrap();
        let mut ixp = IxpTable::new();
        ixp.insert("192.0.2.0/24", "AMS-IX".to_string()).unwrap();
        (asn, ixp)
    }

    #[test]
    fn map_collapses_single_as() {
        let (asn, ixp) = test_tables();
        let path = vec![addr("10.1.0.1"), addr("10.1.0.2"), addr("10.1.9.9")];
        assert_eq!(map_as_path(&path, &asn, &ixp), vec![AsLabel::Asn(1)]);
    }

    #[test]
    fn map_labels_ixp_hops() {
        let (asn, ixp) = test_tables();
        let path = vec![addr("10.1.0.1"), addr("192.0.2.7"), addr("10.2.0.1")];
        assert_eq!(
            map_as_path(&path, &asn, &ixp),
            vec![
                AsLabel::Asn(1),
                AsLabel::Ixp("AMS-IX".to_string()),
                AsLabel::Asn(2)
            ]
        );
    }

    #[test]
    fn map_keeps_no_response_between_asns() {
        let (asn, ixp) = test_tables();
        let path = vec![addr("10.1.0.1"), Hop::NoResponse, addr("10.2.0.1")];
        assert_eq!(
            map_as_path(&path, &asn, &ixp),
            vec![AsLabel::Asn(1), AsLabel::NoResponse, AsLabel::Asn(2)]
        );
    }

    #[test]
    fn map_handles_malformed_and_unknown() {
        let (asn, ixp) = test_tables();
        let path = vec![addr("not-an-ip"), addr("172.31.0.1")];
        assert_eq!(
            map_as_path(&path, &asn, &ixp),
            vec![AsLabel::Unmapped]
        );
    }

    fn as_changes(paths: Vec<AsPath>) -> Vec<PathChange> {
        let with_epochs: Vec<(i64, AsPath)> = paths
            .into_iter()
            .enumerate()
            .map(|(i, p)| (i as i64 * 1800, p))
            .collect();
        as_path_changes(&with_epochs)
    }

    #[test]
    fn identical_as_paths_are_no_change() {
        let p = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        assert!(as_changes(vec![p.clone(), p]).is_empty());
    }

    #[test]
    fn public_asn_difference_is_an_as_change() {
        let a = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        let b = vec![AsLabel::Asn(1), AsLabel::Asn(4), AsLabel::Asn(3)];
        let events = as_changes(vec![a, b]);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, ChangeKind::As);
        assert_eq!(events[0].before, "1 2 3");
        assert_eq!(events[0].after, "1 4 3");
    }

    #[test]
    fn no_response_deletion_suppresses_spurious_change() {
        // [AS1, *, AS3] vs [AS1, AS2, AS3]: after deleting the no-response
        // hop, the first is a subsequence of the second, so the difference is
        // explainable by the missing reply and must not count.
        let a = vec![AsLabel::Asn(1), AsLabel::NoResponse, AsLabel::Asn(3)];
        let b = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        assert!(as_changes(vec![a.clone(), b.clone()]).is_empty());
        // Symmetric direction as well.
        assert!(as_changes(vec![b, a]).is_empty());
    }

    #[test]
    fn genuine_detour_is_not_suppressed_without_no_response() {
        // Same shapes but no missing reply on either side: a real change.
        let a = vec![AsLabel::Asn(1), AsLabel::Asn(3)];
        let b = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        let events = as_changes(vec![a, b]);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, ChangeKind::As);
    }

    #[test]
    fn ixp_involvement_is_an_ixp_change() {
        let a = vec![
            AsLabel::Asn(1),
            AsLabel::Ixp("NL-IX".into()),
            AsLabel::Asn(3),
        ];
        let b = vec![
            AsLabel::Asn(1),
            AsLabel::Ixp("AMS-IX".into()),
            AsLabel::Asn(3),
        ];
        let events = as_changes(vec![a.clone(), b]);
        assert_eq!(events[0].kind, ChangeKind::Ixp);

        let c = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        let events = as_changes(vec![a, c]);
        assert_eq!(events[0].kind, ChangeKind::Ixp);
    }

    #[test]
    fn unmapped_difference_is_not_an_event() {
        let a = vec![AsLabel::Asn(1), AsLabel::Unmapped, AsLabel::Asn(3)];
        let b = vec![AsLabel::Asn(1), AsLabel::Asn(2), AsLabel::Asn(3)];
        assert!(as_changes(vec![a, b]).is_empty());
    }

    #[test]
    fn overlapping_ifp_is_reported_as_as_change_only() {
        // Conflicting Paris-ID paths whose AS translation also changes at the
        // same epoch: only the AS event survives.
        let (asn, ixp) = test_tables();
        let ms = vec![
            ParisMeasurement::new(0, 0, vec![addr("10.1.0.1"), addr("10.2.0.1")]).unwrap(),
            ParisMeasurement::new(1800, 1, vec![addr("10.1.0.1"), addr("10.2.0.1")]).unwrap(),
            ParisMeasurement::new(3600, 0, vec![addr("10.1.0.1"), addr("10.3.0.1")]).unwrap(),
            ParisMeasurement::new(5400, 1, vec![addr("10.1.0.1"), addr("10.3.0.1")]).unwrap(),
        ];
        let events = detect_path_changes(&ms, Some((&asn, &ixp)), IfpMode::Forward);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, ChangeKind::As);
        assert_eq!(events[0].epoch, 3600);
    }

    #[test]
    fn ifp_survives_when_as_path_is_stable() {
        // Path flip inside one AS: an IFP change with no AS-level difference.
        let (asn, ixp) = test_tables();
        let ms = vec![
            ParisMeasurement::new(0, 0, vec![addr("10.1.0.1"), addr("10.2.0.1")]).unwrap(),
            ParisMeasurement::new(1800, 1, vec![addr("10.1.0.1"), addr("10.2.0.1")]).unwrap(),
            ParisMeasurement::new(3600, 0, vec![addr("10.1.0.2"), addr("10.2.0.1")]).unwrap(),
            ParisMeasurement::new(5400, 1, vec![addr("10.1.0.2"), addr("10.2.0.1")]).unwrap(),
        ];
        let events = detect_path_changes(&ms, Some((&asn, &ixp)), IfpMode::Forward);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, ChangeKind::Ifp);
        assert_eq!(events[0].epoch, 3600);
    }
}
