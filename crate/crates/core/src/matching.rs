//! Minimum-cost maximum-cardinality matching of two ordered event sets on a
//! line, with a hard tolerance window.
//!
//! Both the detector scoring (positions in samples) and the RTT/path change
//! correlation (epochs in seconds) use this single implementation.

/// Result of matching `left` against `right`: index pairs into the two input
/// slices, one-to-one, every pair within the window, of maximum cardinality
/// and, among those, minimum total absolute shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `(left_index, right_index)` pairs, sorted by left index.
    pub pairs: Vec<(usize, usize)>,
    pub total_shift: i64,
}

impl Matching {
    pub fn cardinality(&self) -> usize {
        self.pairs.len()
    }
}

/// Match two coordinate sets with edge set `{(p, q) : |p - q| <= window}` and
/// edge cost `|p - q|`.
///
/// Solved as a square assignment problem where every out-of-window or padded
/// cell carries a sentinel cost larger than any achievable total shift, so
/// cardinality dominates and the real-edge cost is minimized second.
pub fn min_cost_max_matching(left: &[i64], right: &[i64], window: i64) -> Matching {
    assert!(window >= 0, "tolerance window must be non-negative");
    if left.is_empty() || right.is_empty() {
        return Matching {
            pairs: Vec::new(),
            total_shift: 0,
        };
    }
    let dim = left.len().max(right.len());
    // Must exceed any achievable total in-window shift; capped to keep the
    // reduced costs inside the potentials' headroom.
    let big = (left.len().min(right.len()) as i64)
        .saturating_mul(window)
        .saturating_add(1)
        .min(i64::MAX / 8);
    let cost = |i: usize, j: usize| -> i64 {
        if i < left.len() && j < right.len() {
            let d = (left[i] - right[j]).abs();
            if d <= window {
                return d;
            }
        }
        big
    };

    let assignment = assign(dim, &cost);

    let mut pairs = Vec::new();
    let mut total_shift = 0;
    for (i, j) in assignment.into_iter().enumerate() {
        if i < left.len() && j < right.len() {
            let d = (left[i] - right[j]).abs();
            if d <= window {
                pairs.push((i, j));
                total_shift += d;
            }
        }
    }
    pairs.sort_unstable();
    Matching { pairs, total_shift }
}

/// O(dim^3) Hungarian algorithm with potentials; returns the column assigned
/// to each row of the square cost matrix.
fn assign(dim: usize, cost: &dyn Fn(usize, usize) -> i64) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; p[j] is the row matched to column j, p[0] the row
    // currently being placed.
    let mut u = vec![0i64; dim + 1];
    let mut v = vec![0i64; dim + 1];
    let mut p = vec![0usize; dim + 1];
    let mut way = vec![0usize; dim + 1];

    for i in 1..=dim {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; dim + 1];
        let mut used = vec![false; dim + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=dim {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=dim {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; dim];
    for j in 1..=dim {
        row_to_col[p[j] - 1] = j - 1;
    }
    row_to_col
}
