//! Overlap and square detection.
//!
//! An overlap `c x c x c` is handled as a factor of length `2p + 1` with
//! period `p = |cx|`; a square `w w` as a factor of length `2p` with period
//! `p = |w|`. Positions are 0-based here.

use serde::{Deserialize, Serialize};

/// Certificate for an overlap `w[start .. start + 2·period + 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OverlapWitness {
    pub start: usize,
    pub period: usize,
}

/// Certificate for a square `w[start .. start + 2·half_length]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareWitness {
    pub start: usize,
    pub half_length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Overlap(OverlapWitness),
    Square(SquareWitness),
}

/// Whether `w[start ..= start + span - 1]` has period `period`.
fn has_period<T: Eq>(w: &[T], start: usize, period: usize, span: usize) -> bool {
    period >= 1
        && start
            .checked_add(span)
            .and_then(|end| end.checked_add(period))
            .is_some_and(|end| end <= w.len())
        && (start..start + span).all(|k| w[k] == w[k + period])
}

impl OverlapWitness {
    pub fn new(start: usize, period: usize) -> Self {
        OverlapWitness { start, period }
    }

    pub fn len(&self) -> usize {
        2 * self.period + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Positions of the three copies of `c`.
    pub fn anchors(&self) -> [usize; 3] {
        [
            self.start,
            self.start + self.period,
            self.start + 2 * self.period,
        ]
    }

    pub fn verify<T: Eq>(&self, w: &[T]) -> bool {
        has_period(w, self.start, self.period, self.period + 1)
    }

    /// The letter `c` and the word `x` of `c x c x c`.
    pub fn parts<'a, T>(&self, w: &'a [T]) -> (&'a T, &'a [T]) {
        (&w[self.start], &w[self.start + 1..self.start + self.period])
    }

    /// The square `cx cx` this overlap starts with.
    pub fn square(&self) -> SquareWitness {
        SquareWitness {
            start: self.start,
            half_length: self.period,
        }
    }
}

impl SquareWitness {
    pub fn new(start: usize, half_length: usize) -> Self {
        SquareWitness { start, half_length }
    }

    pub fn verify<T: Eq>(&self, w: &[T]) -> bool {
        has_period(w, self.start, self.half_length, self.half_length)
    }
}

impl Witness {
    pub fn verify<T: Eq>(&self, w: &[T]) -> bool {
        match self {
            Witness::Overlap(o) => o.verify(w),
            Witness::Square(s) => s.verify(w),
        }
    }
}

pub fn verify_witness<T: Eq>(w: &[T], witness: &Witness) -> bool {
    witness.verify(w)
}

/// Leftmost start of a factor of length `period + span` with period `period`,
/// scanning `w[k] == w[k + period]` runs once.
fn leftmost_periodic_run<T: Eq>(w: &[T], period: usize, span: usize) -> Option<usize> {
    let mut run = 0;
    for k in 0..w.len().saturating_sub(period) {
        if w[k] == w[k + period] {
            run += 1;
            if run == span {
                return Some(k + 1 - span);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Brute-force overlap search in `O(|w|²)`, returning the witness with the
/// smallest period and, among those, the smallest start.
pub fn find_overlap_naive<T: Eq>(w: &[T]) -> Option<OverlapWitness> {
    (1..=w.len().saturating_sub(1) / 2)
        .find_map(|p| leftmost_periodic_run(w, p, p + 1).map(|start| OverlapWitness::new(start, p)))
}

/// Brute-force square search, smallest half length first, then leftmost.
pub fn find_square<T: Eq>(w: &[T]) -> Option<SquareWitness> {
    (1..=w.len() / 2)
        .find_map(|p| leftmost_periodic_run(w, p, p).map(|start| SquareWitness::new(start, p)))
}

/// `z[i]` = length of the longest common prefix of `pattern` and `pattern[i..]`.
fn z_function<T: Eq>(pattern: &[T]) -> Vec<usize> {
    let n = pattern.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        while i + k < n && pattern[k] == pattern[i + k] {
            k += 1;
        }
        z[i] = k;
        if i + k > r {
            l = i;
            r = i + k;
        }
    }
    z
}

/// `out[i]` = length of the longest common prefix of `pattern` and `text[i..]`.
fn match_lengths<T: Eq>(pattern: &[T], z: &[usize], text: &[T]) -> Vec<usize> {
    let (m, n) = (pattern.len(), text.len());
    let mut out = vec![0; n];
    let (mut l, mut r) = (0, 0);
    for i in 0..n {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        while k < m && i + k < n && pattern[k] == text[i + k] {
            k += 1;
        }
        out[i] = k;
        if i + k > r {
            l = i;
            r = i + k;
        }
    }
    out
}

/// Looks for an overlap that fits in `w[lo..hi]` and contains both
/// `w[mid - 1]` and `w[mid]`.
///
/// Such an overlap with period `p` contains position `mid` together with
/// `mid + p` or `mid - p`. Extending the pair backward and forward with
/// longest-common-extension lengths gives a run of period `p`; the run holds
/// an overlap iff the two extensions add up to at least `p + 1`.
fn crossing_overlap<T: Eq + Copy>(
    w: &[T],
    lo: usize,
    mid: usize,
    hi: usize,
) -> Option<OverlapWitness> {
    let left = &w[lo..mid];
    let right = &w[mid..hi];
    let max_period = (hi - lo) / 2;

    let left_rev: Vec<T> = left.iter().rev().copied().collect();
    let z_left_rev = z_function(&left_rev);
    let z_right = z_function(right);

    // pairs (mid, mid + p)
    let span_rev: Vec<T> = w[lo..hi].iter().rev().copied().collect();
    let back_right = match_lengths(&left_rev, &z_left_rev, &span_rev);
    for p in 1..=max_period.min(right.len().saturating_sub(1)) {
        let forward = z_right[p];
        // common suffix of w[lo..mid] and w[lo..mid + p]
        let backward = back_right[hi - mid - p];
        if backward + forward > p {
            return Some(OverlapWitness::new(mid - backward, p));
        }
    }

    // pairs (mid - p, mid)
    let fwd_left = match_lengths(right, &z_right, &w[lo..hi]);
    for p in 1..=max_period.min(left.len()) {
        let forward = fwd_left[mid - p - lo];
        let backward = if p < left_rev.len() { z_left_rev[p] } else { 0 };
        if backward + forward > p {
            return Some(OverlapWitness::new(mid - p - backward, p));
        }
    }
    None
}

/// Shrinks a verified overlap to the smallest period `q` such that
/// `w[start .. start + 2q + 1]` is still an overlap.
fn normalize<T: Eq>(w: &[T], found: OverlapWitness) -> OverlapWitness {
    let factor = &w[found.start..found.start + found.len()];
    // prefix function: border[i] = longest proper border of factor[..=i]
    let mut border = vec![0usize; factor.len()];
    for i in 1..factor.len() {
        let mut k = border[i - 1];
        while k > 0 && factor[i] != factor[k] {
            k = border[k - 1];
        }
        if factor[i] == factor[k] {
            k += 1;
        }
        border[i] = k;
    }
    let period = (1..=found.period)
        .find(|&q| 2 * q + 1 - border[2 * q] <= q)
        .unwrap_or(found.period);
    OverlapWitness::new(found.start, period)
}

/// Divide-and-conquer overlap search in `O(|w| log |w|)`.
///
/// Finds an overlap iff [`find_overlap_naive`] does, though not necessarily
/// the same one. The reported witness has the smallest period among overlaps
/// starting at its position inside the factor first detected.
pub fn find_overlap_fast<T: Eq + Copy>(w: &[T]) -> Option<OverlapWitness> {
    let mut pending = vec![(0, w.len())];
    while let Some((lo, hi)) = pending.pop() {
        if hi - lo < 3 {
            continue;
        }
        let mid = lo + (hi - lo) / 2;
        if let Some(found) = crossing_overlap(w, lo, mid, hi) {
            debug_assert!(found.verify(w));
            return Some(normalize(w, found));
        }
        pending.push((mid, hi));
        pending.push((lo, mid));
    }
    None
}
