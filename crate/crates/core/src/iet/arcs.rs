use std::cmp::Ordering;

use crate::scalar::{ExactReal, ScalarError};

/// A finite union of half-open arcs `[a, b)` with `0 ≤ a < b ≤ 1`, kept
/// sorted, disjoint and with touching arcs merged. An arc crossing 0 is
/// stored as two pieces `[a, 1)` and `[0, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcSet<S> {
    arcs: Vec<(S, S)>,
}

impl<S: ExactReal> ArcSet<S> {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![(S::zero(), S::unit())],
        }
    }

    /// Normalizes an arbitrary list of non-empty, pairwise disjoint intervals.
    pub fn from_intervals(mut intervals: Vec<(S, S)>) -> Result<Self, ScalarError> {
        intervals.retain(|(a, b)| a != b);
        try_sort_by_key(&mut intervals, |iv| &iv.0)?;
        let mut arcs: Vec<(S, S)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match arcs.last_mut() {
                Some(last) if last.1 == a => last.1 = b,
                _ => arcs.push((a, b)),
            }
        }
        Ok(ArcSet { arcs })
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].0.is_zero() && self.arcs[0].1 == S::unit()
    }

    pub fn measure(&self) -> S {
        self.arcs.iter().fold(S::zero(), |acc, (a, b)| acc + b.sub_ref(a))
    }

    pub fn contains(&self, x: &S) -> Result<bool, ScalarError> {
        for (a, b) in &self.arcs {
            if a.try_le(x)? && x.try_lt(b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn union(&self, other: &Self) -> Result<Self, ScalarError> {
        let mut all = self.arcs.clone();
        all.extend(other.arcs.iter().cloned());
        ArcSet::from_intervals(all)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = S::zero();
        for (a, b) in &self.arcs {
            if *a != cursor {
                out.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor != S::unit() {
            out.push((cursor, S::unit()));
        }
        ArcSet { arcs: out }
    }

    /// Interior boundary points in `(0, 1)`.
    pub fn boundaries(&self) -> Vec<S> {
        let mut pts = Vec::new();
        for (a, b) in &self.arcs {
            if !a.is_zero() {
                pts.push(a.clone());
            }
            if *b != S::unit() {
                pts.push(b.clone());
            }
        }
        pts
    }

    /// The set as one circular arc `(start, length)` when it is connected on
    /// the circle and not the whole circle.
    pub fn as_circular_arc(&self) -> Option<(S, S)> {
        match self.arcs.as_slice() {
            [(a, b)] if !self.is_full() => Some((a.clone(), b.sub_ref(a))),
            [(a0, b0), (a1, b1)] if a0.is_zero() && *b1 == S::unit() => Some((a1.clone(), b0.add_ref(&b1.sub_ref(a1)))),
            _ => None,
        }
    }
}

/// Sorts by an exact key, surfacing the first comparison failure.
pub(crate) fn try_sort_by_key<T, S: ExactReal>(items: &mut [T], key: impl Fn(&T) -> &S) -> Result<(), ScalarError> {
    let mut failure = None;
    items.sort_by(|x, y| match key(x).try_cmp(key(y)) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Sorts and removes duplicates.
pub(crate) fn sorted_unique<S: ExactReal>(mut pts: Vec<S>) -> Result<Vec<S>, ScalarError> {
    try_sort_by_key(&mut pts, |x| x)?;
    pts.dedup();
    Ok(pts)
}
