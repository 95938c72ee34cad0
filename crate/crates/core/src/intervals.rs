//! Finite unions of closed real intervals.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Builds a normalised set: empty pieces dropped, sorted, overlapping or
    /// touching pieces merged.
    pub fn new(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(a, b)| b >= a && a.is_finite() && b.is_finite());
        pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn single(a: f64, b: f64) -> Self {
        Self::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Length of `self ∩ [a, b]`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi.min(b) - lo.max(a)).max(0.0))
            .sum()
    }

    pub fn within(&self, a: f64, b: f64, tol: f64) -> bool {
        self.intervals
            .iter()
            .all(|&(lo, hi)| lo >= a - tol && hi <= b + tol)
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|i| i.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.intervals.last().map(|i| i.1)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{a},{b}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_measures() {
        let s = IntervalSet::new(vec![(3.0, 4.0), (0.0, 1.0), (0.5, 2.0), (5.0, 4.0)]);
        assert_eq!(s.intervals(), &[(0.0, 2.0), (3.0, 4.0)]);
        assert_eq!(s.measure(), 3.0);
        assert!(s.contains(3.5) && !s.contains(2.5));
        assert_eq!(s.overlap(1.5, 3.5), 1.0);
    }
}
