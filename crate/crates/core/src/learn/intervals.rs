use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("need at least K = {k} values, got {n}")]
    TooFew { k: usize, n: usize },
    #[error("K must be at least 1")]
    ZeroK,
    #[error("utility values must be finite")]
    NonFinite,
}

/// Equal-frequency partition of observed utilities into `K` intervals.
///
/// Interval `j` is `[edges[j], edges[j+1])`, the last one closed at `max`.
/// Repeated values can make lower edges coincide; such intervals receive no
/// values and are flagged `empty`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalMap {
    pub edges: Vec<f64>,
    pub max: f64,
    pub counts: Vec<usize>,
    pub empty: Vec<bool>,
}

impl IntervalMap {
    /// Lower edge of interval `j` is the value at rank `floor(j·n/K)`.
    pub fn fit(us: &[f64], k: usize) -> Result<Self, IntervalError> {
        if k == 0 {
            return Err(IntervalError::ZeroK);
        }
        if us.len() < k {
            return Err(IntervalError::TooFew { k, n: us.len() });
        }
        if us.iter().any(|u| !u.is_finite()) {
            return Err(IntervalError::NonFinite);
        }
        let mut sorted = us.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let edges: Vec<f64> = (0..k).map(|j| sorted[j * n / k]).collect();
        let mut map = IntervalMap {
            edges,
            max: sorted[n - 1],
            counts: vec![0; k],
            empty: vec![false; k],
        };
        for u in &sorted {
            let j = map.interval(*u);
            map.counts[j] += 1;
        }
        map.empty = map.counts.iter().map(|c| *c == 0).collect();
        Ok(map)
    }

    pub fn k(&self) -> usize {
        self.edges.len()
    }

    /// Last interval whose lower edge is at most `u`; values below the first
    /// edge map to interval 0.
    pub fn interval(&self, u: f64) -> usize {
        self.edges.partition_point(|e| *e <= u).saturating_sub(1)
    }

    pub fn upper(&self, j: usize) -> f64 {
        self.edges.get(j + 1).copied().unwrap_or(self.max)
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        (self.edges[j] + self.upper(j)) / 2.0
    }

    pub fn decode(&self, j: usize) -> f64 {
        self.midpoint(j.min(self.k() - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_values_four_intervals() {
        let us: Vec<f64> = (1..=8).map(f64::from).collect();
        let m = IntervalMap::fit(&us, 4).unwrap();
        assert_eq!(m.counts, vec![2, 2, 2, 2]);
        assert_eq!(m.edges, vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn single_interval() {
        let m = IntervalMap::fit(&[0.3, 0.1, 0.9], 1).unwrap();
        assert_eq!(m.counts, vec![3]);
        assert_eq!(m.decode(0), 0.5);
    }

    #[test]
    fn repeated_values_leave_flagged_empty_intervals() {
        let m = IntervalMap::fit(&[0.5; 6], 3).unwrap();
        assert_eq!(m.counts, vec![0, 0, 6]);
        assert_eq!(m.empty, vec![true, true, false]);
    }

    #[test]
    fn midpoint_of_interval() {
        let m = IntervalMap {
            edges: vec![0.0, 0.2, 0.4],
            max: 1.0,
            counts: vec![1, 1, 1],
            empty: vec![false; 3],
        };
        assert!((m.decode(1) - 0.3).abs() < 1e-12);
        assert_eq!(m.interval(0.25), 1);
        assert_eq!(m.interval(-1.0), 0);
        assert_eq!(m.interval(5.0), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            IntervalMap::fit(&[1.0], 2),
            Err(IntervalError::TooFew { k: 2, n: 1 })
        );
        assert_eq!(IntervalMap::fit(&[1.0], 0), Err(IntervalError::ZeroK));
        assert_eq!(
            IntervalMap::fit(&[f64::INFINITY], 1),
            Err(IntervalError::NonFinite)
        );
    }
}
