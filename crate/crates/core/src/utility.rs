//! Efficiency utility: reciprocal of accumulated cost over the extended
//! non-negative reals, with `∞` for cost-free success and `0` for failure.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Utility {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("action cost {0} must be positive")]
pub struct NonPositiveCost(pub f64);

impl Utility {
    /// `U(Success)`.
    pub const SUCCESS: Utility = Utility::Infinite;
    /// `U(Failure)`.
    pub const FAILURE: Utility = Utility::Finite(0.0);

    pub fn finite(v: f64) -> Self {
        debug_assert!(
            v >= 0.0 && v.is_finite(),
            "utility must be finite and non-negative: {v}"
        );
        Utility::Finite(v)
    }

    /// Efficiency of a single action outcome: `1 / cost`.
    pub fn from_cost(cost: f64) -> Result<Self, NonPositiveCost> {
        if cost > 0.0 && cost.is_finite() {
            Ok(Utility::Finite(1.0 / cost))
        } else {
            Err(NonPositiveCost(cost))
        }
    }

    /// Efficiency of a total cost; zero cost is a cost-free success.
    pub fn from_total_cost(cost: f64) -> Self {
        if cost == 0.0 {
            Utility::Infinite
        } else {
            Utility::Finite(1.0 / cost)
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Utility::Infinite)
    }

    pub fn value(self) -> f64 {
        match self {
            Utility::Finite(v) => v,
            Utility::Infinite => f64::INFINITY,
        }
    }

    /// Sequential composition `e1 ⊕ e2`: costs add, so efficiencies combine
    /// like parallel resistors; `∞` is the identity and `0` absorbs.
    pub fn compose(self, other: Utility) -> Utility {
        match (self, other) {
            (Utility::Infinite, e) | (e, Utility::Infinite) => e,
            (Utility::Finite(a), Utility::Finite(b)) => {
                if a == 0.0 || b == 0.0 {
                    Utility::Finite(0.0)
                } else {
                    Utility::Finite(a * b / (a + b))
                }
            }
        }
    }

    /// Finite stand-in for statistics that cannot average `∞`.
    pub fn clamped(self, cap: f64) -> f64 {
        match self {
            Utility::Finite(v) => v.min(cap),
            Utility::Infinite => cap,
        }
    }
}

impl std::ops::Add for Utility {
    type Output = Utility;

    /// `⊕`.
    fn add(self, rhs: Utility) -> Utility {
        self.compose(rhs)
    }
}

impl PartialOrd for Utility {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::Finite(v) => write!(f, "{v}"),
            Utility::Infinite => f.write_str("inf"),
        }
    }
}

/// Folds a sequence of step efficiencies with `⊕`.
pub fn compose_all<I: IntoIterator<Item = Utility>>(items: I) -> Utility {
    items.into_iter().fold(Utility::SUCCESS, Utility::compose)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_left_identity() {
        assert_eq!(
            Utility::Infinite.compose(Utility::Finite(5.0)),
            Utility::Finite(5.0)
        );
    }

    #[test]
    fn zero_absorbs_finite() {
        for e in [0.1, 1.0, 7.5, 1e6] {
            assert_eq!(
                Utility::FAILURE.compose(Utility::Finite(e)),
                Utility::FAILURE
            );
            assert_eq!(
                Utility::Finite(e).compose(Utility::FAILURE),
                Utility::FAILURE
            );
        }
        assert_eq!(
            Utility::FAILURE.compose(Utility::Infinite),
            Utility::FAILURE
        );
    }

    #[test]
    fn equal_halves() {
        assert_eq!(
            Utility::Finite(2.0).compose(Utility::Finite(2.0)),
            Utility::Finite(1.0)
        );
    }

    #[test]
    fn action_costs() {
        assert_eq!(Utility::from_cost(2.0).unwrap(), Utility::Finite(0.5));
        assert_eq!(Utility::from_cost(1.0).unwrap(), Utility::Finite(1.0));
        assert!(Utility::from_cost(0.0).is_err());
        assert!(Utility::from_cost(-3.0).is_err());
    }

    #[test]
    fn two_then_three() {
        let u = compose_all([Utility::Finite(0.5), Utility::Finite(1.0 / 3.0)]);
        assert!((u.value() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn ordering_puts_infinity_on_top() {
        assert!(Utility::Infinite > Utility::Finite(1e300));
        assert!(Utility::Finite(0.0) < Utility::Finite(1e-300));
    }
}
