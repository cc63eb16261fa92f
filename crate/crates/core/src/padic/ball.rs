use serde::Serialize;

use super::number::{PadicNumber, PadicResult};

/// Closed ball {x : |x - center|_p <= p^{-radius_exponent}}.
///
/// Closed is the working convention throughout: norm values are discrete
/// powers of p, and every containment bound the certificates rely on is
/// non-strict at an integer exponent.
#[derive(Debug, Clone, Serialize)]
pub struct Ball {
    pub center: PadicNumber,
    pub radius_exponent: i64,
}

impl Ball {
    pub fn new(center: PadicNumber, radius_exponent: i64) -> Self {
        Ball {
            center,
            radius_exponent,
        }
    }

    /// Ultrametric membership test; undecidable differences surface as
    /// PrecisionExhausted instead of a guess.
    pub fn contains(&self, x: &PadicNumber) -> PadicResult<bool> {
        x.sub(&self.center)?.norm_le(self.radius_exponent)
    }

    /// Two balls of the same radius exponent are equal or disjoint; this
    /// decides which.
    pub fn same_ball(&self, other: &Ball) -> PadicResult<bool> {
        debug_assert_eq!(self.radius_exponent, other.radius_exponent);
        self.contains(&other.center)
    }

    /// Strict separation |c1 - c2|_p > p^{-m} of same-radius balls.
    pub fn disjoint_from(&self, other: &Ball) -> PadicResult<bool> {
        Ok(!self.same_ball(other)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(x: i64) -> PadicNumber {
        PadicNumber::from_integer(x, 5, 16).unwrap()
    }

    #[test]
    fn membership_is_ultrametric() {
        let b = Ball::new(num(9), 2);
        assert!(b.contains(&num(9 + 25)).unwrap());
        assert!(b.contains(&num(9 + 50)).unwrap());
        assert!(!b.contains(&num(14)).unwrap());
        // any member recenters the same ball
        let recentered = Ball::new(num(9 + 25), 2);
        assert!(recentered.contains(&num(9)).unwrap());
    }

    #[test]
    fn same_radius_balls_equal_or_disjoint() {
        let b1 = Ball::new(num(9), 2);
        let b2 = Ball::new(num(34), 2);
        let b3 = Ball::new(num(14), 2);
        assert!(b1.same_ball(&b2).unwrap());
        assert!(b1.disjoint_from(&b3).unwrap());
    }
}
