use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// Value of the p-adic norm: either exactly zero or an exact power `p^exponent`.
///
/// The prime itself is not stored; norms coming from the same prime are
/// totally ordered, which is all the certificates need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PNorm {
    Zero,
    /// `p^exponent` (the exponent is `-valuation`).
    Power(i64),
}

impl PNorm {
    pub fn from_valuation(v: i64) -> Self {
        PNorm::Power(-v)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PNorm::Zero)
    }

    /// Exponent e with norm = p^e, or None for the zero norm.
    pub fn exponent(&self) -> Option<i64> {
        match self {
            PNorm::Zero => None,
            PNorm::Power(e) => Some(*e),
        }
    }

    pub fn mul(self, other: PNorm) -> PNorm {
        match (self, other) {
            (PNorm::Power(a), PNorm::Power(b)) => PNorm::Power(a + b),
            _ => PNorm::Zero,
        }
    }

    /// Norm of the reciprocal; zero has none.
    pub fn recip(self) -> Option<PNorm> {
        match self {
            PNorm::Zero => None,
            PNorm::Power(e) => Some(PNorm::Power(-e)),
        }
    }
}

impl PartialOrd for PNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PNorm::Zero, PNorm::Zero) => Ordering::Equal,
            (PNorm::Zero, PNorm::Power(_)) => Ordering::Less,
            (PNorm::Power(_), PNorm::Zero) => Ordering::Greater,
            (PNorm::Power(a), PNorm::Power(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Zero => write!(f, "0"),
            PNorm::Power(e) => write!(f, "p^{e}"),
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            PNorm::Zero => ser.serialize_none(),
            PNorm::Power(e) => ser.serialize_i64(*e),
        }
    }
}
