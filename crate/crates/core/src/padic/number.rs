//! Exact fixed-precision elements of Q_p.
//!
//! A nonzero value is stored in canonical form `p^valuation * unit` where the
//! unit part is an invertible residue known modulo `p^precision`. Precision is
//! relative (a count of known unit digits) and never increases through
//! arithmetic; full cancellation degrades a value to an
//! "O(p^bound)" remainder rather than silently inventing digits.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use super::norm::PNorm;

/// Default count of known unit digits for freshly constructed values.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("precision exhausted while {context} (quantity only bounded by p^-{bound})")]
    PrecisionExhausted { context: String, bound: i64 },
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("{0} is not prime or is < 3 (p = 2 is rejected)")]
    InvalidPrime(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse p-adic literal `{0}`: {1}")]
    Parse(String, String),
}

impl PadicError {
    pub(crate) fn exhausted(context: &str, bound: i64) -> Self {
        PadicError::PrecisionExhausted {
            context: context.to_string(),
            bound,
        }
    }
}

pub type PadicResult<T> = Result<T, PadicError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// Exact zero, norm 0.
    Zero,
    /// Known only to be divisible by p^bound (full cancellation happened).
    ZeroAtPrecision { bound: i64 },
    /// p^valuation * unit with unit invertible mod p, reduced mod p^precision.
    Unit {
        valuation: i64,
        unit: BigUint,
        precision: u32,
    },
}

/// An element of Q_p carried to a fixed number of significant p-adic digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

/// p^e as a big unsigned integer.
pub(crate) fn p_pow(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Largest e with p^e | n, together with n / p^e. n must be nonzero.
fn split_valuation(p: u64, n: &BigUint) -> (i64, BigUint) {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0i64;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if r.is_zero() {
            v += 1;
            rest = q;
        } else {
            return (v, rest);
        }
    }
}

/// Plain deterministic primality check; fine at the scales this library targets.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Validates the standing assumption p prime, p >= 3.
pub fn check_prime(p: u64) -> PadicResult<()> {
    if p >= 3 && is_prime(p) {
        Ok(())
    } else {
        Err(PadicError::InvalidPrime(p))
    }
}

impl PadicNumber {
    // ---- constructors ----------------------------------------------------

    pub fn zero(p: u64) -> Self {
        PadicNumber { p, repr: Repr::Zero }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        PadicNumber {
            p,
            repr: Repr::Unit {
                valuation: 0,
                unit: BigUint::one(),
                precision,
            },
        }
    }

    /// A value known only to satisfy |x|_p <= p^-bound.
    pub fn zero_at_precision(p: u64, bound: i64) -> Self {
        PadicNumber {
            p,
            repr: Repr::ZeroAtPrecision { bound },
        }
    }

    fn from_unit_parts(p: u64, valuation: i64, unit: BigUint, precision: u32) -> Self {
        debug_assert!(precision >= 1);
        debug_assert!(!(&unit % p).is_zero());
        let unit = unit % p_pow(p, precision);
        PadicNumber {
            p,
            repr: Repr::Unit {
                valuation,
                unit,
                precision,
            },
        }
    }

    /// Canonicalizes an integer numerator known exactly.
    pub fn from_bigint(value: &BigInt, p: u64, precision: u32) -> PadicResult<Self> {
        check_prime(p)?;
        if value.is_zero() {
            return Ok(PadicNumber::zero(p));
        }
        let mag = value.magnitude();
        let (v, rest) = split_valuation(p, mag);
        let modulus = p_pow(p, precision);
        let mut unit = rest % &modulus;
        if value.is_negative() {
            unit = &modulus - unit;
        }
        Ok(PadicNumber::from_unit_parts(p, v, unit, precision))
    }

    pub fn from_integer(value: i64, p: u64, precision: u32) -> PadicResult<Self> {
        PadicNumber::from_bigint(&BigInt::from(value), p, precision)
    }

    /// Canonical p-adic expansion of numerator/denominator, exact to
    /// `precision` unit digits. The denominator must be nonzero.
    pub fn from_rational(numerator: i64, denominator: i64, p: u64, precision: u32) -> PadicResult<Self> {
        check_prime(p)?;
        if denominator == 0 {
            return Err(PadicError::Domain("zero denominator".into()));
        }
        if numerator == 0 {
            return Ok(PadicNumber::zero(p));
        }
        let num = PadicNumber::from_integer(numerator, p, precision)?;
        let den = PadicNumber::from_integer(denominator, p, precision)?;
        num.div(&den)
    }

    // ---- accessors ---------------------------------------------------------

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when the value cannot be distinguished from zero at the carried
    /// precision (exact zero included).
    pub fn is_zero_at_precision(&self) -> bool {
        matches!(self.repr, Repr::Zero | Repr::ZeroAtPrecision { .. })
    }

    /// Valuation γ(x) of a value that is nonzero at precision.
    pub fn valuation(&self) -> PadicResult<i64> {
        match &self.repr {
            Repr::Unit { valuation, .. } => Ok(*valuation),
            Repr::Zero => Err(PadicError::Domain("valuation of exact zero is +infinity".into())),
            Repr::ZeroAtPrecision { bound } => {
                Err(PadicError::exhausted("reading the valuation", *bound))
            }
        }
    }

    /// Count of known unit digits (relative precision).
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { precision, .. } => Some(*precision),
            _ => None,
        }
    }

    /// The exponent a with: this value is known modulo p^a.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit {
                valuation,
                precision,
                ..
            } => Some(valuation + *precision as i64),
            Repr::ZeroAtPrecision { bound } => Some(*bound),
            Repr::Zero => None,
        }
    }

    /// Exact norm |x|_p = p^{-valuation}; fails on an at-precision zero, whose
    /// norm is only bounded above.
    pub fn norm(&self) -> PadicResult<PNorm> {
        match &self.repr {
            Repr::Zero => Ok(PNorm::Zero),
            Repr::Unit { valuation, .. } => Ok(PNorm::from_valuation(*valuation)),
            Repr::ZeroAtPrecision { bound } => {
                Err(PadicError::exhausted("computing an exact norm", *bound))
            }
        }
    }

    /// Smallest certain bound: |x|_p <= p^{-e} with e the returned exponent
    /// (exact for units, the O-bound for at-precision zeros, None for zero).
    pub fn norm_upper_exponent(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Unit { valuation, .. } => Some(*valuation),
            Repr::ZeroAtPrecision { bound } => Some(*bound),
        }
    }

    /// Decides |x|_p <= p^{-e}, raising PrecisionExhausted when the carried
    /// precision cannot answer.
    pub fn norm_le(&self, e: i64) -> PadicResult<bool> {
        match &self.repr {
            Repr::Zero => Ok(true),
            Repr::Unit { valuation, .. } => Ok(*valuation >= e),
            Repr::ZeroAtPrecision { bound } => {
                if *bound >= e {
                    Ok(true)
                } else {
                    Err(PadicError::exhausted("deciding a norm bound", *bound))
                }
            }
        }
    }

    /// Decides |x|_p < p^{-e}.
    pub fn norm_lt(&self, e: i64) -> PadicResult<bool> {
        self.norm_le(e + 1)
    }

    /// Unit digits (d0, d1, ...) base p, d0 != 0; empty for zeros.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Unit {
                unit, precision, ..
            } => {
                let mut out = Vec::with_capacity(*precision as usize);
                let pb = BigUint::from(self.p);
                let mut rest = unit.clone();
                for _ in 0..*precision {
                    let (q, r) = rest.div_rem(&pb);
                    out.push(r.to_u64().unwrap());
                    rest = q;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Unit part reduced modulo p^digits.
    pub fn unit_mod(&self, digits: u32) -> Option<BigUint> {
        match &self.repr {
            Repr::Unit { unit, precision, .. } => {
                let d = digits.min(*precision);
                Some(unit % p_pow(self.p, d))
            }
            _ => None,
        }
    }

    /// Leading unit digit (the residue class mod p), if nonzero at precision.
    pub fn leading_digit(&self) -> Option<u64> {
        match &self.repr {
            Repr::Unit { unit, .. } => (unit % self.p).to_u64(),
            _ => None,
        }
    }

    // ---- arithmetic --------------------------------------------------------

    fn check_same_prime(&self, other: &PadicNumber) -> PadicResult<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(PadicError::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: &PadicNumber) -> PadicResult<PadicNumber> {
        self.check_same_prime(other)?;
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => Ok(other.clone()),
            (_, Repr::Zero) => Ok(self.clone()),
            (Repr::ZeroAtPrecision { bound: b1 }, Repr::ZeroAtPrecision { bound: b2 }) => {
                Ok(PadicNumber::zero_at_precision(p, (*b1).min(*b2)))
            }
            (Repr::ZeroAtPrecision { bound }, Repr::Unit { .. }) => add_unit_obound(other, *bound),
            (Repr::Unit { .. }, Repr::ZeroAtPrecision { bound }) => add_unit_obound(self, *bound),
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: n1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    precision: n2,
                },
            ) => {
                let abs = (*v1 + *n1 as i64).min(*v2 + *n2 as i64);
                let vmin = (*v1).min(*v2);
                let window = abs - vmin;
                debug_assert!(window >= 1);
                let window = window as u32;
                let modulus = p_pow(p, window);
                let a = (u1 * p_pow(p, (*v1 - vmin) as u32)) % &modulus;
                let b = (u2 * p_pow(p, (*v2 - vmin) as u32)) % &modulus;
                let sum = (a + b) % &modulus;
                Ok(normalize_window(p, vmin, sum, window))
            }
        }
    }

    pub fn neg(&self) -> PadicNumber {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let modulus = p_pow(self.p, *precision);
                PadicNumber::from_unit_parts(self.p, *valuation, &modulus - unit, *precision)
            }
            _ => self.clone(),
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> PadicResult<PadicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNumber) -> PadicResult<PadicNumber> {
        self.check_same_prime(other)?;
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Ok(PadicNumber::zero(p)),
            (Repr::ZeroAtPrecision { bound: b1 }, Repr::ZeroAtPrecision { bound: b2 }) => {
                Ok(PadicNumber::zero_at_precision(p, b1 + b2))
            }
            (Repr::ZeroAtPrecision { bound }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::ZeroAtPrecision { bound }) => {
                Ok(PadicNumber::zero_at_precision(p, bound + valuation))
            }
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: n1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    precision: n2,
                },
            ) => {
                let precision = (*n1).min(*n2);
                let unit = (u1 * u2) % p_pow(p, precision);
                Ok(PadicNumber::from_unit_parts(p, v1 + v2, unit, precision))
            }
        }
    }

    pub fn div(&self, other: &PadicNumber) -> PadicResult<PadicNumber> {
        self.check_same_prime(other)?;
        let p = self.p;
        match &other.repr {
            Repr::Zero => Err(PadicError::DivisionByZero),
            Repr::ZeroAtPrecision { bound } => {
                Err(PadicError::exhausted("dividing by an at-precision zero", *bound))
            }
            Repr::Unit {
                valuation: v2,
                unit: u2,
                precision: n2,
            } => match &self.repr {
                Repr::Zero => Ok(PadicNumber::zero(p)),
                Repr::ZeroAtPrecision { bound } => {
                    Ok(PadicNumber::zero_at_precision(p, bound - v2))
                }
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    precision: n1,
                } => {
                    let precision = (*n1).min(*n2);
                    let modulus = p_pow(p, precision);
                    let inv = modular_inverse_unit(u2, p, precision);
                    let unit = (u1 * inv) % &modulus;
                    Ok(PadicNumber::from_unit_parts(p, v1 - v2, unit, precision))
                }
            },
        }
    }

    /// Integer power with exponent >= 0.
    pub fn pow(&self, k: u32) -> PadicNumber {
        if k == 0 {
            let precision = self.precision().unwrap_or(DEFAULT_PRECISION);
            return PadicNumber::one(self.p, precision);
        }
        match &self.repr {
            Repr::Zero => PadicNumber::zero(self.p),
            Repr::ZeroAtPrecision { bound } => {
                PadicNumber::zero_at_precision(self.p, bound * k as i64)
            }
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => {
                let modulus = p_pow(self.p, *precision);
                let unit = unit.modpow(&BigUint::from(k), &modulus);
                PadicNumber::from_unit_parts(self.p, valuation * k as i64, unit, *precision)
            }
        }
    }

    /// Multiply by p^e (exact rescaling).
    pub fn shift(&self, e: i64) -> PadicNumber {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::ZeroAtPrecision { bound } => {
                PadicNumber::zero_at_precision(self.p, bound + e)
            }
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => PadicNumber {
                p: self.p,
                repr: Repr::Unit {
                    valuation: valuation + e,
                    unit: unit.clone(),
                    precision: *precision,
                },
            },
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> PadicResult<PadicNumber> {
        let precision = self.precision().unwrap_or(DEFAULT_PRECISION);
        PadicNumber::one(self.p, precision).div(self)
    }

    /// Multiply by a plain integer.
    pub fn mul_integer(&self, c: i64) -> PadicResult<PadicNumber> {
        let prec = self.precision().unwrap_or(DEFAULT_PRECISION);
        let c = PadicNumber::from_integer(c, self.p, prec)?;
        self.mul(&c)
    }

    /// Truncate to at most `precision` known unit digits.
    pub fn truncate(&self, precision: u32) -> PadicNumber {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision: n,
            } if *n > precision => {
                PadicNumber::from_unit_parts(self.p, *valuation, unit.clone(), precision.max(1))
            }
            _ => self.clone(),
        }
    }

    /// True when |self - other|_p <= p^{-e} is certain at the carried precision.
    pub fn agrees_with(&self, other: &PadicNumber, e: i64) -> PadicResult<bool> {
        self.sub(other)?.norm_le(e)
    }
}

/// Unit `x` plus an unknown O(p^bound) tail.
fn add_unit_obound(x: &PadicNumber, bound: i64) -> PadicResult<PadicNumber> {
    match &x.repr {
        Repr::Unit {
            valuation,
            unit,
            precision,
        } => {
            if *valuation >= bound {
                // the O-term swallows everything known about x
                Ok(PadicNumber::zero_at_precision(x.p, bound))
            } else {
                let digits = (bound - valuation).min(*precision as i64) as u32;
                Ok(PadicNumber::from_unit_parts(
                    x.p,
                    *valuation,
                    unit.clone(),
                    digits,
                ))
            }
        }
        _ => unreachable!("caller guarantees a unit"),
    }
}

/// Reinterpret `value` (known mod p^window, scaled by p^base) in canonical form.
fn normalize_window(p: u64, base: i64, value: BigUint, window: u32) -> PadicNumber {
    if value.is_zero() {
        return PadicNumber::zero_at_precision(p, base + window as i64);
    }
    let (t, rest) = split_valuation(p, &value);
    debug_assert!((t as u32) < window);
    PadicNumber::from_unit_parts(p, base + t, rest, window - t as u32)
}

/// Inverse of a unit modulo p^precision.
fn modular_inverse_unit(u: &BigUint, p: u64, precision: u32) -> BigUint {
    let modulus = p_pow(p, precision);
    let a = BigInt::from_biguint(Sign::Plus, u % &modulus);
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    let x = e.x.mod_floor(&m);
    x.magnitude().clone()
}

// ---- display & serialization -------------------------------------------------

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::ZeroAtPrecision { bound } => write!(f, "O({}^{})", self.p, bound),
            Repr::Unit { valuation, .. } => {
                let digits: Vec<String> =
                    self.digits().iter().map(|d| d.to_string()).collect();
                write!(f, "{}^{} * ({})", self.p, valuation, digits.join(","))
            }
        }
    }
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match &self.repr {
            Repr::Zero => {
                let mut s = ser.serialize_struct("PadicNumber", 1)?;
                s.serialize_field("zero", &true)?;
                s.end()
            }
            Repr::ZeroAtPrecision { bound } => {
                let mut s = ser.serialize_struct("PadicNumber", 1)?;
                s.serialize_field("o_bound", bound)?;
                s.end()
            }
            Repr::Unit {
                valuation,
                precision,
                ..
            } => {
                let mut s = ser.serialize_struct("PadicNumber", 3)?;
                s.serialize_field("valuation", valuation)?;
                s.serialize_field("digits", &self.digits())?;
                s.serialize_field("precision", precision)?;
                s.end()
            }
        }
    }
}

// ---- parsing ------------------------------------------------------------------

impl PadicNumber {
    /// Parses a textual literal: a signed integer "a", a rational "a/b", or
    /// the digit form "p^v * (d0,d1,...)" with p matching the requested prime.
    pub fn parse(input: &str, p: u64, precision: u32) -> PadicResult<Self> {
        check_prime(p)?;
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| PadicError::Parse(input.to_string(), msg.to_string());
        if s.is_empty() {
            return Err(err("empty literal"));
        }
        if let Some((base, rest)) = s.split_once('^') {
            // digit form: p^v*(d0,d1,...)
            let lit_p: u64 = base.parse().map_err(|_| err("bad prime before ^"))?;
            if lit_p != p {
                return Err(err("literal prime does not match the requested prime"));
            }
            let (v_str, digit_str) = rest
                .split_once('*')
                .ok_or_else(|| err("expected p^v * (d0,d1,...)"))?;
            let valuation: i64 = v_str.parse().map_err(|_| err("bad valuation"))?;
            let digit_str = digit_str
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| err("digits must be parenthesized"))?;
            let mut unit = BigUint::zero();
            let mut scale = BigUint::one();
            let mut count = 0u32;
            for tok in digit_str.split(',') {
                let d: u64 = tok.parse().map_err(|_| err("bad digit"))?;
                if d >= p {
                    return Err(err("digit out of range"));
                }
                unit += &scale * d;
                scale *= p;
                count += 1;
            }
            if count == 0 || unit.is_zero() {
                return Err(err("digit form needs a nonzero digit list"));
            }
            if (&unit % p).is_zero() {
                return Err(err("leading digit d0 must be nonzero (canonical form)"));
            }
            Ok(PadicNumber::from_unit_parts(p, valuation, unit, count.min(precision)))
        } else if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.parse().map_err(|_| err("bad numerator"))?;
            let d: i64 = den.parse().map_err(|_| err("bad denominator"))?;
            PadicNumber::from_rational(n, d, p, precision)
        } else {
            let n: i64 = s.parse().map_err(|_| err("bad integer"))?;
            PadicNumber::from_integer(n, p, precision)
        }
    }
}
