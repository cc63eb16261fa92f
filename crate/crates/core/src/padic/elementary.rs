//! The p-adic exponential/logarithm pair and the group E_p it generates.
//!
//! E_p is the range of exp_p; for p >= 3 it is the closed ball
//! {x : |x - 1|_p <= 1/p} = 1 + pZ_p, and exp_p/log_p are mutually inverse
//! isometries between pZ_p and E_p.

use super::number::{PadicError, PadicNumber, PadicResult, DEFAULT_PRECISION};

/// floor(log_p(n)) for n >= 1.
fn floor_log_p(p: u64, n: i64) -> i64 {
    let mut e = 0;
    let mut m = n as u64;
    while m >= p {
        m /= p;
        e += 1;
    }
    e
}

/// exp_p(h) = sum h^n / n!, convergent for |h|_p <= p^{-1} when p >= 3.
///
/// The partial sum is carried until the remaining tail drops below the
/// absolute precision of the input, which the result inherits.
pub fn exp_p(h: &PadicNumber) -> PadicResult<PadicNumber> {
    let p = h.prime();
    if h.is_exact_zero() {
        return Ok(PadicNumber::one(p, DEFAULT_PRECISION));
    }
    if !h.norm_le(1)? {
        return Err(PadicError::Domain(
            "exp_p requires |h|_p <= p^-1".into(),
        ));
    }
    let target = h
        .absolute_precision()
        .expect("nonzero input has an absolute precision");
    if h.precision().is_none() {
        // exp(O(p^b)) = 1 + O(p^b)
        let one = PadicNumber::one(p, target.max(1) as u32);
        let tail = PadicNumber::zero_at_precision(p, target);
        return one.add(&tail);
    }
    let v = h.valuation()?;
    let work = target.max(1) as u32 + 8;
    let mut sum = PadicNumber::one(p, work);
    let mut term = PadicNumber::one(p, work);
    let mut n: i64 = 0;
    loop {
        n += 1;
        let nn = PadicNumber::from_integer(n, p, work)?;
        term = term.mul(h)?.div(&nn)?;
        // v(h^m/m!) >= m*v - (m-1)/(p-1), strictly increasing in m for p >= 3;
        // once the lower bound clears the target every later term does too
        if n * v - (n - 1) / (p as i64 - 1) >= target {
            break;
        }
        sum = sum.add(&term)?;
    }
    Ok(sum)
}

/// log_p(x) = sum (-1)^{n+1} (x-1)^n / n for x in E_p.
///
/// Witnesses the surjectivity of exp_p: the result h satisfies
/// |h|_p <= p^{-1} and exp_p(h) = x at the carried precision.
pub fn log_p(x: &PadicNumber) -> PadicResult<PadicNumber> {
    let p = x.prime();
    if !in_ep(x)? {
        return Err(PadicError::Domain(
            "log_p requires its argument in E_p (|x-1|_p <= p^-1)".into(),
        ));
    }
    let one = PadicNumber::one(p, x.precision().unwrap_or(DEFAULT_PRECISION));
    let u = x.sub(&one)?;
    if u.is_zero_at_precision() {
        // log(1 + O(p^b)) = O(p^b)
        return Ok(match u.absolute_precision() {
            Some(b) => PadicNumber::zero_at_precision(p, b),
            None => PadicNumber::zero(p),
        });
    }
    let target = u.absolute_precision().unwrap();
    let t = u.valuation()?;
    let work = target.max(1) as u32 + 8;
    let u = u.truncate(work);
    let mut sum = PadicNumber::zero(p);
    let mut power = PadicNumber::one(p, work);
    let mut n: i64 = 0;
    loop {
        n += 1;
        power = power.mul(&u)?;
        let nn = PadicNumber::from_integer(n, p, work)?;
        let term = power.div(&nn)?;
        // v((x-1)^m/m) >= m*t - log_p(m), increasing in m; same tail argument
        if n * t - floor_log_p(p, n) >= target {
            break;
        }
        sum = if n % 2 == 1 {
            sum.add(&term)?
        } else {
            sum.sub(&term)?
        };
    }
    Ok(sum)
}

/// Membership in E_p = {x : |x - 1|_p <= p^{-1}}.
pub fn in_ep(x: &PadicNumber) -> PadicResult<bool> {
    if x.is_zero_at_precision() {
        return Ok(false);
    }
    let one = PadicNumber::one(x.prime(), x.precision().unwrap_or(DEFAULT_PRECISION));
    x.sub(&one)?.norm_le(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PNorm;
    use num_bigint::BigUint;

    fn num(x: i64, p: u64) -> PadicNumber {
        PadicNumber::from_integer(x, p, 24).unwrap()
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = exp_p(&PadicNumber::zero(5)).unwrap();
        assert_eq!(e.valuation().unwrap(), 0);
        assert_eq!(e.unit_mod(8).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn exp_of_p_leading_digits() {
        // terms n >= 2 of exp_5(5) have valuation >= 2, so exp_5(5) = 1 + 5 (mod 25)
        let e = exp_p(&num(5, 5)).unwrap();
        assert_eq!(e.unit_mod(2).unwrap(), BigUint::from(6u32));
        assert!(in_ep(&e).unwrap());
    }

    #[test]
    fn exp_rejects_units() {
        assert!(exp_p(&num(1, 5)).is_err());
        assert!(exp_p(&num(3, 7)).is_err());
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = log_p(&num(1, 7)).unwrap();
        assert!(l.is_zero_at_precision());
    }

    #[test]
    fn exp_log_round_trip() {
        let h = num(5, 5);
        let x = exp_p(&h).unwrap();
        let back = log_p(&x).unwrap();
        assert!(back.agrees_with(&h, 20).unwrap());

        let y = num(1 + 7 * 3, 7);
        let l = log_p(&y).unwrap();
        assert!(l.norm_le(1).unwrap());
        let fwd = exp_p(&l).unwrap();
        assert!(fwd.agrees_with(&y, 20).unwrap());
    }

    #[test]
    fn log_series_oracle_mod_p4() {
        // independent oracle: partial sum of sum (-1)^{n+1} 7^n / n as an exact
        // rational a/b, reduced mod 7^4 (terms with n > 6 have valuation > 4)
        let (mut a, mut b): (i128, i128) = (0, 1); // running sum a/b
        for n in 1..=6i128 {
            let term_num: i128 = 7i128.pow(n as u32) * if n % 2 == 1 { 1 } else { -1 };
            a = a * n + term_num * b;
            b *= n;
        }
        let m = 7i128.pow(4);
        let bm = ((b % m) + m) % m;
        let inv = (1..m).find(|x| (bm * x) % m == 1).unwrap();
        let expected = ((((a % m) + m) % m) * inv) % m;

        let l = log_p(&num(8, 7)).unwrap();
        assert_eq!(l.valuation().unwrap(), 1);
        // value mod 7^4 is 7 * (unit mod 7^3)
        let unit: u64 = l.unit_mod(3).unwrap().try_into().unwrap();
        assert_eq!((7 * unit as i128) % m, expected);
    }

    #[test]
    fn ep_membership_examples() {
        assert!(in_ep(&num(1, 5)).unwrap());
        assert!(in_ep(&num(6, 5)).unwrap());
        assert!(!in_ep(&num(2, 5)).unwrap());
        assert!(!in_ep(&num(5, 5)).unwrap());
    }

    #[test]
    fn exp_is_homomorphism() {
        let a = num(10, 5);
        let b = num(35, 5);
        let lhs = exp_p(&a).unwrap().mul(&exp_p(&b).unwrap()).unwrap();
        let rhs = exp_p(&a.add(&b).unwrap()).unwrap();
        assert!(lhs.agrees_with(&rhs, 20).unwrap());
    }

    #[test]
    fn exp_lands_in_ep_with_unit_norm_offset() {
        let h = num(3 * 7, 7);
        let e = exp_p(&h).unwrap();
        assert!(in_ep(&e).unwrap());
        let one = num(1, 7);
        assert_eq!(e.sub(&one).unwrap().norm().unwrap(), PNorm::Power(-1));
    }
}
