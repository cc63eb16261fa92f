//! Root existence and extraction in Q_p: the solution set Sol_p(x^k + q - 1)
//! of leading residues, its cardinality kappa_p, and k-th roots of arbitrary
//! elements by Hensel/Newton lifting.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::padic::{check_prime, p_pow, PadicError, PadicNumber};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("p divides q: |q|_p = 1 is required")]
    QDivisibleByP,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Leading residues of roots of x^k = 1 - q.
///
/// For s = v_p(q-1) = 0 these are the xi in 1..p-1 with xi^k = 1 - q (mod p);
/// for s > 0 with k | s they solve the scaled congruence
/// p^s xi^k + q - 1 = 0 (mod p^{s+1}), i.e. xi^k = (1-q)/p^s (mod p).
/// For s > 0 with k not dividing s the set is empty (a root would need the
/// fractional norm p^{-s/k}).
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SolSet {
    pub s: i64,
    pub kappa: usize,
    pub residues: Vec<u64>,
    #[serde(skip)]
    pub scale_ok: bool,
}

/// v_p of a positive integer.
fn int_valuation(p: u64, mut n: u64) -> i64 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Sol_p(x^k + q - 1) for an integer q >= 2 with p not dividing q.
pub fn solp(p: u64, q: u64, k: u32) -> Result<SolSet, RootError> {
    check_prime(p)?;
    if q % p == 0 {
        return Err(RootError::QDivisibleByP);
    }
    debug_assert!(q >= 2 && k >= 1);
    let s = int_valuation(p, q - 1);
    if s > 0 && s % k as i64 != 0 {
        return Ok(SolSet {
            s,
            kappa: 0,
            residues: Vec::new(),
            scale_ok: false,
        });
    }
    // target residue for xi^k mod p: 1-q for s = 0, (1-q)/p^s for s > 0
    let target: u64 = if s == 0 {
        (p - (q - 1) % p) % p
    } else {
        let w = ((q - 1) / p.pow(s as u32)) % p; // unit part of q-1
        (p - w) % p
    };
    if target == 0 {
        // cannot happen: q-1 = p^s * unit
        unreachable!("target residue is a unit");
    }
    let mut residues = Vec::new();
    for xi in 1..p {
        if mod_pow_u64(xi, k as u64, p) == target {
            residues.push(xi);
        }
    }
    Ok(SolSet {
        s,
        kappa: residues.len(),
        residues,
        scale_ok: true,
    })
}

fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// All k-th roots of `a` in Q_p, one per liftable initial residue, each
/// carried to the justified precision. Empty when no root exists.
///
/// The valuation must be divisible by k; the unit part is lifted by Newton
/// iteration from every simple root mod p, or — when p | k — from every
/// residue mod p^{2m+1} (m = v_p(k)) satisfying the strong criterion
/// |f(a)|_p < |f'(a)|_p^2.
pub fn kth_roots(a: &PadicNumber, k: u32) -> Result<Vec<PadicNumber>, RootError> {
    debug_assert!(k >= 1);
    let p = a.prime();
    if a.is_exact_zero() {
        return Ok(vec![PadicNumber::zero(p)]);
    }
    let precision = a.precision().ok_or_else(|| {
        PadicError::exhausted("extracting a root of an at-precision zero", 0)
    })?;
    let val = a.valuation()?;
    if val % k as i64 != 0 {
        return Ok(Vec::new());
    }
    let m = int_valuation(p, k as u64) as u32;
    if precision <= 2 * m + 1 {
        return Err(RootError::Padic(PadicError::exhausted(
            "separating Hensel lifts (raise the working precision)",
            precision as i64,
        )));
    }

    // Work on the unit part with integer arithmetic mod p^work.
    let work = precision + 2 * m + 4;
    let u = a.unit_mod(precision).unwrap();

    let seed_digits = 2 * m + 1;
    let seed_modulus = p_pow(p, seed_digits);
    let u_seed = &u % &seed_modulus;

    let mut seeds: Vec<BigUint> = Vec::new();
    let mut seen_mod_p: Vec<u64> = Vec::new();
    let mut cursor = BigUint::one();
    while cursor < seed_modulus {
        if !(&cursor % p).is_zero()
            && cursor.modpow(&BigUint::from(k), &seed_modulus) == u_seed
        {
            // distinct roots differ mod p, so one seed per residue class
            let r0 = (&cursor % p).to_u64().unwrap();
            if !seen_mod_p.contains(&r0) {
                seen_mod_p.push(r0);
                seeds.push(cursor.clone());
            }
        }
        cursor += 1u32;
    }

    let mut roots = Vec::new();
    for seed in seeds {
        if let Some(root_unit) = newton_lift(&seed, &u, k, p, work, m) {
            // a k-th root is determined one digit less per factor of p in k
            let root_prec = precision - m;
            let x = PadicNumber::from_bigint(
                &num_bigint::BigInt::from(root_unit % p_pow(p, root_prec)),
                p,
                root_prec,
            )?
            .shift(val / k as i64);
            // Defensive residual check at the claimed precision.
            let residual = x.pow(k).sub(a)?;
            debug_assert!(residual.norm_le(val + (root_prec as i64) - m as i64 - 1).unwrap_or(true));
            roots.push(x);
        }
    }
    // deterministic order: by leading digit
    roots.sort_by_key(|r| r.leading_digit().unwrap_or(0));
    Ok(roots)
}

/// Some k-th root of `a`, if one exists.
pub fn kth_root(a: &PadicNumber, k: u32) -> Result<Option<PadicNumber>, RootError> {
    Ok(kth_roots(a, k)?.into_iter().next())
}

/// Newton iteration x <- x - (x^k - u)/(k x^{k-1}) on units mod p^work.
/// Converges from the strong-criterion seed; returns None if it fails to.
fn newton_lift(
    seed: &BigUint,
    u: &BigUint,
    k: u32,
    p: u64,
    work: u32,
    m: u32,
) -> Option<BigUint> {
    let modulus = p_pow(p, work);
    let kbig = BigUint::from(k);
    let mut x = seed.clone();
    // quadratic convergence: the residual valuation roughly doubles per step
    let max_steps = 64 - (work as u64).leading_zeros() as usize + 6;
    for _ in 0..max_steps {
        let xk = x.modpow(&kbig, &modulus);
        let fx = (&xk + (&modulus - (u % &modulus))) % &modulus;
        if fx.is_zero() {
            break;
        }
        // f'(x) = k x^{k-1} = p^m * (unit); divide exactly by p^m
        let deriv = (&kbig * x.modpow(&BigUint::from(k - 1), &modulus)) % &modulus;
        let pm = p_pow(p, m);
        let (dq, dr) = num_integer::Integer::div_rem(&deriv, &pm);
        if !dr.is_zero() {
            return None;
        }
        let (fq, fr) = num_integer::Integer::div_rem(&fx, &pm);
        if !fr.is_zero() {
            return None; // strong criterion violated: f(x) not divisible by p^m
        }
        let red_modulus = p_pow(p, work - m);
        let dq = &dq % &red_modulus;
        if (&dq % p).is_zero() {
            return None;
        }
        let inv = mod_inverse(&dq, &red_modulus)?;
        let step = (fq % &red_modulus) * inv % &red_modulus;
        // x - step, lifted back mod p^work
        let step = step % &modulus;
        let next = (&x + (&modulus - step)) % &modulus;
        if next == x {
            break;
        }
        x = next;
        if (&x % p).is_zero() {
            return None;
        }
    }
    // accept only if the residual is beyond working precision margin
    let xk = x.modpow(&kbig, &modulus);
    let fx = (&xk + (&modulus - (u % &modulus))) % &modulus;
    let tolerance = p_pow(p, work - 2 * m - 2);
    if (fx % tolerance).is_zero() {
        Some(x)
    } else {
        None
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m).magnitude().clone())
}
