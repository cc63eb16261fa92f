//! Seeded random sampling of p-adic values. All sampling is deterministic
//! given the seed, so certificates that quote sampled witnesses reproduce
//! byte-for-byte.
//!
//! Samples are exact integers (their expansions end in zeros), so they carry
//! whatever claimed precision the caller asks for; `random_digits` only
//! controls how much of the low end is randomized.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::padic::{Ball, PadicNumber};

pub struct Sampler {
    rng: ChaCha12Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    fn random_int(&mut self, p: u64, random_digits: u32) -> BigInt {
        let mut value = BigInt::from(0);
        let mut scale = BigInt::from(1);
        for _ in 0..random_digits {
            let d = self.rng.gen_range(0..p);
            value += &scale * d;
            scale *= p;
        }
        value
    }

    /// Random p-adic integer with `random_digits` sampled digits (may be
    /// divisible by p, may even be zero), carried to `precision`.
    pub fn zp(&mut self, p: u64, random_digits: u32, precision: u32) -> PadicNumber {
        let value = self.random_int(p, random_digits);
        PadicNumber::from_bigint(&value, p, precision).expect("valid prime")
    }

    /// Random unit of Z_p (valuation zero).
    pub fn unit(&mut self, p: u64, random_digits: u32, precision: u32) -> PadicNumber {
        let d0 = self.rng.gen_range(1..p);
        let tail = self.random_int(p, random_digits.saturating_sub(1));
        let value = BigInt::from(d0) + tail * BigInt::from(p);
        PadicNumber::from_bigint(&value, p, precision).expect("valid prime")
    }

    /// Random element of E_p = 1 + pZ_p.
    pub fn ep(&mut self, p: u64, random_digits: u32, precision: u32) -> PadicNumber {
        let tail = self.random_int(p, random_digits.saturating_sub(1));
        let value = BigInt::from(1) + tail * BigInt::from(p);
        PadicNumber::from_bigint(&value, p, precision).expect("valid prime")
    }

    /// Random element of Q_p with valuation drawn uniformly from the range.
    pub fn qp(
        &mut self,
        p: u64,
        random_digits: u32,
        precision: u32,
        val_min: i64,
        val_max: i64,
    ) -> PadicNumber {
        let v = self.rng.gen_range(val_min..=val_max);
        self.unit(p, random_digits, precision).shift(v)
    }

    /// Random point of a closed ball, center + p^m * Z_p; inherits the
    /// center's precision.
    pub fn in_ball(&mut self, ball: &Ball, random_digits: u32) -> PadicNumber {
        let p = ball.center.prime();
        let precision = ball.center.precision().unwrap_or(crate::padic::DEFAULT_PRECISION);
        let offset = self
            .zp(p, random_digits, precision)
            .shift(ball.radius_exponent);
        ball.center.add(&offset).expect("same prime")
    }

    /// A distinct pair from the given generator.
    pub fn distinct_pair<F>(&mut self, mut gen: F) -> (PadicNumber, PadicNumber)
    where
        F: FnMut(&mut Self) -> PadicNumber,
    {
        loop {
            let x = gen(self);
            let y = gen(self);
            if let Ok(d) = x.sub(&y) {
                if !d.is_zero_at_precision() {
                    return (x, y);
                }
            }
        }
    }

    pub fn gen_range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.gen_range(lo..hi)
    }
}
