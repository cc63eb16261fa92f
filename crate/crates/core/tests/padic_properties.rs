//! Property tests for the field axioms the certificates lean on: the strong
//! triangle inequality, norm multiplicativity, the group structure of E_p,
//! and the exp/log inversion.

use proptest::prelude::*;

use padic_dynamics::padic::{exp_p, in_ep, log_p, Ball, PNorm, PadicNumber};

const PRIMES: [u64; 4] = [3, 5, 7, 13];

fn prime() -> impl Strategy<Value = u64> {
    proptest::sample::select(&PRIMES[..])
}

fn nonzero_rational() -> impl Strategy<Value = (i64, i64)> {
    (
        prop_oneof![(-2000i64..=-1), (1i64..=2000)],
        prop_oneof![(-2000i64..=-1), (1i64..=2000)],
    )
}

fn num(p: u64, (a, b): (i64, i64)) -> PadicNumber {
    PadicNumber::from_rational(a, b, p, 24).unwrap()
}

proptest! {
    #[test]
    fn strong_triangle_inequality(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        let xv = num(p, x);
        let yv = num(p, y);
        let sum = xv.add(&yv).unwrap();
        let nx = xv.norm().unwrap();
        let ny = yv.norm().unwrap();
        let bound = nx.max(ny);
        // |x+y| <= max(|x|,|y|): an at-precision zero only strengthens it
        if let Ok(ns) = sum.norm() {
            prop_assert!(ns <= bound);
            // equality whenever the norms differ
            if nx != ny {
                prop_assert_eq!(ns, bound);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        let xv = num(p, x);
        let yv = num(p, y);
        let prod = xv.mul(&yv).unwrap();
        prop_assert_eq!(
            prod.norm().unwrap(),
            xv.norm().unwrap().mul(yv.norm().unwrap())
        );
    }

    #[test]
    fn field_arithmetic_matches_rationals(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        // (a/b) * (c/d) and (a/b) + (c/d) computed p-adically agree with the
        // exact rational results
        let (a, b) = x;
        let (c, d) = y;
        let xv = num(p, x);
        let yv = num(p, y);
        let sum_rat = PadicNumber::from_rational(
            a.checked_mul(d).unwrap() + c.checked_mul(b).unwrap(),
            b.checked_mul(d).unwrap(),
            p,
            24,
        ).unwrap();
        prop_assert!(xv.add(&yv).unwrap().sub(&sum_rat).unwrap().is_zero_at_precision());
        let prod_rat = PadicNumber::from_rational(a * c, b * d, p, 24).unwrap();
        prop_assert!(xv.mul(&yv).unwrap().sub(&prod_rat).unwrap().is_zero_at_precision());
    }

    #[test]
    fn ep_is_a_multiplicative_group(p in prime(), u in 0i64..10_000, v in 0i64..10_000) {
        let a = PadicNumber::from_integer(1 + p as i64 * u, p, 24).unwrap();
        let b = PadicNumber::from_integer(1 + p as i64 * v, p, 24).unwrap();
        prop_assert!(in_ep(&a).unwrap());
        prop_assert!(in_ep(&a.mul(&b).unwrap()).unwrap());
        prop_assert!(in_ep(&a.inv().unwrap()).unwrap());
        // |a-b| < 1 and |a+b| = 1 (p >= 3)
        prop_assert!(a.sub(&b).unwrap().norm_le(1).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().norm().unwrap(), PNorm::Power(0));
    }

    #[test]
    fn exp_log_inverse_pair(p in prime(), u in 1i64..10_000) {
        let h = PadicNumber::from_integer(p as i64 * u, p, 24).unwrap();
        let x = exp_p(&h).unwrap();
        prop_assert!(in_ep(&x).unwrap());
        prop_assert!(log_p(&x).unwrap().agrees_with(&h, 16).unwrap());
        // and the other direction from a random E_p element
        let y = PadicNumber::from_integer(1 + p as i64 * u, p, 24).unwrap();
        let l = log_p(&y).unwrap();
        prop_assert!(l.norm_le(1).unwrap());
        prop_assert!(exp_p(&l).unwrap().agrees_with(&y, 16).unwrap());
    }

    #[test]
    fn same_radius_balls_equal_or_disjoint(
        p in prime(),
        c1 in nonzero_rational(),
        c2 in nonzero_rational(),
        m in -3i64..6,
    ) {
        let b1 = Ball::new(num(p, c1), m);
        let b2 = Ball::new(num(p, c2), m);
        match b1.same_ball(&b2) {
            Ok(true) => {
                // equal: each center lies in the other ball
                prop_assert!(b2.contains(&b1.center).unwrap());
            }
            Ok(false) => {
                // disjoint: no rational midpoint can be in both
                let mid = b1.center.add(&b2.center).unwrap();
                let half = PadicNumber::from_integer(2, p, 24).unwrap();
                let mid = mid.div(&half).unwrap();
                let in_both = b1.contains(&mid).unwrap_or(false)
                    && b2.contains(&mid).unwrap_or(false);
                prop_assert!(!in_both);
            }
            Err(_) => {} // centers indistinguishable at precision: no claim
        }
    }
}
