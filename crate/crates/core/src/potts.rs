//! The Potts-Bethe map f_theta(x) = ((theta x + q - 1)/(x + theta + q - 2))^k:
//! evaluation, derivative, fixed-point classification, the region
//! decomposition by |x + q - 1|_p, the exact contraction law on E_p, and the
//! inverse branches used to build the repeller.

use serde::Serialize;
use thiserror::Error;

use crate::padic::{check_prime, exp_p, in_ep, log_p, PNorm, PadicError, PadicNumber};
use crate::roots::{kth_roots, RootError};
use crate::sample::Sampler;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PottsError {
    #[error("x is the pole of f_theta (x + theta + q - 2 = 0)")]
    Pole,
    #[error("theta must lie in E_p and differ from 1 at the working precision")]
    BadTheta,
    #[error("q must satisfy q >= 2 and |q|_p = 1")]
    BadQ,
    #[error("k must be >= 1")]
    BadK,
    #[error("input is not fixed at the acceptance threshold: {0}")]
    NotFixed(String),
    #[error("multiplier cannot be classified at the carried precision")]
    Unclassifiable,
    #[error("inverse branch undefined: {0}")]
    Branch(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Root(#[from] RootError),
}

pub type PottsResult<T> = Result<T, PottsError>;

/// The parameter tuple (p, q, k, theta) with its derived quantities:
/// s = v_p(q-1), t = v_p(theta-1), the pole 2 - q - theta, and the k-th
/// roots of 1 - q in Q_p (possibly none).
#[derive(Debug, Clone)]
pub struct MapParams {
    p: u64,
    q: u64,
    k: u32,
    theta: PadicNumber,
    precision: u32,
    s: i64,
    t: i64,
    pole: PadicNumber,
    one_minus_q: PadicNumber,
    theta_minus_one: PadicNumber,
    theta_plus_q_minus_one: PadicNumber,
    roots_of_one_minus_q: Vec<PadicNumber>,
}

impl MapParams {
    pub fn new(p: u64, q: u64, k: u32, theta: PadicNumber) -> PottsResult<Self> {
        check_prime(p)?;
        if q < 2 || q % p == 0 {
            return Err(PottsError::BadQ);
        }
        if k < 1 {
            return Err(PottsError::BadK);
        }
        if theta.prime() != p {
            return Err(PadicError::PrimeMismatch(p, theta.prime()).into());
        }
        if !in_ep(&theta)? {
            return Err(PottsError::BadTheta);
        }
        let precision = theta.precision().ok_or(PottsError::BadTheta)?;
        let one = PadicNumber::one(p, precision);
        let theta_minus_one = theta.sub(&one)?;
        if theta_minus_one.is_zero_at_precision() {
            // theta = 1 makes f constant; the analysis never treats it
            return Err(PottsError::BadTheta);
        }
        let t = theta_minus_one.valuation()?;
        let s = {
            let mut s = 0;
            let mut m = q - 1;
            while m % p == 0 {
                m /= p;
                s += 1;
            }
            s
        };
        let int = |c: i64| PadicNumber::from_integer(c, p, precision);
        let one_minus_q = int(1 - q as i64)?;
        let pole = int(2 - q as i64)?.sub(&theta)?;
        let theta_plus_q_minus_one = theta.add(&int(q as i64 - 1)?)?;
        let roots_of_one_minus_q = kth_roots(&one_minus_q, k)?;
        Ok(MapParams {
            p,
            q,
            k,
            theta,
            precision,
            s,
            t,
            pole,
            one_minus_q,
            theta_minus_one,
            theta_plus_q_minus_one,
            roots_of_one_minus_q,
        })
    }

    /// Convenience constructor with theta given as an integer literal.
    pub fn from_integers(p: u64, q: u64, k: u32, theta: i64, precision: u32) -> PottsResult<Self> {
        let theta = PadicNumber::from_integer(theta, p, precision)?;
        MapParams::new(p, q, k, theta)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn theta(&self) -> &PadicNumber {
        &self.theta
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    /// s with |q - 1|_p = p^{-s}.
    pub fn s(&self) -> i64 {
        self.s
    }
    /// t with |theta - 1|_p = p^{-t}; always >= 1.
    pub fn t(&self) -> i64 {
        self.t
    }
    /// v_p(k).
    pub fn k_valuation(&self) -> i64 {
        let mut v = 0;
        let mut m = self.k as u64;
        while m % self.p == 0 {
            m /= self.p;
            v += 1;
        }
        v
    }
    pub fn pole(&self) -> &PadicNumber {
        &self.pole
    }
    pub fn one_minus_q(&self) -> &PadicNumber {
        &self.one_minus_q
    }
    pub fn theta_minus_one(&self) -> &PadicNumber {
        &self.theta_minus_one
    }
    /// k-th roots of 1 - q in Q_p, sorted by leading digit; empty if none.
    pub fn roots_of_one_minus_q(&self) -> &[PadicNumber] {
        &self.roots_of_one_minus_q
    }

    pub(crate) fn int(&self, c: i64) -> PadicNumber {
        PadicNumber::from_integer(c, self.p, self.precision).expect("validated prime")
    }

    /// R(x) = theta x + q - 1.
    fn numerator(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        Ok(self.theta.mul(x)?.add(&self.int(self.q as i64 - 1))?)
    }

    /// Q(x) = x + theta + q - 2.
    fn denominator(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        Ok(x.add(&self.theta)?.add(&self.int(self.q as i64 - 2))?)
    }

    /// f_theta(x) = (R(x)/Q(x))^k.
    ///
    /// Q(x) = x - pole exactly, so an at-precision-zero denominator means x
    /// is the pole as far as the carried digits can tell.
    pub fn eval(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        let den = self.denominator(x)?;
        if den.is_zero_at_precision() {
            return Err(PottsError::Pole);
        }
        let num = self.numerator(x)?;
        Ok(num.div(&den)?.pow(self.k))
    }

    /// n-fold iterate f^n(x).
    pub fn iterate(&self, x: &PadicNumber, n: usize) -> PottsResult<PadicNumber> {
        let mut z = x.clone();
        for _ in 0..n {
            z = self.eval(&z)?;
        }
        Ok(z)
    }

    /// f'(x) = k (theta-1)(theta+q-1) R(x)^{k-1} / Q(x)^{k+1}; at the fixed
    /// point 1 this collapses to k(theta-1)/(theta-1+q).
    pub fn derivative(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        let den = self.denominator(x)?;
        if den.is_zero_at_precision() {
            return Err(PottsError::Pole);
        }
        let num = self.numerator(x)?;
        let front = self
            .theta_minus_one
            .mul(&self.theta_plus_q_minus_one)?
            .mul_integer(self.k as i64)?;
        Ok(front.mul(&num.pow(self.k - 1))?.div(&den.pow(self.k + 1))?)
    }

    /// The exact difference identity
    /// f(x) - f(y) = (theta-1)(theta+q-1) sum_j [R(x)Q(y)]^{k-1-j}[R(y)Q(x)]^j
    ///               / [Q(x)Q(y)]^k * (x - y),
    /// evaluated term by term. Used as an independent route in tests.
    pub fn difference_identity_rhs(
        &self,
        x: &PadicNumber,
        y: &PadicNumber,
    ) -> PottsResult<PadicNumber> {
        let rx = self.numerator(x)?;
        let ry = self.numerator(y)?;
        let qx = self.denominator(x)?;
        let qy = self.denominator(y)?;
        let a = rx.mul(&qy)?;
        let b = ry.mul(&qx)?;
        let mut sum = PadicNumber::zero(self.p);
        for j in 0..self.k {
            sum = sum.add(&a.pow(self.k - 1 - j).mul(&b.pow(j))?)?;
        }
        let front = self.theta_minus_one.mul(&self.theta_plus_q_minus_one)?;
        let den = qx.mul(&qy)?.pow(self.k);
        Ok(front
            .mul(&sum)?
            .div(&den)?
            .mul(&x.sub(y)?)?)
    }
}

/// Trichotomy by comparing |x + q - 1|_p against |theta - 1|_p = p^{-t}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// |x + q - 1|_p > |theta - 1|_p; maps into E_p in one step.
    B1,
    /// equality.
    B2,
    /// |x + q - 1|_p < |theta - 1|_p; contains the covering X and the pole.
    B3,
}

impl MapParams {
    pub fn region(&self, x: &PadicNumber) -> PottsResult<Region> {
        let w = x.add(&self.int(self.q as i64 - 1))?;
        if w.is_exact_zero() {
            return Ok(Region::B3);
        }
        match w.valuation() {
            Ok(v) => Ok(if v < self.t {
                Region::B1
            } else if v == self.t {
                Region::B2
            } else {
                Region::B3
            }),
            Err(_) => {
                let bound = w.absolute_precision().unwrap_or(0);
                if bound > self.t {
                    Ok(Region::B3)
                } else {
                    Err(PadicError::exhausted("deciding the region of x", bound).into())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedPointClass {
    Attractive,
    Indifferent,
    Repelling,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub point: PadicNumber,
    pub multiplier: PadicNumber,
    pub multiplier_norm_exponent: i64,
    pub class: FixedPointClass,
}

impl MapParams {
    /// Classifies a point that is fixed to within p^{-precision/2}.
    pub fn classify_fixed_point(&self, x: &PadicNumber) -> PottsResult<FixedPointReport> {
        let residual = self.eval(x)?.sub(x)?;
        let threshold = self.precision as i64 / 2;
        if !residual.norm_le(threshold).unwrap_or(false) {
            return Err(PottsError::NotFixed(format!(
                "residual {} exceeds p^-{}",
                residual, threshold
            )));
        }
        let multiplier = self.derivative(x)?;
        let norm = multiplier.norm().map_err(|_| PottsError::Unclassifiable)?;
        let class = match norm {
            PNorm::Zero => return Err(PottsError::Unclassifiable),
            PNorm::Power(e) if e < 0 => FixedPointClass::Attractive,
            PNorm::Power(0) => FixedPointClass::Indifferent,
            PNorm::Power(_) => FixedPointClass::Repelling,
        };
        Ok(FixedPointReport {
            point: x.clone(),
            multiplier_norm_exponent: norm.exponent().unwrap(),
            multiplier,
            class,
        })
    }
}

/// One witnessed violation of an exact norm identity.
#[derive(Debug, Clone, Serialize)]
pub struct RatioViolation {
    pub x: PadicNumber,
    pub y: PadicNumber,
    pub expected_exponent: i64,
    pub got: Option<i64>,
}

/// Result of sampling the contraction law on E_p (and the absorption of B1).
#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    /// |k(theta-1)|_p = p^{expected_exponent}.
    pub expected_exponent: i64,
    pub pairs_checked: usize,
    pub b1_samples_checked: usize,
    pub image_stays_in_ep: bool,
    pub b1_maps_into_ep: bool,
    pub violations: Vec<RatioViolation>,
}

impl ContractionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.image_stays_in_ep && self.b1_maps_into_ep
    }
}

impl MapParams {
    /// Samples pairs x, y in E_p and asserts the exact ratio
    /// |f(x)-f(y)|_p / |x-y|_p = |k(theta-1)|_p together with
    /// f(E_p) in E_p, and checks f(B1) in E_p on B1 samples.
    pub fn check_contraction_on_ep(
        &self,
        samples: usize,
        seed: u64,
    ) -> PottsResult<ContractionReport> {
        let mut sampler = Sampler::new(seed);
        let expected = -(self.k_valuation() + self.t);
        let digits = self.precision;
        let mut violations = Vec::new();
        let mut image_ok = true;
        for _ in 0..samples {
            let (x, y) = sampler.distinct_pair(|s| s.ep(self.p, digits, digits));
            let fx = self.eval(&x)?;
            let fy = self.eval(&y)?;
            if !in_ep(&fx)? || !in_ep(&fy)? {
                image_ok = false;
            }
            let diff_in = x.sub(&y)?.norm()?;
            let diff_out = fx.sub(&fy)?.norm()?;
            let want = diff_in.mul(PNorm::Power(expected));
            if diff_out != want {
                violations.push(RatioViolation {
                    x,
                    y,
                    expected_exponent: expected,
                    got: diff_out
                        .exponent()
                        .and_then(|o| diff_in.exponent().map(|i| o - i)),
                });
            }
        }
        // absorption samples: |x + q - 1|_p > |theta - 1|_p implies f(x) in E_p
        let mut b1_ok = true;
        let b1_samples = samples.max(8);
        for _ in 0..b1_samples {
            let j = sampler.gen_range(0, self.t as u64 + 2) as i64 - 2; // in [-2, t-1]
            let w = sampler.unit(self.p, digits, digits).shift(j);
            let x = w.sub(&self.int(self.q as i64 - 1))?;
            debug_assert_eq!(self.region(&x)?, Region::B1);
            if !in_ep(&self.eval(&x)?)? {
                b1_ok = false;
            }
        }
        Ok(ContractionReport {
            expected_exponent: expected,
            pairs_checked: samples,
            b1_samples_checked: b1_samples,
            image_stays_in_ep: image_ok,
            b1_maps_into_ep: b1_ok,
            violations,
        })
    }
}

impl MapParams {
    /// The k-th root of x lying in E_p, for x in E_p. Hensel lifting from the
    /// residue-1 root when p does not divide k; via exp_p(log_p(x)/k) when it
    /// does, verified a posteriori.
    pub fn ep_kth_root(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        if !in_ep(x)? {
            return Err(PottsError::Branch(
                "E_p root requested for a value outside E_p".into(),
            ));
        }
        let m = self.k_valuation();
        let root = if m == 0 {
            kth_roots(x, self.k)?
                .into_iter()
                .find(|r| r.leading_digit() == Some(1))
                .ok_or_else(|| PottsError::Branch("no residue-1 k-th root lifted".into()))?
        } else {
            let lg = log_p(x)?;
            let scaled = lg.div(&self.int(self.k as i64))?;
            if !scaled.norm_le(1).unwrap_or(false) {
                return Err(PottsError::Branch(format!(
                    "log_p(x)/k leaves the exp_p domain (v = {:?})",
                    scaled.valuation()
                )));
            }
            exp_p(&scaled)?
        };
        let check = root.pow(self.k).sub(x)?;
        if !check.is_zero_at_precision() {
            return Err(PottsError::Branch(
                "computed E_p root fails its residual check".into(),
            ));
        }
        if !in_ep(&root)? {
            return Err(PottsError::Branch("computed root left E_p".into()));
        }
        Ok(root)
    }

    /// The shared half of every inverse branch at x: the E_p k-th root of
    /// x/(1-q). Computing it once and assembling all branches from it is
    /// what keeps the incidence checks cheap.
    pub fn branch_rbar(&self, x: &PadicNumber) -> PottsResult<PadicNumber> {
        let xbar = x.div(&self.one_minus_q)?;
        if !in_ep(&xbar)? {
            return Err(PottsError::Branch(
                "x/(1-q) lies outside E_p; x is not in the covering".into(),
            ));
        }
        self.ep_kth_root(&xbar)
    }

    /// Assembles g(x) = ((theta + q - 2) xi_hat rbar + 1 - q) / (theta - xi_hat rbar)
    /// from a precomputed rbar = branch_rbar(x).
    pub fn branch_from_rbar(
        &self,
        xi_hat: &PadicNumber,
        rbar: &PadicNumber,
    ) -> PottsResult<PadicNumber> {
        let w = xi_hat.mul(rbar)?;
        let num = self
            .theta
            .add(&self.int(self.q as i64 - 2))?
            .mul(&w)?
            .add(&self.one_minus_q)?;
        let den = self.theta.sub(&w)?;
        if den.is_zero_at_precision() {
            return Err(PottsError::Branch(
                "inverse-branch denominator vanishes at precision".into(),
            ));
        }
        Ok(num.div(&den)?)
    }

    /// Inverse branch attached to the k-th root xi_hat of 1 - q; satisfies
    /// f(g(x)) = x on the covering.
    pub fn inverse_branch_with_root(
        &self,
        xi_hat: &PadicNumber,
        x: &PadicNumber,
    ) -> PottsResult<PadicNumber> {
        let rbar = self.branch_rbar(x)?;
        self.branch_from_rbar(xi_hat, &rbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn params(p: u64, q: u64, k: u32, theta: i64) -> MapParams {
        MapParams::from_integers(p, q, k, theta, 64).unwrap()
    }

    fn num(x: i64, p: u64) -> PadicNumber {
        PadicNumber::from_integer(x, p, 64).unwrap()
    }

    #[test]
    fn construction_validations() {
        assert!(MapParams::from_integers(5, 2, 2, 6, 64).is_ok());
        // theta = 1 is degenerate
        assert!(matches!(
            MapParams::from_integers(5, 2, 2, 1, 64),
            Err(PottsError::BadTheta)
        ));
        // theta outside E_p
        assert!(matches!(
            MapParams::from_integers(5, 2, 2, 3, 64),
            Err(PottsError::BadTheta)
        ));
        // p | q
        assert!(matches!(
            MapParams::from_integers(5, 10, 2, 6, 64),
            Err(PottsError::BadQ)
        ));
        // p = 2 rejected
        assert!(MapParams::from_integers(2, 3, 2, 3, 64).is_err());
    }

    #[test]
    fn derived_quantities() {
        let m = params(5, 2, 2, 6);
        assert_eq!(m.s(), 0);
        assert_eq!(m.t(), 1);
        assert_eq!(m.k_valuation(), 0);
        let m = params(5, 26, 2, 26);
        assert_eq!(m.s(), 2);
        assert_eq!(m.t(), 2);
        let m = params(5, 2, 10, 6);
        assert_eq!(m.k_valuation(), 1);
    }

    #[test]
    fn one_is_fixed() {
        for m in [params(5, 2, 2, 6), params(7, 2, 3, 8), params(7, 3, 2, 8)] {
            let one = num(1, m.p());
            let y = m.eval(&one).unwrap();
            assert!(y.sub(&one).unwrap().is_zero_at_precision());
        }
    }

    #[test]
    fn one_minus_q_maps_to_its_kth_power() {
        // R(1-q) = (q-1)(1-theta), Q(1-q) = theta-1, ratio = 1-q
        let m = params(7, 3, 2, 8);
        let x = num(-2, 7);
        let y = m.eval(&x).unwrap();
        assert!(y.sub(&num(4, 7)).unwrap().is_zero_at_precision());
    }

    #[test]
    fn eval_example_mod_25() {
        // (55/15)^2 = (11/3)^2 = 19 (mod 25)
        let m = params(5, 2, 2, 6);
        let y = m.eval(&num(9, 5)).unwrap();
        assert_eq!(y.unit_mod(2).unwrap(), BigUint::from(19u32));
    }

    #[test]
    fn eval_at_pole_errors() {
        let m = params(5, 2, 2, 6);
        let pole = m.pole().clone();
        assert!(matches!(m.eval(&pole), Err(PottsError::Pole)));
    }

    #[test]
    fn derivative_at_one_closed_form() {
        let m = params(5, 2, 2, 6);
        let d = m.derivative(&num(1, 5)).unwrap();
        // k(theta-1)/(theta-1+q) = 2*5/7
        let expected = num(10, 5).div(&num(7, 5)).unwrap();
        assert!(d.sub(&expected).unwrap().is_zero_at_precision());
        assert_eq!(d.norm().unwrap(), PNorm::Power(-1));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = params(7, 2, 3, 8);
        let mut sampler = Sampler::new(3);
        for _ in 0..10 {
            let x = sampler.ep(7, 64, 64);
            let h = num(1, 7).shift(32); // |h| = p^{-32}
            let fd = m
                .eval(&x.add(&h).unwrap())
                .unwrap()
                .sub(&m.eval(&x).unwrap())
                .unwrap()
                .div(&h)
                .unwrap();
            let d = m.derivative(&x).unwrap();
            assert!(fd.sub(&d).unwrap().norm_le(16).unwrap());
        }
    }

    #[test]
    fn difference_identity_route_agrees() {
        let m = params(5, 2, 2, 6);
        let mut sampler = Sampler::new(11);
        for _ in 0..20 {
            let (x, y) = sampler.distinct_pair(|s| s.qp(5, 48, 64, -2, 2));
            let qx = m.denominator(&x).unwrap();
            let qy = m.denominator(&y).unwrap();
            if qx.is_zero_at_precision() || qy.is_zero_at_precision() {
                continue;
            }
            let lhs = m.eval(&x).unwrap().sub(&m.eval(&y).unwrap()).unwrap();
            let rhs = m.difference_identity_rhs(&x, &y).unwrap();
            assert!(lhs.sub(&rhs).unwrap().is_zero_at_precision());
        }
    }

    #[test]
    fn region_trichotomy() {
        let m = params(5, 2, 2, 6);
        assert_eq!(m.region(&num(1, 5)).unwrap(), Region::B1);
        assert_eq!(m.region(&num(-1, 5)).unwrap(), Region::B3);
        // x = 1 - q + (theta - 1)
        let x = num(-1 + 5, 5);
        assert_eq!(m.region(&x).unwrap(), Region::B2);
    }

    #[test]
    fn classify_the_attractor_at_one() {
        let m = params(5, 2, 2, 6);
        let report = m.classify_fixed_point(&num(1, 5)).unwrap();
        assert_eq!(report.class, FixedPointClass::Attractive);
        assert_eq!(report.multiplier_norm_exponent, -1);
        // non-fixed input is rejected
        assert!(matches!(
            m.classify_fixed_point(&num(2, 5)),
            Err(PottsError::NotFixed(_))
        ));
    }

    #[test]
    fn contraction_ratio_exact() {
        let m = params(5, 2, 2, 6);
        let report = m.check_contraction_on_ep(40, 17).unwrap();
        assert_eq!(report.expected_exponent, -1);
        assert!(report.ok(), "{:?}", report.violations);

        // p | k: |k(theta-1)|_7 = 7^{-2}
        let m = params(7, 2, 7, 8);
        let report = m.check_contraction_on_ep(40, 17).unwrap();
        assert_eq!(report.expected_exponent, -2);
        assert!(report.ok());
    }

    #[test]
    fn inverse_branch_round_trip() {
        let m = params(5, 2, 2, 6);
        let roots = m.roots_of_one_minus_q().to_vec();
        assert_eq!(roots.len(), 2);
        let x = num(-1 + 25, 5); // in X: xbar = (25-1)/(-1)... check via branch
        for root in &roots {
            let g = m.inverse_branch_with_root(root, &x).unwrap();
            let back = m.eval(&g).unwrap();
            assert!(back.sub(&x).unwrap().norm_le(30).unwrap());
        }
    }

    #[test]
    fn inverse_branch_rejects_off_domain() {
        let m = params(5, 2, 2, 6);
        let root = m.roots_of_one_minus_q()[0].clone();
        // x = 1: x/(1-q) = -1 is not in E_p
        assert!(matches!(
            m.inverse_branch_with_root(&root, &num(1, 5)),
            Err(PottsError::Branch(_))
        ));
    }

    #[test]
    fn ep_kth_root_with_p_dividing_k() {
        // k = 10, p = 5: route through exp/log; x must be a deep enough unit
        let m = MapParams::from_integers(5, 2, 10, 26, 64).unwrap();
        let x = num(1 + 50, 5); // 1 + 2*25, v(x-1) = 2 > v_5(10) = 1
        let r = m.ep_kth_root(&x).unwrap();
        assert!(in_ep(&r).unwrap());
        assert!(r.pow(10).sub(&x).unwrap().is_zero_at_precision());
        // v(x-1) = 1 is too shallow for a 10th root
        let shallow = num(6, 5);
        assert!(m.ep_kth_root(&shallow).is_err());
    }
}
