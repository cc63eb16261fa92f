//! The covering X by disjoint balls around the would-be roots of x^k = 1-q,
//! the repeller condition and exact scaling exponents, the incidence matrix,
//! finite-depth Julia set approximations, itinerary coding, and the
//! full-shift conjugacy certificate.

use serde::Serialize;
use thiserror::Error;

use crate::padic::{Ball, PNorm, PadicError, PadicNumber, PadicResult};
use crate::potts::{MapParams, PottsError, RatioViolation};
use crate::roots::{solp, RootError, SolSet};
use crate::sample::Sampler;
use crate::subshift::{is_irreducible, IncidenceMatrix, SubshiftError, SymbolWord};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepellerError {
    #[error("Sol_p is empty: no covering exists (unique-attractor regime)")]
    CoveringUnavailable,
    #[error("standing assumption violated: {0}")]
    Regime(String),
    #[error("covering balls are not pairwise disjoint: {0}")]
    Disjointness(String),
    #[error("orbit escaped the covering at step {0}")]
    EscapedAtStep(usize),
    #[error("point is not in the covering X")]
    NotInCovering,
    #[error("requested depth exceeds the working precision; max safe depth is {max_depth}")]
    DepthExceedsPrecision { max_depth: usize },
    #[error("no k-th root of 1-q pairs with ball {0}")]
    BranchRootMissing(usize),
    #[error("word is not admissible: {0}")]
    BadWord(String),
    #[error("certificate verdict is not full-shift-chaos; {0} is unavailable")]
    NotCertified(&'static str),
    #[error("periodic point iteration failed to converge")]
    PeriodicDiverged,
    #[error(transparent)]
    Potts(#[from] PottsError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
}

pub type RepellerResult<T> = Result<T, RepellerError>;

/// One ball of the covering: its Sol_p residue xi, the solved eta (s = 0,
/// xi + q - 1 not divisible by p), the center, and the paired k-th root of
/// 1-q driving its inverse branch.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringBall {
    pub xi: u64,
    pub eta: Option<u64>,
    pub ball: Ball,
    pub root_hat: Option<PadicNumber>,
}

/// The finite disjoint ball family X = union of B(x_i, p^{-m}) with
/// m = s/k + 1 + t.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringX {
    pub balls: Vec<CoveringBall>,
    pub radius_exponent: i64,
    pub sol: SolSet,
}

impl CoveringX {
    pub fn kappa(&self) -> usize {
        self.balls.len()
    }

    pub fn ball(&self, index: usize) -> &Ball {
        &self.balls[index].ball
    }

    pub fn center(&self, index: usize) -> &PadicNumber {
        &self.balls[index].ball.center
    }

    /// Index of the ball containing x, if any (at most one, by disjointness).
    pub fn member(&self, x: &PadicNumber) -> PadicResult<Option<usize>> {
        for (i, b) in self.balls.iter().enumerate() {
            if b.ball.contains(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Inverse branch g_{theta,i} attached to ball i (0-based), defined on X.
    pub fn branch(
        &self,
        params: &MapParams,
        index: usize,
        x: &PadicNumber,
    ) -> RepellerResult<PadicNumber> {
        let root = self.balls[index]
            .root_hat
            .as_ref()
            .ok_or(RepellerError::BranchRootMissing(index))?;
        Ok(params.inverse_branch_with_root(root, x)?)
    }

    /// All kappa_p inverse branches at x, sharing one k-th root extraction.
    pub fn branches_at(
        &self,
        params: &MapParams,
        x: &PadicNumber,
    ) -> RepellerResult<Vec<PadicNumber>> {
        let rbar = params.branch_rbar(x)?;
        self.balls
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let root = b
                    .root_hat
                    .as_ref()
                    .ok_or(RepellerError::BranchRootMissing(i))?;
                Ok(params.branch_from_rbar(root, &rbar)?)
            })
            .collect()
    }
}

fn modular_inverse_u64(a: u64, p: u64) -> u64 {
    // p is a small prime; Fermat
    let mut acc: u128 = 1;
    let mut base = (a % p) as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Builds the covering X for parameters with Sol_p nonempty and
/// |theta - 1|_p < |q - 1|_p. Centers follow the two construction cases:
///
/// s = 0:  x_i = 1 - q + eta_i (theta - 1)  with eta_i solving
///         eta (xi_i - 1) + xi_i + q - 1 = 0 (mod p), or x_i = 1 - q when
///         xi_i + q - 1 = 0 (mod p);
/// s > 0:  x_i = 1 - q + p^{s/k} xi_i (theta - 1).
///
/// Disjointness of the balls is verified, not assumed.
pub fn build_covering(params: &MapParams) -> RepellerResult<CoveringX> {
    let p = params.p();
    let q = params.q();
    let k = params.k();
    let sol = solp(p, q, k)?;
    if sol.kappa == 0 {
        return Err(RepellerError::CoveringUnavailable);
    }
    if params.t() <= params.s() {
        return Err(RepellerError::Regime(format!(
            "|theta-1|_p = p^-{} must be smaller than |q-1|_p = p^-{}",
            params.t(),
            params.s()
        )));
    }
    let s = sol.s;
    let radius_exponent = s / k as i64 + 1 + params.t();
    let mut balls = Vec::with_capacity(sol.kappa);
    for &xi in &sol.residues {
        let (center, eta) = if s == 0 {
            if (xi + q - 1) % p == 0 {
                (params.one_minus_q().clone(), None)
            } else {
                // xi = 1 would force q = 0 (mod p), excluded by |q|_p = 1
                debug_assert!(xi != 1);
                let rhs = (p - (xi + q - 1) % p) % p;
                let eta = rhs * modular_inverse_u64(xi - 1, p) % p;
                debug_assert_eq!((eta * (xi - 1) + xi + q - 1) % p, 0);
                let center = params
                    .one_minus_q()
                    .add(&params.theta_minus_one().mul_integer(eta as i64)?)?;
                (center, Some(eta))
            }
        } else {
            let center = params.one_minus_q().add(
                &params
                    .theta_minus_one()
                    .shift(s / k as i64)
                    .mul_integer(xi as i64)?,
            )?;
            (center, None)
        };
        let root_hat = params
            .roots_of_one_minus_q()
            .iter()
            .find(|r| r.leading_digit() == Some(xi))
            .cloned();
        balls.push(CoveringBall {
            xi,
            eta,
            ball: Ball::new(center, radius_exponent),
            root_hat,
        });
    }
    // pairwise disjointness, by exact norm comparison of center differences
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let sep = balls[i].ball.disjoint_from(&balls[j].ball)?;
            if !sep {
                return Err(RepellerError::Disjointness(format!(
                    "balls {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(CoveringX {
        balls,
        radius_exponent,
        sol,
    })
}

/// Exact scaling exponent tau = t - s(k-1)/k - v_p(k), the p-power in
/// |f(x)-f(y)|_p = |k|_p / (p^{s(k-1)/k} |theta-1|_p) * |x-y|_p;
/// integral whenever the covering exists.
pub fn scaling_exponent(params: &MapParams) -> Option<i64> {
    let s = params.s();
    let k = params.k() as i64;
    if s % k != 0 {
        return None;
    }
    Some(params.t() - (s - s / k) - params.k_valuation())
}

/// |k|_p > p^{s(k-1)/k} |theta-1|_p, decided on integers as
/// k (t - v_p(k)) > s (k - 1); equivalent to tau >= 1 whenever tau is defined.
pub fn repeller_condition(params: &MapParams) -> bool {
    let k = params.k() as i64;
    k * (params.t() - params.k_valuation()) > params.s() * (k - 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct BallScaling {
    pub ball: usize,
    pub expected_exponent: i64,
    pub pairs: usize,
    pub violations: Vec<RatioViolation>,
}

/// Sampled verification of |f(x)-f(y)|_p = p^tau |x-y|_p on each ball.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub tau: i64,
    pub per_ball: Vec<BallScaling>,
}

impl ScalingReport {
    pub fn ok(&self) -> bool {
        self.per_ball.iter().all(|b| b.violations.is_empty())
    }
}

/// Checks the local scaling law on `pairs_per_ball` sampled pairs per ball.
pub fn verify_scaling(
    params: &MapParams,
    covering: &CoveringX,
    pairs_per_ball: usize,
    seed: u64,
) -> RepellerResult<ScalingReport> {
    let tau = scaling_exponent(params)
        .expect("covering exists, so k | s and tau is integral");
    let mut sampler = Sampler::new(seed);
    // offsets stay well inside the carried precision so norms stay decidable
    let offset_digits = (params.precision() / 3).clamp(8, 24);
    let mut per_ball = Vec::with_capacity(covering.kappa());
    for (bi, cb) in covering.balls.iter().enumerate() {
        let mut violations = Vec::new();
        for _ in 0..pairs_per_ball {
            let (x, y) =
                sampler.distinct_pair(|s| s.in_ball(&cb.ball, offset_digits));
            let fx = params.eval(&x)?;
            let fy = params.eval(&y)?;
            let din = x.sub(&y)?.norm()?;
            let dout = fx.sub(&fy)?.norm()?;
            if dout != din.mul(PNorm::Power(tau)) {
                violations.push(RatioViolation {
                    x,
                    y,
                    expected_exponent: tau,
                    got: dout
                        .exponent()
                        .and_then(|o| din.exponent().map(|i| o - i)),
                });
            }
        }
        per_ball.push(BallScaling {
            ball: bi,
            expected_exponent: tau,
            pairs: pairs_per_ball,
            violations,
        });
    }
    Ok(ScalingReport { tau, per_ball })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FullShiftChaos,
    UniqueAttractor,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::FullShiftChaos => "full-shift-chaos",
            Verdict::UniqueAttractor => "unique-attractor",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct CertificateWitnesses {
    pub covering: Option<CoveringX>,
    pub disjoint: Option<bool>,
    pub scaling: Option<ScalingReport>,
    pub branch_membership_checks: usize,
    pub notes: Vec<String>,
}

/// The verdict object: every boolean it carries was established by an exact
/// norm identity, and the witnesses section records what was checked.
#[derive(Debug, Clone, Serialize)]
pub struct RepellerCertificate {
    pub p: u64,
    pub q: u64,
    pub k: u32,
    pub theta: PadicNumber,
    pub s: i64,
    pub t: i64,
    pub kappa: usize,
    pub tau: Option<i64>,
    pub condition_holds: bool,
    pub preimage_inside: Option<bool>,
    pub incidence: Option<Vec<Vec<u8>>>,
    pub transitive: Option<bool>,
    pub verdict: Verdict,
    pub witnesses: CertificateWitnesses,
}

impl RepellerCertificate {
    pub fn incidence_matrix(&self) -> Option<IncidenceMatrix> {
        self.incidence.clone().map(IncidenceMatrix::new)
    }
}

pub fn certify(params: &MapParams) -> RepellerResult<RepellerCertificate> {
    certify_with(params, 32, 0)
}

/// Runs the full certification pipeline: regime assumptions, Sol_p,
/// covering + disjointness, the repeller condition, per-ball scaling,
/// f^{-1}(X) in X via inverse branches, the incidence matrix, and
/// transitivity. Sampling is deterministic in the seed.
pub fn certify_with(
    params: &MapParams,
    samples: usize,
    seed: u64,
) -> RepellerResult<RepellerCertificate> {
    let sol = solp(params.p(), params.q(), params.k())?;
    let condition_holds = repeller_condition(params);
    let tau = scaling_exponent(params);
    let mut cert = RepellerCertificate {
        p: params.p(),
        q: params.q(),
        k: params.k(),
        theta: params.theta().clone(),
        s: params.s(),
        t: params.t(),
        kappa: sol.kappa,
        tau,
        condition_holds,
        preimage_inside: None,
        incidence: None,
        transitive: None,
        verdict: Verdict::Inconclusive,
        witnesses: CertificateWitnesses::default(),
    };
    if params.t() <= params.s() {
        cert.witnesses.notes.push(format!(
            "standing assumption fails: |theta-1|_p = p^-{} is not below |q-1|_p = p^-{}",
            params.t(),
            params.s()
        ));
        return Ok(cert);
    }
    if sol.kappa == 0 {
        // with no roots of x^k = 1-q there is nothing to escape to:
        // x = 1 attracts the whole domain
        cert.verdict = Verdict::UniqueAttractor;
        cert.witnesses.notes.push(
            "Sol_p(x^k + q - 1) is empty; the fixed point 1 attracts Dom(f_theta)".into(),
        );
        return Ok(cert);
    }
    let covering = build_covering(params)?;
    cert.witnesses.disjoint = Some(true); // build_covering verified it
    if covering.balls.iter().any(|b| b.root_hat.is_none()) {
        cert.witnesses
            .notes
            .push("some covering ball has no k-th root of 1-q attached; no branch system".into());
        cert.witnesses.covering = Some(covering);
        return Ok(cert);
    }
    if !condition_holds {
        cert.witnesses.notes.push(
            "repeller condition |k|_p > p^{s(k-1)/k}|theta-1|_p fails; no expansion".into(),
        );
        cert.witnesses.covering = Some(covering);
        return Ok(cert);
    }
    if covering.kappa() == 1 {
        cert.witnesses
            .notes
            .push("kappa_p = 1: a one-symbol shift certifies nothing".into());
        cert.witnesses.covering = Some(covering);
        return Ok(cert);
    }

    let scaling = verify_scaling(params, &covering, samples.max(1), seed)?;
    let scaling_ok = scaling.ok();
    if !scaling_ok {
        cert.witnesses
            .notes
            .push("scaling law violated on sampled pairs".into());
    }

    // incidence from branch membership: a_{ij} = 1 iff g_i(x_j) lands in
    // B(x_i); by the exact contraction of g_i and ultrametricity this is
    // equivalent to B(x_j) inside f(B(x_i)).
    let kappa = covering.kappa();
    let mut incidence = vec![vec![0u8; kappa]; kappa];
    let mut preimage_inside = true;
    let mut checks = 0usize;
    let mut sampler = Sampler::new(seed ^ 0x9e3779b97f4a7c15);
    let offset_digits = (params.precision() / 3).clamp(8, 24);
    for j in 0..kappa {
        let branches = covering.branches_at(params, covering.center(j))?;
        for (i, g) in branches.iter().enumerate() {
            checks += 1;
            if covering.balls[i].ball.contains(g)? {
                incidence[i][j] = 1;
            }
            if covering.member(g)?.is_none() {
                preimage_inside = false;
            }
        }
    }
    // randomized samples guard the ultrametric argument against
    // implementation slips
    for j in 0..kappa {
        for _ in 0..samples {
            let x = sampler.in_ball(covering.ball(j), offset_digits);
            let branches = covering.branches_at(params, &x)?;
            for (i, g) in branches.iter().enumerate() {
                checks += 1;
                if !covering.balls[i].ball.contains(g)? {
                    preimage_inside = false;
                    cert.witnesses.notes.push(format!(
                        "branch {i} moved a sample of ball {j} outside ball {i}"
                    ));
                }
            }
        }
    }

    let matrix = IncidenceMatrix::new(incidence.clone());
    let transitive = is_irreducible(&matrix);
    let all_ones = matrix.is_all_ones();

    cert.preimage_inside = Some(preimage_inside);
    cert.incidence = Some(incidence);
    cert.transitive = Some(transitive);
    cert.witnesses.scaling = Some(scaling);
    cert.witnesses.branch_membership_checks = checks;
    cert.witnesses.covering = Some(covering);

    cert.verdict = if all_ones && kappa >= 2 && scaling_ok && preimage_inside && condition_holds {
        Verdict::FullShiftChaos
    } else {
        Verdict::Inconclusive
    };
    Ok(cert)
}

/// One connected component of the depth-n Julia approximation: the points
/// whose first n+1 itinerary symbols spell `word`.
#[derive(Debug, Clone, Serialize)]
pub struct Cylinder {
    pub word: SymbolWord,
    pub ball: Ball,
}

#[derive(Debug, Clone, Serialize)]
pub struct JuliaApprox {
    pub depth: usize,
    pub tau: i64,
    pub cylinder_radius_exponent: i64,
    pub cylinders: Vec<Cylinder>,
}

/// Enumerates the cylinders of the intersection of f^{-m}(X), m <= depth, by
/// composing inverse branches along admissible words. Each inverse branch
/// contracts by exactly p^{-tau}, so cylinders at depth n are balls of radius
/// exponent m + n*tau.
pub fn julia_approx(
    params: &MapParams,
    covering: &CoveringX,
    cert: &RepellerCertificate,
    depth: usize,
) -> RepellerResult<JuliaApprox> {
    if cert.verdict != Verdict::FullShiftChaos {
        return Err(RepellerError::NotCertified("the Julia approximation"));
    }
    let tau = cert.tau.expect("certified parameters have integral tau");
    let m = covering.radius_exponent;
    let budget = params.precision() as i64 - 4;
    if m + depth as i64 * tau > budget {
        let max_depth = ((budget - m) / tau).max(0) as usize;
        return Err(RepellerError::DepthExceedsPrecision { max_depth });
    }
    let incidence = cert
        .incidence_matrix()
        .expect("certified parameters carry an incidence matrix");
    let radius = m + depth as i64 * tau;
    // grow cylinders by prepending symbols: the center of (i, w) is
    // g_i(center of w), and all kappa branches at a point share one k-th
    // root extraction
    let mut layer: Vec<(Vec<usize>, PadicNumber)> = (1..=covering.kappa())
        .map(|s| (vec![s], covering.center(s - 1).clone()))
        .collect();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * covering.kappa());
        for (word, center) in &layer {
            let branches = covering.branches_at(params, center)?;
            for (i, g) in branches.into_iter().enumerate() {
                if incidence.allows(i + 1, word[0]) {
                    let mut ext = Vec::with_capacity(word.len() + 1);
                    ext.push(i + 1);
                    ext.extend_from_slice(word);
                    next.push((ext, g));
                }
            }
        }
        layer = next;
    }
    layer.sort_by(|a, b| a.0.cmp(&b.0));
    let cylinders: Vec<Cylinder> = layer
        .into_iter()
        .map(|(symbols, center)| Cylinder {
            word: SymbolWord::new(symbols),
            ball: Ball::new(center, radius),
        })
        .collect();
    // invariance spot-check: f sends the depth-n cylinder of (i_0,...,i_n)
    // into the depth-(n-1) cylinder of the shifted word
    if depth >= 1 {
        let successor_radius = m + (depth as i64 - 1) * tau;
        for cyl in &cylinders {
            let image = params.eval(&cyl.ball.center)?;
            let shifted: Vec<usize> = cyl.word.symbols[1..].to_vec();
            let successor = cylinders
                .iter()
                .find(|c| c.word.symbols[..depth] == shifted[..])
                .expect("successor cylinder exists under the full shift");
            let successor_ball = Ball::new(successor.ball.center.clone(), successor_radius);
            if !successor_ball.contains(&image)? {
                return Err(RepellerError::Regime(
                    "cylinder image left its successor cylinder".into(),
                ));
            }
        }
    }
    Ok(JuliaApprox {
        depth,
        tau,
        cylinder_radius_exponent: radius,
        cylinders,
    })
}

/// The first `length` symbols of the itinerary of x through the covering.
/// Fails with the escape index if the orbit leaves X (so x is not in J_f).
pub fn itinerary(
    params: &MapParams,
    covering: &CoveringX,
    x: &PadicNumber,
    length: usize,
) -> RepellerResult<SymbolWord> {
    let mut symbols = Vec::with_capacity(length);
    let mut z = x.clone();
    for step in 0..length {
        match covering.member(&z)? {
            Some(i) => symbols.push(i + 1),
            None if step == 0 => return Err(RepellerError::NotInCovering),
            None => return Err(RepellerError::EscapedAtStep(step)),
        }
        if step + 1 < length {
            z = params.eval(&z)?;
        }
    }
    Ok(SymbolWord::new(symbols))
}

/// Realizes a word as a point: the center of its cylinder, or — for
/// `periodic` — the unique point with f^{|word|}(x) = x whose itinerary
/// cycles through the word, found by iterating the composed contraction.
pub fn point_from_itinerary(
    params: &MapParams,
    covering: &CoveringX,
    word: &SymbolWord,
    periodic: bool,
) -> RepellerResult<PadicNumber> {
    if word.is_empty() {
        return Err(RepellerError::BadWord("empty word".into()));
    }
    for &s in &word.symbols {
        if s == 0 || s > covering.kappa() {
            return Err(RepellerError::BadWord(format!(
                "symbol {s} outside 1..={}",
                covering.kappa()
            )));
        }
    }
    let n = word.len();
    if !periodic {
        let mut z = covering.center(word.symbols[n - 1] - 1).clone();
        for &sym in word.symbols[..n - 1].iter().rev() {
            z = covering.branch(params, sym - 1, &z)?;
        }
        return Ok(z);
    }
    // Banach iteration of G = g_{i_0} o ... o g_{i_{n-1}}
    let mut z = covering.center(word.symbols[0] - 1).clone();
    let max_rounds = params.precision() as usize * 4;
    for _ in 0..max_rounds {
        let mut y = z.clone();
        for &sym in word.symbols.iter().rev() {
            y = covering.branch(params, sym - 1, &y)?;
        }
        let delta = y.sub(&z)?;
        z = y;
        if delta.is_zero_at_precision() {
            let residual = params.iterate(&z, n)?.sub(&z)?;
            let threshold = params.precision() as i64 / 2;
            if !residual.norm_le(threshold).unwrap_or(false) {
                return Err(RepellerError::PeriodicDiverged);
            }
            return Ok(z);
        }
    }
    Err(RepellerError::PeriodicDiverged)
}

/// All periodic points of period dividing n with orbit in X, one per
/// admissible word of length n, in lexicographic word order.
pub fn periodic_points(
    params: &MapParams,
    covering: &CoveringX,
    cert: &RepellerCertificate,
    n: usize,
) -> RepellerResult<Vec<(SymbolWord, PadicNumber)>> {
    let incidence = cert
        .incidence_matrix()
        .ok_or(RepellerError::NotCertified("periodic point enumeration"))?;
    let mut words: Vec<Vec<usize>> = (1..=covering.kappa()).map(|s| vec![s]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &words {
            let last = *w.last().unwrap();
            for sym in 1..=covering.kappa() {
                if incidence.allows(last, sym) {
                    let mut ext = w.clone();
                    ext.push(sym);
                    next.push(ext);
                }
            }
        }
        words = next;
    }
    // a periodic word must also close up admissibly
    words.retain(|w| incidence.allows(*w.last().unwrap(), w[0]));
    let mut out = Vec::with_capacity(words.len());
    for symbols in words {
        let w = SymbolWord::new(symbols);
        let x = point_from_itinerary(params, covering, &w, true)?;
        out.push((w, x));
    }
    Ok(out)
}

/// Builds the metric table of the coding: per-symbol tau and the pairwise
/// kappa(i,j) read off the exact center distances.
pub fn metric_table(
    covering: &CoveringX,
    tau: i64,
) -> RepellerResult<crate::subshift::MetricTable> {
    let kappa = covering.kappa();
    let mut table = vec![vec![0i64; kappa]; kappa];
    for i in 0..kappa {
        for j in 0..kappa {
            if i == j {
                continue;
            }
            // kappa(i,j) is computed from the exact center distances; no
            // relation to tau is assumed (kappa = tau already occurs at
            // s = 0 with p not dividing k)
            let d = covering.center(i).sub(covering.center(j))?;
            table[i][j] = d.valuation()?;
        }
    }
    Ok(crate::subshift::MetricTable::new(vec![tau; kappa], table))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyViolation {
    pub word_x: SymbolWord,
    pub word_y: SymbolWord,
    pub detail: String,
}

/// Result of sampling the isometric-conjugacy identity
/// d_f(h(x), h(y)) = |x - y|_p and the semiconjugacy h o f = shift o h.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub pairs: usize,
    pub word_length: usize,
    pub isometry_violations: Vec<ConjugacyViolation>,
    pub semiconjugacy_violations: Vec<ConjugacyViolation>,
}

impl ConjugacyReport {
    pub fn ok(&self) -> bool {
        self.isometry_violations.is_empty() && self.semiconjugacy_violations.is_empty()
    }
}

pub fn verify_conjugacy(
    params: &MapParams,
    covering: &CoveringX,
    cert: &RepellerCertificate,
    pairs: usize,
    word_length: usize,
    seed: u64,
) -> RepellerResult<ConjugacyReport> {
    if cert.verdict != Verdict::FullShiftChaos {
        return Err(RepellerError::NotCertified("the conjugacy check"));
    }
    let tau = cert.tau.expect("certified tau");
    let table = metric_table(covering, tau)?;
    let mut sampler = Sampler::new(seed);
    let kappa = covering.kappa() as u64;
    let mut isometry_violations = Vec::new();
    let mut semiconjugacy_violations = Vec::new();
    let random_word = |sampler: &mut Sampler| -> SymbolWord {
        SymbolWord::new(
            (0..word_length)
                .map(|_| sampler.gen_range(1, kappa + 1) as usize)
                .collect(),
        )
    };
    for _ in 0..pairs {
        let wx = random_word(&mut sampler);
        let wy = random_word(&mut sampler);
        let x = point_from_itinerary(params, covering, &wx, false)?;
        let y = point_from_itinerary(params, covering, &wy, false)?;

        // isometry, both sides exact powers of p (or both zero)
        let df = crate::subshift::d_f(&wx, &wy, &table)?;
        let dist = x.sub(&y)?;
        let matches = match df {
            PNorm::Zero => dist.is_zero_at_precision(),
            PNorm::Power(_) => dist.norm().map(|nm| nm == df).unwrap_or(false),
        };
        if !matches {
            isometry_violations.push(ConjugacyViolation {
                word_x: wx.clone(),
                word_y: wy.clone(),
                detail: format!("d_f = {df} but |x-y|_p = {:?}", dist.norm()),
            });
        }

        // semiconjugacy: itinerary(f(x)) = shift(itinerary(x))
        let hx = itinerary(params, covering, &x, word_length)?;
        if hx != wx {
            semiconjugacy_violations.push(ConjugacyViolation {
                word_x: wx.clone(),
                word_y: wy.clone(),
                detail: format!("itinerary(x) = {hx} differs from its defining word"),
            });
        }
        if word_length >= 2 {
            let fx = params.eval(&x)?;
            let h_fx = itinerary(params, covering, &fx, word_length - 1)?;
            let shifted = crate::subshift::shift(&wx)?;
            if h_fx != shifted {
                semiconjugacy_violations.push(ConjugacyViolation {
                    word_x: wx,
                    word_y: wy,
                    detail: format!("itinerary(f(x)) = {h_fx} differs from shift = {shifted}"),
                });
            }
        }
    }
    Ok(ConjugacyReport {
        pairs,
        word_length,
        isometry_violations,
        semiconjugacy_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::in_ep;

    fn params(p: u64, q: u64, k: u32, theta: i64) -> MapParams {
        MapParams::from_integers(p, q, k, theta, 64).unwrap()
    }

    fn num(x: i64, p: u64) -> PadicNumber {
        PadicNumber::from_integer(x, p, 64).unwrap()
    }

    #[test]
    fn covering_for_p5_q2_k2() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        assert_eq!(cov.kappa(), 2);
        assert_eq!(cov.radius_exponent, 2);
        // eta_1 = 2, eta_2 = 3 from eta(xi-1) + xi + 1 = 0 (mod 5)
        assert_eq!(cov.balls[0].eta, Some(2));
        assert_eq!(cov.balls[1].eta, Some(3));
        assert!(cov.balls[0].ball.contains(&num(9, 5)).unwrap());
        assert!(cov.balls[1].ball.contains(&num(14, 5)).unwrap());
    }

    #[test]
    fn covering_for_p7_q2_k3() {
        let m = params(7, 2, 3, 8);
        let cov = build_covering(&m).unwrap();
        assert_eq!(cov.kappa(), 3);
        assert_eq!(cov.radius_exponent, 2);
        // xi = 6 hits xi + q - 1 = 0 (mod 7): center is 1 - q = -1
        let b6 = cov.balls.iter().find(|b| b.xi == 6).unwrap();
        assert!(b6.eta.is_none());
        assert!(b6.ball.contains(&num(-1, 7)).unwrap());
        // xi = 3: 2 eta + 4 = 0 (mod 7) -> eta = 5; xi = 5: 4 eta + 6 = 0 -> eta = 2
        assert_eq!(cov.balls.iter().find(|b| b.xi == 3).unwrap().eta, Some(5));
        assert_eq!(cov.balls.iter().find(|b| b.xi == 5).unwrap().eta, Some(2));
    }

    #[test]
    fn covering_unavailable_when_sol_empty() {
        let m = params(7, 3, 2, 8);
        assert!(matches!(
            build_covering(&m),
            Err(RepellerError::CoveringUnavailable)
        ));
    }

    #[test]
    fn scaling_exponents() {
        assert_eq!(scaling_exponent(&params(5, 2, 2, 6)), Some(1));
        assert_eq!(scaling_exponent(&params(7, 2, 3, 8)), Some(1));
        // k = 10 at theta = 26: tau = t - v_p(k) = 2 - 1
        assert_eq!(scaling_exponent(&params(5, 2, 10, 26)), Some(1));
        assert_eq!(scaling_exponent(&params(5, 2, 10, 6)), Some(0));
    }

    #[test]
    fn scaling_law_holds_exactly() {
        for (m, want_tau) in [
            (params(5, 2, 2, 6), 1),
            (params(7, 2, 3, 8), 1),
            (params(5, 2, 10, 26), 1),
        ] {
            let cov = build_covering(&m).unwrap();
            let report = verify_scaling(&m, &cov, 24, 5).unwrap();
            assert_eq!(report.tau, want_tau);
            assert!(report.ok(), "violations: {:?}", report.per_ball);
        }
    }

    #[test]
    fn certify_full_shift_examples() {
        let cert = certify(&params(5, 2, 2, 6)).unwrap();
        assert_eq!(cert.verdict, Verdict::FullShiftChaos);
        assert_eq!(cert.kappa, 2);
        assert_eq!(cert.tau, Some(1));
        assert_eq!(cert.incidence, Some(vec![vec![1, 1], vec![1, 1]]));
        assert_eq!(cert.transitive, Some(true));
        assert_eq!(cert.preimage_inside, Some(true));

        let cert = certify(&params(7, 2, 3, 8)).unwrap();
        assert_eq!(cert.verdict, Verdict::FullShiftChaos);
        assert_eq!(cert.kappa, 3);
        assert_eq!(cert.incidence, Some(vec![vec![1; 3]; 3]));
    }

    #[test]
    fn certify_unique_attractor() {
        let cert = certify(&params(7, 3, 2, 8)).unwrap();
        assert_eq!(cert.verdict, Verdict::UniqueAttractor);
        assert_eq!(cert.kappa, 0);
    }

    #[test]
    fn certify_negative_control_k10() {
        // |10|_5 = 5^-1 equals p^0 |theta-1|_5: strict inequality fails
        let cert = certify(&params(5, 2, 10, 6)).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(!cert.condition_holds);
        assert_eq!(cert.tau, Some(0));
        assert_eq!(cert.kappa, 2);
    }

    #[test]
    fn condition_is_equivalent_to_positive_tau() {
        for (p, q, k, theta) in [
            (5u64, 2u64, 2u32, 6i64),
            (7, 2, 3, 8),
            (5, 2, 10, 6),
            (5, 2, 10, 26),
            (7, 3, 2, 8),
            (13, 3, 4, 14),
        ] {
            let m = params(p, q, k, theta);
            if let Some(tau) = scaling_exponent(&m) {
                assert_eq!(
                    repeller_condition(&m),
                    tau >= 1,
                    "condition/tau mismatch at ({p},{q},{k},{theta})"
                );
            }
        }
    }

    #[test]
    fn certify_p_dividing_k_repeller() {
        // k = 10, theta = 26: t = 2, tau = 1; chaos with branch roots through exp/log
        let cert = certify(&params(5, 2, 10, 26)).unwrap();
        assert_eq!(cert.verdict, Verdict::FullShiftChaos);
        assert_eq!(cert.kappa, 2);
    }

    #[test]
    fn certify_scaled_case_s_positive() {
        // q = 26: |q-1|_5 = 5^-2, theta = 126: t = 3 > s = 2, k = 2 | s,
        // xi^2 = (1-q)/p^s = -1 (mod 5); tau = t - s(k-1)/k = 2
        let m = params(5, 26, 2, 126);
        assert_eq!(m.s(), 2);
        assert_eq!(m.t(), 3);
        let cov = build_covering(&m).unwrap();
        assert_eq!(cov.kappa(), 2);
        assert_eq!(cov.radius_exponent, 2 / 2 + 1 + 3);
        // centers 1 - q + p^{s/k} xi (theta - 1) = -25 + 625 xi
        assert!(cov.balls[0].ball.contains(&num(-25 + 625 * 2, 5)).unwrap());
        assert!(cov.balls[1].ball.contains(&num(-25 + 625 * 3, 5)).unwrap());
        let scaling = verify_scaling(&m, &cov, 16, 2).unwrap();
        assert_eq!(scaling.tau, 2);
        assert!(scaling.ok());
        let cert = certify(&m).unwrap();
        assert_eq!(cert.verdict, Verdict::FullShiftChaos);
        assert_eq!(cert.tau, Some(2));
        let report = verify_conjugacy(&m, &cov, &cert, 10, 5, 3).unwrap();
        assert!(report.ok(), "{report:?}");
        // t <= s is refused outright
        let shallow = params(5, 26, 2, 26);
        assert!(matches!(build_covering(&shallow), Err(RepellerError::Regime(_))));
        let cert = certify(&shallow).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn julia_cylinder_counts_and_radii() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let cert = certify(&m).unwrap();
        let j0 = julia_approx(&m, &cov, &cert, 0).unwrap();
        assert_eq!(j0.cylinders.len(), 2);
        assert_eq!(j0.cylinder_radius_exponent, 2);
        let j3 = julia_approx(&m, &cov, &cert, 3).unwrap();
        assert_eq!(j3.cylinders.len(), 16);
        assert_eq!(j3.cylinder_radius_exponent, 5);
        // depth beyond precision is refused with the max safe depth
        let err = julia_approx(&m, &cov, &cert, 100).unwrap_err();
        assert!(matches!(err, RepellerError::DepthExceedsPrecision { .. }));
    }

    #[test]
    fn itinerary_round_trip() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let cert = certify(&m).unwrap();
        // itinerary of a center starts with its own symbol
        let w = itinerary(&m, &cov, cov.center(0), 1).unwrap();
        assert_eq!(w.symbols, vec![1]);
        // periodic word (1,2) has itinerary (1,2,1,2,...)
        let word = SymbolWord::new(vec![1, 2]);
        let x = point_from_itinerary(&m, &cov, &word, true).unwrap();
        let it = itinerary(&m, &cov, &x, 6).unwrap();
        assert_eq!(it.symbols, vec![1, 2, 1, 2, 1, 2]);
        // f^2(x) = x
        let back = m.iterate(&x, 2).unwrap();
        assert!(back.sub(&x).unwrap().norm_le(32).unwrap());
        // x = 1 is not in X
        assert!(matches!(
            itinerary(&m, &cov, &num(1, 5), 3),
            Err(RepellerError::NotInCovering)
        ));
        let _ = cert;
    }

    #[test]
    fn branches_fix_their_fixed_points_and_invert_f_on_samples() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        // g_i fixes the fixed point living in ball i
        for i in 0..cov.kappa() {
            let w = SymbolWord::new(vec![i + 1]);
            let xstar = point_from_itinerary(&m, &cov, &w, true).unwrap();
            let g = cov.branch(&m, i, &xstar).unwrap();
            assert!(g.sub(&xstar).unwrap().norm_le(32).unwrap());
        }
        // f(g_i(x)) = x for every branch on sampled points of X
        let mut sampler = Sampler::new(41);
        for j in 0..cov.kappa() {
            for _ in 0..8 {
                let x = sampler.in_ball(cov.ball(j), 20);
                for (i, g) in cov.branches_at(&m, &x).unwrap().iter().enumerate() {
                    assert!(cov.balls[i].ball.contains(g).unwrap());
                    let back = m.eval(g).unwrap();
                    assert!(back.sub(&x).unwrap().norm_le(32).unwrap());
                }
            }
        }
    }

    #[test]
    fn cylinders_have_distinct_words_and_centers() {
        // coding bijectivity at depth n: distinct cylinders are disjoint and
        // every admissible word is realized
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let cert = certify(&m).unwrap();
        let approx = julia_approx(&m, &cov, &cert, 2).unwrap();
        assert_eq!(approx.cylinders.len(), 8);
        for (i, a) in approx.cylinders.iter().enumerate() {
            for b in approx.cylinders.iter().skip(i + 1) {
                assert_ne!(a.word, b.word);
                assert!(a.ball.disjoint_from(&b.ball).unwrap());
            }
        }
    }

    #[test]
    fn fixed_points_inside_balls_are_repelling() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        for i in 0..2 {
            let w = SymbolWord::new(vec![i + 1]);
            let x = point_from_itinerary(&m, &cov, &w, true).unwrap();
            assert!(cov.balls[i].ball.contains(&x).unwrap());
            let report = m.classify_fixed_point(&x).unwrap();
            assert_eq!(report.class, crate::potts::FixedPointClass::Repelling);
            assert_eq!(report.multiplier_norm_exponent, 1);
        }
    }

    #[test]
    fn period_counting_matches_trace() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let cert = certify(&m).unwrap();
        let a = cert.incidence_matrix().unwrap();
        for n in 1..=3usize {
            let pts = periodic_points(&m, &cov, &cert, n).unwrap();
            assert_eq!(
                pts.len() as u128,
                crate::subshift::count_periodic(&a, n as u32)
            );
            // pairwise distinct and genuinely periodic
            for (i, (_, x)) in pts.iter().enumerate() {
                let back = m.iterate(x, n).unwrap();
                assert!(back.sub(x).unwrap().norm_le(32).unwrap());
                for (_, y) in pts.iter().skip(i + 1) {
                    assert!(!x.sub(y).unwrap().is_zero_at_precision());
                }
            }
        }
    }

    #[test]
    fn conjugacy_isometry_and_semiconjugacy() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let cert = certify(&m).unwrap();
        let report = verify_conjugacy(&m, &cov, &cert, 25, 7, 11).unwrap();
        assert!(report.ok(), "{:?}", report);
    }

    #[test]
    fn metric_table_center_distances() {
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let table = metric_table(&cov, 1).unwrap();
        // |9 - 14|_5 = 5^-1
        assert_eq!(table.kappa_table[0][1], 1);
        assert_eq!(table.kappa_table[1][0], 1);
    }

    #[test]
    fn orbits_outside_x_converge_to_one() {
        // points off X (and off the pole) reach E_p within 2 steps and
        // then contract to the fixed point 1
        let m = params(5, 2, 2, 6);
        let cov = build_covering(&m).unwrap();
        let mut sampler = Sampler::new(23);
        let one = num(1, 5);
        let mut tested = 0;
        while tested < 20 {
            let x = sampler.qp(5, 48, 64, -3, 3);
            if cov.member(&x).unwrap().is_some() || x.sub(m.pole()).unwrap().is_zero_at_precision()
            {
                continue;
            }
            tested += 1;
            let mut z = x;
            let mut entered = false;
            for _ in 0..2 {
                z = m.eval(&z).unwrap();
                if in_ep(&z).unwrap() {
                    entered = true;
                    break;
                }
            }
            assert!(entered, "orbit failed to enter E_p within 2 steps");
            for _ in 0..200 {
                if z.sub(&one).unwrap().norm_le(32).unwrap() {
                    break;
                }
                z = m.eval(&z).unwrap();
            }
            assert!(z.sub(&one).unwrap().norm_le(32).unwrap());
        }
    }
}
