//! Finite-volume p-adic Potts measures on the Cayley tree: the Hamiltonian
//! H(sigma) = J sum delta_{sigma(x)sigma(y)}, the measures
//! mu^(n)(sigma) = exp_p(H_n) prod h_{sigma(x),x} / Z_n, the compatibility
//! identity between consecutive levels, and the boundary-field recursion
//! F whose invariant line reduces to h = f_theta(h) — the origin of the
//! Potts-Bethe map.

mod tree;

pub use tree::{config_count, CayleyTree, Configuration};

use serde::Serialize;
use thiserror::Error;

use crate::padic::{exp_p, PadicError, PadicNumber};
use crate::potts::{MapParams, PottsError};
use crate::repeller::{self, RepellerError};
use crate::subshift::SymbolWord;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GibbsError {
    #[error("coupling J must satisfy |J|_p <= p^-1 so exp_p(H) converges")]
    CouplingTooLarge,
    #[error("boundary field has a non-invertible last component at vertex {0}")]
    FieldNotReducible(usize),
    #[error("recursion denominator vanished at precision")]
    RecursionPole,
    #[error("configuration has {got} spins, expected {want}")]
    ConfigSize { got: usize, want: usize },
    #[error("state space q = {0} is too large for exact enumeration here")]
    QTooLarge(u64),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Potts(#[from] PottsError),
    #[error(transparent)]
    Repeller(#[from] RepellerError),
}

pub type GibbsResult<T> = Result<T, GibbsError>;

/// Per-vertex boundary field vectors h_x in Q_p^q, indexed like the tree.
/// The root carries a field too: the n = 1 compatibility identity involves
/// mu^(0), which reads it. Generated assignments fill it via the recursion.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryFieldAssignment {
    pub q: u8,
    pub fields: Vec<Vec<PadicNumber>>,
}

impl BoundaryFieldAssignment {
    /// Same q-vector at every vertex.
    pub fn uniform(tree: &CayleyTree, q: u8, value: Vec<PadicNumber>) -> Self {
        debug_assert_eq!(value.len(), q as usize);
        BoundaryFieldAssignment {
            q,
            fields: vec![value; tree.vertex_count()],
        }
    }

    /// One q-vector per level (vertices of W_m share per_level[m]).
    pub fn from_levels(tree: &CayleyTree, q: u8, per_level: &[Vec<PadicNumber>]) -> Self {
        debug_assert_eq!(per_level.len(), tree.levels as usize + 1);
        let fields = (0..tree.vertex_count())
            .map(|v| per_level[tree.level_of(v) as usize].clone())
            .collect();
        BoundaryFieldAssignment { q, fields }
    }

    pub fn field(&self, vertex: usize) -> &[PadicNumber] {
        &self.fields[vertex]
    }

    /// Reduced vector h-hat with h-hat_i = h_i / h_q (length q-1); needs the
    /// last component invertible at precision.
    pub fn hat(&self, vertex: usize) -> GibbsResult<Vec<PadicNumber>> {
        let h = &self.fields[vertex];
        let last = &h[self.q as usize - 1];
        if last.is_zero_at_precision() {
            return Err(GibbsError::FieldNotReducible(vertex));
        }
        h[..self.q as usize - 1]
            .iter()
            .map(|c| c.div(last).map_err(GibbsError::from))
            .collect()
    }

    /// Multiplies one component of one vertex field by `factor` (the knob the
    /// compatibility falsification tests turn).
    pub fn perturb(&mut self, vertex: usize, component: usize, factor: &PadicNumber) {
        let c = &self.fields[vertex][component];
        self.fields[vertex][component] = c.mul(factor).expect("same prime");
    }
}

/// H(sigma) = J * (number of edges of L_n whose endpoints agree).
pub fn hamiltonian(
    tree: &CayleyTree,
    config: &Configuration,
    coupling: &PadicNumber,
) -> GibbsResult<PadicNumber> {
    if !coupling.norm_le(1).unwrap_or(false) {
        return Err(GibbsError::CouplingTooLarge);
    }
    let n = tree.levels;
    if config.spins.len() != tree.vertex_count_at(n) {
        return Err(GibbsError::ConfigSize {
            got: config.spins.len(),
            want: tree.vertex_count_at(n),
        });
    }
    let agree = tree
        .edges_up_to(n)
        .filter(|&(a, b)| config.spin(a) == config.spin(b))
        .count();
    Ok(coupling.mul_integer(agree as i64)?)
}

/// The finite-volume measure mu^(n) in evaluated form: one exact weight per
/// configuration of V_n and the normalizer Z_n, computed by full enumeration.
pub struct LevelMeasure {
    pub level: u32,
    pub q: u8,
    vertices: usize,
    weights: Vec<PadicNumber>,
    z: PadicNumber,
    z_inv: PadicNumber,
}

/// Builds mu^(level) from the boundary fields on W_level and
/// theta = exp_p(J). Exact enumeration of all q^{|V_level|} configurations.
pub fn level_measure(
    tree: &CayleyTree,
    fields: &BoundaryFieldAssignment,
    theta: &PadicNumber,
    level: u32,
) -> GibbsResult<LevelMeasure> {
    let q = fields.q;
    if q as u64 > 16 {
        return Err(GibbsError::QTooLarge(q as u64));
    }
    let vertices = tree.vertex_count_at(level);
    let total = config_count(vertices, q);
    debug_assert!(total <= 1 << 24, "enumeration kept at desk scale");
    // theta^c for every possible agreement count
    let mut theta_powers = Vec::with_capacity(tree.edge_count_at(level) + 1);
    let mut acc = PadicNumber::one(theta.prime(), theta.precision().unwrap_or(32));
    theta_powers.push(acc.clone());
    for _ in 0..tree.edge_count_at(level) {
        acc = acc.mul(theta)?;
        theta_powers.push(acc.clone());
    }
    let edges: Vec<(usize, usize)> = tree.edges_up_to(level).collect();
    let boundary: Vec<usize> = tree.level_vertices(level).collect();
    let mut weights = Vec::with_capacity(total as usize);
    let mut z = PadicNumber::zero(theta.prime());
    for rank in 0..total {
        let sigma = Configuration::from_rank(rank, vertices, q);
        let agree = edges
            .iter()
            .filter(|&&(a, b)| sigma.spin(a) == sigma.spin(b))
            .count();
        let mut w = theta_powers[agree].clone();
        for &x in &boundary {
            w = w.mul(&fields.field(x)[sigma.spin(x) as usize - 1])?;
        }
        z = z.add(&w)?;
        weights.push(w);
    }
    if z.is_zero_at_precision() {
        return Err(GibbsError::Padic(PadicError::exhausted(
            "normalizing mu^(n): Z_n cancelled to zero",
            z.absolute_precision().unwrap_or(0),
        )));
    }
    let z_inv = z.inv()?;
    Ok(LevelMeasure {
        level,
        q,
        vertices,
        weights,
        z,
        z_inv,
    })
}

impl LevelMeasure {
    pub fn z(&self) -> &PadicNumber {
        &self.z
    }

    pub fn mu(&self, config: &Configuration) -> GibbsResult<PadicNumber> {
        if config.spins.len() != self.vertices {
            return Err(GibbsError::ConfigSize {
                got: config.spins.len(),
                want: self.vertices,
            });
        }
        Ok(self.weights[config.rank(self.q) as usize].mul(&self.z_inv)?)
    }

    /// Checks sum_sigma mu = 1 exactly at precision.
    pub fn normalization_holds(&self) -> GibbsResult<bool> {
        let p = self.z.prime();
        let mut sum = PadicNumber::zero(p);
        for w in &self.weights {
            sum = sum.add(w)?;
        }
        let one = PadicNumber::one(p, self.z.precision().unwrap_or(32));
        Ok(sum.mul(&self.z_inv)?.sub(&one)?.is_zero_at_precision())
    }

    /// sup over configurations of |mu(sigma)|_p, as a norm exponent
    /// (boundedness metadata; no infinite-volume claim).
    pub fn sup_norm_exponent(&self) -> GibbsResult<i64> {
        let mut best = i64::MIN;
        for w in &self.weights {
            if w.is_exact_zero() {
                continue;
            }
            let e = -(w.valuation()?) + self.z.valuation()?;
            best = best.max(e);
        }
        Ok(best)
    }
}

/// Convenience wrapper over a single configuration: evaluates
/// mu^(n)(sigma) with theta = exp_p(J) built internally.
pub fn mu_n(
    tree: &CayleyTree,
    fields: &BoundaryFieldAssignment,
    coupling: &PadicNumber,
    config: &Configuration,
) -> GibbsResult<PadicNumber> {
    if !coupling.norm_le(1).unwrap_or(false) {
        return Err(GibbsError::CouplingTooLarge);
    }
    let theta = exp_p(coupling)?;
    let level = (0..=tree.levels)
        .find(|&n| tree.vertex_count_at(n) == config.spins.len())
        .ok_or(GibbsError::ConfigSize {
            got: config.spins.len(),
            want: tree.vertex_count(),
        })?;
    level_measure(tree, fields, &theta, level)?.mu(config)
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityViolation {
    pub sigma: Configuration,
    pub marginal: PadicNumber,
    pub expected: PadicNumber,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityReport {
    pub level: u32,
    pub configurations_checked: u128,
    pub holds: bool,
    pub violations: Vec<CompatibilityViolation>,
}

/// Verifies sum_omega mu^(n)(sigma v omega) = mu^(n-1)(sigma) for every
/// sigma on V_{n-1}, exactly at the carried precision. Witnesses up to 8
/// violating configurations.
pub fn check_compatibility(
    tree: &CayleyTree,
    fields: &BoundaryFieldAssignment,
    coupling: &PadicNumber,
    n: u32,
) -> GibbsResult<CompatibilityReport> {
    assert!(n >= 1 && n <= tree.levels);
    if !coupling.norm_le(1).unwrap_or(false) {
        return Err(GibbsError::CouplingTooLarge);
    }
    let theta = exp_p(coupling)?;
    let fine = level_measure(tree, fields, &theta, n)?;
    let coarse = level_measure(tree, fields, &theta, n - 1)?;
    let q = fields.q;
    let small_vertices = tree.vertex_count_at(n - 1);
    let w_n = tree.level_size(n);
    let mut violations = Vec::new();
    let sigma_total = config_count(small_vertices, q);
    let omega_total = config_count(w_n, q);
    for srank in 0..sigma_total {
        let sigma = Configuration::from_rank(srank, small_vertices, q);
        let mut marginal = PadicNumber::zero(coupling.prime());
        for orank in 0..omega_total {
            let omega = Configuration::from_rank(orank, w_n, q);
            marginal = marginal.add(&fine.mu(&sigma.concat(&omega))?)?;
        }
        let expected = coarse.mu(&sigma)?;
        if !marginal.sub(&expected)?.is_zero_at_precision() && violations.len() < 8 {
            violations.push(CompatibilityViolation {
                sigma,
                marginal,
                expected,
            });
        }
    }
    Ok(CompatibilityReport {
        level: n,
        configurations_checked: sigma_total,
        holds: violations.is_empty(),
        violations,
    })
}

/// One application of the boundary-field recursion, componentwise:
/// F_i(x; theta) = ((theta-1) x_i + sum_j x_j + 1) / (sum_j x_j + theta).
pub fn recursion_f(
    xhat: &[PadicNumber],
    theta: &PadicNumber,
) -> GibbsResult<Vec<PadicNumber>> {
    let p = theta.prime();
    let precision = theta.precision().unwrap_or(32);
    let one = PadicNumber::one(p, precision);
    let mut sum = PadicNumber::zero(p);
    for x in xhat {
        sum = sum.add(x)?;
    }
    let den = sum.add(theta)?;
    if den.is_zero_at_precision() {
        return Err(GibbsError::RecursionPole);
    }
    let theta_minus_one = theta.sub(&one)?;
    xhat.iter()
        .map(|xi| {
            let num = theta_minus_one.mul(xi)?.add(&sum)?.add(&one)?;
            num.div(&den).map_err(GibbsError::from)
        })
        .collect()
}

/// The root-ward product over the k children of a vertex whose children all
/// carry `child_hat`: componentwise F(child)^k.
pub fn recursion_step_uniform(
    child_hat: &[PadicNumber],
    theta: &PadicNumber,
    k: u32,
) -> GibbsResult<Vec<PadicNumber>> {
    Ok(recursion_f(child_hat, theta)?
        .into_iter()
        .map(|c| c.pow(k))
        .collect())
}

/// Unhatted representative (hat_1, ..., hat_{q-1}, 1) of a projective field.
fn unhat(hat: &[PadicNumber], p: u64, precision: u32) -> Vec<PadicNumber> {
    let mut h: Vec<PadicNumber> = hat.to_vec();
    h.push(PadicNumber::one(p, precision));
    h
}

/// Fields generated by running the recursion root-ward from a uniform leaf
/// field: W_levels carries `leaf_hat`, and level m carries F(level m+1)^k.
/// By the compatibility theorem these pass check_compatibility at every level.
pub fn generate_by_recursion(
    tree: &CayleyTree,
    q: u8,
    theta: &PadicNumber,
    leaf_hat: &[PadicNumber],
) -> GibbsResult<BoundaryFieldAssignment> {
    debug_assert_eq!(leaf_hat.len(), q as usize - 1);
    let p = theta.prime();
    let precision = theta.precision().unwrap_or(32);
    let levels = tree.levels as usize;
    let mut per_level_hat: Vec<Vec<PadicNumber>> = vec![Vec::new(); levels + 1];
    per_level_hat[levels] = leaf_hat.to_vec();
    for m in (0..levels).rev() {
        per_level_hat[m] =
            recursion_step_uniform(&per_level_hat[m + 1], theta, tree.order)?;
    }
    let per_level: Vec<Vec<PadicNumber>> = per_level_hat
        .iter()
        .map(|hat| unhat(hat, p, precision))
        .collect();
    Ok(BoundaryFieldAssignment::from_levels(tree, q, &per_level))
}

/// Translation-invariant assignment on the invariant line (h, 1, ..., 1)
/// from a fixed point h of f_theta.
pub fn ti_field(
    tree: &CayleyTree,
    q: u8,
    h: &PadicNumber,
    precision: u32,
) -> BoundaryFieldAssignment {
    let p = h.prime();
    let mut hat = vec![h.clone()];
    for _ in 1..q - 1 {
        hat.push(PadicNumber::one(p, precision));
    }
    BoundaryFieldAssignment::uniform(tree, q, unhat(&hat, p, precision))
}

/// Level-periodic assignment from a period-n orbit (z, f(z), ..., f^{n-1}(z)):
/// level m carries the orbit point orbit[(n - m mod n) mod n] on the invariant
/// line, so each level is f_theta of the one below it.
pub fn periodic_field(
    tree: &CayleyTree,
    q: u8,
    orbit: &[PadicNumber],
    precision: u32,
) -> BoundaryFieldAssignment {
    let n = orbit.len();
    let p = orbit[0].prime();
    let per_level: Vec<Vec<PadicNumber>> = (0..=tree.levels as usize)
        .map(|m| {
            let z = &orbit[(n - m % n) % n];
            let mut hat = vec![z.clone()];
            for _ in 1..q - 1 {
                hat.push(PadicNumber::one(p, precision));
            }
            unhat(&hat, p, precision)
        })
        .collect();
    BoundaryFieldAssignment::from_levels(tree, q, &per_level)
}

/// A generated assignment together with where it came from.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratedField {
    pub origin: String,
    pub assignment: BoundaryFieldAssignment,
}

/// Translation-invariant assignments from the fixed points of f_theta (the
/// point 1 and, when the repeller machinery applies, the kappa_p points
/// inside X) and level-periodic assignments from period-n orbits.
pub fn ti_and_periodic_fields(
    params: &MapParams,
    tree: &CayleyTree,
    period: usize,
) -> GibbsResult<Vec<GeneratedField>> {
    let q = u8::try_from(params.q()).map_err(|_| GibbsError::QTooLarge(params.q()))?;
    let precision = params.precision();
    let one = PadicNumber::one(params.p(), precision);
    let mut out = vec![GeneratedField {
        origin: "fixed point 1".into(),
        assignment: ti_field(tree, q, &one, precision),
    }];
    // nontrivial fixed points live in the covering and are reachable by the
    // contracting inverse branches only in the expanding regime
    if !repeller::repeller_condition(params) {
        return Ok(out);
    }
    let covering = match repeller::build_covering(params) {
        Ok(c) => c,
        Err(RepellerError::CoveringUnavailable) => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    if covering.balls.iter().any(|b| b.root_hat.is_none()) {
        return Ok(out);
    }
    for i in 0..covering.kappa() {
        let word = SymbolWord::new(vec![i + 1]);
        let h = repeller::point_from_itinerary(params, &covering, &word, true)?;
        out.push(GeneratedField {
            origin: format!("fixed point in covering ball {}", i + 1),
            assignment: ti_field(tree, q, &h, precision),
        });
    }
    if period >= 2 {
        for word in primitive_necklaces(covering.kappa(), period) {
            let z = repeller::point_from_itinerary(params, &covering, &word, true)?;
            let mut orbit = vec![z];
            for _ in 1..period {
                let next = params.eval(orbit.last().unwrap())?;
                orbit.push(next);
            }
            out.push(GeneratedField {
                origin: format!("period-{period} orbit of word {word}"),
                assignment: periodic_field(tree, q, &orbit, precision),
            });
        }
    }
    Ok(out)
}

/// Words of length n over 1..=kappa that are lexicographically minimal among
/// their rotations and not powers of shorter words: one representative per
/// primitive period-n orbit.
fn primitive_necklaces(kappa: usize, n: usize) -> Vec<SymbolWord> {
    let mut out = Vec::new();
    let total = (kappa as u128).pow(n as u32);
    'outer: for code in 0..total {
        let mut c = code;
        let mut word = Vec::with_capacity(n);
        for _ in 0..n {
            word.push((c % kappa as u128) as usize + 1);
            c /= kappa as u128;
        }
        for r in 1..n {
            let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            if rotated < word {
                continue 'outer; // not the canonical rotation
            }
            if rotated == word {
                continue 'outer; // power of a shorter word
            }
        }
        out.push(SymbolWord::new(word));
    }
    out
}
