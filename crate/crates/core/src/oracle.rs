//! Semi-decision procedure for stability on a product of circular domains.
//!
//! Non-stability is certified by an interior zero whose residual and boundary
//! margin are checked after polishing. Stability is only ever evidenced: a
//! [`StabilityVerdict::NoZeroFound`] records how much searching was done.
//!
//! The search slices along coordinate lines. For each variable and each round,
//! all coordinates are sampled from their domains, the polynomial is restricted
//! to the line through that point parallel to the chosen axis, and the exact
//! roots of the restriction are tested for interior membership. Slices are
//! independent and seeded by their index, so parallel and sequential runs agree.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{CircularDomain, DomainProduct, SamplerConfig};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::poly::{ExponentVector, MultiPoly, C64};
use crate::roots::roots_of_coeffs;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub slices_per_variable: usize,
    pub seed: u64,
    pub residual_tol: f64,
    pub boundary_margin: f64,
    pub max_newton_iters: usize,
    pub sampler: SamplerConfig,
    pub exec: ExecMode,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            slices_per_variable: 200,
            seed: 0,
            residual_tol: 1e-9,
            boundary_margin: 1e-7,
            max_newton_iters: 50,
            sampler: SamplerConfig::default(),
            exec: ExecMode::default(),
        }
    }
}

impl OracleConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.slices_per_variable > 0
            && self.residual_tol > 0.0
            && self.boundary_margin > 0.0
            && self.max_newton_iters > 0
            && self.sampler.cap > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("oracle configuration values must be positive".into()))
        }
    }
}

/// A certified interior zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub point: Vec<C64>,
    /// `|f(point)|`.
    pub residual: f64,
    /// `Σ |c_α| |point^α|`; the certificate requires `residual ≤ tol · scale`.
    pub scale: f64,
    /// Smallest coordinate distance to the boundary.
    pub boundary_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StabilityVerdict {
    Counterexample(Counterexample),
    NoZeroFound {
        slices_per_variable: usize,
        total_samples: usize,
        /// Smallest `|f(p)| / scale(f, p)` over the sampled points.
        min_abs_seen: f64,
    },
}

impl StabilityVerdict {
    pub fn is_no_zero(&self) -> bool {
        matches!(self, StabilityVerdict::NoZeroFound { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            StabilityVerdict::Counterexample(c) => Some(c),
            _ => None,
        }
    }
}

/// Re-evaluate a witness independently of the search that produced it.
pub fn verify_counterexample(
    f: &MultiPoly,
    omega: &DomainProduct,
    witness: &Counterexample,
    cfg: &OracleConfig,
) -> bool {
    let (Ok(v), Ok(scale)) = (f.evaluate(&witness.point), f.eval_scale(&witness.point)) else {
        return false;
    };
    let margin = omega.margin(&witness.point);
    v.norm() <= cfg.residual_tol * scale && margin >= cfg.boundary_margin && margin > 0.0
}

struct SliceOutcome {
    hit: Option<Counterexample>,
    min_rel: f64,
}

struct Search<'a> {
    f: &'a MultiPoly,
    grad: Vec<MultiPoly>,
    omega: &'a DomainProduct,
    cfg: &'a OracleConfig,
}

impl Search<'_> {
    fn certify(&self, point: Vec<C64>) -> Option<Counterexample> {
        let residual = self.f.evaluate(&point).ok()?.norm();
        let scale = self.f.eval_scale(&point).ok()?;
        let margin = self.omega.margin(&point);
        (residual <= self.cfg.residual_tol * scale && margin >= self.cfg.boundary_margin)
            .then_some(Counterexample { point, residual, scale, boundary_margin: margin })
    }

    /// Minimum-norm Newton steps on `f = 0` in all coordinates, kept interior.
    fn polish(&self, mut q: Vec<C64>) -> Vec<C64> {
        let mut fq = match self.f.evaluate(&q) {
            Ok(v) => v,
            Err(_) => return q,
        };
        for _ in 0..self.cfg.max_newton_iters {
            if fq.norm() == 0.0 {
                break;
            }
            let g: Vec<C64> = self.grad.iter().map(|d| d.evaluate(&q).unwrap_or_default()).collect();
            let gn: f64 = g.iter().map(|x| x.norm_sqr()).sum();
            if gn == 0.0 || !gn.is_finite() {
                break;
            }
            let step = -fq / gn;
            let cand: Vec<C64> = q.iter().zip(&g).map(|(x, gi)| x + step * gi.conj()).collect();
            if self.omega.margin(&cand) < self.cfg.boundary_margin {
                break;
            }
            let fc = match self.f.evaluate(&cand) {
                Ok(v) => v,
                Err(_) => break,
            };
            if !(fc.norm() < fq.norm()) {
                break;
            }
            q = cand;
            fq = fc;
        }
        q
    }

    fn run_slice(&self, index: usize) -> Result<SliceOutcome> {
        let n = self.f.nvars();
        let var = index / self.slices_per_var();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(index as u64);
        let mut point = Vec::with_capacity(n);
        for dom in self.omega.domains() {
            point.push(dom.sample_interior(&mut rng, self.cfg.boundary_margin, &self.cfg.sampler)?);
        }
        let value = self.f.evaluate(&point)?;
        let scale = self.f.eval_scale(&point)?;
        let min_rel = if scale > 0.0 { value.norm() / scale } else { 0.0 };

        let line = self.f.restrict_to_univariate(var, &point)?;
        let line_scale = line.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if line_scale <= 1e-14 * scale {
            // f vanishes (numerically) on the whole line through `point`
            let hit = self.certify(self.polish(point));
            return Ok(SliceOutcome { hit, min_rel });
        }
        let mut deg = line.len() - 1;
        while deg > 0 && line[deg].norm() < 1e-13 * line_scale {
            deg -= 1;
        }
        if deg == 0 {
            return Ok(SliceOutcome { hit: None, min_rel });
        }
        let roots = roots_of_coeffs(&line[..=deg])?;
        let dom: &CircularDomain = &self.omega.domains()[var];
        for r in roots {
            if dom.boundary_distance(r) < self.cfg.boundary_margin {
                continue;
            }
            let mut q = point.clone();
            q[var] = r;
            if let Some(hit) = self.certify(self.polish(q)) {
                return Ok(SliceOutcome { hit: Some(hit), min_rel });
            }
        }
        Ok(SliceOutcome { hit: None, min_rel })
    }

    fn slices_per_var(&self) -> usize {
        // a univariate polynomial has a single line; repeating it adds nothing
        if self.f.nvars() == 1 {
            1
        } else {
            self.cfg.slices_per_variable
        }
    }
}

const CHUNK: usize = 256;

/// Search for a zero of `f` inside `Ω`.
pub fn find_zero(f: &MultiPoly, omega: &DomainProduct, cfg: &OracleConfig) -> Result<StabilityVerdict> {
    cfg.validate()?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if omega.len() != f.nvars() {
        return Err(Error::VariableMismatch { expected: f.nvars(), found: omega.len() });
    }
    for d in omega.domains() {
        d.validate()?;
    }
    let n = f.nvars();
    let grad = (0..n)
        .map(|i| f.partial_derive(&ExponentVector::unit(n, i)))
        .collect::<Result<Vec<_>>>()?;
    let search = Search { f, grad, omega, cfg };
    let per_var = search.slices_per_var();
    let total = n * per_var;
    let mut min_abs_seen = f64::INFINITY;
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let outcomes = par::map_range(start..end, cfg.exec, |i| search.run_slice(i));
        for outcome in outcomes {
            let outcome = outcome?;
            min_abs_seen = min_abs_seen.min(outcome.min_rel);
            if let Some(hit) = outcome.hit {
                return Ok(StabilityVerdict::Counterexample(hit));
            }
        }
        start = end;
    }
    Ok(StabilityVerdict::NoZeroFound { slices_per_variable: per_var, total_samples: total, min_abs_seen })
}

/// Treatment of roots lying within `tol` of the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolicy {
    pub tol: f64,
    /// Whether a near-boundary root counts as inside the domain.
    pub boundary_inside: bool,
}

impl Default for BoundaryPolicy {
    fn default() -> Self {
        BoundaryPolicy { tol: 1e-9, boundary_inside: false }
    }
}

/// Exact (up to root accuracy) stability test for a univariate polynomial.
pub fn is_stable_exact_univariate(f: &MultiPoly, domain: &CircularDomain, policy: BoundaryPolicy) -> Result<bool> {
    if f.nvars() != 1 {
        return Err(Error::VariableMismatch { expected: 1, found: f.nvars() });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree_in(0) == 0 {
        return Ok(true);
    }
    let roots = roots_of_coeffs(&f.to_univariate()?)?;
    Ok(!roots.iter().any(|&r| {
        let d = domain.boundary_distance(r);
        if policy.boundary_inside {
            d > -policy.tol
        } else {
            d > policy.tol
        }
    }))
}
