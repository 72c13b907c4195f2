//! Open circular domains, SL₂-normalized Möbius maps between them, and the
//! transport map `Φ_κ` on truncated polynomial spaces.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{find_zero, Counterexample, OracleConfig, StabilityVerdict};
use crate::poly::{ExponentVector, MultiPoly, C64};

/// An open disc, open disc exterior, or open half-plane `{ζ : Im(e^{iθ}ζ) > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircularDomain {
    HalfPlane { theta: f64 },
    Disc { center: C64, radius: f64 },
    DiscExterior { center: C64, radius: f64 },
}

impl CircularDomain {
    pub fn half_plane(theta: f64) -> Self {
        CircularDomain::HalfPlane { theta: theta.rem_euclid(TAU) }
    }

    pub fn unit_disc() -> Self {
        CircularDomain::Disc { center: C64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn unit_exterior() -> Self {
        CircularDomain::DiscExterior { center: C64::new(0.0, 0.0), radius: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CircularDomain::HalfPlane { theta } if !theta.is_finite() => {
                Err(Error::InvalidDomain(format!("half-plane angle {theta}")))
            }
            CircularDomain::Disc { center, radius } | CircularDomain::DiscExterior { center, radius }
                if !(radius > 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) =>
            {
                Err(Error::InvalidDomain(format!("radius {radius}, center {center}")))
            }
            _ => Ok(()),
        }
    }

    /// Signed distance to the boundary, positive inside.
    pub fn boundary_distance(&self, z: C64) -> f64 {
        match *self {
            CircularDomain::HalfPlane { theta } => (C64::from_polar(1.0, theta) * z).im,
            CircularDomain::Disc { center, radius } => radius - (z - center).norm(),
            CircularDomain::DiscExterior { center, radius } => (z - center).norm() - radius,
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.boundary_distance(z) > 0.0
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, CircularDomain::DiscExterior { .. })
    }

    /// The open domain whose closure is the complement of `self`.
    pub fn complement_interior(&self) -> CircularDomain {
        match *self {
            CircularDomain::HalfPlane { theta } => CircularDomain::half_plane(theta + PI),
            CircularDomain::Disc { center, radius } => CircularDomain::DiscExterior { center, radius },
            CircularDomain::DiscExterior { center, radius } => CircularDomain::Disc { center, radius },
        }
    }

    /// Catalog map sending `self` onto the upper half-plane.
    pub fn to_upper_half_plane(&self) -> MoebiusMap {
        let i = C64::new(0.0, 1.0);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let cayley = MoebiusMap::raw(i, i, -one, one);
        match *self {
            CircularDomain::HalfPlane { theta } => MoebiusMap::raw(
                C64::from_polar(1.0, theta / 2.0),
                zero,
                zero,
                C64::from_polar(1.0, -theta / 2.0),
            ),
            CircularDomain::Disc { center, radius } => {
                cayley.compose(&MoebiusMap::raw(one, -center, zero, C64::new(radius, 0.0)))
            }
            CircularDomain::DiscExterior { center, radius } => {
                cayley.compose(&MoebiusMap::raw(zero, C64::new(radius, 0.0), one, -center))
            }
        }
        .normalized()
        .expect("catalog maps are invertible")
    }

    /// Draw an interior point at distance at least `margin` from the boundary.
    pub fn sample_interior<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        margin: f64,
        cfg: &SamplerConfig,
    ) -> Result<C64> {
        if !(margin >= 0.0) {
            return Err(Error::InvalidInput(format!("negative margin {margin}")));
        }
        match *self {
            CircularDomain::HalfPlane { theta } => {
                if margin >= cfg.cap {
                    return Err(Error::InvalidDomain(format!(
                        "margin {margin} exceeds half-plane truncation {}",
                        cfg.cap
                    )));
                }
                loop {
                    let r = cfg.cap * rng.random::<f64>().sqrt();
                    let phi = PI * rng.random::<f64>();
                    let local = C64::from_polar(r, phi);
                    if local.im >= margin && local.im > 0.0 {
                        return Ok(C64::from_polar(1.0, -theta) * local);
                    }
                }
            }
            CircularDomain::Disc { center, radius } => {
                if margin >= radius {
                    return Err(Error::InvalidDomain(format!(
                        "margin {margin} is not below disc radius {radius}"
                    )));
                }
                let r = (radius - margin) * rng.random::<f64>().sqrt();
                let phi = TAU * rng.random::<f64>();
                Ok(center + C64::from_polar(r, phi))
            }
            CircularDomain::DiscExterior { center, radius } => {
                let (lo, hi) = (radius + margin, cfg.cap * radius);
                if lo >= hi {
                    return Err(Error::InvalidDomain(format!(
                        "margin {margin} leaves no room below truncation {hi}"
                    )));
                }
                // log-uniform radius keeps mass near the boundary circle
                let r = (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp().max(lo);
                let phi = TAU * rng.random::<f64>();
                Ok(center + C64::from_polar(r, phi))
            }
        }
    }

    /// `count` reproducible samples drawn from a seeded stream.
    pub fn sample_many(&self, seed: u64, margin: f64, count: usize, cfg: &SamplerConfig) -> Result<Vec<C64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_interior(&mut rng, margin, cfg)).collect()
    }
}

/// Truncation used when sampling unbounded domains: half-plane points have
/// modulus at most `cap`; exterior points lie within `cap · radius` of the center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub cap: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { cap: 10.0 }
    }
}

/// `ζ ↦ (aζ + b)/(cζ + d)` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MoebiusMap {
    fn raw(a: C64, b: C64, c: C64, d: C64) -> Self {
        MoebiusMap { a, b, c, d }
    }

    /// Normalize `(a, b, c, d)` to determinant one with the fixed sign branch.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        MoebiusMap::raw(a, b, c, d).normalized()
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        MoebiusMap::raw(one, zero, zero, one)
    }

    /// Affine map `ζ ↦ scale·ζ + shift`, the `c = 0` case.
    pub fn affine(scale: C64, shift: C64) -> Result<Self> {
        MoebiusMap::new(scale, shift, C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    fn normalized(self) -> Result<Self> {
        let det = self.determinant();
        if !(det.norm() > 0.0) || !det.is_finite() {
            return Err(Error::InvalidInput(format!("degenerate Möbius map, determinant {det}")));
        }
        let s = det.sqrt();
        let mut m = MoebiusMap::raw(self.a / s, self.b / s, self.c / s, self.d / s);
        let entries = [m.a, m.b, m.c, m.d];
        let big = entries.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if let Some(first) = entries.iter().find(|x| x.norm() > 1e-12 * big) {
            let in_branch = first.re > 0.0 || (first.re == 0.0 && first.im > 0.0);
            if !in_branch {
                m = MoebiusMap::raw(-m.a, -m.b, -m.c, -m.d);
            }
        }
        Ok(m)
    }

    pub fn apply(&self, z: C64) -> Result<C64> {
        let den = self.c * z + self.d;
        if den.norm() <= 1e-300 {
            return Err(Error::Pole(format!("{z}")));
        }
        Ok((self.a * z + self.b) / den)
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap::raw(self.d, -self.b, -self.c, self.a)
            .normalized()
            .expect("unimodular maps are invertible")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> Self {
        MoebiusMap::raw(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let id = MoebiusMap::identity();
        [self.a - id.a, self.b, self.c, self.d - id.d].iter().all(|x| x.norm() <= tol)
            || [self.a + id.a, self.b, self.c, self.d + id.d].iter().all(|x| x.norm() <= tol)
    }
}

/// Map with `φ(from) = to` built from the catalog of rotations, translations,
/// scalings, the Cayley transform and inversion.
pub fn moebius_for(from: &CircularDomain, to: &CircularDomain) -> MoebiusMap {
    to.to_upper_half_plane()
        .inverse()
        .compose(&from.to_upper_half_plane())
        .normalized()
        .expect("catalog maps are invertible")
}

/// `Ω = C₁ × ⋯ × Cₙ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainProduct(pub Vec<CircularDomain>);

impl DomainProduct {
    pub fn new(domains: Vec<CircularDomain>) -> Result<Self> {
        for d in &domains {
            d.validate()?;
        }
        Ok(DomainProduct(domains))
    }

    pub fn uniform(domain: CircularDomain, n: usize) -> Self {
        DomainProduct(vec![domain; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domains(&self) -> &[CircularDomain] {
        &self.0
    }

    /// `Ω × Ω`, the domain of a symbol.
    pub fn doubled(&self) -> DomainProduct {
        let mut v = self.0.clone();
        v.extend_from_slice(&self.0);
        DomainProduct(v)
    }

    /// Smallest coordinate boundary distance (negative if some coordinate is outside).
    pub fn margin(&self, point: &[C64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .map(|(d, &z)| d.boundary_distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, point: &[C64]) -> bool {
        point.len() == self.0.len() && self.margin(point) > 0.0
    }

    pub fn complement_interior(&self) -> DomainProduct {
        DomainProduct(self.0.iter().map(CircularDomain::complement_interior).collect())
    }
}

fn affine_power(a: C64, b: C64, c: C64, d: C64, e: u32, k: u32) -> Vec<C64> {
    // (a z + b)^e (c z + d)^(k - e), ascending coefficients
    let mut out = vec![C64::new(1.0, 0.0)];
    let mut mul = |p: C64, q: C64| {
        let mut next = vec![C64::new(0.0, 0.0); out.len() + 1];
        for (j, &x) in out.iter().enumerate() {
            next[j] += x * q;
            next[j + 1] += x * p;
        }
        out = next;
    };
    for _ in 0..e {
        mul(a, b);
    }
    for _ in e..k {
        mul(c, d);
    }
    out
}

/// `Φ_κ(f)(z) = ∏ (cᵢzᵢ + dᵢ)^{κᵢ} · f(φ₁(z₁), …, φₙ(zₙ))`, expanded monomialwise.
pub fn phi_kappa(f: &MultiPoly, maps: &[MoebiusMap], kappa: &ExponentVector) -> Result<MultiPoly> {
    let n = f.nvars();
    if maps.len() != n {
        return Err(Error::VariableMismatch { expected: n, found: maps.len() });
    }
    f.check_fits(kappa)?;
    let tables: Vec<Vec<Vec<C64>>> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let k = kappa.get(i);
            (0..=k).map(|e| affine_power(m.a, m.b, m.c, m.d, e, k)).collect()
        })
        .collect();
    let mut terms: Vec<(Vec<u32>, C64)> = Vec::new();
    for (e, c) in f.terms() {
        let mut partial: Vec<(Vec<u32>, C64)> = vec![(Vec::with_capacity(n), *c)];
        for i in 0..n {
            let row = &tables[i][e.get(i) as usize];
            let mut next = Vec::with_capacity(partial.len() * row.len());
            for (exp, coef) in &partial {
                for (j, &x) in row.iter().enumerate() {
                    if x != C64::new(0.0, 0.0) {
                        let mut ne = exp.clone();
                        ne.push(j as u32);
                        next.push((ne, coef * x));
                    }
                }
            }
            partial = next;
        }
        terms.extend(partial);
    }
    MultiPoly::from_terms(n, terms)
}

/// Outcome of a membership test for `N_κ(C₁, …, Cₙ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// No zero found and every degree condition holds.
    Evidence { verdict: StabilityVerdict },
    /// A non-convex coordinate lacks full degree.
    DegreeFailure { var: usize, degree: u32, required: u32 },
    /// A certified zero inside the domain product.
    Zero { witness: Counterexample },
}

impl Membership {
    pub fn is_evidence(&self) -> bool {
        matches!(self, Membership::Evidence { .. })
    }
}

pub fn in_n_kappa(
    f: &MultiPoly,
    omega: &DomainProduct,
    kappa: &ExponentVector,
    cfg: &OracleConfig,
) -> Result<Membership> {
    f.check_fits(kappa)?;
    if omega.len() != f.nvars() {
        return Err(Error::VariableMismatch { expected: f.nvars(), found: omega.len() });
    }
    let degs = f.degrees();
    for (j, dom) in omega.domains().iter().enumerate() {
        if !dom.is_convex() && degs[j] != kappa.get(j) {
            return Ok(Membership::DegreeFailure { var: j, degree: degs[j], required: kappa.get(j) });
        }
    }
    match find_zero(f, omega, cfg)? {
        StabilityVerdict::Counterexample(witness) => Ok(Membership::Zero { witness }),
        verdict => Ok(Membership::Evidence { verdict }),
    }
}
