//! Ising partition functions in fugacity form, the edge-operator construction
//! of a ferromagnetic partition function, matching polynomials and the circle
//! theorem product.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{CircularDomain, DomainProduct};
use crate::error::{Error, Result};
use crate::operators::builtin::{hadamard_schur_product, lee_yang_edge};
use crate::oracle::{find_zero, OracleConfig, StabilityVerdict};
use crate::par::{self, ExecMode};
use crate::poly::{ExponentVector, MultiPoly, Pruning, C64};
use crate::roots::roots_of_coeffs;

/// Largest spin count for brute-force enumeration.
pub const MAX_SPINS: usize = 20;
const BLOCK: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinSystemJson", into = "SpinSystemJson")]
pub struct SpinSystem {
    n: usize,
    j: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpinSystemJson {
    n: usize,
    #[serde(rename = "J")]
    j: Vec<Vec<f64>>,
}

impl TryFrom<SpinSystemJson> for SpinSystem {
    type Error = Error;

    fn try_from(raw: SpinSystemJson) -> Result<Self> {
        if raw.j.len() != raw.n {
            return Err(Error::Parse(format!("J has {} rows, expected n = {}", raw.j.len(), raw.n)));
        }
        SpinSystem::new(raw.j)
    }
}

impl From<SpinSystem> for SpinSystemJson {
    fn from(s: SpinSystem) -> Self {
        SpinSystemJson { n: s.n, j: s.j }
    }
}

impl SpinSystem {
    pub fn new(j: Vec<Vec<f64>>) -> Result<Self> {
        let n = j.len();
        if n == 0 {
            return Err(Error::InvalidInput("spin system needs at least one spin".into()));
        }
        for (i, row) in j.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {i} of J has length {}, expected {n}", row.len())));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coupling {x} in row {i}")));
            }
        }
        for a in 0..n {
            for b in 0..a {
                if (j[a][b] - j[b][a]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!("J is not symmetric at ({}, {})", a + 1, b + 1)));
                }
            }
        }
        Ok(SpinSystem { n, j })
    }

    /// Couplings drawn uniformly from `[0, jmax]` off the diagonal.
    pub fn random_ferromagnet<R: Rng + ?Sized>(n: usize, jmax: f64, rng: &mut R) -> Self {
        let mut j = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let x = rng.random_range(0.0..=jmax);
                j[a][b] = x;
                j[b][a] = x;
            }
        }
        SpinSystem { n, j }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.j[a][b]
    }

    pub fn couplings(&self) -> &[Vec<f64>] {
        &self.j
    }

    pub fn is_ferromagnetic(&self) -> bool {
        self.j.iter().flatten().all(|&x| x >= 0.0)
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n > MAX_SPINS {
            return Err(Error::Capacity(format!("{} spins (enumeration limit {MAX_SPINS})", self.n)));
        }
        Ok(())
    }

    /// `σ` encoded by the bits of `m`: bit `i` set means `σ_i = +1`.
    fn energy_bits(&self, m: usize) -> f64 {
        let s = |i: usize| if m >> i & 1 == 1 { 1.0 } else { -1.0 };
        let mut e = 0.0;
        for a in 0..self.n {
            for b in 0..self.n {
                e += self.j[a][b] * s(a) * s(b);
            }
        }
        e
    }
}

/// `μ(σ) = exp(Σ_{i,j} J_ij σ_i σ_j)` over all ordered pairs.
pub fn mu_weight(s: &SpinSystem, sigma: &[i8]) -> Result<f64> {
    if sigma.len() != s.n {
        return Err(Error::InvalidInput(format!("σ has length {}, expected {}", sigma.len(), s.n)));
    }
    if let Some(x) = sigma.iter().find(|&&x| x != 1 && x != -1) {
        return Err(Error::InvalidInput(format!("spin value {x} is not ±1")));
    }
    let m = sigma.iter().enumerate().filter(|(_, &x)| x == 1).fold(0usize, |acc, (i, _)| acc | 1 << i);
    Ok(s.energy_bits(m).exp())
}

/// `Σ_σ μ(σ) ∏ x_i^{σ_i+1}`.
pub fn partition_fugacity(s: &SpinSystem) -> Result<MultiPoly> {
    partition_fugacity_with(s, ExecMode::default())
}

pub fn partition_fugacity_with(s: &SpinSystem, exec: ExecMode) -> Result<MultiPoly> {
    s.check_enumerable()?;
    let n = s.n;
    let total = 1usize << n;
    let blocks = total.div_ceil(BLOCK);
    let parts = par::map_range(0..blocks, exec, |b| {
        (b * BLOCK..((b + 1) * BLOCK).min(total))
            .map(|m| {
                let e: Vec<u32> = (0..n).map(|i| 2 * (m >> i & 1) as u32).collect();
                (ExponentVector::from(e), C64::new(s.energy_bits(m).exp(), 0.0))
            })
            .collect::<Vec<_>>()
    });
    MultiPoly::from_terms(n, parts.into_iter().flatten())
}

/// `Σ_σ μ(σ) e^{σ·h}` by direct enumeration, summed in fixed blocks.
pub fn laplace_transform(s: &SpinSystem, h: &[C64], exec: ExecMode) -> Result<C64> {
    Ok(laplace_with_scale(s, h, exec)?.0)
}

/// The transform together with `Σ_σ |μ(σ) e^{σ·h}|`.
pub fn laplace_with_scale(s: &SpinSystem, h: &[C64], exec: ExecMode) -> Result<(C64, f64)> {
    s.check_enumerable()?;
    if h.len() != s.n {
        return Err(Error::VariableMismatch { expected: s.n, found: h.len() });
    }
    let total = 1usize << s.n;
    let blocks = total.div_ceil(BLOCK);
    let parts = par::map_range(0..blocks, exec, |b| {
        let mut acc = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for m in b * BLOCK..((b + 1) * BLOCK).min(total) {
            let sh: C64 = (0..s.n).map(|i| if m >> i & 1 == 1 { h[i] } else { -h[i] }).sum();
            let t = (sh + s.energy_bits(m)).exp();
            acc += t;
            scale += t.norm();
        }
        (acc, scale)
    });
    Ok(parts.into_iter().fold((C64::new(0.0, 0.0), 0.0), |(a, sc), (b, t)| (a + b, sc + t)))
}

/// `Z(x, …, x)` as a univariate polynomial of degree `2n`.
pub fn diagonal_partition(s: &SpinSystem) -> Result<MultiPoly> {
    let z = partition_fugacity(s)?;
    let mut coeffs = vec![C64::new(0.0, 0.0); 2 * s.n + 1];
    for (e, c) in z.terms() {
        coeffs[e.total() as usize] += c;
    }
    Ok(MultiPoly::from_univariate(&coeffs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeeYangReport {
    pub n: usize,
    pub ferromagnetic: bool,
    pub roots: Vec<C64>,
    /// `max | |root| − 1 |`.
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Roots of `Z(x, …, x)` and their distance from the unit circle.
///
/// Only even powers occur, so the roots are found for `y = x²` and then
/// paired as `±√y`.
pub fn lee_yang_check(s: &SpinSystem, tol: f64) -> Result<LeeYangReport> {
    let diag = diagonal_partition(s)?;
    let coeffs = diag.to_univariate()?;
    let even: Vec<C64> = coeffs.iter().step_by(2).copied().collect();
    let ys = roots_of_coeffs(&even)?;
    let mut roots = Vec::with_capacity(2 * ys.len());
    for y in ys {
        let r = y.sqrt();
        roots.push(r);
        roots.push(-r);
    }
    let max_deviation = roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(LeeYangReport {
        n: s.n,
        ferromagnetic: s.is_ferromagnetic(),
        roots,
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    })
}

/// Oracle search for zeros of the fugacity polynomial with every `|x_i| > 1`.
pub fn lee_yang_exterior_check(s: &SpinSystem, cfg: &OracleConfig) -> Result<StabilityVerdict> {
    let z = partition_fugacity_with(s, cfg.exec)?;
    find_zero(&z, &DomainProduct::uniform(CircularDomain::unit_exterior(), s.n), cfg)
}

/// `(1 + h/k)^k + (1 − h/k)^k` in variable `var` of `n`.
fn cosh_truncation(n: usize, var: usize, k: u32) -> MultiPoly {
    let kf = k as f64;
    let mut coeffs = vec![C64::new(0.0, 0.0); k as usize + 1];
    let mut binom = 1.0;
    for m in 0..=k {
        if m % 2 == 0 {
            coeffs[m as usize] = C64::new(2.0 * binom / kf.powi(m as i32), 0.0);
        }
        binom = binom * (kf - m as f64) / (m as f64 + 1.0);
    }
    let terms = coeffs.into_iter().enumerate().map(|(m, c)| {
        let mut e = vec![0u32; n];
        e[var] = m as u32;
        (e, c)
    });
    MultiPoly::from_terms(n, terms).expect("valid truncation")
}

/// Apply `cosh J_ij + sinh J_ij ∂²/∂h_i∂h_j` for every ordered pair with
/// `J_ij ≠ 0` to `∏_i [(1 + h_i/k)^k + (1 − h_i/k)^k]`.
pub fn edge_operator_pipeline(s: &SpinSystem, k: u32) -> Result<MultiPoly> {
    if k == 0 {
        return Err(Error::InvalidInput("truncation order must be positive".into()));
    }
    let n = s.n;
    let kappa = ExponentVector::uniform(n, k);
    let table = (k as usize + 1).checked_pow(n as u32).unwrap_or(usize::MAX);
    if table > crate::operators::MAX_TABLE {
        return Err(Error::Capacity(format!("edge operator table of {table} monomials")));
    }
    let mut z = MultiPoly::one(n);
    for i in 0..n {
        z = z.mul_with(&cosh_truncation(n, i, k), Pruning::Off)?;
    }
    for a in 0..n {
        for b in 0..n {
            let coupling = s.coupling(a, b);
            if coupling != 0.0 {
                z = lee_yang_edge(a, b, coupling, &kappa)?.apply(&z)?;
            }
        }
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelinePoint {
    pub k: u32,
    /// `max_h |Z_k(h) − Z(h)| / Σ_σ |μ(σ)e^{σ·h}|` over the sample points.
    pub error: f64,
}

/// Errors of the pipeline against brute-force enumeration for each `k`.
pub fn pipeline_errors(s: &SpinSystem, ks: &[u32], points: &[Vec<C64>]) -> Result<Vec<PipelinePoint>> {
    let exact = points
        .iter()
        .map(|h| laplace_with_scale(s, h, ExecMode::Sequential))
        .collect::<Result<Vec<_>>>()?;
    ks.iter()
        .map(|&k| {
            let z = edge_operator_pipeline(s, k)?;
            let mut error: f64 = 0.0;
            for (h, (zx, scale)) in points.iter().zip(&exact) {
                error = error.max((z.evaluate(h)? - zx).norm() / scale);
            }
            Ok(PipelinePoint { k, error })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphJson> for WeightedGraph {
    type Error = Error;

    fn try_from(raw: GraphJson) -> Result<Self> {
        WeightedGraph::new(raw.n, raw.edges)
    }
}

impl From<WeightedGraph> for GraphJson {
    fn from(g: WeightedGraph) -> Self {
        GraphJson { n: g.n, edges: g.edges }
    }
}

impl WeightedGraph {
    /// Vertices are `0..n`; each edge is `(i, j, λ)` with `i ≠ j` and `λ ≥ 0`.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 || n > crate::poly::MAX_VARS {
            return Err(Error::InvalidInput(format!("vertex count {n} outside 1..={}", crate::poly::MAX_VARS)));
        }
        for &(i, j, w) in &edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), nvars: n });
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) has weight {w}")));
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    /// Erdős–Rényi graph with edge probability `p` and weights in `[0, wmax]`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, wmax: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j, rng.random_range(0.0..=wmax)));
                }
            }
        }
        WeightedGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }
}

/// Keep the multi-affine part of `f`.
pub fn multi_affine_part(f: &MultiPoly) -> MultiPoly {
    let terms = f.terms().filter(|(e, _)| e.as_slice().iter().all(|&a| a <= 1)).map(|(e, c)| (e.clone(), *c));
    MultiPoly::from_terms(f.nvars(), terms).expect("subset of a valid polynomial")
}

/// `F_G = ∏_{e={i,j}} (1 + λ_e z_i z_j)`, fully expanded.
pub fn edge_product(g: &WeightedGraph) -> Result<MultiPoly> {
    let mut f = MultiPoly::one(g.n);
    for &(i, j, w) in &g.edges {
        f = f.mul_with(&edge_factor(g.n, i, j, w)?, Pruning::Off)?;
    }
    Ok(f)
}

fn edge_factor(n: usize, i: usize, j: usize, w: f64) -> Result<MultiPoly> {
    let mut e = vec![0u32; n];
    e[i] = 1;
    e[j] = 1;
    MultiPoly::from_terms(n, [(vec![0u32; n], C64::new(1.0, 0.0)), (e, C64::new(w, 0.0))])
}

/// `MAP[F_G]`. A monomial with some exponent above one keeps that exponent
/// after multiplication by further edge factors, so the multi-affine part is
/// taken after each factor.
fn map_of_edge_product(g: &WeightedGraph) -> Result<MultiPoly> {
    let mut f = MultiPoly::one(g.n);
    for &(i, j, w) in &g.edges {
        f = multi_affine_part(&f.mul_with(&edge_factor(g.n, i, j, w)?, Pruning::Off)?);
    }
    Ok(f)
}

/// `Σ_M ∏_{e∈M} λ_e ∏_{v∈M} z_v` over all matchings `M`.
pub fn matching_polynomial(g: &WeightedGraph) -> Result<MultiPoly> {
    fn walk(edges: &[(usize, usize, f64)], from: usize, used: &mut Vec<u32>, weight: f64, out: &mut Vec<(Vec<u32>, C64)>) {
        out.push((used.clone(), C64::new(weight, 0.0)));
        for k in from..edges.len() {
            let (i, j, w) = edges[k];
            if used[i] == 0 && used[j] == 0 {
                used[i] = 1;
                used[j] = 1;
                walk(edges, k + 1, used, weight * w, out);
                used[i] = 0;
                used[j] = 0;
            }
        }
    }
    let mut out = Vec::new();
    walk(&g.edges, 0, &mut vec![0; g.n], 1.0, &mut out);
    MultiPoly::from_terms(g.n, out)
}

/// Relative tolerance between the operator and enumeration routes.
pub const MATCHING_TOL: f64 = 1e-12;

/// Multivariate matching polynomial, computed as `MAP[F_G]` and checked
/// against direct enumeration of matchings.
pub fn heilmann_lieb_poly(g: &WeightedGraph) -> Result<MultiPoly> {
    let via_map = map_of_edge_product(g)?;
    let oracle = matching_polynomial(g)?;
    let gap = via_map.relative_distance(&oracle);
    assert!(gap <= MATCHING_TOL, "MAP of the edge product differs from the matching sum (relative gap {gap:e})");
    Ok(via_map)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeilmannLiebReport {
    pub n: usize,
    pub edges: usize,
    pub verdict: Option<StabilityVerdict>,
    /// Roots of `Σ_M w(M) z^{2|M|}`.
    pub diagonal_roots: Vec<C64>,
    pub max_real_part: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn heilmann_lieb_check(g: &WeightedGraph, tol: f64, cfg: &OracleConfig) -> Result<HeilmannLiebReport> {
    let p = heilmann_lieb_poly(g)?;
    let verdict = if p.total_degree() == 0 {
        None
    } else {
        Some(find_zero(&p, &DomainProduct::uniform(CircularDomain::half_plane(std::f64::consts::FRAC_PI_2), g.n), cfg)?)
    };
    // the diagonal has only even powers: solve in y = z², then z = ±√y
    let mut ycoef = vec![C64::new(0.0, 0.0); g.n / 2 + 1];
    for (e, c) in p.terms() {
        ycoef[e.total() as usize / 2] += c;
    }
    while ycoef.len() > 1 && ycoef.last() == Some(&C64::new(0.0, 0.0)) {
        ycoef.pop();
    }
    let mut diagonal_roots = Vec::new();
    if ycoef.len() > 1 {
        for y in roots_of_coeffs(&ycoef)? {
            let r = y.sqrt();
            diagonal_roots.push(r);
            diagonal_roots.push(-r);
        }
    }
    let max_real_part = diagonal_roots.iter().map(|r| r.re.abs()).fold(0.0, f64::max);
    let stable = verdict.as_ref().is_none_or(StabilityVerdict::is_no_zero);
    Ok(HeilmannLiebReport {
        n: g.n,
        edges: g.edges.len(),
        verdict,
        diagonal_roots,
        max_real_part,
        tol,
        pass: stable && max_real_part <= tol,
    })
}

/// Coupling matrix for the circle theorem; entries above the diagonal are
/// given, those below are their conjugates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleJson", into = "CircleJson")]
pub struct CircleCouplings {
    n: usize,
    upper: Vec<Vec<C64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CircleJson {
    n: usize,
    /// Full `n × n` matrix of `[re, im]`; only `i < j` entries are read.
    a: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<CircleJson> for CircleCouplings {
    type Error = Error;

    fn try_from(raw: CircleJson) -> Result<Self> {
        if raw.a.len() != raw.n || raw.a.iter().any(|r| r.len() != raw.n) {
            return Err(Error::Parse(format!("a must be a {0} × {0} matrix", raw.n)));
        }
        CircleCouplings::new(raw.a.iter().map(|r| r.iter().map(|&[x, y]| C64::new(x, y)).collect()).collect())
    }
}

impl From<CircleCouplings> for CircleJson {
    fn from(c: CircleCouplings) -> Self {
        let n = c.n;
        let a = (0..n).map(|i| (0..n).map(|j| { let z = c.get(i, j); [z.re, z.im] }).collect()).collect();
        CircleJson { n, a }
    }
}

impl CircleCouplings {
    /// `matrix[i][j]` for `i < j` are used; `|a_ij| ≤ 1` is required.
    pub fn new(matrix: Vec<Vec<C64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || n > crate::poly::MAX_VARS {
            return Err(Error::InvalidInput(format!("size {n} outside 1..={}", crate::poly::MAX_VARS)));
        }
        for i in 0..n {
            if matrix[i].len() != n {
                return Err(Error::InvalidInput(format!("row {i} has length {}", matrix[i].len())));
            }
            for j in i + 1..n {
                let a = matrix[i][j];
                if !(a.norm() <= 1.0 + 1e-12) {
                    return Err(Error::InvalidInput(format!("|a_{}{}| = {} exceeds 1", i + 1, j + 1, a.norm())));
                }
            }
        }
        Ok(CircleCouplings { n, upper: matrix })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut upper = vec![vec![C64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let r = rng.random_range(0.0..=1.0f64).sqrt();
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                upper[i][j] = C64::from_polar(r, t);
            }
        }
        CircleCouplings { n, upper }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_ij`, with `a_ji = conj(a_ij)` and a unit diagonal.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[i][j],
            std::cmp::Ordering::Greater => self.upper[j][i].conj(),
            std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
        }
    }
}

/// `f_ij = (1 + a_ij z_i + conj(a_ij) z_j + z_i z_j) ∏_{k≠i,j} (1 + z_k)`.
pub fn circle_factor(a: &CircleCouplings, i: usize, j: usize) -> Result<MultiPoly> {
    let n = a.n;
    let one = C64::new(1.0, 0.0);
    let mut f = MultiPoly::from_terms(
        n,
        [
            (ExponentVector::zeros(n), one),
            (ExponentVector::unit(n, i), a.get(i, j)),
            (ExponentVector::unit(n, j), a.get(i, j).conj()),
            (ExponentVector::unit(n, i).add(&ExponentVector::unit(n, j)), one),
        ],
    )?;
    for k in (0..n).filter(|&k| k != i && k != j) {
        let lin = MultiPoly::from_terms(n, [(ExponentVector::zeros(n), one), (ExponentVector::unit(n, k), one)])?;
        f = f.mul_with(&lin, Pruning::Off)?;
    }
    Ok(f)
}

/// `Σ_S z^S ∏_{i∈S} ∏_{j∉S} a_ij`.
pub fn circle_closed_form(a: &CircleCouplings) -> Result<MultiPoly> {
    let n = a.n;
    let terms = (0..1usize << n).map(|s| {
        let inside = |i: usize| s >> i & 1 == 1;
        let mut c = C64::new(1.0, 0.0);
        for i in (0..n).filter(|&i| inside(i)) {
            for j in (0..n).filter(|&j| !inside(j)) {
                c *= a.get(i, j);
            }
        }
        let e: Vec<u32> = (0..n).map(|i| inside(i) as u32).collect();
        (e, c)
    });
    MultiPoly::from_terms(n, terms)
}

/// Tolerance for the iterate versus closed form.
pub const CIRCLE_TOL: f64 = 1e-10;

/// Iterated Hadamard-Schur product of all `f_ij`, `i < j`, checked against the
/// closed form.
pub fn circle_theorem_product(a: &CircleCouplings) -> Result<MultiPoly> {
    let n = a.n;
    let one = C64::new(1.0, 0.0);
    let mut acc = MultiPoly::from_terms(n, (0..1usize << n).map(|s| ((0..n).map(|i| (s >> i & 1) as u32).collect::<Vec<_>>(), one)))?;
    for i in 0..n {
        for j in i + 1..n {
            acc = hadamard_schur_product(&acc, &circle_factor(a, i, j)?)?;
        }
    }
    let closed = circle_closed_form(a)?;
    let gap = acc.relative_distance(&closed);
    assert!(gap <= CIRCLE_TOL, "Hadamard iterate differs from the closed form (relative gap {gap:e})");
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleReport {
    pub n: usize,
    pub product: MultiPoly,
    pub verdict: StabilityVerdict,
    pub pass: bool,
}

pub fn circle_theorem_check(a: &CircleCouplings, cfg: &OracleConfig) -> Result<CircleReport> {
    let product = circle_theorem_product(a)?;
    let verdict = find_zero(&product, &DomainProduct::uniform(CircularDomain::unit_disc(), a.n), cfg)?;
    Ok(CircleReport { n: a.n, pass: verdict.is_no_zero(), product, verdict })
}

/// Zeros as CSV rows `re,im,modulus` with 17 significant digits.
pub fn zeros_csv(roots: &[C64]) -> String {
    let mut out = String::from("re,im,modulus\n");
    for r in roots {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", r.re, r.im, r.norm()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_spin(j: f64) -> SpinSystem {
        SpinSystem::new(vec![vec![0.0, j], vec![j, 0.0]]).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn mu_examples() {
        let free = SpinSystem::new(vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(mu_weight(&free, &[1, -1, 1]).unwrap(), 1.0);
        assert!((mu_weight(&two_spin(0.5), &[1, 1]).unwrap() - 1f64.exp()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = SpinSystem::random_ferromagnet(5, 2.0, &mut rng);
        for _ in 0..20 {
            let sigma: Vec<i8> = (0..5).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
            let flipped: Vec<i8> = sigma.iter().map(|x| -x).collect();
            assert_eq!(mu_weight(&s, &sigma).unwrap(), mu_weight(&s, &flipped).unwrap());
        }
        assert!(mu_weight(&s, &[1, 0, 1, 1, 1]).is_err());
        assert!(mu_weight(&s, &[1, 1]).is_err());
    }

    #[test]
    fn fugacity_examples() {
        let one = SpinSystem::new(vec![vec![0.0]]).unwrap();
        assert_eq!(partition_fugacity(&one).unwrap(), MultiPoly::from_real_univariate(&[1.0, 0.0, 1.0]));

        // J₁₂ = J₂₁ = J' gives weights e^{±2J'}
        let jp = 0.3;
        let z = partition_fugacity(&two_spin(jp)).unwrap();
        let (hi, lo) = ((2.0 * jp).exp(), (-2.0 * jp).exp());
        let want = MultiPoly::from_terms(2, [(vec![2, 2], c(hi)), (vec![0, 0], c(hi)), (vec![2, 0], c(lo)), (vec![0, 2], c(lo))]).unwrap();
        assert!(z.relative_distance(&want) < 1e-15);
        assert_eq!(partition_fugacity_with(&two_spin(jp), ExecMode::Sequential).unwrap(), z);
    }

    #[test]
    fn diagonal_examples() {
        let s = two_spin(0.5);
        let e = 1f64.exp();
        let want = MultiPoly::from_real_univariate(&[e, 0.0, 2.0 / e, 0.0, e]);
        assert!(diagonal_partition(&s).unwrap().relative_distance(&want) < 1e-15);
        let rep = lee_yang_check(&s, 1e-8).unwrap();
        assert!(rep.pass, "{}", rep.max_deviation);
        assert_eq!(rep.roots.len(), 4);

        let rep = lee_yang_check(&SpinSystem::new(vec![vec![0.0]]).unwrap(), 1e-12).unwrap();
        assert!(rep.max_deviation < 1e-15);

        let anti = lee_yang_check(&two_spin(-2.0), 1e-8).unwrap();
        assert!(!anti.ferromagnetic && anti.max_deviation > 1e-3);
    }

    #[test]
    fn fugacity_matches_spin_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = SpinSystem::random_ferromagnet(4, 1.0, &mut rng);
        let z = partition_fugacity(&s).unwrap();
        for _ in 0..10 {
            let h: Vec<C64> = (0..4).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let x: Vec<C64> = h.iter().map(|v| v.exp()).collect();
            let direct = laplace_transform(&s, &h, ExecMode::Sequential).unwrap() * h.iter().sum::<C64>().exp();
            let poly = z.evaluate(&x).unwrap();
            assert!((poly - direct).norm() <= 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn pipeline_examples() {
        let one = SpinSystem::new(vec![vec![0.0]]).unwrap();
        assert_eq!(edge_operator_pipeline(&one, 4).unwrap(), cosh_truncation(1, 0, 4));
        // (1 + h/2)² + (1 − h/2)² = 2 + h²/2
        assert_eq!(cosh_truncation(1, 0, 2), MultiPoly::from_real_univariate(&[2.0, 0.0, 0.5]));

        let s = two_spin(1.0);
        let pts: Vec<Vec<C64>> = vec![vec![c(0.3), c(-0.2)], vec![C64::new(0.1, 0.4), c(0.5)]];
        let errs = pipeline_errors(&s, &[8, 16], &pts).unwrap();
        assert!(errs[1].error <= errs[0].error);
    }

    #[test]
    fn matching_examples() {
        let path = WeightedGraph::new(3, vec![(0, 1, 2.0), (1, 2, 3.0)]).unwrap();
        let want = MultiPoly::from_terms(3, [(vec![0, 0, 0], c(1.0)), (vec![1, 1, 0], c(2.0)), (vec![0, 1, 1], c(3.0))]).unwrap();
        assert_eq!(heilmann_lieb_poly(&path).unwrap(), want);

        let tri = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let want = MultiPoly::from_terms(
            3,
            [(vec![0, 0, 0], c(1.0)), (vec![1, 1, 0], c(1.0)), (vec![0, 1, 1], c(1.0)), (vec![1, 0, 1], c(1.0))],
        )
        .unwrap();
        assert_eq!(heilmann_lieb_poly(&tri).unwrap(), want);

        let edge = WeightedGraph::new(2, vec![(0, 1, 0.7)]).unwrap();
        assert_eq!(heilmann_lieb_poly(&edge).unwrap(), edge_product(&edge).unwrap());

        // the progressive route agrees with expanding first
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = WeightedGraph::random(6, 0.6, 3.0, &mut rng);
        assert_eq!(multi_affine_part(&edge_product(&g).unwrap()), heilmann_lieb_poly(&g).unwrap());

        assert!(WeightedGraph::new(2, vec![(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, vec![(0, 1, -1.0)]).is_err());
    }

    #[test]
    fn heilmann_lieb_examples() {
        let cfg = OracleConfig { slices_per_variable: 40, ..OracleConfig::default() };
        let path = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let rep = heilmann_lieb_check(&path, 1e-8, &cfg).unwrap();
        assert!(rep.pass);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(rep.diagonal_roots.iter().all(|z| (z.im.abs() - r).abs() < 1e-12));

        let empty = WeightedGraph::new(4, vec![]).unwrap();
        let rep = heilmann_lieb_check(&empty, 1e-8, &cfg).unwrap();
        assert!(rep.pass && rep.verdict.is_none() && rep.diagonal_roots.is_empty());
    }

    #[test]
    fn circle_examples() {
        let ones = CircleCouplings::new(vec![vec![c(1.0); 3]; 3]).unwrap();
        let prod = circle_theorem_product(&ones).unwrap();
        let mut want = MultiPoly::one(3);
        for k in 0..3 {
            want = want.mul(&MultiPoly::one(3).add(&MultiPoly::var(3, k)).unwrap()).unwrap();
        }
        assert_eq!(prod, want);

        let zero = CircleCouplings::new(vec![vec![c(0.0); 2]; 2]).unwrap();
        let want = MultiPoly::from_terms(2, [(vec![0, 0], c(1.0)), (vec![1, 1], c(1.0))]).unwrap();
        assert_eq!(circle_theorem_product(&zero).unwrap(), want);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = CircleCouplings::random(4, &mut rng);
        let cfg = OracleConfig { slices_per_variable: 40, ..OracleConfig::default() };
        assert!(circle_theorem_check(&a, &cfg).unwrap().pass);

        assert!(CircleCouplings::new(vec![vec![c(0.0), c(1.5)], vec![c(0.0), c(0.0)]]).is_err());
    }

    #[test]
    fn json_shapes() {
        let s: SpinSystem = serde_json::from_str(r#"{"n":2,"J":[[0,0.5],[0.5,0]]}"#).unwrap();
        assert_eq!(s, two_spin(0.5));
        assert!(serde_json::from_str::<SpinSystem>(r#"{"n":2,"J":[[0,0.5],[0.4,0]]}"#).is_err());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"n":2,"J":[[0.0,0.5],[0.5,0.0]]}"#);
        let g: WeightedGraph = serde_json::from_str(r#"{"n":3,"edges":[[0,1,1.5],[1,2,2]]}"#).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert!(serde_json::from_str::<WeightedGraph>(r#"{"n":2,"edges":[[0,2,1]]}"#).is_err());
    }

    #[test]
    fn csv_rows() {
        let csv = zeros_csv(&[C64::new(0.0, 1.0)]);
        assert_eq!(csv, "re,im,modulus\n0.0000000000000000e0,1.0000000000000000e0,1.0000000000000000e0\n");
    }
}
