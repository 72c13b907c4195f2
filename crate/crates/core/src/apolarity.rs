//! The apolarity bracket `{f, g}_κ`, Grace-type non-vanishing checks for
//! discs, disc exteriors and half-planes, and seeded randomized campaigns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{phi_kappa, CircularDomain, DomainProduct};
use crate::error::{Error, Result};
use crate::oracle::{find_zero, is_stable_exact_univariate, BoundaryPolicy, OracleConfig, StabilityVerdict};
use crate::par::{self, ExecMode};
use crate::poly::{ExponentVector, MultiPoly, C64};

/// Sign convention of the bracket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketSign {
    /// One global sign `(−1)^{|κ|}` in front of the sum.
    #[default]
    Constant,
    /// Sign `(−1)^{|α|}` on each term, as in the classical univariate bracket.
    PerTerm,
}

/// Bracket value together with `Σ |α!(κ−α)! f_α g_{κ−α}|`, the scale used to
/// decide whether it vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracket {
    pub value: C64,
    pub scale: f64,
}

impl Bracket {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value.norm() / self.scale
        }
    }
}

/// `{f, g}_κ = Σ_{α≤κ} (−1)^{|κ|} f^{(α)}(0) g^{(κ−α)}(0)`.
pub fn apolarity_bracket(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<C64> {
    Ok(bracket_with(f, g, kappa, BracketSign::Constant)?.value)
}

pub fn bracket_with(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector, sign: BracketSign) -> Result<Bracket> {
    for h in [f, g] {
        if h.nvars() != kappa.len() {
            return Err(Error::VariableMismatch { expected: kappa.len(), found: h.nvars() });
        }
        h.check_fits(kappa)?;
    }
    let mut value = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (alpha, fa) in f.terms() {
        let rest = kappa.checked_sub(alpha).expect("f fits κ");
        let gb = g.coefficient(&rest);
        if gb == C64::new(0.0, 0.0) {
            continue;
        }
        let t = fa * gb * (alpha.factorial() * rest.factorial());
        let odd = match sign {
            BracketSign::Constant => kappa.total() % 2 == 1,
            BracketSign::PerTerm => alpha.total() % 2 == 1,
        };
        value += if odd { -t } else { t };
        scale += t.norm();
    }
    Ok(Bracket { value, scale })
}

/// Which polynomial carries the full-degree condition on disc coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeReading {
    /// `deg_{z_j}(f) = κ_j` when `C_j` is a disc, exactly as printed.
    FDegree,
    /// `deg_{z_j}(g) = κ_j` when `C_j` is a disc.
    #[default]
    GDegree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraceConfig {
    pub oracle: OracleConfig,
    pub sign: BracketSign,
    pub reading: DegreeReading,
    /// `|bracket| ≤ violation_tol · scale` counts as vanishing.
    pub violation_tol: f64,
}

impl Default for GraceConfig {
    fn default() -> Self {
        GraceConfig {
            oracle: OracleConfig::default(),
            sign: BracketSign::Constant,
            reading: DegreeReading::GDegree,
            violation_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub verified: bool,
    pub detail: String,
}

impl HypothesisCheck {
    fn new(name: &str, verified: bool, detail: impl Into<String>) -> Self {
        HypothesisCheck { name: name.to_string(), verified, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraceReport {
    pub kappa: Vec<u32>,
    pub sign: BracketSign,
    pub bracket: C64,
    pub abs_bracket: f64,
    pub scale: f64,
    pub hypotheses: Vec<HypothesisCheck>,
    pub hypotheses_verified: bool,
    /// Hypotheses verified and the bracket vanishes.
    pub violation: bool,
}

fn stability_check(name: &str, h: &MultiPoly, omega: &DomainProduct, cfg: &OracleConfig) -> Result<HypothesisCheck> {
    if h.is_zero() {
        return Ok(HypothesisCheck::new(name, false, "zero polynomial"));
    }
    Ok(match find_zero(h, omega, cfg)? {
        StabilityVerdict::NoZeroFound { total_samples, .. } => {
            HypothesisCheck::new(name, true, format!("no zero found in {total_samples} slices"))
        }
        StabilityVerdict::Counterexample(w) => {
            HypothesisCheck::new(name, false, format!("zero at {:?} (residual {:.3e})", w.point, w.residual))
        }
    })
}

fn degree_check(name: &str, h: &MultiPoly, vars: &[usize], kappa: &ExponentVector) -> HypothesisCheck {
    let bad: Vec<String> = vars
        .iter()
        .filter(|&&j| h.degree_in(j) != kappa.get(j))
        .map(|&j| format!("deg in z{} is {} (need {})", j + 1, h.degree_in(j), kappa.get(j)))
        .collect();
    if bad.is_empty() {
        HypothesisCheck::new(name, true, "full degree where required")
    } else {
        HypothesisCheck::new(name, false, bad.join("; "))
    }
}

fn finish(kappa: &ExponentVector, sign: BracketSign, b: Bracket, hypotheses: Vec<HypothesisCheck>, tol: f64) -> GraceReport {
    let hypotheses_verified = hypotheses.iter().all(|h| h.verified);
    GraceReport {
        kappa: kappa.as_slice().to_vec(),
        sign,
        bracket: b.value,
        abs_bracket: b.value.norm(),
        scale: b.scale,
        violation: hypotheses_verified && b.value.norm() <= tol * b.scale,
        hypotheses,
        hypotheses_verified,
    }
}

/// Grace check for discs and disc exteriors: `f` stable on `C₁ × … × Cₙ`,
/// `g` stable on the complements.
///
/// The complements are closed; stability of `g` is checked on their interiors.
pub fn grace_check_disc(
    f: &MultiPoly,
    g: &MultiPoly,
    domains: &DomainProduct,
    kappa: &ExponentVector,
    cfg: &GraceConfig,
) -> Result<GraceReport> {
    if let Some(bad) = domains.domains().iter().find(|d| matches!(d, CircularDomain::HalfPlane { .. })) {
        return Err(Error::InvalidDomain(format!("expected discs or disc exteriors, got {bad:?}")));
    }
    if domains.len() != kappa.len() {
        return Err(Error::VariableMismatch { expected: kappa.len(), found: domains.len() });
    }
    let b = bracket_with(f, g, kappa, cfg.sign)?;
    let exteriors: Vec<usize> =
        (0..domains.len()).filter(|&j| matches!(domains.domains()[j], CircularDomain::DiscExterior { .. })).collect();
    let discs: Vec<usize> = (0..domains.len()).filter(|j| !exteriors.contains(j)).collect();
    let disc_poly = match cfg.reading {
        DegreeReading::FDegree => f,
        DegreeReading::GDegree => g,
    };
    let hypotheses = vec![
        stability_check("f_stable", f, domains, &cfg.oracle)?,
        degree_check("f_degree_on_exteriors", f, &exteriors, kappa),
        stability_check("g_stable_on_complements", g, &domains.complement_interior(), &cfg.oracle)?,
        degree_check(
            match cfg.reading {
                DegreeReading::FDegree => "f_degree_on_discs",
                DegreeReading::GDegree => "g_degree_on_discs",
            },
            disc_poly,
            &discs,
            kappa,
        ),
    ];
    Ok(finish(kappa, cfg.sign, b, hypotheses, cfg.violation_tol))
}

/// `∃ α ∈ supp(f), β ∈ supp(g)` with `κ ≤ α + β`.
pub fn support_condition(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Option<(ExponentVector, ExponentVector)> {
    for (a, _) in f.terms() {
        for (b, _) in g.terms() {
            if kappa.le(&a.add(b)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Grace check for half-planes: `f` stable on `C₁ⁿ`, `g` stable on `C₂ⁿ`.
pub fn grace_check_halfplane(
    f: &MultiPoly,
    g: &MultiPoly,
    c1: &CircularDomain,
    c2: &CircularDomain,
    kappa: &ExponentVector,
    cfg: &GraceConfig,
) -> Result<GraceReport> {
    let (CircularDomain::HalfPlane { theta: t1 }, CircularDomain::HalfPlane { theta: t2 }) = (c1, c2) else {
        return Err(Error::InvalidDomain("expected two half-planes".into()));
    };
    let n = kappa.len();
    let b = bracket_with(f, g, kappa, cfg.sign)?;
    let gap = (t1 - t2).rem_euclid(std::f64::consts::TAU);
    let opposite = (gap - std::f64::consts::PI).abs() < 1e-12;
    let support = match support_condition(f, g, kappa) {
        Some((a, bb)) => HypothesisCheck::new(
            "support_condition",
            true,
            format!("κ ≤ {:?} + {:?}", a.as_slice(), bb.as_slice()),
        ),
        None => HypothesisCheck::new("support_condition", false, "no α ∈ supp(f), β ∈ supp(g) with κ ≤ α + β"),
    };
    let hypotheses = vec![
        HypothesisCheck::new(
            "half_planes_intersect",
            !opposite,
            if opposite { "opposite half-planes" } else { "non-empty intersection" },
        ),
        stability_check("f_stable", f, &DomainProduct::uniform(*c1, n), &cfg.oracle)?,
        stability_check("g_stable", g, &DomainProduct::uniform(*c2, n), &cfg.oracle)?,
        support,
    ];
    Ok(finish(kappa, cfg.sign, b, hypotheses, cfg.violation_tol))
}

/// The classical univariate statement: `f` and `g` of exact degree `k ≥ 1`,
/// `f` stable on `C` and `g` stable on the closed complement, located by roots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalGrace {
    pub hypotheses: bool,
    pub constant_sign: Bracket,
    pub per_term_sign: Bracket,
}

pub fn classical_grace_univariate(f: &MultiPoly, g: &MultiPoly, domain: &CircularDomain) -> Result<ClassicalGrace> {
    let k = f.degree_in(0);
    let kappa = ExponentVector::from(vec![k]);
    let constant_sign = bracket_with(f, g, &kappa, BracketSign::Constant)?;
    let per_term_sign = bracket_with(f, g, &kappa, BracketSign::PerTerm)?;
    let policy = BoundaryPolicy::default();
    let hypotheses = k >= 1
        && g.degree_in(0) == k
        && is_stable_exact_univariate(f, domain, policy)?
        && is_stable_exact_univariate(g, &domain.complement_interior(), BoundaryPolicy { boundary_inside: true, ..policy })?;
    Ok(ClassicalGrace { hypotheses, constant_sign, per_term_sign })
}

/// A stable polynomial built as `Φ_κ(∏ ℓ_k)` from upper-half-plane-stable
/// linear forms `ℓ_k = Σ c_i z_i + d_k` (`c_i ≥ 0`, `Im d_k > 0`).
#[derive(Clone, Debug)]
struct Construction {
    domains: DomainProduct,
    forms: Vec<(Vec<f64>, C64)>,
}

impl Construction {
    fn random(rng: &mut ChaCha8Rng, domains: DomainProduct, count: usize, full_support: bool) -> Self {
        let n = domains.len();
        let forms = (0..count)
            .map(|_| {
                let mut support: Vec<bool> = (0..n).map(|_| full_support || rng.random_bool(0.6)).collect();
                if !support.iter().any(|&s| s) {
                    support[rng.random_range(0..n)] = true;
                }
                let weights = support.iter().map(|&s| if s { rng.random_range(0.2..2.0) } else { 0.0 }).collect();
                let d = C64::new(rng.random_range(-2.0..2.0), rng.random_range(0.2..2.0));
                (weights, d)
            })
            .collect();
        Construction { domains, forms }
    }

    fn kappa(&self) -> ExponentVector {
        let n = self.domains.len();
        (0..n).map(|i| self.forms.iter().filter(|(w, _)| w[i] != 0.0).count() as u32).collect::<Vec<_>>().into()
    }

    fn form(&self, k: usize, with_constant: bool) -> Result<MultiPoly> {
        let n = self.domains.len();
        let (w, d) = &self.forms[k];
        let mut terms: Vec<(ExponentVector, C64)> = (0..n)
            .filter(|&i| w[i] != 0.0)
            .map(|i| (ExponentVector::unit(n, i), C64::new(w[i], 0.0)))
            .collect();
        if with_constant {
            terms.push((ExponentVector::zeros(n), *d));
        }
        MultiPoly::from_terms(n, terms)
    }

    fn transport(&self, pre: &MultiPoly) -> Result<MultiPoly> {
        let maps: Vec<_> = self.domains.domains().iter().map(CircularDomain::to_upper_half_plane).collect();
        phi_kappa(pre, &maps, &self.kappa())
    }

    fn poly(&self) -> Result<MultiPoly> {
        let mut pre = MultiPoly::one(self.domains.len());
        for k in 0..self.forms.len() {
            pre = pre.mul(&self.form(k, true)?)?;
        }
        self.transport(&pre)
    }

    /// `(Φ(ℓ₀·h), Φ(h))` where the last form is `ℓ₀ + d` and `h` the product of the others.
    fn split_last(&self) -> Result<(MultiPoly, MultiPoly)> {
        let last = self.forms.len() - 1;
        let mut h = MultiPoly::one(self.domains.len());
        for k in 0..last {
            h = h.mul(&self.form(k, true)?)?;
        }
        let l0h = self.form(last, false)?.mul(&h)?;
        Ok((self.transport(&l0h)?, self.transport(&h)?))
    }
}

/// Which Grace check a campaign exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    Disc,
    HalfPlane,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub kind: CampaignKind,
    pub seed: u64,
    /// Number of hypothesis-satisfying pairs to evaluate.
    pub pairs: usize,
    pub max_vars: usize,
    pub max_degree: u32,
    /// Disc campaigns: all discs centred at the origin.
    pub centred: bool,
    /// Half-plane campaigns: use the same half-plane for `f` and `g`.
    pub equal_half_planes: bool,
    pub grace: GraceConfig,
    pub exec: ExecMode,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            kind: CampaignKind::Disc,
            seed: 0,
            pairs: 200,
            max_vars: 2,
            max_degree: 2,
            centred: true,
            equal_half_planes: false,
            grace: GraceConfig { oracle: OracleConfig { slices_per_variable: 60, ..OracleConfig::default() }, ..GraceConfig::default() },
            exec: ExecMode::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub index: u64,
    pub domains: Vec<CircularDomain>,
    pub kappa: Vec<u32>,
    pub bracket: C64,
    pub relative_bracket: f64,
    pub violation: bool,
}

/// Apolar pairs built on purpose: the last linear form of `g` is tuned so the
/// bracket vanishes, then the hypotheses are re-checked.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub attempted: usize,
    /// Tuned constant keeps `g` stable by construction.
    pub admissible: usize,
    /// Admissible and confirmed by the full check (hypotheses verified, bracket zero).
    pub confirmed_violations: usize,
    pub first_violation: Option<ProbeWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeWitness {
    pub index: u64,
    pub domains_f: Vec<CircularDomain>,
    pub domains_g: Vec<CircularDomain>,
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub report: GraceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub kind: CampaignKind,
    pub seed: u64,
    pub sign: BracketSign,
    pub reading: DegreeReading,
    pub requested: usize,
    pub attempts: u64,
    pub evaluated: usize,
    pub violations: usize,
    pub min_relative_bracket: f64,
    pub cases: Vec<CaseRecord>,
    pub probe: ProbeSummary,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.evaluated == self.requested && self.violations == 0
    }
}

struct Attempt {
    record: Option<CaseRecord>,
    probe_admissible: bool,
    probe_witness: Option<ProbeWitness>,
}

fn random_disc(rng: &mut ChaCha8Rng, centred: bool) -> CircularDomain {
    let center = if centred {
        C64::new(0.0, 0.0)
    } else {
        C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))
    };
    let radius = rng.random_range(0.5..2.0);
    if rng.random_bool(0.5) {
        CircularDomain::Disc { center, radius }
    } else {
        CircularDomain::DiscExterior { center, radius }
    }
}

fn check_pair(
    cfg: &CampaignConfig,
    f: &MultiPoly,
    g: &MultiPoly,
    dom_f: &DomainProduct,
    dom_g: &DomainProduct,
    kappa: &ExponentVector,
) -> Result<GraceReport> {
    match cfg.kind {
        CampaignKind::Disc => grace_check_disc(f, g, dom_f, kappa, &cfg.grace),
        CampaignKind::HalfPlane => {
            grace_check_halfplane(f, g, &dom_f.domains()[0], &dom_g.domains()[0], kappa, &cfg.grace)
        }
    }
}

fn attempt(cfg: &CampaignConfig, index: u64) -> Result<Attempt> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let n = rng.random_range(1..=cfg.max_vars);
    let k = rng.random_range(1..=cfg.max_degree);
    let kappa = ExponentVector::uniform(n, k);
    let (dom_f, dom_g) = match cfg.kind {
        CampaignKind::Disc => {
            let doms = DomainProduct::new((0..n).map(|_| random_disc(&mut rng, cfg.centred)).collect())?;
            let comp = doms.complement_interior();
            (doms, comp)
        }
        CampaignKind::HalfPlane => {
            let t1 = rng.random_range(0.0..std::f64::consts::TAU);
            let t2 = if cfg.equal_half_planes {
                t1
            } else {
                let spread = std::f64::consts::PI - 0.3;
                t1 + rng.random_range(-spread..spread)
            };
            (
                DomainProduct::uniform(CircularDomain::half_plane(t1), n),
                DomainProduct::uniform(CircularDomain::half_plane(t2), n),
            )
        }
    };
    let fc = Construction::random(&mut rng, dom_f.clone(), k as usize, true);
    let gc = Construction::random(&mut rng, dom_g.clone(), k as usize, false);
    let f = fc.poly()?;
    let g = gc.poly()?;
    let report = check_pair(cfg, &f, &g, &dom_f, &dom_g, &kappa)?;
    let record = report.hypotheses_verified.then(|| CaseRecord {
        index,
        domains: dom_f.domains().to_vec(),
        kappa: kappa.as_slice().to_vec(),
        bracket: report.bracket,
        relative_bracket: if report.scale == 0.0 { 0.0 } else { report.abs_bracket / report.scale },
        violation: report.violation,
    });

    // tune the constant of g's last form so that the bracket vanishes
    let (a, b) = gc.split_last()?;
    let ba = bracket_with(&f, &a, &kappa, cfg.grace.sign)?;
    let bb = bracket_with(&f, &b, &kappa, cfg.grace.sign)?;
    let mut probe_admissible = false;
    let mut probe_witness = None;
    if bb.value.norm() > 1e-12 * bb.scale.max(ba.scale) {
        let d = -ba.value / bb.value;
        if d.im > 1e-6 * d.norm().max(1.0) {
            probe_admissible = true;
            let tuned = a.add(&b.scale(d))?;
            let rep = check_pair(cfg, &f, &tuned, &dom_f, &dom_g, &kappa)?;
            if rep.violation {
                probe_witness = Some(ProbeWitness {
                    index,
                    domains_f: dom_f.domains().to_vec(),
                    domains_g: dom_g.domains().to_vec(),
                    f: f.clone(),
                    g: tuned,
                    report: rep,
                });
            }
        }
    }
    Ok(Attempt { record, probe_admissible, probe_witness })
}

/// Seeded randomized Grace campaign. Pairs are generated until `pairs`
/// hypothesis-satisfying ones have been evaluated (or 50× as many attempts).
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.max_vars == 0 || cfg.max_degree == 0 || 2 * cfg.max_vars > crate::poly::MAX_VARS {
        return Err(Error::InvalidInput("campaign needs 1 ≤ max_vars ≤ 12 and max_degree ≥ 1".into()));
    }
    cfg.grace.oracle.validate()?;
    const BLOCK: u64 = 64;
    let max_attempts = (cfg.pairs as u64).max(1) * 50;
    let mut cases = Vec::with_capacity(cfg.pairs);
    let mut probe = ProbeSummary::default();
    let mut next = 0u64;
    while cases.len() < cfg.pairs && next < max_attempts {
        let end = (next + BLOCK).min(max_attempts);
        let idx: Vec<u64> = (next..end).collect();
        let results = par::map_slice(&idx, cfg.exec, |&i| attempt(cfg, i));
        for (i, res) in idx.iter().zip(results) {
            let att = res?;
            next = i + 1;
            probe.attempted += 1;
            if att.probe_admissible {
                probe.admissible += 1;
            }
            if let Some(w) = att.probe_witness {
                probe.confirmed_violations += 1;
                probe.first_violation.get_or_insert(w);
            }
            if let Some(rec) = att.record {
                cases.push(rec);
                if cases.len() == cfg.pairs {
                    break;
                }
            }
        }
    }
    let violations = cases.iter().filter(|c| c.violation).count();
    let min_relative_bracket = cases.iter().map(|c| c.relative_bracket).fold(f64::INFINITY, f64::min);
    Ok(CampaignReport {
        kind: cfg.kind,
        seed: cfg.seed,
        sign: cfg.grace.sign,
        reading: cfg.grace.reading,
        requested: cfg.pairs,
        attempts: next,
        evaluated: cases.len(),
        violations,
        min_relative_bracket,
        cases,
        probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn uni(coeffs: &[C64]) -> MultiPoly {
        MultiPoly::from_univariate(coeffs)
    }

    #[test]
    fn bracket_examples() {
        let z = uni(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(apolarity_bracket(&z, &MultiPoly::one(1), &vec![1].into()).unwrap(), c(-1.0, 0.0));
        assert_eq!(apolarity_bracket(&MultiPoly::one(1), &MultiPoly::one(1), &vec![0].into()).unwrap(), c(1.0, 0.0));
        let f = MultiPoly::from_real_univariate(&[6.0, -5.0, 1.0]);
        let g = MultiPoly::from_real_univariate(&[0.0, 0.0, 1.0]);
        assert_eq!(apolarity_bracket(&f, &g, &vec![2].into()).unwrap(), c(12.0, 0.0));
        // classical sign: f(0)g″(0) − f′(0)g′(0) + f″(0)g(0)
        assert_eq!(bracket_with(&f, &g, &vec![2].into(), BracketSign::PerTerm).unwrap().value, c(12.0, 0.0));
        assert!(apolarity_bracket(&f, &g, &vec![1].into()).is_err());
    }

    #[test]
    fn grace_disc_example() {
        let cfg = GraceConfig { oracle: OracleConfig { slices_per_variable: 50, ..OracleConfig::default() }, ..GraceConfig::default() };
        let d = DomainProduct::uniform(CircularDomain::unit_disc(), 1);
        let k: ExponentVector = vec![2].into();
        let f = MultiPoly::from_real_univariate(&[6.0, -5.0, 1.0]);
        let g = MultiPoly::from_real_univariate(&[0.05, -0.45, 1.0]);
        let rep = grace_check_disc(&f, &g, &d, &k, &cfg).unwrap();
        assert!(rep.hypotheses_verified);
        assert!(!rep.violation);
        assert!((rep.bracket - c(14.35, 0.0)).norm() < 1e-12);

        // f with a root inside the disc
        let bad = MultiPoly::from_real_univariate(&[0.25, -1.25, 1.0]);
        let rep = grace_check_disc(&bad, &g, &d, &k, &cfg).unwrap();
        assert!(!rep.hypotheses_verified && !rep.violation);
    }

    #[test]
    fn classical_statement_and_sign_conventions() {
        let d = CircularDomain::unit_disc();
        let f = MultiPoly::from_real_univariate(&[6.0, -5.0, 1.0]);
        let g = MultiPoly::from_real_univariate(&[0.05, -0.45, 1.0]);
        let cg = classical_grace_univariate(&f, &g, &d).unwrap();
        assert!(cg.hypotheses);
        assert!(cg.constant_sign.relative() > 0.1 && cg.per_term_sign.relative() > 0.1);

        // off-centre disc: f = z + 1 stable on Disc{1, 1/2}, g = z − 1 stable off it
        let off = CircularDomain::Disc { center: c(1.0, 0.0), radius: 0.5 };
        let f = uni(&[c(1.0, 0.0), c(1.0, 0.0)]);
        let g = uni(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        let cg = classical_grace_univariate(&f, &g, &off).unwrap();
        assert!(cg.hypotheses);
        assert_eq!(cg.constant_sign.value, c(0.0, 0.0));
        assert_eq!(cg.per_term_sign.value, c(2.0, 0.0));
    }

    #[test]
    fn grace_halfplane_examples() {
        let cfg = GraceConfig { oracle: OracleConfig { slices_per_variable: 50, ..OracleConfig::default() }, ..GraceConfig::default() };
        let h0 = CircularDomain::half_plane(0.0);
        let k: ExponentVector = vec![1].into();
        let f = uni(&[c(0.0, 1.0), c(1.0, 0.0)]);
        let g = uni(&[c(0.0, 2.0), c(1.0, 0.0)]);
        let rep = grace_check_halfplane(&f, &g, &h0, &h0, &k, &cfg).unwrap();
        assert!(rep.hypotheses_verified);
        assert!((rep.bracket - c(0.0, -3.0)).norm() < 1e-15);
        assert!(!rep.violation);

        let one = MultiPoly::one(1);
        let rep = grace_check_halfplane(&one, &one, &h0, &h0, &k, &cfg).unwrap();
        assert!(!rep.hypotheses.iter().find(|h| h.name == "support_condition").unwrap().verified);
        assert!(!rep.violation);
    }

    #[test]
    fn constructions_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let doms = DomainProduct::new(vec![
            CircularDomain::DiscExterior { center: c(0.5, -0.2), radius: 0.7 },
            CircularDomain::half_plane(1.0),
        ])
        .unwrap();
        let cfg = OracleConfig { slices_per_variable: 50, ..OracleConfig::default() };
        for _ in 0..5 {
            let con = Construction::random(&mut rng, doms.clone(), 2, false);
            let p = con.poly().unwrap();
            assert!(find_zero(&p, &doms, &cfg).unwrap().is_no_zero());
            let (a, b) = con.split_last().unwrap();
            let d = con.forms.last().unwrap().1;
            assert!(a.add(&b.scale(d)).unwrap().relative_distance(&p) < 1e-12);
        }
    }

    #[test]
    fn small_campaign_is_deterministic() {
        let cfg = CampaignConfig { pairs: 12, ..CampaignConfig::default() };
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&CampaignConfig { exec: ExecMode::Sequential, ..cfg.clone() }).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
    }
}
