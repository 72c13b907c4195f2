//! Linear operators on truncated polynomial spaces `ℂ_κ[z₁, …, zₙ]`, stored as
//! action tables on monomials, together with their algebraic and truncated
//! transcendental symbols and an evidence-based preserver classification.

use serde::{Deserialize, Serialize};

use crate::domains::{CircularDomain, DomainProduct, MoebiusMap};
use crate::error::{Error, Result};
use crate::oracle::{find_zero, OracleConfig, StabilityVerdict};
use crate::poly::{multi_binomial, ExponentVector, MultiPoly, PolyJson, C64};

pub mod builtin;

/// Largest action table we are willing to build.
pub const MAX_TABLE: usize = 1_000_000;

/// Linear map `ℂ_{κ_in}[z] → ℂ[z₁, …, z_{nvars_out}]`, given by the images of monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    kappa_in: ExponentVector,
    nvars_out: usize,
    images: Vec<MultiPoly>,
}

impl LinearOperator {
    /// Tabulate `rule(α)` for every `α ≤ κ_in`.
    pub fn from_fn<F>(kappa_in: ExponentVector, nvars_out: usize, mut rule: F) -> Result<Self>
    where
        F: FnMut(&ExponentVector) -> Result<MultiPoly>,
    {
        let size = kappa_in.box_size();
        if size > MAX_TABLE {
            return Err(Error::Capacity(format!("action table of {size} monomials (limit {MAX_TABLE})")));
        }
        let mut images = Vec::with_capacity(size);
        for alpha in kappa_in.below() {
            let img = rule(&alpha)?;
            if img.nvars() != nvars_out {
                return Err(Error::VariableMismatch { expected: nvars_out, found: img.nvars() });
            }
            images.push(img);
        }
        Ok(LinearOperator { kappa_in, nvars_out, images })
    }

    /// Build from explicit `(α, T(z^α))` pairs; every `α ≤ κ_in` must appear once.
    pub fn from_table(
        kappa_in: ExponentVector,
        nvars_out: usize,
        entries: Vec<(ExponentVector, MultiPoly)>,
    ) -> Result<Self> {
        let size = kappa_in.box_size();
        if size > MAX_TABLE {
            return Err(Error::Capacity(format!("action table of {size} monomials (limit {MAX_TABLE})")));
        }
        let mut slots: Vec<Option<MultiPoly>> = vec![None; size];
        for (alpha, img) in entries {
            let idx = kappa_in.box_index(&alpha).ok_or_else(|| {
                Error::InvalidOperator(format!("monomial {:?} outside κ = {:?}", alpha.as_slice(), kappa_in.as_slice()))
            })?;
            if img.nvars() != nvars_out {
                return Err(Error::VariableMismatch { expected: nvars_out, found: img.nvars() });
            }
            if slots[idx].replace(img).is_some() {
                return Err(Error::InvalidOperator(format!("duplicate entry for {:?}", alpha.as_slice())));
            }
        }
        let images = slots
            .into_iter()
            .zip(kappa_in.below())
            .map(|(s, alpha)| {
                s.ok_or_else(|| Error::InvalidOperator(format!("no image for monomial {:?}", alpha.as_slice())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearOperator { kappa_in, nvars_out, images })
    }

    pub fn kappa_in(&self) -> &ExponentVector {
        &self.kappa_in
    }

    pub fn nvars_in(&self) -> usize {
        self.kappa_in.len()
    }

    pub fn nvars_out(&self) -> usize {
        self.nvars_out
    }

    /// `T(z^α)`.
    pub fn image(&self, alpha: &ExponentVector) -> Result<&MultiPoly> {
        let idx = self.kappa_in.box_index(alpha).ok_or_else(|| Error::NotBelow {
            alpha: alpha.as_slice().to_vec(),
            kappa: self.kappa_in.as_slice().to_vec(),
        })?;
        Ok(&self.images[idx])
    }

    pub fn table(&self) -> impl Iterator<Item = (ExponentVector, &MultiPoly)> {
        self.kappa_in.below().zip(self.images.iter())
    }

    /// Linear extension of the table.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.nvars() != self.nvars_in() {
            return Err(Error::VariableMismatch { expected: self.nvars_in(), found: f.nvars() });
        }
        f.check_fits(&self.kappa_in)?;
        let mut terms: Vec<(ExponentVector, C64)> = Vec::new();
        for (alpha, c) in f.terms() {
            for (e, x) in self.image(alpha)?.terms() {
                terms.push((e.clone(), c * x));
            }
        }
        MultiPoly::from_terms(self.nvars_out, terms)
    }

    /// Rank of the range when it is at most one.
    pub fn low_rank(&self, tol: f64) -> LowRank {
        let Some(pivot) = self
            .images
            .iter()
            .max_by(|a, b| norm2(a).partial_cmp(&norm2(b)).unwrap_or(std::cmp::Ordering::Equal))
            .filter(|p| !p.is_zero())
        else {
            return LowRank::Zero;
        };
        let pn = norm2(pivot);
        for img in &self.images {
            let vn = norm2(img);
            if vn == 0.0 {
                continue;
            }
            // component of img orthogonal to the pivot
            let dot: C64 = pivot.terms().map(|(e, p)| p.conj() * img.coefficient(e)).sum();
            let proj = dot / (pn * pn);
            let mut resid2 = 0.0;
            for (e, x) in img.terms() {
                resid2 += (x - proj * pivot.coefficient(e)).norm_sqr();
            }
            for (e, p) in pivot.terms() {
                if img.coefficient(e) == C64::new(0.0, 0.0) {
                    resid2 += (proj * p).norm_sqr();
                }
            }
            if resid2.sqrt() > tol * vn {
                return LowRank::Higher;
            }
        }
        LowRank::One(pivot.clone())
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            kappa: self.kappa_in.as_slice().to_vec(),
            action: self
                .table()
                .map(|(alpha, img)| ActionJson { alpha: alpha.into_vec(), image: img.to_json() })
                .collect(),
        }
    }

    pub fn from_json(json: &OperatorJson) -> Result<Self> {
        let kappa: ExponentVector = json.kappa.clone().into();
        let first = json
            .action
            .first()
            .ok_or_else(|| Error::Parse("operator has an empty action table".into()))?;
        let nvars_out = first.image.nvars;
        let entries = json
            .action
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if a.alpha.len() != kappa.len() {
                    return Err(Error::Parse(format!("action[{k}]: alpha has wrong length")));
                }
                let img = MultiPoly::from_json(&a.image).map_err(|e| Error::Parse(format!("action[{k}]: {e}")))?;
                Ok((ExponentVector::from(a.alpha.clone()), img))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearOperator::from_table(kappa, nvars_out, entries)
    }
}

fn norm2(p: &MultiPoly) -> f64 {
    p.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Result of rank-one detection on an action table.
#[derive(Clone, Debug, PartialEq)]
pub enum LowRank {
    Zero,
    /// Every image is a multiple of this polynomial.
    One(MultiPoly),
    Higher,
}

impl LowRank {
    pub fn is_le_one(&self) -> bool {
        !matches!(self, LowRank::Higher)
    }
}

/// Operator JSON interchange.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kappa: Vec<u32>,
    pub action: Vec<ActionJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub alpha: Vec<u32>,
    pub image: PolyJson,
}

fn check_symbol_shape(t: &LinearOperator, kappa: &ExponentVector) -> Result<usize> {
    if kappa != t.kappa_in() {
        return Err(Error::InvalidOperator(format!(
            "symbol truncation {:?} differs from operator domain {:?}",
            kappa.as_slice(),
            t.kappa_in().as_slice()
        )));
    }
    let n = t.nvars_in();
    if t.nvars_out() != n {
        return Err(Error::InvalidOperator(format!(
            "symbols need matching variable counts, operator maps {n} to {} variables",
            t.nvars_out()
        )));
    }
    if 2 * n > crate::poly::MAX_VARS {
        return Err(Error::Capacity(format!("symbol in {} variables", 2 * n)));
    }
    Ok(n)
}

/// `Σ_α T(z^α)·W_α(w)` assembled into `2n` variables.
fn assemble<F>(t: &LinearOperator, n: usize, mut w_part: F) -> Result<MultiPoly>
where
    F: FnMut(&ExponentVector) -> Result<MultiPoly>,
{
    let mut acc: Vec<(ExponentVector, C64)> = Vec::new();
    for (alpha, img) in t.table() {
        if img.is_zero() {
            continue;
        }
        let w = w_part(&alpha)?;
        for (ez, cz) in img.terms() {
            for (ew, cw) in w.terms() {
                acc.push((ez.concat(ew), cz * cw));
            }
        }
    }
    MultiPoly::from_terms(2 * n, acc)
}

/// `T[(z + w)^κ] = Σ_α binom(κ, α) T(z^α) w^{κ−α}`.
pub fn algebraic_symbol_halfplane(t: &LinearOperator, kappa: &ExponentVector) -> Result<MultiPoly> {
    let n = check_symbol_shape(t, kappa)?;
    assemble(t, n, |alpha| {
        let b = multi_binomial(kappa, alpha)? as f64;
        let rest = kappa.checked_sub(alpha).expect("α ≤ κ");
        Ok(MultiPoly::monomial(rest, C64::new(b, 0.0)))
    })
}

/// `T[(1 + zw)^κ] = Σ_α binom(κ, α) T(z^α) w^α`.
pub fn algebraic_symbol_disc(t: &LinearOperator, kappa: &ExponentVector) -> Result<MultiPoly> {
    let n = check_symbol_shape(t, kappa)?;
    assemble(t, n, |alpha| {
        let b = multi_binomial(kappa, alpha)? as f64;
        Ok(MultiPoly::monomial(alpha.clone(), C64::new(b, 0.0)))
    })
}

/// Coefficients `G_e(w)` of `((az+b)(cw+d) + (aw+b)(cz+d))^k = Σ_e z^e G_e(w)`,
/// each as ascending coefficients in `w`.
fn mobius_factor_slices(m: &MoebiusMap, k: u32) -> Vec<Vec<C64>> {
    // factor = A + B z + C w + D z w
    let a0 = m.b * m.d + m.b * m.d;
    let bz = m.a * m.d + m.b * m.c;
    let cw = m.b * m.c + m.a * m.d;
    let dzw = m.a * m.c + m.a * m.c;
    // bivariate coefficients p[e_z][e_w]
    let mut p = vec![vec![C64::new(1.0, 0.0)]];
    for step in 0..k as usize {
        let size = step + 2;
        let mut next = vec![vec![C64::new(0.0, 0.0); size]; size];
        for (i, row) in p.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                next[i][j] += x * a0;
                next[i + 1][j] += x * bz;
                next[i][j + 1] += x * cw;
                next[i + 1][j + 1] += x * dzw;
            }
        }
        p = next;
    }
    p
}

fn tensor(factors: &[&[C64]], offset: usize, nvars: usize) -> Result<MultiPoly> {
    let mut partial: Vec<(Vec<u32>, C64)> = vec![(vec![0; nvars], C64::new(1.0, 0.0))];
    for (i, row) in factors.iter().enumerate() {
        let mut next = Vec::with_capacity(partial.len() * row.len());
        for (exp, c) in &partial {
            for (j, &x) in row.iter().enumerate() {
                if x != C64::new(0.0, 0.0) {
                    let mut e = exp.clone();
                    e[offset + i] = j as u32;
                    next.push((e, c * x));
                }
            }
        }
        partial = next;
    }
    MultiPoly::from_terms(nvars, partial)
}

/// `T[∏ ((aᵢzᵢ+bᵢ)(cᵢwᵢ+dᵢ) + (aᵢwᵢ+bᵢ)(cᵢzᵢ+dᵢ))^{κᵢ}]`.
pub fn algebraic_symbol_general(t: &LinearOperator, kappa: &ExponentVector, maps: &[MoebiusMap]) -> Result<MultiPoly> {
    let n = check_symbol_shape(t, kappa)?;
    if maps.len() != n {
        return Err(Error::VariableMismatch { expected: n, found: maps.len() });
    }
    let slices: Vec<Vec<Vec<C64>>> =
        maps.iter().enumerate().map(|(i, m)| mobius_factor_slices(m, kappa.get(i))).collect();
    assemble(t, n, |alpha| {
        let rows: Vec<&[C64]> = (0..n).map(|i| slices[i][alpha.get(i) as usize].as_slice()).collect();
        tensor(&rows, 0, n)
    })
}

/// Sign convention of the transcendental symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolSign {
    /// `T[e^{−z·w}]`, for the upper half-plane.
    Minus,
    /// `T[e^{z·w}]`, for the right half-plane.
    Plus,
}

/// Partial sum of `Σ_α (±1)^{|α|} T(z^α) w^α / α!` over `|α| ≤ order`.
pub fn transcendental_symbol_truncated(t: &LinearOperator, sign: SymbolSign, order: u32) -> Result<MultiPoly> {
    let n = t.nvars_in();
    if t.nvars_out() != n {
        return Err(Error::InvalidOperator("symbols need matching variable counts".into()));
    }
    if 2 * n > crate::poly::MAX_VARS {
        return Err(Error::Capacity(format!("symbol in {} variables", 2 * n)));
    }
    let cap = t.kappa_in().as_slice().iter().copied().min().unwrap_or(0);
    if order > cap {
        return Err(Error::InvalidInput(format!(
            "order {order} exceeds the operator's defined range (min κ = {cap})"
        )));
    }
    let mut acc: Vec<(ExponentVector, C64)> = Vec::new();
    for (alpha, img) in t.table() {
        if alpha.total() > order || img.is_zero() {
            continue;
        }
        let s = match sign {
            SymbolSign::Plus => 1.0,
            SymbolSign::Minus if alpha.total() % 2 == 1 => -1.0,
            SymbolSign::Minus => 1.0,
        };
        let w = s / alpha.factorial();
        for (ez, cz) in img.terms() {
            acc.push((ez.concat(&alpha), cz * w));
        }
    }
    MultiPoly::from_terms(2 * n, acc)
}

/// Which symbol the classification used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    AlgebraicHalfplane,
    AlgebraicDisc,
    AlgebraicGeneral,
    TranscendentalTruncation { order: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolReport {
    pub symbol: MultiPoly,
    pub symbol_kind: SymbolKind,
    /// Oracle verdict for the symbol on `Ω × Ω` (absent when the symbol is zero).
    pub verdict: Option<StabilityVerdict>,
    pub rank_le_one: bool,
    /// Oracle verdict for the common image when the range has dimension one.
    pub rank_one_verdict: Option<StabilityVerdict>,
    pub evidence_positive: bool,
}

/// Rank-one detection tolerance on normalized image vectors.
pub const RANK_TOL: f64 = 1e-10;

fn choose_symbol(
    t: &LinearOperator,
    kappa: &ExponentVector,
    omega: &DomainProduct,
    maps: Option<&[MoebiusMap]>,
) -> Result<(MultiPoly, SymbolKind)> {
    if let Some(maps) = maps {
        return Ok((algebraic_symbol_general(t, kappa, maps)?, SymbolKind::AlgebraicGeneral));
    }
    let doms = omega.domains();
    let unit_disc = CircularDomain::unit_disc();
    let unit_ext = CircularDomain::unit_exterior();
    let same_halfplane = match doms.first() {
        Some(CircularDomain::HalfPlane { theta }) => {
            doms.iter().all(|d| matches!(d, CircularDomain::HalfPlane { theta: t2 } if t2 == theta))
        }
        _ => false,
    };
    if same_halfplane {
        Ok((algebraic_symbol_halfplane(t, kappa)?, SymbolKind::AlgebraicHalfplane))
    } else if doms.iter().all(|d| *d == unit_disc) || doms.iter().all(|d| *d == unit_ext) {
        Ok((algebraic_symbol_disc(t, kappa)?, SymbolKind::AlgebraicDisc))
    } else {
        let maps: Vec<MoebiusMap> = doms.iter().map(CircularDomain::to_upper_half_plane).collect();
        Ok((algebraic_symbol_general(t, kappa, &maps)?, SymbolKind::AlgebraicGeneral))
    }
}

/// Evidence for or against `T` preserving `Ω`-stability on `ℂ_κ`.
///
/// `maps`, when given, are the `φᵢ` with `Cᵢ = φᵢ⁻¹(ℍ₀)`; otherwise the
/// specialized half-plane or disc symbol is used when `Ω` allows it and the
/// catalog maps otherwise.
pub fn classify_preserver_evidence(
    t: &LinearOperator,
    kappa: &ExponentVector,
    omega: &DomainProduct,
    maps: Option<&[MoebiusMap]>,
    cfg: &OracleConfig,
) -> Result<SymbolReport> {
    if omega.len() != t.nvars_in() {
        return Err(Error::VariableMismatch { expected: t.nvars_in(), found: omega.len() });
    }
    let (symbol, symbol_kind) = choose_symbol(t, kappa, omega, maps)?;
    let rank = t.low_rank(RANK_TOL);
    let rank_one_verdict = match &rank {
        LowRank::One(p) if t.nvars_out() == omega.len() => Some(find_zero(p, omega, cfg)?),
        _ => None,
    };
    let verdict = if symbol.is_zero() { None } else { Some(find_zero(&symbol, &omega.doubled(), cfg)?) };
    let branch_a = match &rank {
        LowRank::Zero => true,
        LowRank::One(_) => rank_one_verdict.as_ref().is_some_and(StabilityVerdict::is_no_zero),
        LowRank::Higher => false,
    };
    let branch_b = verdict.as_ref().is_some_and(StabilityVerdict::is_no_zero);
    Ok(SymbolReport {
        symbol,
        symbol_kind,
        verdict,
        rank_le_one: rank.is_le_one(),
        rank_one_verdict,
        evidence_positive: branch_a || branch_b,
    })
}

/// One rung of a truncation ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRung {
    pub kappa: Vec<u32>,
    pub report: SymbolReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderReport {
    pub rungs: Vec<LadderRung>,
    pub all_positive: bool,
}

/// Default truncation degrees for operators defined on every degree.
pub const LADDER: [u32; 3] = [2, 4, 8];

/// Run the algebraic-symbol check on `κ = (k, …, k)` for each `k` in `degrees`,
/// for an operator family given by `build(κ)`.
pub fn classify_ladder<F>(
    build: F,
    omega: &DomainProduct,
    degrees: &[u32],
    cfg: &OracleConfig,
) -> Result<LadderReport>
where
    F: Fn(&ExponentVector) -> Result<LinearOperator>,
{
    let mut rungs = Vec::with_capacity(degrees.len());
    for &k in degrees {
        let kappa = ExponentVector::uniform(omega.len(), k);
        let t = build(&kappa)?;
        let report = classify_preserver_evidence(&t, &kappa, omega, None, cfg)?;
        rungs.push(LadderRung { kappa: kappa.into_vec(), report });
    }
    let all_positive = rungs.iter().all(|r| r.report.evidence_positive);
    Ok(LadderReport { rungs, all_positive })
}

/// Display names `z1..zn, w1..wn` for a symbol.
pub fn symbol_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).chain((1..=n).map(|i| format!("w{i}"))).collect()
}
