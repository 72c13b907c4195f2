//! Sparse multivariate polynomials with complex double coefficients.
//!
//! A [`MultiPoly`] is a map from exponent vectors to nonzero coefficients.
//! Everything else in the crate (symbols, partition functions, operator
//! images) is carried in this type.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 24;
/// Largest supported degree in any single variable.
pub const MAX_DEGREE: u32 = 64;
/// Largest supported number of stored terms.
pub const MAX_TERMS: usize = 1_000_000;
/// Default relative pruning threshold applied by arithmetic.
pub const DEFAULT_PRUNE: f64 = 1e-14;

/// Multi-index `α ∈ ℕⁿ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn uniform(n: usize, k: u32) -> Self {
        ExponentVector(vec![k; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, or `None` when some component would go negative.
    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// `α! = ∏ αᵢ!` as a double.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn concat(&self, other: &ExponentVector) -> ExponentVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ExponentVector(v)
    }

    /// Split into the first `k` components and the rest.
    pub fn split_at(&self, k: usize) -> (ExponentVector, ExponentVector) {
        let (a, b) = self.0.split_at(k);
        (ExponentVector(a.to_vec()), ExponentVector(b.to_vec()))
    }

    /// All `α ≤ self` in lexicographic order (last index fastest).
    pub fn below(&self) -> BoxIter {
        BoxIter { bound: self.0.clone(), next: Some(vec![0; self.0.len()]) }
    }

    /// Number of multi-indices `α ≤ self`.
    pub fn box_size(&self) -> usize {
        self.0.iter().map(|&k| k as usize + 1).product()
    }

    /// Mixed-radix position of `α` inside the box `≤ self`.
    pub fn box_index(&self, alpha: &ExponentVector) -> Option<usize> {
        if !alpha.le(self) {
            return None;
        }
        let mut idx = 0usize;
        for (a, k) in alpha.0.iter().zip(&self.0) {
            idx = idx * (*k as usize + 1) + *a as usize;
        }
        Some(idx)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector(v.to_vec())
    }
}

/// Iterator over the integer box `{α : 0 ≤ α ≤ κ}`.
pub struct BoxIter {
    bound: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = ExponentVector;

    fn next(&mut self) -> Option<ExponentVector> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if succ[i] < self.bound[i] {
                succ[i] += 1;
                advanced = true;
                break;
            }
            succ[i] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(ExponentVector(cur))
    }
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

pub fn falling_factorial(e: u32, k: u32) -> f64 {
    (0..k).map(|j| f64::from(e - j)).product()
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * u128::from(n - j) / u128::from(j + 1);
    }
    acc
}

/// `∏ binom(κᵢ, αᵢ)`, exact.
pub fn multi_binomial(kappa: &ExponentVector, alpha: &ExponentVector) -> Result<u128> {
    if kappa.len() != alpha.len() {
        return Err(Error::VariableMismatch { expected: kappa.len(), found: alpha.len() });
    }
    if !alpha.le(kappa) {
        return Err(Error::NotBelow { alpha: alpha.0.clone(), kappa: kappa.0.clone() });
    }
    kappa.0.iter().zip(&alpha.0).try_fold(1u128, |acc, (&k, &a)| {
        acc.checked_mul(binomial(k, a))
            .ok_or_else(|| Error::Capacity("multinomial coefficient overflows u128".into()))
    })
}

/// Relative coefficient pruning applied after arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pruning {
    /// Drop coefficients below `threshold · max|coef|`.
    Relative(f64),
    /// Keep everything except exact zeros.
    Off,
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::Relative(DEFAULT_PRUNE)
    }
}

/// Sparse polynomial in `nvars` variables over `ℂ`.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, C64>,
}

fn check_nvars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::Capacity(format!("{n} variables (limit {MAX_VARS})")));
    }
    Ok(())
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = MultiPoly::zero(nvars);
        if c != C64::new(0.0, 0.0) {
            p.terms.insert(ExponentVector::zeros(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, C64::new(1.0, 0.0))
    }

    /// The coordinate polynomial `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        MultiPoly::monomial(ExponentVector::unit(nvars, i), C64::new(1.0, 0.0))
    }

    pub fn monomial(exp: ExponentVector, c: C64) -> Self {
        let mut p = MultiPoly::zero(exp.len());
        if c != C64::new(0.0, 0.0) {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, E>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, C64)>,
        E: Into<ExponentVector>,
    {
        check_nvars(nvars)?;
        let mut map: BTreeMap<ExponentVector, C64> = BTreeMap::new();
        for (e, c) in terms {
            let e = e.into();
            if e.len() != nvars {
                return Err(Error::VariableMismatch { expected: nvars, found: e.len() });
            }
            *map.entry(e).or_insert(C64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != C64::new(0.0, 0.0));
        let p = MultiPoly { nvars, terms: map };
        p.check_capacity()?;
        Ok(p)
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_univariate(coeffs: &[C64]) -> Self {
        let mut p = MultiPoly::zero(1);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                p.terms.insert(ExponentVector(vec![k as u32]), c);
            }
        }
        p
    }

    /// Real-coefficient univariate convenience constructor.
    pub fn from_real_univariate(coeffs: &[f64]) -> Self {
        let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
        MultiPoly::from_univariate(&c)
    }

    fn check_capacity(&self) -> Result<()> {
        check_nvars(self.nvars)?;
        if self.terms.len() > MAX_TERMS {
            return Err(Error::Capacity(format!("{} terms (limit {MAX_TERMS})", self.terms.len())));
        }
        for (i, d) in self.degrees().into_iter().enumerate() {
            if d > MAX_DEGREE {
                return Err(Error::Capacity(format!(
                    "degree {d} in variable {i} (limit {MAX_DEGREE})"
                )));
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    /// Exponents with nonzero coefficient, in increasing order.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (di, &ei) in d.iter_mut().zip(&e.0) {
                *di = (*di).max(ei);
            }
        }
        d
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(ExponentVector::total).max().unwrap_or(0)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `true` when `deg_{z_i} ≤ κ_i` for every `i`.
    pub fn fits(&self, kappa: &ExponentVector) -> bool {
        kappa.len() == self.nvars && self.terms.keys().all(|e| e.le(kappa))
    }

    /// Error unless the polynomial lies in `ℂ_κ`.
    pub fn check_fits(&self, kappa: &ExponentVector) -> Result<()> {
        if kappa.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: kappa.len() });
        }
        for (i, d) in self.degrees().into_iter().enumerate() {
            if d > kappa.0[i] {
                return Err(Error::DegreeExcess { var: i, degree: d, bound: kappa.0[i] });
            }
        }
        Ok(())
    }

    pub fn is_multi_affine(&self) -> bool {
        self.terms.keys().all(|e| e.0.iter().all(|&a| a <= 1))
    }

    fn same_nvars(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    fn pruned(mut self, pruning: Pruning) -> Self {
        self.terms.retain(|_, c| *c != C64::new(0.0, 0.0));
        if let Pruning::Relative(rel) = pruning {
            let cut = rel * self.max_abs_coef();
            self.terms.retain(|_, c| c.norm() >= cut);
        }
        self
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add_with(other, Pruning::default())
    }

    pub fn add_with(&self, other: &MultiPoly, pruning: Pruning) -> Result<MultiPoly> {
        self.same_nvars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_default() += c;
        }
        Ok(out.pruned(pruning))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.pruned(Pruning::Off)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.mul_with(other, Pruning::default())
    }

    pub fn mul_with(&self, other: &MultiPoly, pruning: Pruning) -> Result<MultiPoly> {
        self.same_nvars(other)?;
        let (da, db) = (self.degrees(), other.degrees());
        for (i, (a, b)) in da.iter().zip(&db).enumerate() {
            if a + b > MAX_DEGREE {
                return Err(Error::Capacity(format!(
                    "product degree {} in variable {i} (limit {MAX_DEGREE})",
                    a + b
                )));
            }
        }
        let mut terms: BTreeMap<ExponentVector, C64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *terms.entry(ea.add(eb)).or_default() += ca * cb;
            }
            if terms.len() > MAX_TERMS {
                return Err(Error::Capacity(format!("product exceeds {MAX_TERMS} terms")));
            }
        }
        Ok(MultiPoly { nvars: self.nvars, terms }.pruned(pruning))
    }

    pub fn pow(&self, k: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Iterated partial derivative `∂^α f / ∂z^α`.
    pub fn partial_derive(&self, alpha: &ExponentVector) -> Result<MultiPoly> {
        if alpha.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: alpha.len() });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(alpha) {
                let factor: f64 =
                    e.0.iter().zip(&alpha.0).map(|(&ei, &ai)| falling_factorial(ei, ai)).product();
                out.terms.insert(rest, c * factor);
            }
        }
        Ok(out)
    }

    fn power_table(&self, point: &[C64]) -> Vec<Vec<C64>> {
        let degs = self.degrees();
        point
            .iter()
            .zip(&degs)
            .map(|(&x, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=d {
                    row.push(acc);
                    acc *= x;
                }
                row
            })
            .collect()
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: point.len() });
        }
        let pw = self.power_table(point);
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.0.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pw[i][k as usize])
            })
            .sum())
    }

    /// `Σ |c_α| |p^α|`, the natural scale for residuals at `point`.
    pub fn eval_scale(&self, point: &[C64]) -> Result<f64> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: point.len() });
        }
        let pw = self.power_table(point);
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.0.iter().enumerate().fold(c.norm(), |acc, (i, &k)| acc * pw[i][k as usize].norm())
            })
            .sum())
    }

    /// Substitute `value` for `z_var`, leaving a polynomial in `nvars − 1` variables.
    pub fn restrict(&self, var: usize, value: C64) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, nvars: self.nvars });
        }
        let mut terms: BTreeMap<ExponentVector, C64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.0.clone();
            let k = rest.remove(var);
            *terms.entry(ExponentVector(rest)).or_default() += c * value.powu(k);
        }
        Ok(MultiPoly { nvars: self.nvars - 1, terms }.pruned(Pruning::default()))
    }

    /// Fix every variable except `var` to the matching entry of `point`;
    /// returns ascending univariate coefficients in `z_var`.
    pub fn restrict_to_univariate(&self, var: usize, point: &[C64]) -> Result<Vec<C64>> {
        if point.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: point.len() });
        }
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, nvars: self.nvars });
        }
        let pw = self.power_table(point);
        let mut out = vec![C64::new(0.0, 0.0); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let v = e.0.iter().enumerate().fold(*c, |acc, (i, &k)| {
                if i == var {
                    acc
                } else {
                    acc * pw[i][k as usize]
                }
            });
            out[e.0[var] as usize] += v;
        }
        Ok(out)
    }

    /// Set the listed variables to zero without changing the variable count.
    pub fn set_zero(&self, vars: &[usize]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| vars.iter().all(|&v| e.0[v] == 0))
            .map(|(e, c)| (e.clone(), *c))
            .collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    /// Re-index into `nvars` variables, sending variable `i` to `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Result<MultiPoly> {
        if positions.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: positions.len() });
        }
        if let Some(&bad) = positions.iter().find(|&&p| p >= nvars) {
            return Err(Error::IndexOutOfRange { index: bad, nvars });
        }
        check_nvars(nvars)?;
        let mut terms: BTreeMap<ExponentVector, C64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; nvars];
            for (i, &k) in e.0.iter().enumerate() {
                ne[positions[i]] += k;
            }
            *terms.entry(ExponentVector(ne)).or_default() += c;
        }
        Ok(MultiPoly { nvars, terms }.pruned(Pruning::Off))
    }

    /// Substitute `z_i ↦ images[i]` (all images share one variable count).
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: images.len() });
        }
        let out_n = images.first().map_or(0, MultiPoly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != out_n) {
            return Err(Error::VariableMismatch { expected: out_n, found: bad.nvars });
        }
        let degs = self.degrees();
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (img, &d) in images.iter().zip(&degs) {
            let mut row = vec![MultiPoly::one(out_n)];
            for k in 1..=d as usize {
                let next = row[k - 1].mul_with(img, Pruning::Off)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = MultiPoly::zero(out_n);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(out_n, *c);
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t.mul_with(&powers[i][k as usize], Pruning::Off)?;
                }
            }
            acc = acc.add_with(&t, Pruning::Off)?;
        }
        Ok(acc.pruned(Pruning::default()))
    }

    /// Ascending coefficients of a univariate polynomial.
    pub fn to_univariate(&self) -> Result<Vec<C64>> {
        if self.nvars != 1 {
            return Err(Error::VariableMismatch { expected: 1, found: self.nvars });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.degree_in(0) as usize + 1];
        for (e, c) in &self.terms {
            out[e.0[0] as usize] = *c;
        }
        Ok(out)
    }

    /// Largest coefficientwise distance, relative to the larger of the two maxima.
    pub fn relative_distance(&self, other: &MultiPoly) -> f64 {
        let scale = self.max_abs_coef().max(other.max_abs_coef());
        let mut worst: f64 = 0.0;
        for e in self.terms.keys().chain(other.terms.keys()) {
            worst = worst.max((self.coefficient(e) - other.coefficient(e)).norm());
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                .collect();
            let coef = format_complex(*c);
            parts.push(if mono.is_empty() {
                coef
            } else if *c == C64::new(1.0, 0.0) {
                mono.join("*")
            } else {
                format!("{coef}*{}", mono.join("*"))
            });
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.0.clone(), coef: [c.re, c.im] })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<MultiPoly> {
        if json.nvars == 0 {
            return Err(Error::Parse("nvars must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (k, t) in json.terms.iter().enumerate() {
            if t.exp.len() != json.nvars {
                return Err(Error::Parse(format!(
                    "terms[{k}]: exponent has {} entries, expected {}",
                    t.exp.len(),
                    json.nvars
                )));
            }
            if !t.coef.iter().all(|x| x.is_finite()) {
                return Err(Error::Parse(format!("terms[{k}]: non-finite coefficient")));
            }
            if !seen.insert(t.exp.clone()) {
                return Err(Error::Parse(format!("terms[{k}]: duplicate exponent {:?}", t.exp)));
            }
        }
        MultiPoly::from_terms(
            json.nvars,
            json.terms.iter().map(|t| (t.exp.clone(), C64::new(t.coef[0], t.coef[1]))),
        )
    }

    pub fn parse_json(text: &str) -> Result<MultiPoly> {
        let json: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        MultiPoly::from_json(&json)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("z{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

pub(crate) fn format_complex(c: C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

/// JSON interchange form of a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: [f64; 2],
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PolyJson::deserialize(d)?;
        MultiPoly::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Which half of the `(z, w)` split indexes the slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceBy {
    /// Key by the `z`-exponent; slices are polynomials in `w`.
    Z,
    /// Key by the `w`-exponent; slices are polynomials in `z`.
    W,
}

/// Coefficient polynomials of a `2n`-variable polynomial with respect to one half
/// of the variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSlices {
    pub split: usize,
    pub by: SliceBy,
    pub slices: BTreeMap<ExponentVector, MultiPoly>,
}

impl CoefficientSlices {
    pub fn get(&self, alpha: &ExponentVector) -> MultiPoly {
        self.slices.get(alpha).cloned().unwrap_or_else(|| MultiPoly::zero(self.split))
    }

    pub fn reassemble(&self) -> Result<MultiPoly> {
        let n = self.split;
        let mut terms = Vec::new();
        for (key, p) in &self.slices {
            for (e, c) in p.terms() {
                let full = match self.by {
                    SliceBy::Z => key.concat(e),
                    SliceBy::W => e.concat(key),
                };
                terms.push((full, *c));
            }
        }
        MultiPoly::from_terms(2 * n, terms)
    }
}

/// Partition `f(z, w)` by `z`-exponent: `f = Σ_α z^α P_α(w)`.
pub fn coefficient_slices(f: &MultiPoly, split: usize) -> Result<CoefficientSlices> {
    slices_by(f, split, SliceBy::Z)
}

pub fn slices_by(f: &MultiPoly, split: usize, by: SliceBy) -> Result<CoefficientSlices> {
    if f.nvars() != 2 * split {
        return Err(Error::InvalidInput(format!(
            "coefficient slices need 2·{split} variables, polynomial has {}",
            f.nvars()
        )));
    }
    let mut slices: BTreeMap<ExponentVector, MultiPoly> = BTreeMap::new();
    for (e, c) in f.terms() {
        let (z, w) = e.split_at(split);
        let (key, rest) = match by {
            SliceBy::Z => (z, w),
            SliceBy::W => (w, z),
        };
        slices.entry(key).or_insert_with(|| MultiPoly::zero(split)).terms.insert(rest, *c);
    }
    Ok(CoefficientSlices { split, by, slices })
}

/// Slices of a polynomial whose variable count is even, splitting in the middle.
pub fn coefficient_slices_even(f: &MultiPoly) -> Result<CoefficientSlices> {
    if !f.nvars().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "odd variable count {} without explicit split",
            f.nvars()
        )));
    }
    coefficient_slices(f, f.nvars() / 2)
}
