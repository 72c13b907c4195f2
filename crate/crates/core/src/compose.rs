//! Master composition of two `2n`-variable polynomials in the forms
//! `f = Σ binom(κ,α) P_α(w) z^α` and `g = Σ binom(κ,α) Q_α(z) w^α`.
//!
//! Both the coefficient form and the derivative form are computed; they must
//! agree, and a disagreement is treated as a bug.

use crate::error::{Error, Result};
use crate::poly::{multi_binomial, slices_by, CoefficientSlices, ExponentVector, MultiPoly, SliceBy, C64};

/// Relative tolerance of the internal cross-check between the two forms.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// The two ways a composition was evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition {
    pub coefficient_form: MultiPoly,
    pub derivative_form: MultiPoly,
}

impl Composition {
    pub fn discrepancy(&self) -> f64 {
        self.coefficient_form.relative_distance(&self.derivative_form)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    HalfPlane,
    Disc,
}

struct Forms {
    n: usize,
    p: CoefficientSlices,
    q: CoefficientSlices,
}

fn check_forms(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<Forms> {
    let n = kappa.len();
    for h in [f, g] {
        if h.nvars() != 2 * n {
            return Err(Error::VariableMismatch { expected: 2 * n, found: h.nvars() });
        }
    }
    for i in 0..n {
        if f.degree_in(i) > kappa.get(i) {
            return Err(Error::DegreeExcess { var: i, degree: f.degree_in(i), bound: kappa.get(i) });
        }
        if g.degree_in(n + i) > kappa.get(i) {
            return Err(Error::DegreeExcess { var: n + i, degree: g.degree_in(n + i), bound: kappa.get(i) });
        }
    }
    Ok(Forms { n, p: slices_by(f, n, SliceBy::Z)?, q: slices_by(g, n, SliceBy::W)? })
}

/// `P_α(w)` placed in the `w` half of `2n` variables.
fn p_alpha(forms: &Forms, kappa: &ExponentVector, alpha: &ExponentVector) -> Result<MultiPoly> {
    let b = multi_binomial(kappa, alpha)? as f64;
    let w_pos: Vec<usize> = (forms.n..2 * forms.n).collect();
    Ok(forms.p.get(alpha).embed(2 * forms.n, &w_pos)?.scale(C64::new(1.0 / b, 0.0)))
}

/// `Q_α(z)` placed in the `z` half of `2n` variables.
fn q_alpha(forms: &Forms, kappa: &ExponentVector, alpha: &ExponentVector) -> Result<MultiPoly> {
    let b = multi_binomial(kappa, alpha)? as f64;
    let z_pos: Vec<usize> = (0..forms.n).collect();
    Ok(forms.q.get(alpha).embed(2 * forms.n, &z_pos)?.scale(C64::new(1.0 / b, 0.0)))
}

fn coefficient_form(forms: &Forms, kappa: &ExponentVector, variant: Variant) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(2 * forms.n);
    for alpha in kappa.below() {
        let q_index = match variant {
            Variant::HalfPlane => kappa.checked_sub(&alpha).expect("α ≤ κ"),
            Variant::Disc => alpha.clone(),
        };
        let b = multi_binomial(kappa, &alpha)? as f64;
        let term = p_alpha(forms, kappa, &alpha)?.mul(&q_alpha(forms, kappa, &q_index)?)?;
        acc = acc.add(&term.scale(C64::new(b, 0.0)))?;
    }
    Ok(acc)
}

fn derivative_form(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector, variant: Variant) -> Result<MultiPoly> {
    let n = kappa.len();
    let z_vars: Vec<usize> = (0..n).collect();
    let w_vars: Vec<usize> = (n..2 * n).collect();
    let kfact = kappa.factorial();
    let mut acc = MultiPoly::zero(2 * n);
    for alpha in kappa.below() {
        let rest = kappa.checked_sub(&alpha).expect("α ≤ κ");
        let df = f.partial_derive(&alpha.concat(&ExponentVector::zeros(n)))?.set_zero(&z_vars);
        let (g_order, weight) = match variant {
            Variant::HalfPlane => (rest.clone(), 1.0 / kfact),
            Variant::Disc => (alpha.clone(), rest.factorial() / (alpha.factorial() * kfact)),
        };
        let dg = g.partial_derive(&ExponentVector::zeros(n).concat(&g_order))?.set_zero(&w_vars);
        acc = acc.add(&df.mul(&dg)?.scale(C64::new(weight, 0.0)))?;
    }
    Ok(acc)
}

fn compose(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector, variant: Variant) -> Result<Composition> {
    let forms = check_forms(f, g, kappa)?;
    let out = Composition {
        coefficient_form: coefficient_form(&forms, kappa, variant)?,
        derivative_form: derivative_form(f, g, kappa, variant)?,
    };
    let gap = out.discrepancy();
    assert!(
        gap <= CROSS_CHECK_TOL,
        "coefficient and derivative forms of the composition disagree (relative gap {gap:e})"
    );
    Ok(out)
}

/// `Σ binom(κ,α) P_α(w) Q_{κ−α}(z)`.
pub fn compose_halfplane(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<MultiPoly> {
    Ok(compose(f, g, kappa, Variant::HalfPlane)?.coefficient_form)
}

/// `Σ binom(κ,α) P_α(w) Q_α(z)`.
pub fn compose_disc(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<MultiPoly> {
    Ok(compose(f, g, kappa, Variant::Disc)?.coefficient_form)
}

/// Both forms of the half-plane composition.
pub fn compose_halfplane_forms(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<Composition> {
    compose(f, g, kappa, Variant::HalfPlane)
}

/// Both forms of the disc composition.
pub fn compose_disc_forms(f: &MultiPoly, g: &MultiPoly, kappa: &ExponentVector) -> Result<Composition> {
    compose(f, g, kappa, Variant::Disc)
}
