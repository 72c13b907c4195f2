//! Operators used in the Lee-Yang and Heilmann-Lieb arguments, plus a few
//! elementary ones.

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::poly::{falling_factorial, ExponentVector, MultiPoly, C64};

fn check_var(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, nvars: n });
    }
    Ok(())
}

pub fn identity(kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    LinearOperator::from_fn(kappa.clone(), n, |a| Ok(MultiPoly::monomial(a.clone(), C64::new(1.0, 0.0))))
}

/// `∂/∂z_i`.
pub fn derivative(i: usize, kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    check_var(i, n)?;
    let unit = ExponentVector::unit(n, i);
    LinearOperator::from_fn(kappa.clone(), n, |a| {
        MultiPoly::monomial(a.clone(), C64::new(1.0, 0.0)).partial_derive(&unit)
    })
}

/// `f(z) ↦ f(s₁z₁, …, sₙzₙ)`.
pub fn scaling(factors: &[C64], kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    if factors.len() != n {
        return Err(Error::VariableMismatch { expected: n, found: factors.len() });
    }
    LinearOperator::from_fn(kappa.clone(), n, |a| {
        let c: C64 = a.as_slice().iter().zip(factors).map(|(&k, s)| s.powu(k)).product();
        Ok(MultiPoly::monomial(a.clone(), c))
    })
}

/// `f ↦ λ(f)·P` where `λ(z^α)` is `weights[box_index(α)]`.
pub fn rank_one(kappa: &ExponentVector, weights: &[C64], p: &MultiPoly) -> Result<LinearOperator> {
    if weights.len() != kappa.box_size() {
        return Err(Error::InvalidOperator(format!(
            "{} weights for {} monomials",
            weights.len(),
            kappa.box_size()
        )));
    }
    let mut k = 0;
    LinearOperator::from_fn(kappa.clone(), p.nvars(), |_| {
        let img = p.scale(weights[k]);
        k += 1;
        Ok(img)
    })
}

/// Asano contraction in `(z_i, z_j)`: `a + b z_i + c z_j + d z_i z_j ↦ a + d z_i`.
pub fn asano(i: usize, j: usize, kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    check_var(i, n)?;
    check_var(j, n)?;
    if n < 2 || i == j {
        return Err(Error::InvalidOperator("Asano contraction needs two distinct variables".into()));
    }
    if kappa.get(i) != 1 || kappa.get(j) != 1 {
        return Err(Error::InvalidOperator(format!(
            "Asano contraction needs degree bound 1 in variables {} and {}",
            i + 1,
            j + 1
        )));
    }
    LinearOperator::from_fn(kappa.clone(), n, |a| {
        Ok(match (a.get(i), a.get(j)) {
            (0, 0) => MultiPoly::monomial(a.clone(), C64::new(1.0, 0.0)),
            (1, 1) => {
                let mut e = a.clone().into_vec();
                e[j] = 0;
                MultiPoly::monomial(e.into(), C64::new(1.0, 0.0))
            }
            _ => MultiPoly::zero(n),
        })
    })
}

/// Multi-affine part: `z^α ↦ z^α` when every `α_i ≤ 1`, else `0`.
pub fn map_operator(kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    LinearOperator::from_fn(kappa.clone(), n, |a| {
        Ok(if a.as_slice().iter().all(|&k| k <= 1) {
            MultiPoly::monomial(a.clone(), C64::new(1.0, 0.0))
        } else {
            MultiPoly::zero(n)
        })
    })
}

/// `cosh(J) + sinh(J) ∂²/∂z_i∂z_j`.
pub fn lee_yang_edge(i: usize, j: usize, coupling: f64, kappa: &ExponentVector) -> Result<LinearOperator> {
    let n = kappa.len();
    check_var(i, n)?;
    check_var(j, n)?;
    if !coupling.is_finite() {
        return Err(Error::InvalidInput(format!("coupling {coupling} is not finite")));
    }
    let mut d2 = vec![0u32; n];
    d2[i] += 1;
    d2[j] += 1;
    let d2 = ExponentVector::from(d2);
    let (ch, sh) = (coupling.cosh(), coupling.sinh());
    LinearOperator::from_fn(kappa.clone(), n, |a| {
        let m = MultiPoly::monomial(a.clone(), C64::new(1.0, 0.0));
        m.scale(C64::new(ch, 0.0)).add(&m.partial_derive(&d2)?.scale(C64::new(sh, 0.0)))
    })
}

/// Hadamard-Schur product with a fixed multi-affine `g`, on `ℂ_{(1,…,1)}`.
pub fn hadamard_schur(g: &MultiPoly) -> Result<LinearOperator> {
    if !g.is_multi_affine() {
        return Err(Error::InvalidOperator("Hadamard-Schur factor must be multi-affine".into()));
    }
    let n = g.nvars();
    LinearOperator::from_fn(ExponentVector::uniform(n, 1), n, |a| Ok(MultiPoly::monomial(a.clone(), g.coefficient(a))))
}

/// `f • g = Σ_α f^{(α)}(0) g^{(α)}(0) z^α` computed from the formula directly.
pub fn hadamard_schur_product(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::VariableMismatch { expected: f.nvars(), found: g.nvars() });
    }
    let terms = f.terms().filter_map(|(a, c)| {
        let d = g.coefficient(a);
        (d != C64::new(0.0, 0.0)).then(|| {
            let af = a.factorial();
            (a.clone(), c * d * af * af)
        })
    });
    MultiPoly::from_terms(f.nvars(), terms)
}

/// The operator `u^α v^β ↦ ∂^α(v^β)/∂v^α` on `2n` variables `(u, v)`.
pub fn lieb_sokal(kappa: &ExponentVector) -> Result<LinearOperator> {
    let m = kappa.len();
    if !m.is_multiple_of(2) {
        return Err(Error::InvalidOperator("Lieb-Sokal operator acts on an even number of variables".into()));
    }
    let n = m / 2;
    LinearOperator::from_fn(kappa.clone(), m, |a| {
        let (u, v) = a.split_at(n);
        Ok(match v.checked_sub(&u) {
            Some(rest) => {
                let c: f64 = v.as_slice().iter().zip(u.as_slice()).map(|(&b, &al)| falling_factorial(b, al)).product();
                MultiPoly::monomial(ExponentVector::zeros(n).concat(&rest), C64::new(c, 0.0))
            }
            None => MultiPoly::zero(m),
        })
    })
}

/// `R(u, v) = Σ P_i(u) Q_i(v)` and `S(z) = Σ P_i(∂/∂z) Q_i(z)`.
pub fn lieb_sokal_pair(ps: &[MultiPoly], qs: &[MultiPoly]) -> Result<(MultiPoly, MultiPoly)> {
    if ps.len() != qs.len() {
        return Err(Error::InvalidInput(format!("{} P polynomials but {} Q polynomials", ps.len(), qs.len())));
    }
    let n = ps.first().or(qs.first()).map_or(1, MultiPoly::nvars);
    if let Some(bad) = ps.iter().chain(qs).find(|p| p.nvars() != n) {
        return Err(Error::VariableMismatch { expected: n, found: bad.nvars() });
    }
    let u_pos: Vec<usize> = (0..n).collect();
    let v_pos: Vec<usize> = (n..2 * n).collect();
    let mut r = MultiPoly::zero(2 * n);
    let mut s = MultiPoly::zero(n);
    for (p, q) in ps.iter().zip(qs) {
        r = r.add(&p.embed(2 * n, &u_pos)?.mul(&q.embed(2 * n, &v_pos)?)?)?;
        for (alpha, c) in p.terms() {
            s = s.add(&q.partial_derive(alpha)?.scale(*c))?;
        }
    }
    Ok((r, s))
}
