//! Univariate complex root finding: eigenvalues of the balanced companion
//! matrix, Newton polishing, and recovery of multiple roots from clusters.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, C64};

const LEAD_TOL: f64 = 1e-12;

/// All `deg f` roots of a univariate [`MultiPoly`].
pub fn univariate_roots(f: &MultiPoly) -> Result<Vec<C64>> {
    roots_of_coeffs(&f.to_univariate()?)
}

/// Roots of `Σ coeffs[k] x^k`.
pub fn roots_of_coeffs(coeffs: &[C64]) -> Result<Vec<C64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Err(Error::InvalidInput("root finding needs degree at least 1".into()));
    }
    let lead = coeffs[deg].norm();
    if lead < LEAD_TOL * scale {
        return Err(Error::SmallLeadingCoefficient(lead / scale));
    }

    // exact zero roots first
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    let rdeg = reduced.len() - 1;
    let mut found = match rdeg {
        0 => Vec::new(),
        1 => vec![-reduced[0] / reduced[1]],
        _ => companion_eigenvalues(reduced).or_else(|_| aberth(reduced))?,
    };
    for r in &mut found {
        *r = newton_polish(reduced, *r, 30);
    }
    merge_clusters(reduced, &mut found);
    roots.extend(found);
    Ok(roots)
}

/// Horner evaluation of `Σ coeffs[k] x^k`.
pub fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn horner_with_derivative(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn abs_scale(coeffs: &[C64], x: C64) -> f64 {
    let r = x.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn derivative(coeffs: &[C64]) -> Vec<C64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

fn companion_eigenvalues(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -coeffs[n - 1 - j] / lead;
    }
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    balance(&mut m);
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000).ok_or(Error::NoConvergence(n))?;
    let (_, t) = schur.unpack();
    let eig: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    if eig.iter().all(|z| z.is_finite()) {
        Ok(eig)
    } else {
        Err(Error::NoConvergence(n))
    }
}

/// Diagonal similarity scaling by powers of two (Parlett–Reinsch).
fn balance(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].l1_norm();
                    row += m[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Simultaneous Aberth–Ehrlich iteration; fallback when the QR iteration stalls.
fn aberth(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * bound, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner_with_derivative(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: C64 = (0..n).filter(|&j| j != k).map(|j| C64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|r| r.is_finite()) {
        Ok(z)
    } else {
        Err(Error::NoConvergence(n))
    }
}

fn newton_polish(coeffs: &[C64], mut x: C64, iters: usize) -> C64 {
    let mut fx = horner(coeffs, x).norm();
    for _ in 0..iters {
        if fx == 0.0 {
            break;
        }
        let (p, dp) = horner_with_derivative(coeffs, x);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = x - p / dp;
        let fc = horner(coeffs, cand).norm();
        if !(fc < fx) {
            break;
        }
        x = cand;
        fx = fc;
    }
    x
}

/// Replace clusters that numerically represent one multiple root by that root.
///
/// A cluster of `m` computed roots around centroid `c` is accepted as an
/// `m`-fold root when `f, f', …, f^{(m−1)}` all vanish at `c` to within a
/// relative `1e−10` of their evaluation scale.
fn merge_clusters(coeffs: &[C64], roots: &mut [C64]) {
    let n = roots.len();
    if n < 2 {
        return;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tol = 0.1 * roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    for members in groups.values().filter(|m| m.len() > 1) {
        let m = members.len();
        let centroid: C64 = members.iter().map(|&i| roots[i]).sum::<C64>() / m as f64;
        let mut derivs = vec![coeffs.to_vec()];
        for _ in 1..m {
            let next = derivative(derivs.last().unwrap());
            derivs.push(next);
        }
        // the (m-1)th derivative has a simple root at an m-fold root of f
        let refined = newton_polish(&derivs[m - 1], centroid, 10);
        let multiple = derivs
            .iter()
            .all(|d| horner(d, refined).norm() <= 1e-10 * abs_scale(d, refined));
        if multiple {
            for &i in members {
                roots[i] = refined;
            }
        }
    }
}

/// Monic-normalized product `lead · ∏ (x − rᵢ)`, ascending coefficients.
pub fn reconstruct(lead: C64, roots: &[C64]) -> Vec<C64> {
    let mut out = vec![lead];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); out.len() + 1];
        for (j, &c) in out.iter().enumerate() {
            next[j] -= c * r;
            next[j + 1] += c;
        }
        out = next;
    }
    out
}
