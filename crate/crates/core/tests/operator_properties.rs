#![allow(clippy::needless_range_loop)]

use std::f64::consts::{FRAC_PI_2, TAU};

use circstab::apolarity::{bracket_with, BracketSign};
use circstab::domains::{phi_kappa, CircularDomain, DomainProduct, MoebiusMap};
use circstab::operators::builtin::{
    asano, derivative, hadamard_schur, identity, lee_yang_edge, map_operator, scaling,
};
use circstab::operators::{
    algebraic_symbol_general, algebraic_symbol_halfplane, classify_preserver_evidence, LinearOperator,
};
use circstab::oracle::{find_zero, OracleConfig};
use circstab::{ExponentVector, MultiPoly, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn int_poly_in_box(kappa: Vec<u32>, nvars: usize) -> impl Strategy<Value = MultiPoly> {
    let exp = kappa.iter().map(|&k| 0..=k).collect::<Vec<_>>();
    prop::collection::vec((exp, -4i32..=4, -4i32..=4), 0..6).prop_map(move |t| {
        let mut acc = MultiPoly::zero(nvars);
        for (e, a, b) in t {
            acc = acc.add(&MultiPoly::monomial(e.into(), c(a as f64, b as f64))).unwrap();
        }
        acc
    })
}

fn int_operator(kappa: Vec<u32>, nvars_out: usize) -> impl Strategy<Value = LinearOperator> {
    let size = ExponentVector::from(kappa.clone()).box_size();
    prop::collection::vec(int_poly_in_box(vec![2; nvars_out], nvars_out), size).prop_map(move |imgs| {
        let k = ExponentVector::from(kappa.clone());
        LinearOperator::from_table(k.clone(), nvars_out, k.below().zip(imgs).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn apply_is_linear(
        t in int_operator(vec![2, 1], 2),
        f in int_poly_in_box(vec![2, 1], 2),
        g in int_poly_in_box(vec![2, 1], 2),
        a in (-3i32..=3, -3i32..=3),
        b in (-3i32..=3, -3i32..=3),
    ) {
        let (a, b) = (c(a.0 as f64, a.1 as f64), c(b.0 as f64, b.1 as f64));
        let combo = f.scale(a).add(&g.scale(b)).unwrap();
        let lhs = t.apply(&combo).unwrap();
        let rhs = t.apply(&f).unwrap().scale(a).add(&t.apply(&g).unwrap().scale(b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn general_symbol_with_identity_maps_matches_halfplane(t in int_operator(vec![2, 1], 2)) {
        let kappa = ExponentVector::from(vec![2, 1]);
        let general = algebraic_symbol_general(&t, &kappa, &[MoebiusMap::identity(); 2]).unwrap();
        let half = algebraic_symbol_halfplane(&t, &kappa).unwrap();
        let ratio = match half.terms().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())) {
            Some((e, h)) => general.coefficient(e) / h,
            None => c(1.0, 0.0),
        };
        for e in general.support().into_iter().chain(half.support()) {
            prop_assert!((general.coefficient(&e) - ratio * half.coefficient(&e)).norm() <= 1e-12 * (1.0 + half.max_abs_coef()));
        }
    }

    #[test]
    fn bracket_is_bilinear(
        f1 in int_poly_in_box(vec![2, 2], 2),
        f2 in int_poly_in_box(vec![2, 2], 2),
        g in int_poly_in_box(vec![2, 2], 2),
        a in -5i32..=5,
        b in -5i32..=5,
    ) {
        let kappa = ExponentVector::uniform(2, 2);
        let (a, b) = (c(a as f64, 0.0), c(0.0, b as f64));
        for sign in [BracketSign::Constant, BracketSign::PerTerm] {
            let combo = f1.scale(a).add(&f2.scale(b)).unwrap();
            let lhs = bracket_with(&combo, &g, &kappa, sign).unwrap().value;
            let rhs = a * bracket_with(&f1, &g, &kappa, sign).unwrap().value
                + b * bracket_with(&f2, &g, &kappa, sign).unwrap().value;
            prop_assert_eq!(lhs, rhs);
        }
    }
}

/// A random `Ω`-stable polynomial of degree at most `κ`: a product of upper
/// half-plane stable affine forms transported by the catalog maps.
fn stable_input(r: &mut ChaCha8Rng, omega: &DomainProduct, kappa: &ExponentVector) -> MultiPoly {
    let n = kappa.len();
    let mut used = vec![0u32; n];
    let mut f = MultiPoly::one(n);
    for _ in 0..kappa.as_slice().iter().max().copied().unwrap_or(0) {
        let mut terms: Vec<(ExponentVector, C64)> =
            vec![(ExponentVector::zeros(n), c(r.random_range(-2.0..2.0), r.random_range(0.1..2.0)))];
        for v in 0..n {
            if used[v] < kappa.get(v) && r.random_bool(0.8) {
                used[v] += 1;
                terms.push((ExponentVector::unit(n, v), c(r.random_range(0.1..2.0), 0.0)));
            }
        }
        f = f.mul(&MultiPoly::from_terms(n, terms).unwrap()).unwrap();
    }
    let maps: Vec<MoebiusMap> = omega.domains().iter().map(CircularDomain::to_upper_half_plane).collect();
    phi_kappa(&f, &maps, kappa).unwrap()
}

#[test]
fn builtin_preservers_keep_stable_inputs_stable() {
    let h0 = CircularDomain::half_plane(0.0);
    let hpi2 = CircularDomain::half_plane(FRAC_PI_2);
    let disc = CircularDomain::unit_disc();
    let ext = CircularDomain::unit_exterior();
    let k22 = ExponentVector::uniform(2, 2);
    let k11 = ExponentVector::uniform(2, 1);
    let k112 = ExponentVector::from(vec![1, 1, 2]);
    let schur_g = MultiPoly::from_terms(2, [(vec![0, 0], c(2.0, 0.0)), (vec![1, 0], c(0.5, 0.5)), (vec![1, 1], c(-1.0, 0.0))]).unwrap();
    let cases: Vec<(&str, LinearOperator, ExponentVector, DomainProduct)> = vec![
        ("identity/H0", identity(&k22).unwrap(), k22.clone(), DomainProduct::uniform(h0, 2)),
        ("identity/exterior", identity(&k22).unwrap(), k22.clone(), DomainProduct::uniform(ext, 2)),
        ("derivative/H0", derivative(0, &k22).unwrap(), k22.clone(), DomainProduct::uniform(h0, 2)),
        ("scaling/H0", scaling(&[c(0.5, 0.0), c(3.0, 0.0)], &k22).unwrap(), k22.clone(), DomainProduct::uniform(h0, 2)),
        ("scaling/disc", scaling(&[C64::from_polar(0.7, 1.0), c(-1.0, 0.0)], &k22).unwrap(), k22.clone(), DomainProduct::uniform(disc, 2)),
        ("asano/disc", asano(0, 1, &k112).unwrap(), k112.clone(), DomainProduct::uniform(disc, 3)),
        ("map/H0", map_operator(&k22).unwrap(), k22.clone(), DomainProduct::uniform(h0, 2)),
        ("edge/H(pi/2)", lee_yang_edge(0, 1, 0.8, &k11).unwrap(), k11.clone(), DomainProduct::uniform(hpi2, 2)),
        ("schur/disc", hadamard_schur(&schur_g).unwrap(), k11.clone(), DomainProduct::uniform(disc, 2)),
    ];
    let cfg = OracleConfig { slices_per_variable: 40, ..OracleConfig::default() };
    let mut r = ChaCha8Rng::seed_from_u64(21);
    let mut positive = 0;
    for (name, t, kappa, omega) in &cases {
        let report = classify_preserver_evidence(t, kappa, omega, None, &cfg).unwrap();
        if !report.evidence_positive {
            continue;
        }
        positive += 1;
        for k in 0..50u64 {
            let f = stable_input(&mut r, omega, kappa);
            let out = t.apply(&f).unwrap();
            if out.is_zero() {
                continue;
            }
            let verdict = find_zero(&out, omega, &cfg.clone().with_seed(k)).unwrap();
            assert!(verdict.is_no_zero(), "{name}, input {k}: {f} -> {out}");
        }
    }
    assert!(positive >= 7, "only {positive} evidence-positive operators");
}

#[test]
fn rotation_is_rejected_on_the_upper_half_plane() {
    let k = ExponentVector::from(vec![1]);
    let t = scaling(&[c(0.0, 1.0)], &k).unwrap();
    let omega = DomainProduct::uniform(CircularDomain::half_plane(0.0), 1);
    let report = classify_preserver_evidence(&t, &k, &omega, None, &OracleConfig::default()).unwrap();
    assert!(!report.evidence_positive);
    // unit-modulus rotations do preserve the disc
    let disc = DomainProduct::uniform(CircularDomain::unit_disc(), 1);
    let t = scaling(&[C64::from_polar(1.0, TAU / 5.0)], &k).unwrap();
    assert!(classify_preserver_evidence(&t, &k, &disc, None, &OracleConfig::default()).unwrap().evidence_positive);
}
