use circstab::apolarity::{grace_check_halfplane, GraceConfig};
use circstab::compose::{compose_disc_forms, compose_halfplane, compose_halfplane_forms};
use circstab::domains::{CircularDomain, DomainProduct};
use circstab::oracle::{find_zero, OracleConfig};
use circstab::{ExponentVector, MultiPoly, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Polynomial in `(z, w)` with `deg_{z_i} ≤ z_bound[i]` and `deg_{w_i} ≤ w_bound[i]`.
fn bounded(z_bound: Vec<u32>, w_bound: Vec<u32>) -> impl Strategy<Value = MultiPoly> {
    let n = z_bound.len();
    let exp: Vec<_> = z_bound.into_iter().chain(w_bound).map(|b| 0..=b).collect();
    prop::collection::vec((exp, -2.0..2.0f64, -2.0..2.0f64), 1..10)
        .prop_map(move |t| MultiPoly::from_terms(2 * n, t.into_iter().map(|(e, a, b)| (e, c(a, b)))).unwrap())
}

/// `Σ aᵢzᵢ + Σ bᵢwᵢ + c` with `aᵢ, bᵢ ≥ 0` and `Im c > 0`.
fn positive_form(n: usize) -> impl Strategy<Value = MultiPoly> {
    (prop::collection::vec(0.0..2.0f64, 2 * n), -2.0..2.0f64, 0.1..2.0f64).prop_map(move |(w, re, im)| {
        let mut terms: Vec<(ExponentVector, C64)> = vec![(ExponentVector::zeros(2 * n), c(re, im))];
        terms.extend(w.into_iter().enumerate().map(|(v, x)| (ExponentVector::unit(2 * n, v), c(x, 0.0))));
        MultiPoly::from_terms(2 * n, terms).unwrap()
    })
}

fn product(forms: Vec<MultiPoly>) -> MultiPoly {
    forms.iter().fold(MultiPoly::one(forms[0].nvars()), |acc, f| acc.mul(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn both_forms_agree(
        f in bounded(vec![3, 2], vec![2, 1]),
        g in bounded(vec![1, 2], vec![3, 2]),
    ) {
        let kappa = ExponentVector::from(vec![3, 2]);
        prop_assert!(compose_halfplane_forms(&f, &g, &kappa).unwrap().discrepancy() <= 1e-9);
        prop_assert!(compose_disc_forms(&f, &g, &kappa).unwrap().discrepancy() <= 1e-9);
    }

    #[test]
    fn halfplane_composition_keeps_stability(
        fs in prop::collection::vec(positive_form(2), 1..3),
        gs in prop::collection::vec(positive_form(2), 1..3),
        seed in any::<u64>(),
    ) {
        let (f, g) = (product(fs), product(gs));
        let kappa = ExponentVector::from(vec![f.degree_in(0).max(g.degree_in(2)), f.degree_in(1).max(g.degree_in(3))]);
        let out = compose_halfplane(&f, &g, &kappa).unwrap();
        if !out.is_zero() {
            let omega = DomainProduct::uniform(CircularDomain::half_plane(0.0), 4);
            let cfg = OracleConfig { slices_per_variable: 40, seed, ..OracleConfig::default() };
            prop_assert!(find_zero(&out, &omega, &cfg).unwrap().is_no_zero());
        }
    }

    #[test]
    fn grace_on_a_common_half_plane(
        fs in prop::collection::vec((0.1..2.0f64, -2.0..2.0f64, 0.1..2.0f64), 1..4),
        gs in prop::collection::vec((0.1..2.0f64, -2.0..2.0f64, 0.1..2.0f64), 1..4),
    ) {
        let build = |t: &[(f64, f64, f64)]| {
            product(t.iter().map(|&(a, re, im)| MultiPoly::from_univariate(&[c(re, im), c(a, 0.0)])).collect())
        };
        let (f, g) = (build(&fs), build(&gs));
        let kappa = ExponentVector::from(vec![f.degree_in(0).max(g.degree_in(0))]);
        let h = CircularDomain::half_plane(0.0);
        let cfg = GraceConfig { oracle: OracleConfig { slices_per_variable: 30, ..OracleConfig::default() }, ..GraceConfig::default() };
        let report = grace_check_halfplane(&f, &g, &h, &h, &kappa, &cfg).unwrap();
        prop_assert!(!report.violation);
    }
}
