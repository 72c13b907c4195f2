use circstab::poly::{coefficient_slices, multi_binomial};
use circstab::{ExponentVector, MultiPoly, C64};
use proptest::prelude::*;

const NVARS: usize = 3;

fn exps() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, NVARS)
}

fn int_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((exps(), -5i32..=5, -5i32..=5), 0..8).prop_map(|terms| {
        let mut acc = MultiPoly::zero(NVARS);
        for (e, re, im) in terms {
            acc = acc.add(&MultiPoly::monomial(e.into(), C64::new(re as f64, im as f64))).unwrap();
        }
        acc
    })
}

fn complex() -> impl Strategy<Value = C64> {
    (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(a, b)| C64::new(a, b))
}

fn float_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((exps(), complex()), 1..8).prop_map(|terms| {
        let mut acc = MultiPoly::zero(NVARS);
        for (e, c) in terms {
            acc = acc.add(&MultiPoly::monomial(e.into(), c)).unwrap();
        }
        acc
    })
}

fn point() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.2..1.2f64, -1.2..1.2f64).prop_map(|(a, b)| C64::new(a, b)), NVARS)
}

fn close(a: &MultiPoly, b: &MultiPoly, tol: f64) -> bool {
    a.relative_distance(b) <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_exact_on_integers(f in int_poly(), g in int_poly(), h in int_poly()) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(f.add(&g).unwrap().add(&h).unwrap(), f.add(&g.add(&h).unwrap()).unwrap());
        prop_assert!(f.sub(&f).unwrap().is_zero());
        prop_assert_eq!(f.mul(&MultiPoly::one(NVARS)).unwrap(), f.clone());
    }

    #[test]
    fn ring_axioms_on_complex(f in float_poly(), g in float_poly(), h in float_poly()) {
        let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in float_poly(), g in float_poly(), h in float_poly(), p in point()) {
        let combined = f.mul(&g).unwrap().add(&h).unwrap();
        let lhs = combined.evaluate(&p).unwrap();
        let rhs = f.evaluate(&p).unwrap() * g.evaluate(&p).unwrap() + h.evaluate(&p).unwrap();
        let scale = f.eval_scale(&p).unwrap() * g.eval_scale(&p).unwrap() + h.eval_scale(&p).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn derivative_matches_central_differences(f in float_poly(), p in point(), var in 0..NVARS) {
        let step = 1e-5;
        let df = f.partial_derive(&ExponentVector::unit(NVARS, var)).unwrap();
        let shift = |d: f64| {
            let mut q = p.clone();
            q[var] += C64::new(d, 0.0);
            f.evaluate(&q).unwrap()
        };
        let fd = (shift(step) - shift(-step)) / (2.0 * step);
        let exact = df.evaluate(&p).unwrap();
        let scale = df.eval_scale(&p).unwrap().max(f.eval_scale(&p).unwrap());
        prop_assert!((fd - exact).norm() <= 1e-6 * scale.max(1e-300));
    }

    #[test]
    fn slices_round_trip_bit_identically(f in float_poly(), g in float_poly(), shift in 0..2usize) {
        // six variables split as (z₁..z₃, w₁..w₃)
        let positions: Vec<usize> = (0..NVARS).map(|i| 2 * i + shift).collect();
        let f = f.embed(2 * NVARS, &positions).unwrap().add(&g.embed(2 * NVARS, &[0, 1, 2]).unwrap()).unwrap();
        let slices = coefficient_slices(&f, NVARS).unwrap();
        prop_assert_eq!(slices.reassemble().unwrap(), f);
    }

    #[test]
    fn binomials_match_factorials(k in prop::collection::vec(0u32..8, 1..4), seed in any::<u64>()) {
        let kappa = ExponentVector::from(k.clone());
        let alpha: Vec<u32> = k.iter().enumerate().map(|(i, &x)| ((seed >> (3 * i)) as u32) % (x + 1)).collect();
        let alpha = ExponentVector::from(alpha);
        let rest = kappa.checked_sub(&alpha).unwrap();
        let want = kappa.factorial() / (alpha.factorial() * rest.factorial());
        prop_assert_eq!(multi_binomial(&kappa, &alpha).unwrap() as f64, want.round());
    }

    #[test]
    fn json_round_trip(f in float_poly()) {
        let text = serde_json::to_string(&f.to_json()).unwrap();
        prop_assert_eq!(MultiPoly::parse_json(&text).unwrap(), f);
    }
}

#[test]
fn json_rejects_duplicates_and_non_finite() {
    let dup = r#"{"nvars":1,"terms":[{"exp":[1],"coef":[1,0]},{"exp":[1],"coef":[2,0]}]}"#;
    assert!(MultiPoly::parse_json(dup).is_err());
    let big = r#"{"nvars":1,"terms":[{"exp":[1],"coef":[1e400,0]}]}"#;
    assert!(MultiPoly::parse_json(big).is_err());
    let short = r#"{"nvars":2,"terms":[{"exp":[1],"coef":[1,0]}]}"#;
    assert!(MultiPoly::parse_json(short).is_err());
}
