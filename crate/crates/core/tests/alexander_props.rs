use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use orderable::alexander::*;
use proptest::prelude::*;

type Poly = LaurentPoly<BigInt>;

/// Symmetric polynomial with Δ(1) = 1: c0 + Σ ci (t^i + t^-i), c0 = 1 - 2Σci.
fn symmetric_delta() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..=3).prop_map(|half| {
        let c0 = 1 - 2 * half.iter().sum::<i64>();
        let mut terms = vec![(0, BigInt::from(c0))];
        for (i, &c) in half.iter().enumerate() {
            let e = i as i64 + 1;
            terms.push((e, BigInt::from(c)));
            terms.push((-e, BigInt::from(c)));
        }
        Poly::from_terms(terms)
    })
}

fn eval_complex(p: &Poly, z: Complex64) -> Complex64 {
    p.terms()
        .map(|(e, c)| z.powi(e as i32) * c.to_string().parse::<f64>().unwrap())
        .sum()
}

/// ∏_{i=1}^{n-1} |Δ(ζ^i)| in floating point, None when a root of unity is a zero.
fn root_product(p: &Poly, n: i64) -> Option<f64> {
    let mut prod = 1.0;
    for i in 1..n {
        let z = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / n as f64);
        let v = eval_complex(p, z).norm();
        if v < 1e-9 {
            return None;
        }
        prod *= v;
    }
    Some(prod)
}

fn finite(o: BranchedCoverOrder<BigInt>) -> Option<BigInt> {
    match o {
        BranchedCoverOrder::Finite(v) => Some(v),
        BranchedCoverOrder::Infinite => None,
    }
}

proptest! {
    #[test]
    fn random_deltas_validate(d in symmetric_delta()) {
        let v = validate_alexander(&d);
        prop_assert!(v.valid, "{d}: {:?}", v.diagnostics);
        prop_assert!(v.symmetric);
    }

    #[test]
    fn double_cover_is_determinant(d in symmetric_delta()) {
        let order = finite(branched_cover_order(&d, 2).unwrap());
        let at_minus_one = d.eval_unit(true);
        if at_minus_one == BigInt::from(0) {
            prop_assert_eq!(order, None);
        } else {
            prop_assert_eq!(order, Some(num_traits::Signed::abs(&at_minus_one)));
        }
    }

    #[test]
    fn matches_root_of_unity_product(d in symmetric_delta(), n in 2i64..=9) {
        let exact = finite(branched_cover_order(&d, n).unwrap());
        match (exact, root_product(&d, n)) {
            (None, None) => {}
            (Some(v), Some(f)) => {
                let v: f64 = v.to_string().parse().unwrap();
                prop_assert!((v - f).abs() <= 1e-6 * v.max(1.0), "{d} n={n}: {v} vs {f}");
            }
            (e, f) => prop_assert!(false, "{d} n={n}: exact {e:?}, float {f:?}"),
        }
    }

    #[test]
    fn multiplicative(a in symmetric_delta(), b in symmetric_delta(), n in 2i64..=7) {
        let oa = finite(branched_cover_order(&a, n).unwrap());
        let ob = finite(branched_cover_order(&b, n).unwrap());
        let oab = finite(branched_cover_order(&a.mul(&b), n).unwrap());
        match (oa, ob) {
            (Some(x), Some(y)) => prop_assert_eq!(oab, Some(x * y)),
            _ => prop_assert_eq!(oab, None),
        }
    }

    #[test]
    fn invariant_under_units_and_reciprocal(d in symmetric_delta(), shift in -3i64..=3, n in 2i64..=7) {
        let order = branched_cover_order(&d, n).unwrap();
        let shifted = d.mul(&Poly::monomial(shift, BigInt::from(-1)));
        prop_assert_eq!(branched_cover_order(&shifted, n).unwrap(), order.clone());
        prop_assert_eq!(branched_cover_order(&d.reciprocal(), n).unwrap(), order);
    }

    #[test]
    fn machine_and_big_integers_agree(half in prop::collection::vec(-4i64..=4, 0..=3), n in 2i64..=7) {
        let c0 = 1 - 2 * half.iter().sum::<i64>();
        let mut terms = vec![(0, c0)];
        for (i, &c) in half.iter().enumerate() {
            terms.push((i as i64 + 1, c));
            terms.push((-(i as i64) - 1, c));
        }
        let small = LaurentPoly::<i64>::from_terms(terms.clone());
        let big = Poly::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))));
        let s = branched_cover_order(&small, n).unwrap().to_string();
        let b = branched_cover_order(&big, n).unwrap().to_string();
        prop_assert_eq!(s, b);
    }

    #[test]
    fn text_round_trip(d in symmetric_delta()) {
        let back: Poly = d.to_string().parse().unwrap();
        prop_assert_eq!(&back, &d);
        let json = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(serde_json::from_str::<Poly>(&json).unwrap(), d);
    }
}

#[test]
fn known_knots() {
    let order = |d: &Poly, n| branched_cover_order(d, n).unwrap().to_string();
    assert_eq!(order(&trefoil(), 2), "3");
    assert_eq!(order(&trefoil(), 3), "4");
    assert_eq!(order(&trefoil(), 6), "infinite");
    assert_eq!(order(&figure_eight(), 2), "5");
    assert_eq!(order(&figure_eight(), 3), "16");
    for n in 2..=12 {
        assert_eq!(order(&conway_knot(), n), "1");
    }
}

#[test]
fn unnormalized_input_is_rejected() {
    let d: Poly = "t^2 + 1".parse().unwrap();
    assert!(matches!(
        branched_cover_order(&d, 3),
        Err(AlexanderError::NotAlexanderNormalized(_))
    ));
    assert!(matches!(
        branched_cover_order(&trefoil(), 1),
        Err(AlexanderError::InvalidDegree(1))
    ));
}
