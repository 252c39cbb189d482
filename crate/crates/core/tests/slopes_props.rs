use orderable::slopes::*;
use proptest::prelude::*;

fn slope(r: i64) -> impl Strategy<Value = Slope> {
    (-r..=r, -r..=r).prop_filter_map("primitive", |(p, q)| Slope::new(p, q).ok())
}

fn unimodular() -> impl Strategy<Value = GluingMatrix> {
    let gens = [
        GluingMatrix::new(1, 1, 0, 1).unwrap(),
        GluingMatrix::new(1, 0, 1, 1).unwrap(),
        GluingMatrix::new(1, -1, 0, 1).unwrap(),
        GluingMatrix::new(1, 0, -1, 1).unwrap(),
        GluingMatrix::SPLICE,
        GluingMatrix::new(-1, 0, 0, 1).unwrap(),
    ];
    prop::collection::vec(0..gens.len(), 0..8).prop_map(move |ix| {
        ix.into_iter()
            .fold(GluingMatrix::IDENTITY, |m, i| m.compose(gens[i]))
    })
}

proptest! {
    #[test]
    fn intersection_is_basis_independent(a in slope(30), b in slope(30), m in unimodular()) {
        prop_assert_eq!(
            intersection_number(apply_gluing(m, a), apply_gluing(m, b)),
            intersection_number(a, b)
        );
        prop_assert_eq!(intersection_number(a, a), 0);
    }

    #[test]
    fn gluing_composes(a in slope(30), m in unimodular(), n in unimodular()) {
        prop_assert_eq!(apply_gluing(m.compose(n), a), apply_gluing(m, apply_gluing(n, a)));
        prop_assert_eq!(apply_gluing(m.inverse(), apply_gluing(m, a)), a);
        prop_assert_eq!(m.determinant().abs(), 1);
    }

    #[test]
    fn splice_framings_are_dual(l1 in slope(20), l2 in slope(20), m in unimodular()) {
        match splice_framing(m, l1, l2) {
            Some((mu1, mu2)) => {
                prop_assert_eq!(intersection_number(mu1, l1), 1);
                prop_assert_eq!(intersection_number(mu2, l2), 1);
                prop_assert_eq!(apply_gluing(m, mu1), l2);
            }
            None => prop_assert_ne!(union_homology_order(m, l1, l2), 1),
        }
    }

    #[test]
    fn splice_swaps_numerator_and_denominator(a in slope(50)) {
        let image = apply_gluing(GluingMatrix::SPLICE, a);
        prop_assert_eq!(image, Slope::new(a.q(), a.p()).unwrap());
    }

    #[test]
    fn filling_order_is_intersection_with_meridian(a in slope(50)) {
        prop_assert_eq!(filling_homology_order(a), intersection_number(a, Slope::LONGITUDE));
    }

    #[test]
    fn slope_text_round_trip(a in slope(99)) {
        let back: Slope = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Slope>(&json).unwrap(), a);
    }
}
