use exscaf_core::artin_schreier::{witt_d, wp, SeriesRing};
use exscaf_core::localfield::{compose, enumerate_group};
use exscaf_core::planner::{independent_leads, plan};
use exscaf_core::ramification::{lower_to_upper, upper_to_lower};
use exscaf_core::valuation::{format_series, parse_series};
use exscaf_core::{
    ExtRational, Fq, LaurentSeries, PlanMode, Rat, ResidueField, Tower, TowerElement, TowerParams, Variant,
};
use proptest::prelude::*;
use std::sync::OnceLock;

fn f9() -> &'static ResidueField {
    ResidueField::new(3, 2).unwrap()
}

fn series() -> impl Strategy<Value = LaurentSeries> {
    (-6i64..4, prop::collection::vec(0u16..9, 0..8))
        .prop_map(|(start, c)| LaurentSeries::from_dense(f9(), start, c.into_iter().map(Fq).collect(), None))
}

fn nonzero_series() -> impl Strategy<Value = LaurentSeries> {
    (series(), 1u16..9, -6i64..4).prop_map(|(s, lead, v)| {
        let head = LaurentSeries::monomial(f9(), Fq(lead), v);
        &head + &s.shift(v + 8 - s.lead().map_or(v, |l| l.0))
    })
}

fn h_tower() -> &'static Tower {
    static T: OnceLock<Tower> = OnceLock::new();
    T.get_or_init(|| {
        let params =
            TowerParams::new(3, 1, Variant::H, ExtRational::Infinity, 1, vec![0, 0, 1], independent_leads(3, 1).unwrap(), 2)
                .unwrap();
        Tower::build(&params, None).unwrap()
    })
}

fn tower_element() -> impl Strategy<Value = TowerElement> {
    prop::collection::vec(prop::option::weighted(0.3, (-3i64..2, 1u16..9)), 27).prop_map(|cs| {
        let coeffs = cs
            .into_iter()
            .map(|c| match c {
                Some((e, a)) => LaurentSeries::monomial(f9(), Fq(a), e),
                None => LaurentSeries::zero(f9()),
            })
            .collect();
        h_tower().alg().from_coeffs(coeffs).unwrap()
    })
}

fn sorted_rats() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((1i128..500, 1i128..5), 1..6).prop_map(|v| {
        let mut r: Vec<Rat> = v.into_iter().map(|(a, b)| Rat::new(a, b)).collect();
        r.sort();
        r
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_exact_zero());
    }

    #[test]
    fn series_valuation_is_additive(a in nonzero_series(), b in nonzero_series()) {
        let v = a.val().unwrap() + b.val().unwrap();
        prop_assert_eq!((&a * &b).val().unwrap(), v);
    }

    #[test]
    fn series_inverse(a in nonzero_series()) {
        let inv = a.inv_with_window(40).unwrap();
        let prod = &a * &inv;
        prop_assert_eq!(prod.val().unwrap(), 0);
        let one = LaurentSeries::one(f9());
        prop_assert!((&prod - &one).is_zero());
        prop_assert!(prod.prec().unwrap() >= 40);
    }

    #[test]
    fn frobenius_is_a_ring_map(a in series(), b in series()) {
        prop_assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        prop_assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
        prop_assert_eq!(a.frobenius(), a.pow(3));
    }

    #[test]
    fn series_text_roundtrip(a in series(), prec in prop::option::of(6i64..20)) {
        let a = match prec { Some(p) => a.truncate(p), None => a };
        let back = parse_series(f9(), &format_series(&a)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn artin_schreier_map_is_additive(a in series(), b in series()) {
        let r = SeriesRing(f9());
        prop_assert_eq!(wp(&r, &(&a + &b)), &wp(&r, &a) + &wp(&r, &b));
    }

    #[test]
    fn witt_d_is_a_cocycle(a in series(), b in series(), c in series()) {
        // D(a, b) + D(a + b, c) = D(b, c) + D(a, b + c)
        let r = SeriesRing(f9());
        let lhs = &witt_d(&r, &a, &b) + &witt_d(&r, &(&a + &b), &c);
        let rhs = &witt_d(&r, &b, &c) + &witt_d(&r, &a, &(&b + &c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conversion_roundtrip(b in sorted_rats(), p in prop::sample::select(vec![3u64, 5, 7, 11])) {
        let u = lower_to_upper(p, &b).unwrap();
        prop_assert_eq!(upper_to_lower(p, &u).unwrap(), b.clone());
        prop_assert_eq!(u[0], b[0]);
        prop_assert!(u.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn planned_lower_numbers_match_conversion(r in 1i64..30, m2 in 0i64..3, t in 1i64..4) {
        prop_assume!(r % 3 != 0);
        let params = TowerParams::new(3, 1, Variant::H, ExtRational::Infinity, r, vec![0, m2, m2 + t], independent_leads(3, 1).unwrap(), 2).unwrap();
        let rep = plan(&params, PlanMode::Full).unwrap();
        let u: Vec<Rat> = rep.u.iter().map(|&x| Rat::from_integer(x)).collect();
        let b = upper_to_lower(3, &u).unwrap();
        prop_assert_eq!(b, rep.b.iter().map(|&x| Rat::from_integer(x)).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tower_multiplication_is_associative(x in tower_element(), y in tower_element(), z in tower_element()) {
        let alg = h_tower().alg();
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
    }

    #[test]
    fn galois_maps_are_ring_maps(x in tower_element(), y in tower_element(), g in 0usize..3) {
        let tower = h_tower();
        let alg = tower.alg();
        let s = &tower.galois_generators().unwrap()[g];
        prop_assert_eq!(s.apply(alg, &alg.mul(&x, &y)), alg.mul(&s.apply(alg, &x), &s.apply(alg, &y)));
        prop_assert_eq!(s.apply(alg, &alg.add(&x, &y)), alg.add(&s.apply(alg, &x), &s.apply(alg, &y)));
    }

    #[test]
    fn tower_valuation_is_additive_and_galois_invariant(x in tower_element(), y in tower_element(), g in 0usize..3) {
        prop_assume!(!x.is_exact_zero() && !y.is_exact_zero());
        let tower = h_tower();
        let alg = tower.alg();
        let vx = alg.top_val(&x).unwrap();
        let vy = alg.top_val(&y).unwrap();
        prop_assert_eq!(alg.top_val(&alg.mul(&x, &y)).unwrap(), vx + vy);
        let s = &tower.galois_generators().unwrap()[g];
        prop_assert_eq!(alg.top_val(&s.apply(alg, &x)).unwrap(), vx);
    }
}

#[test]
fn composition_is_associative_on_the_group() {
    let tower = h_tower();
    let alg = tower.alg();
    let table = enumerate_group(alg, &tower.galois_generators().unwrap()).unwrap();
    for a in [1, 5, 13] {
        for b in [2, 9, 26] {
            for c in [3, 4, 20] {
                let (ea, eb, ec) = (&table.elements[a].map, &table.elements[b].map, &table.elements[c].map);
                let left = compose(alg, &compose(alg, ea, eb), ec);
                let right = compose(alg, ea, &compose(alg, eb, ec));
                assert_eq!(left, right);
                assert_eq!(table.mul(table.mul(a, b), c), table.mul(a, table.mul(b, c)));
            }
        }
    }
}
