use proptest::prelude::*;
use zonotile::config::rational_from_int;
use zonotile::hypertri::cross_section;
use zonotile::regularity::classify;
use zonotile::secondary::{potential_value, vert_k, Threshold};
use zonotile::{binomial, HeightVector, PointConfig, Rational, Tiling};

fn config(n: usize) -> PointConfig {
    PointConfig::standard(n).unwrap()
}

fn heights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-10_000i64..10_000, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn height_tilings_are_valid_and_regular(n in 3usize..=7, raw in heights(7)) {
        let c = config(n);
        let h = HeightVector::from_ints(&raw[..n]);
        prop_assume!(c.is_generic_height(&h));
        let t = Tiling::from_heights(&c, &h).unwrap();
        prop_assert!(t.validate(&c).is_ok());
        prop_assert_eq!(t.orientation(), c.sigma_h(&h).unwrap());
        prop_assert_eq!(t.opposite(), Tiling::from_heights(&c, &h.negated()).unwrap());
        let cert = classify(&c, &t);
        prop_assert!(cert.regular);
    }

    #[test]
    fn cross_sections_cover_every_vertex(raw in heights(6)) {
        let c = config(6);
        let h = HeightVector::from_ints(&raw);
        prop_assume!(c.is_generic_height(&h));
        let t = Tiling::from_heights(&c, &h).unwrap();
        let total: usize = (0..=6).map(|k| cross_section(&t, k).unwrap().vertices.len()).sum();
        prop_assert_eq!(total, binomial(6, 2) + 6 + 1);
    }

    #[test]
    fn vert_k_entries_sum_to_k_times_area(raw in heights(6), k in 0usize..=4) {
        let c = config(6);
        let h = HeightVector::from_ints(&raw);
        prop_assume!(c.is_generic_height(&h));
        let t = Tiling::from_heights(&c, &h).unwrap();
        let v = vert_k(&c, &t, k);
        prop_assert!(v.iter().all(|x| *x >= rational_from_int(0)));
        let sum: Rational = v.into_iter().sum();
        let area: Rational = t.tiles().filter(|x| x.offset.len() == k).map(|x| c.pair_area(x.i, x.j)).sum();
        prop_assert_eq!(sum, area * rational_from_int(k as i64));
    }

    #[test]
    fn single_flips_move_potential_by_at_most_one(a in heights(6), b in heights(6), k in 1usize..=4) {
        let c = config(6);
        let (ha, hb) = (HeightVector::from_ints(&a), HeightVector::from_ints(&b));
        prop_assume!(c.is_generic_height(&ha) && c.is_generic_height(&hb));
        let reference = Tiling::from_heights(&c, &ha).unwrap();
        let t = Tiling::from_heights(&c, &hb).unwrap();
        prop_assert_eq!(potential_value(&t, &t, k, Threshold::Definition, false), 0);
        for m in t.available_flips() {
            let u = t.apply_flip(&m).unwrap();
            let d = potential_value(&reference, &t, k, Threshold::Definition, false)
                - potential_value(&reference, &u, k, Threshold::Definition, false);
            prop_assert!(d.abs() <= 1);
            let changes = vert_k(&c, &t, k) != vert_k(&c, &u, k);
            prop_assert_eq!(changes, m.level() == k);
        }
    }
}
