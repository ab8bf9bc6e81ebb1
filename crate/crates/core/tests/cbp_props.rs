mod common;

use combasis::cbp::{closure, corank_table, has_cbp_ie, ie_check, superset_mobius, superset_sum, Collection, CLOSURE_CAP};
use combasis::exactlin::{Ring, Submodule};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z_collection(seed: u64, k: usize) -> Collection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    common::random_z_collection(&mut rng, n, k)
}

fn field_collection(seed: u64, k: usize) -> Collection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=4);
    let members = (0..k)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..rng.gen_range(1..n)).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
            common::span(Ring::PrimeField(3), n, &rows)
        })
        .collect();
    Collection::new(Ring::PrimeField(3), n, members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mobius_inversion(g in (0usize..=6).prop_flat_map(|k| prop::collection::vec(-50i64..50, 1 << k))) {
        let f = superset_sum(&g);
        prop_assert_eq!(superset_mobius(&f), g);
    }

    #[test]
    fn corank_sums_agree(seed in any::<u64>(), k in 1usize..=4, field in any::<bool>()) {
        let c = if field { field_collection(seed, k) } else { z_collection(seed, k) };
        let t = corank_table(&c).unwrap();
        prop_assert_eq!(t.sum_f(), t.sum_g());
        for mask in 0..t.f.len() {
            if t.minimal[mask] {
                prop_assert_eq!(Some(t.f[mask]), t.g_of(&t.intersections[mask]));
            } else {
                prop_assert_eq!(t.f[mask], 0);
            }
        }
    }

    #[test]
    fn intersection_distributes_over_sum(seed in any::<u64>()) {
        let c = z_collection(seed, 3);
        prop_assume!(has_cbp_ie(&c).unwrap());
        let m = c.members();
        let (u, v, w) = (&m[0], &m[1], &m[2]);
        let lhs = u.sum(v).unwrap().intersect(w).unwrap();
        let rhs = u.intersect(w).unwrap().sum(&v.intersect(w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closure_preserves_compatibility(seed in any::<u64>(), k in 1usize..=3) {
        let c = z_collection(seed, k);
        let cl = closure(&c, CLOSURE_CAP).unwrap();
        let has = has_cbp_ie(&c).unwrap();
        if cl.iter().any(|u| !u.is_split()) {
            // a non-split sum already rules out a common basis
            prop_assert!(!has);
            return Ok(());
        }
        prop_assume!(cl.len() <= 12);
        let closed = Collection::new(Ring::Integers, c.ambient_rank(), cl.clone()).unwrap();
        prop_assert_eq!(has, has_cbp_ie(&closed).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let extra = common::random_split_z(&mut rng, c.ambient_rank());
        if has && cl.len() < 12 {
            let a = has_cbp_ie(&c.with_member(extra.clone()).unwrap()).unwrap();
            let b = has_cbp_ie(&closed.with_member(extra).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn field_shortcut(seed in any::<u64>(), k in 1usize..=4) {
        let c = field_collection(seed, k);
        let amb = c.ambient();
        prop_assert_eq!(ie_check(&amb, c.members(), false), ie_check(&amb, c.members(), true));
    }
}

#[test]
fn coordinate_collections_have_the_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let basis = common::random_unimodular(&mut rng, 4, 12);
        let members: Vec<Submodule> = (0..4).map(|_| common::random_coordinate_span(&mut rng, Ring::Integers, &basis)).collect();
        assert!(has_cbp_ie(&Collection::new(Ring::Integers, 4, members).unwrap()).unwrap());
    }
}
