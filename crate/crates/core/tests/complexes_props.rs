use combasis::cbp::Collection;
use combasis::complexes::{
    common_basis_complex, higher_tits, simplex_to_splitting, split_tits, splitting_to_simplex, tits, Caps,
    SimplicialComplex,
};
use combasis::exactlin::{Ring, Submodule};
use combasis::homology::{reduced_homology, HomologyProfile};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn caps() -> Caps {
    Caps::default()
}

fn none(n: usize, p: u32) -> Collection {
    Collection::new(Ring::PrimeField(p), n, Vec::new()).unwrap()
}

fn faces_closed(k: &SimplicialComplex) -> bool {
    k.all_simplices().all(|s| {
        (0..s.len()).all(|i| {
            let mut f = s.to_vec();
            f.remove(i);
            f.is_empty() || k.contains(&f)
        })
    })
}

#[test]
fn constructors_are_deterministic_and_closed() {
    for (n, p) in [(2, 2), (3, 2), (2, 3)] {
        let builds: Vec<Box<dyn Fn() -> SimplicialComplex>> = vec![
            Box::new(move || tits(n, p, &caps()).unwrap()),
            Box::new(move || split_tits(n, p, &caps()).unwrap()),
            Box::new(move || common_basis_complex(n, p, &caps()).unwrap()),
            Box::new(move || higher_tits(1, 1, n, p, &none(n, p), &caps()).unwrap()),
        ];
        for b in builds {
            let k = b();
            assert_eq!(k.to_text(), b().to_text());
            assert!(faces_closed(&k));
            assert!(k.is_closed());
            assert_eq!(SimplicialComplex::from_text(&k.to_text()).unwrap().to_text(), k.to_text());
        }
    }
}

#[test]
fn relative_tits_is_full() {
    for (n, p) in [(2usize, 2u32), (3, 2), (2, 3), (3, 3)] {
        let t = tits(n, p, &caps()).unwrap();
        let cb = common_basis_complex(n, p, &caps()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 10 + p as u64);
        let mut sims: Vec<Vec<u32>> = cb.all_simplices().map(<[u32]>::to_vec).collect();
        sims.shuffle(&mut rng);
        sims.truncate(25);
        sims.push(Vec::new());
        for s in sims {
            let members: Vec<Submodule> = s.iter().map(|&v| cb.label(v).modules()[0].clone()).collect();
            let sigma = Collection::new(Ring::PrimeField(p), n, members).unwrap();
            let h = higher_tits(1, 0, n, p, &sigma, &caps()).unwrap();
            let verts: Vec<u32> = h.labels().iter().map(|l| t.vertex_by_label(l).unwrap()).collect();
            assert!(t.full_subcomplex(&verts).same_simplices_by_label(&h), "n={n} p={p} sigma={s:?}");
        }
    }
}

#[test]
fn split_flags_biject_with_splittings() {
    for n in 1..=3 {
        let st = split_tits(n, 2, &caps()).unwrap();
        for s in st.all_simplices() {
            let parts = simplex_to_splitting(&st, s).unwrap();
            assert_eq!(parts.len(), s.len() + 1);
            assert!(parts.iter().all(|m| !m.is_zero()));
            assert_eq!(splitting_to_simplex(&st, &parts).unwrap().as_deref(), Some(s));
        }
    }
}

/// Lowest degree in which the two profiles differ.
fn first_difference(a: &HomologyProfile, b: &HomologyProfile) -> Option<i64> {
    let mut degs: Vec<i64> = a.nonzero_degrees();
    degs.extend(b.nonzero_degrees());
    degs.into_iter().filter(|&d| a.get(d) != b.get(d)).min()
}

#[test]
fn higher_buildings_approach_cb() {
    // the finite stages carry extra classes that move up as k grows
    for n in 2..=3usize {
        let cb = reduced_homology(&common_basis_complex(n, 2, &caps()).unwrap());
        let mut last = i64::MIN;
        for k in 1..=n + 1 {
            let t = reduced_homology(&higher_tits(k, 0, n, 2, &none(n, 2), &caps()).unwrap());
            let d = first_difference(&t, &cb).expect("finite stages are not yet stable");
            assert!(d > last, "n={n} k={k}: first difference at {d}");
            assert!(d >= k as i64 + n as i64 - 3, "n={n} k={k}: first difference at {d}");
            last = d;
        }
    }
}

#[test]
fn join_kunneth_on_buildings() {
    for (n, p) in [(2usize, 2u32), (3, 2), (2, 3), (3, 3)] {
        let t = tits(n, p, &caps()).unwrap();
        let h = reduced_homology(&t);
        let j = reduced_homology(&t.join(&t));
        let top = n as i64 - 2;
        assert_eq!(j.betti(2 * top + 1), h.betti(top) * h.betti(top));
        assert_eq!(j.nonzero_degrees(), vec![2 * top + 1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn links_of_tits_simplices_are_joins(seed in any::<u64>()) {
        // the link of a vertex V in T_3 is T(V) * T(F^3/V), a discrete set of size p+1
        let t = tits(3, 2, &caps()).unwrap();
        let v = (seed % t.labels().len() as u64) as u32;
        let l = t.link(&[v]).unwrap();
        prop_assert_eq!(l.num_simplices(0), 3);
        prop_assert_eq!(l.dim(), 0);
    }
}
