use combasis::complexes::Caps;
use combasis::exactlin::FieldLattice;
use combasis::steinberg::{
    bar_basis_sizes, bar_complex, compositions, count_decompositions, decomposition_count, st_multiply, st_ranks,
    tor_report, SteinbergMonoid,
};
use num_bigint::BigInt;

fn caps() -> Caps {
    Caps::default()
}

fn unit(k: usize, j: usize) -> Vec<BigInt> {
    (0..k).map(|i| BigInt::from((i == j) as i64)).collect()
}

#[test]
fn graded_commutativity() {
    for (n, p) in [(2usize, 2u32), (2, 3), (3, 2)] {
        let m = SteinbergMonoid::new(n, p, &caps()).unwrap();
        let lat = FieldLattice::new(p, n).unwrap();
        let mut checked = 0;
        for a in lat.proper_ids() {
            for b in lat.proper_ids() {
                if lat.meet(a, b) != lat.zero_id() || lat.join(a, b) != lat.top_id() {
                    continue;
                }
                let (ra, rb) = (lat.rank(a), lat.rank(b));
                let (ka, kb) = (m.module(ra).rank(), m.module(rb).rank());
                let sign = if ra * rb % 2 == 0 { 1 } else { -1 };
                for i in 0..ka {
                    for j in 0..kb {
                        let xy = st_multiply(&m, &lat, a, b, &unit(ka, i), &unit(kb, j)).unwrap();
                        let yx = st_multiply(&m, &lat, b, a, &unit(kb, j), &unit(ka, i)).unwrap();
                        let signed: Vec<BigInt> = yx.iter().map(|v| v * sign).collect();
                        assert_eq!(xy, signed, "n={n} p={p} a={a} b={b}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn decomposition_counts_match_enumeration() {
    for n in 1..=3usize {
        let lat = FieldLattice::new(2, n).unwrap();
        for c in compositions(n) {
            assert_eq!(decomposition_count(n, 2, &c).unwrap(), BigInt::from(count_decompositions(&lat, &c)), "{c:?}");
        }
    }
}

#[test]
fn bar_complex_sizes() {
    for (n, p) in [(1usize, 2u32), (2, 2), (3, 2), (2, 3)] {
        let m = SteinbergMonoid::new(n, p, &caps()).unwrap();
        let bar = bar_complex(&m).unwrap();
        let ranks = st_ranks(n, p, &caps()).unwrap();
        let formula = bar_basis_sizes(n, p, &ranks);
        let got: Vec<BigInt> = bar.complex.sizes().iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(formula, got);
        assert_eq!(got[0], BigInt::from(0));
    }
}

#[test]
fn triple_agreement() {
    for (n, p) in [(1usize, 2u32), (2, 2), (2, 3), (3, 2)] {
        let r = tor_report(n, p, &caps()).unwrap();
        assert!(r.cross_checks.all(), "{r:?}");
        assert!(r.koszul);
        assert_eq!(r.euler, r.profile.euler_characteristic());
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(r.euler, sign * (r.st_rank * r.st_rank) as i64);
    }
}
