mod common;

use combasis::exactlin::{left_kernel, rank, snf, FieldLattice, Matrix, Ring, Submodule};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int_rows(max_rows: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), 1..=max_rows)
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// gcd of all `k x k` minors by direct expansion.
fn minor_gcd(rows: &[Vec<i64>], k: usize) -> BigInt {
    let cols = rows[0].len();
    let mut g = BigInt::zero();
    for rs in subsets(rows.len(), k) {
        for cs in subsets(cols, k) {
            let m: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(rows[r][c])).collect()).collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_is_idempotent_and_row_invariant(rows in int_rows(4, 4), seed in any::<u64>(), field in any::<bool>()) {
        let ring = if field { Ring::PrimeField(3) } else { Ring::Integers };
        let g = Matrix::from_rows(ring, 4, &rows);
        let s = Submodule::canonicalize(&g);
        prop_assert_eq!(&Submodule::canonicalize(s.basis()), &s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::random_unimodular(&mut rng, rows.len(), 6);
        let tg = Matrix::from_rows(ring, rows.len(), &t).mul(&g);
        prop_assert_eq!(Submodule::canonicalize(&tg), s);
    }

    #[test]
    fn field_rank_matches_oracle(rows in int_rows(5, 4), p in prop::sample::select(vec![2i64, 3, 5])) {
        let m = Matrix::from_rows(Ring::PrimeField(p as u32), 4, &rows);
        prop_assert_eq!(rank(&m), common::rank_mod_p(&rows, p));
    }

    #[test]
    fn left_kernel_is_exact(rows in int_rows(5, 3)) {
        let m = Matrix::from_rows(Ring::Integers, 3, &rows);
        let k = left_kernel(&m);
        prop_assert!(k.mul(&m).is_zero() || k.rows() == 0);
        prop_assert_eq!(k.rows() + rank(&m), rows.len());
        if k.rows() > 0 {
            prop_assert!(Submodule::canonicalize(&k).is_split());
        }
    }

    #[test]
    fn snf_divisor_chain_and_minors(rows in int_rows(4, 4)) {
        let m = Matrix::from_rows(Ring::Integers, 4, &rows);
        let d = snf(&m);
        prop_assert_eq!(d.len(), rank(&m));
        for w in d.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero());
        }
        let mut prod = BigInt::one();
        for (k, x) in d.iter().enumerate() {
            prod *= x;
            prop_assert_eq!(&prod, &minor_gcd(&rows, k + 1));
        }
    }

    #[test]
    fn split_characterisations_agree(rows in int_rows(3, 3)) {
        let s = Submodule::from_rows(Ring::Integers, 3, &rows);
        let by_snf = s.elementary_divisors().iter().all(One::is_one);
        let by_extension = s.extend_to_ambient_basis().is_ok();
        // the quotient Z^3 / U is presented by the basis of U
        let quotient_torsion = snf(s.basis()).iter().any(|x| !x.is_one());
        prop_assert_eq!(s.is_split(), by_snf);
        prop_assert_eq!(by_snf, by_extension);
        prop_assert_eq!(by_snf, !quotient_torsion);
        if let Ok(b) = s.extend_to_ambient_basis() {
            prop_assert!(b.is_unimodular());
        }
    }

    #[test]
    fn nested_splitness(seed in any::<u64>(), sub in int_rows(2, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = common::random_split_z(&mut rng, 4);
        let wb = w.basis().row_vecs();
        let mut us: Vec<Vec<BigInt>> = Vec::new();
        for r in &sub {
            let v: Vec<BigInt> = (0..4).map(|c| (0..w.rank()).map(|i| BigInt::from(r[i % 3]) * &wb[i][c]).sum()).collect();
            us.push(v);
        }
        let u = Submodule::canonicalize(&Matrix::from_bigint_rows(Ring::Integers, 4, us));
        if !u.is_zero() {
            let inner = u.relative_to(&w).unwrap();
            prop_assert_eq!(inner.is_split(), u.is_split());
        }
    }

    #[test]
    fn intersections_of_summands_split(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_split_z(&mut rng, 4);
        let w = common::random_split_z(&mut rng, 4);
        prop_assert!(u.intersect(&w).unwrap().is_split());
    }

    #[test]
    fn dimension_formula_over_fields(a in int_rows(3, 4), b in int_rows(3, 4)) {
        let u = Submodule::from_rows(Ring::PrimeField(2), 4, &a);
        let v = Submodule::from_rows(Ring::PrimeField(2), 4, &b);
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.rank() + i.rank(), u.rank() + v.rank());
        prop_assert!(s.contains(&u).unwrap() && u.contains(&i).unwrap());
    }

    #[test]
    fn sum_with_complement_criterion(seed in any::<u64>()) {
        // U ⊆ W, W + V = ambient: U + V proper iff U + (W ∩ V) proper in W
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = common::random_unimodular(&mut rng, 4, 10);
        let w = common::random_coordinate_span(&mut rng, Ring::Integers, &basis);
        let other = common::random_unimodular(&mut rng, 4, 10);
        let v = common::random_coordinate_span(&mut rng, Ring::Integers, &other);
        let amb = Submodule::ambient(Ring::Integers, 4);
        prop_assume!(w.sum(&v).unwrap() == amb && v.is_split());
        let wrows = common::to_i64_rows(&w);
        let take: Vec<Vec<i64>> = wrows.iter().take(1 + (seed as usize % wrows.len().max(1))).cloned().collect();
        let u = common::span(Ring::Integers, 4, &take);
        let lhs = u.sum(&v).unwrap() != amb;
        let rhs = u.sum(&w.intersect(&v).unwrap()).unwrap() != w;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_round_trip(rows in int_rows(3, 3), field in any::<bool>()) {
        let ring = if field { Ring::PrimeField(5) } else { Ring::Integers };
        let s = Submodule::from_rows(ring, 3, &rows);
        prop_assert_eq!(Submodule::from_text(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn field_lattice_matches_submodule_operations() {
    let lat = FieldLattice::new(2, 3).unwrap();
    assert_eq!(lat.len(), 16);
    for a in 0..lat.len() as u32 {
        for b in 0..lat.len() as u32 {
            let (sa, sb) = (lat.submodule(a), lat.submodule(b));
            assert_eq!(lat.submodule(lat.meet(a, b)), &sa.intersect(sb).unwrap());
            assert_eq!(lat.submodule(lat.join(a, b)), &sa.sum(sb).unwrap());
            assert_eq!(lat.leq(a, b), sb.contains(sa).unwrap());
        }
    }
    let ids: Vec<&Submodule> = (0..lat.len() as u32).map(|i| lat.submodule(i)).collect();
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn subspace_counts() {
    // Gaussian binomials: F_3^3 has 1 + 13 + 13 + 1 subspaces
    let lat = FieldLattice::new(3, 3).unwrap();
    assert_eq!(lat.len(), 28);
    assert_eq!(lat.ids_of_rank(1).len(), 13);
    assert_eq!(FieldLattice::new(2, 4).unwrap().len(), 67);
}
