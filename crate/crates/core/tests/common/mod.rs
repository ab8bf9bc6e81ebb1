//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use combasis::cbp::Collection;
use combasis::exactlin::{Matrix, Ring, Submodule};
use rand::seq::SliceRandom;
use rand::Rng;

/// Rank of a set of vectors over `F_p`, by plain Gaussian elimination on
/// `i64` residues.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|&x| x * m[rank][c] % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All nonzero vectors of `F_p^n`.
pub fn field_vectors(n: usize, p: i64) -> Vec<Vec<i64>> {
    let total = (p as usize).pow(n as u32);
    (1..total).map(|mut x| (0..n).map(|_| { let d = (x % p as usize) as i64; x /= p as usize; d }).collect()).collect()
}

/// Brute-force common basis search over `F_p^n`: tries every basis and
/// checks that each member contains exactly `rank` of its vectors.
pub fn brute_force_field_cbp(members: &[Vec<Vec<i64>>], n: usize, p: i64) -> bool {
    let vecs = field_vectors(n, p);
    let ranks: Vec<usize> = members.iter().map(|u| rank_mod_p(u, p)).collect();
    let contains = |u: &Vec<Vec<i64>>, r: usize, v: &Vec<i64>| {
        let mut t = u.clone();
        t.push(v.clone());
        rank_mod_p(&t, p) == r
    };
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        start: usize,
        n: usize,
        vecs: &[Vec<i64>],
        chosen: &mut Vec<usize>,
        p: i64,
        accept: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == n {
            return accept(chosen);
        }
        for i in start..vecs.len() {
            chosen.push(i);
            let rows: Vec<Vec<i64>> = chosen.iter().map(|&j| vecs[j].clone()).collect();
            if rank_mod_p(&rows, p) == chosen.len() && go(i + 1, n, vecs, chosen, p, accept) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let accept = |b: &[usize]| {
        members.iter().zip(&ranks).all(|(u, &r)| b.iter().filter(|&&i| contains(u, r, &vecs[i])).count() == r)
    };
    go(0, n, &vecs, &mut chosen, p, &accept)
}

pub fn to_i64_rows(s: &Submodule) -> Vec<Vec<i64>> {
    s.basis().row_vecs().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
}

/// A random unimodular integer matrix built from elementary row operations
/// with small multipliers.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let f = rng.gen_range(-2i64..=2);
        for c in 0..n {
            m[i][c] += f * m[j][c];
        }
        if rng.gen_bool(0.2) {
            m.swap(i, j);
        }
    }
    m
}

/// A random invertible matrix over `F_p`.
pub fn random_invertible_mod_p<R: Rng>(rng: &mut R, n: usize, p: i64) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        if rank_mod_p(&m, p) == n {
            return m;
        }
    }
}

pub fn span(ring: Ring, n: usize, rows: &[Vec<i64>]) -> Submodule {
    if rows.is_empty() {
        return Submodule::zero(ring, n);
    }
    Submodule::canonicalize(&Matrix::from_rows(ring, n, rows))
}

/// A random summand of `Z^n` with entries in `[-3, 3]`, by rejection.
pub fn random_split_z<R: Rng>(rng: &mut R, n: usize) -> Submodule {
    loop {
        let r = rng.gen_range(1..=n.max(2) - 1).min(n);
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-3i64..=3)).collect()).collect();
        let s = span(Ring::Integers, n, &rows);
        if !s.is_zero() && s.is_split() {
            return s;
        }
    }
}

/// Random subsets of the rows of `basis`, spanned.
pub fn random_coordinate_span<R: Rng>(rng: &mut R, ring: Ring, basis: &[Vec<i64>]) -> Submodule {
    let n = basis.len();
    let k = rng.gen_range(1..n.max(2)).min(n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let rows: Vec<Vec<i64>> = idx[..k].iter().map(|&i| basis[i].clone()).collect();
    span(ring, n, &rows)
}

/// A random collection of summands of `Z^n`: either spans of subsets of one
/// random basis (so it has the property), or independent random summands.
pub fn random_z_collection<R: Rng>(rng: &mut R, n: usize, k: usize) -> Collection {
    let members: Vec<Submodule> = if rng.gen_bool(0.5) {
        let b = random_unimodular(rng, n, 3 * n);
        (0..k)
            .map(|_| if rng.gen_bool(0.8) { random_coordinate_span(rng, Ring::Integers, &b) } else { random_split_z(rng, n) })
            .collect()
    } else {
        (0..k).map(|_| random_split_z(rng, n)).collect()
    };
    Collection::new(Ring::Integers, n, members).unwrap()
}

/// A nested chain `V_1 ⊆ .. ⊆ V_r` of spans of initial segments of a
/// shuffled basis.
pub fn random_flag<R: Rng>(rng: &mut R, ring: Ring, basis: &[Vec<i64>], r: usize) -> Vec<Submodule> {
    let n = basis.len();
    let mut rows = basis.to_vec();
    rows.shuffle(rng);
    let mut cuts: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=n)).collect();
    cuts.sort_unstable();
    cuts.iter().map(|&c| span(ring, n, &rows[..c])).collect()
}
