use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{homology_cap, st_module, SteinbergMonoid};
use crate::complexes::{tits, Caps};
use crate::error::{Error, Result};
use crate::exactlin::FieldLattice;
use crate::homology::{homology, reduced_homology, ChainComplex, HomologyProfile, SparseMatrix};
use crate::simpmodel::{d_model, strict_splittings};

/// `|GL_n(F_p)|`.
pub fn gl_order(n: usize, p: u32) -> BigInt {
    let q = BigInt::from(p).pow(n as u32);
    (0..n).fold(BigInt::one(), |acc, i| acc * (&q - BigInt::from(p).pow(i as u32)))
}

/// Number of ordered internal decompositions `F_p^n = A_1 ⊕ .. ⊕ A_q` with
/// `rank A_i = composition[i]`.
pub fn decomposition_count(n: usize, p: u32, composition: &[usize]) -> Result<BigInt> {
    if composition.iter().sum::<usize>() != n {
        return Err(Error::InvalidArgument(format!("composition {composition:?} does not sum to {n}")));
    }
    let denom = composition.iter().fold(BigInt::one(), |acc, &k| acc * gl_order(k, p));
    let (q, r) = gl_order(n, p).div_rem(&denom);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Counts the same decompositions by enumeration in the subspace lattice.
pub fn count_decompositions(lat: &FieldLattice, composition: &[usize]) -> usize {
    strict_splittings(lat)
        .into_iter()
        .filter(|s| {
            let parts = &s[1..s.len() - 1];
            parts.len() == composition.len() && parts.iter().zip(composition).all(|(&x, &k)| lat.rank(x) == k)
        })
        .count()
}

/// All compositions of `n` into positive parts, shortest first.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=n {
            cur.push(k);
            go(n - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// `p^{n(n-1)/2}`, the classical rank of `St_n(F_p)`.
pub fn classical_st_rank(n: usize, p: u32) -> BigInt {
    BigInt::from(p).pow((n * n.saturating_sub(1) / 2) as u32)
}

/// Ranks of `St_0 .. St_n`: computed from the model up to the homology cap,
/// classical above it.
pub fn st_ranks(n: usize, p: u32, caps: &Caps) -> Result<Vec<BigInt>> {
    (0..=n)
        .map(|k| if k <= homology_cap(p) { st_module(k, p, caps).map(|m| BigInt::from(m.rank())) } else { Ok(classical_st_rank(k, p)) })
        .collect()
}

/// Size of the bar complex in each degree `q = 0..=n`, from the rank list.
pub fn bar_basis_sizes(n: usize, p: u32, ranks: &[BigInt]) -> Vec<BigInt> {
    let mut sizes = vec![BigInt::zero(); n + 1];
    if n == 0 {
        sizes[0] = BigInt::one();
        return sizes;
    }
    for c in compositions(n) {
        let count = decomposition_count(n, p, &c).expect("composition of n");
        sizes[c.len()] += c.iter().fold(count, |acc, &k| acc * &ranks[k]);
    }
    sizes
}

/// Alternating sum of the bar complex basis sizes.
pub fn bar_euler(n: usize, p: u32, ranks: &[BigInt]) -> BigInt {
    bar_basis_sizes(n, p, ranks)
        .into_iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (q, s)| if q % 2 == 0 { acc + s } else { acc - s })
}

/// A basis element: an ordered decomposition and a basis index in the
/// Steinberg module of each part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarGenerator {
    pub parts: Vec<u32>,
    pub indices: Vec<usize>,
}

/// The normalized bar complex `B(Z, St, Z)` at grading `n`.
#[derive(Debug, Clone)]
pub struct GradedBarComplex {
    pub n: usize,
    pub p: u32,
    pub generators: Vec<Vec<BarGenerator>>,
    pub complex: ChainComplex,
}

/// Builds the bar complex at grading `m.max_rank()`.
pub fn bar_complex(m: &SteinbergMonoid) -> Result<GradedBarComplex> {
    let n = m.max_rank();
    let p = m.p();
    let lat = FieldLattice::new(p, n)?;
    let mut generators: Vec<Vec<BarGenerator>> = vec![Vec::new(); n + 1];
    for s in strict_splittings(&lat) {
        let parts = s[1..s.len() - 1].to_vec();
        let ranks: Vec<usize> = parts.iter().map(|&x| m.module(lat.rank(x)).rank()).collect();
        let mut idx = vec![0usize; parts.len()];
        loop {
            generators[parts.len()].push(BarGenerator { parts: parts.clone(), indices: idx.clone() });
            let mut j = 0;
            while j < idx.len() {
                idx[j] += 1;
                if idx[j] < ranks[j] {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
    }
    for level in &mut generators {
        level.sort_by(|x, y| (&x.parts, &x.indices).cmp(&(&y.parts, &y.indices)));
    }
    let index: Vec<HashMap<&BarGenerator, u32>> =
        generators.iter().map(|l| l.iter().enumerate().map(|(i, g)| (g, i as u32)).collect()).collect();

    let pairs: BTreeSet<(u32, u32)> =
        generators.iter().flatten().flat_map(|g| g.parts.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()).collect();
    let products: HashMap<(u32, u32), Vec<Vec<Vec<BigInt>>>> = pairs
        .into_par_iter()
        .map(|(x, y)| m.multiply_basis(&lat, x, y).map(|t| ((x, y), t)))
        .collect::<Result<_>>()?;

    let mut sizes = Vec::new();
    let mut bds = Vec::new();
    for q in 0..=n {
        sizes.push(generators[q].len());
        if q == 0 {
            bds.push(SparseMatrix::zero(0, generators[0].len()));
            continue;
        }
        let cols: Vec<Vec<(u32, i64)>> = generators[q]
            .par_iter()
            .map(|g| {
                let mut col = Vec::new();
                for i in 1..q {
                    let t = &products[&(g.parts[i - 1], g.parts[i])][g.indices[i - 1]][g.indices[i]];
                    let mut parts = g.parts.clone();
                    parts.splice(i - 1..i + 1, [lat.join(g.parts[i - 1], g.parts[i])]);
                    let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                    for (k, c) in t.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut indices = g.indices.clone();
                        indices.splice(i - 1..i + 1, [k]);
                        let target = BarGenerator { parts: parts.clone(), indices };
                        let r = index[q - 1][&target];
                        col.push((r, sign * c.to_i64().expect("small coefficient")));
                    }
                }
                col
            })
            .collect();
        bds.push(SparseMatrix::from_columns(generators[q - 1].len(), cols));
    }
    let complex = ChainComplex::new(0, sizes, bds)?;
    Ok(GradedBarComplex { n, p, generators, complex })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossChecks {
    /// Agreement with `H̃_{i+n}(D^{2,0}_n)`.
    pub tord: bool,
    /// Top rank agrees with `H̃_{2n-3}` of the Tits building joined with itself.
    pub join_rank: bool,
    /// Alternating sum of Tor ranks equals the bar Euler characteristic.
    pub euler: bool,
    /// Basis sizes agree with the composition formula.
    pub sizes: bool,
}

impl CrossChecks {
    pub fn all(&self) -> bool {
        self.tord && self.join_rank && self.euler && self.sizes
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TorReport {
    pub n: usize,
    pub p: u32,
    /// `Tor_i^{St}(Z, Z)_n` by homological degree `i`.
    pub profile: HomologyProfile,
    pub st_rank: usize,
    pub koszul: bool,
    pub cross_checks: CrossChecks,
    pub euler: i64,
}

impl TorReport {
    pub fn pass(&self) -> bool {
        self.koszul && self.cross_checks.all()
    }
}

/// Largest grading at which Tor is computed over `F_p`.
pub fn tor_cap(p: u32) -> usize {
    match p {
        2 => 3,
        3 => 2,
        _ => 1,
    }
}

/// Tor of the Steinberg monoid at grading `n`, with all cross-checks
/// evaluated.
pub fn tor_report(n: usize, p: u32, caps: &Caps) -> Result<TorReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("grading must be positive".into()));
    }
    if n > tor_cap(p) {
        return Err(Error::CapExceeded { what: "Tor grading", value: n, cap: tor_cap(p) });
    }
    let m = SteinbergMonoid::new(n, p, caps)?;
    let bar = bar_complex(&m)?;
    let profile = homology(&bar.complex);
    let ranks: Vec<BigInt> = m.ranks().into_iter().map(BigInt::from).collect();
    let st_rank = m.module(n).rank();

    let sizes = bar_basis_sizes(n, p, &ranks).iter().zip(bar.complex.sizes()).all(|(a, &b)| *a == BigInt::from(b));
    let euler_big = bar_euler(n, p, &ranks);
    let euler = euler_big.to_i64().expect("small Euler characteristic");
    let euler_ok = euler == profile.euler_characteristic();

    let d20 = d_model(2, 0, n, p, caps)?.homology();
    let tord = d20.shift(-(n as i64)) == profile;
    let t = tits(n, p, caps)?;
    let j = reduced_homology(&t.join(&t));
    let top = 2 * n as i64 - 3;
    let join_rank = j.nonzero_degrees() == vec![top] && j.betti(top) == profile.betti(n as i64);

    let koszul = profile.nonzero_degrees() == vec![n as i64] && profile.is_free() && profile.betti(n as i64) == st_rank * st_rank;
    Ok(TorReport { n, p, profile, st_rank, koszul, cross_checks: CrossChecks { tord, join_rank, euler: euler_ok, sizes }, euler })
}

/// As [`tor_report`], but any failed cross-check is an error.
pub fn tor(n: usize, p: u32, caps: &Caps) -> Result<HomologyProfile> {
    let r = tor_report(n, p, caps)?;
    if !r.cross_checks.all() {
        return Err(Error::CrossCheck(format!("Tor at n={n}, p={p}: {:?}", r.cross_checks)));
    }
    Ok(r.profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_counts() {
        assert_eq!(gl_order(2, 2), BigInt::from(6));
        assert_eq!(gl_order(3, 2), BigInt::from(168));
        assert_eq!(gl_order(0, 2), BigInt::one());
        assert_eq!(decomposition_count(2, 2, &[1, 1]).unwrap(), BigInt::from(6));
        assert_eq!(decomposition_count(3, 2, &[1, 2]).unwrap(), BigInt::from(28));
        assert!(decomposition_count(3, 2, &[1, 1]).is_err());
    }

    #[test]
    fn counts_match_enumeration() {
        for n in 1..=3 {
            let lat = FieldLattice::new(2, n).unwrap();
            for c in compositions(n) {
                assert_eq!(BigInt::from(count_decompositions(&lat, &c)), decomposition_count(n, 2, &c).unwrap(), "{c:?}");
            }
        }
    }

    #[test]
    fn euler_values() {
        let r = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(bar_euler(1, 3, &r(&[1, 1])), BigInt::from(-1));
        assert_eq!(bar_euler(2, 2, &r(&[1, 1, 2])), BigInt::from(4));
        assert_eq!(bar_euler(3, 2, &r(&[1, 1, 2, 8])), BigInt::from(-64));
    }

    #[test]
    fn bar_sizes() {
        let m = SteinbergMonoid::new(3, 2, &Caps::default()).unwrap();
        let b = bar_complex(&m).unwrap();
        assert_eq!(b.complex.sizes(), &[0, 8, 112, 168]);
    }

    #[test]
    fn tor_small() {
        let r = tor_report(1, 2, &Caps::default()).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.profile, HomologyProfile::from_bettis(&[(1, 1)]));
        let r = tor_report(2, 2, &Caps::default()).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.profile, HomologyProfile::from_bettis(&[(2, 4)]));
    }
}
