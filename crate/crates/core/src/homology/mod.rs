//! Reduced integral homology by sparse unit-pivot elimination followed by
//! a dense Smith normal form of the residue.

mod sparse;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::complexes::{MorseInstance, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exactlin::{snf, Matrix, Ring};

pub use sparse::{smith_info, SmithInfo, SparseMatrix};

/// A bounded chain complex of free abelian groups.
///
/// `boundaries[i]` maps degree `min_degree + i` to the degree below; the
/// boundary out of the lowest degree is zero.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    min_degree: i64,
    sizes: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Checks shapes and `∂∂ = 0`.
    pub fn new(min_degree: i64, sizes: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<ChainComplex> {
        if sizes.len() != boundaries.len() {
            return Err(Error::InvalidArgument("one boundary per degree required".into()));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let below = if i == 0 { 0 } else { sizes[i - 1] };
            if b.ncols != sizes[i] || (b.nrows != below && !(i == 0 && b.is_zero())) {
                return Err(Error::InvalidArgument(format!("boundary in degree {} has the wrong shape", min_degree + i as i64)));
            }
        }
        let c = ChainComplex { min_degree, sizes, boundaries };
        let bad = (1..c.boundaries.len())
            .into_par_iter()
            .find_any(|&i| !c.boundaries[i - 1].compose(&c.boundaries[i]).is_zero());
        if let Some(i) = bad {
            return Err(Error::CrossCheck(format!("boundary squares to nonzero at degree {}", min_degree + i as i64)));
        }
        Ok(c)
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.sizes.len() as i64 - 1
    }

    pub fn size(&self, d: i64) -> usize {
        self.index(d).map_or(0, |i| self.sizes[i])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Boundary out of degree `d`.
    pub fn boundary(&self, d: i64) -> Option<&SparseMatrix> {
        self.index(d).map(|i| &self.boundaries[i])
    }

    fn index(&self, d: i64) -> Option<usize> {
        let i = d - self.min_degree;
        (i >= 0 && (i as usize) < self.sizes.len()).then_some(i as usize)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| if (self.min_degree + i as i64).rem_euclid(2) == 0 { s as i64 } else { -(s as i64) })
            .sum()
    }
}

/// Homology in one degree: free rank and torsion coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeHomology {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn free(betti: usize) -> DegreeHomology {
        DegreeHomology { betti, torsion: Vec::new() }
    }
}

impl Serialize for DegreeHomology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("betti", &self.betti)?;
        let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        m.serialize_entry("torsion", &t)?;
        m.end()
    }
}

/// Graded abelian group, keeping only nonzero degrees.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyProfile {
    degrees: BTreeMap<i64, DegreeHomology>,
}

impl HomologyProfile {
    pub fn new() -> HomologyProfile {
        HomologyProfile::default()
    }

    pub fn from_bettis(pairs: &[(i64, usize)]) -> HomologyProfile {
        let mut p = HomologyProfile::new();
        for &(d, b) in pairs {
            p.set(d, DegreeHomology::free(b));
        }
        p
    }

    pub fn set(&mut self, d: i64, h: DegreeHomology) {
        if h.is_zero() {
            self.degrees.remove(&d);
        } else {
            self.degrees.insert(d, h);
        }
    }

    pub fn get(&self, d: i64) -> DegreeHomology {
        self.degrees.get(&d).cloned().unwrap_or_default()
    }

    pub fn betti(&self, d: i64) -> usize {
        self.degrees.get(&d).map_or(0, |h| h.betti)
    }

    pub fn torsion(&self, d: i64) -> &[BigInt] {
        self.degrees.get(&d).map_or(&[], |h| &h.torsion)
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.degrees.values().all(|h| h.torsion.is_empty())
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.degrees.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &DegreeHomology)> {
        self.degrees.iter().map(|(&d, h)| (d, h))
    }

    /// The same groups in degrees shifted up by `k`.
    pub fn shift(&self, k: i64) -> HomologyProfile {
        HomologyProfile { degrees: self.degrees.iter().map(|(&d, h)| (d + k, h.clone())).collect() }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &HomologyProfile) -> HomologyProfile {
        let mut out = self.clone();
        for (&d, h) in &other.degrees {
            let mut cur = out.get(d);
            cur.betti += h.betti;
            cur.torsion.extend(h.torsion.iter().cloned());
            cur.torsion = invariant_factors(&cur.torsion);
            out.set(d, cur);
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|(&d, h)| if d.rem_euclid(2) == 0 { h.betti as i64 } else { -(h.betti as i64) }).sum()
    }

    /// Short human-readable form such as `H1=Z^4 H2=Z/2`.
    pub fn summary(&self) -> String {
        if self.degrees.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .degrees
            .iter()
            .map(|(d, h)| {
                let mut g = Vec::new();
                if h.betti == 1 {
                    g.push("Z".to_string());
                } else if h.betti > 1 {
                    g.push(format!("Z^{}", h.betti));
                }
                g.extend(h.torsion.iter().map(|t| format!("Z/{t}")));
                format!("H{d}={}", g.join("+"))
            })
            .collect();
        parts.join(" ")
    }
}

impl Serialize for HomologyProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.degrees.len()))?;
        for (d, h) in &self.degrees {
            m.serialize_entry(&d.to_string(), h)?;
        }
        m.end()
    }
}

/// Invariant factor form of a direct sum of cyclic groups `Z/a_i`.
fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    if orders.len() <= 1 {
        return orders.to_vec();
    }
    let n = orders.len();
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { orders[i].clone() } else { BigInt::from(0) }).collect())
        .collect();
    snf(&Matrix::from_bigint_rows(Ring::Integers, n, rows)).into_iter().filter(|d| !d.is_one()).collect()
}

fn boundary_columns(k: &SimplicialComplex, d: usize, skip: impl Fn(&[u32]) -> bool + Sync) -> Vec<Vec<(u32, i64)>> {
    let sims: Vec<&[u32]> = k.simplices(d).collect();
    sims.par_iter()
        .map(|s| {
            let mut face = Vec::with_capacity(d);
            let mut col = Vec::with_capacity(d + 1);
            for i in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                if skip(&face) {
                    continue;
                }
                let r = k.index_of(&face).expect("complex is closed under faces");
                col.push((r as u32, if i % 2 == 0 { 1 } else { -1 }));
            }
            col.sort_unstable_by_key(|x| x.0);
            col
        })
        .collect()
}

/// The augmented chain complex of `k`, starting in degree `-1`.
pub fn chains(k: &SimplicialComplex) -> ChainComplex {
    let top = (k.dim() + 1) as usize;
    let mut sizes = vec![1usize];
    let mut boundaries = vec![SparseMatrix::zero(0, 1)];
    for d in 0..top {
        let n = k.num_simplices(d);
        sizes.push(n);
        if d == 0 {
            boundaries.push(SparseMatrix::from_columns(1, vec![vec![(0, 1)]; n]));
        } else {
            boundaries.push(SparseMatrix::from_columns(k.num_simplices(d - 1), boundary_columns(k, d, |_| false)));
        }
    }
    ChainComplex::new(-1, sizes, boundaries).expect("simplicial boundary squares to zero")
}

/// Homology of a chain complex, checked against its Euler characteristic.
pub fn homology(c: &ChainComplex) -> HomologyProfile {
    let infos: Vec<SmithInfo> = c.boundaries.par_iter().map(smith_info).collect();
    let mut p = HomologyProfile::new();
    for (i, &size) in c.sizes.iter().enumerate() {
        let out_rank = infos[i].rank;
        let (in_rank, torsion) = infos.get(i + 1).map_or((0, Vec::new()), |x| (x.rank, x.torsion.clone()));
        let betti = size - out_rank - in_rank;
        p.set(c.min_degree + i as i64, DegreeHomology { betti, torsion });
    }
    assert_eq!(p.euler_characteristic(), c.euler_characteristic(), "Euler characteristic mismatch");
    p
}

/// Reduced homology of a simplicial complex.
pub fn reduced_homology(k: &SimplicialComplex) -> HomologyProfile {
    homology(&chains(k))
}

/// Homology of `C(X)/C(Y)`, without augmentation. Vertex numbering of `y`
/// must agree with `x`.
pub fn relative_homology(x: &SimplicialComplex, y: &SimplicialComplex) -> Result<HomologyProfile> {
    if !y.is_subcomplex_of(x) {
        return Err(Error::NotASubcomplex);
    }
    let top = (x.dim() + 1) as usize;
    let mut keep: Vec<Vec<usize>> = Vec::with_capacity(top);
    for d in 0..top {
        keep.push((0..x.num_simplices(d)).filter(|&i| y.index_of(x.simplex(d, i)).is_none()).collect());
    }
    let mut sizes = Vec::new();
    let mut boundaries = Vec::new();
    for d in 0..top {
        sizes.push(keep[d].len());
        if d == 0 {
            boundaries.push(SparseMatrix::zero(0, keep[0].len()));
            continue;
        }
        let below: HashMap<usize, u32> = keep[d - 1].iter().enumerate().map(|(i, &o)| (o, i as u32)).collect();
        let full = boundary_columns(x, d, |_| false);
        let cols = keep[d]
            .iter()
            .map(|&j| full[j].iter().filter_map(|&(r, v)| below.get(&(r as usize)).map(|&nr| (nr, v))).collect())
            .collect();
        boundaries.push(SparseMatrix::from_columns(keep[d - 1].len(), cols));
    }
    if sizes.is_empty() {
        return Ok(HomologyProfile::new());
    }
    Ok(homology(&ChainComplex::new(0, sizes, boundaries)?))
}

/// True iff `H̃_i(k) = 0` for all `-1 <= i <= c`.
pub fn is_c_connected_homologically(k: &SimplicialComplex, c: i64) -> bool {
    if c < -1 {
        return true;
    }
    let p = reduced_homology(k);
    (-1..=c).all(|i| p.get(i).is_zero())
}

/// Both sides of the Morse decomposition: `H_*(X, Y)` and the sum of the
/// links' reduced homology shifted by `dim σ + 1`.
pub fn morse_sides(inst: &MorseInstance) -> Result<(HomologyProfile, HomologyProfile)> {
    let lhs = relative_homology(&inst.x, &inst.y)?;
    let mut rhs = HomologyProfile::new();
    for (s, l) in inst.s.iter().zip(&inst.links) {
        rhs = rhs.direct_sum(&reduced_homology(l).shift(s.len() as i64));
    }
    Ok((lhs, rhs))
}

/// Reduced homology of a join from that of its factors (Künneth, with Tor
/// terms).
pub fn join_homology(a: &HomologyProfile, b: &HomologyProfile) -> HomologyProfile {
    use num_integer::Integer;
    let mut out = HomologyProfile::new();
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            let mut t = DegreeHomology { betti: x.betti * y.betti, torsion: Vec::new() };
            for _ in 0..x.betti {
                t.torsion.extend(y.torsion.iter().cloned());
            }
            for _ in 0..y.betti {
                t.torsion.extend(x.torsion.iter().cloned());
            }
            let mut tor = Vec::new();
            for p in &x.torsion {
                for q in &y.torsion {
                    t.torsion.push(p.gcd(q));
                    tor.push(p.gcd(q));
                }
            }
            t.torsion = invariant_factors(&t.torsion);
            let mut part = HomologyProfile::new();
            part.set(i + j + 1, t);
            part.set(i + j + 2, DegreeHomology { betti: 0, torsion: invariant_factors(&tor) });
            out = out.direct_sum(&part);
        }
    }
    out
}
