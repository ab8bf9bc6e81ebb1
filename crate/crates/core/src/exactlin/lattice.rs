use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::matrix::Matrix;
use super::ring::Ring;
use super::submodule::Submodule;
use crate::error::{Error, Result};

/// Largest lattice for which meet/join tables are materialized.
pub const LATTICE_CAP: usize = 1200;

/// The full subspace lattice of `F_p^n` with precomputed meets and joins.
///
/// Each subspace is stored as the bitset of its elements; a vector
/// `(x_0, .., x_{n-1})` has index `sum x_k p^k`, so `p^n <= 128` is required.
/// Ids follow the canonical submodule order.
#[derive(Debug, Clone)]
pub struct FieldLattice {
    p: u32,
    n: usize,
    subs: Vec<Submodule>,
    bits: Vec<u128>,
    ranks: Vec<u8>,
    index: HashMap<u128, u32>,
    meet: Vec<u32>,
    join: Vec<u32>,
    add: Vec<u8>,
    smul: Vec<u8>,
}

impl FieldLattice {
    pub fn new(p: u32, n: usize) -> Result<FieldLattice> {
        let ring = Ring::prime_field(p as u64)?;
        let q = (p as usize).checked_pow(n as u32).filter(|&q| q <= 128).ok_or(Error::CapExceeded {
            what: "field vectors p^n",
            value: (p as usize).saturating_pow(n as u32),
            cap: 128,
        })?;
        let pu = p as usize;
        let digits = |x: usize| -> Vec<usize> { (0..n).map(|k| (x / pu.pow(k as u32)) % pu).collect() };
        let from_digits = |d: &[usize]| -> usize { d.iter().enumerate().map(|(k, &v)| v * pu.pow(k as u32)).sum() };
        let mut add = vec![0u8; q * q];
        let mut smul = vec![0u8; pu * q];
        for x in 0..q {
            let dx = digits(x);
            for y in 0..q {
                let dy = digits(y);
                let s: Vec<usize> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % pu).collect();
                add[x * q + y] = from_digits(&s) as u8;
            }
            for c in 0..pu {
                let s: Vec<usize> = dx.iter().map(|a| (a * c) % pu).collect();
                smul[c * q + x] = from_digits(&s) as u8;
            }
        }

        let span_with = |set: u128, v: usize| -> u128 {
            let mut out = set;
            for s in 0..q {
                if set >> s & 1 == 1 {
                    for c in 1..pu {
                        out |= 1u128 << add[s * q + smul[c * q + v] as usize];
                    }
                }
            }
            out
        };

        // Breadth-first enumeration of all subspaces from the zero subspace.
        let mut found: HashMap<u128, Vec<usize>> = HashMap::new();
        found.insert(1, Vec::new());
        let mut frontier = vec![1u128];
        while let Some(set) = frontier.pop() {
            let basis = found[&set].clone();
            for v in 1..q {
                if set >> v & 1 == 1 {
                    continue;
                }
                let t = span_with(set, v);
                if let std::collections::hash_map::Entry::Vacant(e) = found.entry(t) {
                    let mut b = basis.clone();
                    b.push(v);
                    e.insert(b);
                    frontier.push(t);
                }
            }
        }
        if found.len() > LATTICE_CAP {
            return Err(Error::CapExceeded { what: "subspace lattice size", value: found.len(), cap: LATTICE_CAP });
        }

        let mut entries: Vec<(Submodule, u128, u8)> = found
            .iter()
            .map(|(&set, basis)| {
                let rows: Vec<Vec<i64>> =
                    basis.iter().map(|&v| digits(v).into_iter().map(|d| d as i64).collect()).collect();
                let sub = if rows.is_empty() { Submodule::zero(ring, n) } else { Submodule::from_rows(ring, n, &rows) };
                (sub, set, basis.len() as u8)
            })
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let subs: Vec<Submodule> = entries.iter().map(|e| e.0.clone()).collect();
        let bits: Vec<u128> = entries.iter().map(|e| e.1).collect();
        let ranks: Vec<u8> = entries.iter().map(|e| e.2).collect();
        let index: HashMap<u128, u32> = bits.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();

        let len = subs.len();
        let mut meet = vec![0u32; len * len];
        let mut join = vec![0u32; len * len];
        for a in 0..len {
            for b in a..len {
                let m = index[&(bits[a] & bits[b])];
                meet[a * len + b] = m;
                meet[b * len + a] = m;
                let mut j = bits[a];
                for &v in &found[&bits[b]] {
                    if j >> v & 1 == 0 {
                        j = span_with(j, v);
                    }
                }
                let j = index[&j];
                join[a * len + b] = j;
                join[b * len + a] = j;
            }
        }
        Ok(FieldLattice { p, n, subs, bits, ranks, index, meet, join, add, smul })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        Ring::PrimeField(self.p)
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn submodule(&self, id: u32) -> &Submodule {
        &self.subs[id as usize]
    }

    pub fn rank(&self, id: u32) -> usize {
        self.ranks[id as usize] as usize
    }

    pub fn bits(&self, id: u32) -> u128 {
        self.bits[id as usize]
    }

    pub fn meet(&self, a: u32, b: u32) -> u32 {
        self.meet[a as usize * self.subs.len() + b as usize]
    }

    pub fn join(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize * self.subs.len() + b as usize]
    }

    /// `a ⊆ b`
    pub fn leq(&self, a: u32, b: u32) -> bool {
        self.bits(a) & !self.bits(b) == 0
    }

    pub fn zero_id(&self) -> u32 {
        self.index[&1]
    }

    pub fn top_id(&self) -> u32 {
        let full = if self.vector_count() == 128 { u128::MAX } else { (1u128 << self.vector_count()) - 1 };
        self.index[&full]
    }

    pub fn vector_count(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    /// Ids of the proper nonzero subspaces, in canonical order.
    pub fn proper_ids(&self) -> Vec<u32> {
        let (z, t) = (self.zero_id(), self.top_id());
        (0..self.len() as u32).filter(|&i| i != z && i != t).collect()
    }

    pub fn ids_of_rank(&self, r: usize) -> Vec<u32> {
        (0..self.len() as u32).filter(|&i| self.rank(i) == r).collect()
    }

    pub fn vector_index(&self, v: &[BigInt]) -> usize {
        let pu = self.p as usize;
        v.iter()
            .enumerate()
            .map(|(k, x)| Ring::PrimeField(self.p).reduce(x).to_usize().unwrap() * pu.pow(k as u32))
            .sum()
    }

    pub fn vector(&self, idx: usize) -> Vec<BigInt> {
        let pu = self.p as usize;
        (0..self.n).map(|k| BigInt::from((idx / pu.pow(k as u32)) % pu)).collect()
    }

    pub fn add_vectors(&self, x: usize, y: usize) -> usize {
        self.add[x * self.vector_count() + y] as usize
    }

    pub fn scale_vector(&self, c: usize, x: usize) -> usize {
        self.smul[c * self.vector_count() + x] as usize
    }

    pub fn id_of_bits(&self, bits: u128) -> Option<u32> {
        self.index.get(&bits).copied()
    }

    pub fn id_of(&self, s: &Submodule) -> Option<u32> {
        if s.ring() != self.ring() || s.ambient_rank() != self.n {
            return None;
        }
        self.subs.binary_search(s).ok().map(|i| i as u32)
    }

    /// Id of the span of the given vector indices.
    pub fn span(&self, vectors: &[usize]) -> u32 {
        let mut id = self.zero_id();
        for &v in vectors {
            if self.bits(id) >> v & 1 == 0 {
                let line = self.line(v);
                id = self.join(id, line);
            }
        }
        id
    }

    fn line(&self, v: usize) -> u32 {
        let mut b = 0u128;
        for c in 0..self.p as usize {
            b |= 1u128 << self.scale_vector(c, v);
        }
        self.index[&b]
    }

    /// Basis of `id` as vector indices (canonical basis rows).
    pub fn basis_vectors(&self, id: u32) -> Vec<usize> {
        let m: &Matrix = self.submodule(id).basis();
        (0..m.rows()).map(|i| self.vector_index(m.row(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomials(p: usize, n: usize) -> Vec<usize> {
        // number of k-dim subspaces of F_p^n
        (0..=n)
            .map(|k| {
                let mut num = 1usize;
                let mut den = 1usize;
                for i in 0..k {
                    num *= p.pow((n - i) as u32) - 1;
                    den *= p.pow((i + 1) as u32) - 1;
                }
                num / den
            })
            .collect()
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
            let l = FieldLattice::new(p as u32, n).unwrap();
            let g = gaussian_binomials(p, n);
            assert_eq!(l.len(), g.iter().sum::<usize>());
            for (k, &c) in g.iter().enumerate() {
                assert_eq!(l.ids_of_rank(k).len(), c);
            }
        }
    }

    #[test]
    fn tables_agree_with_submodule_ops() {
        let l = FieldLattice::new(2, 3).unwrap();
        for a in 0..l.len() as u32 {
            for b in 0..l.len() as u32 {
                let (sa, sb) = (l.submodule(a), l.submodule(b));
                assert_eq!(l.submodule(l.meet(a, b)), &sa.intersect(sb).unwrap());
                assert_eq!(l.submodule(l.join(a, b)), &sa.sum(sb).unwrap());
                assert_eq!(l.leq(a, b), sb.contains(sa).unwrap());
            }
            assert_eq!(l.id_of(l.submodule(a)), Some(a));
            assert_eq!(l.span(&l.basis_vectors(a)), a);
        }
    }

    #[test]
    fn ids_are_sorted() {
        let l = FieldLattice::new(3, 2).unwrap();
        for i in 1..l.len() as u32 {
            assert!(l.submodule(i - 1) < l.submodule(i));
        }
    }
}
