//! The common basis property: corank tables, the inclusion-exclusion
//! criterion and an independent greedy basis constructor.

mod greedy;
mod ie;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{FieldLattice, Ring, Submodule};

pub use greedy::{common_basis_greedy, CommonBasis};
pub use ie::{cbp_ids, has_cbp_ie, ie_check, CbpCache, IeViolation, ViolationKind};

/// Default cap on the number of members whose subsets are enumerated.
pub const MAX_MEMBERS: usize = 12;

/// Default cap on the size of a closure under sums and intersections.
pub const CLOSURE_CAP: usize = 4096;

/// Lattice operations needed by the inclusion-exclusion test.
pub trait ModuleLattice {
    type Elem: Clone + Eq + std::hash::Hash + Ord + std::fmt::Debug;
    fn top(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn rank(&self, a: &Self::Elem) -> usize;
    fn is_split(&self, a: &Self::Elem) -> bool;
    fn is_field(&self) -> bool;
}

/// All submodules of `R^n`, with exact operations.
#[derive(Debug, Clone, Copy)]
pub struct Ambient {
    pub ring: Ring,
    pub n: usize,
}

impl ModuleLattice for Ambient {
    type Elem = Submodule;

    fn top(&self) -> Submodule {
        Submodule::ambient(self.ring, self.n)
    }

    fn bottom(&self) -> Submodule {
        Submodule::zero(self.ring, self.n)
    }

    fn meet(&self, a: &Submodule, b: &Submodule) -> Submodule {
        a.intersect(b).expect("members share an ambient module")
    }

    fn join(&self, a: &Submodule, b: &Submodule) -> Submodule {
        a.sum(b).expect("members share an ambient module")
    }

    fn rank(&self, a: &Submodule) -> usize {
        a.rank()
    }

    fn is_split(&self, a: &Submodule) -> bool {
        a.is_split()
    }

    fn is_field(&self) -> bool {
        self.ring.is_field()
    }
}

impl ModuleLattice for FieldLattice {
    type Elem = u32;

    fn top(&self) -> u32 {
        self.top_id()
    }

    fn bottom(&self) -> u32 {
        self.zero_id()
    }

    fn meet(&self, a: &u32, b: &u32) -> u32 {
        FieldLattice::meet(self, *a, *b)
    }

    fn join(&self, a: &u32, b: &u32) -> u32 {
        FieldLattice::join(self, *a, *b)
    }

    fn rank(&self, a: &u32) -> usize {
        FieldLattice::rank(self, *a)
    }

    fn is_split(&self, _: &u32) -> bool {
        true
    }

    fn is_field(&self) -> bool {
        true
    }
}

/// An ordered collection `U_1, .., U_k` of summands of `R^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    ring: Ring,
    n: usize,
    members: Vec<Submodule>,
}

impl Collection {
    /// Fails on mixed ambients and, over the integers, on non-split members.
    pub fn new(ring: Ring, n: usize, members: Vec<Submodule>) -> Result<Collection> {
        for (i, m) in members.iter().enumerate() {
            if m.ring() != ring || m.ambient_rank() != n {
                return Err(Error::AmbientMismatch(format!("member {} lives in {} {}", i + 1, m.ring(), m.ambient_rank())));
            }
            if !m.is_split() {
                return Err(Error::InvalidArgument(format!("member {} is not a summand", i + 1)));
            }
        }
        Ok(Collection { ring, n, members })
    }

    /// Infers the ambient from the first member.
    pub fn from_members(members: Vec<Submodule>) -> Result<Collection> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty collection needs an explicit ambient".into()))?;
        let (ring, n) = (first.ring(), first.ambient_rank());
        Collection::new(ring, n, members)
    }

    /// Reads consecutive submodule blocks in the exactlin text form.
    pub fn parse(text: &str) -> Result<Collection> {
        Collection::from_members(Submodule::parse_many(text)?)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Submodule] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ambient(&self) -> Ambient {
        Ambient { ring: self.ring, n: self.n }
    }

    pub fn with_member(&self, extra: Submodule) -> Result<Collection> {
        let mut m = self.members.clone();
        m.push(extra);
        Collection::new(self.ring, self.n, m)
    }

    pub(crate) fn check_cap(&self) -> Result<()> {
        if self.members.len() > MAX_MEMBERS {
            return Err(Error::CapExceeded { what: "collection size", value: self.members.len(), cap: MAX_MEMBERS });
        }
        Ok(())
    }
}

/// One row of a corank table. Subsets use 1-based member indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorankRecord {
    pub subset: Vec<usize>,
    pub module: String,
    #[serde(rename = "F")]
    pub f: i64,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub g: Option<i64>,
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub struct CorankTable {
    pub k: usize,
    /// Indexed by subset bitmask.
    pub intersections: Vec<Submodule>,
    pub f: Vec<i64>,
    /// `S` is the distinguished element of its fiber: the union of all `T`
    /// with `U_T = U_S`.
    pub minimal: Vec<bool>,
    /// G over the distinct modules `U_S`, in canonical order.
    pub g: Vec<(Submodule, i64)>,
}

impl CorankTable {
    pub fn sum_f(&self) -> i64 {
        self.f.iter().sum()
    }

    pub fn sum_g(&self) -> i64 {
        self.g.iter().map(|x| x.1).sum()
    }

    pub fn g_of(&self, u: &Submodule) -> Option<i64> {
        self.g.binary_search_by(|x| x.0.cmp(u)).ok().map(|i| self.g[i].1)
    }

    pub fn records(&self) -> Vec<CorankRecord> {
        (0..self.f.len())
            .map(|mask| CorankRecord {
                subset: mask_to_subset(mask as u32),
                module: self.intersections[mask].label(),
                f: self.f[mask],
                g: self.minimal[mask].then(|| self.g_of(&self.intersections[mask]).unwrap()),
                minimal: self.minimal[mask],
            })
            .collect()
    }
}

pub(crate) fn mask_to_subset(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn corank_table(c: &Collection) -> Result<CorankTable> {
    c.check_cap()?;
    let amb = c.ambient();
    let k = c.len();
    let n = 1usize << k;
    let mut us = Vec::with_capacity(n);
    us.push(amb.top());
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        let prev = us[mask & (mask - 1)].clone();
        us.push(amb.meet(&prev, &c.members[low]));
    }
    let mut f = Vec::with_capacity(n);
    for mask in 0..n {
        let mut s = amb.bottom();
        for i in 0..k {
            if mask >> i & 1 == 0 {
                s = amb.join(&s, &us[mask | 1 << i]);
            }
        }
        f.push(us[mask].rank() as i64 - s.rank() as i64);
    }
    let mut minimal = vec![false; n];
    for mask in 0..n {
        let union = (0..n).filter(|&t| us[t] == us[mask]).fold(0, |a, t| a | t);
        minimal[mask] = union == mask;
    }
    let distinct: BTreeSet<Submodule> = us.iter().cloned().collect();
    let g = distinct
        .iter()
        .map(|x| {
            let mut s = amb.bottom();
            for y in &distinct {
                if y != x && x.contains(y).unwrap() {
                    s = amb.join(&s, y);
                }
            }
            (x.clone(), x.rank() as i64 - s.rank() as i64)
        })
        .collect();
    Ok(CorankTable { k, intersections: us, f, minimal, g })
}

/// Closure of the members under binary sums and intersections, sorted and
/// deduplicated. The result may contain non-split modules over the integers.
pub fn closure(c: &Collection, cap: usize) -> Result<Vec<Submodule>> {
    let amb = c.ambient();
    let mut set: BTreeSet<Submodule> = c.members.iter().cloned().collect();
    loop {
        let items: Vec<Submodule> = set.iter().cloned().collect();
        let mut added = false;
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                for x in [amb.join(&items[i], &items[j]), amb.meet(&items[i], &items[j])] {
                    if set.insert(x) {
                        added = true;
                        if set.len() > cap {
                            return Err(Error::CapExceeded { what: "closure size", value: set.len(), cap });
                        }
                    }
                }
            }
        }
        if !added {
            return Ok(set.into_iter().collect());
        }
    }
}

/// Möbius function of the boolean lattice: `(-1)^{|S|-|T|}` for nested sets.
pub fn mobius_boolean(s: &[usize], t: &[usize]) -> Result<i64> {
    let s: BTreeSet<usize> = s.iter().copied().collect();
    let t: BTreeSet<usize> = t.iter().copied().collect();
    if !(s.is_subset(&t) || t.is_subset(&s)) {
        return Err(Error::InvalidArgument("subsets are not nested".into()));
    }
    Ok(if (s.len() + t.len()).is_multiple_of(2) { 1 } else { -1 })
}

/// Sum over supersets with Möbius signs: `out[S] = Σ_{T ⊇ S} (-1)^{|T|-|S|} f[T]`.
pub fn superset_mobius(f: &[i64]) -> Vec<i64> {
    let mut g = f.to_vec();
    let k = g.len().trailing_zeros() as usize;
    for i in 0..k {
        for mask in 0..g.len() {
            if mask >> i & 1 == 0 {
                g[mask] -= g[mask | 1 << i];
            }
        }
    }
    g
}

/// Sum over supersets: `out[S] = Σ_{T ⊇ S} g[T]`.
pub fn superset_sum(g: &[i64]) -> Vec<i64> {
    let mut f = g.to_vec();
    let k = f.len().trailing_zeros() as usize;
    for i in 0..k {
        for mask in 0..f.len() {
            if mask >> i & 1 == 0 {
                f[mask] += f[mask | 1 << i];
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Ring = Ring::PrimeField(2);
    const Z: Ring = Ring::Integers;

    #[test]
    fn corank_two_lines() {
        let c = Collection::new(F2, 2, vec![Submodule::coordinate(F2, 2, &[0]), Submodule::coordinate(F2, 2, &[1])]).unwrap();
        let t = corank_table(&c).unwrap();
        assert_eq!(t.f, vec![0, 1, 1, 0]);
        assert_eq!(t.sum_f(), 2);
        assert_eq!(t.sum_g(), 2);
    }

    #[test]
    fn corank_ambient_and_duplicates() {
        let c = Collection::new(Z, 3, vec![Submodule::ambient(Z, 3)]).unwrap();
        let t = corank_table(&c).unwrap();
        assert_eq!(t.f, vec![0, 3]);
        let u = Submodule::from_rows(Z, 3, &[vec![1, 1, 0]]);
        let c = Collection::new(Z, 3, vec![u.clone(), u]).unwrap();
        let t = corank_table(&c).unwrap();
        assert_eq!(t.f[1], 0);
        assert_eq!(t.f[2], 0);
        assert!(t.minimal[3] && !t.minimal[1] && !t.minimal[2]);
        assert_eq!(t.sum_f(), t.sum_g());
    }

    #[test]
    fn rejects_non_split_members() {
        let bad = Submodule::from_rows(Z, 2, &[vec![2, 0]]);
        assert!(Collection::new(Z, 2, vec![bad]).is_err());
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_boolean(&[], &[]).unwrap(), 1);
        assert_eq!(mobius_boolean(&[1, 2], &[1]).unwrap(), -1);
        assert_eq!(mobius_boolean(&[1, 2, 3], &[1]).unwrap(), 1);
        assert!(mobius_boolean(&[1], &[2]).is_err());
    }

    #[test]
    fn closure_examples() {
        let c = Collection::new(F2, 2, vec![Submodule::coordinate(F2, 2, &[0]), Submodule::coordinate(F2, 2, &[1])]).unwrap();
        let cl = closure(&c, CLOSURE_CAP).unwrap();
        assert_eq!(cl.len(), 4);
        assert!(cl.contains(&Submodule::zero(F2, 2)));
        assert!(cl.contains(&Submodule::ambient(F2, 2)));
        let c = Collection::new(
            Z,
            2,
            vec![Submodule::from_rows(Z, 2, &[vec![1, 1]]), Submodule::from_rows(Z, 2, &[vec![1, -1]])],
        )
        .unwrap();
        let cl = closure(&c, CLOSURE_CAP).unwrap();
        assert!(cl.iter().any(|s| s.rank() == 2 && !s.is_split()));
    }
}
