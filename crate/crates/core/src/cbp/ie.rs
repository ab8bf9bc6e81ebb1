use std::collections::HashMap;

use super::{mask_to_subset, superset_mobius, Collection, ModuleLattice, MAX_MEMBERS};
use crate::error::{Error, Result};
use crate::exactlin::FieldLattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `rank U_S - rank Σ_{i∉S} U_S ∩ U_i` differs from the alternating sum.
    Rank { corank: i64, alternating: i64 },
    /// `Σ_{i∉S} U_S ∩ U_i` is not a summand.
    NotSplit,
}

/// First subset (in bitmask order) at which the criterion fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IeViolation {
    /// 1-based member indices.
    pub subset: Vec<usize>,
    pub kind: ViolationKind,
}

/// Runs the inclusion-exclusion test on arbitrary lattice elements.
///
/// With `check_split = false` condition (b) is skipped.
pub fn ie_check<L: ModuleLattice>(l: &L, members: &[L::Elem], check_split: bool) -> Option<IeViolation> {
    let k = members.len();
    let n = 1usize << k;
    let mut us: Vec<L::Elem> = Vec::with_capacity(n);
    us.push(l.top());
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        let prev = &us[mask & (mask - 1)];
        let m = l.meet(prev, &members[low]);
        us.push(m);
    }
    let ranks: Vec<i64> = us.iter().map(|u| l.rank(u) as i64).collect();
    let alt = superset_mobius(&ranks);
    for mask in 0..n {
        let mut s = l.bottom();
        for i in 0..k {
            if mask >> i & 1 == 0 {
                s = l.join(&s, &us[mask | 1 << i]);
            }
        }
        let corank = ranks[mask] - l.rank(&s) as i64;
        if corank != alt[mask] {
            return Some(IeViolation {
                subset: mask_to_subset(mask as u32),
                kind: ViolationKind::Rank { corank, alternating: alt[mask] },
            });
        }
        if check_split && !l.is_field() && !l.is_split(&s) {
            return Some(IeViolation { subset: mask_to_subset(mask as u32), kind: ViolationKind::NotSplit });
        }
    }
    None
}

/// The inclusion-exclusion criterion for the common basis property.
pub fn has_cbp_ie(c: &Collection) -> Result<bool> {
    c.check_cap()?;
    Ok(ie_check(&c.ambient(), c.members(), true).is_none())
}

/// CBP of a set of subspaces given by lattice ids.
///
/// Duplicates, the zero subspace and the whole space are irrelevant and
/// dropped first. A common basis has only `2^n - 2` proper nonzero coordinate
/// subspaces, which bounds the number of distinct members.
pub fn cbp_ids(lat: &FieldLattice, ids: &[u32]) -> Result<bool> {
    let key = normalize(lat, ids);
    cbp_normalized(lat, &key)
}

fn normalize(lat: &FieldLattice, ids: &[u32]) -> Vec<u32> {
    let (z, t) = (lat.zero_id(), lat.top_id());
    let mut key: Vec<u32> = ids.iter().copied().filter(|&i| i != z && i != t).collect();
    key.sort_unstable();
    key.dedup();
    key
}

fn cbp_normalized(lat: &FieldLattice, key: &[u32]) -> Result<bool> {
    if key.len() <= 2 {
        return Ok(true);
    }
    if key.len() > (1usize << lat.n()) - 2 {
        return Ok(false);
    }
    if key.len() > MAX_MEMBERS {
        return Err(Error::CapExceeded { what: "collection size", value: key.len(), cap: MAX_MEMBERS });
    }
    Ok(ie_check(lat, key, false).is_none())
}

/// Memoized [`cbp_ids`].
#[derive(Debug)]
pub struct CbpCache<'a> {
    lat: &'a FieldLattice,
    memo: HashMap<Vec<u32>, bool>,
}

impl<'a> CbpCache<'a> {
    pub fn new(lat: &'a FieldLattice) -> CbpCache<'a> {
        CbpCache { lat, memo: HashMap::new() }
    }

    pub fn lattice(&self) -> &'a FieldLattice {
        self.lat
    }

    pub fn check(&mut self, ids: &[u32]) -> Result<bool> {
        let key = normalize(self.lat, ids);
        if key.len() <= 2 {
            return Ok(true);
        }
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = cbp_normalized(self.lat, &key)?;
        self.memo.insert(key, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{Ring, Submodule};

    const Z: Ring = Ring::Integers;

    fn zsub(rows: &[Vec<i64>]) -> Submodule {
        Submodule::from_rows(Z, rows[0].len(), rows)
    }

    #[test]
    fn four_member_counterexample() {
        let c = Collection::new(
            Z,
            2,
            vec![Submodule::ambient(Z, 2), zsub(&[vec![1, 0]]), zsub(&[vec![0, 1]]), zsub(&[vec![1, 1]])],
        )
        .unwrap();
        let v = ie_check(&c.ambient(), c.members(), true).unwrap();
        assert_eq!(v.subset, vec![1]);
        assert!(!has_cbp_ie(&c).unwrap());
    }

    #[test]
    fn incompatible_lines() {
        let c = Collection::new(Z, 2, vec![zsub(&[vec![1, 1]]), zsub(&[vec![1, -1]])]).unwrap();
        let v = ie_check(&c.ambient(), c.members(), true).unwrap();
        assert_eq!(v, IeViolation { subset: vec![], kind: ViolationKind::NotSplit });
    }

    #[test]
    fn three_coplanar_lines() {
        let f2 = Ring::PrimeField(2);
        let lines = vec![
            Submodule::from_rows(f2, 2, &[vec![1, 0]]),
            Submodule::from_rows(f2, 2, &[vec![0, 1]]),
            Submodule::from_rows(f2, 2, &[vec![1, 1]]),
        ];
        let c = Collection::new(f2, 2, lines).unwrap();
        assert!(!has_cbp_ie(&c).unwrap());
        let lat = FieldLattice::new(2, 2).unwrap();
        let ids: Vec<u32> = c.members().iter().map(|m| lat.id_of(m).unwrap()).collect();
        assert!(!cbp_ids(&lat, &ids).unwrap());
        assert!(cbp_ids(&lat, &ids[..2]).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let m = vec![Submodule::ambient(Z, 1); MAX_MEMBERS + 1];
        let c = Collection::new(Z, 1, m).unwrap();
        assert!(matches!(has_cbp_ie(&c), Err(Error::CapExceeded { .. })));
    }
}
