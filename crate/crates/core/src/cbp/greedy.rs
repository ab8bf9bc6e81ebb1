use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{Collection, ModuleLattice};
use crate::error::Result;
use crate::exactlin::{Matrix, Submodule};

/// A basis of `R^n` together with, for each member, the rows spanning it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonBasis {
    pub basis: Matrix,
    pub spans: Vec<Vec<usize>>,
}

impl CommonBasis {
    /// Re-checks unimodularity and that each member is spanned by its rows.
    pub fn verify(&self, c: &Collection) -> bool {
        if !self.basis.is_unimodular() || self.spans.len() != c.len() {
            return false;
        }
        c.members().iter().zip(&self.spans).all(|(u, idx)| {
            let s = if idx.is_empty() {
                Submodule::zero(c.ring(), c.ambient_rank())
            } else {
                Submodule::canonicalize(&self.basis.select_rows(idx))
            };
            &s == u
        })
    }
}

/// Builds a common basis by height over the poset of intersections `U_S`,
/// extending the span of the vectors chosen below each module by a
/// complement. Returns `None` when an extension step fails or too many
/// vectors are needed.
pub fn common_basis_greedy(c: &Collection) -> Result<Option<CommonBasis>> {
    c.check_cap()?;
    let amb = c.ambient();
    let (ring, n) = (c.ring(), c.ambient_rank());
    let k = c.len();

    let mut us: Vec<Submodule> = vec![amb.top()];
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let u = amb.meet(&us[mask & (mask - 1)], &c.members()[low]);
        us.push(u);
    }
    let poset: Vec<Submodule> = us.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let below = |i: usize, j: usize| i != j && poset[j].contains(&poset[i]).unwrap();
    let mut height = vec![0usize; poset.len()];
    // ranks strictly increase along chains, so sorting by rank is a linear extension
    let mut by_rank: Vec<usize> = (0..poset.len()).collect();
    by_rank.sort_by_key(|&i| poset[i].rank());
    for &j in &by_rank {
        height[j] = by_rank.iter().filter(|&&i| below(i, j)).map(|&i| height[i] + 1).max().unwrap_or(0);
    }
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by(|&a, &b| height[a].cmp(&height[b]).then(poset[a].cmp(&poset[b])));

    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    for &x in &order {
        let xm = &poset[x];
        let inside: Vec<Vec<BigInt>> = chosen.iter().filter(|v| xm.contains_vector(v)).cloned().collect();
        let l = if inside.is_empty() {
            Submodule::zero(ring, n)
        } else {
            Submodule::canonicalize(&Matrix::from_bigint_rows(ring, n, inside))
        };
        let rel = l.relative_to(xm)?;
        let Ok(ext) = rel.extend_to_ambient_basis() else {
            return Ok(None);
        };
        for r in rel.rank()..xm.rank() {
            chosen.push(xm.basis().vec_mul(ext.row(r)));
        }
        if chosen.len() > n {
            return Ok(None);
        }
    }
    if chosen.len() != n {
        return Ok(None);
    }
    let basis = Matrix::from_bigint_rows(ring, n, chosen);
    if !basis.is_unimodular() {
        return Ok(None);
    }
    let spans: Vec<Vec<usize>> = c
        .members()
        .iter()
        .map(|u| (0..n).filter(|&r| u.contains_vector(basis.row(r))).collect())
        .collect();
    let cb = CommonBasis { basis, spans };
    Ok(cb.verify(c).then_some(cb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Ring;

    const Z: Ring = Ring::Integers;

    fn zsub(rows: &[Vec<i64>]) -> Submodule {
        Submodule::from_rows(Z, rows[0].len(), rows)
    }

    #[test]
    fn incompatible_pair_is_absent() {
        let c = Collection::new(Z, 2, vec![zsub(&[vec![1, 1]]), zsub(&[vec![1, -1]])]).unwrap();
        assert!(common_basis_greedy(&c).unwrap().is_none());
    }

    #[test]
    fn three_planes_in_z3() {
        let u = [zsub(&[vec![1, 1, 0]]), zsub(&[vec![1, 0, 1]]), zsub(&[vec![0, 1, 1]])];
        let all = Collection::new(Z, 3, u.to_vec()).unwrap();
        assert!(common_basis_greedy(&all).unwrap().is_none());
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = Collection::new(Z, 3, vec![u[i].clone(), u[j].clone()]).unwrap();
            let b = common_basis_greedy(&c).unwrap().expect("pairs are compatible");
            assert!(b.verify(&c));
        }
    }

    #[test]
    fn flag_is_present() {
        let c = Collection::new(Z, 3, vec![Submodule::coordinate(Z, 3, &[0]), Submodule::coordinate(Z, 3, &[0, 1])])
            .unwrap();
        let b = common_basis_greedy(&c).unwrap().unwrap();
        assert!(b.verify(&c));
        assert_eq!(b.spans[0].len(), 1);
        assert_eq!(b.spans[1].len(), 2);
    }
}
