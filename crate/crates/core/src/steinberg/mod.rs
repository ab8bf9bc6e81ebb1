//! The Steinberg monoid of `F_p`: Steinberg modules as top homology of
//! `D^{1,0}`, their product through the shuffle map, the normalized bar
//! complex over internal direct-sum decompositions, and Tor.

mod bar;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::complexes::Caps;
use crate::error::{Error, Result};
use crate::exactlin::{left_kernel, FieldLattice, Matrix, Ring, Submodule};
use crate::simpmodel::{d_model, Cell, Multiplier, SemiSimplicialModel};

pub use bar::{
    bar_basis_sizes, bar_complex, bar_euler, classical_st_rank, compositions, count_decompositions, decomposition_count,
    gl_order, st_ranks, tor, tor_cap, tor_report, BarGenerator, CrossChecks, GradedBarComplex, TorReport,
};

/// Largest rank for which Steinberg modules are computed from the model by
/// default.
pub fn homology_cap(p: u32) -> usize {
    if p == 2 {
        3
    } else {
        2
    }
}

/// `St_n(F_p) = H̃_n(D^{1,0}_n)`, with a basis of cycles in top degree.
#[derive(Debug, Clone)]
pub struct SteinbergModule {
    n: usize,
    model: SemiSimplicialModel,
    basis: Submodule,
}

/// Computes `St_n(F_p)` and checks that the model's homology is free and
/// concentrated in degree `n`.
pub fn st_module(n: usize, p: u32, caps: &Caps) -> Result<SteinbergModule> {
    let model = d_model(1, 0, n, p, caps)?;
    let h = model.homology();
    if !h.is_free() {
        return Err(Error::TorsionDetected(format!("H̃(D^{{1,0}}_{n}(F_{p})) = {}", h.summary())));
    }
    let top = model.cells(n);
    let below = if n == 0 { 0 } else { model.cells(n - 1).len() };
    let basis = if below == 0 {
        Submodule::ambient(Ring::Integers, top.len())
    } else {
        let rows: Vec<Vec<BigInt>> = top
            .iter()
            .map(|c| {
                let mut r = vec![BigInt::zero(); below];
                for (i, v) in model.boundary_of(c) {
                    r[i as usize] += v;
                }
                r
            })
            .collect();
        let bd = Matrix::from_bigint_rows(Ring::Integers, below, rows);
        Submodule::canonicalize(&left_kernel(&bd))
    };
    if basis.rank() != h.betti(n as i64) || h.nonzero_degrees() != vec![n as i64] {
        return Err(Error::CrossCheck(format!("St_{n}(F_{p}): cycle rank {} against homology {}", basis.rank(), h.summary())));
    }
    Ok(SteinbergModule { n, model, basis })
}

impl SteinbergModule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.model.p()
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn model(&self) -> &SemiSimplicialModel {
        &self.model
    }

    /// The `i`-th basis cycle, over the top-degree simplices.
    pub fn basis_cycle(&self, i: usize) -> &[BigInt] {
        self.basis.basis().row(i)
    }

    /// Coordinates of a top-degree cycle in the basis.
    pub fn coordinates(&self, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        self.basis.coordinates(chain).ok_or_else(|| Error::CrossCheck(format!("chain is not a cycle of St_{}", self.n)))
    }
}

/// Steinberg modules of ranks `0..=n` over one prime with their block
/// products.
#[derive(Debug)]
pub struct SteinbergMonoid {
    p: u32,
    modules: Vec<SteinbergModule>,
    /// `(a, b) -> [i][j]`: product of basis cycles on the standard blocks, as
    /// a chain over the top simplices of rank `a + b`.
    blocks: HashMap<(usize, usize), Vec<Vec<Vec<BigInt>>>>,
}

impl SteinbergMonoid {
    pub fn new(n: usize, p: u32, caps: &Caps) -> Result<SteinbergMonoid> {
        let modules: Vec<SteinbergModule> = (0..=n).into_par_iter().map(|k| st_module(k, p, caps)).collect::<Result<_>>()?;
        let pairs: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..=n - a).map(move |b| (a, b))).collect();
        let blocks = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (x, y, t) = (&modules[a], &modules[b], &modules[a + b]);
                let mult = Multiplier::new(&x.model, &y.model, &t.model)?;
                let xs = x.model.cells(a);
                let ys = y.model.cells(b);
                let len = t.model.cells(a + b).len();
                let table = (0..x.rank())
                    .map(|i| {
                        (0..y.rank())
                            .map(|j| {
                                let mut out = vec![BigInt::zero(); len];
                                for (cx, u) in xs.iter().zip(x.basis_cycle(i)) {
                                    if u.is_zero() {
                                        continue;
                                    }
                                    for (cy, v) in ys.iter().zip(y.basis_cycle(j)) {
                                        if v.is_zero() {
                                            continue;
                                        }
                                        for (r, s) in mult.mul(cx, cy) {
                                            out[r as usize] += u * v * s;
                                        }
                                    }
                                }
                                out
                            })
                            .collect()
                    })
                    .collect();
                Ok(((a, b), table))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        Ok(SteinbergMonoid { p, modules, blocks })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn max_rank(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, k: usize) -> &SteinbergModule {
        &self.modules[k]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(SteinbergModule::rank).collect()
    }

    /// Products of basis elements of `St(A)` and `St(B)` in coordinates of
    /// `St(A ⊕ B)`; each module is identified with a standard one through
    /// the canonical basis of its subspace.
    pub fn multiply_basis(&self, lat: &FieldLattice, a_id: u32, b_id: u32) -> Result<Vec<Vec<Vec<BigInt>>>> {
        if lat.p() != self.p {
            return Err(Error::AmbientMismatch("lattice over a different prime".into()));
        }
        if lat.meet(a_id, b_id) != lat.zero_id() {
            return Err(Error::InvalidArgument("factors do not form a direct sum".into()));
        }
        let (a, b) = (lat.rank(a_id), lat.rank(b_id));
        let c = a + b;
        if c > self.max_rank() {
            return Err(Error::CapExceeded { what: "steinberg rank", value: c, cap: self.max_rank() });
        }
        if a == 0 || b == 0 {
            let r = self.modules[c].rank();
            let unit = |i: usize| (0..r).map(|k| BigInt::from((k == i) as i64)).collect::<Vec<_>>();
            return Ok(if a == 0 {
                vec![(0..r).map(unit).collect()]
            } else {
                (0..r).map(|i| vec![unit(i)]).collect()
            });
        }
        let c_id = lat.join(a_id, b_id);
        let piv = lat.submodule(c_id).pivots().to_vec();
        let ring = lat.ring();
        let rows: Vec<Vec<BigInt>> = [a_id, b_id]
            .iter()
            .flat_map(|&s| lat.submodule(s).basis().row_vecs())
            .map(|r| piv.iter().map(|&k| r[k].clone()).collect())
            .collect();
        let h = Matrix::from_bigint_rows(ring, c, rows);
        let target = &self.modules[c];
        let small = target.model.lattice();
        let id_map: Vec<u32> = (0..small.len() as u32)
            .map(|id| {
                let vs: Vec<usize> =
                    small.basis_vectors(id).into_iter().map(|v| small.vector_index(&h.vec_mul(&small.vector(v)))).collect();
                small.span(&vs)
            })
            .collect();
        let cells = target.model.cells(c);
        let perm: Vec<usize> = cells
            .iter()
            .map(|cell| {
                let img: Cell = cell.iter().map(|seq| seq.iter().map(|&v| id_map[v as usize]).collect()).collect();
                target.model.index_of(&img).expect("linear isomorphisms permute full flags")
            })
            .collect();
        self.blocks[&(a, b)]
            .iter()
            .map(|row| {
                row.iter()
                    .map(|chain| {
                        let mut moved = vec![BigInt::zero(); chain.len()];
                        for (k, v) in chain.iter().enumerate() {
                            moved[perm[k]] += v;
                        }
                        target.coordinates(&moved)
                    })
                    .collect()
            })
            .collect()
    }
}

/// `x · y` for `x ∈ St(A)`, `y ∈ St(B)` given in coordinates, landing in
/// `St(A ⊕ B)`.
pub fn st_multiply(m: &SteinbergMonoid, lat: &FieldLattice, a: u32, b: u32, x: &[BigInt], y: &[BigInt]) -> Result<Vec<BigInt>> {
    let table = m.multiply_basis(lat, a, b)?;
    if x.len() != table.len() || table.first().is_some_and(|r| r.len() != y.len()) {
        return Err(Error::InvalidArgument("coordinate vectors do not match the module ranks".into()));
    }
    let r = m.module(lat.rank(a) + lat.rank(b)).rank();
    let mut out = vec![BigInt::zero(); r];
    for (i, u) in x.iter().enumerate() {
        for (j, v) in y.iter().enumerate() {
            if u.is_zero() || v.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(&table[i][j]) {
                *o += u * v * w;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::snf;
    use num_traits::One;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn ranks() {
        assert_eq!(st_module(0, 2, &caps()).unwrap().rank(), 1);
        assert_eq!(st_module(1, 2, &caps()).unwrap().rank(), 1);
        assert_eq!(st_module(1, 3, &caps()).unwrap().rank(), 1);
        assert_eq!(st_module(2, 2, &caps()).unwrap().rank(), 2);
        assert_eq!(st_module(2, 3, &caps()).unwrap().rank(), 3);
        assert_eq!(st_module(3, 2, &caps()).unwrap().rank(), 8);
    }

    fn lines(lat: &FieldLattice) -> Vec<u32> {
        lat.ids_of_rank(1)
    }

    #[test]
    fn rank_one_products_span() {
        let m = SteinbergMonoid::new(2, 2, &caps()).unwrap();
        let lat = FieldLattice::new(2, 2).unwrap();
        let mut rows = Vec::new();
        for &a in &lines(&lat) {
            for &b in &lines(&lat) {
                if a != b {
                    rows.push(st_multiply(&m, &lat, a, b, &[BigInt::one()], &[BigInt::one()]).unwrap());
                }
            }
        }
        assert_eq!(rows.len(), 6);
        let d = snf(&Matrix::from_bigint_rows(Ring::Integers, 2, rows));
        assert_eq!(d, vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn unit_and_commutativity() {
        let m = SteinbergMonoid::new(3, 2, &caps()).unwrap();
        let lat = FieldLattice::new(2, 2).unwrap();
        let ls = lines(&lat);
        let one = [BigInt::one()];
        let z = lat.zero_id();
        let x = st_multiply(&m, &lat, ls[0], ls[1], &one, &one).unwrap();
        let y = st_multiply(&m, &lat, ls[1], ls[0], &one, &one).unwrap();
        let neg: Vec<BigInt> = y.iter().map(|v| -v).collect();
        assert_eq!(x, neg);
        assert_eq!(st_multiply(&m, &lat, z, ls[0], &one, &one).unwrap(), one.to_vec());

        // St_1 x St_2 inside F_2^3
        let lat3 = FieldLattice::new(2, 3).unwrap();
        let l = lat3.ids_of_rank(1)[0];
        let p = lat3.ids_of_rank(2).into_iter().find(|&q| lat3.meet(q, l) == lat3.zero_id()).unwrap();
        for j in 0..2 {
            let e: Vec<BigInt> = (0..2).map(|k| BigInt::from((k == j) as i64)).collect();
            let xy = st_multiply(&m, &lat3, l, p, &one, &e).unwrap();
            let yx = st_multiply(&m, &lat3, p, l, &e, &one).unwrap();
            assert_eq!(xy, yx);
        }
    }

    #[test]
    fn associative() {
        let m = SteinbergMonoid::new(3, 2, &caps()).unwrap();
        let lat = FieldLattice::new(2, 3).unwrap();
        let one = [BigInt::one()];
        let ls = lines(&lat);
        let mut tested = 0;
        for &a in &ls {
            for &b in &ls {
                let ab = lat.join(a, b);
                if a == b {
                    continue;
                }
                for &c in &ls {
                    if lat.meet(ab, c) != lat.zero_id() {
                        continue;
                    }
                    let bc = lat.join(b, c);
                    let left = st_multiply(&m, &lat, ab, c, &st_multiply(&m, &lat, a, b, &one, &one).unwrap(), &one).unwrap();
                    let right = st_multiply(&m, &lat, a, bc, &one, &st_multiply(&m, &lat, b, c, &one, &one).unwrap()).unwrap();
                    assert_eq!(left, right);
                    tested += 1;
                }
            }
        }
        assert_eq!(tested, 168);
    }
}
