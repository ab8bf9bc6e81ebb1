use std::collections::HashMap;

use rayon::prelude::*;

use super::{d_model, Cell, Face, SemiSimplicialModel, SlotKind};
use crate::complexes::Caps;
use crate::error::{Error, Result};
use crate::exactlin::FieldLattice;
use crate::homology::{ChainComplex, SparseMatrix};

/// A degreewise map of chain complexes starting in the same degree.
#[derive(Debug, Clone)]
pub struct BasedChainMap {
    pub domain: ChainComplex,
    pub codomain: ChainComplex,
    /// `maps[i]` goes from degree `min_degree + i` of the domain to the same
    /// degree of the codomain.
    pub maps: Vec<SparseMatrix>,
}

impl BasedChainMap {
    /// Checks shapes and `∂f = f∂`.
    pub fn new(domain: ChainComplex, codomain: ChainComplex, maps: Vec<SparseMatrix>) -> Result<BasedChainMap> {
        if domain.min_degree() != codomain.min_degree() || maps.len() != domain.sizes().len() {
            return Err(Error::InvalidArgument("chain map shape".into()));
        }
        let lo = domain.min_degree();
        for (i, f) in maps.iter().enumerate() {
            let d = lo + i as i64;
            if f.ncols != domain.size(d) || f.nrows != codomain.size(d) {
                return Err(Error::InvalidArgument(format!("chain map shape in degree {d}")));
            }
            if i == 0 {
                continue;
            }
            let below = &maps[i - 1];
            let lhs = match codomain.boundary(d) {
                Some(b) if f.nrows > 0 => b.compose(f),
                _ => SparseMatrix::zero(codomain.size(d - 1), f.ncols),
            };
            let rhs = below.compose(domain.boundary(d).unwrap());
            if lhs.cols != rhs.cols {
                return Err(Error::CrossCheck(format!("chain map does not commute with boundaries in degree {d}")));
            }
        }
        Ok(BasedChainMap { domain, codomain, maps })
    }

    pub fn map(&self, d: i64) -> Option<&SparseMatrix> {
        let i = d - self.domain.min_degree();
        (i >= 0).then(|| self.maps.get(i as usize)).flatten()
    }
}

/// Basis of a tensor product: per total degree, `(d1, i1, d2, i2)`.
#[derive(Debug, Clone)]
pub struct TensorBasis {
    pub elems: Vec<Vec<(usize, usize, usize, usize)>>,
    index: HashMap<(usize, usize, usize, usize), usize>,
}

impl TensorBasis {
    pub fn index_of(&self, d1: usize, i1: usize, d2: usize, i2: usize) -> Option<usize> {
        self.index.get(&(d1, i1, d2, i2)).copied()
    }
}

/// Tensor product of two complexes concentrated in degrees `>= 0`, with
/// `∂(x⊗y) = ∂x⊗y + (-1)^{|x|} x⊗∂y`.
pub fn tensor_chains(c1: &ChainComplex, c2: &ChainComplex) -> Result<(ChainComplex, TensorBasis)> {
    if c1.min_degree() != 0 || c2.min_degree() != 0 {
        return Err(Error::InvalidArgument("tensor factors must start in degree 0".into()));
    }
    let (t1, t2) = (c1.max_degree() as usize, c2.max_degree() as usize);
    let mut elems: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); t1 + t2 + 1];
    let mut index = HashMap::new();
    for (d, level) in elems.iter_mut().enumerate() {
        for d1 in 0..=d.min(t1) {
            let d2 = d - d1;
            if d2 > t2 {
                continue;
            }
            for i1 in 0..c1.size(d1 as i64) {
                for i2 in 0..c2.size(d2 as i64) {
                    index.insert((d1, i1, d2, i2), level.len());
                    level.push((d1, i1, d2, i2));
                }
            }
        }
    }
    let mut sizes = Vec::new();
    let mut bds = Vec::new();
    for d in 0..elems.len() {
        sizes.push(elems[d].len());
        if d == 0 {
            bds.push(SparseMatrix::zero(0, elems[0].len()));
            continue;
        }
        let cols = elems[d]
            .iter()
            .map(|&(d1, i1, d2, i2)| {
                let mut col = Vec::new();
                if d1 > 0 {
                    for &(r, v) in &c1.boundary(d1 as i64).unwrap().cols[i1] {
                        col.push((index[&(d1 - 1, r as usize, d2, i2)] as u32, v));
                    }
                }
                if d2 > 0 {
                    let s = if d1 % 2 == 0 { 1 } else { -1 };
                    for &(r, v) in &c2.boundary(d2 as i64).unwrap().cols[i2] {
                        col.push((index[&(d1, i1, d2 - 1, r as usize)] as u32, s * v));
                    }
                }
                col
            })
            .collect();
        bds.push(SparseMatrix::from_columns(elems[d - 1].len(), cols));
    }
    Ok((ChainComplex::new(0, sizes, bds)?, TensorBasis { elems, index }))
}

/// All `(p, q)`-shuffles as step sequences (`true` = step of the first
/// factor) with their signs.
fn shuffles(p: usize, q: usize) -> Vec<(Vec<bool>, i64)> {
    fn go(p: usize, q: usize, cur: &mut Vec<bool>, inv: usize, seen_q: usize, out: &mut Vec<(Vec<bool>, i64)>) {
        if p == 0 && q == 0 {
            out.push((cur.clone(), if inv.is_multiple_of(2) { 1 } else { -1 }));
            return;
        }
        if p > 0 {
            cur.push(true);
            go(p - 1, q, cur, inv + seen_q, seen_q, out);
            cur.pop();
        }
        if q > 0 {
            cur.push(false);
            go(p, q - 1, cur, inv, seen_q + 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, q, &mut Vec::new(), 0, 0, &mut out);
    out
}

/// Spreads a slot sequence along a shuffle path: the degeneracies at the
/// other factor's steps.
fn spread(kind: SlotKind, seq: &[u32], path: &[bool], mine: bool, zero: u32) -> Vec<u32> {
    match kind {
        SlotKind::Flag => {
            let mut out = Vec::with_capacity(path.len() + 1);
            let mut i = 0;
            out.push(seq[0]);
            for &s in path {
                if s == mine {
                    i += 1;
                }
                out.push(seq[i]);
            }
            out
        }
        SlotKind::Split => {
            let mut out = Vec::with_capacity(path.len() + 2);
            let mut i = 0;
            out.push(seq[0]);
            for &s in path {
                if s == mine {
                    i += 1;
                    out.push(seq[i]);
                } else {
                    out.push(zero);
                }
            }
            out.push(*seq.last().unwrap());
            out
        }
    }
}

fn embedding(src: &FieldLattice, dst: &FieldLattice, offset: usize) -> Vec<u32> {
    let shift = (src.p() as usize).pow(offset as u32);
    (0..src.len() as u32)
        .map(|id| {
            let vs: Vec<usize> = src.basis_vectors(id).into_iter().map(|v| v * shift).collect();
            dst.span(&vs)
        })
        .collect()
}

/// The chain-level product `C(D(F^m)) ⊗ C(D(F^n)) → C(D(F^{m+n}))`: the
/// shuffle map followed by blockwise direct sum, first factor on the first
/// `m` coordinates.
#[derive(Debug)]
pub struct Multiplier<'a> {
    x: &'a SemiSimplicialModel,
    y: &'a SemiSimplicialModel,
    t: &'a SemiSimplicialModel,
    ex: Vec<u32>,
    ey: Vec<u32>,
}

impl<'a> Multiplier<'a> {
    pub fn new(x: &'a SemiSimplicialModel, y: &'a SemiSimplicialModel, t: &'a SemiSimplicialModel) -> Result<Multiplier<'a>> {
        let same = |m: &SemiSimplicialModel| m.a() == t.a() && m.b() == t.b() && m.p() == t.p();
        if !same(x) || !same(y) || x.n() + y.n() != t.n() {
            return Err(Error::AmbientMismatch("product factors do not fit the target".into()));
        }
        let ex = embedding(x.lattice(), t.lattice(), 0);
        let ey = embedding(y.lattice(), t.lattice(), x.n());
        Ok(Multiplier { x, y, t, ex, ey })
    }

    pub fn target(&self) -> &SemiSimplicialModel {
        self.t
    }

    /// `μ(x ⊗ y)` as `(index, coefficient)` in the target's degree
    /// `|x| + |y|`.
    pub fn mul(&self, xc: &Cell, yc: &Cell) -> Vec<(u32, i64)> {
        let px = self.x.multidegree(xc);
        let py = self.y.multidegree(yc);
        let k = px.len();
        // Koszul sign of regrouping the slots pairwise
        let mut koszul = 0usize;
        for j in 0..k {
            for i in 0..j {
                koszul += py[i] * px[j];
            }
        }
        let per_slot: Vec<Vec<(Vec<bool>, i64)>> = (0..k).map(|j| shuffles(px[j], py[j])).collect();
        let lat = self.t.lattice();
        let zx = self.x.lattice().zero_id();
        let zy = self.y.lattice().zero_id();
        let mut out: Vec<(u32, i64)> = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            let mut sign = if koszul.is_multiple_of(2) { 1 } else { -1 };
            let mut cell: Cell = Vec::with_capacity(k);
            for j in 0..k {
                let (path, s) = &per_slot[j][choice[j]];
                sign *= s;
                let kind = self.t.kind(j);
                let a = spread(kind, &xc[j], path, true, zx);
                let b = spread(kind, &yc[j], path, false, zy);
                cell.push(a.iter().zip(&b).map(|(&u, &v)| lat.join(self.ex[u as usize], self.ey[v as usize])).collect());
            }
            match self.t.classify(cell) {
                Face::Cell(c) => {
                    let r = self.t.index_of(&c).expect("products stay in the model");
                    out.push((r as u32, sign));
                }
                other => panic!("shuffle product left the nondegenerate part: {other:?}"),
            }
            let mut j = 0;
            while j < k {
                choice[j] += 1;
                if choice[j] < per_slot[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        out
    }
}

/// The product as a chain map, with `∂μ = μ∂` verified.
pub fn mu_chain(a: usize, b: usize, m: usize, n: usize, p: u32, caps: &Caps) -> Result<BasedChainMap> {
    let xm = d_model(a, b, m, p, caps)?;
    let ym = d_model(a, b, n, p, caps)?;
    let tm = d_model(a, b, m + n, p, caps)?;
    let mult = Multiplier::new(&xm, &ym, &tm)?;
    let (dom, basis) = tensor_chains(&xm.chains(), &ym.chains())?;
    let cod = tm.chains();
    let maps = basis
        .elems
        .iter()
        .enumerate()
        .map(|(d, level)| {
            let cols = level
                .par_iter()
                .map(|&(d1, i1, d2, i2)| mult.mul(&xm.cells(d1)[i1], &ym.cells(d2)[i2]))
                .collect();
            SparseMatrix::from_columns(tm.cells(d).len(), cols)
        })
        .collect();
    let cod = pad(cod, dom.sizes().len());
    BasedChainMap::new(dom, cod, maps)
}

/// Extends a complex by zero groups up to `len` degrees.
fn pad(c: ChainComplex, len: usize) -> ChainComplex {
    if c.sizes().len() >= len {
        return c;
    }
    let lo = c.min_degree();
    let mut sizes = c.sizes().to_vec();
    let mut bds: Vec<SparseMatrix> = (0..sizes.len()).map(|i| c.boundary(lo + i as i64).unwrap().clone()).collect();
    while sizes.len() < len {
        bds.push(SparseMatrix::zero(*sizes.last().unwrap(), 0));
        sizes.push(0);
    }
    ChainComplex::new(lo, sizes, bds).expect("padding keeps a complex")
}
