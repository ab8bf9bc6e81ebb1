//! The based multi-simplicial sets `D^{a,b}_n(F_p)`, presented by their
//! nondegenerate non-basepoint simplices, with normalized chains, the
//! shuffle product and the comparison checks against higher buildings.

mod checks;
mod product;

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cbp::CbpCache;
use crate::complexes::Caps;
use crate::error::{Error, Result};
use crate::exactlin::FieldLattice;
use crate::homology::{homology, ChainComplex, HomologyProfile, SparseMatrix};

pub use checks::{check_bar_model, check_suspension, BarModelReport, BidegreeCount, SuspensionReport};
pub use product::{mu_chain, tensor_chains, BasedChainMap, Multiplier, TensorBasis};

/// One simplex: per slot, a flag `V_0 ⊆ .. ⊆ V_p` (flag slots) or a
/// splitting `(M_0, .., M_{p+1})` (split slots), as lattice ids.
pub type Cell = Vec<Vec<u32>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Flag,
    Split,
}

impl SlotKind {
    /// Simplicial degree of a sequence in this slot.
    pub fn degree(self, seq: &[u32]) -> usize {
        match self {
            SlotKind::Flag => seq.len() - 1,
            SlotKind::Split => seq.len() - 2,
        }
    }
}

/// Outcome of a face map on a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Face {
    Base,
    Degenerate,
    Cell(Cell),
}

/// Face `d_i` of one slot sequence, before classification.
pub(crate) fn face_seq(kind: SlotKind, lat: &FieldLattice, seq: &[u32], i: usize) -> Vec<u32> {
    match kind {
        SlotKind::Flag => seq.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect(),
        SlotKind::Split => {
            let mut out = Vec::with_capacity(seq.len() - 1);
            out.extend_from_slice(&seq[..i]);
            out.push(lat.join(seq[i], seq[i + 1]));
            out.extend_from_slice(&seq[i + 2..]);
            out
        }
    }
}

/// Whether a slot sequence is the basepoint relative to the ambient `top`.
pub(crate) fn seq_is_base(kind: SlotKind, lat: &FieldLattice, seq: &[u32], top: u32) -> bool {
    let z = lat.zero_id();
    match kind {
        SlotKind::Flag => seq[0] != z || *seq.last().unwrap() != top,
        SlotKind::Split => seq[0] != z || *seq.last().unwrap() != z,
    }
}

/// Whether a slot sequence is in the image of a degeneracy.
pub(crate) fn seq_is_degenerate(kind: SlotKind, lat: &FieldLattice, seq: &[u32]) -> bool {
    match kind {
        SlotKind::Flag => seq.windows(2).any(|w| w[0] == w[1]),
        SlotKind::Split => seq[1..seq.len() - 1].iter().any(|&m| m == lat.zero_id()),
    }
}

/// The nondegenerate part of `D^{a,b}_n(F_p)`.
#[derive(Debug, Clone)]
pub struct SemiSimplicialModel {
    a: usize,
    b: usize,
    lat: FieldLattice,
    cells: Vec<Vec<Cell>>,
    index: HashMap<Cell, usize>,
}

fn strict_flags(lat: &FieldLattice) -> Vec<Vec<u32>> {
    fn go(lat: &FieldLattice, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let last = *cur.last().unwrap();
        if last == lat.top_id() {
            out.push(cur.clone());
            return;
        }
        for x in 0..lat.len() as u32 {
            if x != last && lat.leq(last, x) {
                cur.push(x);
                go(lat, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(lat, &mut vec![lat.zero_id()], &mut out);
    out
}

pub(crate) fn strict_splittings(lat: &FieldLattice) -> Vec<Vec<u32>> {
    fn go(lat: &FieldLattice, sum: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let z = lat.zero_id();
        if sum == lat.top_id() {
            let mut s = cur.clone();
            s.push(z);
            out.push(s);
            return;
        }
        for x in 0..lat.len() as u32 {
            if x != z && lat.meet(sum, x) == z {
                cur.push(x);
                go(lat, lat.join(sum, x), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(lat, lat.zero_id(), &mut vec![lat.zero_id()], &mut out);
    out
}

/// Builds the model of `D^{a,b}_n(F_p)`.
pub fn d_model(a: usize, b: usize, n: usize, p: u32, caps: &Caps) -> Result<SemiSimplicialModel> {
    let lat = FieldLattice::new(p, n)?;
    SemiSimplicialModel::build(lat, a, b, caps)
}

impl SemiSimplicialModel {
    pub fn build(lat: FieldLattice, a: usize, b: usize, caps: &Caps) -> Result<SemiSimplicialModel> {
        if a + b == 0 {
            return Err(Error::InvalidArgument("need a + b >= 1".into()));
        }
        let flags = strict_flags(&lat);
        let splits = strict_splittings(&lat);
        let options: Vec<&Vec<Vec<u32>>> = (0..a + b).map(|s| if s < a { &flags } else { &splits }).collect();

        fn extend(
            options: &[&Vec<Vec<u32>>],
            cache: &mut CbpCache,
            cur: &mut Cell,
            ids: &mut Vec<u32>,
            out: &mut Vec<Cell>,
            cap: usize,
        ) -> Result<()> {
            if cur.len() == options.len() {
                out.push(cur.clone());
                if out.len() > cap {
                    return Err(Error::CapExceeded { what: "model simplices", value: out.len(), cap });
                }
                return Ok(());
            }
            for seq in options[cur.len()] {
                let mark = ids.len();
                ids.extend_from_slice(seq);
                if cache.check(ids)? {
                    cur.push(seq.clone());
                    extend(options, cache, cur, ids, out, cap)?;
                    cur.pop();
                }
                ids.truncate(mark);
            }
            Ok(())
        }

        let cap = caps.max_simplices;
        let parts: Vec<Vec<Cell>> = options[0]
            .par_iter()
            .map_init(
                || CbpCache::new(&lat),
                |cache, first| -> Result<Vec<Cell>> {
                    let mut out = Vec::new();
                    let mut ids = first.clone();
                    extend(&options, cache, &mut vec![first.clone()], &mut ids, &mut out, cap)?;
                    Ok(out)
                },
            )
            .collect::<Result<_>>()?;
        let total: usize = parts.iter().map(Vec::len).sum();
        if total > cap {
            return Err(Error::CapExceeded { what: "model simplices", value: total, cap });
        }
        let mut all: Vec<Cell> = parts.into_iter().flatten().collect();
        let kinds: Vec<SlotKind> = (0..a + b).map(|s| if s < a { SlotKind::Flag } else { SlotKind::Split }).collect();
        let deg = |c: &Cell| -> usize { c.iter().zip(&kinds).map(|(s, k)| k.degree(s)).sum() };
        let multideg = |c: &Cell| -> Vec<usize> { c.iter().zip(&kinds).map(|(s, k)| k.degree(s)).collect() };
        all.sort_by(|x, y| (deg(x), multideg(x), x).cmp(&(deg(y), multideg(y), y)));
        let top = all.last().map_or(0, deg);
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        for c in all {
            let d = deg(&c);
            cells[d].push(c);
        }
        let mut index = HashMap::new();
        for level in &cells {
            for (i, c) in level.iter().enumerate() {
                index.insert(c.clone(), i);
            }
        }
        Ok(SemiSimplicialModel { a, b, lat, cells, index })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.lat.n()
    }

    pub fn p(&self) -> u32 {
        self.lat.p()
    }

    pub fn lattice(&self) -> &FieldLattice {
        &self.lat
    }

    pub fn slots(&self) -> usize {
        self.a + self.b
    }

    pub fn kind(&self, slot: usize) -> SlotKind {
        if slot < self.a {
            SlotKind::Flag
        } else {
            SlotKind::Split
        }
    }

    /// Highest total degree with a simplex.
    pub fn top_degree(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, d: usize) -> &[Cell] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Index of a cell within its total degree.
    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn multidegree(&self, c: &Cell) -> Vec<usize> {
        c.iter().enumerate().map(|(s, seq)| self.kind(s).degree(seq)).collect()
    }

    pub fn degree(&self, c: &Cell) -> usize {
        self.multidegree(c).iter().sum()
    }

    /// Classifies an arbitrary cell of the right shape.
    pub fn classify(&self, c: Cell) -> Face {
        let top = self.lat.top_id();
        if c.iter().enumerate().any(|(s, seq)| seq_is_base(self.kind(s), &self.lat, seq, top)) {
            Face::Base
        } else if c.iter().enumerate().any(|(s, seq)| seq_is_degenerate(self.kind(s), &self.lat, seq)) {
            Face::Degenerate
        } else {
            Face::Cell(c)
        }
    }

    /// Face `d_i` in `slot`.
    pub fn face(&self, c: &Cell, slot: usize, i: usize) -> Face {
        let mut out = c.clone();
        out[slot] = face_seq(self.kind(slot), &self.lat, &c[slot], i);
        self.classify(out)
    }

    /// Boundary of a cell in the total complex, as `(index, coefficient)` in
    /// the degree below.
    pub fn boundary_of(&self, c: &Cell) -> Vec<(u32, i64)> {
        let md = self.multidegree(c);
        let mut offset = 0usize;
        let mut col = Vec::new();
        for (slot, &p) in md.iter().enumerate() {
            if p > 0 {
                for i in 0..=p {
                    if let Face::Cell(f) = self.face(c, slot, i) {
                        let r = self.index_of(&f).expect("faces stay in the model");
                        col.push((r as u32, if (offset + i).is_multiple_of(2) { 1 } else { -1 }));
                    }
                }
            }
            offset += p;
        }
        col
    }

    /// Normalized reduced chains (the basepoint is quotiented out).
    pub fn chains(&self) -> ChainComplex {
        let mut sizes = Vec::new();
        let mut bds = Vec::new();
        for d in 0..self.cells.len() {
            sizes.push(self.cells[d].len());
            if d == 0 {
                bds.push(SparseMatrix::zero(0, self.cells[0].len()));
            } else {
                let cols = self.cells[d].par_iter().map(|c| self.boundary_of(c)).collect();
                bds.push(SparseMatrix::from_columns(self.cells[d - 1].len(), cols));
            }
        }
        ChainComplex::new(0, sizes, bds).expect("model boundary squares to zero")
    }

    pub fn homology(&self) -> HomologyProfile {
        homology(&self.chains())
    }

    /// One line per simplex: total degree, then each slot's submodules.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# D^{{{},{}}} n={} p={}", self.a, self.b, self.n(), self.p());
        for (d, level) in self.cells.iter().enumerate() {
            for c in level {
                let slots: Vec<String> = c
                    .iter()
                    .enumerate()
                    .map(|(s, seq)| {
                        let sep = if self.kind(s) == SlotKind::Flag { " < " } else { " + " };
                        let mods: Vec<String> = seq.iter().map(|&m| self.lat.submodule(m).label()).collect();
                        mods.join(sep)
                    })
                    .collect();
                let _ = writeln!(out, "{d}: {}", slots.join(" | "));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn circle_model() {
        for p in [2, 3] {
            let m = d_model(1, 0, 1, p, &caps()).unwrap();
            assert_eq!(m.num_cells(), 1);
            assert_eq!(m.homology(), HomologyProfile::from_bettis(&[(1, 1)]));
        }
    }

    #[test]
    fn rank_two_model() {
        let m = d_model(1, 0, 2, 2, &caps()).unwrap();
        assert_eq!((m.cells(1).len(), m.cells(2).len()), (1, 3));
        assert_eq!(m.homology(), HomologyProfile::from_bettis(&[(2, 2)]));
    }

    #[test]
    fn flags_are_strict_and_full() {
        let m = d_model(1, 0, 3, 2, &caps()).unwrap();
        assert_eq!((m.cells(1).len(), m.cells(2).len(), m.cells(3).len()), (1, 14, 21));
        let lat = m.lattice();
        for d in 1..=3 {
            for c in m.cells(d) {
                let f = &c[0];
                assert_eq!(f[0], lat.zero_id());
                assert_eq!(*f.last().unwrap(), lat.top_id());
                assert!(f.windows(2).all(|w| w[0] != w[1] && lat.leq(w[0], w[1])));
            }
        }
    }

    #[test]
    fn rank_zero_is_s0() {
        for (a, b) in [(1, 0), (0, 1), (1, 1)] {
            let m = d_model(a, b, 0, 2, &caps()).unwrap();
            assert_eq!(m.num_cells(), 1);
            assert_eq!(m.homology(), HomologyProfile::from_bettis(&[(0, 1)]));
        }
    }

    #[test]
    fn dump_lines() {
        let m = d_model(1, 0, 2, 2, &caps()).unwrap();
        let d = m.dump();
        assert_eq!(d.lines().count(), 5);
        assert!(d.lines().nth(1).unwrap().starts_with("1: "));
    }
}
