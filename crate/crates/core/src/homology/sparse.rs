use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactlin::snf_dense;

/// Sparse integer matrix stored by columns: `cols[j]` lists `(row, value)`
/// sorted by row, without zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> SparseMatrix {
        let cols: Vec<Vec<(u32, i64)>> = cols.into_iter().map(normalize).collect();
        debug_assert!(cols.iter().all(|c| c.iter().all(|&(r, _)| (r as usize) < nrows)));
        SparseMatrix { nrows, ncols: cols.len(), cols }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `self * other`, with `other` applied first.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let cols = other
            .cols
            .iter()
            .map(|c| {
                let mut acc: Vec<(u32, i64)> = Vec::new();
                for &(k, v) in c {
                    for &(r, w) in &self.cols[k as usize] {
                        acc.push((r, v.checked_mul(w).expect("coefficient overflow")));
                    }
                }
                normalize(acc)
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: other.ncols, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.ncols]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(r, v) in c {
                d[r as usize][j] = BigInt::from(v);
            }
        }
        d
    }
}

/// Sorts by row, merges duplicates and drops zeros.
pub(crate) fn normalize(mut c: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    c.sort_unstable_by_key(|x| x.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(c.len());
    for (r, v) in c {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = last.1.checked_add(v).expect("coefficient overflow"),
            _ => out.push((r, v)),
        }
    }
    out.retain(|x| x.1 != 0);
    out
}

/// Rank and elementary divisors of a sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithInfo {
    pub rank: usize,
    /// Elementary divisors greater than one, in divisor-chain order.
    pub torsion: Vec<BigInt>,
}

trait Coef: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f * b`, or `None` on overflow.
    fn mul_sub(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    /// `a * b` for a unit `b`.
    fn times(a: &Self, b: &Self) -> Option<Self>;
    fn neg(a: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(a: &i64, f: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn times(a: &i64, b: &i64) -> Option<i64> {
        a.checked_mul(*b)
    }
    fn neg(a: &i64) -> i64 {
        -a
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul_sub(a: &BigInt, f: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - f * b)
    }
    fn times(a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a * b)
    }
    fn neg(a: &BigInt) -> BigInt {
        -a
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// Computes rank and torsion of `m`. Columns of `m` are treated as the rows
/// of the working matrix; pivots are units chosen in a short row whose
/// column has few entries, ties broken by index.
pub fn smith_info(m: &SparseMatrix) -> SmithInfo {
    let rows: Vec<Vec<(u32, i64)>> = m.cols.clone();
    match eliminate(rows, m.nrows) {
        Ok(info) => info,
        Err(Overflow) => {
            let big: Vec<Vec<(u32, BigInt)>> =
                m.cols.iter().map(|c| c.iter().map(|&(r, v)| (r, BigInt::from(v))).collect()).collect();
            eliminate(big, m.nrows).unwrap_or_else(|_| unreachable!("arbitrary precision cannot overflow"))
        }
    }
}

fn eliminate<C: Coef>(mut rows: Vec<Vec<(u32, C)>>, ncols: usize) -> Result<SmithInfo, Overflow> {
    let nrows = rows.len();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
        }
    }
    let mut col_dead = vec![false; ncols];
    let mut row_dead = vec![false; nrows];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = BinaryHeap::new();
    for (i, r) in rows.iter().enumerate() {
        if !r.is_empty() {
            heap.push(Reverse((r.len(), i as u32)));
        }
    }
    let mut rank = 0usize;
    let mut scratch: Vec<(u32, C)> = Vec::new();

    while let Some(Reverse((len, r))) = heap.pop() {
        let ri = r as usize;
        if row_dead[ri] || rows[ri].len() != len || len == 0 {
            continue;
        }
        let mut best: Option<(usize, u32)> = None;
        for (c, v) in &rows[ri] {
            if v.is_unit() {
                let cnt = col_rows[*c as usize].len();
                if best.is_none_or(|b| (cnt, *c) < b) {
                    best = Some((cnt, *c));
                }
            }
        }
        let Some((_, pc)) = best else { continue };
        let pivot_row = std::mem::take(&mut rows[ri]);
        row_dead[ri] = true;
        let pv = pivot_row.iter().find(|x| x.0 == pc).unwrap().1.clone();
        let others = std::mem::take(&mut col_rows[pc as usize]);
        for &o in &others {
            let oi = o as usize;
            if row_dead[oi] {
                continue;
            }
            let Some(pos) = rows[oi].iter().position(|x| x.0 == pc) else { continue };
            // f = a_oc / pv = a_oc * pv for a unit pv
            let f = C::times(&rows[oi][pos].1, &pv).ok_or(Overflow)?;
            scratch.clear();
            let (a, b) = (&rows[oi], &pivot_row);
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
                let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
                if take_a {
                    scratch.push(a[i].clone());
                    i += 1;
                } else if take_b {
                    let v = C::neg(&C::times(&f, &b[j].1).ok_or(Overflow)?);
                    col_rows[b[j].0 as usize].push(o);
                    scratch.push((b[j].0, v));
                    j += 1;
                } else {
                    let v = C::mul_sub(&a[i].1, &f, &b[j].1).ok_or(Overflow)?;
                    if !v.is_zero() {
                        scratch.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            rows[oi].clear();
            rows[oi].append(&mut scratch);
            if !rows[oi].is_empty() {
                heap.push(Reverse((rows[oi].len(), o)));
            }
        }
        col_dead[pc as usize] = true;
        rank += 1;
    }

    // Dense Smith form of what is left.
    let live_rows: Vec<usize> = (0..nrows).filter(|&i| !row_dead[i] && !rows[i].is_empty()).collect();
    if live_rows.is_empty() {
        return Ok(SmithInfo { rank, torsion: Vec::new() });
    }
    let mut live_cols: Vec<u32> = live_rows.iter().flat_map(|&i| rows[i].iter().map(|x| x.0)).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    debug_assert!(live_cols.iter().all(|&c| !col_dead[c as usize]));
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (a, &i) in live_rows.iter().enumerate() {
        for (c, v) in &rows[i] {
            let b = live_cols.binary_search(c).unwrap();
            dense[a][b] = v.to_big();
        }
    }
    let divisors = snf_dense(&mut dense, live_cols.len());
    rank += divisors.len();
    let torsion = divisors.into_iter().filter(|d| !d.is_one()).collect();
    Ok(SmithInfo { rank, torsion })
}
