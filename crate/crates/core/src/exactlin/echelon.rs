use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::Ring;

/// Result of a row reduction `transform * input = form`.
///
/// `form` keeps all input rows; rows `rank..` are zero. `pivots[i]` is the
/// pivot column of row `i`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub form: Matrix,
    pub transform: Option<Matrix>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Canonical row echelon form: RREF over a field, row Hermite normal form
/// over the integers (positive pivots, entries above a pivot in `[0, pivot)`).
pub fn echelon(m: &Matrix, with_transform: bool) -> Echelon {
    match m.ring() {
        Ring::Integers => hermite(m, with_transform),
        Ring::PrimeField(_) => rref(m, with_transform),
    }
}

fn hermite(m: &Matrix, with_transform: bool) -> Echelon {
    let mut a = m.clone();
    let mut t = with_transform.then(|| Matrix::identity(Ring::Integers, m.rows()));
    let mut pivots = Vec::new();
    let rows = a.rows();
    let mut r = 0;
    for col in 0..a.cols() {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a.get(i, col).is_zero() {
                continue;
            }
            let x = a.get(r, col).clone();
            let y = a.get(i, col).clone();
            let e = x.extended_gcd(&y);
            let g = e.gcd;
            let c = -(&y / &g);
            let d = &x / &g;
            a.combine_rows(r, i, [&e.x, &e.y, &c, &d]);
            if let Some(t) = t.as_mut() {
                t.combine_rows(r, i, [&e.x, &e.y, &c, &d]);
            }
        }
        if a.get(r, col).is_zero() {
            continue;
        }
        if a.get(r, col).is_negative() {
            let neg = -BigInt::one();
            a.scale_row(r, &neg);
            if let Some(t) = t.as_mut() {
                t.scale_row(r, &neg);
            }
        }
        let piv = a.get(r, col).clone();
        for i in 0..r {
            let q = a.get(i, col).div_floor(&piv);
            if !q.is_zero() {
                let f = -q;
                a.add_row_multiple(i, r, &f);
                if let Some(t) = t.as_mut() {
                    t.add_row_multiple(i, r, &f);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { form: a, transform: t, pivots }
}

fn rref(m: &Matrix, with_transform: bool) -> Echelon {
    let ring = m.ring();
    let mut a = m.clone();
    let mut t = with_transform.then(|| Matrix::identity(ring, m.rows()));
    let mut pivots = Vec::new();
    let rows = a.rows();
    let mut r = 0;
    for col in 0..a.cols() {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        if let Some(t) = t.as_mut() {
            t.swap_rows(r, p);
        }
        let inv = ring.inverse(a.get(r, col)).expect("nonzero entry of a field");
        a.scale_row(r, &inv);
        if let Some(t) = t.as_mut() {
            t.scale_row(r, &inv);
        }
        for i in 0..rows {
            if i == r || a.get(i, col).is_zero() {
                continue;
            }
            let f = -a.get(i, col).clone();
            a.add_row_multiple(i, r, &f);
            if let Some(t) = t.as_mut() {
                t.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(col);
        r += 1;
    }
    Echelon { form: a, transform: t, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    echelon(m, false).rank()
}

/// Rows spanning the left kernel `{x : x * m = 0}`. Over the integers these
/// form a basis of the kernel lattice.
pub fn left_kernel(m: &Matrix) -> Matrix {
    let e = echelon(m, true);
    let idx: Vec<usize> = (e.rank()..m.rows()).collect();
    let t = e.transform.expect("transform requested");
    t.select_rows(&idx)
}

/// Elementary divisors `d_1 | d_2 | ... | d_r` of an integer matrix, by
/// elimination with a pivot of minimal absolute value.
pub fn snf(m: &Matrix) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.row_vecs();
    snf_dense(&mut a, m.cols())
}

pub(crate) fn snf_dense(a: &mut [Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs(a, t, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remainder in row/column t into the pivot.
                let mut best: Option<(usize, usize)> = None;
                let mut best_abs = a[t][t].abs();
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < best_abs {
                        best_abs = a[i][t].abs();
                        best = Some((i, t));
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < best_abs {
                        best_abs = a[t][j].abs();
                        best = Some((t, j));
                    }
                }
                match best {
                    Some((i, j)) if j == t => a.swap(t, i),
                    Some((_, j)) => {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    None => {}
                }
                continue;
            }
            let piv = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..cols].iter().any(|x| !x.is_zero() && !(x % &piv).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn min_abs(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if x.is_zero() {
                continue;
            }
            let v = x.abs();
            if best.as_ref().is_none_or(|b| v < b.2) {
                let done = v.is_one();
                best = Some((i, j, v));
                if done {
                    return best.map(|b| (b.0, b.1));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}
