use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::Ring;

/// Dense exact matrix over a [`Ring`], stored row-major.
///
/// Entries over `F_p` are always kept in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of arbitrary integers, reducing into the ring.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(ring: Ring, cols: usize, rows: &[Vec<T>]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(|x| ring.reduce(&x.into())));
        }
        Matrix { ring, rows: rows.len(), cols, data }
    }

    pub fn from_bigint_rows(ring: Ring, cols: usize, rows: Vec<Vec<BigInt>>) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.into_iter().map(|x| ring.reduce(&x)));
        }
        Matrix { ring, rows: data.len() / cols.max(1), cols, data }
            .fix_rows_for_zero_width()
    }

    fn fix_rows_for_zero_width(mut self) -> Matrix {
        if self.cols == 0 {
            self.rows = 0;
        }
        self
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        let v = self.ring.reduce(&v);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { ring: self.ring, rows: idx.len(), cols: self.cols, data }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.ring, other.ring);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        for x in out.data.iter_mut() {
            *x = self.ring.reduce(x);
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * self.get(i, j);
            }
        }
        out.iter().map(|x| self.ring.reduce(x)).collect()
    }

    /// Determinant of a square matrix (Bareiss over the integers, Gauss over
    /// a prime field).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        match self.ring {
            Ring::Integers => {
                let mut prev = BigInt::one();
                for k in 0..n - 1 {
                    if a[k][k].is_zero() {
                        let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                            return BigInt::zero();
                        };
                        a.swap(k, swap);
                        sign = -sign;
                    }
                    for i in k + 1..n {
                        for j in k + 1..n {
                            let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                            a[i][j] = v / &prev;
                        }
                    }
                    prev = a[k][k].clone();
                }
                sign * a[n - 1][n - 1].clone()
            }
            Ring::PrimeField(_) => {
                let ring = self.ring;
                let mut det = BigInt::one();
                for k in 0..n {
                    let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                        return BigInt::zero();
                    };
                    if piv != k {
                        a.swap(piv, k);
                        sign = -sign;
                    }
                    det = ring.reduce(&(det * &a[k][k]));
                    let inv = ring.inverse(&a[k][k]).expect("nonzero in a field");
                    for i in k + 1..n {
                        if a[i][k].is_zero() {
                            continue;
                        }
                        let f = ring.reduce(&(&a[i][k] * &inv));
                        for j in k..n {
                            let v = &a[i][j] - &f * &a[k][j];
                            a[i][j] = ring.reduce(&v);
                        }
                    }
                }
                ring.reduce(&(sign * det))
            }
        }
    }

    /// True when the determinant is a unit of the ring.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.ring.is_unit(&self.determinant())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c].clone();
            if s.is_zero() {
                continue;
            }
            let idx = dst * self.cols + c;
            let v = &self.data[idx] + factor * s;
            self.data[idx] = self.ring.reduce(&v);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            let v = &self.data[idx] * factor;
            self.data[idx] = self.ring.reduce(&v);
        }
    }

    /// Replaces rows (i, j) by (a*ri + b*rj, c*ri + d*rj).
    pub(crate) fn combine_rows(&mut self, i: usize, j: usize, coeffs: [&BigInt; 4]) {
        let [a, b, c, d] = coeffs;
        for col in 0..self.cols {
            let x = self.data[i * self.cols + col].clone();
            let y = self.data[j * self.cols + col].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let nx = a * &x + b * &y;
            let ny = c * &x + d * &y;
            self.data[i * self.cols + col] = self.ring.reduce(&nx);
            self.data[j * self.cols + col] = self.ring.reduce(&ny);
        }
    }

    /// Text form: `ring cols rows`, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> crate::error::Result<Matrix> {
        use crate::error::Error;
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let perr = |line: usize, msg: &str| Error::Parse { line: line + 1, msg: msg.to_string() };
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(perr(ln, "expected `ring cols rows`"));
        }
        let ring: Ring = parts[0].parse().map_err(|_| perr(ln, "bad ring"))?;
        let cols: usize = parts[1].parse().map_err(|_| perr(ln, "bad column count"))?;
        let rows: usize = parts[2].parse().map_err(|_| perr(ln, "bad row count"))?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| perr(ln, "missing row"))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let x: BigInt = tok.parse().map_err(|_| perr(ln, "bad integer"))?;
                data.push(ring.reduce(&x));
            }
            if data.len() - before != cols {
                return Err(perr(ln, "wrong row length"));
            }
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}; {}x{}](", self.ring, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_integers() {
        let m = Matrix::from_rows(Ring::Integers, 3, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.determinant(), BigInt::zero());
        let m = Matrix::from_rows(Ring::Integers, 2, &[vec![1, 1], vec![0, 1]]);
        assert!(m.is_unimodular());
        let m = Matrix::from_rows(Ring::Integers, 2, &[vec![1, 1], vec![1, -1]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
    }

    #[test]
    fn determinant_field() {
        let f2 = Ring::PrimeField(2);
        let m = Matrix::from_rows(f2, 2, &[vec![1, 1], vec![1, -1]]);
        assert_eq!(m.determinant(), BigInt::zero());
        let m = Matrix::from_rows(f2, 2, &[vec![1, 1], vec![0, 1]]);
        assert!(m.is_unimodular());
    }

    #[test]
    fn text_round_trip() {
        let m = Matrix::from_rows(Ring::Integers, 3, &[vec![1, -20, 3], vec![0, 0, 123456789012345678i64]]);
        let t = m.to_text();
        assert_eq!(Matrix::from_text(&t).unwrap(), m);
        assert_eq!(Matrix::from_text(&t).unwrap().to_text(), t);
        let e = Matrix::zeros(Ring::PrimeField(5), 0, 4);
        assert_eq!(Matrix::from_text(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn field_entries_reduced() {
        let m = Matrix::from_rows(Ring::PrimeField(3), 2, &[vec![-1, 7]]);
        assert_eq!(m.row(0), &[BigInt::from(2), BigInt::from(1)]);
    }
}
