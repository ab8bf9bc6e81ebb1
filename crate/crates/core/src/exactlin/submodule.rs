use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::echelon::{echelon, left_kernel, snf};
use super::matrix::Matrix;
use super::ring::Ring;
use crate::error::{Error, Result};

/// A submodule of `R^n` stored by its canonical basis.
///
/// Two submodules are equal iff their canonical bases are equal, so the
/// derived `Eq`/`Hash` decide submodule equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Submodule {
    /// The submodule generated by the rows of `generators`.
    pub fn canonicalize(generators: &Matrix) -> Submodule {
        let e = echelon(generators, false);
        let r = e.rank();
        let idx: Vec<usize> = (0..r).collect();
        Submodule { basis: e.form.select_rows(&idx), pivots: e.pivots }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(ring: Ring, n: usize, rows: &[Vec<T>]) -> Submodule {
        Submodule::canonicalize(&Matrix::from_rows(ring, n, rows))
    }

    pub fn zero(ring: Ring, n: usize) -> Submodule {
        Submodule { basis: Matrix::zeros(ring, 0, n), pivots: Vec::new() }
    }

    pub fn ambient(ring: Ring, n: usize) -> Submodule {
        Submodule { basis: Matrix::identity(ring, n), pivots: (0..n).collect() }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(ring: Ring, n: usize, coords: &[usize]) -> Submodule {
        let rows: Vec<Vec<i64>> = coords
            .iter()
            .map(|&c| (0..n).map(|j| i64::from(j == c)).collect())
            .collect();
        Submodule::from_rows(ring, n, &rows)
    }

    pub fn ring(&self) -> Ring {
        self.basis.ring()
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_ambient(&self) -> bool {
        self.rank() == self.ambient_rank() && self.basis == Matrix::identity(self.ring(), self.ambient_rank())
    }

    fn check_compatible(&self, other: &Submodule) -> Result<()> {
        if self.ring() != other.ring() || self.ambient_rank() != other.ambient_rank() {
            return Err(Error::AmbientMismatch(format!(
                "{} {} vs {} {}",
                self.ring(),
                self.ambient_rank(),
                other.ring(),
                other.ambient_rank()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        Ok(Submodule::canonicalize(&self.basis.vstack(&other.basis)))
    }

    /// Exact intersection via the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Submodule::zero(self.ring(), self.ambient_rank()));
        }
        let stacked = self.basis.vstack(&other.basis);
        let k = left_kernel(&stacked);
        let r = self.rank();
        let mut rows = Vec::with_capacity(k.rows());
        for i in 0..k.rows() {
            rows.push(k.row(i)[..r].to_vec());
        }
        let x = Matrix::from_bigint_rows(self.ring(), r, rows);
        if x.rows() == 0 {
            return Ok(Submodule::zero(self.ring(), self.ambient_rank()));
        }
        Ok(Submodule::canonicalize(&x.mul(&self.basis)))
    }

    /// Coefficients of `v` in the canonical basis, or `None` if `v` is not a
    /// member.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank());
        let ring = self.ring();
        let mut v: Vec<BigInt> = v.iter().map(|x| ring.reduce(x)).collect();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (i, &c) in self.pivots.iter().enumerate() {
            let piv = self.basis.get(i, c);
            let q = match ring {
                Ring::Integers => {
                    let (q, rem) = v[c].div_rem(piv);
                    if !rem.is_zero() {
                        return None;
                    }
                    q
                }
                Ring::PrimeField(_) => v[c].clone(),
            };
            if !q.is_zero() {
                for (j, x) in v.iter_mut().enumerate().skip(c) {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        *x = ring.reduce(&(&*x - &q * b));
                    }
                }
            }
            coeffs.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Submodule) -> Result<bool> {
        self.check_compatible(other)?;
        if other.rank() > self.rank() {
            return Ok(false);
        }
        Ok((0..other.rank()).all(|i| self.contains_vector(other.basis.row(i))))
    }

    /// Elementary divisors of the basis matrix.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        match self.ring() {
            Ring::Integers => snf(&self.basis),
            Ring::PrimeField(_) => vec![BigInt::one(); self.rank()],
        }
    }

    /// True iff this is a direct summand of the ambient module.
    pub fn is_split(&self) -> bool {
        match self.ring() {
            Ring::PrimeField(_) => true,
            Ring::Integers => self.elementary_divisors().iter().all(One::is_one),
        }
    }

    /// A basis of `R^n` whose first `rank` rows are the canonical basis of
    /// `self`.
    ///
    /// Works from the column Hermite form of the basis: if `V * B^T = [H; 0]`
    /// with `H` unimodular then the trailing columns of `V^{-1}` complete `B`.
    pub fn extend_to_ambient_basis(&self) -> Result<Matrix> {
        let ring = self.ring();
        let n = self.ambient_rank();
        let r = self.rank();
        let e = echelon(&self.basis.transpose(), true);
        let h = &e.form;
        let unimodular = (0..r).all(|i| e.pivots.get(i) == Some(&i) && ring.is_unit(h.get(i, i)));
        if !unimodular {
            return Err(Error::NotSplit);
        }
        let v = e.transform.expect("transform requested");
        let vinv = inverse_unimodular(&v);
        let mut rows = self.basis.row_vecs();
        for c in r..n {
            rows.push((0..n).map(|i| vinv.get(i, c).clone()).collect());
        }
        Ok(Matrix::from_bigint_rows(ring, n, rows))
    }

    /// Coordinates of `self` inside `w` as a submodule of `R^{rank w}`.
    pub fn relative_to(&self, w: &Submodule) -> Result<Submodule> {
        self.check_compatible(w)?;
        let mut rows = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let c = w.coordinates(self.basis.row(i)).ok_or_else(|| {
                Error::AmbientMismatch("submodule is not contained in the reference module".into())
            })?;
            rows.push(c);
        }
        if rows.is_empty() {
            return Ok(Submodule::zero(self.ring(), w.rank()));
        }
        Ok(Submodule::canonicalize(&Matrix::from_bigint_rows(self.ring(), w.rank(), rows)))
    }

    /// Image under the linear map sending row vector `v` to `v * m`.
    pub fn image(&self, m: &Matrix) -> Submodule {
        if self.is_zero() {
            return Submodule::zero(self.ring(), m.cols());
        }
        Submodule::canonicalize(&self.basis.mul(m))
    }

    /// Line-oriented text form: `ring n rank` then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.ring(), self.ambient_rank(), self.rank());
        for i in 0..self.rank() {
            let row: Vec<String> = self.basis.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Compact one-line label, used for vertex labels.
    pub fn label(&self) -> String {
        let rows: Vec<String> = (0..self.rank())
            .map(|i| self.basis.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("<{}>", rows.join(";"))
    }

    pub fn from_text(text: &str) -> Result<Submodule> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let subs = parse_blocks(&mut lines, 1)?;
        subs.into_iter().next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })
    }

    /// Parses consecutive submodule blocks; blank lines are ignored.
    pub fn parse_many(text: &str) -> Result<Vec<Submodule>> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        parse_blocks(&mut lines, usize::MAX)
    }
}

fn parse_blocks<'a, I>(lines: &mut I, max: usize) -> Result<Vec<Submodule>>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut out = Vec::new();
    while out.len() < max {
        let Some((ln, header)) = lines.next() else { break };
        let perr = |msg: String| Error::Parse { line: ln + 1, msg };
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(perr(format!("expected `ring n rank`, got {header:?}")));
        }
        let ring: Ring = parts[0].parse().map_err(|e: Error| perr(e.to_string()))?;
        let n: usize = parts[1].parse().map_err(|_| perr("bad ambient rank".into()))?;
        let k: usize = parts[2].parse().map_err(|_| perr("bad rank".into()))?;
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, line) = lines.next().ok_or_else(|| perr("missing basis row".into()))?;
            let row: std::result::Result<Vec<BigInt>, _> = line.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|_| Error::Parse { line: ln + 1, msg: "bad integer".into() })?;
            if row.len() != n {
                return Err(Error::Parse { line: ln + 1, msg: format!("expected {n} entries") });
            }
            rows.push(row);
        }
        let m = Matrix::from_bigint_rows(ring, n, rows);
        let s = if k == 0 { Submodule::zero(ring, n) } else { Submodule::canonicalize(&m) };
        if s.rank() != k {
            return Err(perr("rows are linearly dependent".into()));
        }
        out.push(s);
    }
    Ok(out)
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &Matrix) -> Matrix {
    let e = echelon(m, true);
    assert!(e.form == Matrix::identity(m.ring(), m.rows()), "matrix is not invertible");
    e.transform.expect("transform requested")
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the flattened canonical basis.
impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring()
            .cmp(&other.ring())
            .then(self.ambient_rank().cmp(&other.ambient_rank()))
            .then_with(|| {
                let a = (0..self.rank()).flat_map(|i| self.basis.row(i).iter());
                let b = (0..other.rank()).flat_map(|i| other.basis.row(i).iter());
                a.cmp(b)
            })
    }
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ring(), self.label())
    }
}
