//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here works on [`IntMatrix`], a dense row-major matrix of
//! [`BigInt`]. The central routine is [`snf`], which diagonalizes a matrix
//! with unimodular transforms `U * A * V = D` and keeps both transforms and
//! their inverses, since quotient-group coordinates and lattice membership
//! are read directly off them.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self { rows: nrows, cols: ncols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_unimodular(&self) -> bool {
        determinant(self).map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = s * q;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = s * q;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -x;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = -x;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * A * V = D` together with `U^-1` and `V^-1`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// The `min(rows, cols)` diagonal entries of `d`, nonnegative, each
    /// dividing the next. Zeros (rank deficiency) come last.
    pub divisors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Computes the Smith normal form with unimodular witnesses.
///
/// Pivoting always picks a nonzero entry of minimal absolute value in the
/// remaining block, which keeps intermediate growth modest for the banded
/// matrices this crate produces.
pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Every row operation on `d` is mirrored on `u`, and its inverse as a
    // column operation on `u_inv`; symmetrically for columns.
    let row_swap = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i: usize, j: usize| {
        d.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    let col_swap = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i: usize, j: usize| {
        d.swap_cols(i, j);
        v.swap_cols(i, j);
        vi.swap_rows(i, j);
    };
    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        d.add_row_multiple(dst, src, q);
        u.add_row_multiple(dst, src, q);
        ui.add_col_multiple(src, dst, &-q);
    };
    let col_add = |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        d.add_col_multiple(dst, src, q);
        v.add_col_multiple(dst, src, q);
        vi.add_row_multiple(src, dst, &-q);
    };

    for t in 0..r.min(c) {
        loop {
            // Minimal nonzero pivot in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            row_swap(&mut d, &mut u, &mut u_inv, t, pi);
            col_swap(&mut d, &mut v, &mut v_inv, t, pj);

            let pivot = d[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&pivot);
                row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&pivot);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &-q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column cleared; enforce divisibility of the remainder.
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    let divisors = (0..r.min(c)).map(|i| d[(i, i)].clone()).collect();
    Ok(SnfResult { u, u_inv, d, v, v_inv, divisors })
}

/// The bidiagonal matrix with `a^k` in the top-left corner, `a` on the rest
/// of the diagonal and `b` on the subdiagonal.
pub fn bidiagonal_matrix(a: &BigInt, b: &BigInt, n: usize, k: u32) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = a.clone();
        if i + 1 < n {
            m[(i + 1, i)] = b.clone();
        }
    }
    if n > 0 {
        m[(0, 0)] = num_traits::pow(a.clone(), k as usize);
    }
    m
}

/// Invariant factors of [`bidiagonal_matrix`] for coprime `a`, `b`:
/// `n - 1` ones followed by `|a|^(n-1+k)`.
pub fn bidiagonal_snf_closed_form(a: &BigInt, b: &BigInt, n: usize, k: u32) -> Result<Vec<BigInt>> {
    if !a.gcd(b).is_one() {
        return Err(Error::NonCoprimeInput { a: a.clone(), b: b.clone() });
    }
    if n == 0 || k == 0 {
        return Err(Error::InvalidParams("n and k must be at least 1".into()));
    }
    let mut out = vec![BigInt::one(); n - 1];
    out.push(num_traits::pow(a.abs(), n - 1 + k as usize));
    Ok(out)
}

/// Finds an integer `x` with `a * x = v`, or `None` when `v` is outside the
/// column lattice of `a`.
pub fn solve_in_lattice(a: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            v.len(),
            a.rows
        )));
    }
    let s = snf(a)?;
    solve_with_snf(&s, a.cols, v).map(|x| {
        x.filter(|x| a.mul_vec(x).map(|ax| ax == v).unwrap_or(false))
    })
}

/// Same as [`solve_in_lattice`] but reusing a precomputed decomposition.
pub(crate) fn solve_with_snf(s: &SnfResult, cols: usize, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let w = s.u.mul_vec(v)?;
    let mut y = vec![BigInt::zero(); cols];
    for (i, wi) in w.iter().enumerate() {
        let di = s.divisors.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !wi.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, rem) = wi.div_rem(&di);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    s.v.mul_vec(&y).map(Some)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = val / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}
