//! Dense exact linear algebra over a prime field F_p.
//!
//! Matrices carry their modulus. Every elimination pivots on the first
//! nonzero entry scanning columns left to right, so results are
//! reproducible bit for bit.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("columns of the subspace generator are linearly dependent")]
    DependentColumns,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    Singular,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "zero has no inverse mod {p}");
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Row-major dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}(mod {})[", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Affine solution set of `A X = B`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Matrix,
    /// Columns span ker A.
    pub kernel: Matrix,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        Matrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], p: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = reduce_i64(v, p);
            }
        }
        m
    }

    /// Explicit shape for possibly empty matrices.
    pub fn from_flat(rows: usize, cols: usize, p: u32, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, p, data: data.into_iter().map(|v| v % p).collect() }
    }

    /// Column vector.
    pub fn column(v: &[u32], p: u32) -> Self {
        Self::from_flat(v.len(), 1, p, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u32))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.rows, other.cols, self.p);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                    if *slot >= (1u64 << 62) {
                        *slot %= p;
                    }
                }
            }
            for (j, a) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = (a % p) as u32;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| neg_mod(a, self.p)).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let data = self.data.iter().map(|&a| mul_mod(a, s, self.p)).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows, self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(self.rows, cols, self.p);
        for r in 0..self.rows {
            out.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            out.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, p: self.p, data }
    }

    pub fn hcat(parts: &[Matrix], rows: usize, p: u32) -> Matrix {
        parts.iter().fold(Matrix::zeros(rows, 0, p), |acc, m| acc.hstack(m))
    }

    pub fn vcat(parts: &[Matrix], cols: usize, p: u32) -> Matrix {
        parts.iter().fold(Matrix::zeros(0, cols, p), |acc, m| acc.vstack(m))
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols, self.p);
        out.put(0, 0, self);
        out.put(self.rows, self.cols, other);
        out
    }

    pub fn block_diag_all(parts: &[Matrix], p: u32) -> Matrix {
        parts.iter().fold(Matrix::zeros(0, 0, p), |acc, m| acc.block_diag(m))
    }

    /// Write `block` with its top-left corner at (r0, c0).
    pub fn put(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "put out of range");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols, self.p);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len(), self.p);
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(idx.len(), self.cols, self.p);
        for (i, &r) in idx.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    /// Entries flattened row-major into a single column.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| m.get(r, c) != 0) else { continue };
            if r != prow {
                for j in 0..m.cols {
                    m.data.swap(r * m.cols + j, prow * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(prow, c), p);
            for j in c..m.cols {
                let v = m.get(prow, j);
                m.data[prow * m.cols + j] = mul_mod(v, inv, p);
            }
            for r2 in 0..m.rows {
                if r2 == prow {
                    continue;
                }
                let f = m.get(r2, c);
                if f == 0 {
                    continue;
                }
                let nf = neg_mod(f, p) as u64;
                for j in c..m.cols {
                    let pv = m.data[prow * m.cols + j];
                    if pv == 0 {
                        continue;
                    }
                    let idx = r2 * m.cols + j;
                    m.data[idx] = ((m.data[idx] as u64 + nf * pv as u64) % p as u64) as u32;
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns spanning ker M, one per free column, in increasing order.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len(), self.p);
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, neg_mod(r.get(i, f), self.p));
            }
        }
        k
    }

    /// The pivot columns of M: a basis of its column space.
    pub fn image_basis(&self) -> Matrix {
        let piv = self.rref().pivots;
        self.select_cols(&piv)
    }

    pub fn solve_all(&self, b: &Matrix) -> Result<Solution, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::DimensionMismatch(format!("A has {} rows, B has {}", self.rows, b.rows)));
        }
        let aug = self.hstack(b);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = Matrix::zeros(self.cols, b.cols, self.p);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Ok(Solution { particular: x, kernel: self.kernel_basis() })
    }

    /// Some X with A X = B.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix, LinalgError> {
        self.solve_all(b).map(|s| s.particular)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let Rref { matrix: r, pivots } = self.hstack(&Matrix::identity(n, self.p)).rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(LinalgError::Singular);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    /// L with L M = I, for M with independent columns.
    pub fn left_inverse(&self) -> Result<Matrix, LinalgError> {
        let t = self.transpose();
        let z = t.solve(&Matrix::identity(self.cols, self.p)).map_err(|_| LinalgError::DependentColumns)?;
        Ok(z.transpose())
    }

    /// R with M R = I, for M with independent rows.
    pub fn right_inverse(&self) -> Result<Matrix, LinalgError> {
        self.solve(&Matrix::identity(self.rows, self.p)).map_err(|_| LinalgError::Singular)
    }

    pub fn has_full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Columns are the row-major flattenings of `mats`, each of length `len`.
pub fn flat_columns(mats: &[Matrix], len: usize, p: u32) -> Matrix {
    let mut out = Matrix::zeros(len, mats.len(), p);
    for (j, m) in mats.iter().enumerate() {
        assert_eq!(m.rows * m.cols, len, "flat_columns length");
        for (i, &v) in m.data.iter().enumerate() {
            out.data[i * mats.len() + j] = v;
        }
    }
    out
}

/// Dimension of the span of `mats` (all of one shape).
pub fn span_rank(mats: &[Matrix]) -> usize {
    match mats.first() {
        None => 0,
        Some(m0) => flat_columns(mats, m0.rows * m0.cols, m0.p).rank(),
    }
}

/// Indices of a maximal independent subfamily, chosen greedily in order.
pub fn independent_indices(mats: &[Matrix]) -> Vec<usize> {
    match mats.first() {
        None => vec![],
        Some(m0) => flat_columns(mats, m0.rows * m0.cols, m0.p).rref().pivots,
    }
}

/// An element of F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalar {
    value: u32,
    p: u32,
}

impl Scalar {
    pub fn new(v: i64, p: u32) -> Self {
        Scalar { value: reduce_i64(v, p), p }
    }
    pub fn value(self) -> u32 {
        self.value
    }
    pub fn p(self) -> u32 {
        self.p
    }
    pub fn inv(self) -> Self {
        Scalar { value: inv_mod(self.value, self.p), p: self.p }
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar { value: add_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar { value: sub_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar { value: mul_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { value: neg_mod(self.value, self.p), p: self.p }
    }
}

/// Coset representatives completing the columns of `sub` to a basis of F_p^ambient.
/// Returned as the chosen standard basis vectors, in increasing index order.
pub fn quotient_basis(sub: &Matrix, ambient: usize) -> Result<Matrix, LinalgError> {
    if sub.rows() != ambient {
        return Err(LinalgError::DimensionMismatch(format!("sub has {} rows, ambient {}", sub.rows(), ambient)));
    }
    let k = sub.cols();
    let Rref { pivots, .. } = sub.hstack(&Matrix::identity(ambient, sub.p())).rref();
    if pivots.iter().take_while(|&&c| c < k).count() < k {
        return Err(LinalgError::DependentColumns);
    }
    let chosen: Vec<usize> = pivots.iter().filter(|&&c| c >= k).map(|&c| c - k).collect();
    Ok(Matrix::identity(ambient, sub.p()).select_cols(&chosen))
}

/// Columns of `extra` (pivot order) completing the column space of `base` to that of [base | extra].
pub fn complete_within(base: &Matrix, extra: &Matrix) -> Matrix {
    let k = base.cols();
    let piv = base.hstack(extra).rref().pivots;
    let chosen: Vec<usize> = piv.iter().filter(|&&c| c >= k).map(|&c| c - k).collect();
    extra.select_cols(&chosen)
}

/// Whether every column of `v` lies in the column span of `span`.
pub fn in_span(span: &Matrix, v: &Matrix) -> bool {
    span.solve(v).is_ok()
}
