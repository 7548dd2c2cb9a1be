//! Dense matrices over a [`FieldSpec`] and the elimination routines built on
//! them: rank, reduced row echelon form, kernels, linear solves and
//! coordinate subspaces.

use std::fmt;

use super::field::{Elem, FieldSpec};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Reduced row echelon form: the nonzero rows and their pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

/// Output of [`solve_linear`]: one particular solution and a nullspace basis.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    /// `cols(a) x cols(b)`.
    pub particular: Matrix,
    /// Nullspace basis, one vector per row.
    pub kernel: Matrix,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(field: &FieldSpec, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_data(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::Malformed(format!("{bad} is not an element of {field}")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Rows given as integers, reduced into the prime subfield.
    pub fn from_rows_i64(field: &FieldSpec, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Jordan block of size `n` acting as the shift `e_i -> e_{i+1}`
    /// (ones on the subdiagonal).
    pub fn jordan_block(field: &FieldSpec, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| u32::from(i == j + 1))
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.describe(), other.field.describe()));
        }
        Ok(())
    }

    /// Product; zero entries of `self` are skipped, so sparse left factors are cheap.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        debug_assert!(self.field == other.field);
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        let n = other.cols;
        let f = &self.field;
        par::for_each_row(&mut out.data, n, |i, out_row| {
            let a_row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (k, &a) in a_row.iter().enumerate() {
                if a != 0 {
                    f.axpy(out_row, &other.data[k * n..(k + 1) * n], a);
                }
            }
        });
        out
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            self.field.axpy(&mut out, self.row(i), c);
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Kronecker product `self ⊗ other` with row index `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = &self.field;
        let (r2, c2) = (other.rows, other.cols);
        Matrix::from_fn(f, self.rows * r2, self.cols * c2, |i, j| {
            f.mul(self.get(i / r2, j / c2), other.get(i % r2, j % c2))
        })
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Block diagonal sum.
    pub fn direct_sum(field: &FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                out.row_mut(r0 + i)[c0..c0 + b.cols].copy_from_slice(b.row(i));
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(field: &FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn hstack(field: &FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                out.row_mut(i)[c0..c0 + b.cols].copy_from_slice(b.row(i));
            }
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { field: self.field.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Re-reads the entries in `target`; only prime-field matrices may move
    /// into an extension of the same characteristic.
    pub fn base_change(&self, target: &FieldSpec) -> Result<Matrix> {
        if !self.field.embeds_into(target) {
            return Err(Error::FieldMismatch(self.field.describe(), target.describe()));
        }
        Ok(Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data: self.data.clone() })
    }

    /// Reduced row echelon form (full reduction above and below pivots).
    /// Pivots are chosen as the first nonzero entry in column order.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Rref { rows: m, pivots }
    }

    /// Nonzero rows of a row echelon form (not reduced above the pivots).
    pub fn row_echelon(&self) -> Matrix {
        let mut m = self.clone();
        let rank = m.eliminate(false).len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// In-place Gaussian elimination. Returns pivot columns; the first
    /// `pivots.len()` rows are then the echelon rows (normalized to 1).
    fn eliminate(&mut self, reduce_above: bool) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            f.scale_slice(&mut self.data[r * cols + c..(r + 1) * cols], inv);
            let pivot_row: Vec<Elem> = self.data[r * cols..(r + 1) * cols].to_vec();
            let start = if reduce_above { 0 } else { r + 1 };
            let tail = &mut self.data[start * cols..];
            par::for_each_row(tail, cols, |k, row| {
                let i = k + start;
                if i == r {
                    return;
                }
                let v = row[c];
                if v != 0 {
                    f.axpy(&mut row[c..], &pivot_row[c..], f.neg(v));
                }
            });
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of `{v : self * v = 0}` with identity entries at the free columns.
    pub fn kernel(&self) -> Subspace {
        let rref = self.rref();
        Subspace::kernel_from_rref(&rref, self.cols)
    }

    /// Column space as a coordinate subspace of `k^rows`.
    pub fn column_space(&self) -> Subspace {
        Subspace::span(&self.transpose())
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Matrix::hstack(&self.field, &[self, &Matrix::identity(&self.field, n)]);
        let rref = aug.rref();
        if rref.pivots.len() < n || rref.pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(rref.rows.select_cols(&idx))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Solves `a x = b`. Returns one particular solution and a basis of the
/// nullspace of `a`, or [`Error::Inconsistent`] when some column of `b` is
/// not in the column space of `a`. Pivots are the first nonzero entry in
/// column order, so the output is deterministic.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<LinearSolution> {
    a.check_same_field(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!("{} rows vs {} rows", a.rows, b.rows)));
    }
    let f = a.field.clone();
    let n = a.cols;
    let aug = Matrix::hstack(&f, &[a, b]);
    let rref = aug.rref();
    if rref.pivots.iter().any(|&c| c >= n) {
        return Err(Error::Inconsistent);
    }
    let mut particular = Matrix::zeros(&f, n, b.cols);
    for (i, &pc) in rref.pivots.iter().enumerate() {
        for j in 0..b.cols {
            particular.set(pc, j, rref.rows.get(i, n + j));
        }
    }
    let left: Vec<usize> = (0..n).collect();
    let a_rref = Rref { rows: rref.rows.select_cols(&left), pivots: rref.pivots.clone() };
    let kernel = Subspace::kernel_from_rref(&a_rref, n).basis;
    Ok(LinearSolution { particular, kernel })
}

/// A subspace of `k^n` stored as basis rows `b_0..b_{k-1}` together with
/// coordinate positions such that `b_i[positions[j]] = δ_ij`. Coordinates of a
/// vector known to lie in the subspace are read off at those positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Matrix,
    pub positions: Vec<usize>,
}

impl Subspace {
    /// Row span of `vectors`.
    pub fn span(vectors: &Matrix) -> Subspace {
        let rref = vectors.rref();
        Subspace { basis: rref.rows, positions: rref.pivots }
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, n), positions: Vec::new() }
    }

    fn kernel_from_rref(rref: &Rref, n: usize) -> Subspace {
        let f = rref.rows.field().clone();
        let mut is_pivot = vec![false; n];
        for &c in &rref.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Matrix::zeros(&f, free.len(), n);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(k, fc, 1);
            for (i, &pc) in rref.pivots.iter().enumerate() {
                let v = rref.rows.get(i, fc);
                if v != 0 {
                    basis.set(k, pc, f.neg(v));
                }
            }
        }
        Subspace { basis, positions: free }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    /// Coordinates of a vector assumed to lie in the subspace.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        self.positions.iter().map(|&p| v[p]).collect()
    }

    /// Vector minus its reading in the subspace; zero iff `v` lies in it.
    pub fn residual(&self, v: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut r = v.to_vec();
        for (i, &p) in self.positions.iter().enumerate() {
            let c = v[p];
            if c != 0 {
                f.axpy(&mut r, self.basis.row(i), f.neg(c));
            }
        }
        r
    }

    /// Reduction modulo the subspace. Only valid for spans (echelon bases),
    /// where it zeroes the pivot positions.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut r = v.to_vec();
        for (i, &p) in self.positions.iter().enumerate() {
            let c = r[p];
            if c != 0 {
                f.axpy(&mut r, self.basis.row(i), f.neg(c));
            }
        }
        r
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.residual(v).iter().all(|&x| x == 0)
    }

    /// Basis vectors as the columns of an `n x k` matrix.
    pub fn inclusion(&self) -> Matrix {
        self.basis.transpose()
    }

    /// Matrix of an endomorphism `a` of the ambient space restricted to this
    /// (assumed invariant) subspace.
    pub fn restrict(&self, a: &Matrix) -> Matrix {
        let image = a.mul(&self.inclusion());
        image.select_rows(&self.positions)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
