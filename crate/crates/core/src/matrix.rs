//! Dense linear algebra over a [`Field`]: products, Gauss-Jordan inversion,
//! rank / reduced row echelon form, systematic form, and rejection sampling
//! of non-singular matrices.
//!
//! Matrices are row-major `Vec<Felt>` with explicit dimensions. The sparse
//! matrices used elsewhere (T is sparse by construction) are still stored
//! densely; at the lengths this crate targets (n <= 1024) that is simpler
//! and fast enough.

use crate::gf::{Felt, Field};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense matrix over a finite field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Felt>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Felt>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Felt) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Uniformly random matrix.
    pub fn random<R: rand::Rng>(rows: usize, cols: usize, f: &Field, rng: &mut R) -> Mat {
        Mat {
            rows,
            cols,
            data: (0..rows * cols).map(|_| f.sample(rng)).collect(),
        }
    }

    /// Resample-until-invertible loop; terminates with probability 1.
    pub fn random_nonsingular<R: rand::Rng>(n: usize, f: &Field, rng: &mut R) -> Mat {
        assert!(n >= 1);
        loop {
            let cand = Mat::random(n, n, f, rng);
            if cand.rank(f) == n {
                return cand;
            }
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Felt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Felt) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Felt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Felt]> {
        self.data.chunks_exact(self.cols)
    }

    pub fn col(&self, c: usize) -> Vec<Felt> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().filter(|&&x| x != 0).count()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c) != 0).count()
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn add(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat, f: &Field) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: Felt, f: &Field) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Result<Mat, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for kk in 0..self.cols {
                let a = self.get(i, kk);
                if a == 0 {
                    continue;
                }
                let orow = other.row(kk);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    if b != 0 {
                        *o = f.add(*o, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A * v` with `v` as a column; returns a column of length `rows`.
    pub fn mul_vec(&self, v: &[Felt], f: &Field) -> Result<Vec<Felt>, MatError> {
        if self.cols != v.len() {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} * col[{}]",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self
            .rows_iter()
            .map(|row| dot(row, v, f))
            .collect())
    }

    /// `v * A` with `v` as a row; returns a row of length `cols`.
    pub fn vec_mul(&self, v: &[Felt], f: &Field) -> Result<Vec<Felt>, MatError> {
        if self.rows != v.len() {
            return Err(MatError::DimensionMismatch(format!(
                "row[{}] * {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                if a != 0 {
                    *o = f.add(*o, f.mul(vi, a));
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inversion with the pivot rule fixed to "first nonzero in
    /// column order", so results are reproducible from a seed.
    pub fn invert(&self, f: &Field) -> Result<Mat, MatError> {
        if self.rows != self.cols {
            return Err(MatError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a.get(r, col) != 0)
                .ok_or(MatError::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pinv = f.inv(a.get(col, col)).expect("pivot is nonzero");
            a.scale_row(col, pinv, f);
            inv.scale_row(col, pinv, f);
            for r in 0..n {
                if r != col {
                    let factor = a.get(r, col);
                    if factor != 0 {
                        a.sub_scaled_row(r, col, factor, f);
                        inv.sub_scaled_row(r, col, factor, f);
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(r1 * self.cols + c, r2 * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: Felt, f: &Field) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            if v != 0 {
                self.set(r, c, f.mul(v, s));
            }
        }
    }

    /// row[r] -= s * row[src]
    fn sub_scaled_row(&mut self, r: usize, src: usize, s: Felt, f: &Field) {
        for c in 0..self.cols {
            let v = self.get(src, c);
            if v != 0 {
                let cur = self.get(r, c);
                self.set(r, c, f.sub(cur, f.mul(s, v)));
            }
        }
    }

    /// Reduced row echelon form and the pivot column indices.
    pub fn rref(&self, f: &Field) -> (Mat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..a.cols {
            if next_row >= a.rows {
                break;
            }
            let Some(pivot) = (next_row..a.rows).find(|&r| a.get(r, col) != 0) else {
                continue;
            };
            a.swap_rows(pivot, next_row);
            let pinv = f.inv(a.get(next_row, col)).expect("pivot is nonzero");
            a.scale_row(next_row, pinv, f);
            for r in 0..a.rows {
                if r != next_row {
                    let factor = a.get(r, col);
                    if factor != 0 {
                        a.sub_scaled_row(r, next_row, factor, f);
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// A basis (as rows) of the right kernel `{ x : A * x^T = 0 }`.
    pub fn kernel_basis(&self, f: &Field) -> Vec<Vec<Felt>> {
        let (r, pivots) = self.rref(f);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (row_idx, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row_idx, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// For an r x n matrix `H = [H_l | H_r]` with invertible leading r x r
    /// block, returns `(U * H, U)` where `U = H_l^{-1}`, i.e. the systematic
    /// form `[I | H_l^{-1} H_r]` together with the transformation applied.
    pub fn systematic_form(&self, f: &Field) -> Result<(Mat, Mat), MatError> {
        let r = self.rows;
        if self.cols < r {
            return Err(MatError::DimensionMismatch(format!(
                "systematic form needs cols >= rows, got {}x{}",
                self.rows, self.cols
            )));
        }
        let left = Mat::from_fn(r, r, |i, j| self.get(i, j));
        let u = left.invert(f)?;
        let sys = u.mul(self, f)?;
        Ok((sys, u))
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn slice_cols(&self, lo: usize, hi: usize) -> Mat {
        assert!(lo <= hi && hi <= self.cols);
        Mat::from_fn(self.rows, hi - lo, |i, j| self.get(i, lo + j))
    }

    /// `[left | right]` horizontal concatenation.
    pub fn hconcat(&self, right: &Mat) -> Mat {
        assert_eq!(self.rows, right.rows);
        Mat::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                right.get(i, j - self.cols)
            }
        })
    }

    /// `[top; bottom]` vertical concatenation.
    pub fn vconcat(&self, bottom: &Mat) -> Mat {
        assert_eq!(self.cols, bottom.cols);
        Mat::from_fn(self.rows + bottom.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                bottom.get(i - self.rows, j)
            }
        })
    }

    pub fn data(&self) -> &[Felt] {
        &self.data
    }
}

/// Outer product `a^T * b` of two row vectors: a rank <= 1 matrix.
pub fn outer(a: &[Felt], b: &[Felt], f: &Field) -> Mat {
    Mat::from_fn(a.len(), b.len(), |i, j| f.mul(a[i], b[j]))
}

pub fn dot(a: &[Felt], b: &[Felt], f: &Field) -> Felt {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            acc = f.add(acc, f.mul(x, y));
        }
    }
    acc
}

pub fn add_vec(a: &[Felt], b: &[Felt], f: &Field) -> Vec<Felt> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec(a: &[Felt], b: &[Felt], f: &Field) -> Vec<Felt> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale_vec(a: &[Felt], s: Felt, f: &Field) -> Vec<Felt> {
    a.iter().map(|&x| f.mul(x, s)).collect()
}

/// Hamming weight of a vector.
pub fn weight(v: &[Felt]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}
