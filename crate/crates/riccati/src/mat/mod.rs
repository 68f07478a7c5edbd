//! Dense complex matrices and the numerical kernels built on them: SVD,
//! pseudoinverse, null-space projectors and a Hermitian eigensolver.
//!
//! Real matrices are carried as complex matrices with zero imaginary parts.
//! Everything is immutable after construction and safe to share across
//! threads.

mod eig;
mod pinv;
mod svd;

pub use eig::{hermitian_eig, HermitianEig};
pub use pinv::{null_projector, penrose_check, pinv, NullSide, PenroseFlags};
pub use svd::{svd, SvdFactorization, TolerancePolicy};

use num_complex::Complex64;

use crate::error::{shape_mismatch, Error, Result};

/// Largest accepted dimension; this crate targets desk-scale experiments.
pub const MAX_DIM: usize = 2048;

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// oversized shapes and nonfinite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                rows,
                cols,
                max: MAX_DIM,
            });
        }
        if data.len() != rows * cols {
            return Err(shape_mismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Row-major construction from nested slices of real values.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(shape_mismatch("ragged rows".to_string()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_real(m, n, &flat)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Infallible constructors panic on zero dimensions instead of
    /// returning a `Result`; the 2048 guard applies to validated input
    /// constructors only (internal block matrices may exceed it).
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "empty matrix");
        let mut out = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            out.data[i * n + i] = Complex64::new(v, 0.0);
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    /// Entry assignment; useful while assembling a matrix that is then
    /// shared immutably.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product shapes {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = k * rhs.cols;
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[row + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Matrix {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// True when every imaginary magnitude is at most `tol`.
    pub fn is_real_within(&self, tol: f64) -> bool {
        self.max_abs_imag() <= tol
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        self.rows == self.cols && self.sub(&self.conj_transpose()).norm_fro() <= tol
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Copies rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 < r1 && r1 <= self.rows && c0 < c1 && c1 <= self.cols);
        let mut out = Matrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.data[(i - r0) * out.cols + (j - c0)] = self.get(i, j);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Copies `block` into position with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Gauss-Jordan inverse with partial pivoting. Square input only.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(shape_mismatch(format!(
                "inverse of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|i| (i, work.get(i, col).norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if pivot_abs == 0.0 {
                return Err(Error::Singular);
            }
            if pivot_row != col {
                for j in 0..n {
                    let t = work.get(col, j);
                    work.set(col, j, work.get(pivot_row, j));
                    work.set(pivot_row, j, t);
                    let t = inv.get(col, j);
                    inv.set(col, j, inv.get(pivot_row, j));
                    inv.set(pivot_row, j, t);
                }
            }
            let pivot = work.get(col, col);
            for j in 0..n {
                work.set(col, j, work.get(col, j) / pivot);
                inv.set(col, j, inv.get(col, j) / pivot);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = work.get(i, col);
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let w = work.get(i, j) - factor * work.get(col, j);
                    work.set(i, j, w);
                    let v = inv.get(i, j) - factor * inv.get(col, j);
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        out
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                if z.im == 0.0 {
                    write!(f, "{:>12.6} ", z.re)?;
                } else {
                    write!(f, "{:>12.6}{:+.6}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs)
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::add(self, rhs)
    }
}

impl std::ops::Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs)
    }
}

/// `(1 + ||F_1||_F) (1 + ||F_2||_F) ...` over the factors of an identity;
/// the shared relative scale used by every residual check in this crate.
pub fn product_scale(factors: &[&Matrix]) -> f64 {
    factors.iter().map(|m| 1.0 + m.norm_fro()).product()
}
