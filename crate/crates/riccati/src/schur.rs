//! The block embedding `M = [[0, W W* W], [W*, 0]]` whose m-dimensional
//! invariant subspaces (surjective onto the first factor) correspond
//! one-to-one with solutions of `X W W* W X = W*`.
//!
//! `M` is diagonalizable: each singular pair `(u, v)` of `W` contributes the
//! eigenvectors `[u; +-v/sigma]` with eigenvalues `+-sigma^2`, and the
//! kernel is `N(W*) x N(W)`.

use serde::Serialize;

use crate::error::{shape_mismatch, Error, Result};
use crate::mat::{product_scale, Matrix, TolerancePolicy};
use crate::solver::cluster_singular_values;
use crate::DEFAULT_GAP_TOL;

/// `M` together with the dimensions of the matrix it was built from.
#[derive(Clone, Debug)]
pub struct SchurEmbedding {
    m_matrix: Matrix,
    source_dims: (usize, usize),
}

impl SchurEmbedding {
    pub fn matrix(&self) -> &Matrix {
        &self.m_matrix
    }

    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    pub fn dim(&self) -> usize {
        self.source_dims.0 + self.source_dims.1
    }
}

/// Assembles `M` with exactly zero diagonal blocks.
pub fn build_m(w: &Matrix) -> SchurEmbedding {
    let (m, n) = (w.rows(), w.cols());
    let www = &(w * &w.conj_transpose()) * w;
    let mut out = Matrix::zeros(m + n, m + n);
    out.paste(0, m, &www);
    out.paste(m, 0, &w.conj_transpose());
    SchurEmbedding {
        m_matrix: out,
        source_dims: (m, n),
    }
}

/// Residual of one verified eigendirection or kernel vector of `M`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenEntry {
    pub eigenvalue: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Eigenstructure summary: every claimed eigenvector of `M` checked by
/// direct multiplication, plus the per-cluster subspace residuals.
#[derive(Clone, Debug, Serialize)]
pub struct EigenstructureReport {
    /// Expected eigenvalue multiset: `+-sigma_j^2` per positive singular
    /// value and `0` with multiplicity `(m - r) + (n - r)`.
    pub eigenvalues: Vec<f64>,
    pub entries: Vec<EigenEntry>,
    /// `||M B - B (B* M B)||_F` per cluster and sign, with `B` an
    /// orthonormal basis of the claimed eigenspace.
    pub cluster_residuals: Vec<f64>,
    pub kernel_dim_expected: usize,
    pub kernel_dim_verified: usize,
    pub verified_count: usize,
    pub diagonalizable: bool,
}

/// Verifies `M [u; +-v/sigma] = +-sigma^2 [u; +-v/sigma]` for every singular
/// pair, checks that `M` annihilates a basis of `N(W*) x N(W)`, and counts
/// the independent eigenvectors up to `m + n`.
pub fn eigenstructure_report(w: &Matrix, tol: f64) -> EigenstructureReport {
    let (m, n) = (w.rows(), w.cols());
    let embedding = build_m(w);
    let big = embedding.matrix();
    let f = crate::mat::svd(w, TolerancePolicy::Default);
    let r = f.rank();
    let scale = (1.0 + w.norm_fro().powi(3)) * (m + n) as f64;

    let mut eigenvalues = Vec::new();
    let mut entries = Vec::new();
    let mut verified = 0usize;

    for j in 0..r {
        let sigma = f.sigma()[j];
        for sign in [1.0, -1.0] {
            let eigenvalue = sign * sigma * sigma;
            eigenvalues.push(eigenvalue);
            let mut col = Matrix::zeros(m + n, 1);
            for i in 0..m {
                col.set(i, 0, f.u().get(i, j));
            }
            for i in 0..n {
                col.set(m + i, 0, f.v().get(i, j) * (sign / sigma));
            }
            let residual = (big * &col).sub(&col.scale_real(eigenvalue)).norm_fro();
            let pass = residual <= tol * scale * col.norm_fro();
            if pass {
                verified += 1;
            }
            entries.push(EigenEntry {
                eigenvalue,
                residual,
                pass,
            });
        }
    }

    // Kernel: [u_k; 0] for trailing left singular vectors (a basis of
    // N(W*)) and [0; v_k] for trailing right singular vectors (N(W)).
    let kernel_dim_expected = (m - r) + (n - r);
    let mut kernel_verified = 0usize;
    for j in r..m {
        eigenvalues.push(0.0);
        let mut col = Matrix::zeros(m + n, 1);
        for i in 0..m {
            col.set(i, 0, f.u().get(i, j));
        }
        let residual = (big * &col).norm_fro();
        let pass = residual <= tol * scale;
        if pass {
            kernel_verified += 1;
        }
        entries.push(EigenEntry {
            eigenvalue: 0.0,
            residual,
            pass,
        });
    }
    for j in r..n {
        eigenvalues.push(0.0);
        let mut col = Matrix::zeros(m + n, 1);
        for i in 0..n {
            col.set(m + i, 0, f.v().get(i, j));
        }
        let residual = (big * &col).norm_fro();
        let pass = residual <= tol * scale;
        if pass {
            kernel_verified += 1;
        }
        entries.push(EigenEntry {
            eigenvalue: 0.0,
            residual,
            pass,
        });
    }

    // Multiple singular values only pin down the eigenspace, not individual
    // vectors, so each cluster is also validated as a subspace.
    let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);
    let mut cluster_residuals = Vec::new();
    for i in 0..clusters.count() {
        let range = clusters.range(i);
        for sign in [1.0, -1.0] {
            let mut basis = Matrix::zeros(m + n, range.len());
            for (lj, gj) in range.clone().enumerate() {
                let sigma = f.sigma()[gj];
                let inv_norm = 1.0 / (1.0 + 1.0 / (sigma * sigma)).sqrt();
                for p in 0..m {
                    basis.set(p, lj, f.u().get(p, gj) * inv_norm);
                }
                for p in 0..n {
                    basis.set(m + p, lj, f.v().get(p, gj) * ((sign / sigma) * inv_norm));
                }
            }
            let mb = big * &basis;
            let compressed = &basis.conj_transpose() * &mb;
            cluster_residuals.push(mb.sub(&(&basis * &compressed)).norm_fro());
        }
    }

    let verified_count = verified + kernel_verified;
    EigenstructureReport {
        eigenvalues,
        entries,
        cluster_residuals,
        kernel_dim_expected,
        kernel_dim_verified: kernel_verified,
        verified_count,
        diagonalizable: verified_count == m + n,
    }
}

/// Residual of the invariance identity `M [I; X] = [I; X] (W W* W X)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InvariantCheck {
    pub residual: f64,
    pub scale: f64,
    pub pass: bool,
}

/// The embedding route to the equation: the stacked matrix `[I; X]` spans an
/// invariant subspace of `M` exactly when `X` solves `X W W* W X = W*`.
pub fn invariant_embedding_check(w: &Matrix, x: &Matrix, tol: f64) -> Result<InvariantCheck> {
    if x.rows() != w.cols() || x.cols() != w.rows() {
        return Err(shape_mismatch(format!(
            "candidate must be {}x{}, got {}x{}",
            w.cols(),
            w.rows(),
            x.rows(),
            x.cols()
        )));
    }
    let embedding = build_m(w);
    let stacked = Matrix::identity(w.rows()).vstack(x);
    let www = &(w * &w.conj_transpose()) * w;
    let compressed = &www * x;
    let residual = (embedding.matrix() * &stacked)
        .sub(&(&stacked * &compressed))
        .norm_fro();
    let scale = (1.0 + w.norm_fro().powi(3)) * (1.0 + x.norm_fro());
    Ok(InvariantCheck {
        residual,
        scale,
        pass: residual <= tol * scale,
    })
}

/// Reads a solution off a basis `Z` of an m-dimensional `M`-invariant
/// subspace: `X = V2 V1^{-1}` from the top/bottom blocks of `Z`. The result
/// does not depend on the basis choice.
pub fn extract_solution_from_basis(
    embedding: &SchurEmbedding,
    z: &Matrix,
    tol: f64,
) -> Result<Matrix> {
    let (m, n) = embedding.source_dims();
    if z.rows() != m + n || z.cols() != m {
        return Err(shape_mismatch(format!(
            "basis must be {}x{}, got {}x{}",
            m + n,
            m,
            z.rows(),
            z.cols()
        )));
    }
    let big = embedding.matrix();
    let mz = big * z;
    let z_pinv = crate::mat::pinv(z, TolerancePolicy::Default);
    let compressed = &z_pinv * &mz;
    let invariance = mz.sub(&(z * &compressed)).norm_fro();
    if invariance > tol * product_scale(&[big, z]) {
        return Err(Error::NotInvariant);
    }
    let top = z.submatrix(0, m, 0, m);
    let f_top = crate::mat::svd(&top, TolerancePolicy::Default);
    if f_top.rank() < m || f_top.sigma()[m - 1] <= tol {
        return Err(Error::ProjectionNotSurjective);
    }
    let bottom = z.submatrix(m, m + n, 0, m);
    Ok(&bottom * &top.inverse()?)
}
