//! Hermitian eigendecomposition by classical cyclic Jacobi rotations,
//! reusing the plane-rotation kernel of the one-sided SVD.

use num_complex::Complex64;

use super::svd::{dominant_phase, hermitian_rotation, rotate_columns};
use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// `A = U diag(lambda) U*` with real eigenvalues sorted by descending
/// absolute value, ties broken by sign descending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    u: Matrix,
    lambda: Vec<f64>,
}

impl HermitianEig {
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.u * &Matrix::diag_real(&self.lambda)) * &self.u.conj_transpose()
    }

    pub fn min_abs_lambda(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_lambda(&self) -> f64 {
        self.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy `||A - A*||_F <= 1e-8 (1 + ||A||_F)`; it is then
/// symmetrized before the sweeps so roundoff asymmetry cannot leak into the
/// eigenvectors.
pub fn hermitian_eig(a: &Matrix) -> Result<HermitianEig> {
    if !a.is_square() || !a.is_hermitian_within(1e-8 * (1.0 + a.norm_fro())) {
        return Err(Error::HermitianRequired);
    }
    let n = a.rows();
    let mut work = a.add(&a.conj_transpose()).scale_real(0.5);
    let mut u = Matrix::identity(n);
    let off_tol = f64::EPSILON * work.norm_fro().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let gamma = work.get(p, q);
                if gamma.norm() <= off_tol {
                    continue;
                }
                let alpha = work.get(p, p).re;
                let beta = work.get(q, q).re;
                let (c, s, phase) = hermitian_rotation(alpha, beta, gamma);
                apply_similarity(&mut work, p, q, c, s, phase);
                rotate_columns(&mut u, p, q, c, s, phase);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut lambda: Vec<f64> = (0..n).map(|i| work.get(i, i).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Descending |lambda|; ties resolved with the positive value first.
    order.sort_by(|&i, &j| {
        lambda[j]
            .abs()
            .total_cmp(&lambda[i].abs())
            .then(lambda[j].total_cmp(&lambda[i]))
            .then(i.cmp(&j))
    });
    let mut u_sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            u_sorted.set(i, dst, u.get(i, src));
        }
    }
    lambda = order.iter().map(|&i| lambda[i]).collect();

    for j in 0..n {
        let phase = dominant_phase(&u_sorted, j);
        for i in 0..n {
            let z = u_sorted.get(i, j);
            u_sorted.set(i, j, z * phase);
        }
    }

    Ok(HermitianEig {
        u: u_sorted,
        lambda,
    })
}

/// `A <- J* A J` touching only rows/columns `p` and `q`.
fn apply_similarity(a: &mut Matrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let n = a.rows();
    // Right multiplication on columns.
    for i in 0..n {
        let x = a.get(i, p);
        let y = a.get(i, q) * phase;
        a.set(i, p, x * c + y * s);
        a.set(i, q, y * c - x * s);
    }
    // Left multiplication by J* on rows.
    let phase_c = phase.conj();
    for j in 0..n {
        let x = a.get(p, j);
        let y = a.get(q, j) * phase_c;
        a.set(p, j, x * c + y * s);
        a.set(q, j, y * c - x * s);
    }
    // The pivot is annihilated by construction; pin it to keep the
    // off-diagonal norm monotone.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let dpp = a.get(p, p);
    let dqq = a.get(q, q);
    a.set(p, p, Complex64::new(dpp.re, 0.0));
    a.set(q, q, Complex64::new(dqq.re, 0.0));
}
