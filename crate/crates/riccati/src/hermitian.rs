//! Hermitian solutions for Hermitian invertible `W`: enumeration of the
//! sign family `X = U diag(d_i / lambda_j) U*`, the maximal element in the
//! Loewner order, and the stabilizing-solution test (spectrum of `-W^3 X`).
//!
//! For indefinite `W` the literal maximal element of the enumerated family
//! is `|W|^{-1}`, not `W^{-1}`; the report carries both and raises a
//! convention-discrepancy flag instead of hiding the difference. The
//! stabilizing solution is `W^{-1}` in every case.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{hermitian_eig, HermitianEig, Matrix};
use crate::solver::sign_patterns;
use crate::verify::{riccati_residual, riccati_scale};

/// Eigenvalue clusters over `|lambda|` (the eigensolver already sorts by
/// descending absolute value).
#[derive(Clone, Debug, Serialize)]
pub struct AbsClusters {
    pub multiplicities: Vec<usize>,
    /// Any cluster mixing positive and negative eigenvalues of the same
    /// magnitude; sign enumeration is still performed but uniqueness claims
    /// are not asserted for such matrices.
    pub mixed_signs: bool,
}

impl AbsClusters {
    pub fn count(&self) -> usize {
        self.multiplicities.len()
    }

    fn range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.multiplicities[..i].iter().sum();
        start..start + self.multiplicities[i]
    }
}

fn cluster_by_abs(lambda: &[f64], gap_tol: f64) -> AbsClusters {
    let mut multiplicities: Vec<usize> = Vec::new();
    let mut heads: Vec<f64> = Vec::new();
    for &l in lambda {
        match heads.last() {
            Some(&head) if l.abs() >= head * (1.0 - gap_tol) => {
                *multiplicities.last_mut().unwrap() += 1;
            }
            _ => {
                heads.push(l.abs());
                multiplicities.push(1);
            }
        }
    }
    let mixed_signs = (0..multiplicities.len()).any(|i| {
        let start: usize = multiplicities[..i].iter().sum();
        let range = start..start + multiplicities[i];
        lambda[range.clone()].iter().any(|&l| l > 0.0)
            && lambda[range].iter().any(|&l| l < 0.0)
    });
    AbsClusters {
        multiplicities,
        mixed_signs,
    }
}

/// One enumerated Hermitian sign solution.
#[derive(Clone, Debug)]
pub struct HermitianSignSolution {
    pub signs: Vec<i8>,
    pub matrix: Matrix,
    pub hermitian_defect: f64,
    pub riccati_residual: f64,
    /// Spectrum of `-W^3 X`, read off the decomposition.
    pub spectrum: Vec<f64>,
    pub stabilizing: bool,
}

/// The enumerated Hermitian family with its order structure.
#[derive(Clone, Debug)]
pub struct HermitianSolutionSet {
    pub eig: HermitianEig,
    pub clusters: AbsClusters,
    pub sign_solutions: Vec<HermitianSignSolution>,
    /// Pairwise-maximal element of the enumerated family, when one exists.
    pub maximal: Option<Matrix>,
    pub w_inverse: Matrix,
    /// Minimum eigenvalue of `maximal - X` per enumerated solution.
    pub loewner_certificates: Vec<f64>,
    pub w_inverse_is_maximal: bool,
    /// Raised when the pairwise maximum differs from `W^{-1}` (indefinite
    /// `W`), or when no pairwise maximum exists.
    pub convention_discrepancy: bool,
}

/// `A <= B` in the Loewner order: `B - A` is positive semidefinite within
/// `tol (1 + ||A|| + ||B||)`.
pub fn loewner_leq(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    let herm_tol = tol * (1.0 + a.norm_fro() + b.norm_fro());
    if !a.is_hermitian_within(herm_tol) || !b.is_hermitian_within(herm_tol) {
        return Err(Error::HermitianRequired);
    }
    let eig = hermitian_eig(&b.sub(a))?;
    let min = eig.lambda().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min >= -herm_tol)
}

/// Enumerates the `2^t` Hermitian sign solutions of an invertible Hermitian
/// `W` and identifies the maximal and stabilizing members.
pub fn hermitian_solutions(w: &Matrix, tol: f64, gap_tol: f64) -> Result<HermitianSolutionSet> {
    if !w.is_square() || !w.is_hermitian_within(tol * (1.0 + w.norm_fro())) {
        return Err(Error::HermitianRequired);
    }
    let eig = hermitian_eig(w)?;
    if eig.min_abs_lambda() <= tol * eig.max_abs_lambda() || eig.max_abs_lambda() == 0.0 {
        return Err(Error::InvertibleRequired);
    }
    let clusters = cluster_by_abs(eig.lambda(), gap_tol);
    let u = eig.u();
    let uh = u.conj_transpose();
    let n = w.rows();

    let inv_from_signs = |signs: &[i8]| -> Matrix {
        let mut diag = vec![0.0; n];
        for (i, &sign) in signs.iter().enumerate() {
            for j in clusters.range(i) {
                diag[j] = f64::from(sign) / eig.lambda()[j];
            }
        }
        &(u * &Matrix::diag_real(&diag)) * &uh
    };

    let mut sign_solutions = Vec::new();
    for signs in sign_patterns(clusters.count())? {
        let x = inv_from_signs(&signs);
        let hermitian_defect = x.sub(&x.conj_transpose()).norm_fro();
        let residual = riccati_residual(w, &x)?;
        // Spectrum of -W^3 X: for each index j in cluster i the eigenvalue
        // is -lambda_j^2 * sign_i.
        let mut spectrum = Vec::with_capacity(n);
        for (i, &sign) in signs.iter().enumerate() {
            for j in clusters.range(i) {
                let l = eig.lambda()[j];
                spectrum.push(-l * l * f64::from(sign));
            }
        }
        let margin = tol * (1.0 + eig.max_abs_lambda().powi(2));
        let stabilizing = spectrum.iter().all(|&l| l < -margin);
        sign_solutions.push(HermitianSignSolution {
            signs,
            matrix: x,
            hermitian_defect,
            riccati_residual: residual,
            spectrum,
            stabilizing,
        });
    }

    // Pairwise Loewner comparison over the enumerated family.
    let mut maximal = None;
    for candidate in &sign_solutions {
        let mut dominates = true;
        for other in &sign_solutions {
            if !loewner_leq(&other.matrix, &candidate.matrix, tol)? {
                dominates = false;
                break;
            }
        }
        if dominates {
            maximal = Some(candidate.matrix.clone());
            break;
        }
    }

    let w_inverse = {
        let inv: Vec<f64> = eig.lambda().iter().map(|&l| 1.0 / l).collect();
        &(u * &Matrix::diag_real(&inv)) * &uh
    };

    let mut loewner_certificates = Vec::new();
    if let Some(max) = &maximal {
        for sol in &sign_solutions {
            let diff = hermitian_eig(&max.sub(&sol.matrix))?;
            let min = diff.lambda().iter().copied().fold(f64::INFINITY, f64::min);
            loewner_certificates.push(min);
        }
    }

    let w_inverse_is_maximal = maximal
        .as_ref()
        .is_some_and(|m| m.sub(&w_inverse).norm_fro() <= tol * (1.0 + w_inverse.norm_fro()));

    Ok(HermitianSolutionSet {
        eig,
        clusters,
        sign_solutions,
        maximal,
        w_inverse,
        loewner_certificates,
        w_inverse_is_maximal,
        convention_discrepancy: !w_inverse_is_maximal,
    })
}

/// Checks whether a Hermitian solution is stabilizing: the spectrum of
/// `-W^3 X` is computed analytically from the decomposition
/// `X = U Lambda^{-1} D U*` as `{-lambda_i^2 mu : mu eigenvalue of D_i}`.
/// Returns the verdict and the spectrum.
pub fn stabilizing_check(w: &Matrix, x: &Matrix, tol: f64) -> Result<(bool, Vec<f64>)> {
    if !w.is_square() || !w.is_hermitian_within(tol * (1.0 + w.norm_fro())) {
        return Err(Error::HermitianRequired);
    }
    let eig = hermitian_eig(w)?;
    if eig.min_abs_lambda() <= tol * eig.max_abs_lambda() || eig.max_abs_lambda() == 0.0 {
        return Err(Error::InvertibleRequired);
    }
    if x.sub(&x.conj_transpose()).norm_fro() > tol * (1.0 + x.norm_fro())
        || riccati_residual(w, x)? > tol * riccati_scale(w, x)
    {
        return Err(Error::NotAHermitianSolution);
    }
    let clusters = cluster_by_abs(eig.lambda(), crate::DEFAULT_GAP_TOL);
    let compressed = &(&eig.u().conj_transpose() * x) * eig.u();

    let mut spectrum = Vec::with_capacity(w.rows());
    for i in 0..clusters.count() {
        let range = clusters.range(i);
        let mut block = Matrix::zeros(range.len(), range.len());
        for (li, gi) in range.clone().enumerate() {
            for (lj, gj) in range.clone().enumerate() {
                block.set(li, lj, compressed.get(gi, gj) * eig.lambda()[gi]);
            }
        }
        let defect = block
            .mul(&block)
            .sub(&Matrix::identity(range.len()))
            .norm_fro();
        if defect > tol * range.len() as f64 * 10.0 {
            return Err(Error::NotAHermitianSolution);
        }
        let lam_sq = eig.lambda()[range.start].powi(2);
        let block_eig = hermitian_eig(&block)?;
        for &mu in block_eig.lambda() {
            spectrum.push(-lam_sq * mu);
        }
    }
    let margin = tol * (1.0 + eig.max_abs_lambda().powi(2));
    let stabilizing = spectrum.iter().all(|&l| l < -margin);
    Ok((stabilizing, spectrum))
}

/// Both directions of the Hermitian parametrization: `X = X*` exactly when
/// the recovered `D` is Hermitian and the null sandwich of `X - X*`
/// vanishes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HermitianParamCheck {
    pub x_hermitian: bool,
    pub d_hermitian: bool,
    pub null_part_hermitian: bool,
    pub agree: bool,
}

/// Decomposes `X` in the eigenbasis of a (possibly singular) Hermitian `W`
/// and checks that Hermitianness of `X` is equivalent to Hermitianness of
/// the recovered parameters.
pub fn hermitian_param_check(x: &Matrix, eig: &HermitianEig, tol: f64) -> Result<HermitianParamCheck> {
    let n = eig.dim();
    if x.rows() != n || x.cols() != n {
        return Err(crate::error::shape_mismatch(format!(
            "candidate must be {n}x{n}, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let cut = tol * eig.max_abs_lambda();
    let active: Vec<usize> = (0..n).filter(|&i| eig.lambda()[i].abs() > cut).collect();
    let active_lambda: Vec<f64> = active.iter().map(|&i| eig.lambda()[i]).collect();
    let clusters = cluster_by_abs(&active_lambda, crate::DEFAULT_GAP_TOL);

    let compressed = &(&eig.u().conj_transpose() * x) * eig.u();
    let mut d_hermitian = true;
    for i in 0..clusters.count() {
        let range = clusters.range(i);
        let mut block = Matrix::zeros(range.len(), range.len());
        for (li, gi) in range.clone().enumerate() {
            let row = active[gi];
            for (lj, gj) in range.clone().enumerate() {
                block.set(li, lj, compressed.get(row, active[gj]) * eig.lambda()[row]);
            }
        }
        if block.sub(&block.conj_transpose()).norm_fro() > tol * (1.0 + block.norm_fro()) {
            d_hermitian = false;
        }
    }

    // Null projector from the near-zero eigenvectors.
    let null_indices: Vec<usize> = (0..n).filter(|i| !active.contains(i)).collect();
    let null_part = if null_indices.is_empty() {
        Matrix::zeros(n, n)
    } else {
        let mut basis = Matrix::zeros(n, null_indices.len());
        for (j, &idx) in null_indices.iter().enumerate() {
            for i in 0..n {
                basis.set(i, j, eig.u().get(i, idx));
            }
        }
        let p = &basis * &basis.conj_transpose();
        &(&p * x) * &p
    };
    let null_defect = null_part.sub(&null_part.conj_transpose()).norm_fro();
    let null_part_hermitian = null_defect <= tol * (1.0 + null_part.norm_fro());

    let x_hermitian = x.sub(&x.conj_transpose()).norm_fro() <= tol * (1.0 + x.norm_fro());
    Ok(HermitianParamCheck {
        x_hermitian,
        d_hermitian,
        null_part_hermitian,
        agree: x_hermitian == (d_hermitian && null_part_hermitian),
    })
}
