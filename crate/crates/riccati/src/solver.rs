//! Construction, enumeration and decomposition of all solutions of
//! `X W W* W X = W*`.
//!
//! With `W = U Sigma V*` and singular values grouped into clusters
//! `sigma_1 > ... > sigma_t` of multiplicities `s_1, ..., s_t`, every
//! solution is
//!
//! ```text
//! X = V Sigma+ D U* + P_N(W) Y P_N(W*),
//! D = diag(X_1, ..., X_t, 0), X_i^2 = I_{s_i},
//! ```
//!
//! for free `Y`. The involutory blocks and the projected `Y` sandwich are
//! uniquely determined by `X`, which is what `decompose_solution` recovers.

use num_complex::Complex64;

use crate::error::{shape_mismatch, Error, Result};
use crate::mat::{Matrix, SvdFactorization, TolerancePolicy};
use crate::rng::SplitMix64;
use crate::DEFAULT_TOL;

/// Hard cap on the cluster count accepted by sign enumeration (2^t files).
pub const MAX_ENUM_CLUSTERS: usize = 20;

/// Distinct singular values with multiplicities, grouped by relative gap.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularClusters {
    values: Vec<f64>,
    multiplicities: Vec<usize>,
    gap_tol: f64,
    rank: usize,
}

impl SingularClusters {
    /// Number of distinct singular values `t`.
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Cluster head values, strictly decreasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn gap_tol(&self) -> f64 {
        self.gap_tol
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Index range of cluster `i` inside the leading `rank` singular values.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.multiplicities[..i].iter().sum();
        start..start + self.multiplicities[i]
    }
}

/// Greedy grouping of the leading `rank` singular values: a new cluster
/// starts whenever a value drops below `head * (1 - gap_tol)`.
pub fn cluster_singular_values(f: &SvdFactorization, gap_tol: f64) -> SingularClusters {
    let mut values = Vec::new();
    let mut multiplicities: Vec<usize> = Vec::new();
    for &s in &f.sigma()[..f.rank()] {
        match values.last() {
            Some(&head) if s >= head * (1.0 - gap_tol) => {
                *multiplicities.last_mut().unwrap() += 1;
            }
            _ => {
                values.push(s);
                multiplicities.push(1);
            }
        }
    }
    SingularClusters {
        values,
        multiplicities,
        gap_tol,
        rank: f.rank(),
    }
}

/// The `(D, Y)` coordinates of a solution: one involutory block per
/// singular-value cluster plus the free matrix of the null-space sandwich.
#[derive(Clone, Debug)]
pub struct SolutionParams {
    pub blocks: Vec<Matrix>,
    pub y_free: Matrix,
}

impl SolutionParams {
    /// All-identity blocks and `Y = 0`: the parameters of the pseudoinverse.
    pub fn canonical(clusters: &SingularClusters, rows: usize, cols: usize) -> Self {
        SolutionParams {
            blocks: clusters
                .multiplicities()
                .iter()
                .map(|&s| Matrix::identity(s))
                .collect(),
            y_free: Matrix::zeros(cols, rows),
        }
    }

    /// `+-I` blocks from one sign per cluster and `Y = 0`.
    pub fn from_signs(
        clusters: &SingularClusters,
        signs: &[i8],
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        if signs.len() != clusters.count() {
            return Err(Error::BadSignPattern {
                expected: clusters.count(),
                found: signs.len(),
            });
        }
        Ok(SolutionParams {
            blocks: clusters
                .multiplicities()
                .iter()
                .zip(signs)
                .map(|(&s, &sign)| Matrix::identity(s).scale_real(f64::from(sign)))
                .collect(),
            y_free: Matrix::zeros(cols, rows),
        })
    }
}

/// Builds `X = V Sigma+ D U* + P_N(W) Y P_N(W*)` from involutory blocks and
/// the free matrix.
pub fn construct_solution(
    f: &SvdFactorization,
    clusters: &SingularClusters,
    params: &SolutionParams,
) -> Result<Matrix> {
    let (m, n) = (f.rows(), f.cols());
    if params.blocks.len() != clusters.count() {
        return Err(shape_mismatch(format!(
            "{} blocks for {} clusters",
            params.blocks.len(),
            clusters.count()
        )));
    }
    for (i, block) in params.blocks.iter().enumerate() {
        let s = clusters.multiplicities()[i];
        if block.rows() != s || block.cols() != s {
            return Err(Error::BlockSizeMismatch {
                index: i,
                expected: s,
                found: block.rows().max(block.cols()),
            });
        }
        let defect = block.mul(block).sub(&Matrix::identity(s)).norm_fro();
        if defect > DEFAULT_TOL * s as f64 {
            return Err(Error::NotInvolutory { index: i, defect });
        }
    }
    if params.y_free.rows() != n || params.y_free.cols() != m {
        return Err(shape_mismatch(format!(
            "free matrix must be {}x{}, got {}x{}",
            n,
            m,
            params.y_free.rows(),
            params.y_free.cols()
        )));
    }

    let core = core_from_blocks(f, clusters, &params.blocks);
    let sandwich = &(&f.null_projector_domain() * &params.y_free) * &f.null_projector_codomain();
    Ok(core.add(&sandwich))
}

/// `V Sigma+ D U*` with the block-diagonal `D` embedded at the
/// singular-value positions (row scaled by each 1/sigma_j in the cluster).
fn core_from_blocks(
    f: &SvdFactorization,
    clusters: &SingularClusters,
    blocks: &[Matrix],
) -> Matrix {
    let (m, n) = (f.rows(), f.cols());
    let mut g = Matrix::zeros(n, m);
    for (i, block) in blocks.iter().enumerate() {
        let range = clusters.range(i);
        for (li, gi) in range.clone().enumerate() {
            let inv_sigma = 1.0 / f.sigma()[gi];
            for (lj, gj) in range.clone().enumerate() {
                g.set(gi, gj, block.get(li, lj) * inv_sigma);
            }
        }
    }
    &(f.v() * &g) * &f.u().conj_transpose()
}

/// `X = W+`, the solution with all blocks equal to the identity and `Y = 0`.
pub fn canonical_solution(f: &SvdFactorization) -> Matrix {
    f.pseudoinverse()
}

/// Random involutory matrix `C diag(+-1) C^{-1}` with the similarity factor
/// resampled until its condition estimate is at most `cond_cap`.
pub fn random_involution(size: usize, seed: u64, cond_cap: f64) -> Result<Matrix> {
    let mut rng = SplitMix64::new(seed);
    let signs: Vec<i8> = (0..size).map(|_| rng.next_sign()).collect();
    similarity_involution(&signs, &mut rng, cond_cap)
}

/// Involution with prescribed eigenvalue signs, `C diag(signs) C^{-1}`.
pub fn similarity_involution(
    signs: &[i8],
    rng: &mut SplitMix64,
    cond_cap: f64,
) -> Result<Matrix> {
    if cond_cap < 1.0 {
        return Err(Error::InvalidConditionCap(cond_cap));
    }
    if signs.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let size = signs.len();
    let spectrum = Matrix::diag_real(&signs.iter().map(|&s| f64::from(s)).collect::<Vec<_>>());
    for _ in 0..1000 {
        let c = rng.complex_matrix(size, size);
        let f = crate::mat::svd(&c, TolerancePolicy::Default);
        if f.rank() < size || f.sigma()[0] / f.sigma()[size - 1] > cond_cap {
            continue;
        }
        let x = &(&c * &spectrum) * &c.inverse()?;
        if x.mul(&x).sub(&Matrix::identity(size)).norm_fro() <= 1e-10 * size as f64 {
            return Ok(x);
        }
    }
    // A cap close to 1 may be unattainable by random similarity factors.
    Err(Error::InvalidConditionCap(cond_cap))
}

/// The `2^t` solutions with `X_i = +-I` per cluster and `Y = 0`, ordered
/// lexicographically over sign vectors with `+` before `-`.
pub fn enumerate_sign_solutions(
    f: &SvdFactorization,
    clusters: &SingularClusters,
) -> Result<Vec<Matrix>> {
    sign_patterns(clusters.count())?
        .into_iter()
        .map(|signs| {
            let params = SolutionParams::from_signs(clusters, &signs, f.rows(), f.cols())?;
            construct_solution(f, clusters, &params)
        })
        .collect()
}

/// Lexicographic `+/-` vectors of length `t`, `+` sorting first.
pub fn sign_patterns(t: usize) -> Result<Vec<Vec<i8>>> {
    if t > MAX_ENUM_CLUSTERS {
        return Err(Error::EnumerationTooLarge {
            clusters: t,
            max: MAX_ENUM_CLUSTERS,
        });
    }
    Ok((0..1usize << t)
        .map(|k| {
            (0..t)
                .map(|i| if k >> (t - 1 - i) & 1 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect())
}

/// Residuals reported by [`decompose_solution`]; a genuine solution drives
/// all three to roundoff level.
#[derive(Clone, Copy, Debug)]
pub struct DecompositionResidual {
    /// Energy of `V* X U` inside the first `r` rows/columns but outside the
    /// diagonal cluster blocks.
    pub block_leakage: f64,
    /// Largest `||X_i^2 - I||_F` over the recovered blocks.
    pub involution_defect: f64,
    /// `||P_N(W) part P_N(W*) - part||_F` for `part = X - V Sigma+ D U*`.
    pub null_mismatch: f64,
    /// All three residuals within the tolerance the caller supplied.
    pub within_tol: bool,
}

impl DecompositionResidual {
    pub fn max(&self) -> f64 {
        self.block_leakage
            .max(self.involution_defect)
            .max(self.null_mismatch)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Recovers the `(D, Y)` coordinates of a candidate solution.
///
/// Block `i` is read off the cluster-`i` diagonal block of `V* X U`, scaled
/// back by the singular values; the null part is `X - V Sigma+ D U*`,
/// returned already projected (`Y` itself is only determined up to the
/// kernel of the sandwich). Residuals signal non-solutions instead of
/// erroring.
pub fn decompose_solution(
    x: &Matrix,
    f: &SvdFactorization,
    clusters: &SingularClusters,
    tol: f64,
) -> Result<(SolutionParams, DecompositionResidual)> {
    let (m, n) = (f.rows(), f.cols());
    if x.rows() != n || x.cols() != m {
        return Err(shape_mismatch(format!(
            "candidate must be {}x{}, got {}x{}",
            n,
            m,
            x.rows(),
            x.cols()
        )));
    }
    let c = &(&f.v().conj_transpose() * x) * f.u();
    let r = f.rank();

    let mut blocks = Vec::with_capacity(clusters.count());
    for i in 0..clusters.count() {
        let range = clusters.range(i);
        let mut block = Matrix::zeros(range.len(), range.len());
        for (li, gi) in range.clone().enumerate() {
            let sigma = f.sigma()[gi];
            for (lj, gj) in range.clone().enumerate() {
                block.set(li, lj, c.get(gi, gj) * Complex64::new(sigma, 0.0));
            }
        }
        blocks.push(block);
    }

    let mut leakage_sq = 0.0;
    for i in 0..n {
        for j in 0..m {
            if i >= r && j >= r {
                continue;
            }
            if clusters_share_block(clusters, i, j) {
                continue;
            }
            leakage_sq += c.get(i, j).norm_sqr();
        }
    }

    let involution_defect = blocks
        .iter()
        .map(|b| b.mul(b).sub(&Matrix::identity(b.rows())).norm_fro())
        .fold(0.0, f64::max);

    let core = core_from_blocks(f, clusters, &blocks);
    let part = x.sub(&core);
    let projected = &(&f.null_projector_domain() * &part) * &f.null_projector_codomain();
    let null_mismatch = projected.sub(&part).norm_fro();

    let residual = DecompositionResidual {
        block_leakage: leakage_sq.sqrt(),
        involution_defect,
        null_mismatch,
        within_tol: leakage_sq.sqrt().max(involution_defect).max(null_mismatch) <= tol,
    };
    Ok((
        SolutionParams {
            blocks,
            y_free: projected,
        },
        residual,
    ))
}

fn clusters_share_block(clusters: &SingularClusters, i: usize, j: usize) -> bool {
    (0..clusters.count()).any(|k| {
        let range = clusters.range(k);
        range.contains(&i) && range.contains(&j)
    })
}

/// Dimension of the affine family attached to each block choice: the rank
/// of the linear map `Y -> P_N(W) Y P_N(W*)`, measured over the elementary
/// matrix basis with an orthogonalization sweep. Equals `(n - r)(m - r)`.
pub fn family_dimension(f: &SvdFactorization) -> usize {
    let (m, n) = (f.rows(), f.cols());
    let pn = f.null_projector_domain();
    let pc = f.null_projector_codomain();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let threshold = 1e-7;
    for i in 0..n {
        for j in 0..m {
            // Image of E_ij is the outer product of column i of P_N(W) with
            // row j of P_N(W*).
            let mut vec = Vec::with_capacity(n * m);
            for p in 0..n {
                for q in 0..m {
                    vec.push(pn.get(p, i) * pc.get(j, q));
                }
            }
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 =
                        b.iter().zip(vec.iter()).map(|(u, x)| u.conj() * x).sum();
                    for (x, u) in vec.iter_mut().zip(b.iter()) {
                        *x -= proj * u;
                    }
                }
            }
            let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > threshold {
                let inv = 1.0 / norm;
                for z in vec.iter_mut() {
                    *z *= inv;
                }
                basis.push(vec);
            }
        }
    }
    basis.len()
}

/// `r (m + n - r)`: the kernel dimension of the same parameter map, the
/// figure sometimes quoted as the family dimension. Reported alongside
/// [`family_dimension`] so the two counts can be compared directly.
pub fn family_parameter_kernel_dimension(f: &SvdFactorization) -> usize {
    let (m, n, r) = (f.rows(), f.cols(), f.rank());
    r * (m + n - r)
}
