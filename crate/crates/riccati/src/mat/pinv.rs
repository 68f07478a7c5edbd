use super::svd::{svd, TolerancePolicy};
use super::Matrix;
use crate::error::{shape_mismatch, Result};

/// Moore-Penrose pseudoinverse `A+ = V Sigma+ U*` from the Jacobi SVD.
pub fn pinv(a: &Matrix, tol_policy: TolerancePolicy) -> Matrix {
    svd(a, tol_policy).pseudoinverse()
}

/// Which null space the projector targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullSide {
    /// `P = I - A+ A`, the projector onto `N(A)`.
    Domain,
    /// `P = I - A A+`, the projector onto `N(A*)`.
    Codomain,
}

/// Orthogonal projector onto `N(A)` or `N(A*)`, assembled from the trailing
/// singular vectors so that `P^2 = P = P*` holds to working accuracy.
pub fn null_projector(a: &Matrix, side: NullSide, tol_policy: TolerancePolicy) -> Matrix {
    let f = svd(a, tol_policy);
    match side {
        NullSide::Domain => f.null_projector_domain(),
        NullSide::Codomain => f.null_projector_codomain(),
    }
}

/// Outcome of the four Penrose conditions for a candidate inverse `G` of `A`:
/// `AGA = A`, `GAG = G`, `(AG)* = AG`, `(GA)* = GA`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PenroseFlags {
    pub aga_eq_a: bool,
    pub gag_eq_g: bool,
    pub ag_hermitian: bool,
    pub ga_hermitian: bool,
}

impl PenroseFlags {
    pub fn all(&self) -> bool {
        self.aga_eq_a && self.gag_eq_g && self.ag_hermitian && self.ga_hermitian
    }

    pub fn as_tuple(&self) -> (bool, bool, bool, bool) {
        (
            self.aga_eq_a,
            self.gag_eq_g,
            self.ag_hermitian,
            self.ga_hermitian,
        )
    }
}

/// Checks each Penrose condition within the relative tolerance
/// `tol (1 + ||A||_F)(1 + ||G||_F)`.
pub fn penrose_check(a: &Matrix, g: &Matrix, tol: f64) -> Result<PenroseFlags> {
    if g.rows() != a.cols() || g.cols() != a.rows() {
        return Err(shape_mismatch(format!(
            "penrose candidate must be {}x{}, got {}x{}",
            a.cols(),
            a.rows(),
            g.rows(),
            g.cols()
        )));
    }
    let bound = tol * (1.0 + a.norm_fro()) * (1.0 + g.norm_fro());
    let ag = a * g;
    let ga = g * a;
    Ok(PenroseFlags {
        aga_eq_a: (&ag * a).sub(a).norm_fro() <= bound,
        gag_eq_g: (&ga * g).sub(g).norm_fro() <= bound,
        ag_hermitian: ag.sub(&ag.conj_transpose()).norm_fro() <= bound,
        ga_hermitian: ga.sub(&ga.conj_transpose()).norm_fro() <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn scalar_and_nilpotent_pinv() {
        let a = Matrix::from_real_rows(&[&[2.0]]).unwrap();
        let g = pinv(&a, TolerancePolicy::Default);
        assert!((g.get(0, 0).re - 0.5).abs() < 1e-15);

        // pinv([[0,2],[0,0]]) = [[0,0],[0.5,0]]; the oracle below re-checks
        // the four Penrose conditions by direct multiplication.
        let a = Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let g = pinv(&a, TolerancePolicy::Default);
        let expected = Matrix::from_real_rows(&[&[0.0, 0.0], &[0.5, 0.0]]).unwrap();
        assert!(g.sub(&expected).norm_fro() < 1e-14);
        assert!((&(&a * &g) * &a).sub(&a).norm_fro() < 1e-14);
        assert!((&(&g * &a) * &g).sub(&g).norm_fro() < 1e-14);
        let ag = &a * &g;
        let ga = &g * &a;
        assert!(ag.sub(&ag.conj_transpose()).norm_fro() < 1e-14);
        assert!(ga.sub(&ga.conj_transpose()).norm_fro() < 1e-14);
    }

    #[test]
    fn pinv_of_zero_is_zero_transposed() {
        let g = pinv(&Matrix::zeros(2, 3), TolerancePolicy::Default);
        assert_eq!((g.rows(), g.cols()), (3, 2));
        assert_eq!(g.norm_fro(), 0.0);
    }

    #[test]
    fn pinv_is_involutive_on_well_conditioned() {
        // Conditioning is measured on the numerical-rank part, so
        // rank-deficient matrices participate too.
        let mut rng = SplitMix64::new(5);
        for case in 0..30 {
            let m = 2 + (rng.next_u64() % 6) as usize;
            let n = 2 + (rng.next_u64() % 6) as usize;
            let a = if case % 2 == 0 {
                rng.complex_matrix(m, n)
            } else {
                let k = 1 + (rng.next_u64() % m.min(n) as u64) as usize;
                &rng.complex_matrix(m, k) * &rng.complex_matrix(k, n)
            };
            let f = svd(&a, TolerancePolicy::Default);
            if f.rank() == 0 {
                continue;
            }
            let cond = f.sigma()[0] / f.sigma()[f.rank() - 1];
            if cond > 1e6 {
                continue;
            }
            let back = pinv(&pinv(&a, TolerancePolicy::Default), TolerancePolicy::Default);
            assert!(back.sub(&a).norm_fro() <= 1e-10 * a.norm_fro());
        }
    }

    #[test]
    fn null_projector_examples() {
        // A = [[0,2],[0,0]]: N(A) is spanned by e1, so P = e1 e1^T.
        let a = Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let p = null_projector(&a, NullSide::Domain, TolerancePolicy::Default);
        let expected = Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(p.sub(&expected).norm_fro() < 1e-14);
        assert!((&a * &p).norm_fro() < 1e-14);

        let invertible = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap();
        for side in [NullSide::Domain, NullSide::Codomain] {
            let p = null_projector(&invertible, side, TolerancePolicy::Default);
            assert!(p.norm_fro() < 1e-12);
        }

        for side in [NullSide::Domain, NullSide::Codomain] {
            let p = null_projector(&Matrix::zeros(2, 2), side, TolerancePolicy::Default);
            assert!(p.sub(&Matrix::identity(2)).norm_fro() < 1e-14);
        }
    }

    #[test]
    fn projector_identities_randomized() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..30 {
            let m = 1 + (rng.next_u64() % 7) as usize;
            let n = 1 + (rng.next_u64() % 7) as usize;
            let k = 1 + (rng.next_u64() % 4) as usize;
            let a = &rng.complex_matrix(m, k) * &rng.complex_matrix(k, n);
            let bound = 1e-10 * (1.0 + a.norm_fro());
            let pd = null_projector(&a, NullSide::Domain, TolerancePolicy::Default);
            let pc = null_projector(&a, NullSide::Codomain, TolerancePolicy::Default);
            assert!((&pd * &pd).sub(&pd).norm_fro() <= bound);
            assert!(pd.sub(&pd.conj_transpose()).norm_fro() <= bound);
            assert!((&pc * &pc).sub(&pc).norm_fro() <= bound);
            assert!(pc.sub(&pc.conj_transpose()).norm_fro() <= bound);
            assert!((&a * &pd).norm_fro() <= bound);
            assert!((&pc * &a).norm_fro() <= bound);
        }
    }

    #[test]
    fn penrose_flags_match_hand_cases() {
        let a = Matrix::identity(2);
        let g = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let flags = penrose_check(&a, &g, 1e-10).unwrap();
        assert_eq!(flags.as_tuple(), (false, false, true, true));

        // A = [[1,0]], G = [[1],[1]]: AGA = A and GAG = G by direct
        // multiplication; AG = [1] is Hermitian; GA = [[1,0],[1,0]] is not.
        let a = Matrix::from_real_rows(&[&[1.0, 0.0]]).unwrap();
        let g = Matrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        let flags = penrose_check(&a, &g, 1e-10).unwrap();
        assert_eq!(flags.as_tuple(), (true, true, true, false));

        let a = Matrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let flags = penrose_check(&a, &pinv(&a, TolerancePolicy::Default), 1e-10).unwrap();
        assert!(flags.all());

        assert!(penrose_check(&a, &Matrix::zeros(3, 2), 1e-10).is_err());
    }
}
