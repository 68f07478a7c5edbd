//! Reverse-order-law battery for pseudoinverse products.
//!
//! For compatible `A`, `B` the following are equivalent, and each gets an
//! independent numerical check:
//!
//! * `(AB)+ = B+ A+` (the reverse order law),
//! * `A+ A B B* A* A B B+ = B B* A* A`,
//! * `AB B+ A+ AB = (B+ A+)+`,
//! * `X = B+ A+` solves `X W W* W X = W*` for `W = AB`,
//! * `X W X = (AB)+` for the same `X`.
//!
//! Near-threshold residuals are reported as indeterminate instead of being
//! forced into a boolean, so the equivalence can be asserted honestly in
//! floating point.

use serde::Serialize;

use crate::error::{shape_mismatch, Result};
use crate::mat::{pinv, product_scale, Matrix, TolerancePolicy};
use crate::solver::{cluster_singular_values, decompose_solution};
use crate::verify::{rank_chain_check, RankChainReport};
use crate::DEFAULT_GAP_TOL;

/// Three-valued verdict: residuals within `tol * scale` hold, residuals
/// beyond `10 tol * scale` fail, anything between is indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    /// `noise` is the roundoff floor of the computation that produced the
    /// residual; anything below it can be neither confirmed nor refuted.
    fn decide(residual: f64, scale: f64, tol: f64, noise: f64) -> Verdict {
        if residual <= tol * scale {
            Verdict::Holds
        } else if residual <= noise || residual < 10.0 * tol * scale {
            Verdict::Indeterminate
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Indeterminate => None,
        }
    }
}

/// One identity residual with its verdict.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CheckOutcome {
    pub residual: f64,
    pub scale: f64,
    pub verdict: Verdict,
}

impl CheckOutcome {
    /// Judges `lhs = rhs` relative to the magnitude of the two sides.
    /// (Scaling by the factor norms instead would let an ill-conditioned
    /// pseudoinverse product inflate the scale and turn a failing identity
    /// into a spurious pass.) `factors` are the matrices entering the
    /// computation; their norm product sets the roundoff floor below which
    /// the verdict is indeterminate.
    fn from_sides(lhs: &Matrix, rhs: &Matrix, factors: &[&Matrix], tol: f64) -> Self {
        let residual = lhs.sub(rhs).norm_fro();
        let scale = 1.0 + lhs.norm_fro() + rhs.norm_fro();
        let noise = 100.0 * f64::EPSILON * product_scale(factors);
        CheckOutcome {
            residual,
            scale,
            verdict: Verdict::decide(residual, scale, tol, noise),
        }
    }

    pub fn holds(&self) -> Option<bool> {
        self.verdict.holds()
    }
}

fn check_inner(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(shape_mismatch(format!(
            "inner dimensions {} and {}",
            a.cols(),
            b.rows()
        )));
    }
    Ok(())
}

/// `||(AB)+ - B+ A+||_F` against the tolerance band.
pub fn rol_holds(a: &Matrix, b: &Matrix, tol: f64) -> Result<CheckOutcome> {
    check_inner(a, b)?;
    let ab_pinv = pinv(&(a * b), TolerancePolicy::Default);
    let ap = pinv(a, TolerancePolicy::Default);
    let bp = pinv(b, TolerancePolicy::Default);
    let bp_ap = &bp * &ap;
    Ok(CheckOutcome::from_sides(
        &ab_pinv,
        &bp_ap,
        &[a, b, &ap, &bp, &ab_pinv],
        tol,
    ))
}

/// `A+ A B B* A* A B B+ = B B* A* A`.
pub fn greville_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<CheckOutcome> {
    check_inner(a, b)?;
    let ap = pinv(a, TolerancePolicy::Default);
    let bp = pinv(b, TolerancePolicy::Default);
    let bbs = b * &b.conj_transpose();
    let asa = &a.conj_transpose() * a;
    let lhs = &(&(&(&ap * a) * &bbs) * &asa) * &(b * &bp);
    let rhs = &bbs * &asa;
    Ok(CheckOutcome::from_sides(
        &lhs,
        &rhs,
        &[a, a, b, b, &ap, &bp],
        tol,
    ))
}

/// `AB B+ A+ AB = (B+ A+)+` (the lowest-rank pseudoinverse identity).
pub fn tian37_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<CheckOutcome> {
    check_inner(a, b)?;
    let ab = a * b;
    let bp_ap = &pinv(b, TolerancePolicy::Default) * &pinv(a, TolerancePolicy::Default);
    let lhs = &(&ab * &bp_ap) * &ab;
    let rhs = pinv(&bp_ap, TolerancePolicy::Default);
    Ok(CheckOutcome::from_sides(
        &lhs,
        &rhs,
        &[&ab, &ab, &bp_ap, &rhs],
        tol,
    ))
}

/// Outcome of feeding `X = B+ A+` into the matrix equation for `W = AB`.
#[derive(Clone, Debug, Serialize)]
pub struct RiccatiProductCheck {
    pub outcome: CheckOutcome,
    /// `X W X = (AB)+`, evaluated unconditionally.
    pub identity_fixed_point: CheckOutcome,
    /// When the equation holds: were identity blocks recovered?
    pub blocks_are_identity: Option<bool>,
    /// When the equation holds: does the null part vanish?
    pub null_part_zero: Option<bool>,
}

/// Tests whether `B+ A+` solves the equation for `W = AB`; on success also
/// confirms the decomposition lands on identity blocks with no free part.
pub fn riccati_bplus_aplus_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<RiccatiProductCheck> {
    check_inner(a, b)?;
    let w = a * b;
    let x = &pinv(b, TolerancePolicy::Default) * &pinv(a, TolerancePolicy::Default);
    let lhs = &(&x * &(&(&w * &w.conj_transpose()) * &w)) * &x;
    let outcome = CheckOutcome::from_sides(
        &lhs,
        &w.conj_transpose(),
        &[&w, &w, &w, &x, &x],
        tol,
    );

    let ab_pinv = pinv(&w, TolerancePolicy::Default);
    let identity_fixed_point = CheckOutcome::from_sides(
        &(&(&x * &w) * &x),
        &ab_pinv,
        &[&w, &x, &x, &ab_pinv],
        tol,
    );

    let (blocks_are_identity, null_part_zero) = if outcome.holds() == Some(true) {
        let f = crate::mat::svd(&w, TolerancePolicy::Default);
        let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);
        let (params, _) = decompose_solution(&x, &f, &clusters, tol)?;
        let identity = params.blocks.iter().all(|blk| {
            blk.sub(&Matrix::identity(blk.rows())).norm_fro() <= tol * (1.0 + blk.norm_fro())
        });
        let null_zero = params.y_free.norm_fro() <= tol * (1.0 + x.norm_fro());
        (Some(identity), Some(null_zero))
    } else {
        (None, None)
    };

    Ok(RiccatiProductCheck {
        outcome,
        identity_fixed_point,
        blocks_are_identity,
        null_part_zero,
    })
}

/// Compares the column spaces of `B+ A+` and `(AB)+` through principal
/// angles: true when the largest angle is at most `tol` radians. The two
/// ranks always agree (rank chain), so equal-dimensional subspaces are
/// compared.
pub fn range_equality_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool> {
    check_inner(a, b)?;
    let bp_ap = &pinv(b, TolerancePolicy::Default) * &pinv(a, TolerancePolicy::Default);
    let ab_pinv = pinv(&(a * b), TolerancePolicy::Default);
    Ok(subspace_angle_sin(&bp_ap, &ab_pinv).is_some_and(|s| s <= tol))
}

/// `sin` of the largest principal angle between the column spaces, computed
/// from orthonormal range bases; `None` when the ranks differ.
fn subspace_angle_sin(a: &Matrix, b: &Matrix) -> Option<f64> {
    let fa = crate::mat::svd(a, TolerancePolicy::Default);
    let fb = crate::mat::svd(b, TolerancePolicy::Default);
    if fa.rank() != fb.rank() {
        return None;
    }
    if fa.rank() == 0 {
        return Some(0.0);
    }
    let q1 = fa.u().submatrix(0, a.rows(), 0, fa.rank());
    let q2 = fb.u().submatrix(0, b.rows(), 0, fb.rank());
    // sin(theta_max) = ||(I - Q1 Q1*) Q2||_2, robust for tiny angles where
    // the cosine route loses all precision.
    let residual = q2.sub(&(&q1 * &(&q1.conj_transpose() * &q2)));
    let fr = crate::mat::svd(&residual, TolerancePolicy::Default);
    Some(fr.sigma().first().copied().unwrap_or(0.0).min(1.0))
}

/// Everything the battery knows about one `(A, B)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct RolReport {
    pub rol: CheckOutcome,
    pub greville: CheckOutcome,
    /// `AB B+ A+ AB = (B+ A+)+`: criterion 37 of the generalized-inverse
    /// catalog, identical to the lowest-rank identity i).
    pub tian37: CheckOutcome,
    pub riccati_product: RiccatiProductCheck,
    pub range_equal: bool,
    pub rank_chain: RankChainReport,
    /// All decided verdicts among the five equivalent conditions agree.
    pub consistent: bool,
    /// Number of indeterminate verdicts among the five.
    pub indeterminate: usize,
}

impl RolReport {
    /// Decided verdicts of the five equivalent conditions.
    pub fn decided(&self) -> Vec<bool> {
        [
            self.rol.holds(),
            self.greville.holds(),
            self.tian37.holds(),
            self.riccati_product.outcome.holds(),
            self.riccati_product.identity_fixed_point.holds(),
        ]
        .into_iter()
        .flatten()
        .collect()
    }
}

/// Runs every check of the battery on one pair.
pub fn rol_report(a: &Matrix, b: &Matrix, tol: f64) -> Result<RolReport> {
    let rol = rol_holds(a, b, tol)?;
    let greville = greville_check(a, b, tol)?;
    let tian = tian37_check(a, b, tol)?;
    let riccati_product = riccati_bplus_aplus_check(a, b, tol)?;
    let range_equal = range_equality_check(a, b, tol)?;
    let rank_chain = rank_chain_check(a, b, tol)?;

    let verdicts = [
        rol.holds(),
        greville.holds(),
        tian.holds(),
        riccati_product.outcome.holds(),
        riccati_product.identity_fixed_point.holds(),
    ];
    let decided: Vec<bool> = verdicts.iter().copied().flatten().collect();
    let indeterminate = verdicts.iter().filter(|v| v.is_none()).count();
    let mut consistent = decided.windows(2).all(|w| w[0] == w[1]);
    // ROL implies range equality (the converse need not hold).
    if decided.first() == Some(&true) && !range_equal {
        consistent = false;
    }

    Ok(RolReport {
        rol,
        greville,
        tian37: tian,
        riccati_product,
        range_equal,
        rank_chain,
        consistent,
        indeterminate,
    })
}
