//! Residual checks for every identity a solution of `X W W* W X = W*`
//! must satisfy: the equation itself, `X W X = W+`, the range projectors
//! `(W X)^2 = W W+` and `(X W)^2 = W+ W`, tripotency of `W X` and `X W`,
//! lowest-rank classification and the rank chain of pseudoinverse products.
//!
//! All residuals are Frobenius norms compared against `tol * scale`, with
//! `scale` the product of `(1 + ||.||_F)` over the factors entering the
//! identity.

use serde::Serialize;

use crate::error::{shape_mismatch, Error, Result};
use crate::mat::{penrose_check, product_scale, Matrix, TolerancePolicy};
use crate::solver::{cluster_singular_values, decompose_solution};
use crate::DEFAULT_GAP_TOL;

/// One named residual with the scale and tolerance it was judged against.
#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub name: &'static str,
    pub residual: f64,
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ReportEntry {
    fn new(name: &'static str, residual: f64, scale: f64, tol: f64) -> Self {
        ReportEntry {
            name,
            residual,
            scale,
            tol,
            pass: residual <= tol * scale,
        }
    }
}

/// Pass/fail verdicts for every checked identity; overall passes exactly
/// when every entry does.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
    pub overall: bool,
}

impl VerificationReport {
    fn from_entries(entries: Vec<ReportEntry>) -> Self {
        let overall = entries.iter().all(|e| e.pass);
        VerificationReport { entries, overall }
    }

    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn check_solution_shapes(w: &Matrix, x: &Matrix) -> Result<()> {
    if x.rows() != w.cols() || x.cols() != w.rows() {
        return Err(shape_mismatch(format!(
            "candidate must be {}x{} for a {}x{} matrix, got {}x{}",
            w.cols(),
            w.rows(),
            w.rows(),
            w.cols(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// `||X W W* W X - W*||_F`.
pub fn riccati_residual(w: &Matrix, x: &Matrix) -> Result<f64> {
    check_solution_shapes(w, x)?;
    let www = &(w * &w.conj_transpose()) * w;
    Ok((&(x * &www) * x).sub(&w.conj_transpose()).norm_fro())
}

/// Scale for the equation residual: `(1 + ||W||)^3 (1 + ||X||)^2`.
pub fn riccati_scale(w: &Matrix, x: &Matrix) -> f64 {
    product_scale(&[w, w, w, x, x])
}

/// Residuals for the equation and the five identities every solution
/// satisfies. If the equation entry passes, the others must as well.
pub fn verify_solution(w: &Matrix, x: &Matrix, tol: f64) -> Result<VerificationReport> {
    check_solution_shapes(w, x)?;
    let wp = crate::mat::pinv(w, TolerancePolicy::Default);
    let wx = w * x;
    let xw = x * w;
    let wx2 = &wx * &wx;
    let xw2 = &xw * &xw;

    let entries = vec![
        ReportEntry::new(
            "riccati",
            riccati_residual(w, x)?,
            riccati_scale(w, x),
            tol,
        ),
        ReportEntry::new(
            "xwx_pinv",
            (&xw * x).sub(&wp).norm_fro(),
            product_scale(&[x, w, x, &wp]),
            tol,
        ),
        ReportEntry::new(
            "wx_sq_range_projector",
            wx2.sub(&(w * &wp)).norm_fro(),
            product_scale(&[w, x, w, x, &wp]),
            tol,
        ),
        ReportEntry::new(
            "xw_sq_corange_projector",
            xw2.sub(&(&wp * w)).norm_fro(),
            product_scale(&[x, w, x, w, &wp]),
            tol,
        ),
        ReportEntry::new(
            "wx_cube",
            (&wx2 * &wx).sub(&wx).norm_fro(),
            product_scale(&[w, x, w, x, w, x]),
            tol,
        ),
        ReportEntry::new(
            "xw_cube",
            (&xw2 * &xw).sub(&xw).norm_fro(),
            product_scale(&[x, w, x, w, x, w]),
            tol,
        ),
    ];
    Ok(VerificationReport::from_entries(entries))
}

/// `(||(WX)^2 - WX||_F, ||(XW)^2 - XW||_F)`: informational gaps showing that
/// tripotent products need not be idempotent. For a sign solution with `k`
/// minus signs (counted with multiplicity) the first gap equals `2 sqrt(k)`.
pub fn idempotency_gaps(w: &Matrix, x: &Matrix) -> Result<(f64, f64)> {
    check_solution_shapes(w, x)?;
    let wx = w * x;
    let xw = x * w;
    Ok((
        (&wx * &wx).sub(&wx).norm_fro(),
        (&xw * &xw).sub(&xw).norm_fro(),
    ))
}

/// Three independent characterizations of lowest-rank solutions
/// (`rank X = rank W`), which must agree:
/// `W X W = X+`, range equality `R(X) = R(W*)`, and a vanishing null part.
#[derive(Clone, Debug, Serialize)]
pub struct LowestRankReport {
    pub is_lowest_rank: bool,
    pub pinv_route: bool,
    pub range_route: bool,
    pub null_part_route: bool,
    pub agree: bool,
    pub null_part_norm: f64,
}

pub fn classify_lowest_rank(w: &Matrix, x: &Matrix, tol: f64) -> Result<LowestRankReport> {
    let report = verify_solution(w, x, tol)?;
    if !report.overall {
        return Err(Error::NotASolution);
    }
    let f = crate::mat::svd(w, TolerancePolicy::Default);
    let fx = crate::mat::svd(x, TolerancePolicy::Default);

    // (a) W X W is the pseudoinverse of X.
    let wxw = &(w * x) * w;
    let pinv_route = penrose_check(x, &wxw, tol)?.all();

    // (b) rank equality plus X supported on R(W*).
    let projector = &f.pseudoinverse() * w;
    let range_defect = (&projector * x).sub(x).norm_fro();
    let range_route = fx.rank() == f.rank() && range_defect <= tol * (1.0 + x.norm_fro());

    // (c) the decomposition has no null-space contribution.
    let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);
    let (params, _) = decompose_solution(x, &f, &clusters, tol)?;
    let null_part_norm = params.y_free.norm_fro();
    let null_part_route = null_part_norm <= tol * (1.0 + x.norm_fro());

    let agree = pinv_route == range_route && range_route == null_part_route;
    Ok(LowestRankReport {
        is_lowest_rank: pinv_route,
        pinv_route,
        range_route,
        null_part_route,
        agree,
        null_part_norm,
    })
}

/// Evaluates `X W W* W X = W*` and `X W X = W+` independently; the two
/// verdicts agree for every pair.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EquivalenceCheck {
    pub riccati_holds: bool,
    pub fixed_point_holds: bool,
    pub riccati_residual: f64,
    pub fixed_point_residual: f64,
}

pub fn equivalence_check(w: &Matrix, x: &Matrix, tol: f64) -> Result<EquivalenceCheck> {
    check_solution_shapes(w, x)?;
    let riccati = riccati_residual(w, x)?;
    let wp = crate::mat::pinv(w, TolerancePolicy::Default);
    let fixed_point = (&(x * w) * x).sub(&wp).norm_fro();
    Ok(EquivalenceCheck {
        riccati_holds: riccati <= tol * riccati_scale(w, x),
        fixed_point_holds: fixed_point <= tol * product_scale(&[x, w, x, &wp]),
        riccati_residual: riccati,
        fixed_point_residual: fixed_point,
    })
}

/// The rank chain `rank(B+ A+) = rank(AB) = rank((AB)*) = rank((AB)+)`,
/// all computed with the same relative cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct RankChainReport {
    pub rank_pinv_product: usize,
    pub rank_product: usize,
    pub rank_product_adjoint: usize,
    pub rank_product_pinv: usize,
    pub pass: bool,
}

pub fn rank_chain_check(a: &Matrix, b: &Matrix, tol: f64) -> Result<RankChainReport> {
    if a.cols() != b.rows() {
        return Err(shape_mismatch(format!(
            "inner dimensions {} and {}",
            a.cols(),
            b.rows()
        )));
    }
    let policy = TolerancePolicy::Relative(tol);
    let rank_of = |m: &Matrix| crate::mat::svd(m, policy).rank();
    let ab = a * b;
    let ab_pinv = crate::mat::pinv(&ab, TolerancePolicy::Default);
    let bp_ap = &crate::mat::pinv(b, TolerancePolicy::Default)
        * &crate::mat::pinv(a, TolerancePolicy::Default);
    let ranks = (
        rank_of(&bp_ap),
        rank_of(&ab),
        rank_of(&ab.conj_transpose()),
        rank_of(&ab_pinv),
    );
    Ok(RankChainReport {
        rank_pinv_product: ranks.0,
        rank_product: ranks.1,
        rank_product_adjoint: ranks.2,
        rank_product_pinv: ranks.3,
        pass: ranks.0 == ranks.1 && ranks.1 == ranks.2 && ranks.2 == ranks.3,
    })
}
