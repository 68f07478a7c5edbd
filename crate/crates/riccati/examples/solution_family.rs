//! Build solutions of `X W W* W X = W*` from explicit parameters and check
//! the identities they inherit.
//!
//! ```bash
//! cargo run --example solution_family
//! ```

use riccati::rng::SplitMix64;
use riccati::solver::similarity_involution;
use riccati::verify::{idempotency_gaps, verify_solution};
use riccati::{
    cluster_singular_values, construct_solution, decompose_solution, svd, Matrix, SolutionParams,
    TolerancePolicy, DEFAULT_GAP_TOL,
};

fn main() -> riccati::Result<()> {
    // A rank-2 rectangular matrix with one repeated singular value pair.
    let w = Matrix::from_real_rows(&[
        &[3.0, 0.0, 0.0, 0.0],
        &[0.0, 3.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
    ])?;
    let f = svd(&w, TolerancePolicy::Default);
    let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);
    println!(
        "singular clusters: values {:?}, multiplicities {:?}",
        clusters.values(),
        clusters.multiplicities()
    );

    // Any involutory block works on the multiplicity-2 cluster, and any Y
    // feeds the null-space sandwich.
    let mut rng = SplitMix64::new(7);
    let block = similarity_involution(&[1, -1], &mut rng, 100.0)?;
    let params = SolutionParams {
        blocks: vec![block],
        y_free: rng.normal_matrix(w.cols(), w.rows()),
    };
    let x = construct_solution(&f, &clusters, &params)?;

    let report = verify_solution(&w, &x, 1e-8)?;
    for entry in &report.entries {
        println!(
            "  {:<24} residual {:>12.3e}  {}",
            entry.name,
            entry.residual,
            if entry.pass { "pass" } else { "FAIL" }
        );
    }
    let (gap_wx, gap_xw) = idempotency_gaps(&w, &x)?;
    println!("tripotent but not idempotent: ||(WX)^2-WX|| = {gap_wx:.3}, ||(XW)^2-XW|| = {gap_xw:.3}");

    // The parameters are recoverable from the solution alone.
    let (recovered, residual) = decompose_solution(&x, &f, &clusters, 1e-10)?;
    println!(
        "decomposition: block defect {:.3e}, leakage {:.3e}, null mismatch {:.3e}",
        recovered.blocks[0]
            .mul(&recovered.blocks[0])
            .sub(&Matrix::identity(2))
            .norm_fro(),
        residual.block_leakage,
        residual.null_mismatch
    );
    Ok(())
}
