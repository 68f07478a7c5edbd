//! Enumerate the discrete skeleton of the solution set: the `2^t` sign
//! choices, one per distinct singular value.
//!
//! ```bash
//! cargo run --example enumerate_signs
//! ```

use riccati::solver::family_parameter_kernel_dimension;
use riccati::verify::riccati_residual;
use riccati::{
    cluster_singular_values, enumerate_sign_solutions, family_dimension, svd, Matrix,
    TolerancePolicy, DEFAULT_GAP_TOL,
};

fn main() -> riccati::Result<()> {
    let w = Matrix::from_real_rows(&[&[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]])?;
    let f = svd(&w, TolerancePolicy::Default);
    let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);
    let solutions = enumerate_sign_solutions(&f, &clusters)?;

    println!(
        "W is {}x{} with rank {}; {} sign solutions:",
        w.rows(),
        w.cols(),
        f.rank(),
        solutions.len()
    );
    for (idx, x) in solutions.iter().enumerate() {
        println!(
            "  #{idx}: equation residual {:.3e}",
            riccati_residual(&w, x)?
        );
    }

    let mut min_distance = f64::INFINITY;
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            min_distance = min_distance.min(solutions[i].sub(&solutions[j]).norm_fro());
        }
    }
    println!("pairwise minimum distance: {min_distance:.6} (>= 2/sigma_max = {:.6})", 2.0 / f.sigma()[0]);
    println!(
        "each sign choice carries an affine family of dimension {} (the map Y -> P Y P' has kernel dimension {})",
        family_dimension(&f),
        family_parameter_kernel_dimension(&f)
    );
    Ok(())
}
