//! Hermitian solutions for Hermitian invertible `W`: the sign family, the
//! Loewner-maximal element, and the unique stabilizing member.
//!
//! ```bash
//! cargo run --example hermitian_family
//! ```

use riccati::hermitian::{hermitian_solutions, loewner_leq, stabilizing_check};
use riccati::{Matrix, DEFAULT_GAP_TOL};

fn describe(label: &str, w: &Matrix) -> riccati::Result<()> {
    let set = hermitian_solutions(w, 1e-8, DEFAULT_GAP_TOL)?;
    println!("{label}: eigenvalues {:?}", set.eig.lambda());
    for sol in &set.sign_solutions {
        println!(
            "  signs {:?}: spectrum of -W^3 X = {:?}, stabilizing: {}",
            sol.signs, sol.spectrum, sol.stabilizing
        );
    }
    if let Some(maximal) = &set.maximal {
        println!(
            "  maximal element equals W^-1: {} (convention discrepancy: {})",
            set.w_inverse_is_maximal, set.convention_discrepancy
        );
        for sol in &set.sign_solutions {
            assert!(loewner_leq(&sol.matrix, maximal, 1e-8)?);
        }
    }
    Ok(())
}

fn main() -> riccati::Result<()> {
    // Positive definite: W^-1 is both maximal and the unique stabilizing
    // solution.
    describe("positive definite diag(2, 3)", &Matrix::diag_real(&[2.0, 3.0]))?;

    // Indefinite: the pairwise maximum of the family is |W|^-1, which
    // differs from W^-1; the report flags the discrepancy rather than
    // hiding it. The stabilizing member is still W^-1.
    describe("indefinite diag(2, -1)", &Matrix::diag_real(&[2.0, -1.0]))?;

    // Standalone stabilizing check with the spectrum read analytically.
    let w = Matrix::diag_real(&[2.0, 3.0]);
    let x = Matrix::diag_real(&[0.5, -1.0 / 3.0]);
    let (ok, spectrum) = stabilizing_check(&w, &x, 1e-8)?;
    println!("diag(1/2, -1/3) against diag(2, 3): stabilizing {ok}, spectrum {spectrum:?}");
    Ok(())
}
