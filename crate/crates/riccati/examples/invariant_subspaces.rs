//! Every solution is the graph of an invariant subspace of the block
//! matrix `M = [[0, W W* W], [W*, 0]]`; this example verifies the spectrum
//! of `M` and recovers a solution from a subspace basis.
//!
//! ```bash
//! cargo run --example invariant_subspaces
//! ```

use riccati::rng::SplitMix64;
use riccati::schur::{
    build_m, eigenstructure_report, extract_solution_from_basis, invariant_embedding_check,
};
use riccati::{canonical_solution, svd, Matrix, TolerancePolicy};

fn main() -> riccati::Result<()> {
    let mut rng = SplitMix64::new(2);
    let w = rng.low_rank_product(4, 2, 5);

    let report = eigenstructure_report(&w, 1e-9);
    println!("eigenvalues of M (each +-sigma^2, zeros from the kernel):");
    println!("  {:?}", report.eigenvalues);
    println!(
        "verified eigenvectors: {} of {} -> diagonalizable: {}",
        report.verified_count,
        w.rows() + w.cols(),
        report.diagonalizable
    );

    // The graph of a solution is M-invariant...
    let f = svd(&w, TolerancePolicy::Default);
    let x = canonical_solution(&f);
    let check = invariant_embedding_check(&w, &x, 1e-9)?;
    println!(
        "graph invariance residual for X = W+: {:.3e} (pass: {})",
        check.residual, check.pass
    );

    // ... and any basis of that subspace reproduces the same solution.
    let embedding = build_m(&w);
    let graph = Matrix::identity(w.rows()).vstack(&x);
    let change_of_basis = loop {
        let c = rng.complex_matrix(w.rows(), w.rows());
        let fc = svd(&c, TolerancePolicy::Default);
        if fc.rank() == w.rows() && fc.sigma()[0] / fc.sigma()[w.rows() - 1] <= 50.0 {
            break c;
        }
    };
    let recovered = extract_solution_from_basis(&embedding, &graph.mul(&change_of_basis), 1e-8)?;
    println!(
        "basis-change invariance: ||extracted - X|| = {:.3e}",
        recovered.sub(&x).norm_fro()
    );
    Ok(())
}
