//! When does `(AB)+ = B+ A+`? Exactly when `X = B+ A+` solves the matrix
//! equation for `W = AB`. This example runs the full equivalence battery
//! on three kinds of pairs.
//!
//! ```bash
//! cargo run --example reverse_order_law
//! ```

use riccati::rng::SplitMix64;
use riccati::rol::rol_report;
use riccati::Matrix;

fn show(label: &str, a: &Matrix, b: &Matrix) -> riccati::Result<()> {
    let report = rol_report(a, b, 1e-8)?;
    println!("{label}");
    println!(
        "  reverse order law {:?} | product condition {:?} | lowest-rank identity {:?}",
        report.rol.verdict, report.greville.verdict, report.tian37.verdict
    );
    println!(
        "  equation for B+A+ {:?} | fixed point {:?} | range equality {} | consistent {}",
        report.riccati_product.outcome.verdict,
        report.riccati_product.identity_fixed_point.verdict,
        report.range_equal,
        report.consistent
    );
    Ok(())
}

fn main() -> riccati::Result<()> {
    let mut rng = SplitMix64::new(11);

    // Adjoint pair: the law always holds.
    let a = rng.complex_matrix(4, 3);
    let b = a.conj_transpose();
    show("B = A* (law holds)", &a, &b)?;

    // Generic low-rank pair: the law fails and the ranges differ.
    let a = rng.low_rank_product(5, 2, 9);
    let b = rng.low_rank_product(9, 3, 8);
    show("generic low-rank pair (law fails)", &a, &b)?;

    // Full-column-rank left factor: ranges agree, the law still fails.
    let a = rng.uniform_matrix(10, 9);
    let b = rng.low_rank_product(9, 2, 5);
    show("full-column-rank A (ranges equal, law fails)", &a, &b)?;
    Ok(())
}
