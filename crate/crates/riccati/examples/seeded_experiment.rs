//! Seeded randomized experiment: rank-7 products `rand(10,7) * rand(7,15)`,
//! random sign diagonal and random free part. The summed identity residual
//! stays at roundoff level while the idempotency gap takes the closed-form
//! value `2 sqrt(#minus signs)`.
//!
//! ```bash
//! cargo run --example seeded_experiment
//! ```

use riccati::rng::SplitMix64;
use riccati::verify::{idempotency_gaps, riccati_residual};
use riccati::{
    cluster_singular_values, construct_solution, pinv, svd, SolutionParams, TolerancePolicy,
    DEFAULT_GAP_TOL,
};

fn main() -> riccati::Result<()> {
    for seed in 0..5u64 {
        let mut rng = SplitMix64::new(seed);
        let w = rng.low_rank_product(10, 7, 15);
        let f = svd(&w, TolerancePolicy::Default);
        let clusters = cluster_singular_values(&f, DEFAULT_GAP_TOL);

        let signs: Vec<i8> = (0..clusters.count()).map(|_| rng.next_sign()).collect();
        let mut params = SolutionParams::from_signs(&clusters, &signs, 10, 15)?;
        params.y_free = rng.uniform_matrix(15, 10);
        let x = construct_solution(&f, &clusters, &params)?;

        let wp = pinv(&w, TolerancePolicy::Default);
        let wx = &w * &x;
        let xw = &x * &w;
        let summed = riccati_residual(&w, &x)?
            + (&xw * &x).sub(&wp).norm_fro()
            + (&(&xw * &xw) * &xw).sub(&xw).norm_fro()
            + (&(&wx * &wx) * &wx).sub(&wx).norm_fro();
        let minus = signs.iter().filter(|&&s| s < 0).count();
        let (gap, _) = idempotency_gaps(&w, &x)?;
        println!(
            "seed {seed}: rank {}, signs {:?} -> summed residual {:.3e}, \
             ||(WX)^2-WX|| = {:.12} (2 sqrt({minus}) = {:.12})",
            f.rank(),
            signs,
            summed,
            gap,
            2.0 * (minus as f64).sqrt()
        );
    }
    Ok(())
}
