//! Complete solution set of the matrix equation `X W W* W X = W*`.
//!
//! For any rectangular complex (or real) matrix `W` with SVD
//! `W = U Sigma V*`, every solution `X` has the form
//!
//! ```text
//! X = V Sigma+ D U*  +  P_N(W) Y P_N(W*)
//! ```
//!
//! where `D` carries one involutory block (`X_i^2 = I`) per repeated
//! singular value and `Y` is free. This crate constructs, enumerates and
//! decomposes that family, and verifies the identities every solution
//! obeys: `X W X = W+`, tripotency of `W X` and `X W`, the equivalence of
//! the equation (for `W = A B`, `X = B+ A+`) with the reverse order law
//! `(A B)+ = B+ A+`, and the maximal/stabilizing structure of Hermitian
//! solutions.
//!
//! Everything is backed by a self-contained one-sided Jacobi SVD over
//! complex matrices; there are no external numerical dependencies. All
//! types are immutable after construction and all operations are pure, so
//! the whole API is safe to use from multiple threads.
//!
//! The `riccati` binary (see the `cli` module) exposes the library as
//! `solve`, `verify`, `enumerate`, `rol`, `spectrum` and `hermitian`
//! subcommands with deterministic, seedable JSON reports; the crate's
//! `examples/` directory has a runnable walk-through per capability.

pub mod cli;
mod error;
pub mod hermitian;
pub mod io;
pub mod mat;
pub mod rng;
pub mod rol;
pub mod schur;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use mat::{
    hermitian_eig, null_projector, penrose_check, pinv, svd, HermitianEig, Matrix, NullSide,
    PenroseFlags, SvdFactorization, TolerancePolicy,
};
pub use solver::{
    canonical_solution, cluster_singular_values, construct_solution, decompose_solution,
    enumerate_sign_solutions, family_dimension, random_involution, SingularClusters,
    SolutionParams,
};

/// Default relative tolerance for every identity check: square-root-of-eps
/// headroom above the accuracy of the Jacobi kernels.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Default relative gap below which consecutive singular values are treated
/// as one multiple singular value.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
