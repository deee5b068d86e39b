//! Exact rational linear algebra: dense matrices, Kronecker products,
//! elimination, and nonnegative feasibility with certificates.

mod elim;
mod lp;
mod matrix;

pub use elim::{in_span, null_space, rank, rref, solve_particular};
pub use lp::{lp_feasible, verify_farkas, verify_witness, FeasibilityResult};
pub use matrix::{kron_apply, kron_vec, kronecker_all, Matrix};
