//! Exact sparse model of the process on the full Fock space of
//! `L²[0, T)`, restricted to step functions on a uniform grid.
//!
//! Basis words list cell indices most recently created first, so the word
//! `(j_1, …, j_k)` stands for `χ_{j_1} ⊗ … ⊗ χ_{j_k}`.

mod checks;
mod operator;
mod vector;

pub use checks::{
    cond_exp_obstruction, elementary_tensor, eta_s_vacuum_coefficient, freeness_check,
    kernel_norm_sq, kernel_residual, kernel_residual_abs, kernel_vector, martingale_check, p_poly, interval_product_vector,
    q_poly, FreenessReport, IncrementPoly, IntervalPower, ObstructionReport,
};
pub use operator::{FockModel, IntervalGrid, Operator, OperatorExpr};
pub use vector::{FockVector, Word};
