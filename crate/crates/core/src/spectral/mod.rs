//! Jacobi parameters, orthogonal polynomials and the explicit measures of
//! the two-state free Brownian motion.

mod jacobi;
mod measures;

pub use jacobi::{
    chebyshev_u, jacobi_shift_phi_t, jacobi_to_moments, moments_to_jacobi, orthogonal_polynomials,
    shift_moments_by_series, JacobiParams,
};
pub use measures::{
    density_eval, integrate, quadrature_moment, quadrature_moment_with_nodes, Atom, DensityValue,
    MeasureKind, MeasureSpec, DEFAULT_QUADRATURE_NODES,
};
