//! Exact computations for the two-state free Brownian motion.

pub mod cumulants;
pub mod error;
pub mod fock;
pub mod generator;
pub mod partitions;
pub mod poly;
pub mod scalar;
pub mod spectral;
pub mod variations;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Exact scalar used throughout the crate.
pub type Rational = BigRational;

/// Concrete instantiations over [`Rational`].
pub type RationalPoly = poly::Poly<Rational>;
/// Polynomials in `(x, t)` with rational coefficients.
pub type XtPoly = poly::BiPoly<Rational>;
pub type Cumulants = cumulants::CumulantSpec<Rational>;
pub type Moments = cumulants::MomentSequence<Rational>;
pub type TwoStateSpec = cumulants::TwoStateElementSpec<Rational>;
pub type IncrementFamily = cumulants::IncrementFamilySpec<Rational>;
pub type Jacobi = spectral::JacobiParams<Rational>;
pub type Fock = fock::FockModel<Rational>;
