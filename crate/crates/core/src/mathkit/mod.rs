//! Numerical kernels shared by the bound evaluators.

pub mod bessel;
pub mod cubic;
pub mod noncentral;
pub mod optimize;
pub mod quad;

pub use bessel::{log_bessel_i, log_bessel_i_real, ComplexLog};
pub use cubic::{q_inverse, unique_positive_root, CubicCoeffs};
pub use noncentral::noncentral_expectation;
pub use optimize::{maximize_scalar, minimize_scalar, ScalarOptimum};
pub use quad::{integrate, Domain, Quadrature, QuadratureSpec};
