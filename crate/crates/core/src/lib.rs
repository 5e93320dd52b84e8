//! Numerical toolkit for Dirichlet series of L-functions: functional-equation
//! data and lifts, coefficient generators, Euler-product splittings,
//! simultaneous Diophantine approximation, abscissa estimation, and
//! zero counting / majorant checks for ζ, Dirichlet L-functions and the
//! weight-12 eigenform.

pub mod abscissa;
pub mod analytic;
pub mod arith;
pub mod coefficients;
pub mod euler_split;
pub mod fe;
pub mod kronecker;
pub mod series;

pub use num_complex::Complex64;
