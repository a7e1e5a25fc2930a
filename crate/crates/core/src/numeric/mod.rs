//! Numerical building blocks: deterministic summation, quadrature, special
//! functions and small dense linear algebra.

pub mod bessel;
pub mod linalg;
pub mod quadrature;
pub mod sum;

pub use sum::pairwise_sum;
