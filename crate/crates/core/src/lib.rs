//! Orthogonal polynomials on the unit circle and on lemniscates, their
//! reproducing kernels, and the scaling limits of those kernels.

pub mod error;
pub mod harness;
pub mod hyperfun;
pub mod lemniscate;
pub mod linalg;
pub mod model_circle;
pub mod opuc;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Extended (113-bit significand) real type.
pub type Ext = f128::f128;
pub type C64 = num_complex::Complex<f64>;
pub type CExt = num_complex::Complex<Ext>;
