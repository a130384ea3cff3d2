//! Weighted Bergman kernels of the unit disk for the measure
//! `|z|^(2β) (1 - |z|^2)^α dA` and numerical tools for locating their zeros.

pub mod analytic;
pub mod curves;
pub mod error;
pub mod evenodd;
pub mod kernel;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::KernelParams;
pub use poly::ComplexPoly;
pub use series::TruncatedSeries;
