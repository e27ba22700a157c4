//! Numerical building blocks: branch-aware complex helpers, an embedded
//! Runge–Kutta integrator, Gauss–Legendre quadrature, Richardson
//! extrapolation and a small Hermitian eigensolver.

pub mod complex;
pub mod eigen;
pub mod extrapolate;
pub mod ode;
pub mod quadrature;
pub mod sampling;

pub use complex::{sqrt_upper, I};
