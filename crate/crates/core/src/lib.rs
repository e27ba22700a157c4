//! Impedance and transfer functions of L-systems whose main operator is a
//! one-dimensional Schrödinger operator on a half-line, together with the
//! Weyl–Titchmarsh function they are built from and the sectoriality
//! calculus for Stieltjes and inverse Stieltjes impedances.

pub mod error;
pub mod funclass;
pub mod lsystem;
pub mod numeric;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
