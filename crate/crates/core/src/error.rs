use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A function evaluator failed at a specific point.
    #[error("evaluation failed at z = {point}: {reason}")]
    Evaluation { point: Complex64, reason: String },

    #[error("point {point} is outside the domain: {reason}")]
    Domain { point: Complex64, reason: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("pole of the impedance function at z = {0}")]
    Pole(Complex64),

    /// Inconsistency inside an otherwise valid computation (e.g. a kernel
    /// that came out non-Hermitian).
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("function is not in the required class: {0}")]
    Class(String),

    #[error("no limit: {0}")]
    NoLimit(String),

    #[error("accuracy target not met: {reason} (achieved estimate {estimate})")]
    Accuracy { reason: String, estimate: f64 },

    #[error("integration failed at x = {x}: {reason}")]
    Integration { x: f64, reason: String },

    #[error("no convergence in b: last iterates {previous} and {last}")]
    Convergence {
        previous: Complex64,
        last: Complex64,
    },

    /// Re h < -m(-0): the dissipative boundary operator is not accretive.
    #[error("boundary operator is not accretive: Re h = {re_h} < -m(-0) = {neg_m0}")]
    NotAccretive { re_h: f64, neg_m0: f64 },

    #[error("io: {0}")]
    Io(String),
}
