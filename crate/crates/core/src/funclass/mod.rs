//! Numerical analysis of scalar Herglotz–Nevanlinna functions.
//!
//! Membership tests for the Stieltjes and inverse Stieltjes classes, sector
//! kernels and their positivity, limits along the negative real axis and
//! recovery of the representing measure by Stieltjes–Perron inversion.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod inversion;
mod kernel;
mod limits;

pub use inversion::{
    angle_by_inversion, angle_from_measure, integral_representation, stieltjes_inversion_slice,
    IntegralRepresentation, InversionOptions,
};
pub use kernel::{
    build_sector_kernel, is_psd, is_psd_matrix, min_sector_angle, AngleEstimate, PsdOutcome,
    SamplingPlan, SectorKernel, DEFAULT_PSD_TOL,
};
pub use limits::{limit_along_ray, limit_neg_infinity, limit_neg_zero, RayDirection, RaySequence};

type Evaluator = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;

/// A scalar function of a complex variable, evaluated off the cut [0, +∞).
#[derive(Clone)]
pub struct AnalyticFunction {
    evaluator: Arc<Evaluator>,
    description: String,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("description", &self.description)
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self {
            evaluator: Arc::new(f),
            description: description.into(),
        }
    }

    /// Wrap an infallible closure.
    pub fn from_fn<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(description, move |z| Ok(f(z)))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("{c}"), move |_| Complex64::new(c, 0.0))
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Evaluate at `z`; non-finite results are reported as evaluation errors.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let v = (self.evaluator)(z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                point: z,
                reason: format!("non-finite value {v}"),
            })
        }
    }

    /// The function `z ↦ f(z)/z`.
    pub fn divided_by_z(&self) -> Self {
        let inner = self.clone();
        Self::new(format!("({})/z", self.description), move |z| {
            Ok(inner.eval(z)? / z)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Stieltjes,
    InverseStieltjes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckOutcome {
    Pass,
    /// First sample where the tested quantity fell below `-tol`.
    Fail {
        witness: Complex64,
        value: f64,
    },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

/// `Im f(z) ≥ −tol` at every sample of the open upper half-plane.
pub fn herglotz_check(
    f: &AnalyticFunction,
    samples: &[Complex64],
    tol: f64,
) -> Result<CheckOutcome> {
    if tol <= 0.0 {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    if let Some(z) = samples.iter().find(|z| z.im <= 0.0) {
        return Err(Error::Domain {
            point: *z,
            reason: "sample not in the upper half-plane".into(),
        });
    }
    for &z in samples {
        let v = f.eval(z)?.im;
        if v < -tol {
            return Ok(CheckOutcome::Fail {
                witness: z,
                value: v,
            });
        }
    }
    Ok(CheckOutcome::Pass)
}

/// The class quantity `Im[z f(z)]/Im z` (Stieltjes) or `Im[f(z)/z]/Im z`
/// (inverse Stieltjes) at a single off-axis point.
pub fn class_quantity(f: &AnalyticFunction, z: Complex64, variant: Variant) -> Result<f64> {
    let v = f.eval(z)?;
    let w = match variant {
        Variant::Stieltjes => z * v,
        Variant::InverseStieltjes => v / z,
    };
    Ok(w.im / z.im)
}

pub fn stieltjes_check(
    f: &AnalyticFunction,
    samples: &[Complex64],
    tol: f64,
    variant: Variant,
) -> Result<CheckOutcome> {
    if tol <= 0.0 {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    if let Some(z) = samples.iter().find(|z| z.im == 0.0) {
        let reason = if z.re >= 0.0 {
            "sample on the cut [0, +inf)"
        } else {
            "sample on the real axis"
        };
        return Err(Error::Domain {
            point: *z,
            reason: reason.into(),
        });
    }
    for &z in samples {
        let q = class_quantity(f, z, variant)?;
        if q < -tol {
            return Ok(CheckOutcome::Fail {
                witness: z,
                value: q,
            });
        }
    }
    Ok(CheckOutcome::Pass)
}
