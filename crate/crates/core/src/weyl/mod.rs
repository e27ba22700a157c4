//! Weyl–Titchmarsh function `m_∞(λ)` of `−y″ + q(x) y` on `[a, +∞)`.
//!
//! Normalization: `φ₂ + m_∞ φ₁ ∈ L²` with `φ₁(a) = 0, φ₁′(a) = 1,
//! φ₂(a) = −1, φ₂′(a) = 0`. For `q ≡ 0` this gives `m_∞(λ) = −i√λ`
//! (Im √λ > 0), so `−m_∞` is the Herglotz function and `m_∞` is real and
//! increasing toward `+∞` along the negative axis.

mod cauchy;
mod potential;
mod riccati;

use num_complex::Complex64;

pub use cauchy::{solve_cauchy, CauchySolution};
pub use potential::{Potential, PotentialKind};
pub use riccati::{weyl_m, weyl_m_dirichlet, weyl_m_neg_zero, SeedBranch, WeylSettings};

use crate::error::{Error, Result};
use crate::funclass::AnalyticFunction;
use crate::numeric::{sqrt_upper, I};

#[derive(Debug, Clone, PartialEq)]
pub enum WeylSource {
    ClosedFormFree,
    ClosedFormConstant(f64),
    Numeric {
        potential: Potential,
        settings: WeylSettings,
    },
}

/// Evaluator for `m_∞` with its cached limit `m_∞(−0)`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylFunction {
    source: WeylSource,
    m_at_neg_zero: f64,
}

/// Points where a numeric construction is compared against the free closed form.
const AUDIT_POINTS: [Complex64; 3] = [I, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 1.0)];

impl WeylFunction {
    pub fn free() -> Self {
        Self {
            source: WeylSource::ClosedFormFree,
            m_at_neg_zero: 0.0,
        }
    }

    /// `m_∞(λ) = −i√(λ − c)`. Requires `c ≥ 0` so that `m_∞(−0)` exists.
    pub fn constant(c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::Domain {
                point: Complex64::new(c, 0.0),
                reason: "m(-0) requires the spectrum [c, inf) to lie in [0, inf)".into(),
            });
        }
        Ok(Self {
            source: WeylSource::ClosedFormConstant(c),
            m_at_neg_zero: c.sqrt(),
        })
    }

    /// ODE-backed construction.
    ///
    /// The same settings are first run on the free potential and must
    /// reproduce `−i√λ`; otherwise construction is refused.
    pub fn numeric(potential: Potential, settings: WeylSettings) -> Result<Self> {
        let free = Potential::free(0.0);
        for &lambda in &AUDIT_POINTS {
            let m = weyl_m(&free, lambda, &settings)?;
            let want = -I * sqrt_upper(lambda);
            if (m - want).norm() > 1e-6 * want.norm().max(1.0) {
                return Err(Error::Consistency(format!(
                    "free-case normalization audit failed at lambda = {lambda}: got {m}, expected {want}"
                )));
            }
        }
        let m_at_neg_zero = weyl_m_neg_zero(&potential, &settings)?;
        Ok(Self {
            source: WeylSource::Numeric {
                potential,
                settings,
            },
            m_at_neg_zero,
        })
    }

    /// Closed form for free and constant potentials, numeric otherwise.
    pub fn for_potential(potential: Potential, settings: WeylSettings) -> Result<Self> {
        match potential.kind {
            PotentialKind::Free => Ok(Self::free()),
            PotentialKind::Constant(c) => Self::constant(c),
            PotentialKind::Table { .. } => Self::numeric(potential, settings),
        }
    }

    pub fn source(&self) -> &WeylSource {
        &self.source
    }

    /// Cached `m_∞(−0)` (may be `+∞`).
    pub fn m_at_neg_zero(&self) -> f64 {
        self.m_at_neg_zero
    }

    pub fn description(&self) -> String {
        match &self.source {
            WeylSource::ClosedFormFree => "free (closed form)".into(),
            WeylSource::ClosedFormConstant(c) => format!("const:{c} (closed form)"),
            WeylSource::Numeric { potential, .. } => format!("{} (numeric)", potential.description),
        }
    }

    fn spectrum_start(&self) -> f64 {
        match &self.source {
            WeylSource::ClosedFormFree => 0.0,
            WeylSource::ClosedFormConstant(c) => *c,
            WeylSource::Numeric { potential, .. } => potential.tail_value(),
        }
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let start = self.spectrum_start();
        if lambda.im == 0.0 && lambda.re >= start {
            return Err(Error::Domain {
                point: lambda,
                reason: format!("real lambda inside the essential spectrum [{start}, inf)"),
            });
        }
        match &self.source {
            WeylSource::ClosedFormFree => Ok(-I * sqrt_upper(lambda)),
            WeylSource::ClosedFormConstant(c) => Ok(-I * sqrt_upper(lambda - c)),
            WeylSource::Numeric {
                potential,
                settings,
            } => weyl_m(potential, lambda, settings),
        }
    }

    pub fn as_function(&self) -> AnalyticFunction {
        let w = self.clone();
        AnalyticFunction::new(format!("m_inf[{}]", self.description()), move |z| w.eval(z))
    }
}
