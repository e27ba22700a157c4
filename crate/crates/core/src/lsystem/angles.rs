use num_complex::Complex64;
use serde::Serialize;

use super::{
    classify_extension, nearly_equal, ExtensionParameter, SchrodingerLSystem, EQUALITY_RTOL,
};
use crate::error::{Error, Result};
use crate::funclass::{limit_neg_infinity, limit_neg_zero, Variant};

/// Agreement required between closed-form and extrapolated class limits.
const CROSS_CHECK_RTOL: f64 = 1e-6;
const LIMIT_TOL: f64 = 1e-10;

/// `μ₀ = (Im h)²/(m_∞(−0) + Re h) + Re h`; `+∞` when `Re h + m_∞(−0) ≤ 0`,
/// in which case `T_h` is at best accretive and not sectorial.
pub fn mu0_stieltjes(h: Complex64, m_neg_zero: f64) -> f64 {
    let s = m_neg_zero + h.re;
    if s <= 0.0 || nearly_equal(h.re, -m_neg_zero) {
        return f64::INFINITY;
    }
    h.im * h.im / s + h.re
}

pub fn mu0_inverse(h: Complex64) -> f64 {
    h.re
}

/// Accretivity and sectoriality of `T_h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThReport {
    pub accretive: bool,
    pub sectorial: bool,
    /// `Im h/(Re h + m_∞(−0))`; `+∞` when accretive but not sectorial,
    /// `None` when not accretive.
    pub theta_tan: Option<f64>,
    pub exact: bool,
}

pub fn t_h_report(h: Complex64, m_neg_zero: f64) -> ThReport {
    let boundary = nearly_equal(h.re, -m_neg_zero);
    let accretive = boundary || h.re > -m_neg_zero;
    let sectorial = accretive && !boundary;
    let theta_tan = if sectorial {
        Some(h.im / (h.re + m_neg_zero))
    } else if accretive {
        Some(f64::INFINITY)
    } else {
        None
    };
    ThReport {
        accretive,
        sectorial,
        theta_tan,
        exact: true,
    }
}

/// `(μ − Re h)(m + Re h) − (Im h)²` and a scale for judging it zero.
fn critical_denominator(h: Complex64, m0: f64, mu: f64) -> (f64, f64) {
    let a = (mu - h.re) * (m0 + h.re);
    let b = h.im * h.im;
    (a - b, a.abs() + b)
}

/// Class tangents `(tan α₁, tan α₂)` on the given branch, in closed form.
/// No check that `μ` actually belongs to the branch.
pub(crate) fn branch_angles(
    h: Complex64,
    m0: f64,
    mu: ExtensionParameter,
    variant: Variant,
) -> (f64, f64) {
    match (variant, mu) {
        (Variant::Stieltjes, ExtensionParameter::Infinite) => {
            let s = m0 + h.re;
            let a2 = if s <= 0.0 || nearly_equal(h.re, -m0) {
                f64::INFINITY
            } else {
                h.im / s
            };
            (0.0, a2)
        }
        (Variant::Stieltjes, ExtensionParameter::Finite(mu)) => {
            let a1 = h.im / (mu - h.re);
            let (d, scale) = critical_denominator(h, m0, mu);
            let a2 = if d.abs() <= EQUALITY_RTOL * scale {
                f64::INFINITY
            } else {
                (m0 + mu) * h.im / d
            };
            (a1, a2)
        }
        (Variant::InverseStieltjes, mu) => {
            let mu = mu.as_f64();
            let (d, _) = critical_denominator(h, m0, mu);
            // d ≤ −(Im h)² < 0 on this branch
            let a1 = (-(m0 + mu) * h.im / d).max(0.0);
            let a2 = if nearly_equal(mu, h.re) {
                f64::INFINITY
            } else {
                h.im / (h.re - mu)
            };
            (a1, a2)
        }
    }
}

/// Closed-form class tangents together with the branch they belong to.
pub fn class_angles_closed_form(sys: &SchrodingerLSystem) -> Result<(Variant, f64, f64)> {
    let variant = classify_extension(sys)?
        .variant()
        .ok_or_else(|| Error::Class(format!("mu = {} lies in neither branch", sys.mu())))?;
    let (a1, a2) = branch_angles(sys.h(), sys.m_at_neg_zero(), sys.mu(), variant);
    Ok((variant, a1, a2))
}

fn agrees(closed: f64, numeric: f64) -> bool {
    if closed.is_infinite() || numeric.is_infinite() {
        return closed == numeric;
    }
    (closed - numeric).abs() <= CROSS_CHECK_RTOL * closed.abs().max(1.0)
}

/// `(tan α₁, tan α₂)` from the closed form, cross-checked against limits of
/// the impedance along the negative axis.
///
/// Stieltjes branch: `tan α₁ = V(−∞)`, `tan α₂ = V(−0)`.
/// Inverse branch: `tan α₁ = −V(−0)`, `tan α₂ = −V(−∞)`.
pub fn class_angles(sys: &SchrodingerLSystem) -> Result<(f64, f64)> {
    let (variant, a1, a2) = class_angles_closed_form(sys)?;
    let v = sys.impedance_fn();
    let at_zero = limit_neg_zero(&v, LIMIT_TOL)?;
    let at_infinity = limit_neg_infinity(&v, LIMIT_TOL)?;
    let (n1, n2) = match variant {
        Variant::Stieltjes => (at_infinity, at_zero),
        Variant::InverseStieltjes => (-at_zero, -at_infinity),
    };
    if !agrees(a1, n1) || !agrees(a2, n2) {
        return Err(Error::Class(format!(
            "class limits disagree with the closed form: closed ({a1}, {a2}), limits ({n1}, {n2})"
        )));
    }
    Ok((a1, a2))
}

/// `tan α = tan α₂ + 2√(tan α₁ (tan α₂ − tan α₁))`; `+∞` when `tan α₂ = +∞`
/// (accretive, not sectorial).
pub fn alpha_from_class(tan_a1: f64, tan_a2: f64) -> Result<f64> {
    if tan_a1.is_nan() || tan_a2.is_nan() || tan_a1 < 0.0 || tan_a1 == f64::INFINITY {
        return Err(Error::Input(format!(
            "invalid class tangents ({tan_a1}, {tan_a2})"
        )));
    }
    if tan_a2 == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let gap = tan_a2 - tan_a1;
    if gap < 0.0 && !nearly_equal(tan_a1, tan_a2) {
        return Err(Error::Input(format!(
            "need tan a1 <= tan a2, got ({tan_a1}, {tan_a2})"
        )));
    }
    Ok(tan_a2 + 2.0 * (tan_a1 * gap.max(0.0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beta {
    pub tan: f64,
    /// `tan α₁ = 0`: the formula collapses to 0.
    pub degenerate: bool,
}

/// `tan β = tan α₁ + 2√(tan α₁ tan α₂)`.
pub fn universal_beta(tan_a1: f64, tan_a2: f64) -> Beta {
    if tan_a1 == 0.0 {
        return Beta {
            tan: 0.0,
            degenerate: true,
        };
    }
    if tan_a2 == f64::INFINITY || tan_a1 == f64::INFINITY {
        return Beta {
            tan: f64::INFINITY,
            degenerate: false,
        };
    }
    Beta {
        tan: tan_a1 + 2.0 * (tan_a1 * tan_a2).sqrt(),
        degenerate: false,
    }
}

/// `f(μ) = tan α₂ + 2√(tan α₁ tan α₂)` with the class tangents of the
/// `(h, μ)` system on the given branch.
///
/// Decreasing from `+∞` at `μ₀` to `tan θ` as `μ → ∞` on the Stieltjes
/// branch; equal to `tan θ` at `μ = −m_∞(−0)` on the inverse branch.
/// `mu = +∞` is accepted on the Stieltjes branch.
pub fn f_mu(h: Complex64, m_neg_zero: f64, mu: f64, branch: Variant) -> Result<f64> {
    let outside = |what: &str| Error::Domain {
        point: Complex64::new(mu, 0.0),
        reason: what.to_string(),
    };
    if !(h.im > 0.0) || !m_neg_zero.is_finite() || mu.is_nan() {
        return Err(Error::Input(format!(
            "invalid arguments h = {h}, m(-0) = {m_neg_zero}, mu = {mu}"
        )));
    }
    let param = ExtensionParameter::from_f64(mu).map_err(|_| outside("mu must be real or +inf"))?;
    match branch {
        Variant::Stieltjes => {
            let mu0 = mu0_stieltjes(h, m_neg_zero);
            if !param.is_infinite() && (mu <= mu0 || nearly_equal(mu, mu0)) {
                return Err(outside(&format!("Stieltjes branch needs mu > mu0 = {mu0}")));
            }
        }
        Variant::InverseStieltjes => {
            let lower_ok = mu >= -m_neg_zero || nearly_equal(mu, -m_neg_zero);
            if !lower_ok || mu >= h.re || nearly_equal(mu, h.re) {
                return Err(outside(&format!(
                    "inverse branch needs {} <= mu < {}",
                    -m_neg_zero, h.re
                )));
            }
        }
    }
    let (a1, a2) = branch_angles(h, m_neg_zero, param, branch);
    Ok(a2 + 2.0 * (a1 * a2).sqrt())
}
