use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{limit_neg_infinity, limit_neg_zero, AnalyticFunction, Variant};
use crate::error::{Error, Result};
use crate::numeric::extrapolate::richardson;
use crate::numeric::quadrature::GaussLegendre;

const GL_ORDER: usize = 16;

/// Settings for Stieltjes–Perron inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionOptions {
    /// Strictly decreasing distances above the real axis.
    pub epsilon_ladder: Vec<f64>,
    /// Total number of quadrature nodes (a multiple of 16 is used).
    pub quadrature_points: usize,
    pub tol: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            epsilon_ladder: vec![1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5],
            quadrature_points: 2048,
            tol: 1e-6,
        }
    }
}

impl InversionOptions {
    fn validate(&self) -> Result<()> {
        if self.epsilon_ladder.is_empty()
            || self.epsilon_ladder.iter().any(|&e| !(e > 0.0))
            || self.epsilon_ladder.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::Input(
                "epsilon ladder must be positive and strictly decreasing".into(),
            ));
        }
        if self.quadrature_points < GL_ORDER {
            return Err(Error::Input(format!(
                "need at least {GL_ORDER} quadrature points"
            )));
        }
        Ok(())
    }
}

/// `(1/π) ∫ Im f(t + iε) w(t) dt` over the panels, extrapolated to ε = 0.
fn inversion_integral<W>(
    f: &AnalyticFunction,
    weight: W,
    breaks: &[f64],
    ladder: &[f64],
    rule: &GaussLegendre,
) -> Result<(f64, f64)>
where
    W: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut s = 0.0;
            // fixed summation order keeps the result reproducible
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let t = mid + half * x;
                s += wt * f.eval(Complex64::new(t, eps))?.im * weight(t);
            }
            total += s * half;
        }
        values.push(total / PI);
    }
    if ladder.len() == 1 {
        return Ok((values[0], f64::INFINITY));
    }
    let est = richardson(ladder, &values, ladder.len() - 1).ok_or_else(|| Error::Accuracy {
        reason: "non-finite inversion values".into(),
        estimate: f64::NAN,
    })?;
    Ok((est.value, est.error))
}

fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    (0..=panels)
        .map(|k| a + (b - a) * k as f64 / panels as f64)
        .collect()
}

/// Mass `G(t2) − G(t1)` of the representing measure.
///
/// Atoms sitting exactly on `t1` or `t2` are not resolved; choose the slice
/// endpoints away from them.
pub fn stieltjes_inversion_slice(
    f: &AnalyticFunction,
    t1: f64,
    t2: f64,
    opts: &InversionOptions,
) -> Result<f64> {
    opts.validate()?;
    if !(t1 >= 0.0 && t2 > t1) {
        return Err(Error::Input(format!("need 0 <= t1 < t2, got [{t1}, {t2}]")));
    }
    let rule = GaussLegendre::new(GL_ORDER);
    let panels = (opts.quadrature_points / GL_ORDER).max(1);
    let (fine, err) = inversion_integral(
        f,
        |_| 1.0,
        &uniform_breaks(t1, t2, panels),
        &opts.epsilon_ladder,
        &rule,
    )?;
    let (coarse, _) = inversion_integral(
        f,
        |_| 1.0,
        &uniform_breaks(t1, t2, (panels / 2).max(1)),
        &opts.epsilon_ladder,
        &rule,
    )?;
    let achieved = err.max((fine - coarse).abs());
    if achieved > opts.tol * fine.abs().max(1.0) {
        return Err(Error::Accuracy {
            reason: format!("inversion error estimate {achieved:e}"),
            estimate: fine,
        });
    }
    Ok(fine)
}

/// `∫ dG(t)/t` by direct inversion quadrature over geometric panels in
/// `[1e-8, 1e10]`. Intended as an independent check of
/// [`angle_from_measure`]; the truncated ends contribute O(1e-4) for
/// densities behaving like `√t` at 0 and `1/√t` at ∞.
pub fn angle_by_inversion(f: &AnalyticFunction) -> Result<f64> {
    let rule = GaussLegendre::new(GL_ORDER);
    let mut breaks = vec![1e-8];
    while *breaks.last().unwrap() < 1e10 {
        let next = breaks.last().unwrap() * 2.0;
        breaks.push(next);
    }
    let ladder = [1e-12, 5e-13, 2.5e-13];
    let (value, _) = inversion_integral(f, |t| 1.0 / t, &breaks, &ladder, &rule)?;
    Ok(value)
}

/// `tan α = ∫ dG(t)/t = f(−0) − f(−∞)` for a Stieltjes function.
///
/// `+∞` when `f(−0)` diverges.
pub fn angle_from_measure(f: &AnalyticFunction, tol: f64) -> Result<f64> {
    let at_zero = limit_neg_zero(f, tol)?;
    if at_zero == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let at_infinity = limit_neg_infinity(f, tol)?;
    if !at_infinity.is_finite() {
        return Err(Error::Class(format!(
            "limit at -inf is {at_infinity}; not a Stieltjes function"
        )));
    }
    Ok(at_zero - at_infinity)
}

/// Parameters of the integral representation recovered numerically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralRepresentation {
    pub gamma: f64,
    /// Coefficient of `z` (zero for Stieltjes functions).
    pub linear_coeff: f64,
    /// `(t1, t2, G(t2) − G(t1))`
    pub measure_slices: Vec<(f64, f64, f64)>,
    pub inverse_variant: bool,
}

pub fn integral_representation(
    f: &AnalyticFunction,
    variant: Variant,
    slices: &[(f64, f64)],
    opts: &InversionOptions,
    tol: f64,
) -> Result<IntegralRepresentation> {
    let (gamma, linear_coeff) = match variant {
        Variant::Stieltjes => (limit_neg_infinity(f, tol)?, 0.0),
        Variant::InverseStieltjes => {
            let slope = AnalyticFunction::new("f(z)/z", {
                let f = f.clone();
                move |z| Ok(f.eval(z)? / z)
            });
            (limit_neg_zero(f, tol)?, limit_neg_infinity(&slope, tol)?)
        }
    };
    let measure_slices = slices
        .iter()
        .map(|&(a, b)| stieltjes_inversion_slice(f, a, b, opts).map(|m| (a, b, m)))
        .collect::<Result<Vec<_>>>()?;

    let inverse_variant = variant == Variant::InverseStieltjes;
    let bad = |what: &str| Err(Error::Class(format!("{}: {what}", f.description())));
    if !gamma.is_finite() {
        return bad("gamma is not finite");
    }
    if measure_slices.iter().any(|s| s.2 < -1e-10) {
        return bad("negative measure slice");
    }
    if !inverse_variant && gamma < -1e-10 {
        return bad("gamma < 0 for a Stieltjes function");
    }
    if inverse_variant && (gamma > 1e-10 || linear_coeff < -1e-10) {
        return bad("gamma > 0 or negative linear term for an inverse Stieltjes function");
    }
    Ok(IntegralRepresentation {
        gamma,
        linear_coeff,
        measure_slices,
        inverse_variant,
    })
}
