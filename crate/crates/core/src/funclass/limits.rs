use num_complex::Complex64;

use super::AnalyticFunction;
use crate::error::{Error, Result};
use crate::numeric::extrapolate::richardson;

/// Values beyond this magnitude on a monotone run are read as divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
/// Imaginary residue allowed on the negative real axis (relative).
const REAL_RESIDUE: f64 = 1e-9;
/// How far a monotone divergent sequence may be extended past its nominal length.
const MAX_EXTENSION: usize = 80;
const MAX_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayDirection {
    /// x → −0
    NegZero,
    /// x → −∞
    NegInfinity,
}

/// Geometric sample points `x_n = −scale·ratio^(∓n)`, `n = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySequence {
    pub scale: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for RaySequence {
    fn default() -> Self {
        Self {
            scale: 1.0,
            ratio: 4.0,
            count: 21,
        }
    }
}

impl RaySequence {
    fn point(&self, direction: RayDirection, n: usize) -> f64 {
        let p = self.ratio.powi(n as i32);
        match direction {
            RayDirection::NegZero => -self.scale / p,
            RayDirection::NegInfinity => -self.scale * p,
        }
    }
}

/// Extrapolation variable: √|x| toward −0, 1/√|x| toward −∞.
///
/// Boundary values of Herglotz functions built from `√z` expand in half-integer
/// powers of `x`, so polynomials in these variables cover both the analytic
/// and the square-root cases.
fn step_variable(direction: RayDirection, x: f64) -> f64 {
    match direction {
        RayDirection::NegZero => x.abs().sqrt(),
        RayDirection::NegInfinity => 1.0 / x.abs().sqrt(),
    }
}

/// Limit of a real function along the negative real axis.
///
/// Returns `±∞` when the samples grow monotonically past
/// [`DIVERGENCE_THRESHOLD`]; the sequence is extended beyond `seq.count`
/// while such growth continues.
pub fn limit_along_ray<F>(f: F, direction: RayDirection, seq: RaySequence, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if seq.count < 3 || seq.ratio <= 1.0 || seq.scale <= 0.0 {
        return Err(Error::Input(
            "ray sequence needs count >= 3, ratio > 1, scale > 0".into(),
        ));
    }
    let mut hs = Vec::with_capacity(seq.count);
    let mut ys = Vec::with_capacity(seq.count);
    for n in 0..seq.count {
        let x = seq.point(direction, n);
        hs.push(step_variable(direction, x));
        ys.push(f(x)?);
    }

    let window = seq.count.min(12);
    loop {
        let start = ys.len() - window.min(ys.len());
        if let Some(est) = richardson(&hs[start..], &ys[start..], MAX_ORDER) {
            if est.error <= tol * est.value.abs().max(1.0) {
                return Ok(est.value);
            }
        }

        let n = ys.len();
        let last = ys[n - 1];
        let growing = growing_run(&ys);
        if growing && last.abs() > DIVERGENCE_THRESHOLD {
            return Ok(f64::INFINITY.copysign(last));
        }
        if !growing || n >= seq.count + MAX_EXTENSION {
            let est = richardson(&hs, &ys, MAX_ORDER);
            return Err(Error::NoLimit(format!(
                "sequence along {direction:?} did not settle: last value {last}, best estimate {:?}",
                est.map(|e| (e.value, e.error))
            )));
        }
        let x = seq.point(direction, n);
        hs.push(step_variable(direction, x));
        ys.push(f(x)?);
    }
}

/// The last few samples grow in magnitude, with steps that do not shrink.
fn growing_run(ys: &[f64]) -> bool {
    let n = ys.len();
    if n < 4 {
        return false;
    }
    let tail = &ys[n - 4..];
    let same_sign = tail.iter().all(|y| y.signum() == tail[3].signum());
    let increasing = tail.windows(2).all(|w| w[1].abs() > w[0].abs());
    let d1 = (tail[2] - tail[1]).abs();
    let d2 = (tail[3] - tail[2]).abs();
    same_sign && increasing && d2 >= 0.99 * d1
}

fn real_on_negative_axis(f: &AnalyticFunction, x: f64) -> Result<f64> {
    let z = Complex64::new(x, 0.0);
    let v = f.eval(z)?;
    if v.im.abs() > REAL_RESIDUE * v.re.abs().max(1.0) {
        return Err(Error::Evaluation {
            point: z,
            reason: format!("function is not real on the negative axis (Im = {})", v.im),
        });
    }
    Ok(v.re)
}

/// `lim_{x→−0} f(x)` on `x_n = −4^{−n}`, `n = 0..=20`.
pub fn limit_neg_zero(f: &AnalyticFunction, tol: f64) -> Result<f64> {
    limit_along_ray(
        |x| real_on_negative_axis(f, x),
        RayDirection::NegZero,
        RaySequence::default(),
        tol,
    )
}

/// `lim_{x→−∞} f(x)` on `x_n = −4^{n}`, `n = 0..=20`.
pub fn limit_neg_infinity(f: &AnalyticFunction, tol: f64) -> Result<f64> {
    limit_along_ray(
        |x| real_on_negative_axis(f, x),
        RayDirection::NegInfinity,
        RaySequence::default(),
        tol,
    )
}
