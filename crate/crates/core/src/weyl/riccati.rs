//! Backward log-derivative sweep for the Weyl–Titchmarsh function.
//!
//! With `ψ = φ₂ + m φ₁` square integrable, `ψ(a) = −1` and `ψ′(a) = m`, so
//! `m = −u(a)` for the log-derivative `u = ψ′/ψ`. `u` obeys the Riccati
//! equation `u′ = q − λ − u²`; integrated from right to left it is attracted
//! to the log-derivative of the decaying solution, which is seeded by the
//! WKB value `u(b) = i√(λ − q(b))` (Im √ > 0).

use std::ops::ControlFlow;

use num_complex::Complex64;

use super::{solve_cauchy, Potential};
use crate::error::{Error, Result};
use crate::funclass::{limit_along_ray, RayDirection, RaySequence};
use crate::numeric::{ode::Dopri45, sqrt_upper, I};

/// Switch between `u` and `w = 1/u` beyond this magnitude.
const POLE_SWITCH: f64 = 1e6;
/// Seed error is damped by at least `exp(-2 * SEED_DAMPING)`.
const SEED_DAMPING: f64 = 40.0;

/// Which WKB solution seeds the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedBranch {
    /// `i√(λ − q)` with `Im √ > 0`: the solution decaying at +∞.
    #[default]
    Decaying,
    /// The opposite branch. Only useful as a negative control.
    Growing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylSettings {
    /// Initial cut-off is `b = a + b_initial_offset`.
    pub b_initial_offset: f64,
    pub b_growth_factor: f64,
    pub rel_tol: f64,
    pub convergence_tol: f64,
    pub max_growths: usize,
    pub seed_branch: SeedBranch,
}

impl Default for WeylSettings {
    fn default() -> Self {
        Self {
            b_initial_offset: 20.0,
            b_growth_factor: 2.0,
            rel_tol: 1e-9,
            convergence_tol: 1e-8,
            max_growths: 8,
            seed_branch: SeedBranch::Decaying,
        }
    }
}

fn check_domain(p: &Potential, lambda: Complex64) -> Result<()> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::Domain {
            point: lambda,
            reason: "non-finite spectral parameter".into(),
        });
    }
    if lambda.im == 0.0 && lambda.re >= p.tail_value() {
        return Err(Error::Domain {
            point: lambda,
            reason: format!(
                "real lambda inside the essential spectrum [{}, inf)",
                p.tail_value()
            ),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Riccati {
    /// `u = ψ′/ψ`
    LogDerivative(Complex64),
    /// `w = ψ/ψ′`
    Inverse(Complex64),
}

impl Riccati {
    fn from_u(u: Complex64) -> Self {
        if u.norm() > POLE_SWITCH {
            Riccati::Inverse(1.0 / u)
        } else {
            Riccati::LogDerivative(u)
        }
    }

    fn u(self) -> Complex64 {
        match self {
            Riccati::LogDerivative(u) => u,
            Riccati::Inverse(w) => 1.0 / w,
        }
    }
}

/// One sweep from `b` down to `a`; returns `m = −u(a)`.
fn sweep(p: &Potential, lambda: Complex64, b: f64, settings: &WeylSettings) -> Result<Complex64> {
    let a = p.a;
    // The seed error decays like exp(−2∫ Im k), Im k ≥ Im √(λ − min q).
    let decay = sqrt_upper(lambda - p.min_value()).im;
    let b = if decay > 0.0 {
        b.min(a + SEED_DAMPING / decay)
    } else {
        b
    };

    let k = sqrt_upper(lambda - p.value(b));
    let seed = match settings.seed_branch {
        SeedBranch::Decaying => I * k,
        SeedBranch::Growing => -I * k,
    };
    let mut state = Riccati::from_u(seed);

    let solver = Dopri45::new(settings.rel_tol * 0.1);
    let mut stops: Vec<f64> = p
        .breakpoints()
        .into_iter()
        .filter(|&x| x > a && x < b)
        .collect();
    stops.reverse();
    stops.push(a);

    let mut x = b;
    let mut h = None;
    for stop in stops {
        while x > stop {
            let reached = match state {
                Riccati::LogDerivative(u) => {
                    let r = solver.integrate(
                        |x, y: &[Complex64; 1]| [p.value(x) - lambda - y[0] * y[0]],
                        x,
                        [u],
                        stop,
                        h,
                        |_, y| {
                            if y[0].norm() > POLE_SWITCH {
                                ControlFlow::Break(())
                            } else {
                                ControlFlow::Continue(())
                            }
                        },
                    )?;
                    state = Riccati::from_u(r.y[0]);
                    r
                }
                Riccati::Inverse(w) => {
                    let r = solver.integrate(
                        |x, y: &[Complex64; 1]| [1.0 - (p.value(x) - lambda) * y[0] * y[0]],
                        x,
                        [w],
                        stop,
                        h,
                        |_, y| {
                            if y[0].norm() > POLE_SWITCH {
                                ControlFlow::Break(())
                            } else {
                                ControlFlow::Continue(())
                            }
                        },
                    )?;
                    state = if r.y[0].norm() > POLE_SWITCH {
                        Riccati::LogDerivative(1.0 / r.y[0])
                    } else {
                        Riccati::Inverse(r.y[0])
                    };
                    r
                }
            };
            if reached.stopped_early && reached.x == x {
                return Err(Error::Integration {
                    x,
                    reason: "Riccati variable switch made no progress".into(),
                });
            }
            x = reached.x;
            h = Some(reached.next_h);
        }
    }
    let m = -state.u();
    if !(m.re.is_finite() && m.im.is_finite()) {
        return Err(Error::Integration {
            x: a,
            reason: "non-finite log-derivative at a".into(),
        });
    }
    Ok(m)
}

/// `m_∞(λ)` by backward Riccati integration, doubling the cut-off `b` until
/// successive values agree within `convergence_tol` (relative to `max(1, |m|)`).
pub fn weyl_m(p: &Potential, lambda: Complex64, settings: &WeylSettings) -> Result<Complex64> {
    check_domain(p, lambda)?;
    // start past the end of the variable part of the potential
    let mut span = settings.b_initial_offset.max(p.support_end() - p.a);
    let mut previous = sweep(p, lambda, p.a + span, settings)?;
    for _ in 0..settings.max_growths {
        span *= settings.b_growth_factor;
        let m = sweep(p, lambda, p.a + span, settings)?;
        if (m - previous).norm() < settings.convergence_tol * m.norm().max(1.0) {
            return Ok(m);
        }
        previous = m;
    }
    let last = sweep(p, lambda, p.a + span * settings.b_growth_factor, settings)?;
    if (last - previous).norm() < settings.convergence_tol * last.norm().max(1.0) {
        return Ok(last);
    }
    Err(Error::Convergence { previous, last })
}

/// Dirichlet-regularized `m ≈ −φ₂(b)/φ₁(b)`; accurate only while the growing
/// solution does not overflow, i.e. for small `|λ|·(b − a)²`.
pub fn weyl_m_dirichlet(
    p: &Potential,
    lambda: Complex64,
    b: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    check_domain(p, lambda)?;
    let sol = solve_cauchy(p, lambda, b, rel_tol)?;
    let [phi1, _, phi2, _] = sol.last();
    Ok(-phi2 / phi1)
}

/// `m_∞(−0)` by extrapolation along `x_n = −4^{−n}`, `n = 0..=12`.
pub fn weyl_m_neg_zero(p: &Potential, settings: &WeylSettings) -> Result<f64> {
    let seq = RaySequence {
        scale: 1.0,
        ratio: 4.0,
        count: 13,
    };
    let tol = (settings.convergence_tol * 10.0).max(1e-8);
    limit_along_ray(
        |x| {
            let m = weyl_m(p, Complex64::new(x, 0.0), settings)?;
            if m.im.abs() > 1e-9 * m.re.abs().max(1.0) {
                return Err(Error::Evaluation {
                    point: Complex64::new(x, 0.0),
                    reason: format!("m is not real: {m}"),
                });
            }
            Ok(m.re)
        },
        RayDirection::NegZero,
        seq,
        tol,
    )
}
