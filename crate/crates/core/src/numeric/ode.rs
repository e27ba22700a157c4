//! Dormand–Prince 5(4) integrator for small complex systems.
//!
//! Used for the Cauchy problems of the Schrödinger equation and for the
//! backward Riccati sweep. Integration may run in either direction.

use std::ops::ControlFlow;

use num_complex::Complex64;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order solution minus embedded 4th-order solution.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri45 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Dopri45 {
    pub fn new(rtol: f64) -> Self {
        Self {
            rtol,
            atol: rtol * 1e-3,
            max_steps: 2_000_000,
        }
    }
}

/// Where an integration stopped.
#[derive(Debug, Clone, Copy)]
pub struct Reached<const N: usize> {
    pub x: f64,
    pub y: [Complex64; N],
    /// Step size that would have been attempted next.
    pub next_h: f64,
    pub stopped_early: bool,
}

fn axpy<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    terms: &[(f64, &[Complex64; N])],
) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let s = h * c;
        for i in 0..N {
            out[i] += k[i] * s;
        }
    }
    out
}

impl Dopri45 {
    /// Integrate `y' = f(x, y)` from `x0` to `x1`.
    ///
    /// `observer` is called after every accepted step (and once at `x0`);
    /// returning `ControlFlow::Break` stops the integration at that point.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        x0: f64,
        y0: [Complex64; N],
        x1: f64,
        h_hint: Option<f64>,
        mut observer: O,
    ) -> Result<Reached<N>>
    where
        F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
        O: FnMut(f64, &[Complex64; N]) -> ControlFlow<()>,
    {
        let span = x1 - x0;
        if let ControlFlow::Break(()) = observer(x0, &y0) {
            return Ok(Reached {
                x: x0,
                y: y0,
                next_h: h_hint.unwrap_or(0.0),
                stopped_early: true,
            });
        }
        if span == 0.0 {
            return Ok(Reached {
                x: x0,
                y: y0,
                next_h: h_hint.unwrap_or(0.0),
                stopped_early: false,
            });
        }
        let dir = span.signum();
        let mut x = x0;
        let mut y = y0;
        let mut k1 = f(x, &y);

        let mut h = match h_hint {
            Some(h) if h != 0.0 => h.abs().min(span.abs()),
            _ => self.initial_step(&y, &k1, span.abs()),
        };

        let mut steps = 0usize;
        loop {
            let remaining = (x1 - x).abs();
            if remaining <= 1e-15 * x1.abs().max(1.0) {
                return Ok(Reached {
                    x: x1,
                    y,
                    next_h: h,
                    stopped_early: false,
                });
            }
            let last = h >= remaining;
            let hs = if last { remaining } else { h } * dir;

            let k2 = f(x + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(x + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                x + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                x + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                x + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                hs,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = f(x + hs, &y_new);

            let mut err_sq = 0.0;
            let mut finite = true;
            for i in 0..N {
                let e =
                    (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                        * hs;
                let scale = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / scale;
                finite &= r.is_finite() && y_new[i].re.is_finite() && y_new[i].im.is_finite();
                err_sq += r * r;
            }
            let err = (err_sq / N as f64).sqrt();

            if finite && err <= 1.0 {
                x = if last { x1 } else { x + hs };
                y = y_new;
                k1 = k7;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = hs.abs() * grow;
                if let ControlFlow::Break(()) = observer(x, &y) {
                    return Ok(Reached {
                        x,
                        y,
                        next_h: h,
                        stopped_early: true,
                    });
                }
                if last {
                    return Ok(Reached {
                        x,
                        y,
                        next_h: h,
                        stopped_early: false,
                    });
                }
            } else {
                let shrink = if finite {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h = hs.abs() * shrink;
            }

            steps += 1;
            if h < 1e-14 * x.abs().max(1.0) {
                return Err(Error::Integration {
                    x,
                    reason: "step size underflow".into(),
                });
            }
            if steps > self.max_steps {
                return Err(Error::Integration {
                    x,
                    reason: format!("exceeded {} steps", self.max_steps),
                });
            }
        }
    }

    fn initial_step<const N: usize>(
        &self,
        y: &[Complex64; N],
        dy: &[Complex64; N],
        span: f64,
    ) -> f64 {
        let mut d0 = 0.0f64;
        let mut d1 = 0.0f64;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].norm();
            d0 = d0.max(y[i].norm() / sc);
            d1 = d1.max(dy[i].norm() / sc);
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(span).max(1e-12 * span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn never(_: f64, _: &[Complex64; 2]) -> ControlFlow<()> {
        ControlFlow::Continue(())
    }

    #[test]
    fn harmonic_oscillator_forward_and_back() {
        // y'' = -y, y(0)=0, y'(0)=1  ->  sin x
        let solver = Dopri45::new(1e-11);
        let rhs = |_x: f64, y: &[Complex64; 2]| [y[1], -y[0]];
        let y0 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let fwd = solver.integrate(rhs, 0.0, y0, 3.0, None, never).unwrap();
        assert!((fwd.y[0].re - 3.0f64.sin()).abs() < 1e-9);
        let back = solver.integrate(rhs, 3.0, fwd.y, 0.0, None, never).unwrap();
        assert!(back.y[0].norm() < 1e-9);
        assert!((back.y[1].re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn complex_exponential() {
        // y' = i y -> e^{ix}
        let solver = Dopri45::new(1e-10);
        let r = solver
            .integrate(
                |_x, y: &[Complex64; 1]| [y[0] * Complex64::new(0.0, 1.0)],
                0.0,
                [Complex64::new(1.0, 0.0)],
                10.0,
                None,
                |_, _| ControlFlow::Continue(()),
            )
            .unwrap();
        assert!((r.y[0] - Complex64::new(0.0, 10.0).exp()).norm() < 1e-8);
    }

    #[test]
    fn blow_up_reports_position() {
        // y' = y^2, y(0) = 1 blows up at x = 1.
        let solver = Dopri45::new(1e-9);
        let err = solver
            .integrate(
                |_x, y: &[Complex64; 1]| [y[0] * y[0]],
                0.0,
                [Complex64::new(1.0, 0.0)],
                2.0,
                None,
                |_, _| ControlFlow::Continue(()),
            )
            .unwrap_err();
        match err {
            Error::Integration { x, .. } => assert!(x > 0.9 && x <= 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn observer_can_stop() {
        let solver = Dopri45::new(1e-9);
        let r = solver
            .integrate(
                |_x, y: &[Complex64; 1]| [y[0]],
                0.0,
                [Complex64::new(1.0, 0.0)],
                10.0,
                None,
                |_, y| {
                    if y[0].re > 100.0 {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                },
            )
            .unwrap();
        assert!(r.stopped_early);
        assert!(r.x < 10.0 && r.y[0].re > 100.0);
    }
}
