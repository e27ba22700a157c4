use std::ops::ControlFlow;

use num_complex::Complex64;

use super::Potential;
use crate::error::{Error, Result};
use crate::numeric::ode::Dopri45;

/// Solutions of `−y″ + q y = λ y` with
/// `φ₁(a) = 0, φ₁′(a) = 1` and `φ₂(a) = −1, φ₂′(a) = 0`,
/// sampled at the integrator's accepted steps.
#[derive(Debug, Clone)]
pub struct CauchySolution {
    pub lambda: Complex64,
    pub grid_x: Vec<f64>,
    pub phi1: Vec<Complex64>,
    pub phi1_prime: Vec<Complex64>,
    pub phi2: Vec<Complex64>,
    pub phi2_prime: Vec<Complex64>,
}

impl CauchySolution {
    /// `φ₁φ₂′ − φ₁′φ₂` at grid point `i`; equals 1 for exact solutions.
    pub fn wronskian(&self, i: usize) -> Complex64 {
        self.phi1[i] * self.phi2_prime[i] - self.phi1_prime[i] * self.phi2[i]
    }

    /// Largest `|W − 1|` relative to the size of the products forming `W`.
    pub fn wronskian_drift(&self) -> f64 {
        (0..self.grid_x.len())
            .map(|i| {
                let scale = (self.phi1[i] * self.phi2_prime[i]).norm()
                    + (self.phi1_prime[i] * self.phi2[i]).norm();
                (self.wronskian(i) - 1.0).norm() / scale.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn last(&self) -> [Complex64; 4] {
        let n = self.grid_x.len() - 1;
        [
            self.phi1[n],
            self.phi1_prime[n],
            self.phi2[n],
            self.phi2_prime[n],
        ]
    }
}

pub fn solve_cauchy(
    p: &Potential,
    lambda: Complex64,
    x_max: f64,
    rel_tol: f64,
) -> Result<CauchySolution> {
    if !(x_max > p.a) {
        return Err(Error::Input(format!(
            "x_max = {x_max} must exceed a = {}",
            p.a
        )));
    }
    if !(rel_tol > 1e-13 && rel_tol < 1e-3) {
        return Err(Error::Input(format!(
            "relative tolerance {rel_tol} outside (1e-13, 1e-3)"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut sol = CauchySolution {
        lambda,
        grid_x: vec![p.a],
        phi1: vec![zero],
        phi1_prime: vec![one],
        phi2: vec![-one],
        phi2_prime: vec![zero],
    };
    // local error control one decade tighter than the requested global accuracy
    let solver = Dopri45::new(rel_tol * 0.1);
    let rhs = |x: f64, y: &[Complex64; 4]| {
        let k = p.value(x) - lambda;
        [y[1], y[0] * k, y[3], y[2] * k]
    };

    let mut stops: Vec<f64> = p.breakpoints().into_iter().filter(|&b| b < x_max).collect();
    stops.push(x_max);
    let mut x = p.a;
    let mut y = [zero, one, -one, zero];
    let mut h = None;
    for stop in stops {
        let reached = solver.integrate(rhs, x, y, stop, h, |xi, yi| {
            if xi > x {
                sol.grid_x.push(xi);
                sol.phi1.push(yi[0]);
                sol.phi1_prime.push(yi[1]);
                sol.phi2.push(yi[2]);
                sol.phi2_prime.push(yi[3]);
            }
            ControlFlow::Continue(())
        })?;
        x = reached.x;
        y = reached.y;
        h = Some(reached.next_h);
    }

    let drift = sol.wronskian_drift();
    if drift > 10.0 * rel_tol {
        return Err(Error::Integration {
            x: x_max,
            reason: format!("Wronskian drift {drift:e} exceeds 10*rel_tol"),
        });
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn initial_conditions_exact() {
        let s = solve_cauchy(&Potential::free(0.0), c(3.0), 1.0, 1e-9).unwrap();
        assert_eq!(s.phi1[0], c(0.0));
        assert_eq!(s.phi1_prime[0], c(1.0));
        assert_eq!(s.phi2[0], c(-1.0));
        assert_eq!(s.phi2_prime[0], c(0.0));
        assert_eq!(s.wronskian(0), c(1.0));
    }

    #[test]
    fn free_at_zero_energy() {
        let s = solve_cauchy(&Potential::free(0.0), c(0.0), 2.0, 1e-10).unwrap();
        for i in 0..s.grid_x.len() {
            assert!((s.phi1[i] - s.grid_x[i]).norm() < 1e-10);
            assert!((s.phi2[i] + 1.0).norm() < 1e-10);
        }
        assert_eq!(*s.grid_x.last().unwrap(), 2.0);
    }

    #[test]
    fn free_below_spectrum_gives_hyperbolic_functions() {
        let s = solve_cauchy(&Potential::free(0.0), c(-1.0), 2.0, 1e-10).unwrap();
        for i in 0..s.grid_x.len() {
            let x = s.grid_x[i];
            assert!((s.phi1[i].re - x.sinh()).abs() < 1e-8);
            assert!((s.phi2[i].re + x.cosh()).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_potential_at_its_level_is_free_zero_energy() {
        let s = solve_cauchy(&Potential::constant(0.0, 2.0), c(2.0), 2.0, 1e-10).unwrap();
        let [p1, _, p2, _] = s.last();
        assert!((p1 - 2.0).norm() < 1e-10);
        assert!((p2 + 1.0).norm() < 1e-10);
    }

    #[test]
    fn table_potential_wronskian_conserved() {
        let p = Potential::table(
            vec![(0.0, 1.0), (0.7, -2.0), (1.5, 3.0), (3.0, 0.25)],
            0.25,
            "t",
        )
        .unwrap();
        let s = solve_cauchy(&p, Complex64::new(0.3, 1.2), 6.0, 1e-9).unwrap();
        assert!(s.wronskian_drift() <= 1e-8);
        // nodes are hit exactly
        for node in [0.7, 1.5, 3.0] {
            assert!(s.grid_x.contains(&node));
        }
    }

    #[test]
    fn input_errors() {
        let p = Potential::free(1.0);
        assert!(solve_cauchy(&p, c(0.0), 0.5, 1e-9).is_err());
        assert!(solve_cauchy(&p, c(0.0), 2.0, 1e-2).is_err());
        assert!(solve_cauchy(&p, c(0.0), 2.0, 1e-14).is_err());
    }
}
