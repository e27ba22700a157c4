use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square root with Im √z > 0 off the cut [0, +∞).
///
/// On the cut itself the nonnegative real root is returned. This branch makes
/// `z ↦ -i√z` symmetric (`f(z̄) = conj f(z)`), and `−1 ↦ i`.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        };
    }
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Relative distance `|a − b| / max(|b|, floor)`.
pub fn rel_err(a: Complex64, b: Complex64, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
