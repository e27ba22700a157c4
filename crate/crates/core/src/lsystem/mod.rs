//! L-systems whose main operator is `T_h`: `−y″ + q y` on `[a, ∞)` with
//! `h y(a) − y′(a) = 0`, extended by the real parameter `μ`.
//!
//! Only the scalar data `(h, μ, m_∞)` is kept. Everything here is computed
//! from it: impedance and transfer functions, the branch of the `μ`-axis the
//! system falls into, and the sectoriality angles of the operators involved.

mod angles;
mod report;
mod scan;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use angles::{
    alpha_from_class, class_angles, class_angles_closed_form, f_mu, mu0_inverse, mu0_stieltjes,
    t_h_report, universal_beta, Beta, ThReport,
};
pub use report::{full_report, ClassLabel, OperatorStatus, SectorReport};
pub use scan::{in_branch_domain, scan_mu, Monotonicity, MuScan, MuScanRow, RowFlag, ScanSummary};

use crate::error::{Error, Result};
use crate::funclass::{AnalyticFunction, Variant};
use crate::weyl::WeylFunction;

/// Relative tolerance for deciding that two parameters coincide.
pub const EQUALITY_RTOL: f64 = 1e-12;
/// Denominators below this fraction of their term scale are treated as poles.
const POLE_RTOL: f64 = 1e-14;

pub(crate) fn nearly_equal(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !(a.is_finite() && b.is_finite()) {
        return false;
    }
    (a - b).abs() <= EQUALITY_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Boundary parameter `h` of `T_h`; requires `Im h > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParameter(Complex64);

impl BoundaryParameter {
    pub fn new(h: Complex64) -> Result<Self> {
        if !(h.re.is_finite() && h.im.is_finite()) {
            return Err(Error::Input(format!("h = {h} is not finite")));
        }
        if !(h.im > 0.0) {
            return Err(Error::Input(format!("h = {h} must have Im h > 0")));
        }
        Ok(Self(h))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// The real parameter `μ` of the extension, possibly `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionParameter {
    Finite(f64),
    Infinite,
}

impl ExtensionParameter {
    /// `f64::INFINITY` maps to [`ExtensionParameter::Infinite`].
    pub fn from_f64(mu: f64) -> Result<Self> {
        if mu == f64::INFINITY {
            Ok(Self::Infinite)
        } else if mu.is_finite() {
            Ok(Self::Finite(mu))
        } else {
            Err(Error::Input(format!(
                "mu = {mu} is not a real number or +inf"
            )))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(mu) => mu,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl fmt::Display for ExtensionParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(mu) => write!(f, "{mu}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtensionParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Self::Infinite),
            t => {
                let mu: f64 = t
                    .parse()
                    .map_err(|_| Error::Input(format!("cannot parse mu `{s}`")))?;
                if !mu.is_finite() {
                    return Err(Error::Input(format!("mu `{s}` must be finite or `inf`")));
                }
                Ok(Self::Finite(mu))
            }
        }
    }
}

/// Where `μ` sits relative to the accretivity and accumulativity bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionClass {
    /// `μ ≥ μ₀`: the impedance is a Stieltjes function.
    StieltjesBranch,
    /// `−m_∞(−0) ≤ μ ≤ Re h`: the impedance is an inverse Stieltjes function.
    InverseBranch,
    Neither,
}

impl ExtensionClass {
    pub fn variant(self) -> Option<Variant> {
        match self {
            Self::StieltjesBranch => Some(Variant::Stieltjes),
            Self::InverseBranch => Some(Variant::InverseStieltjes),
            Self::Neither => None,
        }
    }
}

/// The triple `(h, μ, m_∞)`. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerLSystem {
    h: BoundaryParameter,
    mu: ExtensionParameter,
    weyl: WeylFunction,
}

impl SchrodingerLSystem {
    /// Requires a finite `m_∞(−0)`.
    pub fn new(h: BoundaryParameter, mu: ExtensionParameter, weyl: WeylFunction) -> Result<Self> {
        if !weyl.m_at_neg_zero().is_finite() {
            return Err(Error::Input(format!(
                "m(-0) = {} must be finite",
                weyl.m_at_neg_zero()
            )));
        }
        Ok(Self { h, mu, weyl })
    }

    pub fn h(&self) -> Complex64 {
        self.h.value()
    }

    pub fn mu(&self) -> ExtensionParameter {
        self.mu
    }

    pub fn weyl(&self) -> &WeylFunction {
        &self.weyl
    }

    pub fn m_at_neg_zero(&self) -> f64 {
        self.weyl.m_at_neg_zero()
    }

    /// Same `h` and `m_∞`, different `μ`.
    pub fn with_mu(&self, mu: ExtensionParameter) -> Self {
        Self { mu, ..self.clone() }
    }

    /// Impedance from the value `m = m_∞(z)`.
    pub fn impedance_from_m(&self, z: Complex64, m: Complex64) -> Result<Complex64> {
        let h = self.h();
        let (num, den, scale) = match self.mu {
            ExtensionParameter::Finite(mu) => {
                let a = (mu - h.re) * m;
                let b = mu * h.re - h.norm_sqr();
                ((m + mu) * h.im, a + b, a.norm() + b.abs())
            }
            ExtensionParameter::Infinite => {
                (Complex64::new(h.im, 0.0), m + h.re, m.norm() + h.re.abs())
            }
        };
        if den.norm() <= POLE_RTOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Pole(z));
        }
        Ok(num / den)
    }

    /// `V(z) = (m + μ) Im h / [(μ − Re h) m + μ Re h − |h|²]`, or
    /// `Im h / (m + Re h)` for `μ = ∞`.
    pub fn impedance(&self, z: Complex64) -> Result<Complex64> {
        let m = self.weyl.eval(z)?;
        self.impedance_from_m(z, m)
    }

    /// `W(z) = (μ − h)/(μ − h̄) · (m + h̄)/(m + h)`; the first factor is 1 for `μ = ∞`.
    pub fn transfer(&self, z: Complex64) -> Result<Complex64> {
        let h = self.h();
        let m = self.weyl.eval(z)?;
        let den = m + h;
        if den.norm() <= POLE_RTOL * (m.norm() + h.norm()) {
            return Err(Error::Pole(z));
        }
        let tail = (m + h.conj()) / den;
        Ok(match self.mu {
            ExtensionParameter::Finite(mu) => (mu - h) / (mu - h.conj()) * tail,
            ExtensionParameter::Infinite => tail,
        })
    }

    pub fn impedance_fn(&self) -> AnalyticFunction {
        let sys = self.clone();
        AnalyticFunction::new(
            format!(
                "V[h={}, mu={}, {}]",
                self.h(),
                self.mu,
                self.weyl.description()
            ),
            move |z| sys.impedance(z),
        )
    }

    /// Fails with [`Error::NotAccretive`] when `Re h < −m_∞(−0)`.
    pub fn check_accretive(&self) -> Result<()> {
        let (re_h, neg_m0) = (self.h().re, 0.0 - self.m_at_neg_zero());
        if re_h < neg_m0 && !nearly_equal(re_h, neg_m0) {
            return Err(Error::NotAccretive { re_h, neg_m0 });
        }
        Ok(())
    }
}

/// `V = i (W − 1)/(W + 1)`.
pub fn impedance_from_transfer(w: Complex64) -> Result<Complex64> {
    let den = w + 1.0;
    if den.norm() <= POLE_RTOL * w.norm().max(1.0) {
        return Err(Error::Domain {
            point: w,
            reason: "W = -1 has no impedance".into(),
        });
    }
    Ok(Complex64::new(0.0, 1.0) * (w - 1.0) / den)
}

/// Which part of the `μ`-axis the system's parameter lies in.
///
/// When `Re h = −m_∞(−0)` the Stieltjes bound is `+∞` and only `μ = ∞`
/// qualifies for the Stieltjes branch.
pub fn classify_extension(sys: &SchrodingerLSystem) -> Result<ExtensionClass> {
    sys.check_accretive()?;
    let h = sys.h();
    let m0 = sys.m_at_neg_zero();
    let mu = match sys.mu {
        ExtensionParameter::Infinite => return Ok(ExtensionClass::StieltjesBranch),
        ExtensionParameter::Finite(mu) => mu,
    };
    let bound = mu0_stieltjes(h, m0);
    if mu > bound || nearly_equal(mu, bound) {
        return Ok(ExtensionClass::StieltjesBranch);
    }
    let above = mu > -m0 || nearly_equal(mu, -m0);
    let below = mu < h.re || nearly_equal(mu, h.re);
    if above && below {
        Ok(ExtensionClass::InverseBranch)
    } else {
        Ok(ExtensionClass::Neither)
    }
}

/// Serialize extended reals with infinities as strings.
pub(crate) fn serialize_extended<S: Serializer>(
    x: &f64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    if x.is_nan() {
        Err(serde::ser::Error::custom("refusing to serialize NaN"))
    } else if *x == f64::INFINITY {
        s.serialize_str("inf")
    } else if *x == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_f64(*x)
    }
}

pub(crate) fn serialize_extended_opt<S: Serializer>(
    x: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => serialize_extended(v, s),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{sampling, sqrt_upper, I};

    fn sys(h: Complex64, mu: ExtensionParameter) -> SchrodingerLSystem {
        SchrodingerLSystem::new(BoundaryParameter::new(h).unwrap(), mu, WeylFunction::free())
            .unwrap()
    }

    fn fin(mu: f64) -> ExtensionParameter {
        ExtensionParameter::Finite(mu)
    }

    const NEG_ONE: Complex64 = Complex64::new(-1.0, 0.0);

    #[test]
    fn impedance_examples() {
        let v = sys(Complex64::new(0.5, 0.5), fin(1.0))
            .impedance(NEG_ONE)
            .unwrap();
        assert!((v - 2.0).norm() < 1e-15);
        let v = sys(Complex64::new(1.0, 1.0), fin(0.0))
            .impedance(NEG_ONE)
            .unwrap();
        assert!((v + 1.0 / 3.0).norm() < 1e-15);
        let v = sys(Complex64::new(1.0, 1.0), ExtensionParameter::Infinite)
            .impedance(NEG_ONE)
            .unwrap();
        assert!((v - 0.5).norm() < 1e-15);
    }

    #[test]
    fn transfer_examples() {
        let w = sys(Complex64::new(1.0, 1.0), fin(0.0))
            .transfer(NEG_ONE)
            .unwrap();
        assert!((w - Complex64::new(0.8, 0.6)).norm() < 1e-15);
        let w = sys(Complex64::new(1.0, 1.0), ExtensionParameter::Infinite)
            .transfer(NEG_ONE)
            .unwrap();
        assert!((w - Complex64::new(0.6, -0.8)).norm() < 1e-15);
    }

    #[test]
    fn impedance_from_transfer_examples() {
        assert_eq!(
            impedance_from_transfer(Complex64::new(1.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let v = impedance_from_transfer(Complex64::new(0.8, 0.6)).unwrap();
        assert!((v + 1.0 / 3.0).norm() < 1e-15);
        // i(i − 1)/(i + 1) = i · i = −1
        let v = impedance_from_transfer(I).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
        assert!(impedance_from_transfer(NEG_ONE).is_err());
    }

    #[test]
    fn examples_match_closed_forms() {
        let ex1 = sys(Complex64::new(0.5, 0.5), fin(1.0));
        let ex2 = sys(Complex64::new(1.0, 1.0), fin(0.0));
        for z in sampling::off_axis_points(3, 20) {
            let s = sqrt_upper(z);
            let want1 = 1.0 + I / s;
            let want2 = -s / (s + 2.0 * I);
            assert!((ex1.impedance(z).unwrap() - want1).norm() <= 1e-12 * want1.norm());
            assert!((ex2.impedance(z).unwrap() - want2).norm() <= 1e-12 * want2.norm());
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_extension(&sys(Complex64::new(0.5, 0.5), fin(1.0))).unwrap(),
            ExtensionClass::StieltjesBranch
        );
        assert_eq!(
            classify_extension(&sys(Complex64::new(1.0, 1.0), fin(0.0))).unwrap(),
            ExtensionClass::InverseBranch
        );
        assert_eq!(
            classify_extension(&sys(Complex64::new(1.0, 1.0), fin(1.5))).unwrap(),
            ExtensionClass::Neither
        );
        assert_eq!(
            classify_extension(&sys(Complex64::new(1.0, 1.0), ExtensionParameter::Infinite))
                .unwrap(),
            ExtensionClass::StieltjesBranch
        );
        assert!(matches!(
            classify_extension(&sys(Complex64::new(-1.0, 1.0), fin(0.0))),
            Err(Error::NotAccretive { .. })
        ));
    }

    #[test]
    fn degenerate_bound_admits_only_infinity() {
        let w = WeylFunction::constant(1.0).unwrap();
        let h = BoundaryParameter::new(Complex64::new(-1.0, 1.0)).unwrap();
        let s = SchrodingerLSystem::new(h, fin(1e9), w.clone()).unwrap();
        assert_eq!(classify_extension(&s).unwrap(), ExtensionClass::Neither);
        let s = SchrodingerLSystem::new(h, ExtensionParameter::Infinite, w).unwrap();
        assert_eq!(
            classify_extension(&s).unwrap(),
            ExtensionClass::StieltjesBranch
        );
    }

    #[test]
    fn parameter_parsing() {
        assert_eq!(
            "inf".parse::<ExtensionParameter>().unwrap(),
            ExtensionParameter::Infinite
        );
        assert_eq!("-2.5".parse::<ExtensionParameter>().unwrap(), fin(-2.5));
        assert!("nan".parse::<ExtensionParameter>().is_err());
        assert!("x".parse::<ExtensionParameter>().is_err());
        assert!(BoundaryParameter::new(Complex64::new(1.0, 0.0)).is_err());
        assert_eq!(
            ExtensionParameter::from_f64(f64::INFINITY).unwrap(),
            ExtensionParameter::Infinite
        );
    }

    #[test]
    fn pole_is_reported() {
        // μ = ∞, m(z) = −Re h has no solution off the cut for Re h > 0, so use
        // a finite μ: den = (μ − Re h) m + μ Re h − |h|² vanishes at m = 1
        // for h = i, μ = 1, i.e. at z = −1.
        let s = sys(I, fin(1.0));
        assert!(matches!(s.impedance(NEG_ONE), Err(Error::Pole(_))));
    }
}
