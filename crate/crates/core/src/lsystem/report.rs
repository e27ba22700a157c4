use serde::{Serialize, Serializer};

use super::angles::{
    alpha_from_class, class_angles, mu0_inverse, mu0_stieltjes, t_h_report, universal_beta,
};
use super::{classify_extension, nearly_equal, serialize_extended, serialize_extended_opt};
use super::{ExtensionClass, ExtensionParameter, SchrodingerLSystem};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassLabel {
    Stieltjes { tan_a1: f64, tan_a2: f64 },
    InverseStieltjes { tan_a1: f64, tan_a2: f64 },
    Neither,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Stieltjes { .. } => "stieltjes",
            Self::InverseStieltjes { .. } => "inverse_stieltjes",
            Self::Neither => "neither",
        }
    }

    pub fn tangents(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Stieltjes { tan_a1, tan_a2 } | Self::InverseStieltjes { tan_a1, tan_a2 } => {
                Some((tan_a1, tan_a2))
            }
            Self::Neither => None,
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorStatus {
    /// Sectorial with the given finite `tan α`.
    AlphaSectorial(f64),
    AccretiveNotSectorial,
    NotAccretive,
    /// The operator is not defined for this `μ`.
    NotApplicable,
}

impl OperatorStatus {
    fn from_tan(tan: f64) -> Self {
        if tan.is_finite() {
            Self::AlphaSectorial(tan)
        } else {
            Self::AccretiveNotSectorial
        }
    }
}

/// Every angle and critical parameter of one `(h, μ)` configuration.
/// Tangents are `None` where they are undefined (class `neither`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorReport {
    #[serde(rename = "class")]
    pub class_label: ClassLabel,
    #[serde(rename = "tan_alpha1", serialize_with = "serialize_extended_opt")]
    pub tan_a1: Option<f64>,
    #[serde(rename = "tan_alpha2", serialize_with = "serialize_extended_opt")]
    pub tan_a2: Option<f64>,
    #[serde(serialize_with = "serialize_extended_opt")]
    pub tan_alpha: Option<f64>,
    #[serde(serialize_with = "serialize_extended_opt")]
    pub tan_beta: Option<f64>,
    #[serde(skip)]
    pub beta_degenerate: bool,
    #[serde(rename = "tan_theta", serialize_with = "serialize_extended_opt")]
    pub theta_tan: Option<f64>,
    pub theta_exact: bool,
    #[serde(serialize_with = "serialize_extended")]
    pub mu0_stieltjes: f64,
    pub mu0_inverse: f64,
    pub state_operator: OperatorStatus,
    pub associated_operator: OperatorStatus,
    /// Seed of any sampling that went into the report, set by the caller.
    pub seed: Option<u64>,
}

/// Assemble the report; fails with a not-accretive error when
/// `Re h < −m_∞(−0)`.
pub fn full_report(sys: &SchrodingerLSystem) -> Result<SectorReport> {
    sys.check_accretive()?;
    let h = sys.h();
    let m0 = sys.m_at_neg_zero();
    let th = t_h_report(h, m0);
    let mu0_s = mu0_stieltjes(h, m0);
    let mu0_i = mu0_inverse(h);
    let theta = th.theta_tan.unwrap_or(f64::INFINITY);

    let branch = classify_extension(sys)?;
    let (class_label, state, associated) = match branch {
        ExtensionClass::Neither => (
            ClassLabel::Neither,
            OperatorStatus::NotAccretive,
            OperatorStatus::NotApplicable,
        ),
        ExtensionClass::StieltjesBranch => {
            let (tan_a1, tan_a2) = class_angles(sys)?;
            let state = match sys.mu() {
                ExtensionParameter::Infinite => OperatorStatus::from_tan(theta),
                ExtensionParameter::Finite(mu) if nearly_equal(mu, mu0_s) => {
                    OperatorStatus::AccretiveNotSectorial
                }
                ExtensionParameter::Finite(_) => {
                    OperatorStatus::from_tan(alpha_from_class(tan_a1, tan_a2)?)
                }
            };
            (
                ClassLabel::Stieltjes { tan_a1, tan_a2 },
                state,
                OperatorStatus::NotApplicable,
            )
        }
        ExtensionClass::InverseBranch => {
            let (tan_a1, tan_a2) = class_angles(sys)?;
            let mu = sys.mu().as_f64();
            let associated = if nearly_equal(mu, mu0_i) {
                OperatorStatus::AccretiveNotSectorial
            } else if nearly_equal(mu, -m0) {
                OperatorStatus::from_tan(theta)
            } else {
                OperatorStatus::from_tan(alpha_from_class(tan_a1, tan_a2)?)
            };
            (
                ClassLabel::InverseStieltjes { tan_a1, tan_a2 },
                OperatorStatus::NotAccretive,
                associated,
            )
        }
    };

    let tangents = class_label.tangents();
    let (tan_alpha, beta) = match tangents {
        Some((a1, a2)) => (
            Some(alpha_from_class(a1, a2)?),
            Some(universal_beta(a1, a2)),
        ),
        None => (None, None),
    };
    Ok(SectorReport {
        class_label,
        tan_a1: tangents.map(|t| t.0),
        tan_a2: tangents.map(|t| t.1),
        tan_alpha,
        tan_beta: beta.map(|b| b.tan),
        beta_degenerate: beta.is_some_and(|b| b.degenerate),
        theta_tan: th.theta_tan,
        theta_exact: th.exact,
        mu0_stieltjes: mu0_s,
        mu0_inverse: mu0_i,
        state_operator: state,
        associated_operator: associated,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::lsystem::BoundaryParameter;
    use crate::weyl::WeylFunction;
    use crate::Error;

    fn sys(re: f64, im: f64, mu: ExtensionParameter) -> SchrodingerLSystem {
        let h = BoundaryParameter::new(Complex64::new(re, im)).unwrap();
        SchrodingerLSystem::new(h, mu, WeylFunction::free()).unwrap()
    }

    #[test]
    fn example_one() {
        let r = full_report(&sys(0.5, 0.5, ExtensionParameter::Finite(1.0))).unwrap();
        assert_eq!(r.class_label.name(), "stieltjes");
        assert!((r.tan_a1.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.tan_a2, Some(f64::INFINITY));
        assert_eq!(r.theta_tan, Some(1.0));
        assert!(r.theta_exact);
        assert_eq!(r.mu0_stieltjes, 1.0);
        assert_eq!(r.state_operator, OperatorStatus::AccretiveNotSectorial);
    }

    #[test]
    fn example_two() {
        let r = full_report(&sys(1.0, 1.0, ExtensionParameter::Finite(0.0))).unwrap();
        assert_eq!(r.class_label.name(), "inverse_stieltjes");
        assert_eq!(r.tan_a1, Some(0.0));
        assert!((r.tan_a2.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.associated_operator, OperatorStatus::AlphaSectorial(1.0));
        assert_eq!(r.state_operator, OperatorStatus::NotAccretive);
        assert!(r.beta_degenerate);
    }

    #[test]
    fn infinite_mu() {
        let r = full_report(&sys(1.0, 1.0, ExtensionParameter::Infinite)).unwrap();
        assert_eq!(
            r.class_label,
            ClassLabel::Stieltjes {
                tan_a1: 0.0,
                tan_a2: 1.0
            }
        );
        assert_eq!(r.state_operator, OperatorStatus::AlphaSectorial(1.0));
    }

    #[test]
    fn interior_of_the_stieltjes_branch() {
        let r = full_report(&sys(1.0, 1.0, ExtensionParameter::Finite(3.0))).unwrap();
        // tan α = 3 + 2√(0.5 · 2.5)
        let want = 3.0 + 2.0 * 1.25f64.sqrt();
        match r.state_operator {
            OperatorStatus::AlphaSectorial(t) => assert!((t - want).abs() < 1e-12),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn neither_and_not_accretive() {
        let r = full_report(&sys(1.0, 1.0, ExtensionParameter::Finite(1.5))).unwrap();
        assert_eq!(r.class_label, ClassLabel::Neither);
        assert!(r.tan_alpha.is_none());
        assert!(matches!(
            full_report(&sys(-1.0, 1.0, ExtensionParameter::Finite(0.0))),
            Err(Error::NotAccretive { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let r = full_report(&sys(0.5, 0.5, ExtensionParameter::Finite(1.0))).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["class"], "stieltjes");
        assert_eq!(v["tan_alpha2"], "inf");
        assert_eq!(v["state_operator"], "accretive_not_sectorial");
        let r = full_report(&sys(1.0, 1.0, ExtensionParameter::Finite(0.0))).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["associated_operator"]["alpha_sectorial"], 1.0);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 12);
    }
}
