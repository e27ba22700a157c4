use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::angles::{branch_angles, f_mu, mu0_inverse, mu0_stieltjes, universal_beta};
use super::{nearly_equal, serialize_extended, ClassLabel, ExtensionParameter};
use crate::error::{Error, Result};
use crate::funclass::Variant;
use crate::weyl::WeylFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    AtMu0,
    Sectorial,
    AccretiveOnly,
}

impl RowFlag {
    pub fn name(self) -> &'static str {
        match self {
            Self::AtMu0 => "atMu0",
            Self::Sectorial => "sectorial",
            Self::AccretiveOnly => "accretiveOnly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuScanRow {
    pub mu: f64,
    #[serde(rename = "class")]
    pub class_label: ClassLabel,
    #[serde(serialize_with = "serialize_extended")]
    pub tan_a1: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub tan_a2: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub f_mu: f64,
    pub flags: Vec<RowFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    NotMonotone,
}

/// `tan β = f(μ*)` and whether it bounds `f` on the side of `μ*` where the
/// family of extensions lives (`μ ≥ μ*` on the Stieltjes branch, `μ ≤ μ*`
/// on the inverse branch).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub branch: Variant,
    pub mu_star: f64,
    pub tan_beta: f64,
    /// `tan α₁ + 2√(tan α₁ tan α₂)` at `μ*`, for comparison.
    pub class_beta: f64,
    /// Direction of the finite `f` values along increasing `μ`.
    pub direction: Monotonicity,
    pub bound_holds: bool,
    pub rows_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuScan {
    pub rows: Vec<MuScanRow>,
    pub summary: Option<ScanSummary>,
}

fn monotonicity(values: &[f64]) -> Monotonicity {
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|&d| d == 0.0) {
        Monotonicity::Constant
    } else if steps.iter().all(|&d| d > 0.0) {
        Monotonicity::Increasing
    } else if steps.iter().all(|&d| d < 0.0) {
        Monotonicity::Decreasing
    } else {
        Monotonicity::NotMonotone
    }
}

fn critical_mu(h: Complex64, m0: f64, branch: Variant) -> f64 {
    match branch {
        Variant::Stieltjes => mu0_stieltjes(h, m0),
        Variant::InverseStieltjes => mu0_inverse(h),
    }
}

/// Whether `μ` lies in `[μ₀, ∞)` (Stieltjes) or `[−m_∞(−0), Re h]` (inverse),
/// endpoints included up to [`super::EQUALITY_RTOL`].
pub fn in_branch_domain(h: Complex64, m0: f64, branch: Variant, mu: f64) -> bool {
    let critical = critical_mu(h, m0, branch);
    match branch {
        Variant::Stieltjes => mu >= critical || nearly_equal(mu, critical),
        Variant::InverseStieltjes => {
            (mu >= -m0 || nearly_equal(mu, -m0)) && (mu <= critical || nearly_equal(mu, critical))
        }
    }
}

/// `f(μ)` over a grid inside the branch's `μ`-domain: `[μ₀, ∞)` for the
/// Stieltjes branch, `[−m_∞(−0), Re h]` for the inverse branch. The
/// critical endpoint is allowed and flagged `atMu0`. `mu_star` defaults to
/// the grid point nearest the critical endpoint that is not on it.
pub fn scan_mu(
    h: Complex64,
    weyl: &WeylFunction,
    branch: Variant,
    grid: &[f64],
    mu_star: Option<f64>,
) -> Result<MuScan> {
    if grid.is_empty() {
        return Err(Error::Input("empty mu grid".into()));
    }
    if !(h.im > 0.0) {
        return Err(Error::Input(format!("h = {h} must have Im h > 0")));
    }
    let m0 = weyl.m_at_neg_zero();
    if !m0.is_finite() {
        return Err(Error::Input(format!("m(-0) = {m0} must be finite")));
    }
    if h.re < -m0 && !nearly_equal(h.re, -m0) {
        return Err(Error::NotAccretive {
            re_h: h.re,
            neg_m0: 0.0 - m0,
        });
    }
    let mut mus = grid.to_vec();
    if mus.iter().any(|m| !m.is_finite()) {
        return Err(Error::Input("mu grid values must be finite".into()));
    }
    mus.sort_by(f64::total_cmp);
    mus.dedup();

    let critical = critical_mu(h, m0, branch);
    if let Some(&mu) = mus.iter().find(|&&mu| !in_branch_domain(h, m0, branch, mu)) {
        return Err(Error::Domain {
            point: Complex64::new(mu, 0.0),
            reason: format!("mu outside the {branch:?} branch"),
        });
    }

    let rows = mus
        .par_iter()
        .map(|&mu| -> Result<MuScanRow> {
            let at_mu0 = nearly_equal(mu, critical);
            let (tan_a1, tan_a2) = branch_angles(h, m0, ExtensionParameter::Finite(mu), branch);
            let (f, flags) = if at_mu0 {
                (f64::INFINITY, vec![RowFlag::AtMu0, RowFlag::AccretiveOnly])
            } else {
                (f_mu(h, m0, mu, branch)?, vec![RowFlag::Sectorial])
            };
            let class_label = match branch {
                Variant::Stieltjes => ClassLabel::Stieltjes { tan_a1, tan_a2 },
                Variant::InverseStieltjes => ClassLabel::InverseStieltjes { tan_a1, tan_a2 },
            };
            Ok(MuScanRow {
                mu,
                class_label,
                tan_a1,
                tan_a2,
                f_mu: f,
                flags,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let finite: Vec<&MuScanRow> = rows.iter().filter(|r| r.f_mu.is_finite()).collect();
    let summary = if finite.is_empty() {
        None
    } else {
        let mu_star = match mu_star {
            Some(m) => m,
            None => match branch {
                Variant::Stieltjes => finite[0].mu,
                Variant::InverseStieltjes => finite[finite.len() - 1].mu,
            },
        };
        let tan_beta = f_mu(h, m0, mu_star, branch)?;
        let (a1, a2) = branch_angles(h, m0, ExtensionParameter::Finite(mu_star), branch);
        let side: Vec<&&MuScanRow> = finite
            .iter()
            .filter(|r| match branch {
                Variant::Stieltjes => r.mu >= mu_star,
                Variant::InverseStieltjes => r.mu <= mu_star,
            })
            .collect();
        let bound_holds = side.iter().all(|r| r.f_mu <= tan_beta * (1.0 + 1e-12));
        let values: Vec<f64> = finite.iter().map(|r| r.f_mu).collect();
        Some(ScanSummary {
            branch,
            mu_star,
            tan_beta,
            class_beta: universal_beta(a1, a2).tan,
            direction: monotonicity(&values),
            bound_holds,
            rows_checked: side.len(),
        })
    };
    Ok(MuScan { rows, summary })
}
