use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{stieltjes_check, AnalyticFunction, CheckOutcome, Variant};
use crate::error::{Error, Result};
use crate::numeric::eigen::{hermitian_eigenvalues, CMatrix};
use crate::numeric::sampling;

pub const DEFAULT_PSD_TOL: f64 = 1e-8;
pub const MAX_KERNEL_POINTS: usize = 8;
const HERMITIAN_DEFECT_LIMIT: f64 = 1e-10;
const TAN_CEILING: f64 = 1e9;

/// Finite section of the sector kernel at the points `z_k`.
///
/// Entry `(k, l)` is `[φ(z_k) − conj φ(z_l)]/(z_k − conj z_l) − cot α · conj ψ(z_l) ψ(z_k)`
/// with `φ = zV, ψ = V` for Stieltjes functions and `φ = ψ = V/z` for
/// inverse Stieltjes functions.
#[derive(Debug, Clone)]
pub struct SectorKernel {
    pub points: Vec<Complex64>,
    /// The weight vectors `h_k` are not materialized: positivity over all of
    /// them is positivity of the matrix.
    pub weights_applied: bool,
    pub alpha_tan: f64,
    pub variant: Variant,
    pub matrix: CMatrix,
    /// Hermitian defect before symmetrization.
    pub symmetrization_defect: f64,
}

/// The parts of a kernel that do not depend on α: `K(c) = A − c·ψψ^H`.
#[derive(Debug, Clone)]
struct KernelParts {
    a: CMatrix,
    psi: Vec<Complex64>,
}

impl KernelParts {
    fn new(f: &AnalyticFunction, points: &[Complex64], variant: Variant) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("kernel needs at least one point".into()));
        }
        if let Some(z) = points.iter().find(|z| !(z.im > 0.0)) {
            return Err(Error::Domain {
                point: *z,
                reason: "kernel points must satisfy Im z > 0".into(),
            });
        }
        for (i, zi) in points.iter().enumerate() {
            if points[..i].contains(zi) {
                return Err(Error::Input(format!("duplicate kernel point {zi}")));
            }
        }
        let values = points
            .iter()
            .map(|&z| f.eval(z))
            .collect::<Result<Vec<_>>>()?;
        let (phi, psi): (Vec<Complex64>, Vec<Complex64>) = points
            .iter()
            .zip(&values)
            .map(|(&z, &v)| match variant {
                Variant::Stieltjes => (z * v, v),
                Variant::InverseStieltjes => (v / z, v / z),
            })
            .unzip();
        let n = points.len();
        let mut a = CMatrix::zeros(n);
        for k in 0..n {
            for l in 0..n {
                a[(k, l)] = (phi[k] - phi[l].conj()) / (points[k] - points[l].conj());
            }
        }
        Ok(Self { a, psi })
    }

    fn matrix(&self, cot: f64) -> CMatrix {
        let mut m = self.a.clone();
        if cot != 0.0 {
            let n = self.psi.len();
            for k in 0..n {
                for l in 0..n {
                    m[(k, l)] -= self.psi[l].conj() * self.psi[k] * cot;
                }
            }
        }
        m
    }

    fn min_eigenvalue(&self, cot: f64) -> f64 {
        hermitian_eigenvalues(&self.matrix(cot))[0]
    }
}

fn cot_of(alpha_tan: f64) -> Result<f64> {
    if alpha_tan.is_nan() || alpha_tan <= 0.0 {
        return Err(Error::Input(format!(
            "tan(alpha) must be positive or +inf, got {alpha_tan}"
        )));
    }
    Ok(if alpha_tan.is_infinite() {
        0.0
    } else {
        1.0 / alpha_tan
    })
}

pub fn build_sector_kernel(
    f: &AnalyticFunction,
    points: &[Complex64],
    alpha_tan: f64,
    variant: Variant,
) -> Result<SectorKernel> {
    let cot = cot_of(alpha_tan)?;
    let parts = KernelParts::new(f, points, variant)?;
    let mut matrix = parts.matrix(cot);
    let symmetrization_defect = matrix.hermitian_defect();
    matrix.symmetrize();
    Ok(SectorKernel {
        points: points.to_vec(),
        weights_applied: false,
        alpha_tan,
        variant,
        matrix,
        symmetrization_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdOutcome {
    Psd { min_eigenvalue: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl PsdOutcome {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdOutcome::Psd { .. })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match *self {
            PsdOutcome::Psd { min_eigenvalue } | PsdOutcome::NotPsd { min_eigenvalue } => {
                min_eigenvalue
            }
        }
    }
}

/// Positive semidefiniteness of a Hermitian matrix: smallest eigenvalue ≥ −tol.
pub fn is_psd_matrix(m: &CMatrix, tol: f64) -> Result<PsdOutcome> {
    if tol < 0.0 {
        return Err(Error::Input("tolerance must be nonnegative".into()));
    }
    if m.dim() == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    let scale = (0..m.dim())
        .flat_map(|i| (0..m.dim()).map(move |j| (i, j)))
        .map(|ij| m[ij].norm())
        .fold(1.0f64, f64::max);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_DEFECT_LIMIT * scale {
        return Err(Error::Consistency(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let min_eigenvalue = hermitian_eigenvalues(m)[0];
    Ok(if min_eigenvalue >= -tol {
        PsdOutcome::Psd { min_eigenvalue }
    } else {
        PsdOutcome::NotPsd { min_eigenvalue }
    })
}

pub fn is_psd(kernel: &SectorKernel, tol: f64) -> Result<PsdOutcome> {
    let scale = (0..kernel.matrix.dim())
        .map(|i| kernel.matrix[(i, i)].norm())
        .fold(1.0f64, f64::max);
    if kernel.symmetrization_defect > HERMITIAN_DEFECT_LIMIT * scale {
        return Err(Error::Consistency(format!(
            "kernel was built with Hermitian defect {:e}",
            kernel.symmetrization_defect
        )));
    }
    is_psd_matrix(&kernel.matrix, tol)
}

/// Random point sets for kernel trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplingPlan {
    pub seed: u64,
    pub n_trials: usize,
    pub points_per_trial: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            n_trials: 200,
            points_per_trial: 4,
        }
    }
}

impl SamplingPlan {
    pub fn point_sets(&self) -> Result<Vec<Vec<Complex64>>> {
        if self.points_per_trial == 0 || self.points_per_trial > MAX_KERNEL_POINTS {
            return Err(Error::Input(format!(
                "points per trial must be in 1..={MAX_KERNEL_POINTS}, got {}",
                self.points_per_trial
            )));
        }
        let mut rng = sampling::rng(self.seed);
        Ok((0..self.n_trials)
            .map(|_| {
                (0..self.points_per_trial)
                    .map(|_| sampling::upper_half_plane_point(&mut rng))
                    .collect()
            })
            .collect())
    }
}

/// Sampling estimate of the smallest sector angle, as `tan α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleEstimate {
    pub tan_alpha: f64,
    /// Always true: a finite sample can only bound the angle from below.
    pub estimated: bool,
    pub seed: u64,
}

/// Smallest `tan α` for which every sampled kernel is PSD within `tol`.
///
/// Bisection on `cot α` to a relative width of 1e-3. A finite sample only
/// shows the kernel condition is necessary, so the result approaches the
/// true tangent from below as sampling grows.
pub fn min_sector_angle(
    f: &AnalyticFunction,
    variant: Variant,
    plan: SamplingPlan,
    tol: f64,
) -> Result<AngleEstimate> {
    let screening = sampling::off_axis_points(plan.seed ^ 0x5EED, 20);
    if let CheckOutcome::Fail { witness, value } = stieltjes_check(f, &screening, 1e-9, variant)? {
        return Err(Error::Class(format!(
            "{} fails the {variant:?} condition at {witness} (value {value:e})",
            f.description()
        )));
    }

    let trials = plan
        .point_sets()?
        .iter()
        .map(|pts| KernelParts::new(f, pts, variant))
        .collect::<Result<Vec<_>>>()?;
    let all_psd = |cot: f64| -> bool {
        let mins: Vec<f64> = trials.par_iter().map(|t| t.min_eigenvalue(cot)).collect();
        mins.iter().all(|&m| m >= -tol)
    };
    let estimate = |tan_alpha: f64| AngleEstimate {
        tan_alpha,
        estimated: true,
        seed: plan.seed,
    };

    let cot_floor = 1.0 / TAN_CEILING;
    if !all_psd(cot_floor) {
        return Ok(estimate(f64::INFINITY));
    }
    let (mut lo, mut hi);
    if all_psd(1.0) {
        lo = 1.0;
        hi = 2.0;
        while all_psd(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > TAN_CEILING {
                return Ok(estimate(1.0 / lo));
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while !all_psd(lo) {
            hi = lo;
            lo *= 0.5;
        }
    }
    while hi / lo > 1.0 + 1e-4 {
        let mid = (lo * hi).sqrt();
        if all_psd(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(estimate(1.0 / lo))
}
