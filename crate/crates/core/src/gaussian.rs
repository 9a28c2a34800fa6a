//! Single-mode Gaussian states: validation, purity, fidelity, Bures distance.
//!
//! Convention: `cov` is the 2x2 symmetric matrix with entries
//! `sigma_ij = <d_i d_j + d_j d_i> - 2<d_i><d_j>`, `d = (x, p)`, so the
//! vacuum has `cov = I` and a thermal state has `cov = coth(Omega/2T) * I`.
//! Physicality is `det(cov) >= 1`.

use nalgebra::{Matrix2, Vector2};

use crate::conventions::FIDELITY_MEAN_COEFF;
use crate::error::{Error, Result};

/// Tolerance on |cov_01 - cov_10| for a state to count as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Defect tolerance below which a state is accepted by fidelity/QFI routines.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// First and second moments of a single bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    /// `(<x>, <p>)` in dimensionless quadratures.
    pub mean: Vector2<f64>,
    /// Covariance, vacuum = identity.
    pub cov: Matrix2<f64>,
}

impl GaussianState {
    pub fn new(mean: Vector2<f64>, cov: Matrix2<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn vacuum() -> Self {
        Self::new(Vector2::zeros(), Matrix2::identity())
    }

    /// Zero-mean isotropic state `cov = nu * I` (thermal for nu = 2*nbar + 1).
    pub fn thermal(nu: f64) -> Self {
        Self::new(Vector2::zeros(), Matrix2::identity() * nu)
    }

    /// Vacuum displaced to mean `(dx, dp)`.
    pub fn displaced_vacuum(dx: f64, dp: f64) -> Self {
        Self::new(Vector2::new(dx, dp), Matrix2::identity())
    }

    fn is_finite(&self) -> bool {
        self.mean.iter().all(|v| v.is_finite()) && self.cov.iter().all(|v| v.is_finite())
    }
}

/// Validation defects; the caller picks the rejection threshold.
#[derive(Debug, Clone, Copy)]
pub struct StateDiagnostics {
    pub symmetric_defect: f64,
    /// `max(0, 1 - det cov)`.
    pub physicality_defect: f64,
    pub purity: f64,
}

pub fn validate_state(s: &GaussianState) -> Result<StateDiagnostics> {
    if !s.is_finite() {
        return Err(Error::NonFiniteState);
    }
    let det = s.cov.determinant();
    if det <= 0.0 {
        return Err(Error::DegenerateCovariance(det));
    }
    Ok(StateDiagnostics {
        symmetric_defect: (s.cov[(0, 1)] - s.cov[(1, 0)]).abs(),
        physicality_defect: (1.0 - det).max(0.0),
        purity: det.powf(-0.5),
    })
}

/// `(det cov)^(-1/2)`; 1 for pure states, 1/nu for thermal `nu * I`.
pub fn purity(s: &GaussianState) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFiniteState);
    }
    let det = s.cov.determinant();
    if det <= 0.0 {
        return Err(Error::DegenerateCovariance(det));
    }
    Ok(det.powf(-0.5))
}

pub fn ensure_physical(s: &GaussianState) -> Result<()> {
    let d = validate_state(s)?;
    let defect = d.symmetric_defect.max(d.physicality_defect);
    if defect >= PHYSICALITY_TOL {
        return Err(Error::UnphysicalState(defect));
    }
    Ok(())
}

/// Quadratic part as `G = 1/F_quad - 1` plus the mean-term exponent `E`,
/// so that `F = exp(-E) / (1 + G)`.
///
/// `G` is assembled from the conjugate-multiplied identity
/// `sqrt(D+d) - sqrt(d) - 2 = [(D-4)^2 - 16 d] / ((u - v + 2)(D - 4 + 2 d + 2 u v))`
/// which avoids the catastrophic cancellation of the textbook expression when
/// both states are close to each other and to a pure state.
fn fidelity_parts(a: &GaussianState, b: &GaussianState) -> Result<(f64, f64)> {
    ensure_physical(a)?;
    ensure_physical(b)?;
    let m = a.cov + b.cov;
    let det_m = m.determinant();
    let d4 = det_m - 4.0; // >= 0 by the Minkowski determinant inequality
    let sa = (a.cov.determinant() - 1.0).max(0.0);
    let sb = (b.cov.determinant() - 1.0).max(0.0);
    let delta = sa * sb;

    let u = (det_m + delta).sqrt();
    let v = delta.sqrt();
    let num = (d4 * d4 - 16.0 * delta).max(0.0);
    let den = 2.0 * (u - v + 2.0) * (d4 + 2.0 * delta + 2.0 * u * v);
    let g = if den > 0.0 { num / den } else { 0.0 };

    let dd = a.mean - b.mean;
    let e = if dd == Vector2::zeros() {
        0.0
    } else {
        let inv = m
            .try_inverse()
            .ok_or(Error::DegenerateCovariance(det_m))?;
        FIDELITY_MEAN_COEFF * (dd.transpose() * inv * dd)[(0, 0)]
    };
    Ok((g, e))
}

/// Uhlmann fidelity between two single-mode Gaussian states.
pub fn fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let (g, e) = fidelity_parts(a, b)?;
    Ok((-e).exp() / (1.0 + g))
}

/// `1 - sqrt(F)`, computed without the `1 - (1 - tiny)` cancellation.
///
/// This is the quantity the Bures finite-difference QFI route actually
/// needs; for nearby states it stays accurate far below `f64` resolution
/// of the fidelity itself.
pub fn one_minus_sqrt_fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let (g, e) = fidelity_parts(a, b)?;
    Ok(-(-0.5 * e - 0.5 * g.ln_1p()).exp_m1())
}

/// Bures distance `sqrt(2) * sqrt(1 - sqrt(F))`.
pub fn bures_distance(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    Ok((2.0 * one_minus_sqrt_fidelity(a, b)?).sqrt())
}
