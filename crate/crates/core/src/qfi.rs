//! Quantum Fisher information for single-parameter Gaussian families.
//!
//! Two independent routes are provided:
//!
//! - [`qfi_gaussian_closed`]: the Gaussian closed form in moments and purity,
//!   with derivatives taken by central finite differences of the family;
//! - [`qfi_bures_fd`]: `8 [1 - sqrt(F)] / h^2` from the Bures distance of two
//!   nearby states, Richardson-extrapolated with an adaptive step ladder.
//!
//! Agreement of the two routes is the working definition of "correct" for
//! every probe family in this crate.

use serde::Serialize;

use crate::conventions::QFI_MEAN_COEFF;
use crate::error::{Error, Result};
use crate::gaussian::{one_minus_sqrt_fidelity, purity, GaussianState};
use nalgebra::{Matrix2, Vector2};

/// A map from a real parameter to a physical Gaussian state.
pub struct ParamFamily {
    eval: Box<dyn Fn(f64) -> Result<GaussianState> + Send + Sync>,
    label: String,
    domain: (f64, f64),
}

impl ParamFamily {
    pub fn new(
        label: impl Into<String>,
        domain: (f64, f64),
        eval: impl Fn(f64) -> Result<GaussianState> + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Box::new(eval),
            label: label.into(),
            domain,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.domain.0 && theta < self.domain.1
    }

    pub fn state_at(&self, theta: f64) -> Result<GaussianState> {
        if !self.contains(theta) {
            return Err(Error::OutsideDomain {
                value: theta,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        (self.eval)(theta)
    }
}

/// Default central-difference step: `1e-4 * max(|theta|, 1)`.
pub fn fd_default_step(theta: f64) -> f64 {
    1e-4 * theta.abs().max(1.0)
}

/// Values below this floor are treated as numerically uninformative when
/// forming relative route discrepancies. The QFI of a near-vacuum thermal
/// probe scales as `(nu - 1)^2`, and the finite-difference route works with
/// `nu` stored in `f64` covariances, so its relative noise scales as
/// `eps_machine / qfi` times an O(1e3..1e4) cancellation factor from the
/// fidelity algebra. Below ~1e-7 no `f64` route can resolve the family to
/// 1e-5 relative; such probes are also metrologically useless (the bound on
/// the estimator deviation exceeds the parameter itself at any realistic
/// number of measurements).
pub const QFI_FLOOR: f64 = 1e-7;

/// Gaussian QFI from explicit moment derivatives:
/// `Tr[(s^-1 s')^2] / (2 (1 + P^2)) + 2 P'^2 / (1 - P^4) + c_m d'^T s^-1 d'`.
pub fn qfi_closed_from_moments(
    cov: &Matrix2<f64>,
    cov_d: &Matrix2<f64>,
    purity: f64,
    purity_d: f64,
    mean_d: &Vector2<f64>,
) -> Result<f64> {
    let det = cov.determinant();
    if det <= 0.0 {
        return Err(Error::DegenerateCovariance(det));
    }
    let inv = cov
        .try_inverse()
        .ok_or(Error::DegenerateCovariance(det))?;

    let a = inv * cov_d;
    let term1 = 0.5 * (a * a).trace() / (1.0 + purity * purity);

    let p4 = 1.0 - purity.powi(4);
    let term2 = if p4 < 1e-10 {
        if purity_d.abs() < 1e-10 {
            0.0
        } else {
            return Err(Error::PurityTermSingularity);
        }
    } else {
        2.0 * purity_d * purity_d / p4
    };

    let term3 = QFI_MEAN_COEFF * (mean_d.transpose() * inv * mean_d)[(0, 0)];
    Ok(term1 + term2 + term3)
}

/// Gaussian closed-form QFI with family derivatives by central differences.
pub fn qfi_gaussian_closed(family: &ParamFamily, theta: f64, dtheta: f64) -> Result<f64> {
    let s0 = family.state_at(theta)?;
    let sp = family.state_at(theta + dtheta)?;
    let sm = family.state_at(theta - dtheta)?;

    let cov_d = (sp.cov - sm.cov) / (2.0 * dtheta);
    let p0 = purity(&s0)?;
    let p_d = (purity(&sp)? - purity(&sm)?) / (2.0 * dtheta);
    let mean_d = (sp.mean - sm.mean) / (2.0 * dtheta);
    qfi_closed_from_moments(&s0.cov, &cov_d, p0, p_d, &mean_d)
}

fn bures_fd_raw(family: &ParamFamily, theta: f64, h: f64) -> Result<f64> {
    let a = family.state_at(theta - 0.5 * h)?;
    let b = family.state_at(theta + 0.5 * h)?;
    Ok(8.0 * one_minus_sqrt_fidelity(&a, &b)? / (h * h))
}

/// Bures finite-difference QFI with two Richardson refinements per step and
/// an adaptive step ladder.
///
/// Each rung extrapolates the triple `(h, h/2, h/4)` twice, which cancels
/// the `h^2` and `h^4` truncation terms and leaves `|r24 - r12| / 15` as an
/// error estimate that actually tracks the extrapolated value.
pub fn qfi_bures_fd(family: &ParamFamily, theta: f64, h_init: f64) -> Result<f64> {
    // Extrapolated value and within-rung consistency estimate at each step.
    let mut rungs: Vec<(f64, f64)> = Vec::new();
    let mut h = h_init;
    for _ in 0..12 {
        if !(family.contains(theta - 0.5 * h) && family.contains(theta + 0.5 * h)) {
            break;
        }
        let i1 = bures_fd_raw(family, theta, h)?;
        let i2 = bures_fd_raw(family, theta, 0.5 * h)?;
        let i4 = bures_fd_raw(family, theta, 0.25 * h)?;
        let r12 = (4.0 * i2 - i1) / 3.0;
        let r24 = (4.0 * i4 - i2) / 3.0;
        let r = (16.0 * r24 - r12) / 15.0;
        let err = (r24 - r12).abs() / (15.0 * r.abs().max(1e-12));
        rungs.push((r, err));
        h *= 2.0;
    }
    // The within-rung estimate alone is unreliable when round-off dominates
    // (the two raw values share correlated noise), so rung selection also
    // requires agreement with a neighboring rung.
    let mut best: Option<(f64, f64)> = None;
    for (k, &(r, err)) in rungs.iter().enumerate() {
        let cross = [k.wrapping_sub(1), k + 1]
            .iter()
            .filter_map(|&j| rungs.get(j))
            .map(|&(rj, _)| (r - rj).abs() / r.abs().max(1e-12))
            .fold(f64::INFINITY, f64::min);
        let score = err.max(if cross.is_finite() { cross } else { 0.0 });
        if best.map_or(true, |(bs, _)| score < bs) {
            best = Some((score, r));
        }
    }
    best.map(|(_, v)| v).ok_or(Error::OutsideDomain {
        value: theta,
        lo: family.domain().0,
        hi: family.domain().1,
    })
}

/// Relative discrepancy between the two routes, floored so that families
/// which are numerically constant in `f64` compare as agreeing.
pub fn rel_discrepancy(closed: f64, fd: f64) -> f64 {
    if closed.abs().max(fd.abs()) < QFI_FLOOR {
        0.0
    } else {
        (closed - fd).abs() / closed.abs().max(QFI_FLOOR)
    }
}

/// Dual-route QFI values at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct QfiReport {
    pub theta: f64,
    pub qfi_closed: f64,
    pub qfi_bures_fd: f64,
    pub fd_step: f64,
    pub rel_discrepancy: f64,
}

pub fn qfi_report(family: &ParamFamily, theta: f64) -> Result<QfiReport> {
    let step = fd_default_step(theta);
    let closed = qfi_gaussian_closed(family, theta, step)?;
    let fd = qfi_bures_fd(family, theta, step)?;
    Ok(QfiReport {
        theta,
        qfi_closed: closed,
        qfi_bures_fd: fd,
        fd_step: step,
        rel_discrepancy: rel_discrepancy(closed, fd),
    })
}

/// Cramér–Rao bound `1 / (Q * I)` for `Q` independent measurements.
pub fn cramer_rao_bound(qfi: f64, q: u64) -> Result<f64> {
    if qfi <= 0.0 {
        return Err(Error::UninformativeFamily);
    }
    Ok(1.0 / (q as f64 * qfi))
}
