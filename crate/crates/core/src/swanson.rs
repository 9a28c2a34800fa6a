//! The Swanson-oscillator probe.
//!
//! `H = omega a^dag a + alpha a^2 + beta a^dag^2` with `alpha beta =
//! omega^2 epsilon^2`. In the unbroken PT phase (`epsilon < 1/2`) the probe
//! is, up to a similarity transformation, a harmonic oscillator with
//! effective frequency `Omega = omega sqrt(1 - 4 epsilon^2)`, and the thermal
//! probe state is Gaussian with covariance `coth(Omega/2T) * I`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::focklab;
use crate::gaussian::GaussianState;
use crate::qfi::ParamFamily;

/// Estimation target for QFI, gain, cost, and simulation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Omega,
    Temperature,
    Epsilon,
}

impl Target {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Self::Omega),
            "temperature" => Ok(Self::Temperature),
            "epsilon" => Ok(Self::Epsilon),
            other => Err(Error::InvalidParameter(format!("unknown target {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Omega => "omega",
            Self::Temperature => "temperature",
            Self::Epsilon => "epsilon",
        }
    }
}

/// Probe parameters, hbar = k_B = m = 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SwansonParams {
    /// Bare frequency, > 0.
    pub omega: f64,
    /// Non-Hermiticity parameter, >= 0; `alpha * beta = omega^2 epsilon^2`.
    pub epsilon: f64,
    /// Coefficient of `a^2`; only map diagnostics depend on it.
    pub alpha: f64,
    /// Temperature, > 0.
    pub temperature: f64,
}

impl SwansonParams {
    pub fn new(omega: f64, epsilon: f64, alpha: f64, temperature: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega = {omega} must be > 0")));
        }
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must be >= 0"
            )));
        }
        if alpha == 0.0 {
            return Err(Error::ZeroAlpha);
        }
        if !(temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature = {temperature} must be > 0"
            )));
        }
        Ok(Self {
            omega,
            epsilon,
            alpha,
            temperature,
        })
    }

    /// `beta` implied by `alpha beta = omega^2 epsilon^2`.
    pub fn beta(&self) -> f64 {
        self.omega * self.omega * self.epsilon * self.epsilon / self.alpha
    }
}

/// PT-phase classification at `epsilon_cr = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseClass {
    Unbroken,
    ExceptionalPoint,
    Broken,
}

pub fn classify(epsilon: f64) -> PhaseClass {
    if (epsilon - 0.5).abs() < 1e-12 {
        PhaseClass::ExceptionalPoint
    } else if epsilon > 0.5 {
        PhaseClass::Broken
    } else {
        PhaseClass::Unbroken
    }
}

/// `Omega = omega sqrt(1 - 4 epsilon^2)` plus the phase classification.
///
/// Errors in the broken phase, where the spectrum is no longer real and no
/// downstream estimation quantity is defined.
pub fn effective_frequency(p: &SwansonParams) -> Result<(f64, PhaseClass)> {
    match classify(p.epsilon) {
        PhaseClass::Broken => Err(Error::BrokenPhase(p.epsilon)),
        PhaseClass::ExceptionalPoint => Ok((0.0, PhaseClass::ExceptionalPoint)),
        PhaseClass::Unbroken => Ok((
            p.omega * (1.0 - 4.0 * p.epsilon * p.epsilon).sqrt(),
            PhaseClass::Unbroken,
        )),
    }
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `coth(x) - coth(y)` without cancellation: both coths round to exactly 1
/// in f64 once the argument passes ~19, but the difference
/// `2 (e^{-2x} - e^{-2y}) / ((1 - e^{-2x})(1 - e^{-2y}))` stays resolvable
/// down to the underflow threshold.
fn coth_diff(x: f64, y: f64) -> f64 {
    let ex = (-2.0 * x).exp();
    let ey = (-2.0 * y).exp();
    2.0 * (ex - ey) / ((1.0 - ex) * (1.0 - ey))
}

/// Thermal probe state: zero means, `cov = coth(Omega/2T) * I`.
pub fn probe_state(p: &SwansonParams) -> Result<GaussianState> {
    let (omega_eff, phase) = effective_frequency(p).map_err(|_| Error::ProbeUndefined(p.epsilon))?;
    if phase != PhaseClass::Unbroken {
        return Err(Error::ProbeUndefined(p.epsilon));
    }
    Ok(GaussianState::thermal(coth(
        omega_eff / (2.0 * p.temperature),
    )))
}

/// Closed-form QFIs for the probe.
///
/// `i_t_paper` reproduces the printed temperature form (T^2 denominator);
/// `i_t_authoritative` is the oracle-consistent form with T^4, equal to the
/// exponential-family energy variance divided by T^4 and validated by the
/// Bures finite-difference route.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QfiClosedForms {
    pub i_omega: f64,
    pub i_t_paper: f64,
    pub i_t_authoritative: f64,
    pub i_epsilon: f64,
}

pub fn qfi_closed_forms(p: &SwansonParams) -> Result<QfiClosedForms> {
    let (omega_eff, phase) = effective_frequency(p)?;
    if phase != PhaseClass::Unbroken {
        return Err(Error::ProbeUndefined(p.epsilon));
    }
    let one_m = 1.0 - 4.0 * p.epsilon * p.epsilon;
    let t = p.temperature;
    let sh = (omega_eff / (2.0 * t)).sinh();
    let sh2 = sh * sh;
    let i_omega = one_m / (4.0 * t * t * sh2);
    let i_t_paper = p.omega * p.omega * one_m / (4.0 * t * t * sh2);
    let i_t_authoritative = p.omega * p.omega * one_m / (4.0 * t.powi(4) * sh2);
    let i_epsilon = if p.epsilon == 0.0 {
        0.0
    } else {
        4.0 * p.epsilon * p.epsilon * p.omega * p.omega / (t * t * one_m * sh2)
    };
    Ok(QfiClosedForms {
        i_omega,
        i_t_paper,
        i_t_authoritative,
        i_epsilon,
    })
}

/// Authoritative (oracle-consistent) QFI for one target.
pub fn qfi_authoritative(p: &SwansonParams, target: Target) -> Result<f64> {
    let f = qfi_closed_forms(p)?;
    Ok(match target {
        Target::Omega => f.i_omega,
        Target::Temperature => f.i_t_authoritative,
        Target::Epsilon => f.i_epsilon,
    })
}

/// Single-parameter probe families for the QFI engine.
///
/// The epsilon family is extended to `(-1/2, 1/2)`: the covariance depends
/// on epsilon only through `Omega = omega sqrt(1 - 4 eps^2)`, which is even,
/// so central differences at small epsilon stay inside the domain.
pub fn probe_family(p: SwansonParams, target: Target) -> ParamFamily {
    match target {
        Target::Omega => ParamFamily::new("omega", (0.0, f64::INFINITY), move |w| {
            probe_state(&SwansonParams { omega: w, ..p })
        }),
        Target::Temperature => ParamFamily::new("temperature", (0.0, f64::INFINITY), move |t| {
            probe_state(&SwansonParams {
                temperature: t,
                ..p
            })
        }),
        Target::Epsilon => ParamFamily::new("epsilon", (-0.5, 0.5), move |e| {
            let omega_eff = p.omega * (1.0 - 4.0 * e * e).sqrt();
            Ok(GaussianState::thermal(coth(
                omega_eff / (2.0 * p.temperature),
            )))
        }),
    }
}

/// Gain ratio in decibels against the Hermitian baseline `epsilon = 1/omega`.
///
/// Requires `omega > 2` so that the baseline itself sits in the unbroken
/// phase (`Omega_Herm = sqrt(omega^2 - 4)` real and positive).
pub fn gain_ratio(p: &SwansonParams, target: Target) -> Result<f64> {
    if target == Target::Epsilon {
        return Err(Error::InvalidParameter(
            "gain ratio is defined for omega and temperature targets".into(),
        ));
    }
    if !(p.omega > 2.0) {
        return Err(Error::BaselineUndefined(p.omega));
    }
    let baseline = SwansonParams {
        epsilon: 1.0 / p.omega,
        ..*p
    };
    let num = qfi_authoritative(p, target)?;
    let den = qfi_authoritative(&baseline, target)?;
    Ok(10.0 * (num / den).log10())
}

/// Energetic cost of the non-Hermitian contribution and the QFI-per-cost
/// ratio, both as printed and from the Fock oracle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CostReport {
    /// `2 omega [coth(Omega/2T) - coth(omega/2T)]` as printed.
    pub delta_u_paper: f64,
    /// `Tr[H_S rho] - Tr[H_HO rho_HO]` from the Fock lab, zero point discarded
    /// on both sides.
    pub delta_u_oracle: f64,
    pub u_theta: f64,
    pub u_theta_oracle: f64,
}

const COST_ORACLE_DIM: usize = 64;

pub fn energetic_cost(p: &SwansonParams, target: Target) -> Result<CostReport> {
    let (omega_eff, phase) = effective_frequency(p)?;
    if phase != PhaseClass::Unbroken {
        return Err(Error::ProbeUndefined(p.epsilon));
    }
    if p.epsilon == 0.0 {
        return Err(Error::ZeroCostBaseline);
    }
    let t = p.temperature;
    let delta_u_paper = 2.0 * p.omega * coth_diff(omega_eff / (2.0 * t), p.omega / (2.0 * t));
    let delta_u_oracle =
        focklab::energy_cost_oracle(COST_ORACLE_DIM, p.omega, p.epsilon, p.temperature)?;
    let i = qfi_authoritative(p, target)?;
    Ok(CostReport {
        delta_u_paper,
        delta_u_oracle,
        u_theta: i / delta_u_paper,
        u_theta_oracle: i / delta_u_oracle,
    })
}

/// Both candidate Dyson-map coefficients for `eta = exp(lambda x^2 / 2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DysonCoefficients {
    /// `(1 - omega^2 eps^2) / (1 - omega + omega^2 eps^2)` as printed.
    pub lambda_paper: f64,
    /// `-omega (alpha - beta) / (omega - alpha - beta)`: the coefficient that
    /// cancels the anti-Hermitian `{x, p}` term in this quadrature
    /// normalization. The Fock lab decides which one Hermitizes.
    pub lambda_derived: f64,
}

pub fn dyson_coefficient(p: &SwansonParams) -> Result<DysonCoefficients> {
    let beta = p.beta();
    let den_paper = 1.0 - p.omega + p.omega * p.omega * p.epsilon * p.epsilon;
    let den_derived = p.omega - p.alpha - beta;
    if den_paper.abs() < 1e-12 || den_derived.abs() < 1e-12 {
        return Err(Error::DysonSingular);
    }
    Ok(DysonCoefficients {
        lambda_paper: (1.0 - p.omega * p.omega * p.epsilon * p.epsilon) / den_paper,
        lambda_derived: -p.omega * (p.alpha - beta) / den_derived,
    })
}

/// Exploration variant with `alpha beta = -omega^2 epsilon^2`, for which the
/// energy gap `Omega = omega sqrt(1 + 4 eps^2)` never closes. No enhancement
/// claims attach to it.
pub fn effective_frequency_neg(omega: f64, epsilon: f64) -> f64 {
    omega * (1.0 + 4.0 * epsilon * epsilon).sqrt()
}

/// Closed-form QFIs for the negative-coupling variant (same derivation,
/// gap `omega sqrt(1 + 4 eps^2)`).
pub fn qfi_closed_forms_neg(p: &SwansonParams) -> Result<QfiClosedForms> {
    let omega_eff = effective_frequency_neg(p.omega, p.epsilon);
    let one_p = 1.0 + 4.0 * p.epsilon * p.epsilon;
    let t = p.temperature;
    let sh2 = (omega_eff / (2.0 * t)).sinh().powi(2);
    Ok(QfiClosedForms {
        i_omega: one_p / (4.0 * t * t * sh2),
        i_t_paper: p.omega * p.omega * one_p / (4.0 * t * t * sh2),
        i_t_authoritative: p.omega * p.omega * one_p / (4.0 * t.powi(4) * sh2),
        i_epsilon: if p.epsilon == 0.0 {
            0.0
        } else {
            4.0 * p.epsilon * p.epsilon * p.omega * p.omega / (t * t * one_p * sh2)
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfi::{fd_default_step, qfi_bures_fd, rel_discrepancy};
    use approx::assert_relative_eq;

    fn params(omega: f64, epsilon: f64, temperature: f64) -> SwansonParams {
        SwansonParams::new(omega, epsilon, 1.0, temperature).unwrap()
    }

    #[test]
    fn effective_frequency_table() {
        let (w, ph) = effective_frequency(&params(2.0, 0.0, 0.5)).unwrap();
        assert_eq!((w, ph), (2.0, PhaseClass::Unbroken));

        let (w, ph) = effective_frequency(&params(2.0, 0.5, 0.5)).unwrap();
        assert_eq!((w, ph), (0.0, PhaseClass::ExceptionalPoint));

        let (w, ph) = effective_frequency(&params(2.0, 0.3, 0.5)).unwrap();
        assert_relative_eq!(w, 1.6, max_relative = 1e-14);
        assert_eq!(ph, PhaseClass::Unbroken);

        assert!(matches!(
            effective_frequency(&params(2.0, 0.6, 0.5)),
            Err(Error::BrokenPhase(_))
        ));
    }

    #[test]
    fn omega_monotone_in_epsilon() {
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let e = 0.01 * i as f64;
            let (w, _) = effective_frequency(&params(3.0, e, 0.5)).unwrap();
            assert!(w < last);
            last = w;
        }
    }

    #[test]
    fn probe_state_examples() {
        let s = probe_state(&params(1.0, 0.0, 0.5)).unwrap();
        assert_relative_eq!(s.cov[(0, 0)], 1.0 / 1.0f64.tanh(), max_relative = 1e-14);
        assert_relative_eq!(s.cov[(0, 0)], 1.313_035_285_499_331, max_relative = 1e-12);

        // T -> 0: vacuum.
        let s = probe_state(&params(1.0, 0.0, 1e-4)).unwrap();
        assert_relative_eq!(s.cov[(0, 0)], 1.0, max_relative = 1e-12);

        // Large Omega/2T: coth of a large argument.
        let s = probe_state(&params(2.0, 0.2, 0.1)).unwrap();
        assert!((s.cov[(0, 0)] - 1.0).abs() < 1e-7);

        assert!(matches!(
            probe_state(&params(2.0, 0.5, 0.5)),
            Err(Error::ProbeUndefined(_))
        ));
        assert!(matches!(
            probe_state(&params(2.0, 0.7, 0.5)),
            Err(Error::ProbeUndefined(_))
        ));
    }

    #[test]
    fn closed_forms_match_bures_fd() {
        // Fig. 1 working point.
        let p = params(2.0, 0.2, 0.1);
        let f = qfi_closed_forms(&p).unwrap();

        let fam = probe_family(p, Target::Omega);
        let fd = qfi_bures_fd(&fam, p.omega, fd_default_step(p.omega)).unwrap();
        assert!(rel_discrepancy(f.i_omega, fd) < 1e-5, "{} vs {}", f.i_omega, fd);

        let fam = probe_family(p, Target::Epsilon);
        let fd = qfi_bures_fd(&fam, p.epsilon, fd_default_step(p.epsilon)).unwrap();
        assert!(rel_discrepancy(f.i_epsilon, fd) < 1e-5, "{} vs {}", f.i_epsilon, fd);
    }

    #[test]
    fn temperature_forms_paper_vs_authoritative() {
        let p = params(2.0, 0.2, 0.5);
        let f = qfi_closed_forms(&p).unwrap();
        // Same form up to the temperature power.
        assert_relative_eq!(
            f.i_t_paper,
            f.i_t_authoritative * p.temperature * p.temperature,
            max_relative = 1e-14
        );
        // Authoritative form agrees with the Bures route.
        let fam = probe_family(p, Target::Temperature);
        let fd = qfi_bures_fd(&fam, p.temperature, fd_default_step(p.temperature)).unwrap();
        assert!(rel_discrepancy(f.i_t_authoritative, fd) < 1e-5);
    }

    #[test]
    fn epsilon_qfi_limits() {
        let f = qfi_closed_forms(&params(2.0, 0.0, 0.5)).unwrap();
        assert_eq!(f.i_epsilon, 0.0);

        // Divergence toward the exceptional point.
        let i40 = qfi_closed_forms(&params(2.0, 0.40, 0.5)).unwrap().i_epsilon;
        let i45 = qfi_closed_forms(&params(2.0, 0.45, 0.5)).unwrap().i_epsilon;
        let i49 = qfi_closed_forms(&params(2.0, 0.49, 0.5)).unwrap().i_epsilon;
        assert!(i49 > i45 && i45 > i40);
    }

    #[test]
    fn gain_ratio_baseline_is_zero() {
        let p = params(3.0, 1.0 / 3.0, 0.1);
        assert_relative_eq!(gain_ratio(&p, Target::Omega).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gain_ratio_orderings() {
        // The gain crosses zero at the Hermitian baseline epsilon = 1/omega:
        // below it the probe underperforms, above it the narrowed gap wins.
        let g2 = gain_ratio(&params(3.0, 0.2, 0.1), Target::Omega).unwrap();
        let g45 = gain_ratio(&params(3.0, 0.45, 0.1), Target::Omega).unwrap();
        assert!(g2 < 0.0, "g2 = {g2}");
        assert!(g45 > 0.0, "g45 = {g45}");
        // Higher temperature washes the enhancement out.
        let g45_hot = gain_ratio(&params(3.0, 0.45, 0.5), Target::Omega).unwrap();
        assert!(g45_hot < g45, "{g45_hot} vs {g45}");
    }

    #[test]
    fn gain_ratio_requires_omega_above_two() {
        assert!(matches!(
            gain_ratio(&params(2.0, 0.2, 0.1), Target::Omega),
            Err(Error::BaselineUndefined(_))
        ));
    }

    #[test]
    fn gain_ratio_monotone_in_epsilon() {
        let mut last = f64::NEG_INFINITY;
        for i in 0..8 {
            let e = 0.1 + 0.05 * i as f64;
            let g = gain_ratio(&params(3.0, e, 0.1), Target::Omega).unwrap();
            assert!(g > last, "eps={e}: {g} <= {last}");
            last = g;
        }
    }

    #[test]
    fn dyson_coefficient_examples() {
        let c = dyson_coefficient(&params(2.0, 0.2, 0.5)).unwrap();
        assert_relative_eq!(c.lambda_paper, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.lambda_derived, -2.0, max_relative = 1e-12);

        // Hermitian case alpha = beta (epsilon = 1/omega): no map needed.
        let c = dyson_coefficient(&params(3.0, 1.0 / 3.0, 0.5)).unwrap();
        assert_relative_eq!(c.lambda_derived, 0.0, epsilon = 1e-12);

        // Both closed-form denominators can vanish.
        assert!(matches!(
            dyson_coefficient(&params(2.0, 0.5, 0.5)),
            Err(Error::DysonSingular)
        ));
    }

    #[test]
    fn energetic_cost_behavior() {
        // Printed form reproduced by direct evaluation.
        let p = params(2.0, 0.2, 0.1);
        let c = energetic_cost(&p, Target::Omega).unwrap();
        let omega_eff = 2.0 * (1.0f64 - 0.16).sqrt();
        let want = 4.0 * coth_diff(omega_eff / 0.2, 2.0 / 0.2);
        assert_relative_eq!(c.delta_u_paper, want, max_relative = 1e-12);
        assert!(c.delta_u_paper.is_finite() && c.u_theta.is_finite());
        assert!(c.delta_u_oracle.is_finite() && c.u_theta_oracle.is_finite());

        assert!(matches!(
            energetic_cost(&params(2.0, 0.0, 0.1), Target::Omega),
            Err(Error::ZeroCostBaseline)
        ));
    }

    #[test]
    fn u_omega_decreasing_in_omega() {
        let mut last = f64::INFINITY;
        for i in 0..15 {
            let w = 2.5 + 0.25 * i as f64;
            let u = energetic_cost(&params(w, 0.2, 0.1), Target::Omega)
                .unwrap()
                .u_theta;
            assert!(u < last, "omega={w}: {u} >= {last}");
            last = u;
        }
    }

    #[test]
    fn epsilon_divergence_rate_bounded() {
        // I_eps * (1 - 4 eps^2)^2 / eps^2 stays bounded as eps -> 1/2 at
        // fixed small Omega/2T (sinh x ~ x regime).
        let mut vals = Vec::new();
        for e in [0.47, 0.48, 0.49, 0.495] {
            let p = params(0.2, e, 2.0);
            let f = qfi_closed_forms(&p).unwrap();
            let one_m = 1.0 - 4.0 * e * e;
            vals.push(f.i_epsilon * one_m * one_m / (e * e));
        }
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(hi / lo < 1.1, "limit values spread too far: {vals:?}");
    }
}
