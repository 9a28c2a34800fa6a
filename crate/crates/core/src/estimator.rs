//! Monte-Carlo homodyne estimation runs that check the quantum Cramér–Rao
//! bound empirically.
//!
//! The measurement is x-quadrature homodyne: outcomes are i.i.d. draws from
//! a zero-mean normal with variance `sigma_xx / 2`. A maximum-likelihood
//! estimate of the thermal variance is inverted through
//! `v = coth(Omega / 2T) / 2` to recover the target parameter. Homodyne is a
//! concrete, convenient measurement, not an optimal one; its classical
//! Fisher information sits strictly below the QFI for these probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{ensure_physical, GaussianState};
use crate::qfi::cramer_rao_bound;
use crate::swanson::{probe_state, qfi_authoritative, SwansonParams, Target};

/// Bisection tolerance for the variance inversion.
pub const INVERSION_TOL: f64 = 1e-12;

/// Sample variance at or below this is treated as the vacuum boundary.
pub const SUB_VACUUM_FLOOR: f64 = 0.5 + 1e-12;

/// Monte-Carlo sample count for the classical-Fisher-information score
/// oracle.
const CFI_ORACLE_SAMPLES: usize = 1_000_000;

/// Draws `q` i.i.d. homodyne outcomes from the state's x-quadrature
/// distribution (zero-mean normal with variance `sigma_xx / 2`).
/// Deterministic given the generator state.
pub fn sample_homodyne(state: &GaussianState, q: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    ensure_physical(state)?;
    if q < 1 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let sd = (state.cov[(0, 0)] / 2.0).sqrt();
    let normal = Normal::new(state.mean[0], sd)
        .map_err(|e| Error::InvalidParameter(format!("sampling distribution: {e}")))?;
    Ok((0..q).map(|_| normal.sample(rng)).collect())
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// The homodyne variance `v(theta) = coth(Omega / 2T) / 2` as a function of
/// the target parameter, everything else held at `known`.
fn model_variance(theta: f64, target: Target, known: &SwansonParams) -> f64 {
    let (omega, t) = match target {
        Target::Omega => (theta, known.temperature),
        Target::Temperature => (known.omega, theta),
        Target::Epsilon => unreachable!("estimator targets are omega and temperature"),
    };
    let omega_eff = omega * (1.0 - 4.0 * known.epsilon * known.epsilon).sqrt();
    coth(omega_eff / (2.0 * t)) / 2.0
}

/// Maximum-likelihood parameter estimate from homodyne samples.
///
/// The MLE of the variance of a known-mean normal is the mean of squares;
/// it is inverted through the monotone map `theta -> v(theta)` by bisection.
/// Returns `(estimate, clamped)`; a sample variance at or below the vacuum
/// value 1/2 cannot be inverted and clamps to the boundary (`T -> 0`,
/// respectively the upper end of the omega bracket) with the flag set.
pub fn estimate_parameter(
    samples: &[f64],
    target: Target,
    known: &SwansonParams,
) -> Result<(f64, bool)> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    if target == Target::Epsilon {
        return Err(Error::InvalidParameter(
            "variance inversion supports omega and temperature targets".into(),
        ));
    }
    let v = samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64;

    // v increases with T and decreases with omega.
    let increasing = target == Target::Temperature;
    if v <= SUB_VACUUM_FLOOR {
        let boundary = if increasing { 0.0 } else { omega_upper_bracket(v, known) };
        return Ok((boundary, true));
    }

    let (mut lo, mut hi) = match target {
        Target::Temperature => {
            // v = coth(x)/2 with x = Omega/2T; large T gives v ~ T/Omega.
            let omega_eff = known.omega * (1.0 - 4.0 * known.epsilon * known.epsilon).sqrt();
            (1e-12, (2.0 * v * omega_eff).max(10.0))
        }
        Target::Omega => (1e-12, omega_upper_bracket(v, known)),
        Target::Epsilon => unreachable!(),
    };
    while hi - lo > INVERSION_TOL {
        let mid = 0.5 * (lo + hi);
        let too_low = if increasing {
            model_variance(mid, target, known) < v
        } else {
            model_variance(mid, target, known) > v
        };
        if too_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), false))
}

fn omega_upper_bracket(v: f64, known: &SwansonParams) -> f64 {
    // Any omega with coth(Omega/2T)/2 < v bounds the root from above; the
    // vacuum limit v -> 1/2 pushes the bracket out, capped well past any
    // physically sensible probe frequency.
    let excess = (v - 0.5).max(1e-12);
    let scale = 1.0 - 4.0 * known.epsilon * known.epsilon;
    (known.temperature / scale.sqrt() * (1.0 / excess).ln_1p().max(1.0) * 10.0).max(1e3)
}

/// One full Monte-Carlo validation run of the Cramér–Rao chain.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationRun {
    pub target: Target,
    pub true_value: f64,
    pub q: u64,
    pub r: u64,
    pub seed: u64,
    pub estimates: Vec<f64>,
    /// Unbiased sample variance of the replica estimates.
    pub empirical_variance: f64,
    /// `1 / (Q * I_Q)` with the closed-form QFI.
    pub crb_quantum: f64,
    /// Per-sample classical Fisher information of the homodyne measurement,
    /// from the Monte-Carlo score oracle.
    pub cfi_classical: f64,
    /// Replicas whose sample variance fell at or below the vacuum value.
    pub clamped_replicas: u64,
}

/// Runs `r` independent replicas of `q` homodyne samples each, estimates the
/// target in every replica, and checks the one-sided quantum Cramér–Rao
/// inequality with a `3 sqrt(2/R)` statistical margin.
pub fn crb_experiment(
    p: &SwansonParams,
    target: Target,
    q: u64,
    r: u64,
    seed: u64,
) -> Result<EstimationRun> {
    if q < 1_000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1000 samples per replica, got {q}"
        )));
    }
    if r < 50 {
        return Err(Error::InvalidParameter(format!(
            "need at least 50 replicas, got {r}"
        )));
    }
    let state = probe_state(p)?;
    let true_value = match target {
        Target::Omega => p.omega,
        Target::Temperature => p.temperature,
        Target::Epsilon => {
            return Err(Error::InvalidParameter(
                "simulation targets are omega and temperature".into(),
            ))
        }
    };

    let mut estimates = Vec::with_capacity(r as usize);
    let mut clamped = 0u64;
    for i in 0..r {
        // Replica streams are derived from (seed, index), so the run is
        // reproducible and order-independent. Stream 0 is reserved for the
        // score oracle.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i + 1);
        let samples = sample_homodyne(&state, q as usize, &mut rng)?;
        let (est, was_clamped) = estimate_parameter(&samples, target, p)?;
        if was_clamped {
            clamped += 1;
        }
        estimates.push(est);
    }

    let mean = estimates.iter().sum::<f64>() / r as f64;
    let empirical_variance =
        estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (r as f64 - 1.0);

    let qfi = qfi_authoritative(p, target)?;
    let crb_quantum = cramer_rao_bound(qfi, q)?;
    let cfi_classical = cfi_score_oracle(p, target, true_value, seed)?;

    let margin = 1.0 - 3.0 * (2.0 / r as f64).sqrt();
    if empirical_variance < crb_quantum * margin {
        return Err(Error::VerificationFailed(format!(
            "empirical variance {empirical_variance} violates the quantum Cramér–Rao bound \
             {crb_quantum} beyond the statistical margin"
        )));
    }

    Ok(EstimationRun {
        target,
        true_value,
        q,
        r,
        seed,
        estimates,
        empirical_variance,
        crb_quantum,
        cfi_classical,
        clamped_replicas: clamped,
    })
}

/// Per-sample classical Fisher information of homodyne at `theta`, by a
/// Monte-Carlo average of the squared finite-difference score of the
/// Gaussian log-likelihood.
fn cfi_score_oracle(p: &SwansonParams, target: Target, theta: f64, seed: u64) -> Result<f64> {
    let h = 1e-4 * theta.abs().max(1.0);
    let v0 = model_variance(theta, target, p);
    let v_plus = model_variance(theta + h, target, p);
    let v_minus = model_variance(theta - h, target, p);
    if !(v_minus > 0.0) {
        return Err(Error::OutsideDomain {
            value: theta - h,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let log_lik = |x: f64, v: f64| -> f64 { -x * x / (2.0 * v) - 0.5 * v.ln() };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let normal = Normal::new(0.0, v0.sqrt())
        .map_err(|e| Error::InvalidParameter(format!("score oracle: {e}")))?;
    let mut acc = 0.0;
    for _ in 0..CFI_ORACLE_SAMPLES {
        let x = normal.sample(&mut rng);
        let score = (log_lik(x, v_plus) - log_lik(x, v_minus)) / (2.0 * h);
        acc += score * score;
    }
    Ok(acc / CFI_ORACLE_SAMPLES as f64)
}

/// Analytic classical Fisher information of a zero-mean normal family with
/// variance `v(theta)`: `v'(theta)^2 / (2 v^2)`. Used to validate the score
/// oracle.
pub fn cfi_analytic(p: &SwansonParams, target: Target, theta: f64) -> f64 {
    let h = 1e-6 * theta.abs().max(1.0);
    let v0 = model_variance(theta, target, p);
    let dv = (model_variance(theta + h, target, p) - model_variance(theta - h, target, p))
        / (2.0 * h);
    dv * dv / (2.0 * v0 * v0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(omega: f64, epsilon: f64, temperature: f64) -> SwansonParams {
        SwansonParams::new(omega, epsilon, 1.0, temperature).unwrap()
    }

    #[test]
    fn homodyne_variance_matches_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = 1_000_000usize;
        let samples = sample_homodyne(&GaussianState::vacuum(), q, &mut rng).unwrap();
        let v = samples.iter().map(|x| x * x).sum::<f64>() / q as f64;
        let tol = 3.0 * (2.0 / q as f64).sqrt();
        assert!((v / 0.5 - 1.0).abs() < tol, "v = {v}");

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = sample_homodyne(&GaussianState::thermal(3.0), q, &mut rng).unwrap();
        let v = samples.iter().map(|x| x * x).sum::<f64>() / q as f64;
        assert!((v / 1.5 - 1.0).abs() < tol, "v = {v}");
    }

    #[test]
    fn homodyne_is_deterministic_per_seed() {
        let state = GaussianState::thermal(2.0);
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        let a = sample_homodyne(&state, 1000, &mut r1).unwrap();
        let b = sample_homodyne(&state, 1000, &mut r2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inversion_roundtrip() {
        let p = params(2.0, 0.2, 0.5);
        let v0 = model_variance(0.5, Target::Temperature, &p);
        // A synthetic sample whose mean square is exactly the model variance.
        let samples = [v0.sqrt(), -(v0.sqrt())];
        let (t_hat, clamped) = estimate_parameter(&samples, Target::Temperature, &p).unwrap();
        assert!(!clamped);
        assert!((t_hat - 0.5).abs() < 1e-10, "t_hat = {t_hat}");

        let v0 = model_variance(2.0, Target::Omega, &p);
        let samples = [v0.sqrt(), -(v0.sqrt())];
        let (w_hat, clamped) = estimate_parameter(&samples, Target::Omega, &p).unwrap();
        assert!(!clamped);
        assert!((w_hat - 2.0).abs() < 1e-9, "w_hat = {w_hat}");
    }

    #[test]
    fn sub_vacuum_clamps_with_flag() {
        let p = params(2.0, 0.2, 0.5);
        let samples = [0.1, -0.1]; // mean square 0.01 << 1/2
        let (t_hat, clamped) = estimate_parameter(&samples, Target::Temperature, &p).unwrap();
        assert!(clamped);
        assert_eq!(t_hat, 0.0);
    }

    #[test]
    fn score_oracle_matches_analytic_cfi() {
        let p = params(2.0, 0.2, 0.5);
        let oracle = cfi_score_oracle(&p, Target::Temperature, 0.5, 11).unwrap();
        let analytic = cfi_analytic(&p, Target::Temperature, 0.5);
        assert_relative_eq!(oracle, analytic, max_relative = 0.02);
    }

    #[test]
    fn homodyne_cfi_below_qfi() {
        let p = params(2.0, 0.2, 0.5);
        let cfi = cfi_analytic(&p, Target::Temperature, 0.5);
        let qfi = qfi_authoritative(&p, Target::Temperature).unwrap();
        assert!(cfi < qfi, "cfi {cfi} vs qfi {qfi}");
    }

    #[test]
    fn experiment_is_reproducible_and_consistent() {
        let p = params(2.0, 0.2, 0.5);
        let run1 = crb_experiment(&p, Target::Temperature, 5_000, 60, 3).unwrap();
        let run2 = crb_experiment(&p, Target::Temperature, 5_000, 60, 3).unwrap();
        assert_eq!(run1.estimates, run2.estimates);
        assert_eq!(run1.empirical_variance, run2.empirical_variance);

        // Mean of the replica estimates is consistent with the truth.
        let mean = run1.estimates.iter().sum::<f64>() / run1.estimates.len() as f64;
        let se = (run1.empirical_variance / run1.r as f64).sqrt();
        assert!((mean - 0.5).abs() < 4.0 * se, "mean {mean}, se {se}");
        assert!(run1.empirical_variance >= run1.crb_quantum * (1.0 - 3.0 * (2.0 / 60.0f64).sqrt()));
    }

    #[test]
    fn variance_scales_inversely_with_samples() {
        let p = params(2.0, 0.2, 0.5);
        let run_a = crb_experiment(&p, Target::Temperature, 10_000, 100, 5).unwrap();
        let run_b = crb_experiment(&p, Target::Temperature, 20_000, 100, 5).unwrap();
        let ratio = run_a.empirical_variance / run_b.empirical_variance;
        assert!((ratio - 2.0).abs() < 0.4, "ratio = {ratio}");
    }

    #[test]
    fn preconditions_enforced() {
        let p = params(2.0, 0.2, 0.5);
        assert!(crb_experiment(&p, Target::Temperature, 10, 60, 1).is_err());
        assert!(crb_experiment(&p, Target::Temperature, 5_000, 5, 1).is_err());
        assert!(crb_experiment(&p, Target::Epsilon, 5_000, 60, 1).is_err());
        let broken = params(2.0, 0.7, 0.5);
        assert!(crb_experiment(&broken, Target::Temperature, 5_000, 60, 1).is_err());
    }
}
