//! Calibrated convention constants.
//!
//! The covariance convention is fixed by `sigma_ij = <d_i d_j + d_j d_i> -
//! 2<d_i><d_j>` with dimensionless quadratures, so the vacuum covariance is
//! the identity. Every remaining coefficient is then pinned by a Fock-space
//! oracle rather than taken from any particular printed convention. The
//! calibration tests live in the test suite next to the oracles.

/// Coefficient of the mean term in the fidelity exponent,
/// `exp(-c * dd^T (sigma_a + sigma_b)^{-1} dd)`.
///
/// Calibrated against the coherent-state overlap `|<0|alpha>|^2 = e^{-|alpha|^2}`.
pub const FIDELITY_MEAN_COEFF: f64 = 1.0;

/// Coefficient of the mean term in the Gaussian QFI closed form.
///
/// Calibrated so a displaced vacuum with mean `(theta, 0)` carries QFI 2,
/// the pure-state value `4(<dpsi|dpsi> - |<psi|dpsi>|^2)` for coherent states.
pub const QFI_MEAN_COEFF: f64 = 2.0;

/// Purity exponent: `P = (det sigma)^PURITY_EXPONENT`.
///
/// Only this exponent reproduces the exact thermal-state QFI through the
/// Gaussian closed form; cross-checked by the Fock oracle `Tr rho^2 = 1/nu`.
pub const PURITY_EXPONENT: f64 = -0.5;

/// Which Dyson coefficient Hermitizes the Swanson Hamiltonian numerically.
///
/// The Fock lab runs both candidates; the anti-Hermitian-cancellation
/// solution (`lambda_derived`) is the one that works in this quadrature
/// normalization.
pub const DYSON_LAMBDA_CHOICE: &str = "derived";
