//! Gaussian fidelity against truncated-Fock oracles at N = 128.
//!
//! For diagonal (thermal) states the Fock fidelity is
//! `[sum_n sqrt(p_n q_n)]^2`; for displaced vacua it is the squared
//! coherent-state overlap. Both are computed without any Gaussian algebra.

use swanson_metrology::focklab::coherent_state;
use swanson_metrology::gaussian::{fidelity, GaussianState};

const N: usize = 128;

fn thermal_populations(nbar: f64) -> Vec<f64> {
    let q = nbar / (nbar + 1.0);
    let mut p: Vec<f64> = (0..N).map(|n| q.powi(n as i32)).collect();
    let z: f64 = p.iter().sum();
    for x in &mut p {
        *x /= z;
    }
    p
}

#[test]
fn thermal_fidelity_matches_fock_oracle() {
    for &(na, nb) in &[(0.5, 1.2), (0.3, 0.3), (1.0, 2.5), (0.05, 1.7)] {
        let pa = thermal_populations(na);
        let pb = thermal_populations(nb);
        let bhatta: f64 = pa.iter().zip(&pb).map(|(a, b)| (a * b).sqrt()).sum();
        let want = bhatta * bhatta;

        let got = fidelity(
            &GaussianState::thermal(2.0 * na + 1.0),
            &GaussianState::thermal(2.0 * nb + 1.0),
        )
        .unwrap();
        assert!(
            (got - want).abs() < 1e-8,
            "nbar=({na},{nb}): gaussian {got} vs fock {want}"
        );
    }
}

#[test]
fn displaced_vacuum_fidelity_matches_coherent_overlap() {
    for &(ga, gb) in &[(0.0, 0.8), (0.5, 1.3), (-0.7, 0.7), (1.9, 2.2)] {
        let ca = coherent_state(N, ga);
        let cb = coherent_state(N, gb);
        let want = ca.dot(&cb).powi(2);

        let s = 2.0f64.sqrt();
        let got = fidelity(
            &GaussianState::displaced_vacuum(s * ga, 0.0),
            &GaussianState::displaced_vacuum(s * gb, 0.0),
        )
        .unwrap();
        assert!(
            (got - want).abs() < 1e-8,
            "gamma=({ga},{gb}): gaussian {got} vs fock {want}"
        );
    }
}

#[test]
fn vacuum_against_thermal_is_the_ground_population() {
    for &nbar in &[0.5, 1.0, 2.0] {
        let p = thermal_populations(nbar);
        let got = fidelity(
            &GaussianState::vacuum(),
            &GaussianState::thermal(2.0 * nbar + 1.0),
        )
        .unwrap();
        assert!((got - p[0]).abs() < 1e-8);
    }
}
