use std::fs;
use std::process::Command;

fn swanson(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_swanson"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn qfi_single_point_agrees_across_routes() {
    let out = swanson(&[
        "qfi", "--omega", "2", "--temp", "0.1", "--eps", "0.2", "--target", "omega",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# qfi_mean_coeff = 2"));
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert_eq!(
        header,
        "omega,temperature,epsilon,Omega,qfi_omega_closed,qfi_T_paper,qfi_T_authoritative,\
         qfi_epsilon_closed,qfi_bures_fd_target,target,rel_discrepancy"
    );
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(row.len(), 11);
    assert_eq!(row[9], "omega");
    let rel: f64 = row[10].parse().unwrap();
    assert!(rel < 1e-5, "rel_discrepancy {rel}");
    // 17-significant-digit floats round-trip.
    let omega: f64 = row[0].parse().unwrap();
    assert_eq!(omega, 2.0);
}

#[test]
fn broken_phase_rows_go_to_the_sidecar() {
    let dir = std::env::temp_dir().join("swanson-cli-sidecar");
    fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("grid.csv");
    let out = swanson(&[
        "qfi",
        "--omega",
        "2",
        "--temp",
        "0.5",
        "--eps",
        "0.2:0.6:0.2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = fs::read_to_string(&out_path).unwrap();
    assert_eq!(body.lines().filter(|l| !l.starts_with('#')).count(), 1 + 2);
    let sidecar = fs::read_to_string(dir.join("grid.csv.errors")).unwrap();
    assert!(sidecar.contains("broken PT phase"));
}

#[test]
fn zero_epsilon_has_zero_epsilon_qfi() {
    let out = swanson(&[
        "qfi", "--omega", "2", "--temp", "0.5", "--eps", "0", "--target", "epsilon",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    let i_eps: f64 = row[7].parse().unwrap();
    assert_eq!(i_eps, 0.0);
}

#[test]
fn fock_verify_default_passes_and_negative_control_fails() {
    let ok = swanson(&["fock-verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["dim"], 64);
    assert_eq!(report["lambda_value"].as_f64().unwrap(), -2.0);

    let bad = swanson(&["fock-verify", "--lambda", "-1.5"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn fock_verify_hermitian_point_is_trivially_clean() {
    // alpha = beta there, so the derived coefficient is zero and the map is
    // the identity.
    let out = swanson(&["fock-verify", "--omega", "4", "--eps", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["lambda_value"].as_f64().unwrap(), 0.0);
    assert!(report["hermiticity_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate", "--seed", "42", "--replicas", "60", "--samples", "2000",
    ];
    let a = swanson(&args);
    let b = swanson(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let run: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(run["seed"], 42);
    assert_eq!(run["r"], 60);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join("swanson-cli-config");
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    fs::write(&cfg, "omega = 3\ntemp = 0.5\neps = 0.3 # inline comment\n").unwrap();

    let out = swanson(&["--config", cfg.to_str().unwrap(), "qfi", "--omega", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(row[0].parse::<f64>().unwrap(), 2.0); // flag wins
    assert_eq!(row[2].parse::<f64>().unwrap(), 0.3); // config supplies eps
}

#[test]
fn bad_grid_is_a_config_error() {
    let out = swanson(&["qfi", "--omega", "4:2:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figures_emit_expected_files_and_orderings() {
    let dir = std::env::temp_dir().join("swanson-cli-figures");
    let _ = fs::remove_dir_all(&dir);
    let out = swanson(&["figures", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    for f in [
        "fig1a.csv",
        "fig1b.csv",
        "fig2a.csv",
        "fig2b.csv",
        "fig3a.csv",
        "fig3b.csv",
        "fig3_omega_slice.csv",
    ] {
        assert!(dir.join(f).exists(), "{f} missing");
    }
    // The omega = 2 temperature curves cannot be normalized to the Hermitian
    // baseline and land in the sidecar.
    let sidecar = fs::read_to_string(dir.join("fig1b.csv.errors")).unwrap();
    assert!(sidecar.contains("omega=2"));

    // fig1a: at a grid point with eps = 1/omega the gain is exactly 0 dB.
    let fig1a = fs::read_to_string(dir.join("fig1a.csv")).unwrap();
    let zero_row = fig1a
        .lines()
        .find(|l| l.starts_with("5.0000000000000") && l.contains(",2.0000000000000001e-1,"))
        .expect("omega=5 point on the eps=0.2 curve");
    let tau: f64 = zero_row.split(',').last().unwrap().parse().unwrap();
    assert!(tau.abs() < 1e-12, "tau at the Hermitian point: {tau}");
}
