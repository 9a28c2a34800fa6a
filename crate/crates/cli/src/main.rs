//! Command-line front end: parameter sweeps, figure data, Fock-space
//! verification, and estimator simulation. Outputs are static CSV/JSON
//! curve data; plotting is out of scope.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use swanson_metrology::conventions;
use swanson_metrology::estimator::crb_experiment;
use swanson_metrology::focklab::{run_lab, LabConfig, LambdaChoice};
use swanson_metrology::gaussian::GaussianState;
use swanson_metrology::qfi::{fd_default_step, qfi_bures_fd, rel_discrepancy, ParamFamily};
use swanson_metrology::swanson::{
    effective_frequency, effective_frequency_neg, energetic_cost, gain_ratio, probe_family,
    qfi_closed_forms, qfi_closed_forms_neg, SwansonParams, Target,
};

const QFI_HEADER: &str = "omega,temperature,epsilon,Omega,qfi_omega_closed,qfi_T_paper,\
qfi_T_authoritative,qfi_epsilon_closed,qfi_bures_fd_target,target,rel_discrepancy";

#[derive(Parser)]
#[command(name = "swanson", version, about = "Gaussian quantum metrology with a PT-symmetric probe")]
struct Cli {
    /// Optional `key = value` config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form and finite-difference QFI over a parameter grid.
    Qfi(GridArgs),
    /// Figure-reproduction data sets (fixed parameter curves).
    Figures(FiguresArgs),
    /// Truncated-Fock verification of the similarity-transformation machinery.
    FockVerify(FockArgs),
    /// Monte-Carlo estimator run against both Cramér-Rao chains.
    Simulate(SimArgs),
    /// Gain ratio in dB against the Hermitian baseline.
    Gain(GridArgs),
    /// Energetic cost of the non-Hermitian contribution and QFI-per-cost.
    EnergyCost(GridArgs),
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Frequency: scalar or start:stop:step.
    #[arg(long)]
    omega: Option<String>,
    /// Temperature: scalar or start:stop:step.
    #[arg(long)]
    temp: Option<String>,
    /// Non-Hermiticity parameter: scalar or start:stop:step.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    /// Override the finite-difference base step.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Report |dU| instead of the signed energetic cost.
    #[arg(long)]
    abs_cost: bool,
    /// Use the negative-product coupling variant (gap never closes).
    #[arg(long)]
    neg_coupling: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Output directory for the figure CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    abs_cost: bool,
}

#[derive(Args)]
struct FockArgs {
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    temp: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    /// Coupling gauge for the map diagnostics.
    #[arg(long)]
    alpha: Option<f64>,
    /// Truncation dimension, 16..=256.
    #[arg(long)]
    trunc: Option<usize>,
    /// Explicit map-coefficient override (negative controls).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Use the printed coefficient instead of the derived one.
    #[arg(long)]
    lambda_paper: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    temp: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    /// Homodyne samples per replica.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Omega,
    Temperature,
    Epsilon,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Omega => Target::Omega,
            TargetArg::Temperature => Target::Temperature,
            TargetArg::Epsilon => Target::Epsilon,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// `key = value` file, `#` starts a comment. Keys mirror the flag names.
fn read_config(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Scalar or `start:stop:step`, inclusive of the endpoint within half a step.
fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![one.trim().parse()?]),
        [start, stop, step] => {
            let (a, b, d): (f64, f64, f64) =
                (start.trim().parse()?, stop.trim().parse()?, step.trim().parse()?);
            if d <= 0.0 || b < a {
                bail!("bad grid {s:?}: need start <= stop and step > 0");
            }
            let n = ((b - a) / d + 0.5).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * d).collect())
        }
        _ => bail!("bad grid {s:?}: expected scalar or start:stop:step"),
    }
}

struct Merged<'a> {
    cfg: &'a HashMap<String, String>,
}

impl Merged<'_> {
    fn grid(&self, flag: Option<&String>, key: &str, default: f64) -> Result<Vec<f64>> {
        match flag.or_else(|| self.cfg.get(key)) {
            Some(s) => parse_grid(s),
            None => Ok(vec![default]),
        }
    }

    fn num<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::error::Error + Send + Sync + 'static,
    {
        match flag {
            Some(v) => Ok(v),
            None => match self.cfg.get(key) {
                Some(s) => Ok(s.parse()?),
                None => Ok(default),
            },
        }
    }

    fn target(&self, flag: Option<TargetArg>, default: Target) -> Result<Target> {
        match flag {
            Some(t) => Ok(t.into()),
            None => match self.cfg.get("target") {
                Some(s) => Ok(Target::parse(s)?),
                None => Ok(default),
            },
        }
    }

    fn out(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| self.cfg.get("out").map(PathBuf::from))
    }
}

fn conventions_header() -> String {
    format!(
        "# fidelity_mean_coeff = {}\n# qfi_mean_coeff = {}\n# purity_exponent = {}\n\
         # dyson_lambda_choice = {}\n",
        conventions::FIDELITY_MEAN_COEFF,
        conventions::QFI_MEAN_COEFF,
        conventions::PURITY_EXPONENT,
        conventions::DYSON_LAMBDA_CHOICE
    )
}

fn write_output(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn write_errors(out: Option<&Path>, errors: &[String]) -> Result<()> {
    if errors.is_empty() {
        return Ok(());
    }
    let body: String = errors.iter().map(|e| format!("{e}\n")).collect();
    match out {
        Some(p) => {
            let mut sidecar = p.as_os_str().to_owned();
            sidecar.push(".errors");
            fs::write(&sidecar, body)?;
        }
        None => eprint!("{body}"),
    }
    Ok(())
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row of the `qfi` sweep. Errors bubble up to the sidecar.
fn qfi_row(
    omega: f64,
    t: f64,
    eps: f64,
    target: Target,
    fd_step: Option<f64>,
    neg: bool,
) -> std::result::Result<String, String> {
    let tag = format!("omega={omega} temperature={t} epsilon={eps}");
    let p = SwansonParams::new(omega, eps, 1.0, t).map_err(|e| format!("{tag}: {e}"))?;
    let (omega_eff, forms, family) = if neg {
        let w = effective_frequency_neg(omega, eps);
        let forms = qfi_closed_forms_neg(&p).map_err(|e| format!("{tag}: {e}"))?;
        let fam = match target {
            Target::Omega => ParamFamily::new("omega", (0.0, f64::INFINITY), move |v| {
                let w = effective_frequency_neg(v, eps);
                Ok(GaussianState::thermal(1.0 / (w / (2.0 * t)).tanh()))
            }),
            Target::Temperature => {
                ParamFamily::new("temperature", (0.0, f64::INFINITY), move |v| {
                    Ok(GaussianState::thermal(1.0 / (w / (2.0 * v)).tanh()))
                })
            }
            Target::Epsilon => ParamFamily::new("epsilon", (-0.5, 0.5), move |v| {
                let w = effective_frequency_neg(omega, v);
                Ok(GaussianState::thermal(1.0 / (w / (2.0 * t)).tanh()))
            }),
        };
        (w, forms, fam)
    } else {
        let (w, _) = effective_frequency(&p).map_err(|e| format!("{tag}: {e}"))?;
        let forms = qfi_closed_forms(&p).map_err(|e| format!("{tag}: {e}"))?;
        (w, forms, probe_family(p, target))
    };

    let (closed, theta) = match target {
        Target::Omega => (forms.i_omega, omega),
        Target::Temperature => (forms.i_t_authoritative, t),
        Target::Epsilon => (forms.i_epsilon, eps),
    };
    let h = fd_step.unwrap_or_else(|| fd_default_step(theta));
    let fd = qfi_bures_fd(&family, theta, h).map_err(|e| format!("{tag}: {e}"))?;
    Ok(format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        f17(omega),
        f17(t),
        f17(eps),
        f17(omega_eff),
        f17(forms.i_omega),
        f17(forms.i_t_paper),
        f17(forms.i_t_authoritative),
        f17(forms.i_epsilon),
        f17(fd),
        target.as_str(),
        f17(rel_discrepancy(closed, fd))
    ))
}

fn cmd_qfi(args: &GridArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let m = Merged { cfg };
    let omegas = m.grid(args.omega.as_ref(), "omega", 2.0)?;
    let temps = m.grid(args.temp.as_ref(), "temp", 0.5)?;
    let epss = m.grid(args.eps.as_ref(), "eps", 0.2)?;
    let target = m.target(args.target, Target::Omega)?;
    let fd_step = m.num(args.fd_step, "fd-step", f64::NAN).ok().filter(|v| v.is_finite());

    let mut body = conventions_header();
    let mut errors = Vec::new();
    writeln!(body, "{QFI_HEADER}")?;
    for &w in &omegas {
        for &t in &temps {
            for &e in &epss {
                match qfi_row(w, t, e, target, fd_step, args.neg_coupling) {
                    Ok(row) => writeln!(body, "{row}")?,
                    Err(msg) => errors.push(msg),
                }
            }
        }
    }
    let out = m.out(args.out.clone());
    write_output(out.as_deref(), &body)?;
    write_errors(out.as_deref(), &errors)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gain(args: &GridArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let m = Merged { cfg };
    let omegas = m.grid(args.omega.as_ref(), "omega", 3.0)?;
    let temps = m.grid(args.temp.as_ref(), "temp", 0.1)?;
    let epss = m.grid(args.eps.as_ref(), "eps", 0.2)?;
    let target = m.target(args.target, Target::Omega)?;

    let mut body = conventions_header();
    let mut errors = Vec::new();
    writeln!(body, "omega,temperature,epsilon,target,tau_db")?;
    for &w in &omegas {
        for &t in &temps {
            for &e in &epss {
                let row = SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| gain_ratio(&p, target))
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"));
                match row {
                    Ok(tau) => writeln!(
                        body,
                        "{},{},{},{},{}",
                        f17(w),
                        f17(t),
                        f17(e),
                        target.as_str(),
                        f17(tau)
                    )?,
                    Err(msg) => errors.push(msg),
                }
            }
        }
    }
    let out = m.out(args.out.clone());
    write_output(out.as_deref(), &body)?;
    write_errors(out.as_deref(), &errors)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_energy_cost(args: &GridArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let m = Merged { cfg };
    let omegas = m.grid(args.omega.as_ref(), "omega", 2.0)?;
    let temps = m.grid(args.temp.as_ref(), "temp", 0.1)?;
    let epss = m.grid(args.eps.as_ref(), "eps", 0.2)?;
    let target = m.target(args.target, Target::Omega)?;
    let abs_cost = args.abs_cost || cfg.get("abs-cost").map(|v| v == "true").unwrap_or(false);

    let mut body = conventions_header();
    let mut errors = Vec::new();
    writeln!(
        body,
        "omega,temperature,epsilon,target,delta_u_paper,delta_u_oracle,u_theta,u_theta_oracle"
    )?;
    for &w in &omegas {
        for &t in &temps {
            for &e in &epss {
                let row = SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| energetic_cost(&p, target))
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"));
                match row {
                    Ok(mut c) => {
                        if abs_cost {
                            c.delta_u_paper = c.delta_u_paper.abs();
                            c.delta_u_oracle = c.delta_u_oracle.abs();
                            c.u_theta = c.u_theta.abs();
                            c.u_theta_oracle = c.u_theta_oracle.abs();
                        }
                        writeln!(
                            body,
                            "{},{},{},{},{},{},{},{}",
                            f17(w),
                            f17(t),
                            f17(e),
                            target.as_str(),
                            f17(c.delta_u_paper),
                            f17(c.delta_u_oracle),
                            f17(c.u_theta),
                            f17(c.u_theta_oracle)
                        )?;
                    }
                    Err(msg) => errors.push(msg),
                }
            }
        }
    }
    let out = m.out(args.out.clone());
    write_output(out.as_deref(), &body)?;
    write_errors(out.as_deref(), &errors)?;
    Ok(ExitCode::SUCCESS)
}

fn figure_curve_csv(
    header: &str,
    rows: impl Iterator<Item = std::result::Result<String, String>>,
    errors: &mut Vec<String>,
) -> String {
    let mut body = conventions_header();
    body.push_str(header);
    body.push('\n');
    for r in rows {
        match r {
            Ok(row) => {
                body.push_str(&row);
                body.push('\n');
            }
            Err(e) => errors.push(e),
        }
    }
    body
}

fn frange(a: f64, b: f64, d: f64) -> Vec<f64> {
    let n = ((b - a) / d + 0.5).floor() as usize;
    (0..=n).map(|i| a + i as f64 * d).collect()
}

fn cmd_figures(args: &FiguresArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("figures"));
    fs::create_dir_all(&dir)?;
    let abs_cost = args.abs_cost || cfg.get("abs-cost").map(|v| v == "true").unwrap_or(false);

    // Gain vs omega; the Hermitian baseline needs omega > 2, so the grid
    // starts above it and any stray row lands in the sidecar.
    {
        let mut errors = Vec::new();
        let curves = [(0.1, 0.2), (0.1, 0.3), (0.5, 0.3)];
        let rows = curves.iter().flat_map(|&(t, e)| {
            frange(2.1, 8.0, 0.05).into_iter().map(move |w| {
                SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| gain_ratio(&p, Target::Omega))
                    .map(|tau| format!("{},{},{},{}", f17(w), f17(t), f17(e), f17(tau)))
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"))
            })
        });
        let body = figure_curve_csv("omega,temperature,epsilon,tau_omega_db", rows, &mut errors);
        let path = dir.join("fig1a.csv");
        fs::write(&path, body)?;
        write_errors(Some(&path), &errors)?;
        eprintln!("note: fig1a omega grid restricted to omega > 2 (Hermitian-baseline domain)");
    }

    // Gain vs temperature. Two of the published parameter sets sit at
    // omega = 2 where the baseline is undefined; those rows go to the
    // sidecar rather than being silently re-parameterized.
    {
        let mut errors = Vec::new();
        let curves = [(2.0, 0.2), (2.0, 0.3), (4.0, 0.3)];
        let rows = curves.iter().flat_map(|&(w, e)| {
            frange(0.05, 2.0, 0.05).into_iter().map(move |t| {
                SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| gain_ratio(&p, Target::Temperature))
                    .map(|tau| format!("{},{},{},{}", f17(w), f17(t), f17(e), f17(tau)))
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"))
            })
        });
        let body = figure_curve_csv("omega,temperature,epsilon,tau_T_db", rows, &mut errors);
        let path = dir.join("fig1b.csv");
        fs::write(&path, body)?;
        write_errors(Some(&path), &errors)?;
    }

    // QFI-per-cost vs omega and vs temperature.
    for (name, curves, vs_omega) in [
        (
            "fig2a.csv",
            [(0.1, 0.2), (0.1, 0.33), (0.5, 0.2)].as_slice(),
            true,
        ),
        (
            "fig2b.csv",
            [(2.0, 0.2), (2.0, 0.33), (4.0, 0.33)].as_slice(),
            false,
        ),
    ] {
        let mut errors = Vec::new();
        let target = if vs_omega { Target::Omega } else { Target::Temperature };
        let mut rows: Vec<std::result::Result<String, String>> = Vec::new();
        for &(fixed, e) in curves {
            let var_grid = if vs_omega {
                frange(2.5, 8.0, 0.05)
            } else {
                frange(0.05, 2.0, 0.05)
            };
            for v in var_grid {
                let (w, t) = if vs_omega { (v, fixed) } else { (fixed, v) };
                let row = SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| energetic_cost(&p, target))
                    .map(|c| {
                        let u = if abs_cost { c.u_theta.abs() } else { c.u_theta };
                        format!("{},{},{},{}", f17(w), f17(t), f17(e), f17(u))
                    })
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"));
                rows.push(row);
            }
        }
        let header = if vs_omega {
            "omega,temperature,epsilon,u_omega"
        } else {
            "omega,temperature,epsilon,u_T"
        };
        let body = figure_curve_csv(header, rows.into_iter(), &mut errors);
        let path = dir.join(name);
        fs::write(&path, body)?;
        write_errors(Some(&path), &errors)?;
    }

    // Non-Hermiticity QFI density grids, both caption readings: a grid per
    // temperature, plus a fixed-omega slice.
    for (name, t) in [("fig3a.csv", 0.5), ("fig3b.csv", 1.0)] {
        let mut errors = Vec::new();
        let mut rows: Vec<std::result::Result<String, String>> = Vec::new();
        for w in frange(0.5, 6.0, 0.1) {
            for e in frange(0.05, 0.49, 0.01) {
                let row = SwansonParams::new(w, e, 1.0, t)
                    .and_then(|p| qfi_closed_forms(&p))
                    .map(|f| format!("{},{},{},{}", f17(w), f17(t), f17(e), f17(f.i_epsilon)))
                    .map_err(|err| format!("omega={w} temperature={t} epsilon={e}: {err}"));
                rows.push(row);
            }
        }
        let body =
            figure_curve_csv("omega,temperature,epsilon,qfi_epsilon", rows.into_iter(), &mut errors);
        let path = dir.join(name);
        fs::write(&path, body)?;
        write_errors(Some(&path), &errors)?;
    }
    {
        let mut errors = Vec::new();
        let mut rows: Vec<std::result::Result<String, String>> = Vec::new();
        for t in [0.5, 1.0] {
            for e in frange(0.05, 0.49, 0.005) {
                let row = SwansonParams::new(1.0, e, 1.0, t)
                    .and_then(|p| qfi_closed_forms(&p))
                    .map(|f| format!("{},{},{},{}", f17(1.0), f17(t), f17(e), f17(f.i_epsilon)))
                    .map_err(|err| format!("omega=1 temperature={t} epsilon={e}: {err}"));
                rows.push(row);
            }
        }
        let body =
            figure_curve_csv("omega,temperature,epsilon,qfi_epsilon", rows.into_iter(), &mut errors);
        let path = dir.join("fig3_omega_slice.csv");
        fs::write(&path, body)?;
        write_errors(Some(&path), &errors)?;
    }

    Ok(ExitCode::SUCCESS)
}

fn cmd_fock_verify(args: &FockArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let m = Merged { cfg };
    let omega = m.grid(args.omega.as_ref(), "omega", 2.0)?[0];
    let t = m.grid(args.temp.as_ref(), "temp", 0.5)?[0];
    let eps = m.grid(args.eps.as_ref(), "eps", 0.2)?[0];
    let alpha = m.num(args.alpha, "alpha", 1.0)?;
    let trunc = m.num(args.trunc, "trunc", 64usize)?;
    if !(16..=256).contains(&trunc) {
        bail!("truncation {trunc} outside 16..=256");
    }

    let mut lab = LabConfig::new(trunc, omega, eps, alpha, t);
    if let Some(l) = args.lambda.or_else(|| cfg.get("lambda").and_then(|s| s.parse().ok())) {
        lab.lambda = LambdaChoice::Fixed(l);
    } else if args.lambda_paper {
        lab.lambda = LambdaChoice::Paper;
    }

    let report = run_lab(&lab)?;
    let json = serde_json::to_string_pretty(&report)?;
    let out = m.out(args.out.clone());
    write_output(out.as_deref(), &format!("{json}\n"))?;
    match report.asserted_ok() {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            eprintln!("verification failed: {e}");
            Ok(ExitCode::from(3))
        }
    }
}

fn cmd_simulate(args: &SimArgs, cfg: &HashMap<String, String>) -> Result<ExitCode> {
    let m = Merged { cfg };
    let omega = m.grid(args.omega.as_ref(), "omega", 2.0)?[0];
    let t = m.grid(args.temp.as_ref(), "temp", 0.5)?[0];
    let eps = m.grid(args.eps.as_ref(), "eps", 0.2)?[0];
    let target = m.target(args.target, Target::Temperature)?;
    let seed = m.num(args.seed, "seed", 42u64)?;
    let replicas = m.num(args.replicas, "replicas", 200u64)?;
    let samples = m.num(args.samples, "samples", 100_000u64)?;

    let p = SwansonParams::new(omega, eps, 1.0, t)?;
    let run = crb_experiment(&p, target, samples, replicas, seed)?;
    let json = serde_json::to_string_pretty(&run)?;
    let out = m.out(args.out.clone());
    write_output(out.as_deref(), &format!("{json}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.config.as_deref().map(read_config).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Qfi(a) => cmd_qfi(a, &cfg),
        Cmd::Figures(a) => cmd_figures(a, &cfg),
        Cmd::FockVerify(a) => cmd_fock_verify(a, &cfg),
        Cmd::Simulate(a) => cmd_simulate(a, &cfg),
        Cmd::Gain(a) => cmd_gain(a, &cfg),
        Cmd::EnergyCost(a) => cmd_energy_cost(a, &cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
