//! Command-line front end: `simulate`, `sweep`, `diagram` and `validate`.
//!
//! Exit codes: 0 success, 1 validation-suite failure, 2 configuration error,
//! 3 runtime physics-invariant violation.

pub mod config;
pub mod output;
pub mod validate;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::analytic::{crossover_class, lambda_global, lambda_local, CrossoverClass};
use crate::dissipators::{global_jump_operators, local_jump_operators};
use crate::evolution::{build_liouvillian, evolve, EvolutionError, Integrator, Trajectory};
use crate::model::{build_hamiltonian, initial_state, SystemParams};
use crate::regimes::regime_diagram;

use config::{parse_beta, parse_g_list, Approach, ConfigFile, OutputFormat, RunConfig};
use output::{
    config_hash, diagram_axes_json, diagram_csv, diagram_plot_script, fmt_f64, meta_sidecar,
    trajectory_csv, trajectory_json, trajectory_plot_script, write_file,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("physics invariant violated: {0}")]
    Physics(String),
    #[error("validation suite failed: {0} check(s) did not pass")]
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Physics(_) => 3,
        }
    }
}

impl From<EvolutionError> for CliError {
    fn from(e: EvolutionError) -> Self {
        match e {
            EvolutionError::StateInvariant { .. } => CliError::Physics(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qimp",
    version,
    about = "Local and global GKSL dynamics of a qubit coupled to a dissipative impurity"
)]
pub struct Cli {
    /// Config file (flat key-value text with per-command sections).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default `out`, or the QIMP_OUT environment variable).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for data files.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Also emit a matplotlib plot script next to the data.
    #[arg(long, global = true)]
    pub plot_script: bool,

    /// Qubit bias epsilon.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Qubit tunneling Delta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Qubit-impurity coupling v.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Impurity splitting epsilon_I.
    #[arg(long = "epsilon-i", global = true)]
    pub epsilon_i: Option<f64>,
    /// Inverse temperature (a number, or `inf` for infinite temperature).
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Impurity emission rate gamma_-.
    #[arg(long = "gamma-minus", global = true, allow_hyphen_values = true)]
    pub gamma_minus: Option<f64>,
    /// Initial impurity population imbalance.
    #[arg(long = "delta-p0", global = true, allow_hyphen_values = true)]
    pub delta_p0: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate one trajectory and write it as CSV/JSON.
    Simulate {
        /// Master-equation construction to run.
        #[arg(long, value_enum)]
        approach: Option<Approach>,
        /// End of the time grid (default 10/gamma).
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        /// Number of grid points.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// One trajectory per crossover parameter g, plus a summary table.
    Sweep {
        /// Comma-separated list of g values, e.g. `0.5,2,6`.
        #[arg(long = "g-list")]
        g_list: Option<String>,
        #[arg(long, value_enum)]
        approach: Option<Approach>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Classify a (v, gamma) grid by GKSL validity and write the dataset.
    Diagram {
        #[arg(long = "v-min")]
        v_min: Option<f64>,
        #[arg(long = "v-max")]
        v_max: Option<f64>,
        #[arg(long = "v-steps")]
        v_steps: Option<usize>,
        #[arg(long = "gamma-min")]
        gamma_min: Option<f64>,
        #[arg(long = "gamma-max")]
        gamma_max: Option<f64>,
        #[arg(long = "gamma-steps")]
        gamma_steps: Option<usize>,
        /// Local-validity threshold in `v <= eta min(Omega, eps_I)`.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Run the validation suite and write a machine-readable report.
    Validate {
        /// Override every comparison tolerance with one value.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli)?;
    match &cli.command {
        Command::Simulate { .. } => cmd_simulate(&cfg),
        Command::Sweep { .. } => cmd_sweep(&cfg),
        Command::Diagram { .. } => cmd_diagram(&cfg),
        Command::Validate { .. } => cmd_validate(&cfg),
    }
}

/// defaults < QIMP_OUT < config file < command-line flags.
fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Ok(dir) = std::env::var("QIMP_OUT") {
        if !dir.is_empty() {
            cfg.out_dir = PathBuf::from(dir);
        }
    }
    if let Some(path) = &cli.config {
        let file = ConfigFile::load(path)?;
        cfg.apply_file(&file)?;
    }

    if let Some(x) = cli.epsilon {
        cfg.params.epsilon = x;
    }
    if let Some(x) = cli.delta {
        cfg.params.delta = x;
    }
    if let Some(x) = cli.v {
        cfg.params.v = x;
    }
    if let Some(x) = cli.epsilon_i {
        cfg.params.epsilon_i = x;
    }
    if let Some(s) = &cli.beta {
        cfg.params.beta = parse_beta(s)?;
    }
    if let Some(x) = cli.gamma_minus {
        cfg.params.gamma_minus = x;
    }
    if let Some(x) = cli.delta_p0 {
        cfg.params.delta_p0 = x;
    }
    if let Some(dir) = &cli.out {
        cfg.out_dir = dir.clone();
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.plot_script {
        cfg.plot_script = true;
    }

    match &cli.command {
        Command::Simulate { approach, t_max, steps } => {
            if let Some(a) = approach {
                cfg.approach = *a;
            }
            if let Some(x) = t_max {
                cfg.t_max = Some(*x);
            }
            if let Some(n) = steps {
                cfg.steps = *n;
            }
        }
        Command::Sweep { g_list, approach, t_max, steps } => {
            if let Some(s) = g_list {
                cfg.g_list = parse_g_list(s)?;
            }
            if let Some(a) = approach {
                cfg.approach = *a;
            }
            if let Some(x) = t_max {
                cfg.t_max = Some(*x);
            }
            if let Some(n) = steps {
                cfg.steps = *n;
            }
        }
        Command::Diagram { v_min, v_max, v_steps, gamma_min, gamma_max, gamma_steps, eta } => {
            if let Some(x) = v_min {
                cfg.v_min = *x;
            }
            if let Some(x) = v_max {
                cfg.v_max = *x;
            }
            if let Some(n) = v_steps {
                cfg.v_steps = *n;
            }
            if let Some(x) = gamma_min {
                cfg.gamma_min = *x;
            }
            if let Some(x) = gamma_max {
                cfg.gamma_max = *x;
            }
            if let Some(n) = gamma_steps {
                cfg.gamma_steps = *n;
            }
            if let Some(x) = eta {
                cfg.eta = *x;
            }
        }
        Command::Validate { tolerance } => {
            if let Some(t) = tolerance {
                cfg.tolerance = Some(*t);
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn approaches(a: Approach) -> Vec<Approach> {
    match a {
        Approach::Both => vec![Approach::Local, Approach::Global],
        one => vec![one],
    }
}

fn approach_name(a: Approach) -> &'static str {
    match a {
        Approach::Local => "local",
        Approach::Global => "global",
        Approach::Both => "both",
    }
}

fn run_trajectory(
    p: &SystemParams,
    approach: Approach,
    coh0: C64,
    pop0: f64,
    times: &[f64],
) -> Result<Trajectory, CliError> {
    let h = build_hamiltonian(p).map_err(|e| CliError::Config(e.to_string()))?;
    let jumps = match approach {
        Approach::Local => local_jump_operators(p),
        Approach::Global => global_jump_operators(p),
        Approach::Both => unreachable!("expanded before dispatch"),
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    let gen = build_liouvillian(&h, &jumps)?;
    let rho0 = initial_state(p, coh0, pop0).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(evolve(&rho0, &gen, times, Integrator::MatrixExponential)?)
}

/// Analytic coherence column, available in the pure-dephasing limit only.
fn analytic_column(
    p: &SystemParams,
    approach: Approach,
    coh0: C64,
    times: &[f64],
) -> Option<Vec<C64>> {
    if p.delta != 0.0 {
        return None;
    }
    let lambda: fn(f64, &SystemParams) -> C64 = match approach {
        Approach::Local => lambda_local,
        Approach::Global => lambda_global,
        Approach::Both => unreachable!("expanded before dispatch"),
    };
    Some(times.iter().map(|&t| lambda(t, p) * coh0).collect())
}

fn emit_trajectory(
    cfg: &RunConfig,
    stem: &str,
    traj: &Trajectory,
    analytic: Option<&[C64]>,
) -> Result<Vec<String>, CliError> {
    let mut written = Vec::new();
    if cfg.format.wants_csv() {
        write_file(&cfg.out_dir, &format!("{stem}.csv"), &trajectory_csv(traj, analytic))?;
        written.push(format!("{stem}.csv"));
    }
    if cfg.format.wants_json() {
        write_file(&cfg.out_dir, &format!("{stem}.json"), &trajectory_json(traj, analytic))?;
        written.push(format!("{stem}.json"));
    }
    Ok(written)
}

fn cmd_simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let times = cfg.time_grid()?;
    let hash = config_hash("simulate", cfg);
    let mut csv_files = Vec::new();
    for approach in approaches(cfg.approach) {
        let traj = run_trajectory(&cfg.params, approach, cfg.qubit_coh0(), cfg.qubit_pop0, &times)?;
        let analytic = analytic_column(&cfg.params, approach, cfg.qubit_coh0(), &times);
        let stem = format!("trajectory_{}", approach_name(approach));
        let written = emit_trajectory(cfg, &stem, &traj, analytic.as_deref())?;
        csv_files.extend(written.iter().filter(|f| f.ends_with(".csv")).cloned());
        write_file(
            &cfg.out_dir,
            &format!("{stem}.meta.json"),
            &meta_sidecar("simulate", &hash, &cfg.params, cfg.eta, written),
        )?;
    }
    if cfg.plot_script {
        if csv_files.is_empty() {
            eprintln!("warning: plot script needs csv output; none was written");
        } else {
            write_file(
                &cfg.out_dir,
                "plot_simulate.py",
                &trajectory_plot_script(&csv_files, "simulate.png"),
            )?;
        }
    }
    println!("simulate: wrote {} file set(s) to {}", csv_files.len().max(1), cfg.out_dir.display());
    Ok(())
}

struct SweepRow {
    g: f64,
    class: CrossoverClass,
    first_min_time: Option<f64>,
    initial_decay_rate: Option<f64>,
    overlay_gap: Option<f64>,
}

fn sweep_summary_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("g,crossover_class,first_min_time,initial_decay_rate,overlay_gap\n");
    for r in rows {
        let class = match r.class {
            CrossoverClass::Monotonic => "monotonic",
            CrossoverClass::Revivals => "revivals",
            CrossoverClass::Boundary => "boundary",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.g),
            class,
            r.first_min_time.map(fmt_f64).unwrap_or_default(),
            r.initial_decay_rate.map(fmt_f64).unwrap_or_default(),
            r.overlay_gap.map(fmt_f64).unwrap_or_default(),
        );
    }
    out
}

/// First strict interior local minimum of the coherence modulus.
fn first_minimum(traj: &Trajectory) -> Option<(usize, f64)> {
    let mods: Vec<f64> = traj.coherence.iter().map(|z| z.norm()).collect();
    (1..mods.len() - 1)
        .find(|&k| mods[k] < mods[k - 1] && mods[k] < mods[k + 1])
        .map(|k| (k, traj.times[k]))
}

/// Least-squares slope of -ln|coherence| over the first tenth of the grid
/// (at least five points).
fn initial_decay_rate(traj: &Trajectory) -> Option<f64> {
    let n = (traj.times.len() / 10).max(5).min(traj.times.len());
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(traj.coherence.iter())
        .take(n)
        .filter(|(_, z)| z.norm() > 1e-300)
        .map(|(&t, z)| (t, z.norm().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let tbar = pts.iter().map(|(t, _)| t).sum::<f64>() / m;
    let ybar = pts.iter().map(|(_, y)| y).sum::<f64>() / m;
    let num: f64 = pts.iter().map(|(t, y)| (t - tbar) * (y - ybar)).sum();
    let den: f64 = pts.iter().map(|(t, _)| (t - tbar) * (t - tbar)).sum();
    (den > 0.0).then(|| -(num / den))
}

fn cmd_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = config_hash("sweep", cfg);
    let mut rows = Vec::new();
    let mut csv_files = Vec::new();
    for &g in &cfg.g_list {
        let p = cfg.params_for_g(g);
        let t_max = cfg.t_max.unwrap_or(10.0 / p.gamma());
        if cfg.steps < 2 {
            return Err(CliError::Config(format!(
                "time grid needs at least 2 steps, got {}",
                cfg.steps
            )));
        }
        let times: Vec<f64> = (0..cfg.steps)
            .map(|k| t_max * k as f64 / (cfg.steps - 1) as f64)
            .collect();

        let mut sidecar_outputs = Vec::new();
        let mut primary: Option<Trajectory> = None;
        let mut gap: Option<f64> = None;
        let mut global_mods: Option<Vec<f64>> = None;
        for approach in approaches(cfg.approach) {
            let traj = run_trajectory(&p, approach, cfg.qubit_coh0(), cfg.qubit_pop0, &times)?;
            let analytic = analytic_column(&p, approach, cfg.qubit_coh0(), &times);
            let g_tag = format!("{g}");
            let stem = format!("sweep_g{}_{}", g_tag, approach_name(approach));
            let written = emit_trajectory(cfg, &stem, &traj, analytic.as_deref())?;
            csv_files.extend(written.iter().filter(|f| f.ends_with(".csv")).cloned());
            sidecar_outputs.extend(written);
            match approach {
                Approach::Global if primary.is_some() => {
                    global_mods =
                        Some(traj.coherence.iter().map(|z| z.norm()).collect());
                }
                _ => primary = Some(traj),
            }
        }
        let primary = primary.expect("at least one approach runs");
        if let Some(gm) = &global_mods {
            let coh0 = cfg.qubit_coh0().norm().max(f64::MIN_POSITIVE);
            gap = Some(
                primary
                    .coherence
                    .iter()
                    .zip(gm.iter())
                    .map(|(a, b)| ((a.norm() - b) / coh0).abs())
                    .fold(0.0, f64::max),
            );
        }
        rows.push(SweepRow {
            g,
            class: crossover_class(g),
            first_min_time: first_minimum(&primary).map(|(_, t)| t),
            initial_decay_rate: initial_decay_rate(&primary),
            overlay_gap: gap,
        });
        write_file(
            &cfg.out_dir,
            &format!("sweep_g{g}.meta.json"),
            &meta_sidecar("sweep", &hash, &p, cfg.eta, sidecar_outputs),
        )?;
    }
    write_file(&cfg.out_dir, "sweep_summary.csv", &sweep_summary_csv(&rows))?;
    write_file(
        &cfg.out_dir,
        "sweep_summary.meta.json",
        &meta_sidecar("sweep", &hash, &cfg.params, cfg.eta, vec!["sweep_summary.csv".into()]),
    )?;
    if cfg.plot_script {
        if csv_files.is_empty() {
            eprintln!("warning: plot script needs csv output; none was written");
        } else {
            write_file(
                &cfg.out_dir,
                "plot_sweep.py",
                &trajectory_plot_script(&csv_files, "sweep.png"),
            )?;
        }
    }
    println!("sweep: wrote {} trajectories to {}", csv_files.len(), cfg.out_dir.display());
    Ok(())
}

fn cmd_diagram(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.diagram_spec();
    let diagram = regime_diagram(&spec).map_err(|e| CliError::Config(e.to_string()))?;
    let hash = config_hash("diagram", cfg);
    write_file(&cfg.out_dir, "diagram.csv", &diagram_csv(&diagram))?;
    write_file(&cfg.out_dir, "diagram_axes.json", &diagram_axes_json(&diagram, cfg.eta))?;
    write_file(
        &cfg.out_dir,
        "diagram.meta.json",
        &meta_sidecar(
            "diagram",
            &hash,
            &cfg.params,
            cfg.eta,
            vec!["diagram.csv".into(), "diagram_axes.json".into()],
        ),
    )?;
    if cfg.plot_script {
        write_file(
            &cfg.out_dir,
            "plot_diagram.py",
            &diagram_plot_script("diagram.csv", "diagram.png"),
        )?;
    }
    println!(
        "diagram: {} x {} grid written to {}",
        diagram.v_values.len(),
        diagram.gamma_values.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn cmd_validate(cfg: &RunConfig) -> Result<(), CliError> {
    let tolerances = match cfg.tolerance {
        Some(t) => {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tolerance must be > 0, got {t}")));
            }
            validate::Tolerances::override_all(t)
        }
        None => validate::Tolerances::default(),
    };
    let report = validate::run_all_checks(&tolerances)?;
    report.print_lines();
    let hash = config_hash("validate", cfg);
    let json = serde_json::to_string_pretty(&report).expect("report serialises");
    write_file(&cfg.out_dir, "validation_report.json", &json)?;
    write_file(
        &cfg.out_dir,
        "validation_report.meta.json",
        &meta_sidecar("validate", &hash, &cfg.params, cfg.eta,
            vec!["validation_report.json".into()]),
    )?;
    if report.all_passed {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(
            report.checks.iter().filter(|c| !c.passed).count(),
        ))
    }
}
