//! Deterministic file emission: trajectory/diagram CSVs, JSON mirrors,
//! metadata sidecars and plot scripts.
//!
//! Floating-point columns are printed with 17 significant digits so that
//! identical configs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::evolution::Trajectory;
use crate::model::SystemParams;
use crate::regimes::{classify, RegimeDiagram};

use super::config::RunConfig;
use super::CliError;

pub const TRAJECTORY_HEADER: &str = "t,re_coh_num,im_coh_num,abs_coh_num,re_coh_ana,im_coh_ana,abs_coh_ana,pop_q0,pop_q1,pop_i0,pop_i1,trace_dev,min_eig";

/// 17 significant digits, deterministic.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// SHA-256 of the canonical JSON serialisation of the resolved config plus
/// the command name.
pub fn config_hash(command: &str, cfg: &RunConfig) -> String {
    let canonical = serde_json::to_string(&(command, cfg)).expect("config serialises");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Trajectory CSV per the fixed schema; analytic columns are left empty when
/// no closed form applies (Delta != 0).
pub fn trajectory_csv(traj: &Trajectory, analytic: Option<&[C64]>) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (k, &t) in traj.times.iter().enumerate() {
        let coh = traj.coherence[k];
        let ana = analytic.map(|a| a[k]);
        let state = &traj.states[k];
        let row = [
            fmt_f64(t),
            fmt_f64(coh.re),
            fmt_f64(coh.im),
            fmt_f64(coh.norm()),
            fmt_opt(ana.map(|z| z.re)),
            fmt_opt(ana.map(|z| z.im)),
            fmt_opt(ana.map(|z| z.norm())),
            fmt_f64(traj.qubit_populations[k][0]),
            fmt_f64(traj.qubit_populations[k][1]),
            fmt_f64(traj.impurity_populations[k][0]),
            fmt_f64(traj.impurity_populations[k][1]),
            fmt_f64(state.trace_deviation()),
            fmt_f64(state.min_eigenvalue()),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TrajectoryJson {
    t: Vec<f64>,
    re_coh_num: Vec<f64>,
    im_coh_num: Vec<f64>,
    abs_coh_num: Vec<f64>,
    re_coh_ana: Option<Vec<f64>>,
    im_coh_ana: Option<Vec<f64>>,
    abs_coh_ana: Option<Vec<f64>>,
    pop_q0: Vec<f64>,
    pop_q1: Vec<f64>,
    pop_i0: Vec<f64>,
    pop_i1: Vec<f64>,
    trace_dev: Vec<f64>,
    min_eig: Vec<f64>,
}

pub fn trajectory_json(traj: &Trajectory, analytic: Option<&[C64]>) -> String {
    let j = TrajectoryJson {
        t: traj.times.clone(),
        re_coh_num: traj.coherence.iter().map(|z| z.re).collect(),
        im_coh_num: traj.coherence.iter().map(|z| z.im).collect(),
        abs_coh_num: traj.coherence.iter().map(|z| z.norm()).collect(),
        re_coh_ana: analytic.map(|a| a.iter().map(|z| z.re).collect()),
        im_coh_ana: analytic.map(|a| a.iter().map(|z| z.im).collect()),
        abs_coh_ana: analytic.map(|a| a.iter().map(|z| z.norm()).collect()),
        pop_q0: traj.qubit_populations.iter().map(|p| p[0]).collect(),
        pop_q1: traj.qubit_populations.iter().map(|p| p[1]).collect(),
        pop_i0: traj.impurity_populations.iter().map(|p| p[0]).collect(),
        pop_i1: traj.impurity_populations.iter().map(|p| p[1]).collect(),
        trace_dev: traj.states.iter().map(|s| s.trace_deviation()).collect(),
        min_eig: traj.states.iter().map(|s| s.min_eigenvalue()).collect(),
    };
    serde_json::to_string_pretty(&j).expect("trajectory serialises")
}

#[derive(Serialize)]
pub struct DerivedQuantities {
    pub gamma: f64,
    pub g: f64,
    pub omega: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub delta_p_bar: f64,
}

impl DerivedQuantities {
    pub fn from_params(p: &SystemParams) -> Self {
        DerivedQuantities {
            gamma: p.gamma(),
            g: p.g(),
            omega: p.omega(),
            omega0: p.omega_tau(0),
            omega1: p.omega_tau(1),
            delta_p_bar: p.delta_p_bar(),
        }
    }
}

#[derive(Serialize)]
pub struct MetaSidecar<'a> {
    pub tool_version: &'static str,
    pub command: &'a str,
    pub config_hash: &'a str,
    pub parameters: &'a SystemParams,
    pub derived: DerivedQuantities,
    pub regime_label: &'static str,
    pub outputs: Vec<String>,
}

pub fn meta_sidecar(
    command: &str,
    hash: &str,
    params: &SystemParams,
    eta: f64,
    outputs: Vec<String>,
) -> String {
    let label = classify(params.v, params.gamma(), params, eta);
    let meta = MetaSidecar {
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        config_hash: hash,
        parameters: params,
        derived: DerivedQuantities::from_params(params),
        regime_label: label.as_str(),
        outputs,
    };
    serde_json::to_string_pretty(&meta).expect("metadata serialises")
}

/// Diagram CSV: one `(v, gamma, label)` row per grid point, v slow axis.
pub fn diagram_csv(d: &RegimeDiagram) -> String {
    let mut out = String::from("v,gamma,label\n");
    for (iv, &v) in d.v_values.iter().enumerate() {
        for (ig, &gamma) in d.gamma_values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(v),
                fmt_f64(gamma),
                d.label_at(iv, ig).as_str()
            );
        }
    }
    out
}

#[derive(Serialize)]
struct DiagramAxes<'a> {
    v_values: &'a [f64],
    gamma_values: &'a [f64],
    eta: f64,
}

pub fn diagram_axes_json(d: &RegimeDiagram, eta: f64) -> String {
    serde_json::to_string_pretty(&DiagramAxes {
        v_values: &d.v_values,
        gamma_values: &d.gamma_values,
        eta,
    })
    .expect("axes serialise")
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Matplotlib script overlaying |coherence| curves from trajectory CSVs.
pub fn trajectory_plot_script(csv_files: &[String], png_name: &str) -> String {
    let file_list = csv_files
        .iter()
        .map(|f| format!("    \"{f}\","))
        .collect::<Vec<_>>()
        .join("\n");
    format!(
        r#"#!/usr/bin/env python3
"""Overlay coherence moduli from trajectory CSV files in this directory."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
FILES = [
{file_list}
]

fig, ax = plt.subplots(figsize=(7, 4.5))
for name in FILES:
    ts, num, ana = [], [], []
    with open(os.path.join(HERE, name)) as fh:
        for row in csv.DictReader(fh):
            ts.append(float(row["t"]))
            num.append(float(row["abs_coh_num"]))
            ana.append(float(row["abs_coh_ana"]) if row["abs_coh_ana"] else None)
    label = name.replace(".csv", "")
    ax.plot(ts, num, label=label)
    if all(a is not None for a in ana):
        ax.plot(ts, ana, linestyle=":", linewidth=1, label=label + " (analytic)")
ax.set_xlabel("t")
ax.set_ylabel("|coherence|")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{png_name}"), dpi=160)
print("wrote {png_name}")
"#
    )
}

/// Matplotlib script rendering the validity diagram regions.
pub fn diagram_plot_script(csv_file: &str, png_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Render the (v, gamma) validity diagram from {csv_file}."""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
COLORS = {{"local_only": "tab:red", "global_only": "tab:blue",
          "both": "tab:purple", "neither": "gold"}}

points = {{}}
with open(os.path.join(HERE, "{csv_file}")) as fh:
    for row in csv.DictReader(fh):
        points.setdefault(row["label"], []).append(
            (float(row["v"]), float(row["gamma"])))

fig, ax = plt.subplots(figsize=(5.5, 4.5))
for label, pts in sorted(points.items()):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    ax.scatter(xs, ys, s=6, marker="s", color=COLORS.get(label, "gray"),
               label=label)
ax.set_xlabel("v")
ax.set_ylabel("gamma")
ax.legend(fontsize=8, loc="upper right")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{png_name}"), dpi=160)
print("wrote {png_name}")
"#
    )
}
