//! Classification of (v, gamma) parameter points by which derivation scheme
//! admits a GKSL master equation, and the grid dataset behind the validity
//! diagram.

use serde::Serialize;
use thiserror::Error;

use crate::model::SystemParams;

#[derive(Debug, Error)]
pub enum RegimeError {
    #[error("invalid diagram spec: {0}")]
    InvalidSpec(String),
}

/// Which approach(es) admit a GKSL description at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegimeLabel {
    LocalOnly,
    GlobalOnly,
    Both,
    Neither,
}

impl RegimeLabel {
    fn from_bits(local_valid: bool, global_valid: bool) -> Self {
        match (local_valid, global_valid) {
            (true, true) => RegimeLabel::Both,
            (true, false) => RegimeLabel::LocalOnly,
            (false, true) => RegimeLabel::GlobalOnly,
            (false, false) => RegimeLabel::Neither,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::LocalOnly => "local_only",
            RegimeLabel::GlobalOnly => "global_only",
            RegimeLabel::Both => "both",
            RegimeLabel::Neither => "neither",
        }
    }
}

/// Grid specification for the validity diagram.
#[derive(Debug, Clone)]
pub struct DiagramSpec {
    pub v_range: (f64, f64, usize),
    pub gamma_range: (f64, f64, usize),
    /// Template supplying the fixed parameters (epsilon, Delta, epsilon_I).
    pub fixed: SystemParams,
    /// Threshold ratio in the perturbative condition `v <= eta min(Omega, eps_I)`.
    pub eta: f64,
}

impl DiagramSpec {
    pub fn validate(&self) -> Result<(), RegimeError> {
        for (name, (lo, hi, steps)) in
            [("v", self.v_range), ("gamma", self.gamma_range)]
        {
            if steps < 1 {
                return Err(RegimeError::InvalidSpec(format!("{name} steps must be >= 1")));
            }
            // a single-step axis may collapse to one value (lo == hi)
            let ordered = if steps == 1 { hi >= lo } else { hi > lo };
            if !(lo > 0.0 && ordered && lo.is_finite() && hi.is_finite()) {
                return Err(RegimeError::InvalidSpec(format!(
                    "{name} range must be positive and ordered, got ({lo}, {hi})"
                )));
            }
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(RegimeError::InvalidSpec(format!("eta must be > 0, got {}", self.eta)));
        }
        Ok(())
    }
}

/// The classified grid, row-major over (v, gamma) with v as the slow axis.
#[derive(Debug, Clone)]
pub struct RegimeDiagram {
    pub v_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub labels: Vec<RegimeLabel>,
}

impl RegimeDiagram {
    pub fn label_at(&self, iv: usize, ig: usize) -> RegimeLabel {
        self.labels[iv * self.gamma_values.len() + ig]
    }

    pub fn distinct_labels(&self) -> Vec<RegimeLabel> {
        let mut seen = Vec::new();
        for l in &self.labels {
            if !seen.contains(l) {
                seen.push(*l);
            }
        }
        seen
    }
}

/// Classify a (v, gamma) point.
///
/// Local validity is the perturbative condition `v <= eta min(Omega, eps_I)`;
/// global validity is the strict non-degeneracy condition
/// `|Omega_0 - Omega_1| > gamma`, evaluated with the scan value of v.
pub fn classify(v: f64, gamma: f64, p: &SystemParams, eta: f64) -> RegimeLabel {
    assert!(v >= 0.0 && gamma > 0.0, "classify expects v >= 0 and gamma > 0");
    let scan = SystemParams { v, ..*p };
    let local_valid = v <= eta * scan.omega().min(scan.epsilon_i);
    let global_valid = (scan.omega_tau(0) - scan.omega_tau(1)).abs() > gamma;
    RegimeLabel::from_bits(local_valid, global_valid)
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Evaluate [`classify`] over the Cartesian grid of a [`DiagramSpec`].
pub fn regime_diagram(spec: &DiagramSpec) -> Result<RegimeDiagram, RegimeError> {
    spec.validate()?;
    let v_values = linspace(spec.v_range.0, spec.v_range.1, spec.v_range.2);
    let gamma_values = linspace(spec.gamma_range.0, spec.gamma_range.1, spec.gamma_range.2);
    let mut labels = Vec::with_capacity(v_values.len() * gamma_values.len());
    for &v in &v_values {
        for &gamma in &gamma_values {
            labels.push(classify(v, gamma, &spec.fixed, spec.eta));
        }
    }
    Ok(RegimeDiagram { v_values, gamma_values, labels })
}

/// Default local-validity threshold; the perturbative condition has no sharp
/// scale, so the boundary is explicit and configurable.
pub const DEFAULT_ETA: f64 = 0.1;
