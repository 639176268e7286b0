//! Config-file parsing and the resolved run configuration.
//!
//! The config file is flat key-value text with one section per command plus
//! the shared `[params]` and `[output]` sections:
//!
//! ```text
//! [params]
//! epsilon = 20
//! delta = 0
//! v = 2
//! epsilon_i = 20
//! beta = inf
//! gamma_minus = 0.3333333333333333
//! delta_p0 = 0
//!
//! [simulate]
//! approach = local
//! steps = 200
//!
//! [sweep]
//! g_list = 0.5, 2, 6
//!
//! [diagram]
//! v_min = 0.1
//! v_max = 10
//! v_steps = 50
//! gamma_min = 0.1
//! gamma_max = 40
//! gamma_steps = 50
//! eta = 0.1
//! ```
//!
//! Every key can be overridden by a command-line flag; flags win.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::model::{Beta, SystemParams};
use crate::regimes::{DiagramSpec, DEFAULT_ETA};

use super::CliError;

/// Parsed sections of a config file: section -> key -> raw value.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("params", &[
        "epsilon", "delta", "v", "epsilon_i", "beta", "gamma_minus", "delta_p0",
        "qubit_pop0", "qubit_coh0_re", "qubit_coh0_im",
    ]),
    ("simulate", &["approach", "t_max", "steps"]),
    ("sweep", &["g_list", "approach", "t_max", "steps"]),
    ("diagram", &[
        "v_min", "v_max", "v_steps", "gamma_min", "gamma_max", "gamma_steps", "eta",
    ]),
    ("validate", &["tolerance"]),
    ("output", &["out", "format", "plot_script"]),
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::from("params");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim().to_ascii_lowercase();
                if !KNOWN_KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(CliError::Config(format!(
                        "line {}: unknown section [{name}]",
                        lineno + 1
                    )));
                }
                current = name;
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_ascii_lowercase();
            let allowed = KNOWN_KEYS
                .iter()
                .find(|(s, _)| *s == current)
                .map(|(_, keys)| keys.contains(&key.as_str()))
                .unwrap_or(false);
            if !allowed {
                return Err(CliError::Config(format!(
                    "line {}: unknown key `{key}` in section [{current}]",
                    lineno + 1
                )));
            }
            sections
                .entry(current.clone())
                .or_default()
                .insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { sections })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|m| m.get(key)).map(|s| s.as_str())
    }

    fn f64(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        self.get(section, key)
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    CliError::Config(format!("[{section}] {key}: `{s}` is not a number"))
                })
            })
            .transpose()
    }

    fn usize(&self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        self.get(section, key)
            .map(|s| {
                s.parse::<usize>().map_err(|_| {
                    CliError::Config(format!("[{section}] {key}: `{s}` is not a count"))
                })
            })
            .transpose()
    }

    fn bool(&self, section: &str, key: &str) -> Result<Option<bool>, CliError> {
        self.get(section, key)
            .map(|s| match s.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(CliError::Config(format!(
                    "[{section}] {key}: `{s}` is not a boolean"
                ))),
            })
            .transpose()
    }

    fn beta(&self) -> Result<Option<Beta>, CliError> {
        self.get("params", "beta").map(parse_beta).transpose()
    }
}

pub fn parse_beta(s: &str) -> Result<Beta, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinite" | "infinity" => Ok(Beta::Infinite),
        other => other
            .parse::<f64>()
            .map(Beta::Finite)
            .map_err(|_| CliError::Config(format!("beta: `{s}` is neither a number nor `inf`"))),
    }
}

/// Which master-equation construction to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Local,
    Global,
    Both,
}

impl Approach {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(Approach::Local),
            "global" => Ok(Approach::Global),
            "both" => Ok(Approach::Both),
            other => Err(CliError::Config(format!(
                "approach must be local|global|both, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
    pub fn wants_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

/// Fully resolved configuration (defaults < config file < flags).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: SystemParams,
    pub qubit_pop0: f64,
    pub qubit_coh0_re: f64,
    pub qubit_coh0_im: f64,
    pub approach: Approach,
    /// End of the time grid; defaults to 10/gamma of the resolved params.
    pub t_max: Option<f64>,
    pub steps: usize,
    pub g_list: Vec<f64>,
    pub v_min: f64,
    pub v_max: f64,
    pub v_steps: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_steps: usize,
    pub eta: f64,
    pub tolerance: Option<f64>,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub plot_script: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams {
                epsilon: 20.0,
                delta: 0.0,
                v: 2.0,
                epsilon_i: 20.0,
                beta: Beta::Infinite,
                gamma_minus: 1.0 / 3.0, // gamma = 2/3, g = 6
                delta_p0: 0.0,
            },
            qubit_pop0: 0.5,
            qubit_coh0_re: 0.5,
            qubit_coh0_im: 0.0,
            approach: Approach::Local,
            t_max: None,
            steps: 200,
            g_list: vec![0.5, 2.0, 6.0],
            v_min: 0.1,
            v_max: 10.0,
            v_steps: 50,
            gamma_min: 0.1,
            gamma_max: 40.0,
            gamma_steps: 50,
            eta: DEFAULT_ETA,
            tolerance: None,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            plot_script: false,
        }
    }
}

impl RunConfig {
    pub fn qubit_coh0(&self) -> C64 {
        C64::new(self.qubit_coh0_re, self.qubit_coh0_im)
    }

    pub fn resolved_t_max(&self) -> f64 {
        self.t_max.unwrap_or(10.0 / self.params.gamma())
    }

    pub fn time_grid(&self) -> Result<Vec<f64>, CliError> {
        let t_max = self.resolved_t_max();
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "time grid needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(CliError::Config(format!("t_max must be positive, got {t_max}")));
        }
        Ok((0..self.steps)
            .map(|k| t_max * k as f64 / (self.steps - 1) as f64)
            .collect())
    }

    pub fn diagram_spec(&self) -> DiagramSpec {
        DiagramSpec {
            v_range: (self.v_min, self.v_max, self.v_steps),
            gamma_range: (self.gamma_min, self.gamma_max, self.gamma_steps),
            fixed: self.params,
            eta: self.eta,
        }
    }

    /// Layer the config file onto the defaults.
    pub fn apply_file(&mut self, file: &ConfigFile) -> Result<(), CliError> {
        if let Some(x) = file.f64("params", "epsilon")? {
            self.params.epsilon = x;
        }
        if let Some(x) = file.f64("params", "delta")? {
            self.params.delta = x;
        }
        if let Some(x) = file.f64("params", "v")? {
            self.params.v = x;
        }
        if let Some(x) = file.f64("params", "epsilon_i")? {
            self.params.epsilon_i = x;
        }
        if let Some(b) = file.beta()? {
            self.params.beta = b;
        }
        if let Some(x) = file.f64("params", "gamma_minus")? {
            self.params.gamma_minus = x;
        }
        if let Some(x) = file.f64("params", "delta_p0")? {
            self.params.delta_p0 = x;
        }
        if let Some(x) = file.f64("params", "qubit_pop0")? {
            self.qubit_pop0 = x;
        }
        if let Some(x) = file.f64("params", "qubit_coh0_re")? {
            self.qubit_coh0_re = x;
        }
        if let Some(x) = file.f64("params", "qubit_coh0_im")? {
            self.qubit_coh0_im = x;
        }

        for section in ["simulate", "sweep"] {
            if let Some(s) = file.get(section, "approach") {
                self.approach = Approach::parse(s)?;
            }
            if let Some(x) = file.f64(section, "t_max")? {
                self.t_max = Some(x);
            }
            if let Some(n) = file.usize(section, "steps")? {
                self.steps = n;
            }
        }
        if let Some(s) = file.get("sweep", "g_list") {
            self.g_list = parse_g_list(s)?;
        }

        if let Some(x) = file.f64("diagram", "v_min")? {
            self.v_min = x;
        }
        if let Some(x) = file.f64("diagram", "v_max")? {
            self.v_max = x;
        }
        if let Some(n) = file.usize("diagram", "v_steps")? {
            self.v_steps = n;
        }
        if let Some(x) = file.f64("diagram", "gamma_min")? {
            self.gamma_min = x;
        }
        if let Some(x) = file.f64("diagram", "gamma_max")? {
            self.gamma_max = x;
        }
        if let Some(n) = file.usize("diagram", "gamma_steps")? {
            self.gamma_steps = n;
        }
        if let Some(x) = file.f64("diagram", "eta")? {
            self.eta = x;
        }

        if let Some(x) = file.f64("validate", "tolerance")? {
            self.tolerance = Some(x);
        }

        if let Some(s) = file.get("output", "out") {
            self.out_dir = PathBuf::from(s);
        }
        if let Some(s) = file.get("output", "format") {
            self.format = match s.to_ascii_lowercase().as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                "both" => OutputFormat::Both,
                other => {
                    return Err(CliError::Config(format!(
                        "format must be csv|json|both, got `{other}`"
                    )))
                }
            };
        }
        if let Some(b) = file.bool("output", "plot_script")? {
            self.plot_script = b;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.g_list.is_empty() {
            return Err(CliError::Config("g_list must not be empty".into()));
        }
        if self.g_list.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
            return Err(CliError::Config("g_list entries must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.qubit_pop0) {
            return Err(CliError::Config(format!(
                "qubit_pop0 must lie in [0, 1], got {}",
                self.qubit_pop0
            )));
        }
        Ok(())
    }

    /// Copy with the emission rate retuned so the crossover parameter is `g`.
    pub fn params_for_g(&self, g: f64) -> SystemParams {
        let ratio = match self.params.beta {
            Beta::Infinite => 1.0,
            Beta::Finite(b) => (-b * self.params.epsilon_i).exp(),
        };
        let gamma = 2.0 * self.params.v / g;
        SystemParams { gamma_minus: gamma / (1.0 + ratio), ..self.params }
    }
}

pub fn parse_g_list(s: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<&str> = s
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .collect();
    items
        .iter()
        .map(|x| {
            x.parse::<f64>()
                .map_err(|_| CliError::Config(format!("g_list entry `{x}` is not a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_overrides_defaults() {
        let text = "\
# comment
[params]
epsilon = 10
beta = 0.05
gamma_minus = 2.0

[simulate]
approach = both
steps = 101

[sweep]
g_list = 1, 2.5,6

[output]
format = both
plot_script = true
";
        let file = ConfigFile::parse(text).unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&file).unwrap();
        assert_eq!(cfg.params.epsilon, 10.0);
        assert_eq!(cfg.params.beta, Beta::Finite(0.05));
        assert_eq!(cfg.params.gamma_minus, 2.0);
        assert_eq!(cfg.approach, Approach::Both);
        assert_eq!(cfg.steps, 101);
        assert_eq!(cfg.g_list, vec![1.0, 2.5, 6.0]);
        assert_eq!(cfg.format, OutputFormat::Both);
        assert!(cfg.plot_script);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(ConfigFile::parse("[params]\nepsilom = 3\n").is_err());
        assert!(ConfigFile::parse("[nonsense]\n").is_err());
        assert!(ConfigFile::parse("[params]\nepsilon 3\n").is_err());
    }

    #[test]
    fn beta_accepts_infinite_spelling() {
        assert_eq!(parse_beta("inf").unwrap(), Beta::Infinite);
        assert_eq!(parse_beta("0.25").unwrap(), Beta::Finite(0.25));
        assert!(parse_beta("warm").is_err());
    }

    #[test]
    fn g_list_parsing() {
        assert_eq!(parse_g_list("0.5, 2, 6").unwrap(), vec![0.5, 2.0, 6.0]);
        assert!(parse_g_list("0.5, x").is_err());
        assert!(parse_g_list(" ").unwrap().is_empty());
    }

    #[test]
    fn params_for_g_hits_target_crossover() {
        let cfg = RunConfig::default();
        for g in [0.5, 2.0, 6.0] {
            let p = cfg.params_for_g(g);
            assert!((p.g() - g).abs() < 1e-12);
        }
        let warm = RunConfig {
            params: SystemParams { beta: Beta::Finite(0.07), ..RunConfig::default().params },
            ..RunConfig::default()
        };
        for g in [0.5, 3.0] {
            assert!((warm.params_for_g(g).g() - g).abs() < 1e-12);
        }
    }

    #[test]
    fn time_grid_validation() {
        let mut cfg = RunConfig { steps: 1, ..RunConfig::default() };
        assert!(cfg.time_grid().is_err());
        cfg.steps = 3;
        cfg.t_max = Some(1.0);
        assert_eq!(cfg.time_grid().unwrap(), vec![0.0, 0.5, 1.0]);
        cfg.t_max = Some(-2.0);
        assert!(cfg.time_grid().is_err());
    }
}
