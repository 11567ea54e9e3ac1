//! Experiment configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! t = 0.1
//! a = 1.0
//! runs = 200
//! master_seed = 7
//! sdp_tol = 1e-8
//! metrics = ["diamond", "j"]
//! n_grid = { min = 1, max = 1000, per_decade = 24 }   # or an explicit list
//!
//! [hamiltonian]
//! preset = "ising"        # or: spec = "2 | z. ; .z | xx"
//! qubits = 2
//!
//! [noise]
//! model = "avg_mtc"       # none | mtc | avg_mtc | depol | decoh
//! sigma = 0.01
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::channels::NoiseModel;
use crate::hamiltonians::{ising_chain, parse_hamiltonian_spec, HamiltonianError};
use crate::linalg::ComplexMatrix;
use crate::metrics::{Metric, DEFAULT_RESTARTS};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config")]
    Toml(#[from] toml::de::Error),
    #[error("hamiltonian")]
    Hamiltonian(#[from] HamiltonianError),
    #[error("{0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    #[serde(default)]
    pub periodic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        Self { preset: Some("ising".into()), qubits: Some(2), periodic: false, spec: None }
    }
}

impl HamiltonianConfig {
    pub fn terms(&self) -> Result<Vec<ComplexMatrix>, ConfigError> {
        match (&self.preset, &self.spec) {
            (Some(_), Some(_)) => invalid("hamiltonian: give either `preset` or `spec`, not both"),
            (None, None) => invalid("hamiltonian: one of `preset` or `spec` is required"),
            (None, Some(spec)) => {
                if self.qubits.is_some() || self.periodic {
                    return invalid("hamiltonian: `qubits` and `periodic` only apply to presets");
                }
                Ok(parse_hamiltonian_spec(spec)?.terms())
            }
            (Some(preset), None) => match preset.as_str() {
                "ising" => {
                    let (h1, h2) = ising_chain(self.qubits.unwrap_or(2), self.periodic)?;
                    Ok(vec![h1, h2])
                }
                other => invalid(format!("hamiltonian: unknown preset '{other}' (known: ising)")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    #[default]
    None,
    Mtc {
        sigma: f64,
    },
    AvgMtc {
        sigma: f64,
    },
    Depol {
        p: f64,
    },
    Decoh {
        gamma: f64,
    },
}

impl NoiseConfig {
    /// The channel noise model; MTC draws come from per-point streams, so the
    /// seed stored here is only the master seed.
    pub fn model(&self, master_seed: u64) -> Option<NoiseModel> {
        match *self {
            NoiseConfig::None => None,
            NoiseConfig::Mtc { sigma } => Some(NoiseModel::Mtc { sigma, seed: master_seed }),
            NoiseConfig::AvgMtc { sigma } => Some(NoiseModel::AvgMtc { sigma }),
            NoiseConfig::Depol { p } => Some(NoiseModel::Depol { p }),
            NoiseConfig::Decoh { gamma } => Some(NoiseModel::Decoh { gamma }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NGrid {
    List(Vec<u64>),
    Log { min: f64, max: f64, per_decade: u32 },
}

impl Default for NGrid {
    fn default() -> Self {
        NGrid::Log { min: 1.0, max: 1000.0, per_decade: 24 }
    }
}

impl NGrid {
    /// Integer Trotter numbers, strictly increasing.
    pub fn values(&self) -> Result<Vec<u64>, ConfigError> {
        let values = match self {
            NGrid::List(v) => v.clone(),
            &NGrid::Log { min, max, per_decade } => {
                if !(min >= 1.0 && max >= min && max.is_finite()) || per_decade == 0 {
                    return invalid(format!(
                        "n_grid: need 1 <= min <= max and per_decade >= 1, got min={min} max={max} per_decade={per_decade}"
                    ));
                }
                let pd = per_decade as f64;
                let first = (pd * min.log10() - 1e-9).ceil() as i64;
                let last = (pd * max.log10() + 1e-9).floor() as i64;
                let mut out: Vec<u64> = Vec::new();
                for k in first..=last {
                    let n = 10f64.powf(k as f64 / pd).round() as u64;
                    if out.last() != Some(&n) {
                        out.push(n);
                    }
                }
                out
            }
        };
        if values.is_empty() {
            return invalid("n_grid is empty");
        }
        if values[0] == 0 {
            return invalid("n_grid entries must be >= 1");
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("n_grid must be strictly increasing");
        }
        Ok(values)
    }
}

fn default_a() -> f64 {
    1.0
}
fn default_runs() -> usize {
    1
}
fn default_tol() -> f64 {
    1e-8
}
fn default_metrics() -> Vec<String> {
    vec!["diamond".into(), "j".into()]
}
fn default_restarts() -> usize {
    DEFAULT_RESTARTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub t: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_tol")]
    pub sdp_tol: f64,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<String>,
    #[serde(default = "default_restarts")]
    pub induced_restarts: usize,
    #[serde(default)]
    pub n_grid: NGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub metrics: Option<Vec<String>>,
    pub sdp_tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(seed) = o.seed {
            self.master_seed = seed;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        if let Some(m) = &o.metrics {
            self.metrics = m.clone();
        }
        if let Some(tol) = o.sdp_tol {
            self.sdp_tol = tol;
        }
        self
    }

    /// SHA-256 of the canonical TOML form, ignoring the output path.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = None;
        let text = toml::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn parsed_metrics(&self) -> Result<Vec<Metric>, ConfigError> {
        if self.metrics.is_empty() {
            return invalid("metrics: at least one metric is required");
        }
        let mut out: Vec<Metric> = Vec::new();
        for name in &self.metrics {
            let m = match name.parse::<Metric>().map_err(|e| ConfigError::Invalid(format!("metrics: {e}")))? {
                Metric::InducedTraceHeuristic { .. } => {
                    Metric::InducedTraceHeuristic { restarts: self.induced_restarts, seed: self.master_seed }
                }
                m => m,
            };
            if out.iter().any(|x| x.name() == m.name()) {
                return invalid(format!("metrics: '{name}' listed twice"));
            }
            out.push(m);
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return invalid(format!("t must be finite and >= 0, got {}", self.t));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return invalid(format!("a must be positive, got {}", self.a));
        }
        if self.runs == 0 {
            return invalid("runs must be >= 1");
        }
        if !(self.sdp_tol > 0.0 && self.sdp_tol < 1.0) {
            return invalid(format!("sdp_tol must lie in (0, 1), got {}", self.sdp_tol));
        }
        if self.induced_restarts == 0 {
            return invalid("induced_restarts must be >= 1");
        }
        self.n_grid.values()?;
        self.parsed_metrics()?;
        if let Some(model) = self.noise.model(self.master_seed) {
            model.validate().map_err(|e| ConfigError::Invalid(format!("noise: {e}")))?;
        }
        self.hamiltonian.terms()?;
        Ok(())
    }
}
