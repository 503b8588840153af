//! Run configuration: a single JSON document that mirrors the CLI flags,
//! validates strictly (unknown keys are rejected so typos fail loudly), and
//! round-trips losslessly so every artifact can embed the exact settings
//! that produced it.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Disorder, FieldSchedule, Model, ModelSpec, PathSpec};

/// Which artifact a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Trace every first-order line in a plane.
    PhaseDiagram,
    /// Semiclassical (and optionally finite-N) excitation gaps along a path.
    Gap,
    /// Minimal finite-N gap versus system size, with scaling verdict.
    GapScaling,
    /// Magnetization jump along traced lines.
    DeltaM,
    /// Entanglement entropy along a path.
    Entropy,
    /// Inhomogeneous-temperature simulated-annealing order parameter.
    Sa,
    /// Spin-vector Monte Carlo transition line.
    Svmc,
    /// Free-energy landscape f(m) at one drive point.
    Landscape,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::PhaseDiagram,
        Command::Gap,
        Command::GapScaling,
        Command::DeltaM,
        Command::Entropy,
        Command::Sa,
        Command::Svmc,
        Command::Landscape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::PhaseDiagram => "phase-diagram",
            Command::Gap => "gap",
            Command::GapScaling => "gap-scaling",
            Command::DeltaM => "delta-m",
            Command::Entropy => "entropy",
            Command::Sa => "sa",
            Command::Svmc => "svmc",
            Command::Landscape => "landscape",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Artifact encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

fn default_p() -> u32 {
    3
}

fn default_schedule() -> FieldSchedule {
    FieldSchedule::StepIdeal
}

fn default_disorder() -> Disorder {
    Disorder::None
}

fn default_u() -> f64 {
    0.5
}

fn default_beta0() -> f64 {
    2.0
}

/// Fully resolved settings of one run. Field meanings follow the CLI flags
/// one-to-one; optional fields stay absent in the serialized form, so a
/// config written by one run re-reads into an identical value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_p")]
    pub p: u32,
    /// Fixed drive point; required by `landscape`, ignored elsewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Temperature of the model. For `phase-diagram` in the temperature
    /// plane (a `path` is set) this is the top of the swept T-range
    /// (0 selects the default range end 0.05).
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_schedule")]
    pub schedule: FieldSchedule,
    /// Annealing path τ(s); selects the temperature plane for
    /// `phase-diagram` and the scan path for `gap`/`entropy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathSpec>,
    #[serde(default = "default_disorder")]
    pub disorder: Disorder,
    /// Resolution of the command's grid (rows for traces, samples for
    /// scans, m-points for landscapes). Command-specific default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Finite system sizes for exact diagonalization.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    /// Entanglement cut fraction.
    #[serde(default = "default_u")]
    pub u: f64,
    /// Simulated-annealing target inverse temperature.
    #[serde(default = "default_beta0")]
    pub beta0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Worker threads; 0 keeps the library default.
    #[serde(default)]
    pub threads: usize,
    /// Promote numerical warnings to a failing exit status.
    #[serde(default)]
    pub strict: bool,
}

impl RunConfig {
    /// A config for `command` with every other field at its default.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            p: default_p(),
            s: None,
            tau: None,
            temperature: 0.0,
            schedule: default_schedule(),
            path: None,
            disorder: default_disorder(),
            grid: None,
            n: Vec::new(),
            u: default_u(),
            beta0: default_beta0(),
            out: None,
            format: Format::default(),
            threads: 0,
            strict: false,
        }
    }

    /// Parse a JSON config document; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            let (line, column) = (e.line(), e.column());
            let msg = e.to_string();
            let msg = msg
                .strip_suffix(&format!(" at line {line} column {column}"))
                .map(str::to_string)
                .unwrap_or(msg);
            Error::config(format!("config line {line}, column {column}: {msg}"))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Single-line form for artifact headers.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// The model at the config's fixed drive point (absent coordinates are
    /// pinned to 0, the start of the anneal).
    pub fn model(&self) -> Result<Model> {
        Model::new(
            ModelSpec {
                p: self.p,
                s: self.s.unwrap_or(0.0),
                tau: self.tau.unwrap_or(0.0),
                temperature: self.temperature,
            },
            self.schedule,
            self.disorder,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?; // p, s, tau, temperature, schedule, disorder
        if let Some(path) = &self.path {
            path.validate()?;
        }
        if !(0.0..=1.0).contains(&self.u) {
            return Err(Error::config(format!("u must lie in [0, 1], got {}", self.u)));
        }
        if !(self.beta0 > 0.0) || !self.beta0.is_finite() {
            return Err(Error::config(format!("beta0 must be positive, got {}", self.beta0)));
        }
        if let Some(g) = self.grid {
            if g < 2 {
                return Err(Error::config(format!("grid must be at least 2, got {g}")));
            }
        }
        if self.n.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("system sizes must be strictly increasing"));
        }
        if self.n.iter().any(|&n| n == 0) {
            return Err(Error::config("system sizes must be positive"));
        }
        match self.command {
            Command::Landscape => {
                if self.s.is_none() || self.tau.is_none() {
                    return Err(Error::config(
                        "landscape needs an explicit drive point: set s and tau",
                    ));
                }
            }
            Command::GapScaling => {
                match self.path {
                    None | Some(PathSpec::TauEqS) | Some(PathSpec::Ramp { .. }) => {}
                    Some(ref p) => {
                        return Err(Error::config(format!(
                            "gap-scaling sweeps the ramp family; path {p} has no ramp offset \
                             (use tau-eq-s or ramp:<a>)",
                        )));
                    }
                }
                if self.n.len() == 1 {
                    return Err(Error::config(
                        "gap-scaling needs at least two system sizes",
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Ramp offset for gap-scaling: 0 on the diagonal, a for ramp:<a>.
    pub fn ramp_offset(&self) -> f64 {
        match self.path {
            Some(PathSpec::Ramp { a }) => a,
            _ => 0.0,
        }
    }
}
