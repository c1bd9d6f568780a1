use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CouplingPoint, Incident, PotentialSpec, StarProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub problem: ProblemConfig,
    pub energies: EnergyGrid,
    #[serde(default)]
    pub route: Route,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// A star problem without its energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub channels: Vec<PotentialSpec>,
    pub couplings: Vec<CouplingPoint>,
    #[serde(default = "unit")]
    pub mass: f64,
    #[serde(default = "unit")]
    pub hbar: f64,
    #[serde(default)]
    pub incident: Incident,
}

fn unit() -> f64 {
    1.0
}

impl ProblemConfig {
    pub fn at(&self, energy: f64) -> StarProblem {
        StarProblem {
            channels: self.channels.clone(),
            couplings: self.couplings.clone(),
            mass: self.mass,
            hbar: self.hbar,
            energy,
            incident: self.incident,
        }
    }

    pub fn all_constant(&self) -> bool {
        self.channels.iter().all(|c| matches!(c, PotentialSpec::Constant { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl EnergyGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::Config(format!("energies: {reason}")));
        if !(self.min.is_finite() && self.max.is_finite()) {
            return bad("min and max must be finite");
        }
        if !(self.min < self.max) {
            return bad("need min < max");
        }
        if self.count < 2 {
            return bad("count must be at least 2");
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return bad("log spacing needs min > 0");
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    #[default]
    Matcher,
    Greens,
    /// Independently coded dense matching solve.
    Oracle,
    All,
}

impl Route {
    pub const SINGLE: [Route; 4] = [Route::ClosedForm, Route::Matcher, Route::Greens, Route::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Matcher => "matcher",
            Route::Greens => "greens",
            Route::Oracle => "oracle",
            Route::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Route> {
        match self {
            Route::All => Route::SINGLE.to_vec(),
            r => vec![r],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl ScanConfig {
    /// Parse JSON, reporting the offending field path and line on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ScanConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Config(format!("at `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.energies.validate()?;
        let n = self.problem.channels.len();
        if n < 2 {
            return Err(Error::Config(format!("problem.channels: need at least 2, got {n}")));
        }
        if self.problem.couplings.len() + 1 != n {
            return Err(Error::Config(format!(
                "problem.couplings: need {} for {n} channels, got {}",
                n - 1,
                self.problem.couplings.len()
            )));
        }
        for (i, c) in self.problem.channels.iter().enumerate() {
            c.validate().map_err(|e| Error::Config(format!("problem.channels[{i}]: {e}")))?;
        }
        for (name, v) in [("mass", self.problem.mass), ("hbar", self.problem.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("problem.{name}: must be positive, got {v}")));
            }
        }
        for (i, c) in self.problem.couplings.iter().enumerate() {
            if !(c.position.is_finite() && c.strength.is_finite() && c.strength >= 0.0) {
                return Err(Error::Config(format!("problem.couplings[{i}]: need finite position and strength ≥ 0")));
            }
        }
        let inc = self.problem.incident.channel;
        if inc == 0 || inc > n {
            return Err(Error::Config(format!("problem.incident.channel: must lie in 1..={n}, got {inc}")));
        }
        Ok(())
    }
}

pub const PRESETS: [&str; 3] = ["figure-const", "figure-linear", "figure-expo"];

/// The three figure parameter sets, with atomic units, incidence on channel
/// 1 from the left, the coupling at the origin and 200-point linear grids.
pub fn emit_preset(name: &str) -> Result<ScanConfig> {
    let (v1, v2, strength, min, max) = match name {
        "figure-const" => (
            PotentialSpec::Constant { offset: 0.0 },
            PotentialSpec::Constant { offset: 5.0 },
            1.0,
            5.05,
            50.0,
        ),
        "figure-linear" => (PotentialSpec::Linear { slope: 1.0 }, PotentialSpec::Linear { slope: -1.0 }, 1.0, 0.1, 10.0),
        "figure-expo" => (
            PotentialSpec::Exponential { amplitude: 1.0, rate: 1.0 },
            PotentialSpec::Exponential { amplitude: 1.0, rate: -1.0 },
            0.1,
            0.1,
            10.0,
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(ScanConfig {
        problem: ProblemConfig {
            channels: vec![v1, v2],
            couplings: vec![CouplingPoint::new(0.0, strength)],
            mass: 1.0,
            hbar: 1.0,
            incident: Incident::default(),
        },
        energies: EnergyGrid { min, max, count: 200, spacing: Spacing::Linear },
        route: Route::All,
        output: None,
    })
}
