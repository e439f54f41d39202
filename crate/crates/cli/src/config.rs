//! Run configuration: one JSON document per experiment.
//!
//! Every section rejects unknown fields. Parsing goes through
//! `serde_path_to_error`, so a bad value is reported with the dotted path of
//! the field that holds it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stobgk::counterexample::{Profile, StochasticSetup};
use stobgk::kinetic::{FieldPreset, FluxPreset, InitialData, ProblemSpec, SpatialGrid};

use crate::error::{CliError, CliResult};
use crate::presets;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    pub dim: usize,
    pub flux: FluxPreset,
    pub field: FieldPreset,
    pub initial: InitialData,
    pub grid: GridSection,
    #[serde(default)]
    pub velocity: VelocitySection,
    pub bgk: BgkSection,
    #[serde(default)]
    pub monte_carlo: MonteCarloSection,
    #[serde(default)]
    pub audits: AuditToggles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<PathsSection>,
    /// Default output directory. Not part of the resolved config or its hash,
    /// so moving a bundle does not change its identity.
    #[serde(default, skip_serializing)]
    pub out: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_width: f64,
    pub cells: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocitySection {
    pub cells: usize,
}

impl Default for VelocitySection {
    fn default() -> Self {
        Self { cells: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BgkSection {
    /// Relaxation times. The first drives `simulate`; a longer, decreasing
    /// list also produces an ε-continuation table.
    pub epsilon: Vec<f64>,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "one")]
    pub snapshot_stride: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    Brownian,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    pub paths: usize,
    pub master_seed: u64,
    pub noise: Noise,
}

impl Default for MonteCarloSection {
    fn default() -> Self {
        Self { paths: 1, master_seed: 0, noise: Noise::Brownian }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditToggles {
    pub max_principle: bool,
    pub l1_envelope: bool,
    pub bv: bool,
    pub defect: bool,
    pub energy: bool,
    pub entropy: bool,
}

impl Default for AuditToggles {
    fn default() -> Self {
        Self { max_principle: true, l1_envelope: true, bv: true, defect: true, energy: true, entropy: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// Godunov on the deterministic law, shifted by the path.
    Shift,
    /// Data carried along characteristics; linear flux only.
    Characteristics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    /// Cells per axis at each level, coarsest first.
    pub levels: Vec<usize>,
    pub oracle: OracleKind,
    #[serde(default = "unit")]
    pub dt_per_h: f64,
    #[serde(default = "unit")]
    pub eps_per_dt: f64,
    /// Velocity cells are `cells / velocity_ratio`, at least 16.
    #[serde(default = "sixteen")]
    pub velocity_ratio: usize,
    /// The oracle runs on a grid this many times finer and is averaged down.
    #[serde(default = "four")]
    pub oracle_refine: usize,
    #[serde(default = "half")]
    pub oracle_cfl: f64,
}

fn unit() -> f64 {
    1.0
}
fn half() -> f64 {
    0.5
}
fn four() -> usize {
    4
}
fn sixteen() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleSection {
    pub half_width: f64,
    pub t: f64,
    pub deterministic_levels: Vec<usize>,
    pub stochastic_levels: Vec<usize>,
    #[serde(default = "cusp_only")]
    pub stochastic_profiles: Vec<Profile>,
    pub stochastic: StochasticSetup,
    /// Level at which the deterministic fields are written out for plotting.
    pub figure_cells: usize,
}

fn cusp_only() -> Vec<Profile> {
    vec![Profile::Cusp]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSection {
    pub dims: Vec<usize>,
    /// `δ = 2^-delta_log2`.
    pub delta_log2: u32,
    /// Path step is `δ / steps_per_delta`.
    pub steps_per_delta: usize,
    pub paths: usize,
    pub horizon: f64,
}

impl RunConfig {
    /// Parses JSON text, reporting failures with the path of the bad field.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads `preset:NAME` or a JSON file.
    pub fn load(source: &str) -> CliResult<Self> {
        if let Some(name) = source.strip_prefix("preset:") {
            let cfg = presets::named(name)
                .ok_or_else(|| CliError::config("<preset>", format!("unknown preset `{name}`; known: {}", presets::NAMES.join(", "))))?;
            cfg.validate()?;
            return Ok(cfg);
        }
        let path = Path::new(source);
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.experiment.is_empty()
            || !self.experiment.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(CliError::config("experiment", "use letters, digits, `_` or `-`"));
        }
        if !(1..=2).contains(&self.dim) {
            return Err(CliError::config("dim", format!("must be 1 or 2, got {}", self.dim)));
        }
        if !(self.grid.half_width > 0.0 && self.grid.half_width.is_finite()) {
            return Err(CliError::config("grid.half_width", "must be positive"));
        }
        if self.grid.cells < 2 {
            return Err(CliError::config("grid.cells", "need at least 2 cells per axis"));
        }
        if self.velocity.cells < 4 || !self.velocity.cells.is_multiple_of(2) {
            return Err(CliError::config("velocity.cells", "must be even and at least 4"));
        }
        let b = &self.bgk;
        if b.epsilon.is_empty() {
            return Err(CliError::config("bgk.epsilon", "list is empty"));
        }
        for (i, e) in b.epsilon.iter().enumerate() {
            if !(*e > 0.0 && e.is_finite()) {
                return Err(CliError::config(format!("bgk.epsilon[{i}]"), "must be positive"));
            }
        }
        if b.epsilon.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::config("bgk.epsilon", "must decrease strictly"));
        }
        if !(b.dt > 0.0 && b.dt.is_finite()) {
            return Err(CliError::config("bgk.dt", "must be positive"));
        }
        if !(b.t_final > 0.0 && b.t_final.is_finite()) {
            return Err(CliError::config("bgk.t_final", "must be positive"));
        }
        if b.snapshot_stride == 0 {
            return Err(CliError::config("bgk.snapshot_stride", "must be at least 1"));
        }
        if self.monte_carlo.paths == 0 {
            return Err(CliError::config("monte_carlo.paths", "must be at least 1"));
        }
        if let Some(c) = &self.convergence {
            if c.levels.len() < 3 {
                return Err(CliError::config(
                    "convergence.levels",
                    format!("a rate needs at least 3 levels, got {}", c.levels.len()),
                ));
            }
            if c.levels.windows(2).any(|w| w[1] <= w[0]) {
                return Err(CliError::config("convergence.levels", "must increase strictly"));
            }
            if c.oracle_refine == 0 || c.velocity_ratio == 0 {
                return Err(CliError::config("convergence", "oracle_refine and velocity_ratio must be positive"));
            }
        }
        if let Some(c) = &self.counterexample {
            if c.deterministic_levels.len() < 2 || c.stochastic_levels.len() < 2 {
                return Err(CliError::config("counterexample", "each ladder needs at least 2 levels"));
            }
        }
        if let Some(p) = &self.paths {
            if p.dims.iter().any(|d| !(1..=2).contains(d)) {
                return Err(CliError::config("paths.dims", "dimensions must be 1 or 2"));
            }
            if p.paths == 0 || p.steps_per_delta == 0 {
                return Err(CliError::config("paths", "paths and steps_per_delta must be positive"));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> CliResult<ProblemSpec> {
        ProblemSpec::from_presets(self.dim, &self.flux, &self.field).map_err(CliError::from)
    }

    pub fn spatial_grid(&self) -> CliResult<SpatialGrid> {
        SpatialGrid::new(self.dim, self.grid.half_width, self.grid.cells).map_err(CliError::from)
    }

    /// Canonical JSON of the resolved configuration.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    pub fn pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        sha256_hex(self.canonical_json().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
