//! Run configuration: one JSON document covering model, solver, sweep and output.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use syk_lindblad::model::{ModelParams, PhaseState};
use syk_lindblad::solver::SolverConfig;
use syk_lindblad::sweep::{GridSettings, SweepSpec};

/// Initial data and sampling for the Heisenberg trajectories written by `free`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FreeSettings {
    /// `[X₊, P₋, X₋, P₊]` at t = 0.
    pub initial: [f64; 4],
    pub t_max: f64,
    pub samples: usize,
}

impl Default for FreeSettings {
    fn default() -> Self {
        Self {
            initial: [1.0, 0.0, 1.0, 0.0],
            t_max: 10.0,
            samples: 201,
        }
    }
}

impl FreeSettings {
    pub fn initial_state(&self) -> PhaseState {
        let [a, b, c, d] = self.initial;
        PhaseState::new(a, b, c, d)
    }
}

/// Top-level fields are authoritative: `model`, `solver`, `grid` and
/// `base_seed` overwrite their copies inside `sweep` on [`RunConfig::resolve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub solver: SolverConfig,
    pub grid: GridSettings,
    pub sweep: SweepSpec,
    pub free: FreeSettings,
    pub output_dir: PathBuf,
    pub base_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            solver: SolverConfig::default(),
            grid: GridSettings::default(),
            sweep: SweepSpec::default(),
            free: FreeSettings::default(),
            output_dir: PathBuf::from("out"),
            base_seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow::anyhow!("config line {} column {}: {e}", e.line(), e.column()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Copy the top-level settings into the sweep so both views agree.
    pub fn resolve(&mut self) {
        self.sweep.j = self.model.j;
        self.sweep.q = self.model.q;
        self.sweep.m = self.model.m;
        self.sweep.grid = self.grid;
        self.sweep.solver = self.solver.clone();
        self.sweep.base_seed = self.base_seed;
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate().context("model")?;
        self.solver.validate().context("solver")?;
        self.grid.build().context("grid")?;
        self.sweep.validate().context("sweep")?;
        if self.free.samples < 2 || !(self.free.t_max > 0.0) {
            anyhow::bail!("free: need samples >= 2 and t_max > 0");
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Write the resolved config as `config.json` in the output directory.
    pub fn write_resolved(&self) -> Result<PathBuf> {
        fs::create_dir_all(&self.output_dir)
            .with_context(|| format!("creating output directory {}", self.output_dir.display()))?;
        let path = self.output_dir.join("config.json");
        fs::write(&path, self.to_json() + "\n")?;
        Ok(path)
    }
}
