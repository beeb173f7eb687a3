//! Command implementations behind the `syk-sd` binary.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod io;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use syk_lindblad::sweep::{
    continuation_scan, phase_diagram, solve_point, Column, Discovery, SymmetrySeeded,
};

use crate::config::RunConfig;
use crate::io::Evaluation;

/// Process exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    NothingFound,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::NothingFound => 2,
        }
    }
}

fn found(any: bool) -> Outcome {
    if any {
        Outcome::Success
    } else {
        Outcome::NothingFound
    }
}

fn evaluation(cfg: &RunConfig) -> Evaluation {
    Evaluation {
        classify_tol: cfg.sweep.classify_tol,
        window_fraction: cfg.sweep.window_fraction,
        action_scheme: cfg.sweep.action_scheme,
    }
}

fn prepare(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.write_resolved()?;
    Ok(cfg.output_dir.clone())
}

/// Every converged solution at the configured model point; non-stationary
/// ones are written too and flagged in their metadata.
pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome> {
    let dir = prepare(cfg)?;
    let candidates = solve_point(&cfg.model, &cfg.sweep)?;
    for (i, c) in candidates.iter().enumerate() {
        io::write_solution(&dir, &format!("{i:03}-{}", c.label()), c, evaluation(cfg))?;
    }
    let stationary = candidates.iter().filter(|c| c.stationary).count();
    eprintln!(
        "{} solution(s), {stationary} stationary, written to {}",
        candidates.len(),
        dir.display()
    );
    Ok(found(stationary > 0))
}

/// Branches along `sweep.v_values` at the model's γ, written to `branches.csv`.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let dir = prepare(cfg)?;
    let gamma = cfg.model.gamma;
    let prior: Column = if cfg.sweep.discovery.iter().any(|d| d == "symmetry-seeded") {
        SymmetrySeeded.discover(&cfg.sweep, gamma, 0, &Column::new())?
    } else {
        Column::new()
    };
    let branches = continuation_scan(&cfg.sweep, gamma, 0, &prior)?;
    io::write_branches(&dir.join("branches.csv"), &branches)?;
    eprintln!("{} branch(es) written to {}", branches.len(), dir.display());
    Ok(found(!branches.is_empty()))
}

/// Multiplicities, labels and dominance over the (γ, v) grid.
pub fn cmd_phase(cfg: &RunConfig) -> Result<Outcome> {
    let dir = prepare(cfg)?;
    let (_, points) = phase_diagram(&cfg.sweep)?;
    io::write_phase(&dir.join("phase.csv"), &points)?;
    eprintln!("{} grid point(s) written to {}", points.len(), dir.display());
    Ok(found(points.iter().any(|p| p.solution_count > 0)))
}

/// Closed-form free two-point function and Heisenberg trajectories.
pub fn cmd_free(cfg: &RunConfig) -> Result<Outcome> {
    let params = cfg.model.non_interacting();
    if params.v <= 0.0 {
        bail!("the free two-point function needs v > 0, got v = {}", params.v);
    }
    let dir = prepare(cfg)?;
    io::write_free_green(&dir.join("free_green.csv"), &params, &cfg.grid.build()?)?;
    io::write_trajectories(&dir.join("trajectories.csv"), &params, &cfg.free)?;
    Ok(Outcome::Success)
}

/// Re-read stored solutions from `input`, recompute their fits and write `fits.csv`.
pub fn cmd_fit(cfg: &RunConfig, input: &Path) -> Result<Outcome> {
    let files = io::solution_files(input)?;
    let dir = prepare(cfg)?;
    let mut rows = Vec::new();
    for path in &files {
        let stored = io::read_solution(path).with_context(|| format!("loading {}", path.display()))?;
        let fits = syk_lindblad::observables::extract_from(&stored.record.g);
        let dev = io::fit_deviation(&fits, &stored.meta.fits);
        if !stored.meta.fits.is_empty() && dev > 1e-9 {
            eprintln!("{}: refit differs from stored fits (max relative deviation {dev:.3e})", stored.meta.id);
        }
        rows.push((stored.meta.id, fits));
    }
    io::write_fits(&dir.join("fits.csv"), &rows)?;
    eprintln!("{} solution(s) refitted into {}", rows.len(), dir.display());
    Ok(found(!rows.is_empty()))
}
