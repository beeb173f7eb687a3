//! On-disk formats: solution JSON + CSV pairs and the sweep tables.
//!
//! Floats in CSV files are written with 17 significant digits, so every value
//! reads back bit-for-bit.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use syk_lindblad::action::{action_density, ActionScheme, ActionValue};
use syk_lindblad::model::{free_green, heisenberg_evolve, ModelParams};
use syk_lindblad::observables::{extract_from, stationarity, ComponentFit, DecayFit};
use syk_lindblad::solver::{Init, SolutionRecord, SolverConfig};
use syk_lindblad::sweep::{Branch, Candidate, GridSettings, PhasePoint, Provenance};
use syk_lindblad::symmetry::{classify, SymmetryLabel, TwoPointFunction, COMPONENT_NAMES};
use syk_lindblad::timegrid::TimeGrid;

use crate::config::FreeSettings;

/// Float with 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violations {
    #[serde(rename = "KMS")]
    pub kms: f64,
    #[serde(rename = "CONJ")]
    pub conj: f64,
}

/// Metadata stored next to each solution's samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionMeta {
    pub id: String,
    pub csv: String,
    pub params: ModelParams,
    pub grid: GridSettings,
    pub solver: SolverConfig,
    pub init: String,
    pub provenance: Option<Provenance>,
    pub converged: bool,
    pub iterations: usize,
    pub final_update: f64,
    pub classify_tol: f64,
    pub label: SymmetryLabel,
    pub violations: Violations,
    pub window_fraction: f64,
    pub stationarity: Option<f64>,
    pub stationary: bool,
    pub action_scheme: ActionScheme,
    pub action: Option<ActionValue>,
    pub fits: Vec<ComponentFit>,
}

/// Settings that decide how derived quantities are recomputed.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub classify_tol: f64,
    pub window_fraction: f64,
    pub action_scheme: ActionScheme,
}

/// Write `solution-<id>.json` and `solution-<id>.csv` into `dir`.
pub fn write_solution(dir: &Path, id: &str, candidate: &Candidate, eval: Evaluation) -> Result<PathBuf> {
    let record = &candidate.record;
    let grid = record.grid();
    let csv_name = format!("solution-{id}.csv");
    write_samples(&dir.join(&csv_name), &record.g)?;
    let mut solver = record.config.clone();
    if matches!(solver.init, Init::Warm(_)) {
        solver.init = Init::default();
    }
    let meta = SolutionMeta {
        id: id.to_string(),
        csv: csv_name,
        params: record.params,
        grid: GridSettings {
            period: grid.period(),
            n_points: grid.n_points(),
        },
        solver,
        init: record.config.init.describe(),
        provenance: Some(candidate.provenance),
        converged: record.converged,
        iterations: record.iterations,
        final_update: record.final_update,
        classify_tol: eval.classify_tol,
        label: record.label,
        violations: Violations {
            kms: record.label.nu_k,
            conj: record.label.nu_c,
        },
        window_fraction: eval.window_fraction,
        stationarity: record.stationarity,
        stationary: candidate.stationary,
        action_scheme: eval.action_scheme,
        action: record.action,
        fits: candidate.fits.clone(),
    };
    let path = dir.join(format!("solution-{id}.json"));
    fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(path)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

/// Grid indices in order of increasing time.
fn ascending_times(grid: &TimeGrid) -> Vec<usize> {
    grid.ascending_frequency_order()
}

fn component_header() -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for name in COMPONENT_NAMES {
        h.push(format!("Re_G{name}"));
        h.push(format!("Im_G{name}"));
    }
    h
}

pub fn write_samples(path: &Path, g: &TwoPointFunction) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(component_header())?;
    let grid = g.grid();
    for k in ascending_times(grid) {
        let mut row = vec![fmt_f(grid.time(k))];
        for c in g.components() {
            row.push(fmt_f(c[k].re));
            row.push(fmt_f(c[k].im));
        }
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples(path: &Path, grid: &TimeGrid) -> Result<TwoPointFunction> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let n = grid.n_points();
    let mut comps: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]);
    let mut seen = vec![false; n];
    for (line, row) in r.records().enumerate() {
        let row = row?;
        if row.len() != 9 {
            bail!("{}: row {} has {} fields, expected 9", path.display(), line + 2, row.len());
        }
        let vals = row
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("{}: row {}", path.display(), line + 2))?;
        let k = grid.index_of(vals[0]);
        if seen[k] {
            bail!("{}: time {} appears twice", path.display(), vals[0]);
        }
        seen[k] = true;
        for (c, comp) in comps.iter_mut().enumerate() {
            comp[k] = Complex64::new(vals[1 + 2 * c], vals[2 + 2 * c]);
        }
    }
    if seen.iter().any(|s| !s) {
        bail!("{}: missing samples for a {n}-point grid", path.display());
    }
    Ok(TwoPointFunction::from_components(grid, comps)?)
}

/// A solution read back from disk with every derived quantity recomputed.
#[derive(Clone, Debug)]
pub struct StoredSolution {
    pub meta: SolutionMeta,
    pub record: SolutionRecord,
    pub fits: Vec<ComponentFit>,
}

pub fn read_solution(json_path: &Path) -> Result<StoredSolution> {
    let text = fs::read_to_string(json_path).with_context(|| format!("reading {}", json_path.display()))?;
    let meta: SolutionMeta =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", json_path.display()))?;
    let grid = meta.grid.build()?;
    let dir = json_path.parent().unwrap_or(Path::new("."));
    let g = read_samples(&dir.join(&meta.csv), &grid)?;
    let mut record = SolutionRecord::from_green(
        g,
        meta.params,
        meta.solver.clone(),
        meta.converged,
        meta.iterations,
        meta.final_update,
    )?;
    record.label = classify(&record.g, meta.classify_tol)?;
    record.stationarity = Some(stationarity(&record.g, meta.window_fraction)?.value);
    if meta.action.is_some() {
        record.action = Some(action_density(&record.g, &record.params, meta.action_scheme)?);
    }
    let fits = if meta.fits.is_empty() { Vec::new() } else { extract_from(&record.g) };
    Ok(StoredSolution { meta, record, fits })
}

/// All `solution-*.json` files in `dir`, sorted by name.
pub fn solution_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("solution-") && name.ends_with(".json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn fit_of<'a>(fits: &'a [ComponentFit], name: &str) -> Option<&'a DecayFit> {
    fits.iter().find(|f| f.component == name).and_then(|f| f.real.as_ref())
}

pub const BRANCH_HEADER: [&str; 11] = [
    "branch_id",
    "label",
    "v",
    "Re_action",
    "Im_action",
    "Gamma_pp",
    "Omega_pp",
    "Gamma_pm",
    "Omega_pm",
    "stationarity",
    "converged",
];

pub fn write_branches(path: &Path, branches: &[Branch]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(BRANCH_HEADER)?;
    for (id, branch) in branches.iter().enumerate() {
        for (v, c) in &branch.points {
            let action = c.action();
            let pp = fit_of(&c.fits, "pp");
            let pm = fit_of(&c.fits, "pm");
            w.write_record([
                id.to_string(),
                c.label().to_string(),
                fmt_f(*v),
                fmt_opt(action.map(|a| a.density.re)),
                fmt_opt(action.map(|a| a.density.im)),
                fmt_opt(pp.map(|f| f.decay_rate)),
                fmt_opt(pp.and_then(|f| f.frequency)),
                fmt_opt(pm.map(|f| f.decay_rate)),
                fmt_opt(pm.and_then(|f| f.frequency)),
                fmt_opt(c.record.stationarity),
                c.record.converged.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const PHASE_HEADER: [&str; 6] = ["gamma", "v", "solution_count", "labels", "dominant", "dominance_switch"];

pub fn write_phase(path: &Path, points: &[PhasePoint]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(PHASE_HEADER)?;
    for p in points {
        let labels: Vec<&str> = p.labels.iter().map(|l| l.as_str()).collect();
        w.write_record([
            fmt_f(p.gamma),
            fmt_f(p.v),
            p.solution_count.to_string(),
            labels.join(";"),
            p.dominant.map(|d| d.to_string()).unwrap_or_default(),
            p.dominance_switch.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Closed-form J = 0 two-point function over `grid`, ascending in t.
pub fn write_free_green(path: &Path, params: &ModelParams, grid: &TimeGrid) -> Result<()> {
    let g = TwoPointFunction::try_from_fn(grid, |a, b, t| free_green(params, a, b, t))?;
    write_samples(path, &g)
}

pub fn write_trajectories(path: &Path, params: &ModelParams, free: &FreeSettings) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["t".to_string()];
    for name in ["X_plus", "P_minus", "X_minus", "P_plus"] {
        header.push(format!("Re_{name}"));
        header.push(format!("Im_{name}"));
    }
    w.write_record(header)?;
    let initial = free.initial_state();
    for i in 0..free.samples {
        let t = free.t_max * i as f64 / (free.samples - 1) as f64;
        let mut row = vec![fmt_f(t)];
        for z in heisenberg_evolve(params, initial, t).as_array() {
            row.push(fmt_f(z.re));
            row.push(fmt_f(z.im));
        }
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub const FIT_HEADER: [&str; 9] = [
    "id",
    "component",
    "part",
    "oscillatory",
    "amplitude",
    "Gamma",
    "Omega",
    "fit_residual",
    "maxima_used",
];

pub fn write_fits(path: &Path, rows: &[(String, Vec<ComponentFit>)]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(FIT_HEADER)?;
    for (id, fits) in rows {
        for f in fits {
            for (part, fit) in [("re", &f.real), ("im", &f.imag)] {
                let Some(fit) = fit else { continue };
                w.write_record([
                    id.clone(),
                    f.component.clone(),
                    part.to_string(),
                    fit.oscillatory.to_string(),
                    fmt_f(fit.amplitude),
                    fmt_f(fit.decay_rate),
                    fmt_opt(fit.frequency),
                    fmt_f(fit.fit_residual),
                    fit.maxima_used.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Largest relative deviation between two optional fits.
pub fn fit_deviation(a: &[ComponentFit], b: &[ComponentFit]) -> f64 {
    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / x.abs().max(y.abs()).max(1e-300)
    }
    fn one(x: &Option<DecayFit>, y: &Option<DecayFit>) -> f64 {
        match (x, y) {
            (None, None) => 0.0,
            (Some(x), Some(y)) => {
                let f = match (x.frequency, y.frequency) {
                    (None, None) => 0.0,
                    (Some(p), Some(q)) => rel(p, q),
                    _ => f64::INFINITY,
                };
                rel(x.amplitude, y.amplitude).max(rel(x.decay_rate, y.decay_rate)).max(f)
            }
            _ => f64::INFINITY,
        }
    }
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| if x.component != y.component { f64::INFINITY } else { one(&x.real, &y.real).max(one(&x.imag, &y.imag)) })
        .fold(0.0, f64::max)
}

