//! Solution discovery over `(γ, v)`: multi-seed symmetry-enforced searches,
//! continuation along v, deduplication modulo symmetry images, and
//! phase-diagram assembly.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{action_density, dominant_by, ActionScheme, ActionValue};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::observables::{
    extract_from, stationarity, ComponentFit, DEFAULT_STATIONARITY_THRESHOLD, DEFAULT_WINDOW_FRACTION,
};
use crate::registry::{Named, Registry};
use crate::solver::{iterate, Init, SolutionRecord, SolverConfig};
use crate::symmetry::{classify, orbit_distance, relative_distance, LabelKind, Symmetry};
use crate::timegrid::TimeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Continuation {
    #[serde(rename = "NONE")]
    None,
    #[serde(rename = "BIDIRECTIONAL")]
    Bidirectional,
}

/// Where the continuation scan starts its branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContinuationSeeds {
    /// Multi-seed solves at the first and last v only.
    #[serde(rename = "ENDPOINTS")]
    Endpoints,
    /// The endpoints plus every stationary solution already found along the column.
    #[serde(rename = "ALL")]
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSettings {
    pub period: f64,
    pub n_points: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            period: 50.0,
            n_points: 4096,
        }
    }
}

impl GridSettings {
    pub fn build(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.period, self.n_points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    #[serde(rename = "J")]
    pub j: f64,
    pub q: u32,
    pub m: f64,
    pub v_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub seeds_per_point: usize,
    pub enforcement_set: Vec<Vec<Symmetry>>,
    pub continuation: Continuation,
    pub continuation_seeds: ContinuationSeeds,
    /// Largest number of equal sub-steps tried when a warm start fails.
    pub max_substeps: usize,
    /// Discovery strategies to combine, by registered name.
    pub discovery: Vec<String>,
    /// Ansatz amplitudes cycled through by trial index.
    pub amplitudes: Vec<f64>,
    /// Ansatz envelope times cycled through by trial index.
    pub envelope_taus: Vec<f64>,
    pub grid: GridSettings,
    pub solver: SolverConfig,
    pub base_seed: u64,
    pub dedup_tol: f64,
    pub classify_tol: f64,
    pub stationarity_threshold: f64,
    pub window_fraction: f64,
    pub action_scheme: ActionScheme,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            j: 5.0,
            q: 4,
            m: 1.0,
            v_values: (-5..=5).map(f64::from).collect(),
            gamma_values: vec![0.5, 1.0, 2.0, 3.0, 4.0],
            seeds_per_point: 8,
            enforcement_set: vec![
                vec![],
                vec![Symmetry::Kms],
                vec![Symmetry::Conj],
                vec![Symmetry::Kms, Symmetry::Conj],
            ],
            continuation: Continuation::Bidirectional,
            continuation_seeds: ContinuationSeeds::All,
            max_substeps: 8,
            discovery: vec!["symmetry-seeded".into(), "continuation".into()],
            amplitudes: vec![0.1, 1.0, 0.3, 2.0],
            envelope_taus: vec![3.0, 0.5, 10.0, 1.0],
            grid: GridSettings::default(),
            solver: SolverConfig::default(),
            base_seed: 0,
            dedup_tol: 1e-4,
            classify_tol: crate::symmetry::DEFAULT_CLASSIFY_TOL,
            stationarity_threshold: DEFAULT_STATIONARITY_THRESHOLD,
            window_fraction: DEFAULT_WINDOW_FRACTION,
            action_scheme: ActionScheme::Raw,
        }
    }
}

impl SweepSpec {
    pub fn params(&self, v: f64, gamma: f64) -> Result<ModelParams> {
        ModelParams::new(self.m, v, gamma, self.j, self.q)
    }

    pub fn validate(&self) -> Result<()> {
        self.params(0.0, 0.0)?;
        self.solver.validate()?;
        self.grid.build()?;
        if self.v_values.is_empty() {
            return Err(Error::InvalidParameter("v_values is empty".into()));
        }
        if self.gamma_values.is_empty() {
            return Err(Error::InvalidParameter("gamma_values is empty".into()));
        }
        if let Some(g) = self.gamma_values.iter().find(|g| !(**g >= 0.0)) {
            return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {g}")));
        }
        if self.continuation != Continuation::None {
            let up = self.v_values.windows(2).all(|w| w[1] > w[0]);
            let down = self.v_values.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return Err(Error::InvalidParameter(
                    "v_values must be strictly monotone for continuation".into(),
                ));
            }
        }
        if self.amplitudes.is_empty() || self.envelope_taus.is_empty() {
            return Err(Error::InvalidParameter("amplitudes and envelope_taus must be non-empty".into()));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction < 0.5) {
            return Err(Error::InvalidParameter("window_fraction must lie in (0, 0.5)".into()));
        }
        for name in &self.discovery {
            discovery_registry().get(name)?;
        }
        Ok(())
    }

    /// Starting point for trial `trial` at the point with global index `point`.
    pub fn random_init(&self, point: u64, trial: usize) -> Init {
        let na = self.amplitudes.len();
        Init::Random {
            seed: point_seed(self.base_seed, point, trial as u64),
            amplitude: self.amplitudes[trial % na],
            envelope_tau: self.envelope_taus[(trial / na) % self.envelope_taus.len()],
        }
    }
}

/// Mix `(base, point, trial)` into one RNG seed.
pub fn point_seed(base: u64, point: u64, trial: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(splitmix(splitmix(base) ^ point) ^ trial)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "CONTINUATION")]
    Continuation,
    #[serde(rename = "SYMMETRY_SEEDED")]
    SymmetrySeeded,
}

/// A converged solution with its filters and observables evaluated.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub record: SolutionRecord,
    pub provenance: Provenance,
    pub stationary: bool,
    pub fits: Vec<ComponentFit>,
}

impl Candidate {
    pub fn label(&self) -> LabelKind {
        self.record.label.kind
    }

    pub fn action(&self) -> Option<ActionValue> {
        self.record.action
    }
}

/// Relabel and attach stationarity; actions and fits only for stationary records.
pub fn evaluate(mut record: SolutionRecord, spec: &SweepSpec, provenance: Provenance) -> Result<Candidate> {
    record.label = classify(&record.g, spec.classify_tol)?;
    let st = stationarity(&record.g, spec.window_fraction)?.value;
    record.stationarity = Some(st);
    let stationary = record.converged && st <= spec.stationarity_threshold;
    let mut fits = Vec::new();
    if stationary {
        record.action = action_density(&record.g, &record.params, spec.action_scheme).ok();
        fits = extract_from(&record.g);
    }
    Ok(Candidate {
        record,
        provenance,
        stationary,
        fits,
    })
}

/// Append `c` unless it coincides with an earlier entry modulo symmetry images.
pub fn push_unique(list: &mut Vec<Candidate>, c: Candidate, tol: f64) -> bool {
    if list.iter().any(|o| orbit_distance(&o.record.g, &c.record.g) <= tol) {
        return false;
    }
    list.push(c);
    true
}

/// Multi-seed solve at one point; converged records, deduplicated, in trial order.
pub fn seeded_solutions(params: &ModelParams, spec: &SweepSpec, grid: &TimeGrid, point: u64) -> Vec<Candidate> {
    let jobs: Vec<(usize, Vec<Symmetry>)> = spec
        .enforcement_set
        .iter()
        .enumerate()
        .flat_map(|(e, enf)| (0..spec.seeds_per_point).map(move |s| (e * spec.seeds_per_point + s, enf.clone())))
        .collect();
    let results: Vec<Option<Candidate>> = jobs
        .par_iter()
        .map(|(trial, enf)| {
            let cfg = spec
                .solver
                .clone()
                .with_enforce(enf.clone())
                .with_init(spec.random_init(point, *trial));
            let rec = iterate(params, &cfg, grid).ok()?;
            if !rec.converged {
                return None;
            }
            evaluate(rec, spec, Provenance::SymmetrySeeded).ok()
        })
        .collect();
    let mut out = Vec::new();
    for c in results.into_iter().flatten() {
        push_unique(&mut out, c, spec.dedup_tol);
    }
    out
}

/// A solution followed across neighbouring v values.
#[derive(Clone, Debug)]
pub struct Branch {
    pub label: LabelKind,
    pub points: Vec<(f64, Candidate)>,
    pub provenance: Provenance,
}

/// Relative L2 jump above which consecutive points are not one branch.
pub const CONTINUITY_BOUND: f64 = 0.5;

fn warm_solve(
    from: &Candidate,
    v_from: f64,
    v_to: f64,
    gamma: f64,
    spec: &SweepSpec,
    grid: &TimeGrid,
) -> Option<SolutionRecord> {
    let enforce = from.label().symmetries();
    let mut substeps = 1;
    while substeps <= spec.max_substeps.max(1) {
        let mut g = Arc::new(from.record.g.clone());
        let mut last = None;
        let mut ok = true;
        for s in 1..=substeps {
            let v = v_from + (v_to - v_from) * s as f64 / substeps as f64;
            let params = spec.params(v, gamma).ok()?;
            let cfg = spec.solver.clone().with_enforce(enforce.clone()).with_init(Init::Warm(g.clone()));
            match iterate(&params, &cfg, grid) {
                Ok(r) if r.converged && relative_distance(&r.g, &g) < CONTINUITY_BOUND => {
                    g = Arc::new(r.g.clone());
                    last = Some(r);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return last;
        }
        substeps *= 2;
    }
    None
}

/// Follow `seed` (sitting at `v_values[start]`) in direction `dir` (±1).
fn march(
    seed: &Candidate,
    start: usize,
    dir: isize,
    gamma: f64,
    spec: &SweepSpec,
    grid: &TimeGrid,
) -> Vec<(usize, Candidate)> {
    let mut out = Vec::new();
    let mut current = seed.clone();
    let mut i = start as isize;
    loop {
        let next = i + dir;
        if next < 0 || next as usize >= spec.v_values.len() {
            break;
        }
        let (v_from, v_to) = (spec.v_values[i as usize], spec.v_values[next as usize]);
        let Some(rec) = warm_solve(&current, v_from, v_to, gamma, spec, grid) else {
            break;
        };
        let Ok(c) = evaluate(rec, spec, Provenance::Continuation) else {
            break;
        };
        if c.label() != current.label() || relative_distance(&c.record.g, &current.record.g) >= CONTINUITY_BOUND {
            break;
        }
        let stationary = c.stationary;
        out.push((next as usize, c.clone()));
        if !stationary {
            break;
        }
        current = c;
        i = next;
    }
    out
}

/// Bidirectional continuation along `spec.v_values` at fixed γ.
///
/// Branches start from multi-seed solutions at both ends of the v range and,
/// with [`ContinuationSeeds::All`], from every stationary entry of `prior`
/// (candidates already found along the column, indexed like `v_values`).
/// Endpoints already covered by `prior` are not solved again.
pub fn continuation_scan(spec: &SweepSpec, gamma: f64, gamma_index: usize, prior: &[Vec<Candidate>]) -> Result<Vec<Branch>> {
    if spec.continuation != Continuation::Bidirectional {
        return Err(Error::InvalidParameter("continuation_scan needs BIDIRECTIONAL continuation".into()));
    }
    let grid = spec.grid.build()?;
    let nv = spec.v_values.len();
    let known = |i: usize| prior.get(i).map(|p| !p.is_empty()).unwrap_or(false);
    let mut endpoints = vec![0];
    if nv > 1 {
        endpoints.push(nv - 1);
    }
    let solved: Vec<Vec<(usize, Candidate)>> = endpoints
        .par_iter()
        .filter(|&&i| !known(i))
        .map(|&i| -> Result<Vec<(usize, Candidate)>> {
            let params = spec.params(spec.v_values[i], gamma)?;
            let point = (gamma_index * nv + i) as u64;
            Ok(seeded_solutions(&params, spec, &grid, point)
                .into_iter()
                .map(|c| (i, c))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seeds: Vec<(usize, Candidate)> = Vec::new();
    for i in 0..nv {
        let from_prior = spec.continuation_seeds == ContinuationSeeds::All || endpoints.contains(&i);
        if from_prior {
            if let Some(p) = prior.get(i) {
                seeds.extend(p.iter().map(|c| (i, c.clone())));
            }
        }
        for batch in &solved {
            seeds.extend(batch.iter().filter(|(k, _)| *k == i).cloned());
        }
    }
    seeds.retain(|(_, c)| c.stationary);

    let raw: Vec<Branch> = seeds
        .par_iter()
        .map(|(i, seed)| {
            let (down, up) = rayon::join(
                || march(seed, *i, -1, gamma, spec, &grid),
                || march(seed, *i, 1, gamma, spec, &grid),
            );
            let mut points: Vec<(f64, Candidate)> = down
                .into_iter()
                .rev()
                .map(|(k, c)| (spec.v_values[k], c))
                .collect();
            points.push((spec.v_values[*i], seed.clone()));
            points.extend(up.into_iter().map(|(k, c)| (spec.v_values[k], c)));
            Branch {
                label: seed.label(),
                points,
                provenance: Provenance::Continuation,
            }
        })
        .collect();

    // Later branches are cut where they run into an earlier one.
    let mut branches: Vec<Branch> = Vec::new();
    for (b, (si, _)) in raw.into_iter().zip(&seeds) {
        let seed_v = spec.v_values[*si];
        let seen = |v: f64, c: &Candidate, kept: &[Branch]| {
            kept.iter().any(|k| {
                k.points
                    .iter()
                    .any(|(kv, kc)| *kv == v && orbit_distance(&kc.record.g, &c.record.g) <= spec.dedup_tol)
            })
        };
        let pos = b.points.iter().position(|(v, _)| *v == seed_v).expect("seed point present");
        if seen(b.points[pos].0, &b.points[pos].1, &branches) {
            continue;
        }
        let mut lo = pos;
        while lo > 0 && !seen(b.points[lo - 1].0, &b.points[lo - 1].1, &branches) {
            lo -= 1;
        }
        let mut hi = pos;
        while hi + 1 < b.points.len() && !seen(b.points[hi + 1].0, &b.points[hi + 1].1, &branches) {
            hi += 1;
        }
        let mut b = b;
        b.points = b.points.drain(lo..=hi).collect();
        branches.push(b);
    }
    Ok(branches)
}

/// Converged candidates found along one γ column, indexed like `spec.v_values`.
pub type Column = Vec<Vec<Candidate>>;

/// A way of generating candidate solutions along a γ column.
pub trait Discovery: Named + Send + Sync {
    /// `prior` holds what earlier strategies in the same run already found.
    fn discover(&self, spec: &SweepSpec, gamma: f64, gamma_index: usize, prior: &Column) -> Result<Column>;
}

/// Random starts under every enforcement subset at every v.
pub struct SymmetrySeeded;

impl Named for SymmetrySeeded {
    fn name(&self) -> &'static str {
        "symmetry-seeded"
    }
}

impl Discovery for SymmetrySeeded {
    fn discover(&self, spec: &SweepSpec, gamma: f64, gamma_index: usize, _prior: &Column) -> Result<Column> {
        let grid = spec.grid.build()?;
        let nv = spec.v_values.len();
        (0..nv)
            .into_par_iter()
            .map(|i| {
                let params = spec.params(spec.v_values[i], gamma)?;
                Ok(seeded_solutions(&params, spec, &grid, (gamma_index * nv + i) as u64))
            })
            .collect()
    }
}

/// Branches from [`continuation_scan`], split back into points.
pub struct ContinuationDiscovery;

impl Named for ContinuationDiscovery {
    fn name(&self) -> &'static str {
        "continuation"
    }
}

impl Discovery for ContinuationDiscovery {
    fn discover(&self, spec: &SweepSpec, gamma: f64, gamma_index: usize, prior: &Column) -> Result<Column> {
        let mut column: Column = vec![Vec::new(); spec.v_values.len()];
        if spec.continuation == Continuation::None {
            return Ok(column);
        }
        for branch in continuation_scan(spec, gamma, gamma_index, prior)? {
            for (v, c) in branch.points {
                let i = spec.v_values.iter().position(|x| *x == v).expect("branch v on grid");
                push_unique(&mut column[i], c, spec.dedup_tol);
            }
        }
        Ok(column)
    }
}

pub fn discovery_registry() -> &'static Registry<dyn Discovery> {
    static REGISTRY: OnceLock<Registry<dyn Discovery>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        Registry::new("discovery strategy")
            .with(Box::new(SymmetrySeeded) as Box<dyn Discovery>)
            .with(Box::new(ContinuationDiscovery))
    })
}

/// Everything found at one `(γ, v)`.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub gamma: f64,
    pub v: f64,
    /// Deduplicated converged candidates, stationary or not.
    pub candidates: Vec<Candidate>,
}

impl PointResult {
    pub fn stationary(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.stationary)
    }

    pub fn stationary_records(&self) -> Vec<SolutionRecord> {
        self.stationary().map(|c| c.record.clone()).collect()
    }

    /// Index into `stationary()` of the dominant saddle, if any has an action.
    pub fn dominant(&self) -> Option<(LabelKind, bool)> {
        let ranked: Vec<_> = self
            .stationary()
            .filter_map(|c| c.action().map(|a| (a.density, c.label())))
            .collect();
        let d = dominant_by(&ranked).ok()?;
        Some((ranked[d.index].1, d.tie))
    }
}

/// Run every configured discovery strategy along one γ column and merge.
pub fn solve_column(spec: &SweepSpec, gamma: f64, gamma_index: usize) -> Result<Vec<PointResult>> {
    spec.validate()?;
    let mut merged: Column = vec![Vec::new(); spec.v_values.len()];
    for name in &spec.discovery {
        let column = discovery_registry().get(name)?.discover(spec, gamma, gamma_index, &merged)?;
        for (slot, found) in merged.iter_mut().zip(column) {
            for c in found {
                push_unique(slot, c, spec.dedup_tol);
            }
        }
    }
    Ok(spec
        .v_values
        .iter()
        .zip(merged)
        .map(|(&v, candidates)| PointResult { gamma, v, candidates })
        .collect())
}

/// All distinct converged solutions at one point.
///
/// With continuation enabled the point is inserted into `spec.v_values` and
/// the whole column is scanned, so neighbours can feed warm starts.
pub fn solve_point(params: &ModelParams, spec: &SweepSpec) -> Result<Vec<Candidate>> {
    params.validate()?;
    let mut spec = spec.clone();
    spec.j = params.j;
    spec.q = params.q;
    spec.m = params.m;
    spec.gamma_values = vec![params.gamma];
    let uses_continuation =
        spec.continuation == Continuation::Bidirectional && spec.discovery.iter().any(|d| d == "continuation");
    if uses_continuation {
        if !spec.v_values.contains(&params.v) {
            spec.v_values.push(params.v);
            spec.v_values.sort_by(f64::total_cmp);
        }
    } else {
        spec.v_values = vec![params.v];
    }
    let column = solve_column(&spec, params.gamma, 0)?;
    Ok(column
        .into_iter()
        .find(|p| p.v == params.v)
        .map(|p| p.candidates)
        .unwrap_or_default())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub gamma: f64,
    pub v: f64,
    pub solution_count: usize,
    pub labels: Vec<LabelKind>,
    pub dominant: Option<LabelKind>,
    pub dominance_tie: bool,
    pub dominance_switch: bool,
}

/// Summarize solved columns; a switch is flagged where the dominant label
/// differs from the previous v in the same column.
pub fn phase_points(columns: &[Vec<PointResult>]) -> Vec<PhasePoint> {
    let mut out = Vec::new();
    for column in columns {
        let mut previous: Option<LabelKind> = None;
        for p in column {
            let mut labels: Vec<LabelKind> = p.stationary().map(|c| c.label()).collect();
            labels.sort();
            labels.dedup();
            let dom = p.dominant();
            let dominant = dom.map(|d| d.0);
            let switch = matches!((previous, dominant), (Some(a), Some(b)) if a != b);
            if dominant.is_some() {
                previous = dominant;
            }
            out.push(PhasePoint {
                gamma: p.gamma,
                v: p.v,
                solution_count: p.stationary().count(),
                labels,
                dominant,
                dominance_tie: dom.map(|d| d.1).unwrap_or(false),
                dominance_switch: switch,
            });
        }
    }
    out
}

/// Solve every γ column (in parallel) and summarize.
pub fn phase_diagram(spec: &SweepSpec) -> Result<(Vec<Vec<PointResult>>, Vec<PhasePoint>)> {
    spec.validate()?;
    let columns = spec
        .gamma_values
        .par_iter()
        .enumerate()
        .map(|(gi, &gamma)| solve_column(spec, gamma, gi))
        .collect::<Result<Vec<_>>>()?;
    let points = phase_points(&columns);
    Ok((columns, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            j: 1.0,
            v_values: vec![-3.0, -2.0],
            gamma_values: vec![2.0],
            seeds_per_point: 2,
            grid: GridSettings {
                period: 50.0,
                n_points: 512,
            },
            ..Default::default()
        }
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(point_seed(1, 2, 3), point_seed(1, 2, 3));
        assert_ne!(point_seed(1, 2, 3), point_seed(1, 3, 2));
        assert_ne!(point_seed(0, 0, 0), point_seed(1, 0, 0));
    }

    #[test]
    fn validation() {
        let mut s = small_spec();
        assert!(s.validate().is_ok());
        s.v_values = vec![1.0, 0.0, 2.0];
        assert!(s.validate().is_err());
        s.continuation = Continuation::None;
        assert!(s.validate().is_ok());
        s.v_values.clear();
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.discovery = vec!["annealing".into()];
        assert!(matches!(s.validate(), Err(Error::UnknownStrategy { .. })));
        let mut s = small_spec();
        s.q = 3;
        assert!(s.validate().is_err());
    }

    #[test]
    fn weak_coupling_column_has_single_kc_branch() {
        let spec = small_spec();
        let branches = continuation_scan(&spec, 2.0, 0, &[]).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].label, LabelKind::KC);
        assert_eq!(branches[0].points.len(), 2);
        let column = solve_column(&spec, 2.0, 0).unwrap();
        for p in &column {
            assert_eq!(p.stationary().count(), 1);
        }
        let phase = phase_points(&[column]);
        assert!(phase.iter().all(|p| p.dominant == Some(LabelKind::KC) && !p.dominance_switch));
    }

    #[test]
    fn single_v_degenerates_to_point_solve() {
        let mut spec = small_spec();
        spec.v_values = vec![-2.0];
        let params = spec.params(-2.0, 2.0).unwrap();
        let found = solve_point(&params, &spec).unwrap();
        assert_eq!(found.iter().filter(|c| c.stationary).count(), 1);
    }

    #[test]
    fn deterministic_results() {
        let spec = small_spec();
        let a = solve_column(&spec, 2.0, 0).unwrap();
        let b = solve_column(&spec, 2.0, 0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.candidates.len(), y.candidates.len());
            for (c, d) in x.candidates.iter().zip(&y.candidates) {
                assert_eq!(c.record.g, d.record.g);
            }
        }
    }
}
