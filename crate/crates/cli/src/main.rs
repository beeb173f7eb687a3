use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use syk_lindblad::action::ActionScheme;
use syk_lindblad_cli::config::RunConfig;
use syk_lindblad_cli::{cmd_fit, cmd_free, cmd_phase, cmd_scan, cmd_solve};

/// Schwinger-Dyson saddles of the dissipative bosonic SYK model.
#[derive(Parser)]
#[command(name = "syk-sd", version)]
struct Cli {
    /// Worker threads (falls back to SYK_SD_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find every stationary solution at one (γ, v).
    Solve(Overrides),
    /// Follow branches along the v list at fixed γ.
    Scan(Overrides),
    /// Tabulate multiplicities and dominance over the (γ, v) grid.
    Phase(Overrides),
    /// Write the closed-form free two-point function and trajectories.
    Free(Overrides),
    /// Re-fit decay rates and frequencies of stored solutions.
    Fit {
        /// Directory holding solution-*.json files (defaults to output_dir).
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

enum Verb {
    Solve,
    Scan,
    Phase,
    Free,
    Fit,
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("list entry {x:?}")))
        .collect()
}

fn parse_scheme(s: &str) -> Result<ActionScheme, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Flags named after config fields; each one replaces the loaded value.
#[derive(Args)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "J")]
    j: Option<f64>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    period: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    convergence_tol: Option<f64>,
    #[arg(long)]
    mixing: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    v_values: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    gamma_values: Option<String>,
    #[arg(long)]
    seeds_per_point: Option<usize>,
    #[arg(long)]
    dedup_tol: Option<f64>,
    #[arg(long)]
    stationarity_threshold: Option<f64>,
    #[arg(long, value_parser = parse_scheme)]
    action_scheme: Option<ActionScheme>,
}

macro_rules! set {
    ($src:expr => $dst:expr) => {
        if let Some(x) = $src {
            $dst = x;
        }
    };
}

impl Overrides {
    fn load(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        set!(self.output_dir => cfg.output_dir);
        set!(self.base_seed => cfg.base_seed);
        set!(self.m => cfg.model.m);
        set!(self.v => cfg.model.v);
        set!(self.gamma => cfg.model.gamma);
        set!(self.j => cfg.model.j);
        set!(self.q => cfg.model.q);
        set!(self.period => cfg.grid.period);
        set!(self.n_points => cfg.grid.n_points);
        set!(self.alpha => cfg.solver.alpha);
        set!(self.max_iterations => cfg.solver.max_iterations);
        set!(self.convergence_tol => cfg.solver.convergence_tol);
        set!(self.mixing => cfg.solver.mixing);
        set!(self.epsilon => cfg.solver.epsilon);
        set!(self.v_values.as_deref().map(parse_list).transpose()? => cfg.sweep.v_values);
        set!(self.gamma_values.as_deref().map(parse_list).transpose()? => cfg.sweep.gamma_values);
        set!(self.seeds_per_point => cfg.sweep.seeds_per_point);
        set!(self.dedup_tol => cfg.sweep.dedup_tol);
        set!(self.stationarity_threshold => cfg.sweep.stationarity_threshold);
        set!(self.action_scheme => cfg.sweep.action_scheme);
        cfg.resolve();
        cfg.validate()?;
        Ok(cfg)
    }
}

fn worker_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("SYK_SD_WORKERS") {
        Ok(s) => Ok(Some(s.trim().parse().with_context(|| format!("SYK_SD_WORKERS={s:?}"))?)),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (verb, overrides, input) = match cli.command {
        Command::Solve(o) => (Verb::Solve, o, None),
        Command::Scan(o) => (Verb::Scan, o, None),
        Command::Phase(o) => (Verb::Phase, o, None),
        Command::Free(o) => (Verb::Free, o, None),
        Command::Fit { input, overrides } => (Verb::Fit, overrides, input),
    };
    let setup = || -> Result<(rayon::ThreadPool, RunConfig)> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = worker_count(cli.workers)? {
            anyhow::ensure!(n > 0, "worker count must be positive");
            builder = builder.num_threads(n);
        }
        Ok((builder.build()?, overrides.load()?))
    };
    let (pool, cfg) = match setup() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| match verb {
        Verb::Solve => cmd_solve(&cfg),
        Verb::Scan => cmd_scan(&cfg),
        Verb::Phase => cmd_phase(&cfg),
        Verb::Free => cmd_free(&cfg),
        Verb::Fit => cmd_fit(&cfg, input.as_deref().unwrap_or(&cfg.output_dir)),
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
