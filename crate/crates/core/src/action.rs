//! On-shell action density and dominance among coexisting saddles.
//!
//! ```text
//! logdet_part      = -½ (1/T) Σ_j [log det D(ω_j) - ref_j]
//! interaction_part = dt Σ_k Σ_ab (J²/4)(q-1) s_ab G_ab(t_k)^q
//! ```
//!
//! Both parts are per unit time. The logarithm is continued along ascending
//! ω starting from the principal branch at the most negative frequency.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{s_ab, ContourIndex, ModelParams};
use crate::solver::{kernel_spectrum, self_energy, SolutionRecord, SINGULAR_DET};
use crate::symmetry::{LabelKind, TwoPointFunction};

/// Largest adjacent phase step accepted by the unwrapper.
pub const MAX_PHASE_JUMP: f64 = PI / 2.0;

/// Re(density) differences below this count as ties in [`dominant`].
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionScheme {
    #[default]
    #[serde(rename = "RAW")]
    Raw,
    #[serde(rename = "FREE_SUBTRACTED")]
    FreeSubtracted,
}

impl fmt::Display for ActionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionScheme::Raw => "RAW",
            ActionScheme::FreeSubtracted => "FREE_SUBTRACTED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionValue {
    pub density: Complex64,
    pub logdet_part: Complex64,
    pub interaction_part: Complex64,
    pub scheme: ActionScheme,
}

/// Continuous logarithm of `values`, which must be ordered along a path.
///
/// `abscissa` labels each sample for error reporting.
pub fn unwrapped_log(values: &[Complex64], abscissa: &[f64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(values.len());
    let mut phase = 0.0;
    let mut previous: Option<f64> = None;
    for (z, &x) in values.iter().zip(abscissa) {
        let arg = z.arg();
        phase = match previous {
            None => arg,
            Some(prev_arg) => {
                let mut step = arg - prev_arg;
                step -= 2.0 * PI * ((step + PI) / (2.0 * PI)).floor();
                if step == -PI {
                    step = PI;
                }
                if step.abs() > MAX_PHASE_JUMP {
                    return Err(Error::UnwrapFailure { omega: x, jump: step });
                }
                phase + step
            }
        };
        previous = Some(arg);
        out.push(Complex64::new(z.norm().ln(), phase));
    }
    Ok(out)
}

fn log_det_sum(g: &TwoPointFunction, params: &ModelParams) -> Result<Complex64> {
    let grid = g.grid();
    let sigma = self_energy(g, params)?;
    let kernel = kernel_spectrum(&sigma, params);
    let order = grid.ascending_frequency_order();
    let mut dets = Vec::with_capacity(order.len());
    let mut omegas = Vec::with_capacity(order.len());
    for &j in &order {
        let det = kernel[j].det();
        if det.norm() < SINGULAR_DET {
            return Err(Error::SingularKernel {
                omega: grid.frequency(j),
                det: det.norm(),
            });
        }
        dets.push(det);
        omegas.push(grid.frequency(j));
    }
    Ok(unwrapped_log(&dets, &omegas)?.into_iter().sum())
}

fn log_det_ratio_sum(g: &TwoPointFunction, params: &ModelParams) -> Result<Complex64> {
    let grid = g.grid();
    let free = params.non_interacting();
    let kernel = kernel_spectrum(&self_energy(g, params)?, params);
    let reference = kernel_spectrum(&self_energy(&TwoPointFunction::zeros(grid), &free)?, &free);
    let order = grid.ascending_frequency_order();
    let mut ratios = Vec::with_capacity(order.len());
    let mut omegas = Vec::with_capacity(order.len());
    for &j in &order {
        let (det, det0) = (kernel[j].det(), reference[j].det());
        for d in [det, det0] {
            if d.norm() < SINGULAR_DET {
                return Err(Error::SingularKernel {
                    omega: grid.frequency(j),
                    det: d.norm(),
                });
            }
        }
        ratios.push(det / det0);
        omegas.push(grid.frequency(j));
    }
    Ok(unwrapped_log(&ratios, &omegas)?.into_iter().sum())
}

/// `dt Σ_k Σ_ab (J²/4)(q-1) s_ab G_ab(t_k)^q`.
pub fn interaction_part(g: &TwoPointFunction, params: &ModelParams) -> Complex64 {
    if params.j == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let pref = params.j * params.j / 4.0 * (params.q as f64 - 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for a in ContourIndex::BOTH {
        for b in ContourIndex::BOTH {
            let s: Complex64 = g.component(a, b).iter().map(|x| x.powu(params.q)).sum();
            total += s * s_ab(a, b);
        }
    }
    total * pref * g.grid().dt()
}

/// Action density of an arbitrary two-point function.
pub fn action_density(g: &TwoPointFunction, params: &ModelParams, scheme: ActionScheme) -> Result<ActionValue> {
    let sum = match scheme {
        ActionScheme::Raw => log_det_sum(g, params)?,
        ActionScheme::FreeSubtracted => log_det_ratio_sum(g, params)?,
    };
    let logdet_part = -0.5 * sum / g.grid().period();
    let interaction_part = interaction_part(g, params);
    Ok(ActionValue {
        density: logdet_part + interaction_part,
        logdet_part,
        interaction_part,
        scheme,
    })
}

pub fn on_shell_action(record: &SolutionRecord, scheme: ActionScheme) -> Result<ActionValue> {
    if !record.converged {
        return Err(Error::NotConverged);
    }
    action_density(&record.g, &record.params, scheme)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dominance {
    pub index: usize,
    /// Another candidate lies within [`TIE_TOL`] of the winner.
    pub tie: bool,
}

/// Index of the largest Re(density); near-ties go to the more symmetric label.
pub fn dominant_by(candidates: &[(Complex64, LabelKind)]) -> Result<Dominance> {
    if candidates.is_empty() {
        return Err(Error::Empty("no solutions to rank"));
    }
    let best = candidates.iter().map(|c| c.0.re).fold(f64::NEG_INFINITY, f64::max);
    let near: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].0.re >= best - TIE_TOL)
        .collect();
    let index = *near
        .iter()
        .max_by(|&&i, &&j| {
            candidates[i]
                .1
                .symmetry_rank()
                .cmp(&candidates[j].1.symmetry_rank())
                .then(candidates[i].0.re.total_cmp(&candidates[j].0.re))
                .then(j.cmp(&i))
        })
        .expect("non-empty");
    Ok(Dominance {
        index,
        tie: near.len() > 1,
    })
}

pub fn dominant(records: &[SolutionRecord]) -> Result<Dominance> {
    let candidates = records
        .iter()
        .map(|r| {
            r.action
                .map(|a| (a.density, r.label.kind))
                .ok_or_else(|| Error::InvalidParameter("record has no action attached".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    dominant_by(&candidates)
}
