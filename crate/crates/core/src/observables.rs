//! Stationarity filtering and damped-cosine fits `A e^{-Γt} cos(Ωt)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ContourIndex;
use crate::solver::SolutionRecord;
use crate::symmetry::{TwoPointFunction, COMPONENT_NAMES};
use crate::timegrid::{forward_transform, Domain, GridFunction, TimeGrid};

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.1;
pub const DEFAULT_STATIONARITY_THRESHOLD: f64 = 1e-4;

/// Samples below this fraction of the peak are treated as numerical noise.
pub const RELATIVE_FLOOR: f64 = 1e-11;
/// Absolute floor for non-oscillatory fits.
pub const ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationarityMetric {
    pub value: f64,
    pub window: (f64, f64),
    /// Contribution of `t ∈ window`.
    pub positive: f64,
    /// Contribution of `-t ∈ window`.
    pub negative: f64,
}

/// Late-time weight `dt · Σ_{|t_k| ∈ window} max_ab |G_ab(t_k)|`.
///
/// The window `[(1-f)T/2, T/2]` is evaluated on both sides of the origin and
/// the larger side is reported, so the metric takes the same value on every
/// symmetry image of a solution.
pub fn stationarity(g: &TwoPointFunction, window_fraction: f64) -> Result<StationarityMetric> {
    if !(window_fraction > 0.0 && window_fraction < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "window fraction must lie in (0, 0.5), got {window_fraction}"
        )));
    }
    let grid = g.grid();
    let half = grid.half();
    let k0 = ((1.0 - window_fraction) * half as f64).ceil() as usize;
    let peak = |k: usize| g.components().iter().map(|c| c[k].norm()).fold(0.0, f64::max);
    let positive: f64 = (k0..=half).map(peak).sum::<f64>() * grid.dt();
    let negative: f64 = (k0..=half).map(|k| peak(grid.mirror(k))).sum::<f64>() * grid.dt();
    Ok(StationarityMetric {
        value: positive.max(negative),
        window: (k0 as f64 * grid.dt(), grid.period() / 2.0),
        positive,
        negative,
    })
}

/// True when the spectrum of the component peaks away from ω = 0.
pub fn classify_oscillatory(f: &GridFunction) -> Result<bool> {
    let spectrum = forward_transform(f);
    let mags: Vec<f64> = spectrum.values().iter().map(|z| z.norm()).collect();
    let best = mags.iter().cloned().fold(0.0, f64::max);
    if best == 0.0 || !best.is_finite() {
        return Err(Error::Degenerate("oscillation test on a zero component".into()));
    }
    let off_peak = mags[1..].iter().cloned().fold(0.0, f64::max);
    Ok(off_peak > mags[0] * (1.0 + 1e-12))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub amplitude: f64,
    pub decay_rate: f64,
    pub frequency: Option<f64>,
    pub oscillatory: bool,
    pub fit_residual: f64,
    pub maxima_used: usize,
}

/// Parabolic vertex through three equally spaced samples: (offset in steps, value).
fn parabolic_vertex(ym: f64, y0: f64, yp: f64) -> (f64, f64) {
    let denom = ym - 2.0 * y0 + yp;
    if denom == 0.0 {
        return (0.0, y0);
    }
    let delta = 0.5 * (ym - yp) / denom;
    (delta, y0 - 0.25 * (ym - yp) * delta)
}

/// Refined local extrema of `|y|` on `0 < t < T/2`, as `(t, |y|)` pairs, keeping
/// only those above `floor`.
pub fn extrema(y: &[f64], dt: f64, floor: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for k in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (y[k - 1].abs(), y[k].abs(), y[k + 1].abs());
        if b >= a && b > c && b > floor && y[k - 1].signum() == y[k].signum() && y[k + 1].signum() == y[k].signum() {
            let (delta, value) = parabolic_vertex(a, b, c);
            out.push(((k as f64 + delta) * dt, value));
        }
    }
    out
}

/// Least-squares line `y = a + b x`; returns `(a, b, rms residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (intercept, slope, rms)
}

fn positive_half(f: &GridFunction, part: fn(&Complex64) -> f64) -> Vec<f64> {
    let h = f.grid().half();
    f.values()[..=h].iter().map(part).collect()
}

fn decay_of(y: &[f64], grid: &TimeGrid, oscillatory: bool) -> Result<DecayFit> {
    let dt = grid.dt();
    let peak = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = (peak * RELATIVE_FLOOR).max(ABSOLUTE_FLOOR);
    let (ts, logs): (Vec<f64>, Vec<f64>) = if oscillatory {
        extrema(y, dt, floor).into_iter().map(|(t, v)| (t, v.ln())).unzip()
    } else {
        y.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| v.abs() > floor)
            .map(|(k, v)| (k as f64 * dt, v.abs().ln()))
            .unzip()
    };
    let needed = if oscillatory { 3 } else { 8 };
    if ts.len() < needed {
        return Err(Error::InsufficientMaxima {
            found: ts.len(),
            needed,
        });
    }
    let (intercept, slope, rms) = linear_fit(&ts, &logs);
    Ok(DecayFit {
        amplitude: intercept.exp(),
        decay_rate: -slope,
        frequency: None,
        oscillatory,
        fit_residual: rms,
        maxima_used: ts.len(),
    })
}

/// Γ from a log-linear fit of the maxima of `|Re G|` (oscillatory) or of all
/// usable samples (non-oscillatory) on `0 < t ≤ T/2`.
pub fn fit_decay(f: &GridFunction, oscillatory: bool) -> Result<DecayFit> {
    expect_time(f)?;
    decay_of(&positive_half(f, |z| z.re), f.grid(), oscillatory)
}

fn frequency_of(y: &[f64], grid: &TimeGrid, decay_rate: f64) -> Result<f64> {
    let dt = grid.dt();
    let peak = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = peak * 1e-9;
    // Stop where the raw signal sinks into the noise; beyond that, de-damping
    // would amplify rounding errors.
    let end = y.iter().rposition(|v| v.abs() > floor).unwrap_or(0);
    let g: Vec<f64> = y[..=end]
        .iter()
        .enumerate()
        .map(|(k, v)| v * (decay_rate * k as f64 * dt).exp())
        .collect();

    let mut zeros = Vec::new();
    for k in 1..g.len() {
        if g[k - 1] != 0.0 && (g[k - 1] > 0.0) != (g[k] > 0.0) {
            zeros.push((k as f64 - 1.0 + g[k - 1] / (g[k - 1] - g[k])) * dt);
        }
    }
    if zeros.len() < 2 {
        return Err(Error::InsufficientOscillations { found: zeros.len() });
    }
    let idx: Vec<f64> = (0..zeros.len()).map(|i| i as f64).collect();
    let (_, zero_spacing, _) = linear_fit(&idx, &zeros);

    let peaks = extrema(&g, dt, 0.0);
    let spacing = if peaks.len() >= 2 {
        let t: Vec<f64> = peaks.iter().map(|p| p.0).collect();
        let idx: Vec<f64> = (0..t.len()).map(|i| i as f64).collect();
        let (_, peak_spacing, _) = linear_fit(&idx, &t);
        let wz = (zeros.len() - 1) as f64;
        let wp = (t.len() - 1) as f64;
        (zero_spacing * wz + peak_spacing * wp) / (wz + wp)
    } else {
        zero_spacing
    };
    Ok(std::f64::consts::PI / spacing)
}

/// Ω from the de-damped signal `Re G(t)·e^{Γt}`: half-period spacing of its
/// sign changes and parabolic-refined extrema.
pub fn fit_frequency(f: &GridFunction, decay_rate: f64) -> Result<f64> {
    expect_time(f)?;
    frequency_of(&positive_half(f, |z| z.re), f.grid(), decay_rate)
}

fn expect_time(f: &GridFunction) -> Result<()> {
    if f.domain() != Domain::Time {
        return Err(Error::InvalidParameter("fits need a time-domain function".into()));
    }
    Ok(())
}

fn full_fit(y: &[f64], grid: &TimeGrid, oscillatory: bool) -> Result<DecayFit> {
    let mut fit = decay_of(y, grid, oscillatory)?;
    if oscillatory {
        fit.frequency = Some(frequency_of(y, grid, fit.decay_rate)?);
    }
    Ok(fit)
}

/// Fit of one component: the real part is primary, the imaginary part a diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub component: String,
    pub real: Option<DecayFit>,
    pub imag: Option<DecayFit>,
}

pub fn fit_component(f: &GridFunction) -> (Option<DecayFit>, Option<DecayFit>) {
    let Ok(oscillatory) = classify_oscillatory(f) else {
        return (None, None);
    };
    let real = full_fit(&positive_half(f, |z| z.re), f.grid(), oscillatory).ok();
    let imag = full_fit(&positive_half(f, |z| z.im), f.grid(), oscillatory).ok();
    (real, imag)
}

pub fn extract_all(record: &SolutionRecord) -> Vec<ComponentFit> {
    extract_from(&record.g)
}

pub fn extract_from(g: &TwoPointFunction) -> Vec<ComponentFit> {
    let mut out = Vec::with_capacity(4);
    for (c, name) in COMPONENT_NAMES.iter().enumerate() {
        let (a, b) = (ContourIndex::from_idx(c / 2), ContourIndex::from_idx(c % 2));
        let (real, imag) = fit_component(&g.component_function(a, b));
        out.push(ComponentFit {
            component: name.to_string(),
            real,
            imag,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TimeGrid {
        TimeGrid::new(50.0, 4096).unwrap()
    }

    fn signal(grid: &TimeGrid, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_time_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    #[test]
    fn stationarity_basics() {
        let g = grid();
        let z = TwoPointFunction::zeros(&g);
        let m = stationarity(&z, 0.1).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.window.0 > 0.0 && m.window.0 < 25.0 && m.window.1 == 25.0);
        assert!(stationarity(&z, 0.5).is_err());
        let ones = TwoPointFunction::from_fn(&g, |_, _, _| Complex64::new(1.0, 0.0));
        let m = stationarity(&ones, 0.1).unwrap();
        assert!((m.value - 2.5).abs() < 0.05);
    }

    #[test]
    fn oscillation_classifier() {
        let g = grid();
        assert!(!classify_oscillatory(&signal(&g, |t| (-0.5 * t.abs()).exp())).unwrap());
        assert!(classify_oscillatory(&signal(&g, |t| (-0.3 * t.abs()).exp() * (3.0 * t).cos())).unwrap());
        assert!(!classify_oscillatory(&signal(&g, |_| 2.0)).unwrap());
        assert!(classify_oscillatory(&signal(&g, |_| 0.0)).is_err());
    }

    #[test]
    fn synthetic_damped_cosine() {
        let g = grid();
        let f = signal(&g, |t| 3.0 * (-0.7 * t.abs()).exp() * (4.0 * t).cos());
        let fit = fit_decay(&f, true).unwrap();
        assert!((fit.decay_rate - 0.7).abs() < 0.7e-3, "{fit:?}");
        let w = fit_frequency(&f, fit.decay_rate).unwrap();
        assert!((w - 4.0).abs() < 4e-3, "{w}");
    }

    #[test]
    fn synthetic_pure_decay() {
        let g = grid();
        let f = signal(&g, |t| (-1.2 * t.abs()).exp());
        let fit = fit_decay(&f, false).unwrap();
        assert!((fit.decay_rate - 1.2).abs() < 1.2e-6);
        assert!(fit_frequency(&f, fit.decay_rate).is_err());
    }

    #[test]
    fn zero_signal_has_no_maxima() {
        let g = grid();
        let f = signal(&g, |_| 0.0);
        assert!(matches!(fit_decay(&f, true), Err(Error::InsufficientMaxima { .. })));
        assert!(matches!(fit_decay(&f, false), Err(Error::InsufficientMaxima { .. })));
    }

    #[test]
    fn de_damping_removes_extremum_offset() {
        let g = grid();
        let (gamma, omega) = (0.8, 3.0);
        let f = signal(&g, |t| (-gamma * t.abs()).exp() * (omega * t).cos());
        let y = positive_half(&f, |z| z.re);
        let raw = extrema(&y, g.dt(), 0.0);
        // Raw extrema satisfy tan(Ωt*) = -Γ/Ω.
        for (t, _) in raw.iter().take(4) {
            assert!(((omega * t).tan() + gamma / omega).abs() < 1e-3, "t = {t}");
        }
        let undamped: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(k, v)| v * (gamma * k as f64 * g.dt()).exp())
            .collect();
        for (t, _) in extrema(&undamped, g.dt(), 0.0).iter().take(4) {
            assert!((omega * t).sin().abs() < 1e-3, "t = {t}");
        }
    }

    #[test]
    fn extract_all_on_synthetic_matrix() {
        let g = grid();
        let params = [(0.4, 2.0), (0.6, 3.0), (0.6, 3.0), (0.9, 5.0)];
        let mut comps: [Vec<Complex64>; 4] = Default::default();
        for (c, &(gam, om)) in params.iter().enumerate() {
            comps[c] = (0..g.n_points())
                .map(|k| {
                    let t = g.time(k);
                    Complex64::new((-gam * t.abs()).exp() * (om * t).cos(), 0.0)
                })
                .collect();
        }
        comps[3].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let tp = TwoPointFunction::from_components(&g, comps).unwrap();
        let fits = extract_from(&tp);
        for (c, &(gam, om)) in params.iter().enumerate().take(3) {
            let fit = fits[c].real.unwrap();
            assert!((fit.decay_rate - gam).abs() < 1e-3 * gam);
            assert!((fit.frequency.unwrap() - om).abs() < 1e-3 * om);
        }
        assert!(fits[3].real.is_none());
    }
}
