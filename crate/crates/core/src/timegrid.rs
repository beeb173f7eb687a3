//! Periodic relative-time grid and the discrete Fourier pair used everywhere.
//!
//! Times live on a circle of circumference `T`: index `k < n/2` is `k·dt`,
//! index `k >= n/2` is `(k - n)·dt`. Frequencies use the same wrap-around
//! layout, `ω_j = 2π n_j / T` with `n_j = j` or `j - n`.
//!
//! The transform pair is
//!
//! ```text
//! F(ω_j) = dt · Σ_k exp(+i ω_j t_k) f(t_k)
//! f(t_k) = (1/T) · Σ_j exp(-i ω_j t_k) F(ω_j)
//! ```
//!
//! so a discrete delta (`1/dt` at `k = 0`) maps to the constant 1.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 16;

#[derive(Clone)]
pub struct TimeGrid {
    period: f64,
    n_points: usize,
    forward_plan: Arc<dyn Fft<f64>>,
    inverse_plan: Arc<dyn Fft<f64>>,
}

impl TimeGrid {
    pub fn new(period: f64, n_points: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid period must be positive and finite, got {period}"
            )));
        }
        if n_points < MIN_POINTS || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "n_points must be even and >= {MIN_POINTS}, got {n_points}"
            )));
        }
        let mut planner = FftPlanner::new();
        // rustfft's "inverse" is Σ exp(+2πi jk/n), which is our forward direction.
        let forward_plan = planner.plan_fft_inverse(n_points);
        let inverse_plan = planner.plan_fft_forward(n_points);
        Ok(Self {
            period,
            n_points,
            forward_plan,
            inverse_plan,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dt(&self) -> f64 {
        self.period / self.n_points as f64
    }

    pub fn half(&self) -> usize {
        self.n_points / 2
    }

    /// Signed integer label of index `k` on the circle.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.half() {
            k as i64
        } else {
            k as i64 - self.n_points as i64
        }
    }

    pub fn time(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.dt()
    }

    pub fn frequency(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.signed_index(j) as f64 / self.period
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.time(k)).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.frequency(j)).collect()
    }

    /// Index of `-t_k`.
    pub fn mirror(&self, k: usize) -> usize {
        (self.n_points - k) % self.n_points
    }

    /// Index of the sample nearest to time `t` (taken modulo the period).
    pub fn index_of(&self, t: f64) -> usize {
        let k = (t / self.dt()).round() as i64;
        k.rem_euclid(self.n_points as i64) as usize
    }

    /// Array indices ordered by increasing frequency (most negative first).
    pub fn ascending_frequency_order(&self) -> Vec<usize> {
        let h = self.half();
        (h..self.n_points).chain(0..h).collect()
    }

    /// In-place time -> frequency transform.
    pub fn forward_in_place(&self, values: &mut [Complex64]) {
        assert_eq!(values.len(), self.n_points);
        self.forward_plan.process(values);
        let dt = self.dt();
        values.iter_mut().for_each(|v| *v *= dt);
    }

    /// In-place frequency -> time transform.
    pub fn inverse_in_place(&self, values: &mut [Complex64]) {
        assert_eq!(values.len(), self.n_points);
        self.inverse_plan.process(values);
        let scale = 1.0 / self.period;
        values.iter_mut().for_each(|v| *v *= scale);
    }

    /// A time-domain function that is `1/dt` at `t = 0` and zero elsewhere.
    pub fn delta(&self) -> GridFunction {
        let mut values = vec![Complex64::new(0.0, 0.0); self.n_points];
        values[0] = Complex64::new(1.0 / self.dt(), 0.0);
        GridFunction::new(self.clone(), Domain::Time, values).expect("length matches grid")
    }
}

impl PartialEq for TimeGrid {
    fn eq(&self, other: &Self) -> bool {
        self.period == other.period && self.n_points == other.n_points
    }
}

impl fmt::Debug for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeGrid")
            .field("period", &self.period)
            .field("n_points", &self.n_points)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GridSpec {
    period: f64,
    n_points: usize,
}

impl Serialize for TimeGrid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridSpec {
            period: self.period,
            n_points: self.n_points,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TimeGrid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = GridSpec::deserialize(deserializer)?;
        TimeGrid::new(spec.period, spec.n_points).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Time,
    Frequency,
}

/// Complex samples of one function on a [`TimeGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: TimeGrid,
    domain: Domain,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: TimeGrid, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            domain,
            values,
        })
    }

    pub fn from_time_fn(grid: &TimeGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n_points()).map(|k| f(grid.time(k))).collect();
        Self {
            grid: grid.clone(),
            domain: Domain::Time,
            values,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Time -> frequency. A frequency-domain input is returned unchanged.
pub fn forward_transform(f: &GridFunction) -> GridFunction {
    if f.domain == Domain::Frequency {
        return f.clone();
    }
    let mut values = f.values.clone();
    f.grid.forward_in_place(&mut values);
    GridFunction {
        grid: f.grid.clone(),
        domain: Domain::Frequency,
        values,
    }
}

/// Frequency -> time. A time-domain input is returned unchanged.
pub fn inverse_transform(f: &GridFunction) -> GridFunction {
    if f.domain == Domain::Time {
        return f.clone();
    }
    let mut values = f.values.clone();
    f.grid.inverse_in_place(&mut values);
    GridFunction {
        grid: f.grid.clone(),
        domain: Domain::Time,
        values,
    }
}
