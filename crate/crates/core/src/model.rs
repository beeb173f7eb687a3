//! Model parameters and the exactly solvable non-interacting (J = 0) theory.
//!
//! # Kernel convention
//!
//! Every module uses one frequency-space kernel,
//!
//! ```text
//! D(ω) = diag(+i m ω²/2, -i m ω²/2) + M + i Σ̃_smooth(ω),
//! M    = [[-γ/2 - i v, γ/2], [γ/2, -γ/2 + i v]],
//! G(ω) = -½ D(ω)⁻¹,
//! ```
//!
//! with the transform `F(ω) = ∫ dt e^{iωt} f(t)` (so `∂_t → -iω`). At J = 0
//! this is the Fourier image of the second-order operator `D₀` acting on
//! `(x, x̃)`; its determinant is `(mω²/2 - v)²`, real-axis poles sit at
//! `ω² = 2v/m` for v > 0 (oscillatory phase) and are absent for v < 0
//! (decaying phase).
//!
//! The closed-form [`free_green`] equals `closed_form_scale(m) · (-½ D₀⁻¹)`
//! with the symmetric `sgn(t)` prescription for the real-axis double poles.
//! Equivalently `D₀ G = -(√(2π)/(2m)) · I · δ(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::Mat2;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    pub m: f64,
    pub v: f64,
    pub gamma: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub q: u32,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            v: 1.0,
            gamma: 4.0,
            j: 5.0,
            q: 4,
        }
    }
}

impl ModelParams {
    pub fn new(m: f64, v: f64, gamma: f64, j: f64, q: u32) -> Result<Self> {
        let p = Self { m, v, gamma, j, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.m, self.v, self.gamma, self.j]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.m <= 0.0 {
            return Err(Error::InvalidParameter(format!("m must be > 0, got {}", self.m)));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if self.j < 0.0 {
            return Err(Error::InvalidParameter(format!("J must be >= 0, got {}", self.j)));
        }
        if self.q < 2 || !self.q.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "q must be an even integer >= 2, got {}",
                self.q
            )));
        }
        Ok(())
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_j(mut self, j: f64) -> Self {
        self.j = j;
        self
    }

    pub fn non_interacting(self) -> Self {
        self.with_j(0.0)
    }
}

/// Keldysh branch label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContourIndex {
    Plus,
    Minus,
}

impl ContourIndex {
    pub const BOTH: [ContourIndex; 2] = [ContourIndex::Plus, ContourIndex::Minus];

    pub fn sign(self) -> f64 {
        match self {
            ContourIndex::Plus => 1.0,
            ContourIndex::Minus => -1.0,
        }
    }

    /// The opposite branch, `ā = -a`.
    pub fn bar(self) -> Self {
        match self {
            ContourIndex::Plus => ContourIndex::Minus,
            ContourIndex::Minus => ContourIndex::Plus,
        }
    }

    pub fn idx(self) -> usize {
        match self {
            ContourIndex::Plus => 0,
            ContourIndex::Minus => 1,
        }
    }

    pub fn from_idx(i: usize) -> Self {
        if i == 0 {
            ContourIndex::Plus
        } else {
            ContourIndex::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ContourIndex::Plus => 'p',
            ContourIndex::Minus => 'm',
        }
    }
}

/// `s_ab = +1` on the diagonal, `-1` off it.
pub fn s_ab(a: ContourIndex, b: ContourIndex) -> f64 {
    if a == b {
        1.0
    } else {
        -1.0
    }
}

/// The frequency-independent dissipative matrix `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationMatrix(pub Mat2);

impl DissipationMatrix {
    pub fn new(params: &ModelParams) -> Self {
        let g = params.gamma / 2.0;
        DissipationMatrix(Mat2::new(
            Complex64::new(-g, -params.v),
            Complex64::new(g, 0.0),
            Complex64::new(g, 0.0),
            Complex64::new(-g, params.v),
        ))
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }
}

/// Kinetic part of the kernel at frequency ω: `diag(+imω²/2, -imω²/2)`.
pub fn kinetic_kernel(m: f64, omega: f64) -> Mat2 {
    let k = I * (m * omega * omega / 2.0);
    Mat2::diag(k, -k)
}

/// `D₀(ω)`, the J = 0 kernel.
pub fn free_kernel(params: &ModelParams, omega: f64) -> Mat2 {
    kinetic_kernel(params.m, omega) + DissipationMatrix::new(params).matrix()
}

/// Ratio between [`free_green`] and `-½ D₀⁻¹`.
pub fn closed_form_scale(m: f64) -> f64 {
    (2.0 * std::f64::consts::PI).sqrt() / m
}

/// Coefficient `c` in `D₀ G_free = c · I · δ(t)` for the closed form.
pub fn closed_form_delta_coefficient(m: f64) -> f64 {
    -closed_form_scale(m) / 2.0
}

fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Closed-form J = 0 two-point function `G_ab(t)`; defined for v > 0 only.
pub fn free_green(params: &ModelParams, a: ContourIndex, b: ContourIndex, t: f64) -> Result<Complex64> {
    if params.v <= 0.0 {
        return Err(Error::Domain(format!(
            "closed-form free Green's function needs v > 0, got v = {}",
            params.v
        )));
    }
    let (m, v, g) = (params.m, params.v, params.gamma);
    let w = (2.0 * v / m).sqrt();
    let pref = std::f64::consts::PI.sqrt() * sgn(t) / (8.0 * (m * v).powf(1.5));
    let ab = a.sign() + b.sign();
    let bracket = Complex64::new(-g * t * w * (t * w).cos(), 0.0)
        + Complex64::new(g, -2.0 * ab * v) * (t * w).sin();
    Ok(bracket * pref)
}

/// State `(X₊, P₋, X₋, P₊)` of the J = 0 Heisenberg equations, with
/// `X± = x ± x̃`, `P± = p ± p̃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub x_plus: Complex64,
    pub p_minus: Complex64,
    pub x_minus: Complex64,
    pub p_plus: Complex64,
}

impl PhaseState {
    pub fn new(x_plus: f64, p_minus: f64, x_minus: f64, p_plus: f64) -> Self {
        Self {
            x_plus: x_plus.into(),
            p_minus: p_minus.into(),
            x_minus: x_minus.into(),
            p_plus: p_plus.into(),
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.x_plus, self.p_minus, self.x_minus, self.p_plus]
    }
}

/// `cos(w t)` and `sin(w t)/w` as entire functions of `w² = 2v/m`.
fn cos_sinc(w2: f64, t: f64) -> (f64, f64) {
    if w2 > 0.0 {
        let w = w2.sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else if w2 < 0.0 {
        let k = (-w2).sqrt();
        ((k * t).cosh(), (k * t).sinh() / k)
    } else {
        (1.0, t)
    }
}

/// `∫₀ᵗ s(t-u) s(u) du` with `s(u) = sin(wu)/w`, i.e. `(s - t c)/(2w²)`.
fn sinc_self_convolution(w2: f64, t: f64) -> f64 {
    let z = w2 * t * t;
    if z.abs() < 1.0 {
        // Σ_{k≥1} (-1)^{k+1} w2^{k-1} 2k t^{2k+1} / (2k+1)!, halved.
        let mut sum = 0.0;
        let mut power = t * t * t; // w2^{k-1} t^{2k+1}
        let mut fact = 6.0; // (2k+1)!
        for k in 1..40 {
            let kf = k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * 2.0 * kf * power / fact;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
            power *= w2 * t * t;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        sum / 2.0
    } else {
        let (c, s) = cos_sinc(w2, t);
        (s - t * c) / (2.0 * w2)
    }
}

/// Exact solution of
///
/// ```text
/// Ẋ₊ = P₋/m,  Ṗ₋ = -2v X₊ - 2iγ X₋,
/// Ẋ₋ = P₊/m,  Ṗ₊ = -2v X₋.
/// ```
///
/// `(X₋, P₊)` is a free oscillator; `X₊` is that oscillator driven by
/// `-2iγ X₋/m`. Valid for any sign of v.
pub fn heisenberg_evolve(params: &ModelParams, initial: PhaseState, t: f64) -> PhaseState {
    let m = params.m;
    let w2 = 2.0 * params.v / m;
    let (c, s) = cos_sinc(w2, t);
    let a = initial.x_minus;
    let b = initial.p_plus / m;

    let x_minus = a * c + b * s;
    let p_plus = m * (-a * w2 * s + b * c);

    let drive = -2.0 * I * params.gamma / m;
    let half_ts = t * s / 2.0;
    let conv_ss = sinc_self_convolution(w2, t);
    let x_part = drive * (a * half_ts + b * conv_ss);
    let v_part = drive * (a * (s + t * c) / 2.0 + b * half_ts);

    let x_plus = initial.x_plus * c + initial.p_minus / m * s + x_part;
    let p_minus = m * (-initial.x_plus * w2 * s + initial.p_minus / m * c + v_part);

    PhaseState {
        x_plus,
        p_minus,
        x_minus,
        p_plus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ContourIndex::{Minus, Plus};

    fn params(v: f64, gamma: f64) -> ModelParams {
        ModelParams::new(1.0, v, gamma, 0.0, 4).unwrap()
    }

    /// Classic RK4 on the Heisenberg system; independent of the closed form.
    fn rk4(p: &ModelParams, init: PhaseState, t: f64, steps: usize) -> [Complex64; 4] {
        let f = |y: [Complex64; 4]| -> [Complex64; 4] {
            [
                y[1] / p.m,
                -2.0 * p.v * y[0] - 2.0 * I * p.gamma * y[2],
                y[3] / p.m,
                -2.0 * p.v * y[2],
            ]
        };
        let h = t / steps as f64;
        let mut y = init.as_array();
        let axpy = |y: [Complex64; 4], k: [Complex64; 4], s: f64| {
            let mut o = y;
            for i in 0..4 {
                o[i] += k[i] * s;
            }
            o
        };
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(axpy(y, k1, h / 2.0));
            let k3 = f(axpy(y, k2, h / 2.0));
            let k4 = f(axpy(y, k3, h));
            for i in 0..4 {
                y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
        }
        y
    }

    #[test]
    fn validation() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 1.0, 4).is_err());
        assert!(ModelParams::new(1.0, 1.0, -1.0, 1.0, 4).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, -1.0, 4).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, 3).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.0, 0.0, 2).is_ok());
    }

    #[test]
    fn contour_algebra() {
        for a in ContourIndex::BOTH {
            assert_eq!(a.bar().bar(), a);
            for b in ContourIndex::BOTH {
                assert_eq!(s_ab(a, b), s_ab(b, a));
            }
        }
        assert_eq!(s_ab(Plus, Minus), -1.0);
    }

    #[test]
    fn dissipation_matrix_structure() {
        let m = DissipationMatrix::new(&ModelParams::new(1.0, 0.7, 3.0, 1.0, 4).unwrap()).matrix();
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert_eq!(m[(1, 1)], m[(0, 0)].conj());
        assert_eq!(m[(0, 0)], Complex64::new(-1.5, -0.7));
    }

    #[test]
    fn free_green_at_origin_vanishes() {
        let p = params(1.3, 2.0);
        for a in ContourIndex::BOTH {
            for b in ContourIndex::BOTH {
                assert_eq!(free_green(&p, a, b, 0.0).unwrap(), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn free_green_rejects_nonpositive_v() {
        assert!(free_green(&params(0.0, 1.0), Plus, Plus, 1.0).is_err());
        assert!(free_green(&params(-1.0, 1.0), Plus, Plus, 1.0).is_err());
    }

    #[test]
    fn free_green_undamped_plus_plus() {
        // a = b = +: (γ - 2(a+b) i v) = -4i at γ = 0, v = 1.
        let p = params(1.0, 0.0);
        for &t in &[-2.3, -0.4, 0.9, 3.7] {
            let g = free_green(&p, Plus, Plus, t).unwrap();
            let sg = if t > 0.0 { 1.0 } else { -1.0 };
            let expect = Complex64::new(0.0, -4.0) * (std::f64::consts::PI.sqrt() * sg * (2f64.sqrt() * t).sin() / 8.0);
            assert!((g - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn free_green_conjugation_pairs() {
        let p = params(0.8, 1.7);
        for &t in &[-1.1, 0.3, 2.9] {
            for a in ContourIndex::BOTH {
                for b in ContourIndex::BOTH {
                    let g = free_green(&p, a, b, t).unwrap();
                    let h = free_green(&p, a.bar(), b.bar(), t).unwrap();
                    assert!((g - h.conj()).norm() < 1e-14);
                    let k = free_green(&p, b, a, -t).unwrap();
                    assert!((g - k).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn free_kernel_values() {
        let p = params(1.0, 0.0);
        let d = free_kernel(&p, 0.0);
        assert_eq!(d, Mat2::diag(Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)));
        // det D₀ = (mω²/2 - v)² independent of γ.
        for &g in &[0.0, 1.0, 4.5] {
            for &w in &[0.0, 0.3, 1.9, 7.0] {
                let p = ModelParams::new(1.3, 0.6, g, 0.0, 4).unwrap();
                let det = free_kernel(&p, w).det();
                let expect = (1.3 * w * w / 2.0 - 0.6).powi(2);
                assert!((det - Complex64::new(expect, 0.0)).norm() < 1e-12 * (1.0 + expect));
            }
        }
        let p = params(1.0, 0.0);
        assert!(free_kernel(&p, 2f64.sqrt()).det().norm() < 1e-14);
    }

    #[test]
    fn heisenberg_matches_rk4() {
        let inits = [
            PhaseState::new(1.0, 0.0, 0.0, 0.0),
            PhaseState::new(0.0, 0.0, 1.0, 0.0),
            PhaseState::new(0.3, -0.2, 0.5, 0.7),
        ];
        for &(v, g) in &[(1.0, 0.0), (1.0, 2.0), (-0.7, 1.5), (0.0, 1.0), (2.5, 0.3)] {
            let p = ModelParams::new(1.2, v, g, 0.0, 4).unwrap();
            for init in inits {
                for &t in &[0.5, 2.0, 4.0] {
                    let exact = heisenberg_evolve(&p, init, t).as_array();
                    let num = rk4(&p, init, t, 4000);
                    for i in 0..4 {
                        let scale = 1.0 + num[i].norm();
                        assert!(
                            (exact[i] - num[i]).norm() < 1e-9 * scale,
                            "v={v} g={g} t={t} i={i}: {} vs {}",
                            exact[i],
                            num[i]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn undamped_oscillator() {
        let p = params(1.0, 0.0);
        for &t in &[0.3, 1.7, 5.0] {
            let s = heisenberg_evolve(&p, PhaseState::new(1.0, 0.0, 0.0, 0.0), t);
            assert!((s.x_plus - Complex64::new((2f64.sqrt() * t).cos(), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn x_minus_is_blind_to_dissipation() {
        for &t in &[0.5, 3.0, 9.0] {
            let a = heisenberg_evolve(&params(1.0, 0.0), PhaseState::new(0.2, 0.1, 1.0, 0.4), t);
            let b = heisenberg_evolve(&params(1.0, 5.0), PhaseState::new(0.2, 0.1, 1.0, 0.4), t);
            assert_eq!(a.x_minus, b.x_minus);
            assert_eq!(a.p_plus, b.p_plus);
            assert!((a.x_minus - Complex64::new((2f64.sqrt() * t).cos() + 0.4 * (2f64.sqrt() * t).sin() / 2f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn secular_terms_in_x_plus() {
        // X₋(0) = 1: X₊ = -(iγω/(2v)) t sin(ωt). P₊(0) = 1: the t·(γ/v)·cos term appears.
        let (v, g) = (1.0, 2.0);
        let p = params(v, g);
        let w = (2.0 * v).sqrt();
        for &t in &[1.0, 4.0, 10.0] {
            let s = heisenberg_evolve(&p, PhaseState::new(0.0, 0.0, 1.0, 0.0), t);
            let expect = Complex64::new(0.0, -g * w / (2.0 * v)) * t * (w * t).sin();
            assert!((s.x_plus - expect).norm() < 1e-12);

            let s = heisenberg_evolve(&p, PhaseState::new(0.0, 0.0, 0.0, 1.0), t);
            // -(2iγ)(s - t c)/(2w²) with s = sin(wt)/w.
            let expect = Complex64::new(0.0, -g) * ((w * t).sin() / w - t * (w * t).cos()) / (w * w);
            assert!((s.x_plus - expect).norm() < 1e-12);
            // coefficient of t·cos(wt) is iγ/(2v) = i (γ/v)/2
            let tcos_coeff = Complex64::new(0.0, g / (2.0 * v));
            let rest = s.x_plus - tcos_coeff * t * (w * t).cos();
            assert!((rest - Complex64::new(0.0, -g) * (w * t).sin() / (w * w * w)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_solves_homogeneous_equation_and_jump() {
        // Finite differences of D₀ applied to the closed form.
        let p = ModelParams::new(1.0, 1.0, 1.5, 0.0, 4).unwrap();
        let h = 1e-3;
        let g = |a, b, t| free_green(&p, a, b, t).unwrap();
        let mut max_g: f64 = 0.0;
        let mut max_res: f64 = 0.0;
        let m = DissipationMatrix::new(&p).matrix();
        for step in 1..5000 {
            let t = 0.05 + step as f64 * h;
            for b in ContourIndex::BOTH {
                for a in ContourIndex::BOTH {
                    max_g = max_g.max(g(a, b, t).norm());
                    let d2 = (g(a, b, t + h) - 2.0 * g(a, b, t) + g(a, b, t - h)) / (h * h);
                    let kin = I * (-a.sign() * p.m / 2.0) * d2;
                    let res = kin + m[(a.idx(), 0)] * g(Plus, b, t) + m[(a.idx(), 1)] * g(Minus, b, t);
                    max_res = max_res.max(res.norm());
                }
            }
        }
        assert!(max_res < 1e-6 * max_g, "residual {max_res} vs max|G| {max_g}");

        // Jump of ∂_t G at the origin: -(i m/2)·2G'(0+) on the ++ entry.
        let eps = 1e-7;
        let slope = (g(Plus, Plus, eps) - g(Plus, Plus, 0.0)) / eps;
        let coeff = Complex64::new(0.0, -p.m / 2.0) * 2.0 * slope;
        assert!((coeff - Complex64::new(closed_form_delta_coefficient(p.m), 0.0)).norm() < 1e-5);
        let off = (g(Plus, Minus, eps) - g(Plus, Minus, 0.0)) / eps;
        assert!(off.norm() < 1e-5);
    }
}
