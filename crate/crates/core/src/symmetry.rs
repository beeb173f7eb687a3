//! Contour-indexed two-point functions, the KMS and conjugation projectors,
//! and symmetry classification of saddles.
//!
//! Relations, with `t` indexed modulo the grid:
//!
//! * KMS (K): `G_ab(t) = G_ba(-t)`
//! * conjugation (C): `G_ab(t) = conj(G_āb̄(t))`
//!
//! The fixed-point map is also invariant under time reversal of every
//! component, `G_ab(t) -> G_ab(-t)`, because the kinetic term is even in ω.
//! Broken-symmetry saddles therefore come in orbits generated by these three
//! involutions; [`Image`] enumerates the orbit and [`orbit_distance`] measures
//! solution identity modulo it.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::ContourIndex;
use crate::timegrid::{Domain, GridFunction, TimeGrid};

/// Flat component index of `(a, b)`.
pub fn component_index(a: ContourIndex, b: ContourIndex) -> usize {
    2 * a.idx() + b.idx()
}

/// Component names in storage order.
pub const COMPONENT_NAMES: [&str; 4] = ["pp", "pm", "mp", "mm"];

fn pair(c: usize) -> (usize, usize) {
    (c / 2, c % 2)
}

fn transpose_component(c: usize) -> usize {
    let (a, b) = pair(c);
    2 * b + a
}

fn bar_component(c: usize) -> usize {
    3 - c
}

/// Four complex time series `G_ab(t_k)` sharing one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointFunction {
    grid: TimeGrid,
    comps: [Vec<Complex64>; 4],
}

impl TwoPointFunction {
    pub fn zeros(grid: &TimeGrid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.n_points()];
        Self {
            grid: grid.clone(),
            comps: [z.clone(), z.clone(), z.clone(), z],
        }
    }

    pub fn from_components(grid: &TimeGrid, comps: [Vec<Complex64>; 4]) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.n_points() {
                return Err(Error::InvalidParameter(format!(
                    "component has {} samples, grid has {}",
                    c.len(),
                    grid.n_points()
                )));
            }
        }
        Ok(Self {
            grid: grid.clone(),
            comps,
        })
    }

    pub fn from_fn(grid: &TimeGrid, f: impl Fn(ContourIndex, ContourIndex, f64) -> Complex64) -> Self {
        let mut out = Self::zeros(grid);
        for (c, comp) in out.comps.iter_mut().enumerate() {
            let (a, b) = pair(c);
            let (a, b) = (ContourIndex::from_idx(a), ContourIndex::from_idx(b));
            for (k, z) in comp.iter_mut().enumerate() {
                *z = f(a, b, grid.time(k));
            }
        }
        out
    }

    /// Fallible variant of [`TwoPointFunction::from_fn`].
    pub fn try_from_fn(
        grid: &TimeGrid,
        f: impl Fn(ContourIndex, ContourIndex, f64) -> Result<Complex64>,
    ) -> Result<Self> {
        let mut out = Self::zeros(grid);
        for (c, comp) in out.comps.iter_mut().enumerate() {
            let (a, b) = pair(c);
            let (a, b) = (ContourIndex::from_idx(a), ContourIndex::from_idx(b));
            for (k, z) in comp.iter_mut().enumerate() {
                *z = f(a, b, grid.time(k))?;
            }
        }
        Ok(out)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<Complex64>; 4] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 4] {
        &mut self.comps
    }

    pub fn into_components(self) -> [Vec<Complex64>; 4] {
        self.comps
    }

    pub fn component(&self, a: ContourIndex, b: ContourIndex) -> &[Complex64] {
        &self.comps[component_index(a, b)]
    }

    pub fn component_mut(&mut self, a: ContourIndex, b: ContourIndex) -> &mut [Complex64] {
        &mut self.comps[component_index(a, b)]
    }

    pub fn component_function(&self, a: ContourIndex, b: ContourIndex) -> GridFunction {
        GridFunction::new(self.grid.clone(), Domain::Time, self.component(a, b).to_vec())
            .expect("component length matches grid")
    }

    pub fn at(&self, k: usize) -> Mat2 {
        Mat2::new(self.comps[0][k], self.comps[1][k], self.comps[2][k], self.comps[3][k])
    }

    pub fn norm_l2(&self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn distance_l2(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .zip(other.comps.iter().flatten())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .zip(other.comps.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// `self ← (1 - α)·self + α·other`.
    pub fn mix(&mut self, other: &Self, alpha: f64) {
        for (x, y) in self.comps.iter_mut().flatten().zip(other.comps.iter().flatten()) {
            *x = *x * (1.0 - alpha) + *y * alpha;
        }
    }

    pub fn scale(&mut self, s: Complex64) {
        self.comps.iter_mut().flatten().for_each(|z| *z *= s);
    }

    fn apply_image(&self, image: Image) -> Self {
        let n = self.grid.n_points();
        let mut out = Self::zeros(&self.grid);
        for c in 0..4 {
            let mut src = c;
            if image.kms {
                src = transpose_component(src);
            }
            if image.conj {
                src = bar_component(src);
            }
            let reverse = image.kms ^ image.reverse;
            for k in 0..n {
                let ks = if reverse { self.grid.mirror(k) } else { k };
                let z = self.comps[src][ks];
                out.comps[c][k] = if image.conj { z.conj() } else { z };
            }
        }
        out
    }
}

/// Relation enforced or tested on a two-point function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symmetry {
    #[serde(rename = "KMS")]
    Kms,
    #[serde(rename = "CONJ")]
    Conj,
}

impl Symmetry {
    pub const ALL: [Symmetry; 2] = [Symmetry::Kms, Symmetry::Conj];

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Kms => "KMS",
            Symmetry::Conj => "CONJ",
        }
    }

    pub fn projector(self) -> &'static dyn Projector {
        match self {
            Symmetry::Kms => &KmsProjector,
            Symmetry::Conj => &ConjugationProjector,
        }
    }

    pub fn project(self, g: &TwoPointFunction) -> TwoPointFunction {
        self.projector().project(g)
    }
}

impl std::str::FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "KMS" | "K" => Ok(Symmetry::Kms),
            "CONJ" | "C" => Ok(Symmetry::Conj),
            _ => Err(Error::UnknownStrategy {
                kind: "symmetry",
                name: s.to_string(),
                available: "KMS, CONJ".into(),
            }),
        }
    }
}

/// Orthogonal projector onto the fixed-point set of an involution.
pub trait Projector: Send + Sync {
    fn symmetry(&self) -> Symmetry;

    /// The involution whose fixed points the projector selects.
    fn involution(&self, g: &TwoPointFunction) -> TwoPointFunction;

    fn project(&self, g: &TwoPointFunction) -> TwoPointFunction {
        let mut out = self.involution(g);
        out.mix(g, 0.5);
        out
    }
}

pub struct KmsProjector;

impl Projector for KmsProjector {
    fn symmetry(&self) -> Symmetry {
        Symmetry::Kms
    }

    fn involution(&self, g: &TwoPointFunction) -> TwoPointFunction {
        g.apply_image(Image::KMS)
    }
}

pub struct ConjugationProjector;

impl Projector for ConjugationProjector {
    fn symmetry(&self) -> Symmetry {
        Symmetry::Conj
    }

    fn involution(&self, g: &TwoPointFunction) -> TwoPointFunction {
        g.apply_image(Image::CONJ)
    }
}

pub fn project_kms(g: &TwoPointFunction) -> TwoPointFunction {
    KmsProjector.project(g)
}

pub fn project_conjugation(g: &TwoPointFunction) -> TwoPointFunction {
    ConjugationProjector.project(g)
}

/// Apply the projectors for every symmetry in `set`.
pub fn enforce(g: &TwoPointFunction, set: &[Symmetry]) -> TwoPointFunction {
    let mut out = g.clone();
    for s in set {
        out = s.project(&out);
    }
    out
}

/// `‖G - P(G)‖₂ / ‖G‖₂`.
pub fn violation(g: &TwoPointFunction, which: Symmetry) -> Result<f64> {
    let norm = g.norm_l2();
    if norm == 0.0 {
        return Err(Error::Degenerate("violation of a zero two-point function".into()));
    }
    Ok(g.distance_l2(&which.project(g)) / norm)
}

/// Group element generated by KMS transposition, conjugation and time reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Image {
    pub kms: bool,
    pub conj: bool,
    pub reverse: bool,
}

impl Image {
    pub const IDENTITY: Image = Image {
        kms: false,
        conj: false,
        reverse: false,
    };
    pub const KMS: Image = Image {
        kms: true,
        conj: false,
        reverse: false,
    };
    pub const CONJ: Image = Image {
        kms: false,
        conj: true,
        reverse: false,
    };
    pub const REVERSE: Image = Image {
        kms: false,
        conj: false,
        reverse: true,
    };

    pub fn all() -> impl Iterator<Item = Image> {
        (0..8u8).map(|b| Image {
            kms: b & 1 != 0,
            conj: b & 2 != 0,
            reverse: b & 4 != 0,
        })
    }

    pub fn apply(self, g: &TwoPointFunction) -> TwoPointFunction {
        g.apply_image(self)
    }
}

/// Smallest relative L2 distance between `a` and any symmetry image of `b`,
/// normalized by the larger of the two norms.
pub fn orbit_distance(a: &TwoPointFunction, b: &TwoPointFunction) -> f64 {
    let scale = a.norm_l2().max(b.norm_l2());
    if scale == 0.0 {
        return 0.0;
    }
    Image::all()
        .map(|img| a.distance_l2(&img.apply(b)))
        .fold(f64::INFINITY, f64::min)
        / scale
}

/// Relative L2 distance without symmetry identification.
pub fn relative_distance(a: &TwoPointFunction, b: &TwoPointFunction) -> f64 {
    let scale = a.norm_l2().max(b.norm_l2());
    if scale == 0.0 {
        0.0
    } else {
        a.distance_l2(b) / scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelKind {
    #[serde(rename = "NONE")]
    None,
    K,
    C,
    KC,
}

impl LabelKind {
    /// Rank used for tie-breaking: KC > C > K > NONE.
    pub fn symmetry_rank(self) -> u8 {
        match self {
            LabelKind::KC => 3,
            LabelKind::C => 2,
            LabelKind::K => 1,
            LabelKind::None => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LabelKind::KC => "KC",
            LabelKind::K => "K",
            LabelKind::C => "C",
            LabelKind::None => "NONE",
        }
    }

    /// The symmetries this label preserves.
    pub fn symmetries(self) -> Vec<Symmetry> {
        match self {
            LabelKind::KC => vec![Symmetry::Kms, Symmetry::Conj],
            LabelKind::K => vec![Symmetry::Kms],
            LabelKind::C => vec![Symmetry::Conj],
            LabelKind::None => vec![],
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LabelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "KC" => Ok(LabelKind::KC),
            "K" => Ok(LabelKind::K),
            "C" => Ok(LabelKind::C),
            "NONE" => Ok(LabelKind::None),
            _ => Err(Error::Format(format!("unknown label '{s}'"))),
        }
    }
}

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryLabel {
    pub kind: LabelKind,
    pub nu_k: f64,
    pub nu_c: f64,
}

pub fn classify(g: &TwoPointFunction, tol: f64) -> Result<SymmetryLabel> {
    let nu_k = violation(g, Symmetry::Kms)?;
    let nu_c = violation(g, Symmetry::Conj)?;
    let kind = match (nu_k <= tol, nu_c <= tol) {
        (true, true) => LabelKind::KC,
        (true, false) => LabelKind::K,
        (false, true) => LabelKind::C,
        (false, false) => LabelKind::None,
    };
    Ok(SymmetryLabel { kind, nu_k, nu_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{free_green, ModelParams};
    use ContourIndex::{Minus, Plus};

    fn grid8() -> TimeGrid {
        // The grid type requires 16 points; the hand example only inspects 8 of them.
        TimeGrid::new(16.0, 16).unwrap()
    }

    #[test]
    fn kms_hand_example() {
        let g = grid8();
        let mut f = TwoPointFunction::zeros(&g);
        for k in 0..16 {
            f.component_mut(Plus, Minus)[k] = Complex64::new(g.time(k), 0.0);
        }
        let p = project_kms(&f);
        for k in 0..16 {
            assert_eq!(p.component(Plus, Minus)[k], Complex64::new(g.time(k) / 2.0, 0.0));
            assert_eq!(p.component(Minus, Plus)[k], Complex64::new(g.time(g.mirror(k)) / 2.0, 0.0));
        }
    }

    #[test]
    fn conjugation_hand_example() {
        let g = grid8();
        let mut f = TwoPointFunction::zeros(&g);
        f.component_mut(Plus, Plus).fill(Complex64::new(0.0, 1.0));
        let p = project_conjugation(&f);
        assert!(p.component(Plus, Plus).iter().all(|z| *z == Complex64::new(0.0, 0.5)));
        assert!(p.component(Minus, Minus).iter().all(|z| *z == Complex64::new(0.0, -0.5)));
    }

    #[test]
    fn real_symmetric_is_conjugation_fixed_point() {
        let g = grid8();
        let f = TwoPointFunction::from_fn(&g, |a, b, t| Complex64::new(if a == b { t.cos() } else { t.sin() }, 0.0));
        assert_eq!(project_conjugation(&f), f);
        assert_eq!(violation(&f, Symmetry::Conj).unwrap(), 0.0);
    }

    #[test]
    fn antisymmetric_has_unit_violation() {
        let g = grid8();
        let f = TwoPointFunction::from_fn(&g, |a, b, _| {
            if a == b {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((violation(&f, Symmetry::Conj).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_function_is_degenerate() {
        assert!(violation(&TwoPointFunction::zeros(&grid8()), Symmetry::Kms).is_err());
    }

    #[test]
    fn free_green_is_kc() {
        let grid = TimeGrid::new(50.0, 1024).unwrap();
        for &(v, gamma) in &[(1.0, 0.0), (0.4, 2.0), (2.0, 4.0)] {
            let p = ModelParams::new(1.0, v, gamma, 0.0, 4).unwrap();
            let f = TwoPointFunction::try_from_fn(&grid, |a, b, t| free_green(&p, a, b, t)).unwrap();
            let label = classify(&f, DEFAULT_CLASSIFY_TOL).unwrap();
            assert_eq!(label.kind, LabelKind::KC);
            assert!(label.nu_k < 1e-12 && label.nu_c < 1e-12);
        }
    }

    #[test]
    fn perturbation_breaks_conjugation_only() {
        let grid = TimeGrid::new(50.0, 256).unwrap();
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.0, 4).unwrap();
        let base = TwoPointFunction::try_from_fn(&grid, |a, b, t| free_green(&p, a, b, t)).unwrap();
        for (eps, expect) in [(1e-9, LabelKind::KC), (1e-2, LabelKind::None)] {
            let mut f = base.clone();
            for k in 0..grid.n_points() {
                let noise = Complex64::new(0.0, eps * ((k * 7919 % 101) as f64 / 50.0 - 1.0));
                f.component_mut(Plus, Minus)[k] += noise;
            }
            assert_eq!(classify(&f, DEFAULT_CLASSIFY_TOL).unwrap().kind, expect);
        }
        // A perturbation that respects KMS but not conjugation.
        let mut f = base.clone();
        for k in 0..grid.n_points() {
            let d = Complex64::new(0.0, 0.05 * (-grid.time(k).abs()).exp());
            f.component_mut(Plus, Minus)[k] += d;
            f.component_mut(Minus, Plus)[k] += d;
        }
        assert_eq!(classify(&f, DEFAULT_CLASSIFY_TOL).unwrap().kind, LabelKind::K);
    }

    #[test]
    fn images_form_a_group_of_involutions() {
        let grid = grid8();
        let f = TwoPointFunction::from_fn(&grid, |a, b, t| {
            Complex64::new(t + a.sign(), t * t - b.sign() * 0.3 + a.sign() * 0.1)
        });
        for img in Image::all() {
            assert_eq!(img.apply(&img.apply(&f)), f);
            assert_eq!(orbit_distance(&f, &img.apply(&f)), 0.0);
        }
        let kc = Image::KMS.apply(&Image::CONJ.apply(&f));
        let ck = Image::CONJ.apply(&Image::KMS.apply(&f));
        assert_eq!(kc, ck);
    }
}
