use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// 2×2 complex matrix in contour order (+, -).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[Complex64::new(0.0, 0.0); 2]; 2]);

    pub fn new(pp: Complex64, pm: Complex64, mp: Complex64, mm: Complex64) -> Self {
        Mat2([[pp, pm], [mp, mm]])
    }

    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(p: Complex64, m: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2([[p, z], [z, m]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse via the adjugate; `None` if the determinant is exactly zero.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        let r = 1.0 / d;
        Some(Mat2([
            [self.0[1][1] * r, -self.0[0][1] * r],
            [-self.0[1][0] * r, self.0[0][0] * r],
        ]))
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = Complex64;
    fn index(&self, (a, b): (usize, usize)) -> &Complex64 {
        &self.0[a][b]
    }
}

impl IndexMut<(usize, usize)> for Mat2 {
    fn index_mut(&mut self, (a, b): (usize, usize)) -> &mut Complex64 {
        &mut self.0[a][b]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(mut self, rhs: Mat2) -> Mat2 {
        for a in 0..2 {
            for b in 0..2 {
                self.0[a][b] += rhs.0[a][b];
            }
        }
        self
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(mut self, rhs: Mat2) -> Mat2 {
        for a in 0..2 {
            for b in 0..2 {
                self.0[a][b] -= rhs.0[a][b];
            }
        }
        self
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = Mat2::ZERO;
        for a in 0..2 {
            for b in 0..2 {
                out.0[a][b] = self.0[a][0] * rhs.0[0][b] + self.0[a][1] * rhs.0[1][b];
            }
        }
        out
    }
}
