//! Bloch vectors and 3×3 rotations.
//!
//! Rotation handedness: `rotation_about_axis(n, θ)` turns vectors clockwise
//! about `n` when viewed from the tip of `n`, i.e. it is the right-handed
//! rotation by `-θ`. With this choice the adjoint action of the per-mode
//! unitary `exp(i 2β τ_z) exp(i 2γ b·τ)` is exactly
//! `R_z(4β) R_b(4γ)`, so Bloch vectors from the spinor dynamics and the
//! rotation chain coincide. The residual energy itself is blind to the
//! handedness: mirroring through the xz-plane fixes both axes and flips every
//! angle.

use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use crate::error::{domain, Result};

/// Sign of the rotation generator; `-1` is the calibrated clockwise convention.
pub const HANDEDNESS: f64 = -1.0;

/// A real 3-vector in the Bloch (SO(3)) picture of one pseudo-spin mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const Z: BlochVector = BlochVector([0.0, 0.0, 1.0]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector([x, y, z])
    }

    /// Axis `b_k = (-sin k, 0, cos k)` of the cost rotation for mode `k`.
    ///
    /// At `k = π` the sine is snapped to zero so that the critical axis is
    /// exactly `-z`.
    pub fn cost_axis(k: f64) -> Self {
        let s = if k == core::f64::consts::PI { 0.0 } else { k.sin() };
        BlochVector([-s, 0.0, k.cos()])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a, b, c] = self.0;
        let [d, e, f] = o.0;
        BlochVector([b * f - c * e, c * d - a * f, a * e - b * d])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        BlochVector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    /// Rotates `self` by `angle` about the unit `axis` (see module docs for
    /// the handedness). The axis is assumed to be normalized.
    #[inline]
    pub fn rotated(&self, axis: &BlochVector, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        self.rotated_cs(axis, c, s)
    }

    #[inline]
    pub(crate) fn rotated_cs(&self, axis: &BlochVector, c: f64, s: f64) -> Self {
        let s = HANDEDNESS * s;
        let nxv = axis.cross(self);
        let along = axis.dot(self) * (1.0 - c);
        BlochVector([
            self.0[0] * c + nxv.0[0] * s + axis.0[0] * along,
            self.0[1] * c + nxv.0[1] * s + axis.0[1] * along,
            self.0[2] * c + nxv.0[2] * s + axis.0[2] * along,
        ])
    }

    /// Derivative of `R_axis(θ) v` with respect to θ, given `rotated = R_axis(θ) v`.
    #[inline]
    pub(crate) fn generator(axis: &BlochVector, rotated: &BlochVector) -> Self {
        axis.cross(rotated).scale(HANDEDNESS)
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        BlochVector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        BlochVector([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Row-major 3×3 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, v: &BlochVector) -> BlochVector {
        let m = &self.0;
        let v = &v.0;
        BlochVector([
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ])
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|l| self.0[i][l] * o.0[l][j]).sum();
            }
        }
        Mat3(out)
    }
}

/// Rodrigues rotation matrix by `angle` about a unit `axis`.
pub fn rotation_about_axis(axis: &BlochVector, angle: f64) -> Result<Mat3> {
    if !((axis.norm() - 1.0).abs() <= 1e-10) {
        return Err(domain("rotation axis must have unit norm"));
    }
    let (s, c) = angle.sin_cos();
    let s = HANDEDNESS * s;
    let [x, y, z] = axis.0;
    let t = 1.0 - c;
    // R = c I + s [n]_x + t n nᵀ
    Ok(Mat3([
        [c + t * x * x, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, c + t * y * y, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, c + t * z * z],
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn zero_and_full_turn_are_identity() {
        let r0 = rotation_about_axis(&BlochVector::Z, 0.0).unwrap();
        assert_eq!(r0, Mat3::IDENTITY);
        let r1 = rotation_about_axis(&BlochVector::Z, 2.0 * PI).unwrap();
        assert!(r1.max_abs_diff(&Mat3::IDENTITY) < 1e-12);
    }

    #[test]
    fn quarter_turn_about_z_is_clockwise() {
        let r = rotation_about_axis(&BlochVector::Z, PI / 2.0).unwrap();
        let v = r.apply(&BlochVector::new(1.0, 0.0, 0.0));
        assert!((v.x()).abs() < 1e-15);
        assert!((v.y() + 1.0).abs() < 1e-15);
        assert!(v.z().abs() < 1e-15);
    }

    #[test]
    fn matrix_is_proper_orthogonal_and_matches_vector_form() {
        let axis = BlochVector::cost_axis(0.7);
        for &a in &[0.3, 1.9, -2.4, 5.0] {
            let r = rotation_about_axis(&axis, a).unwrap();
            assert!((r.determinant() - 1.0).abs() < 1e-12);
            assert!((r * r.transpose()).max_abs_diff(&Mat3::IDENTITY) < 1e-12);
            let v = BlochVector::new(0.2, -0.5, 0.8);
            let d = r.apply(&v) - v.rotated(&axis, a);
            assert!(d.norm() < 1e-15);
        }
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(rotation_about_axis(&BlochVector::new(0.0, 0.0, 1.1), 0.1).is_err());
    }

    #[test]
    fn cost_axis_is_unit_and_exact_at_pi() {
        for i in 1..50 {
            let k = PI * i as f64 / 50.0;
            assert!((BlochVector::cost_axis(k).norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(BlochVector::cost_axis(PI), BlochVector::new(0.0, 0.0, -1.0));
    }
}
