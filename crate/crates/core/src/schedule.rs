use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_traits::Float;

use crate::error::{domain, Error, Result};

/// The 2P variational angles of a depth-P circuit.
///
/// Layer `m` applies `exp(-i γ_m H_z)` and then `exp(-i β_m H_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSchedule {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl AngleSchedule {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::LengthMismatch { gamma: gamma.len(), beta: beta.len() });
        }
        if gamma.is_empty() {
            return Err(domain("a schedule needs at least one layer"));
        }
        Ok(AngleSchedule { gamma, beta })
    }

    /// All-zero schedule of depth `p`.
    pub fn zeros(p: usize) -> Self {
        assert!(p >= 1, "depth must be positive");
        AngleSchedule { gamma: alloc::vec![0.0; p], beta: alloc::vec![0.0; p] }
    }

    /// Builds a schedule from the packed layout `[γ_1..γ_P, β_1..β_P]`.
    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(domain("packed parameter vector must have even length"));
        }
        let p = x.len() / 2;
        Self::new(x[..p].to_vec(), x[p..].to_vec())
    }

    /// Packs the angles as `[γ_1..γ_P, β_1..β_P]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.depth());
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.beta);
        v
    }

    pub fn depth(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn layers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gamma.iter().copied().zip(self.beta.iter().copied())
    }

    /// Total annealing time `Σ (γ_m + β_m)`.
    pub fn total_time(&self) -> f64 {
        self.layers().map(|(g, b)| g + b).sum()
    }

    /// Reduces every angle into `[0, π/2)`, the landscape's period cell.
    pub fn canonicalized(&self) -> Self {
        AngleSchedule {
            gamma: self.gamma.iter().map(|&a| canonical_angle(a)).collect(),
            beta: self.beta.iter().map(|&a| canonical_angle(a)).collect(),
        }
    }

    /// Schedule with both vectors in reverse layer order.
    pub fn reversed(&self) -> Self {
        let mut gamma = self.gamma.clone();
        let mut beta = self.beta.clone();
        gamma.reverse();
        beta.reverse();
        AngleSchedule { gamma, beta }
    }

    pub fn is_finite(&self) -> bool {
        self.layers().all(|(g, b)| g.is_finite() && b.is_finite())
    }
}

/// `a` reduced modulo π/2 into `[0, π/2)`.
pub fn canonical_angle(a: f64) -> f64 {
    let r = a - FRAC_PI_2 * (a / FRAC_PI_2).floor();
    if !(0.0..FRAC_PI_2).contains(&r) {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle of circumference π/2.
pub fn periodic_distance(a: f64, b: f64) -> f64 {
    let d = canonical_angle(a - b);
    d.min(FRAC_PI_2 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_mismatch_is_reported() {
        let err = AngleSchedule::new(alloc::vec![0.1, 0.2], alloc::vec![0.3]).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { gamma: 2, beta: 1 });
        assert!(AngleSchedule::new(Vec::new(), Vec::new()).is_err());
    }

    #[test]
    fn flat_round_trip() {
        let s = AngleSchedule::new(alloc::vec![0.1, 0.2], alloc::vec![0.3, 0.4]).unwrap();
        assert_eq!(AngleSchedule::from_flat(&s.to_flat()).unwrap(), s);
        assert!((s.total_time() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_angle_range() {
        for &a in &[-7.3, -FRAC_PI_2, -1e-18, 0.0, 0.4, FRAC_PI_2, 3.0, 100.0] {
            let c = canonical_angle(a);
            assert!((0.0..FRAC_PI_2).contains(&c), "{a} -> {c}");
        }
        assert!(periodic_distance(1e-9, FRAC_PI_2 - 1e-9) < 3e-9);
    }
}
