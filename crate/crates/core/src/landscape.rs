//! Residual-energy landscape of the Ising ring in the pseudo-spin picture.
//!
//! Each wave-vector `k` contributes
//! `ε_k = 1 − b_kᵀ · R_z(4β_P) R_b(4γ_P) ⋯ R_z(4β_1) R_b(4γ_1) · ẑ`, a number in
//! `[0, 2]`. When `2P < N` the light cone of one link fits in a reduced chain
//! of `2P + 2` sites whose boundary can be chosen anti-periodic, giving
//! `ε = (1 + Σ_ABC ε_k)/(2P + 2)` independent of `N`. Otherwise the full
//! periodic chain is needed and `ε = Σ_PBC ε_k / N`.
//!
//! Mode sums always run in ascending `k`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{domain, Result};
use crate::geometry::BlochVector;
use crate::schedule::AngleSchedule;
use crate::wavevector::{Boundary, WaveVectorSet};

/// Which mode sum produced a residual energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `2P < N`: reduced chain of `2P + 2` sites with anti-periodic boundary.
    AbcReduced,
    /// `2P ≥ N`: the full periodic ring.
    PbcFull,
}

/// Total residual energy together with its per-mode decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBreakdown {
    pub total: f64,
    /// `(k, ε_k)` pairs in ascending `k`.
    pub per_mode: Vec<(f64, f64)>,
    pub regime: Regime,
}

impl ResidualBreakdown {
    /// Recombines `per_mode` with the regime's offset and weight.
    pub fn reconstruct(&self) -> f64 {
        let (offset, weight) = match self.regime {
            Regime::AbcReduced => {
                let w = 1.0 / (2 * self.per_mode.len() + 2) as f64;
                (w, w)
            }
            Regime::PbcFull => (0.0, 1.0 / (2 * self.per_mode.len()) as f64),
        };
        offset + weight * self.per_mode.iter().map(|&(_, e)| e).sum::<f64>()
    }
}

/// Precomputed mode set and normalization for fixed `(N, P)`.
#[derive(Debug, Clone)]
pub struct Landscape {
    n_sites: usize,
    depth: usize,
    regime: Regime,
    modes: WaveVectorSet,
    axes: Vec<BlochVector>,
    offset: f64,
    weight: f64,
}

/// Scratch buffers reused across evaluations.
#[derive(Debug, Default, Clone)]
struct Trig {
    cg: Vec<f64>,
    sg: Vec<f64>,
    cb: Vec<f64>,
    sb: Vec<f64>,
}

impl Trig {
    fn fill(&mut self, gamma: &[f64], beta: &[f64]) {
        self.cg.clear();
        self.sg.clear();
        self.cb.clear();
        self.sb.clear();
        for (&g, &b) in gamma.iter().zip(beta) {
            let (s, c) = (4.0 * g).sin_cos();
            self.sg.push(s);
            self.cg.push(c);
            let (s, c) = (4.0 * b).sin_cos();
            self.sb.push(s);
            self.cb.push(c);
        }
    }
}

impl Landscape {
    pub fn new(n_sites: usize, depth: usize) -> Result<Self> {
        if n_sites < 4 || !n_sites.is_multiple_of(2) {
            return Err(domain("ring size must be even and at least 4"));
        }
        if depth == 0 {
            return Err(domain("depth must be at least 1"));
        }
        let (regime, modes, offset, weight) = if 2 * depth < n_sites {
            let nr = 2 * depth + 2;
            let w = 1.0 / nr as f64;
            (Regime::AbcReduced, WaveVectorSet::new(Boundary::AntiPeriodic, nr)?, w, w)
        } else {
            let w = 1.0 / n_sites as f64;
            (Regime::PbcFull, WaveVectorSet::new(Boundary::Periodic, n_sites)?, 0.0, w)
        };
        let axes = modes.values().iter().map(|&k| BlochVector::cost_axis(k)).collect();
        Ok(Landscape { n_sites, depth, regime, modes, axes, offset, weight })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn modes(&self) -> &WaveVectorSet {
        &self.modes
    }

    /// The lower bound this landscape can reach: `offset` of the mode sum.
    pub fn bound(&self) -> f64 {
        self.offset
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        assert_eq!(x.len(), 2 * self.depth, "parameter vector has wrong length");
        x.split_at(self.depth)
    }

    /// Residual energy at the packed point `[γ.., β..]`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let (gamma, beta) = self.split(x);
        let mut trig = Trig::default();
        trig.fill(gamma, beta);
        let sum: f64 = self.axes.iter().map(|axis| mode_forward(axis, &trig)).sum();
        self.offset + self.weight * sum
    }

    /// Per-mode contributions in ascending `k`.
    pub fn per_mode(&self, x: &[f64]) -> Vec<(f64, f64)> {
        let (gamma, beta) = self.split(x);
        let mut trig = Trig::default();
        trig.fill(gamma, beta);
        self.modes.values().iter().zip(&self.axes).map(|(&k, axis)| (k, mode_forward(axis, &trig))).collect()
    }

    /// Residual energy and its gradient (written into `grad`, packed like `x`).
    ///
    /// Reverse-mode: the forward pass stores the Bloch vector after every
    /// rotation, the backward pass carries the cotangent of `ε_k` through the
    /// transposed rotations.
    pub fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let (gamma, beta) = self.split(x);
        assert_eq!(grad.len(), x.len());
        grad.iter_mut().for_each(|g| *g = 0.0);
        let p = self.depth;
        let mut trig = Trig::default();
        trig.fill(gamma, beta);
        // after_cost[m] = R_b(4γ_m) v_{m-1}, after_mix[m] = R_z(4β_m) after_cost[m]
        let mut after_cost = alloc::vec![BlochVector::default(); p];
        let mut after_mix = alloc::vec![BlochVector::default(); p];
        let z = BlochVector::Z;
        let mut sum = 0.0;
        for axis in &self.axes {
            let mut v = z;
            for m in 0..p {
                v = v.rotated_cs(axis, trig.cg[m], trig.sg[m]);
                after_cost[m] = v;
                v = v.rotated_cs(&z, trig.cb[m], trig.sb[m]);
                after_mix[m] = v;
            }
            sum += 1.0 - axis.dot(&v);
            let mut w = -*axis;
            for m in (0..p).rev() {
                let gen = BlochVector::generator(&z, &after_mix[m]);
                grad[p + m] += 4.0 * w.dot(&gen);
                // transpose of a rotation is the rotation by the opposite angle
                w = w.rotated_cs(&z, trig.cb[m], -trig.sb[m]);
                let gen = BlochVector::generator(axis, &after_cost[m]);
                grad[m] += 4.0 * w.dot(&gen);
                w = w.rotated_cs(axis, trig.cg[m], -trig.sg[m]);
            }
        }
        grad.iter_mut().for_each(|g| *g *= self.weight);
        self.offset + self.weight * sum
    }
}

fn mode_forward(axis: &BlochVector, trig: &Trig) -> f64 {
    let z = BlochVector::Z;
    let mut v = z;
    for m in 0..trig.cg.len() {
        v = v.rotated_cs(axis, trig.cg[m], trig.sg[m]);
        v = v.rotated_cs(&z, trig.cb[m], trig.sb[m]);
    }
    1.0 - axis.dot(&v)
}

/// Bloch vector `R_z(4β_P) R_b(4γ_P) ⋯ ẑ` of mode `k` after the full schedule.
pub fn mode_bloch_vector(k: f64, sched: &AngleSchedule) -> BlochVector {
    let axis = BlochVector::cost_axis(k);
    sched
        .layers()
        .fold(BlochVector::Z, |v, (g, b)| v.rotated(&axis, 4.0 * g).rotated(&BlochVector::Z, 4.0 * b))
}

/// Contribution `ε_k ∈ [0, 2]` of the pseudo-spin with wave-vector `k`.
pub fn epsilon_k(k: f64, sched: &AngleSchedule) -> f64 {
    1.0 - BlochVector::cost_axis(k).dot(&mode_bloch_vector(k, sched))
}

/// Residual energy of the depth-P circuit on a ring of `n_sites` sites.
pub fn residual_energy(n_sites: usize, sched: &AngleSchedule) -> Result<ResidualBreakdown> {
    let land = Landscape::new(n_sites, sched.depth())?;
    let x = sched.to_flat();
    let per_mode = land.per_mode(&x);
    let total = land.offset + land.weight * per_mode.iter().map(|&(_, e)| e).sum::<f64>();
    Ok(ResidualBreakdown { total, per_mode, regime: land.regime })
}

/// Gradient `[∂ε/∂γ_1.., ∂ε/∂β_1..]` of the residual energy.
pub fn residual_gradient(n_sites: usize, sched: &AngleSchedule) -> Result<Vec<f64>> {
    let land = Landscape::new(n_sites, sched.depth())?;
    let x = sched.to_flat();
    let mut g = alloc::vec![0.0; x.len()];
    land.value_and_gradient(&x, &mut g);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rotation_about_axis, Mat3};
    use core::f64::consts::{FRAC_PI_2, PI};

    /// Independent dense evaluation: build every rotation matrix explicitly
    /// and multiply them together before touching ẑ.
    fn dense_epsilon_k(k: f64, sched: &AngleSchedule) -> f64 {
        let b = BlochVector::cost_axis(k);
        let mut total = Mat3::IDENTITY;
        for (g, bt) in sched.layers() {
            let rb = rotation_about_axis(&b, 4.0 * g).unwrap();
            let rz = rotation_about_axis(&BlochVector::Z, 4.0 * bt).unwrap();
            total = rz * rb * total;
        }
        1.0 - b.dot(&total.apply(&BlochVector::Z))
    }

    fn sched(g: &[f64], b: &[f64]) -> AngleSchedule {
        AngleSchedule::new(g.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn identity_schedule_gives_one_minus_cos_k() {
        for p in 1..5 {
            for &k in &[0.1, 1.0, 2.5] {
                let e = epsilon_k(k, &AngleSchedule::zeros(p));
                assert!((e - (1.0 - k.cos())).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn single_layer_matches_dense_products() {
        let s = sched(&[PI / 8.0], &[PI / 8.0]);
        let v = dense_epsilon_k(FRAC_PI_2, &s);
        assert!((epsilon_k(FRAC_PI_2, &s) - v).abs() < 1e-14);
        // 4γ = π/2 about -x̂ sends ẑ to ∓ŷ, then R_z(π/2) takes it onto -x̂ = b.
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn dense_agreement_random() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for p in 1..6 {
            let g: Vec<f64> = (0..p).map(|_| next() * FRAC_PI_2).collect();
            let b: Vec<f64> = (0..p).map(|_| next() * FRAC_PI_2).collect();
            let s = sched(&g, &b);
            let k = next() * PI;
            assert!((epsilon_k(k, &s) - dense_epsilon_k(k, &s)).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_schedule_is_one_half() {
        for p in 1..6 {
            let r = residual_energy(100, &AngleSchedule::zeros(p)).unwrap();
            assert_eq!(r.regime, Regime::AbcReduced);
            assert!((r.total - 0.5).abs() < 1e-14);
        }
        let r = residual_energy(8, &AngleSchedule::zeros(4)).unwrap();
        assert_eq!(r.regime, Regime::PbcFull);
        assert!((r.total - 0.5).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_matches_total() {
        let s = sched(&[0.3, 1.1, 0.2], &[0.7, 0.1, 1.4]);
        for n in [4, 6, 8, 20] {
            let r = residual_energy(n, &s).unwrap();
            assert!((r.reconstruct() - r.total).abs() < 1e-14);
        }
    }

    #[test]
    fn controllable_schedule_reaches_zero() {
        // γ = (π/4, π/4, π/8, π/4), β = reversed γ
        let q = PI / 4.0;
        let e = PI / 8.0;
        let s = sched(&[q, q, e, q], &[q, e, q, q]);
        assert!(residual_energy(8, &s).unwrap().total < 1e-12);
    }

    #[test]
    fn gradient_matches_value() {
        let land = Landscape::new(50, 3).unwrap();
        let x = [0.3, 0.9, 0.2, 1.1, 0.4, 0.8];
        let mut g = [0.0; 6];
        let v = land.value_and_gradient(&x, &mut g);
        assert!((v - land.value(&x)).abs() < 1e-15);
        for i in 0..6 {
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (land.value(&xp) - land.value(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-8, "component {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn bad_sizes_rejected() {
        let s = AngleSchedule::zeros(2);
        assert!(residual_energy(7, &s).is_err());
        assert!(residual_energy(2, &s).is_err());
    }
}
