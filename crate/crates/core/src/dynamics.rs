//! Per-mode two-level dynamics of the full periodic ring.
//!
//! Mode `k` carries a spinor `ψ_k`, starting at `(1, 0)` (Bloch vector ẑ), and
//! each layer multiplies it by
//! `U_m = (cos 2β_m + i sin 2β_m τ_z)(cos 2γ_m + i sin 2γ_m b_k·τ)`.
//! The mode Hamiltonian along an anneal is `H_k(s) = −2 (s b_k + (1 − s) ẑ)·τ`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{domain, Result};
use crate::geometry::BlochVector;
use crate::schedule::AngleSchedule;
use crate::schedules::{digitize, ContinuousSchedule, DtMode, Family, Sampling};
use crate::wavevector::{Boundary, WaveVectorSet};

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `c + i s n·τ` for a real unit axis `n`.
fn su2(c: f64, s: f64, n: &BlochVector) -> Mat2 {
    let i = Complex64::i();
    [
        [Complex64::new(c, 0.0) + i * s * n.z(), i * s * n.x() + s * n.y()],
        [i * s * n.x() - s * n.y(), Complex64::new(c, 0.0) - i * s * n.z()],
    ]
}

/// Largest entry-wise modulus of `a − b`.
pub fn mat_distance(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// One layer of the mode dynamics, as the explicit product of the mixer and
/// cost factors.
pub fn mode_unitary(k: f64, gamma: f64, beta: f64) -> Mat2 {
    let (s2b, c2b) = (2.0 * beta).sin_cos();
    let (s2g, c2g) = (2.0 * gamma).sin_cos();
    let mixer = su2(c2b, s2b, &BlochVector::Z);
    let cost = su2(c2g, s2g, &BlochVector::cost_axis(k));
    mat_mul(&mixer, &cost)
}

/// `U_m` written as `q₀ + i q·τ`.
fn quaternion(k: f64, gamma: f64, beta: f64) -> (f64, BlochVector) {
    let (s1, c1) = (2.0 * beta).sin_cos();
    let (s2, c2) = (2.0 * gamma).sin_cos();
    let b = BlochVector::cost_axis(k);
    let q0 = c1 * c2 - s1 * s2 * b.z();
    let q = b.scale(c1 * s2) + BlochVector::Z.scale(s1 * c2) - BlochVector::Z.cross(&b).scale(s1 * s2);
    (q0, q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub spinor: [Complex64; 2],
    pub wave_vector: f64,
}

impl ModeState {
    /// The spinor with Bloch vector ẑ.
    pub fn initial(k: f64) -> Self {
        ModeState { spinor: [ONE, ZERO], wave_vector: k }
    }

    pub fn norm(&self) -> f64 {
        (self.spinor[0].norm_sqr() + self.spinor[1].norm_sqr()).sqrt()
    }

    pub fn bloch(&self) -> BlochVector {
        let [a, b] = self.spinor;
        let ab = a.conj() * b;
        BlochVector::new(2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr())
    }

    pub fn apply(&mut self, u: &Mat2) {
        let [a, b] = self.spinor;
        self.spinor = [u[0][0] * a + u[0][1] * b, u[1][0] * a + u[1][1] * b];
    }

    /// `1 − ⟨b_k·τ⟩`.
    pub fn residual(&self) -> f64 {
        1.0 - BlochVector::cost_axis(self.wave_vector).dot(&self.bloch())
    }
}

fn pbc_modes(n_sites: usize) -> Result<WaveVectorSet> {
    WaveVectorSet::new(Boundary::Periodic, n_sites)
}

/// Mode states after every layer: entry `m` of each trajectory is the state
/// after `m` layers, so trajectories have `P + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    pub wave_vector: f64,
    pub states: Vec<ModeState>,
}

pub fn evolve_modes(n_sites: usize, sched: &AngleSchedule) -> Result<Vec<ModeTrajectory>> {
    let modes = pbc_modes(n_sites)?;
    Ok(modes
        .values()
        .iter()
        .map(|&k| {
            let mut st = ModeState::initial(k);
            let mut states = Vec::with_capacity(sched.depth() + 1);
            states.push(st);
            for (g, b) in sched.layers() {
                st.apply(&mode_unitary(k, g, b));
                states.push(st);
            }
            ModeTrajectory { wave_vector: k, states }
        })
        .collect())
}

/// Residual energy of the full ring from the evolved spinors, `Σ_k ε_k / N`.
pub fn evolved_residual(n_sites: usize, sched: &AngleSchedule) -> Result<f64> {
    let modes = pbc_modes(n_sites)?;
    let total: f64 = modes
        .values()
        .iter()
        .map(|&k| {
            let mut st = ModeState::initial(k);
            for (g, b) in sched.layers() {
                st.apply(&mode_unitary(k, g, b));
            }
            st.residual()
        })
        .sum();
    Ok(total / n_sites as f64)
}

fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(p) + h(1.0 - p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    /// Step-averaged total entropy `S`.
    pub entropy: f64,
    /// `4S/N`.
    pub normalized: f64,
    /// `S_m`, summed over modes, per step.
    pub per_step: Vec<f64>,
    /// Steps where some mode has `U_m = ±1` and the eigenbasis is arbitrary.
    pub degenerate_steps: Vec<usize>,
    /// Largest `|p₊ + p₋ − 1|` seen.
    pub probability_error: f64,
}

/// Average Shannon entropy of the state in the eigenbasis of each `U_m`.
///
/// The projection of a mode onto the eigenvectors of `U_m` is the same
/// before and after the step. When `U_m` is a multiple of the identity the
/// τ_z basis is used and the step is flagged.
pub fn shannon_adiabaticity(n_sites: usize, sched: &AngleSchedule) -> Result<EntropyReport> {
    let modes = pbc_modes(n_sites)?;
    let p = sched.depth();
    let mut per_step = alloc::vec![0.0; p];
    let mut degenerate = alloc::vec![false; p];
    let mut probability_error: f64 = 0.0;
    for &k in modes.values() {
        let mut st = ModeState::initial(k);
        for (m, (g, b)) in sched.layers().enumerate() {
            let (_, q) = quaternion(k, g, b);
            let qn = q.norm();
            let axis = if qn > 0.0 {
                q.scale(1.0 / qn)
            } else {
                degenerate[m] = true;
                BlochVector::Z
            };
            let r = st.bloch();
            let plus = 0.5 * (1.0 + axis.dot(&r));
            let minus = 0.5 * (1.0 - axis.dot(&r));
            probability_error = probability_error.max((plus + minus - 1.0).abs());
            per_step[m] += binary_entropy(plus.clamp(0.0, 1.0));
            st.apply(&mode_unitary(k, g, b));
        }
    }
    let entropy = per_step.iter().sum::<f64>() / p as f64;
    Ok(EntropyReport {
        entropy,
        normalized: 4.0 * entropy / n_sites as f64,
        per_step,
        degenerate_steps: degenerate.iter().enumerate().filter(|(_, &d)| d).map(|(m, _)| m).collect(),
        probability_error,
    })
}

/// Effective field of one layer: `U_m = exp(i Δt ω·τ)`, `Δt = γ + β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveField {
    /// `ω` from the principal logarithm, `|ω Δt| ∈ [0, π]`.
    pub omega_vector: BlochVector,
    pub omega_norm: f64,
    pub dt: f64,
    /// Vector part `q` of `U_m = q₀ + i q·τ`; equals `sin(|ω|Δt) ω̂`.
    pub vector_part: BlochVector,
    /// Scalar part `q₀ = cos(|ω|Δt)`.
    pub scalar_part: f64,
    /// False when `|ω Δt| = π` and the logarithm is not unique.
    pub principal: bool,
}

impl EffectiveField {
    /// `exp(i Δt ω·τ)`.
    pub fn exponential(&self) -> Mat2 {
        let theta = self.omega_norm * self.dt;
        let axis = if self.omega_norm > 0.0 {
            self.omega_vector.scale(1.0 / self.omega_norm)
        } else {
            BlochVector::Z
        };
        let (s, c) = theta.sin_cos();
        su2(c, s, &axis)
    }
}

pub fn effective_field(k: f64, gamma: f64, beta: f64) -> Result<EffectiveField> {
    let dt = gamma + beta;
    if !(dt > 0.0) {
        return Err(domain("effective field needs γ + β > 0"));
    }
    if !(k > 0.0 && k <= PI) {
        return Err(domain("wave-vector must lie in (0, π]"));
    }
    let (q0, q) = quaternion(k, gamma, beta);
    let qn = q.norm();
    let theta = qn.atan2(q0);
    let omega_vector = if qn > 0.0 { q.scale(theta / (qn * dt)) } else { BlochVector::new(0.0, 0.0, 0.0) };
    Ok(EffectiveField {
        omega_vector,
        omega_norm: omega_vector.norm(),
        dt,
        vector_part: q,
        scalar_part: q0,
        principal: theta < PI,
    })
}

/// `|q|²` in the expanded trigonometric form,
/// `sin² 2(β−γ) + sin² k sin² 2β sin² 2γ + ½(1 + cos k) sin 4β sin 4γ`.
pub fn vector_part_norm_sqr_expanded(k: f64, gamma: f64, beta: f64) -> f64 {
    let d = (2.0 * (beta - gamma)).sin();
    let sk = k.sin();
    let (s2b, s2g) = ((2.0 * beta).sin(), (2.0 * gamma).sin());
    d * d + sk * sk * s2b * s2b * s2g * s2g + 0.5 * (1.0 + k.cos()) * (4.0 * beta).sin() * (4.0 * gamma).sin()
}

/// How a `(τ, ε)` point is produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunSpec {
    /// Digitized anneal with `P = τ/dt` uniform steps.
    Digitized { family: Family, c: f64, sampling: Sampling, dt: f64 },
    /// Continuous anneal, integrated per mode with fixed-step RK4.
    Continuous { family: Family, c: f64, step: f64 },
}

impl RunSpec {
    pub fn family(&self) -> Family {
        match *self {
            RunSpec::Digitized { family, .. } | RunSpec::Continuous { family, .. } => family,
        }
    }

    pub fn with_parameter(self, c: f64) -> Self {
        match self {
            RunSpec::Digitized { family, sampling, dt, .. } => RunSpec::Digitized { family, c, sampling, dt },
            RunSpec::Continuous { family, step, .. } => RunSpec::Continuous { family, c, step },
        }
    }
}

/// Default integrator step for continuous anneals.
pub const RK4_STEP: f64 = 0.01;

/// Residual energy of one anneal of length `tau` on a ring of `n_sites`.
pub fn defect_point(n_sites: usize, spec: &RunSpec, tau: f64) -> Result<f64> {
    match *spec {
        RunSpec::Digitized { family, c, sampling, dt } => {
            let p = (tau / dt).round();
            if p < 1.0 || (p * dt - tau).abs() > 1e-9 * tau {
                return Err(domain("τ must be a positive multiple of the step Δt"));
            }
            let sched = ContinuousSchedule::new(family, c, tau)?;
            let d = digitize(&sched, p as usize, sampling, DtMode::Uniform(dt))?;
            evolved_residual(n_sites, d.angles())
        }
        RunSpec::Continuous { family, c, step } => {
            let sched = ContinuousSchedule::new(family, c, tau)?;
            continuous_residual(n_sites, &sched, step)
        }
    }
}

/// `ε(τ)` over a grid of total times.
pub fn defect_scaling_run(n_sites: usize, spec: &RunSpec, tau_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    tau_grid.iter().map(|&tau| Ok((tau, defect_point(n_sites, spec, tau)?))).collect()
}

/// `dψ/dt = −i H_k(s(t)) ψ` with `H_k(s) = −2 (s b_k + (1 − s) ẑ)·τ`.
fn mode_rhs(b: &BlochVector, s: f64, psi: [Complex64; 2]) -> [Complex64; 2] {
    let h = b.scale(s) + BlochVector::Z.scale(1.0 - s);
    // −i H ψ = 2i (h·τ) ψ
    let i2 = Complex64::new(0.0, 2.0);
    let [a, c] = psi;
    let top = Complex64::new(h.z(), 0.0) * a + Complex64::new(h.x(), -h.y()) * c;
    let bot = Complex64::new(h.x(), h.y()) * a - Complex64::new(h.z(), 0.0) * c;
    [i2 * top, i2 * bot]
}

/// Continuous anneal of one mode: classical RK4 on the spinor.
pub fn evolve_mode_continuous(k: f64, sched: &ContinuousSchedule, step: f64) -> ModeState {
    let b = BlochVector::cost_axis(k);
    let n_steps = (sched.tau() / step).ceil().max(1.0) as usize;
    let h = sched.tau() / n_steps as f64;
    let mut psi = [ONE, ZERO];
    let add = |p: [Complex64; 2], d: [Complex64; 2], w: f64| [p[0] + d[0] * w, p[1] + d[1] * w];
    for i in 0..n_steps {
        let t = i as f64 * h;
        let s0 = sched.at_fraction(t / sched.tau());
        let sm = sched.at_fraction((t + 0.5 * h) / sched.tau());
        let s1 = sched.at_fraction((t + h) / sched.tau());
        let k1 = mode_rhs(&b, s0, psi);
        let k2 = mode_rhs(&b, sm, add(psi, k1, 0.5 * h));
        let k3 = mode_rhs(&b, sm, add(psi, k2, 0.5 * h));
        let k4 = mode_rhs(&b, s1, add(psi, k3, h));
        for j in 0..2 {
            psi[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
        }
    }
    ModeState { spinor: psi, wave_vector: k }
}

pub fn continuous_residual(n_sites: usize, sched: &ContinuousSchedule, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(domain("integrator step must be positive"));
    }
    let modes = pbc_modes(n_sites)?;
    let total: f64 = modes.values().iter().map(|&k| evolve_mode_continuous(k, sched, step).residual()).sum();
    Ok(total / n_sites as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Least squares of `ln ε` against `ln τ`: `ε ≈ prefactor · τ^exponent`.
pub fn fit_power_law(table: &[(f64, f64)]) -> Result<PowerLawFit> {
    if table.len() < 3 {
        return Err(domain("a power-law fit needs at least three points"));
    }
    if table.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(domain("power-law fits need positive data"));
    }
    let n = table.len() as f64;
    let pts: Vec<(f64, f64)> = table.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(domain("power-law fits need at least two distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(PowerLawFit { exponent: slope, prefactor: intercept.exp(), r_squared })
}

/// Rows of `table` whose abscissa lies in `[lo, hi]`.
pub fn fit_window(table: &[(f64, f64)], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    table.iter().copied().filter(|&(x, _)| x >= lo && x <= hi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{mode_bloch_vector, residual_energy};
    use crate::optim::closed_form_controllable;
    use crate::rng::stream;
    use rand::Rng;

    fn random_schedule(seed: u64, p: usize) -> AngleSchedule {
        AngleSchedule::from_flat(&crate::rng::random_start(seed, 0, p)).unwrap()
    }

    #[test]
    fn identity_at_zero_angles() {
        let u = mode_unitary(1.1, 0.0, 0.0);
        assert!(mat_distance(&u, &[[ONE, ZERO], [ZERO, ONE]]) < 1e-15);
    }

    #[test]
    fn unitary_and_quaternion_form_agree() {
        let mut rng = stream(17, 0);
        for _ in 0..200 {
            let (k, g, b) = (rng.gen::<f64>() * PI, rng.gen::<f64>() * 3.0, rng.gen::<f64>() * 3.0);
            let u = mode_unitary(k, g, b);
            let (q0, q) = quaternion(k, g, b);
            let qn = q.norm();
            let v = su2(q0, qn, &q.scale(1.0 / qn));
            assert!(mat_distance(&u, &v) < 1e-14);
            let uu = mat_mul(&u, &[[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]);
            assert!(mat_distance(&uu, &[[ONE, ZERO], [ZERO, ONE]]) < 1e-12);
            let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
            assert!((det.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_image_matches_rotation_product() {
        for seed in 0..20 {
            let sched = random_schedule(seed, 5);
            for traj in evolve_modes(14, &sched).unwrap() {
                for (m, st) in traj.states.iter().enumerate() {
                    assert!((st.norm() - 1.0).abs() < 1e-12);
                    let prefix = if m == 0 {
                        BlochVector::Z
                    } else {
                        let s = AngleSchedule::new(sched.gamma()[..m].to_vec(), sched.beta()[..m].to_vec())
                            .unwrap();
                        mode_bloch_vector(traj.wave_vector, &s)
                    };
                    assert!((st.bloch() - prefix).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn evolved_residual_matches_core() {
        assert!((evolved_residual(12, &AngleSchedule::zeros(3)).unwrap() - 0.5).abs() < 1e-15);
        for seed in 0..10 {
            let sched = random_schedule(100 + seed, 4);
            for n in [6, 10, 40] {
                let a = evolved_residual(n, &sched).unwrap();
                let b = residual_energy(n, &sched).unwrap().total;
                assert!((a - b).abs() < 1e-12, "N={n}: {a} vs {b}");
            }
        }
        let cf = closed_form_controllable(16, 8).unwrap();
        assert!(evolved_residual(16, &cf).unwrap() < 1e-12);
    }

    #[test]
    fn criticality_at_pi() {
        let u = mode_unitary(PI, 0.3, 0.3);
        // U = 1·cos 0: both eigenphases coincide
        assert!(mat_distance(&u, &[[ONE, ZERO], [ZERO, ONE]]) < 1e-15);
        let f = effective_field(PI, 0.3, 0.3).unwrap();
        assert_eq!(f.omega_norm, 0.0);
    }

    #[test]
    fn field_reconstructs_unitary() {
        let mut rng = stream(23, 0);
        for _ in 0..500 {
            let (k, g, b) =
                (1e-3 + rng.gen::<f64>() * (PI - 1e-3), rng.gen::<f64>() * 1.5, rng.gen::<f64>() * 1.5);
            let f = effective_field(k, g, b).unwrap();
            if !f.principal {
                continue;
            }
            assert!(mat_distance(&f.exponential(), &mode_unitary(k, g, b)) < 1e-12);
            assert!(((f.omega_norm * f.dt).cos() - f.scalar_part).abs() < 1e-12);
            let expanded = vector_part_norm_sqr_expanded(k, g, b);
            assert!((f.vector_part.norm().powi(2) - expanded).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_mixer_field() {
        let f = effective_field(0.7, 0.0, 0.4).unwrap();
        // log of exp(2iβ τ_z) is 2β along ẑ, over Δt = β
        assert!((f.omega_vector - BlochVector::new(0.0, 0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn linear_gap_near_pi() {
        let g = core::f64::consts::FRAC_PI_8;
        for d in [1e-2, 1e-3, 1e-4] {
            let f = effective_field(PI - d, g, g).unwrap();
            let ratio = f.omega_norm * f.dt / (d * (2.0 * g).sin());
            assert!((ratio - 1.0).abs() < d, "{ratio}");
        }
    }

    #[test]
    fn entropy_examples() {
        // pure mixer steps leave (1,0) in an eigenvector
        let s = AngleSchedule::new(alloc::vec![0.0; 4], alloc::vec![0.3; 4]).unwrap();
        let rep = shannon_adiabaticity(16, &s).unwrap();
        assert!(rep.entropy.abs() < 1e-12);
        let r = shannon_adiabaticity(20, &random_schedule(3, 6)).unwrap();
        assert!(r.entropy >= 0.0 && r.entropy <= 10.0 * 2f64.ln());
        assert!(r.probability_error < 1e-12);
        let deg = shannon_adiabaticity(8, &AngleSchedule::zeros(2)).unwrap();
        assert_eq!(deg.degenerate_steps, alloc::vec![0, 1]);
    }

    #[test]
    fn power_law_fits() {
        let t: Vec<(f64, f64)> =
            (1..8).map(|i| (i as f64 * 10.0, (i as f64 * 10.0).powf(-0.5) * 3.0)).collect();
        let f = fit_power_law(&t).unwrap();
        assert!((f.exponent + 0.5).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-12);
        let c: Vec<(f64, f64)> = (1..5).map(|i| (i as f64, 2.0)).collect();
        assert_eq!(fit_power_law(&c).unwrap().exponent, 0.0);
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn continuous_matches_fine_trotter() {
        let lin = ContinuousSchedule::new(Family::Linear, 0.0, 5.0).unwrap();
        let e1 = continuous_residual(8, &lin, 0.01).unwrap();
        let e2 = continuous_residual(8, &lin, 0.005).unwrap();
        assert!((e1 - e2).abs() < 1e-8);
        let fine =
            RunSpec::Digitized { family: Family::Linear, c: 0.0, sampling: Sampling::Midpoint, dt: 0.001 };
        let ed = defect_point(8, &fine, 5.0).unwrap();
        assert!((ed - e1).abs() < 1e-4);
    }
}
