//! Brute-force state-vector simulation of the QAOA circuit on a spin ring.
//!
//! Basis states are indexed by bit strings with site `j` (1-based) stored in
//! bit `j − 1`; a set bit means spin down (`σᶻ = −1`). Cost layers are a
//! single diagonal phase pass, mixer layers are one butterfly pass per site.
//! No 2^N × 2^N matrix is ever formed.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::schedule::AngleSchedule;

/// Memory guard for the simulator.
pub const MAX_SITES: usize = 20;

/// A ring of `n_sites` spins whose closing link `(N, 1)` carries coupling
/// `boundary_coupling` (`+1` periodic, `−1` anti-periodic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    boundary_coupling: f64,
}

impl ChainSpec {
    pub fn new(n_sites: usize, boundary_coupling: f64) -> Result<Self> {
        if n_sites < 4 || !n_sites.is_multiple_of(2) {
            return Err(domain("oracle chain must be even with at least 4 sites"));
        }
        if n_sites > MAX_SITES {
            return Err(Error::ChainTooLarge { n_sites, max: MAX_SITES });
        }
        if boundary_coupling != 1.0 && boundary_coupling != -1.0 {
            return Err(domain("boundary coupling must be +1 or -1"));
        }
        Ok(ChainSpec { n_sites, boundary_coupling })
    }

    pub fn periodic(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, 1.0)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn boundary_coupling(&self) -> f64 {
        self.boundary_coupling
    }

    /// Diagonal of `H_z = Σ_{j<N} (σᶻ_j σᶻ_{j+1} − 1) + (J_b σᶻ_N σᶻ_1 − 1)`.
    pub fn cost_diagonal(&self) -> Vec<f64> {
        let n = self.n_sites;
        (0..1usize << n)
            .map(|idx| {
                let mut e = 0.0;
                for j in 0..n {
                    let a = spin(idx, j);
                    let b = spin(idx, (j + 1) % n);
                    let c = if j == n - 1 { self.boundary_coupling } else { 1.0 };
                    e += c * a * b - 1.0;
                }
                e
            })
            .collect()
    }
}

#[inline]
fn spin(idx: usize, site0: usize) -> f64 {
    if (idx >> site0) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Amplitudes of an `N`-spin state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|idx⟩`.
    pub fn basis(n_sites: usize, idx: usize) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::ChainTooLarge { n_sites, max: MAX_SITES });
        }
        if idx >= 1 << n_sites {
            return Err(domain("basis index out of range"));
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); 1 << n_sites];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_sites, amplitudes })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies `exp(−i γ H)` for a Hamiltonian given by its diagonal.
    pub fn apply_diagonal_phase(&mut self, diagonal: &[f64], gamma: f64) {
        for (a, &e) in self.amplitudes.iter_mut().zip(diagonal) {
            let (s, c) = (gamma * e).sin_cos();
            *a *= Complex64::new(c, -s);
        }
    }

    /// Applies `exp(−i β H_x)` with `H_x = −Σ σˣ_j`, i.e. `exp(i β σˣ_j)` on every site.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        let is = Complex64::new(0.0, s);
        for site in 0..self.n_sites {
            let stride = 1usize << site;
            for base in (0..self.amplitudes.len()).step_by(2 * stride) {
                for i in base..base + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    self.amplitudes[i] = a * c + is * b;
                    self.amplitudes[i + stride] = b * c + is * a;
                }
            }
        }
    }

    /// Applies `σˣ` on one site (0-based).
    pub fn flip_site(&mut self, site0: usize) {
        let mask = 1usize << site0;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                self.amplitudes.swap(i, i | mask);
            }
        }
    }

    /// Translation `T` with `T† σ_j T = σ_{j+1}` (and `σ_N → σ_1`):
    /// the spin pattern moves one site toward lower indices.
    pub fn translate(&self) -> StateVector {
        let n = self.n_sites;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (idx, a) in self.amplitudes.iter().enumerate() {
            // (T s)_j = s_{j+1}: bit j of the image is bit j+1 of the source
            let low = idx & 1;
            let image = (idx >> 1) | (low << (n - 1));
            out[image] = *a;
        }
        StateVector { n_sites: n, amplitudes: out }
    }

    /// Expectation of a diagonal operator.
    pub fn expectation_diagonal(&self, diagonal: &[f64]) -> f64 {
        self.amplitudes.iter().zip(diagonal).map(|(a, &d)| a.norm_sqr() * d).sum()
    }
}

/// `|+⟩^{⊗N}`.
pub fn initial_state(spec: &ChainSpec) -> StateVector {
    let dim = 1usize << spec.n_sites;
    let amp = 1.0 / (dim as f64).sqrt();
    StateVector { n_sites: spec.n_sites, amplitudes: alloc::vec![Complex64::new(amp, 0.0); dim] }
}

/// Runs the depth-P circuit on `|+⟩^{⊗N}`: layer `m` applies the cost phase
/// `exp(−iγ_m H_z)` and then the mixer `exp(−iβ_m H_x)`.
pub fn apply_qaoa(spec: &ChainSpec, sched: &AngleSchedule) -> StateVector {
    let diag = spec.cost_diagonal();
    let mut psi = initial_state(spec);
    for (g, b) in sched.layers() {
        psi.apply_diagonal_phase(&diag, g);
        psi.apply_mixer(b);
    }
    psi
}

/// `⟨σᶻ_j σᶻ_{j+1}⟩` for a 1-based site `j`; site `N` pairs with site 1.
/// The boundary coupling is not included.
pub fn expectation_link(state: &StateVector, j: usize) -> f64 {
    let n = state.n_sites;
    assert!((1..=n).contains(&j), "site index out of range");
    let a = j - 1;
    let b = j % n;
    state.amplitudes.iter().enumerate().map(|(idx, amp)| amp.norm_sqr() * spin(idx, a) * spin(idx, b)).sum()
}

/// Residual energy `(⟨H_z⟩ − E_min)/(E_max − E_min)` on the periodic ring,
/// with `E_max = 0`, `E_min = −2N`.
pub fn exact_residual_energy(n_sites: usize, sched: &AngleSchedule) -> Result<f64> {
    let spec = ChainSpec::periodic(n_sites)?;
    let psi = apply_qaoa(&spec, sched);
    let e = psi.expectation_diagonal(&spec.cost_diagonal());
    Ok((e + 2.0 * n_sites as f64) / (2.0 * n_sites as f64))
}

/// Outcome of [`verify_reduction`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub full_link: f64,
    pub reduced_link: f64,
    /// Largest deviation of any interior reduced-chain link from the central one.
    pub interior_spread: f64,
    pub passed: bool,
}

/// Checks that the central link of the full periodic ring equals the central
/// link of the `2P + 2`-site chain with boundary coupling `boundary_coupling`.
pub fn verify_reduction(
    n_sites: usize,
    sched: &AngleSchedule,
    boundary_coupling: f64,
) -> Result<ReductionReport> {
    let p = sched.depth();
    if 2 * p + 2 > n_sites {
        return Err(domain("reduction needs 2P + 2 <= N"));
    }
    let full = ChainSpec::periodic(n_sites)?;
    let full_link = expectation_link(&apply_qaoa(&full, sched), n_sites / 2);
    let nr = 2 * p + 2;
    let reduced = ChainSpec::new(nr, boundary_coupling)?;
    let psi = apply_qaoa(&reduced, sched);
    let reduced_link = expectation_link(&psi, nr / 2);
    let interior_spread =
        (1..nr).map(|j| (expectation_link(&psi, j) - reduced_link).abs()).fold(0.0, f64::max);
    let passed = (full_link - reduced_link).abs() < 1e-10 && interior_spread < 1e-10;
    Ok(ReductionReport { full_link, reduced_link, interior_spread, passed })
}

/// Outcome of [`verify_abc_translation`].
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationReport {
    /// `‖T_ABC ψ − ψ‖`.
    pub invariance_error: f64,
    /// `N_R ⟨σᶻ_{j}σᶻ_{j+1}⟩` at the central link.
    pub link_side: f64,
    /// `⟨H_z^(−) + N_R⟩`.
    pub hamiltonian_side: f64,
    /// `⟨H_z^(−)⟩`, bounded below by the ground energy `−2N_R + 2`.
    pub abc_energy: f64,
    pub passed: bool,
}

/// Checks invariance of the anti-periodic evolved state under
/// `T_ABC = T_PBC σˣ_1` and the identity `N_R ⟨σᶻσᶻ⟩ = ⟨H_z^(−) + N_R⟩`.
pub fn verify_abc_translation(n_reduced: usize, sched: &AngleSchedule) -> Result<TranslationReport> {
    let spec = ChainSpec::new(n_reduced, -1.0)?;
    let psi = apply_qaoa(&spec, sched);
    let mut flipped = psi.clone();
    flipped.flip_site(0);
    let moved = flipped.translate();
    let invariance_error =
        moved.amplitudes.iter().zip(&psi.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let nr = n_reduced as f64;
    let link_side = nr * expectation_link(&psi, n_reduced / 2);
    let abc_energy = psi.expectation_diagonal(&spec.cost_diagonal());
    let hamiltonian_side = abc_energy + nr;
    let passed = invariance_error < 1e-10
        && (link_side - hamiltonian_side).abs() < 1e-10
        && abc_energy >= -(2.0 * nr - 2.0) - 1e-10;
    Ok(TranslationReport { invariance_error, link_side, hamiltonian_side, abc_energy, passed })
}
