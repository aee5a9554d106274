//! Minimization of the residual-energy landscape.

pub mod bfgs;
mod cost;
mod multistart;
mod newton;
mod regular;

pub use cost::{cost_chain_length, iteration_cost_scan, CostRow, CostScan, InitMode};
pub use multistart::{
    cluster_minima, enumerate_minima, optimize_random, optimize_start, polish_start, MinimaReport,
    MultistartReport,
};
pub use regular::{
    closed_form_controllable, interpolate_schedule, linear_seed, next_depth, optimize_regular,
    optimize_regular_controllable, regular_chain, SEED_DT,
};

use alloc::format;

use crate::error::{domain, Result};
use crate::landscape::Landscape;
use crate::schedule::AngleSchedule;
use bfgs::{BfgsOptions, Termination};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub gradient_tolerance: f64,
    pub bound_gap_tolerance: f64,
    pub max_iterations: usize,
    pub wolfe_c1: f64,
    pub wolfe_c2: f64,
    pub rng_seed: u64,
    /// Largest change of any single angle in one BFGS step.
    pub max_step: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            gradient_tolerance: 1e-10,
            bound_gap_tolerance: 1e-7,
            max_iterations: 20_000,
            wolfe_c1: 1e-4,
            wolfe_c2: 0.9,
            rng_seed: 0,
            max_step: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let (c1, c2) = (self.wolfe_c1, self.wolfe_c2);
        if !(0.0 < c1 && c1 < c2 && c2 < 1.0) {
            return Err(domain(format!("Wolfe constants must satisfy 0 < c1 < c2 < 1, got {c1}, {c2}")));
        }
        if !(self.gradient_tolerance > 0.0) || !(self.bound_gap_tolerance > 0.0) {
            return Err(domain("tolerances must be positive"));
        }
        Ok(())
    }

    pub(crate) fn bfgs_options(&self, target: Option<f64>) -> BfgsOptions {
        BfgsOptions {
            gradient_tolerance: self.gradient_tolerance,
            max_iterations: self.max_iterations,
            c1: self.wolfe_c1,
            c2: self.wolfe_c2,
            target: target.map(|t| (t, self.bound_gap_tolerance)),
            max_step: self.max_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub schedule: AngleSchedule,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub total_time_tau: f64,
    pub termination: Termination,
    pub gradient_norm: f64,
}

/// Runs BFGS with both halting rules: gradient norm and gap to the bound.
pub fn bfgs_minimize(n_sites: usize, init: &AngleSchedule, cfg: &OptimizerConfig) -> Result<OptimResult> {
    let land = Landscape::new(n_sites, init.depth())?;
    minimize_on(&land, init, cfg, Some(land.bound()))
}

/// BFGS on a prepared landscape; `target` of `None` disables the gap rule.
pub(crate) fn minimize_on(
    land: &Landscape,
    init: &AngleSchedule,
    cfg: &OptimizerConfig,
    target: Option<f64>,
) -> Result<OptimResult> {
    cfg.validate()?;
    if !init.is_finite() {
        return Err(domain("initial schedule must be finite"));
    }
    let mut f = |x: &[f64], g: &mut [f64]| land.value_and_gradient(x, g);
    let out = bfgs::minimize(&mut f, &init.to_flat(), &cfg.bfgs_options(target));
    let schedule = AngleSchedule::from_flat(&out.x)?;
    Ok(OptimResult {
        residual: land.value(&out.x),
        total_time_tau: schedule.total_time(),
        schedule,
        iterations: out.iterations,
        converged: out.converged(),
        termination: out.termination,
        gradient_norm: out.gradient_norm,
    })
}
