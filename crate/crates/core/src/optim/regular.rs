use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use num_traits::Float;

use super::newton::newton_polish;
use super::{minimize_on, OptimResult, OptimizerConfig};
use crate::error::{domain, Error, Result};
use crate::landscape::Landscape;
use crate::schedule::AngleSchedule;
use crate::schedules::{digitize, ContinuousSchedule, DtMode, Family, Sampling};

/// Step duration of the linear-ramp seed at the base level.
pub const SEED_DT: f64 = 1.0;

/// Linear digitized ramp with midpoint sampling, the seed of the regular chain.
///
/// Midpoint sampling makes the seed invariant under the duality map, so the
/// optimum it flows to stays on the `β′ = γ` sub-manifold.
pub fn linear_seed(p: usize, dt: f64) -> Result<AngleSchedule> {
    let ramp = ContinuousSchedule::new(Family::Linear, 0.0, p as f64 * dt)?;
    Ok(digitize(&ramp, p, Sampling::Midpoint, DtMode::Uniform(dt))?.angles().clone())
}

fn lerp_samples(values: &[f64], x: f64) -> f64 {
    let n = values.len();
    if n == 1 {
        return values[0];
    }
    // sample i sits at the step centre (i + 1/2)/n; the end segments extend linearly
    let pos = x * n as f64 - 0.5;
    let i = (pos.floor().max(0.0) as usize).min(n - 2);
    let t = pos - i as f64;
    values[i] + t * (values[i + 1] - values[i])
}

/// Resamples a depth-P′ schedule to depth `p`.
///
/// Both angle vectors are read as functions of the step centre
/// `x_m = (m − 1/2)/P′`, linearly interpolated onto `(m − 1/2)/p`, and then
/// scaled by one common factor so the mean step duration `γ_m + β_m` is
/// unchanged.
pub fn interpolate_schedule(src: &AngleSchedule, p: usize) -> Result<AngleSchedule> {
    if p == 0 {
        return Err(domain("target depth must be positive"));
    }
    let xs: Vec<f64> = (1..=p).map(|m| (m as f64 - 0.5) / p as f64).collect();
    let gamma: Vec<f64> = xs.iter().map(|&x| lerp_samples(src.gamma(), x)).collect();
    let beta: Vec<f64> = xs.iter().map(|&x| lerp_samples(src.beta(), x)).collect();
    let src_mean = src.total_time() / src.depth() as f64;
    let new_mean = (gamma.iter().sum::<f64>() + beta.iter().sum::<f64>()) / p as f64;
    if !(new_mean.abs() > 0.0) {
        return Err(domain("interpolated schedule has zero total duration"));
    }
    let scale = src_mean / new_mean;
    AngleSchedule::new(gamma.iter().map(|g| g * scale).collect(), beta.iter().map(|b| b * scale).collect())
}

/// Depth after `p` on the way to `target`: at most one eighth more.
///
/// Seeding a level from a much shallower solution lands the search in an
/// irregular basin, so the chain walks through intermediate depths.
pub fn next_depth(p: usize, target: usize) -> usize {
    (p + (p / 8).max(1)).min(target)
}

/// One rung of the regular chain: BFGS halted at the bound gap, then the
/// same point polished to gradient tolerance.
///
/// The reported iteration count is that of the first, gap-halted search.
pub(crate) fn regular_step(
    n_sites: usize,
    init: &AngleSchedule,
    cfg: &OptimizerConfig,
) -> Result<OptimResult> {
    let land = Landscape::new(n_sites, init.depth())?;
    let reached = minimize_on(&land, init, cfg, Some(land.bound()))?;
    let mut polished = minimize_on(&land, &reached.schedule, cfg, None)?;
    if polished.residual > reached.residual {
        polished = reached.clone();
    }
    if polished.residual - land.bound() > cfg.bound_gap_tolerance {
        return Err(Error::NotConverged {
            level: init.depth(),
            residual: polished.residual,
            target: land.bound(),
        });
    }
    polished.iterations = reached.iterations;
    Ok(polished)
}

/// Newton refinement of a reported rung, so its position is resolved to
/// gradient precision rather than to the flatness of the residual.
fn sharpen(n_sites: usize, r: &mut OptimResult) -> Result<()> {
    const STEPS: usize = 3;
    let land = Landscape::new(n_sites, r.schedule.depth())?;
    let mut x = r.schedule.to_flat();
    if newton_polish(&land, &mut x, STEPS) > 0 {
        let mut g = alloc::vec![0.0; x.len()];
        r.residual = land.value_and_gradient(&x, &mut g);
        r.gradient_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        r.schedule = AngleSchedule::from_flat(&x)?;
        r.total_time_tau = r.schedule.total_time();
    }
    Ok(())
}

/// Builds regular solutions at each of `depths` (ascending), walking through
/// intermediate depths with [`next_depth`] and seeding every depth from the
/// previous one by [`interpolate_schedule`].
///
/// `chain_length(p)` gives the ring size used at depth `p`. Every depth must
/// reach its bound within `cfg.bound_gap_tolerance`.
pub fn regular_chain<F>(
    depths: &[usize],
    chain_length: F,
    seed: &AngleSchedule,
    cfg: &OptimizerConfig,
) -> Result<Vec<OptimResult>>
where
    F: Fn(usize) -> usize,
{
    if depths.is_empty() || depths.windows(2).any(|w| w[0] >= w[1]) || depths[0] < seed.depth() {
        return Err(domain("depths must ascend from the seed depth"));
    }
    let mut out: Vec<OptimResult> = Vec::with_capacity(depths.len());
    let mut current = regular_step(chain_length(seed.depth()), seed, cfg)?;
    let mut p = seed.depth();
    for &target in depths {
        while p < target {
            p = next_depth(p, target);
            let init = interpolate_schedule(&current.schedule, p)?;
            current = regular_step(chain_length(p), &init, cfg)?;
        }
        let mut reported = current.clone();
        sharpen(chain_length(p), &mut reported)?;
        out.push(reported);
    }
    Ok(out)
}

fn doubling_levels(p_target: usize) -> Result<Vec<usize>> {
    if p_target < 2 || !p_target.is_power_of_two() {
        return Err(domain(format!("target depth {p_target} is not 2 times a power of two")));
    }
    let mut levels = Vec::new();
    let mut p = 2;
    while p <= p_target {
        levels.push(p);
        p *= 2;
    }
    Ok(levels)
}

/// Regular solutions at P = 2, 4, …, `p_target` on a chain of `n_sites`.
pub fn optimize_regular(n_sites: usize, p_target: usize, cfg: &OptimizerConfig) -> Result<Vec<OptimResult>> {
    regular_chain(&doubling_levels(p_target)?, |_| n_sites, &linear_seed(2, SEED_DT)?, cfg)
}

/// Regular solutions on the controllable family `N = 2P`.
pub fn optimize_regular_controllable(p_target: usize, cfg: &OptimizerConfig) -> Result<Vec<OptimResult>> {
    regular_chain(&doubling_levels(p_target)?, |p| 2 * p, &linear_seed(2, SEED_DT)?, cfg)
}

/// Exact zero-residual schedule for `2P ≥ N`:
/// `γ_m = β_{P+1−m}` equals π/8 at `m = ⌈(P+1)/2⌉` and π/4 elsewhere.
///
/// Layer 1 is applied first. With the opposite layer order the π/8 entry
/// moves to `β_m`.
pub fn closed_form_controllable(n_sites: usize, p: usize) -> Result<AngleSchedule> {
    if p == 0 || 2 * p < n_sites {
        return Err(domain(format!("closed form needs 2P >= N, got N={n_sites}, P={p}")));
    }
    let mid = (p + 2) / 2;
    let gamma: Vec<f64> = (1..=p).map(|m| if m == mid { FRAC_PI_8 } else { FRAC_PI_4 }).collect();
    let beta: Vec<f64> = gamma.iter().rev().copied().collect();
    AngleSchedule::new(gamma, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::residual_energy;

    #[test]
    fn closed_form_pattern() {
        let s = closed_form_controllable(8, 4).unwrap();
        assert_eq!(s.gamma(), &[FRAC_PI_4, FRAC_PI_4, FRAC_PI_8, FRAC_PI_4]);
        assert_eq!(s.beta(), &[FRAC_PI_4, FRAC_PI_8, FRAC_PI_4, FRAC_PI_4]);
        for (n, p) in [(8, 4), (4, 2), (6, 3), (12, 6)] {
            let e = residual_energy(n, &closed_form_controllable(n, p).unwrap()).unwrap().total;
            assert!(e < 1e-12, "N={n} P={p}: {e}");
        }
        assert!(closed_form_controllable(10, 4).is_err());
    }

    #[test]
    fn interpolation_keeps_mean_duration() {
        let src = AngleSchedule::new(alloc::vec![0.1, 0.3, 0.5], alloc::vec![0.6, 0.4, 0.2]).unwrap();
        let dst = interpolate_schedule(&src, 6).unwrap();
        assert_eq!(dst.depth(), 6);
        assert!((dst.total_time() / 6.0 - src.total_time() / 3.0).abs() < 1e-14);
        // linear data stays linear
        let g = dst.gamma();
        assert!(((g[1] - g[0]) - (g[4] - g[3])).abs() < 1e-14);
    }

    #[test]
    fn levels_must_double() {
        assert!(optimize_regular(50, 6, &OptimizerConfig::default()).is_err());
        assert_eq!(doubling_levels(16).unwrap(), alloc::vec![2, 4, 8, 16]);
        assert_eq!(next_depth(2, 64), 3);
        assert_eq!(next_depth(32, 64), 36);
        assert_eq!(next_depth(60, 64), 64);
    }

    #[test]
    fn short_chain_hits_bounds() {
        let levels = optimize_regular(40, 8, &OptimizerConfig::default()).unwrap();
        for r in &levels {
            let p = r.schedule.depth();
            assert!((r.residual - 1.0 / (2.0 * p as f64 + 2.0)).abs() < 1e-7);
            let asym = r.schedule.gamma().iter().zip(r.schedule.beta().iter().rev());
            assert!(asym.map(|(g, b)| (g - b).abs()).fold(0.0, f64::max) < 1e-6);
        }
    }
}
