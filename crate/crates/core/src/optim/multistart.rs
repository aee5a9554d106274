use alloc::vec::Vec;

use super::{minimize_on, OptimResult, OptimizerConfig};
use crate::error::{domain, Result};
use crate::landscape::Landscape;
use crate::rng::random_start;
use crate::schedule::{periodic_distance, AngleSchedule};
use crate::symmetry::Symmetry;

/// All runs of a multistart search, ordered by start index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistartReport {
    pub results: Vec<OptimResult>,
    pub best_index: usize,
}

impl MultistartReport {
    /// Collects per-start results; the lowest residual wins, earliest index on ties.
    pub fn from_results(results: Vec<OptimResult>) -> Result<Self> {
        if results.is_empty() {
            return Err(domain("a multistart search needs at least one start"));
        }
        let mut best_index = 0;
        for (i, r) in results.iter().enumerate() {
            if r.residual < results[best_index].residual {
                best_index = i;
            }
        }
        Ok(MultistartReport { results, best_index })
    }

    pub fn best(&self) -> &OptimResult {
        &self.results[self.best_index]
    }
}

/// One seeded random start, the unit of work a parallel driver distributes.
pub fn optimize_start(land: &Landscape, index: u64, cfg: &OptimizerConfig) -> Result<OptimResult> {
    let init = AngleSchedule::from_flat(&random_start(cfg.rng_seed, index, land.depth()))?;
    minimize_on(land, &init, cfg, Some(land.bound()))
}

pub fn optimize_random(
    n_sites: usize,
    p: usize,
    n_starts: usize,
    cfg: &OptimizerConfig,
) -> Result<MultistartReport> {
    let land = Landscape::new(n_sites, p)?;
    let results = (0..n_starts as u64).map(|i| optimize_start(&land, i, cfg)).collect::<Result<Vec<_>>>()?;
    MultistartReport::from_results(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimaReport {
    /// Distinct clusters in the period cell `[0, π/2)^{2P}`.
    pub count: usize,
    /// Orbits of the clusters under the duality map.
    pub duality_quotient_count: usize,
    pub representatives: Vec<AngleSchedule>,
    pub residuals: Vec<f64>,
    /// Members per cluster.
    pub sizes: Vec<usize>,
    /// Starts that ended away from the bound (local minima or stalls).
    pub rejected: usize,
}

fn torus_distance(a: &AngleSchedule, b: &AngleSchedule) -> f64 {
    a.to_flat().iter().zip(b.to_flat()).map(|(&x, y)| periodic_distance(x, y)).fold(0.0, f64::max)
}

/// Greedy max-norm clustering of converged optima that sit on the bound.
pub fn cluster_minima(land: &Landscape, results: &[OptimResult], cluster_tol: f64) -> MinimaReport {
    const BOUND_GAP: f64 = 1e-7;
    let bound = land.bound();
    let mut reps: Vec<AngleSchedule> = Vec::new();
    let mut residuals = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut rejected = 0;
    for r in results {
        if (r.residual - bound).abs() > BOUND_GAP {
            rejected += 1;
            continue;
        }
        let point = r.schedule.canonicalized();
        match reps.iter().position(|c| torus_distance(c, &point) <= cluster_tol) {
            Some(i) => sizes[i] += 1,
            None => {
                reps.push(point);
                residuals.push(r.residual);
                sizes.push(1);
            }
        }
    }

    let mut orbits = 0;
    for (i, rep) in reps.iter().enumerate() {
        let image = Symmetry::Duality.apply(rep);
        let partner = reps.iter().position(|c| torus_distance(c, &image) <= cluster_tol);
        // self-dual clusters and the first member of each pair start an orbit
        if partner.is_none_or(|j| j >= i) {
            orbits += 1;
        }
    }

    MinimaReport {
        count: reps.len(),
        duality_quotient_count: orbits,
        representatives: reps,
        residuals,
        sizes,
        rejected,
    }
}

/// Polishes `n_starts` random starts to a stationary point and clusters them.
///
/// The gap-to-bound halting rule is disabled here so every representative is
/// located to gradient precision rather than merely to the bound tolerance.
pub fn enumerate_minima(
    n_sites: usize,
    p: usize,
    n_starts: usize,
    cluster_tol: f64,
    cfg: &OptimizerConfig,
) -> Result<MinimaReport> {
    if 2 * p >= n_sites {
        return Err(domain("minima enumeration needs 2P < N"));
    }
    let land = Landscape::new(n_sites, p)?;
    let results = (0..n_starts as u64).map(|i| polish_start(&land, i, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(cluster_minima(&land, &results, cluster_tol))
}

/// A random start run to gradient tolerance, with the bound rule off.
pub fn polish_start(land: &Landscape, index: u64, cfg: &OptimizerConfig) -> Result<OptimResult> {
    let init = AngleSchedule::from_flat(&random_start(cfg.rng_seed, index, land.depth()))?;
    minimize_on(land, &init, cfg, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_search_p2() {
        let cfg = OptimizerConfig { rng_seed: 11, ..Default::default() };
        let rep = optimize_random(50, 2, 100, &cfg).unwrap();
        assert!((rep.best().residual - 1.0 / 6.0).abs() < 1e-7);
        let small = optimize_random(4, 2, 100, &cfg).unwrap();
        assert!(small.best().residual < 1e-7);
        assert_eq!(optimize_random(50, 2, 20, &cfg).unwrap(), optimize_random(50, 2, 20, &cfg).unwrap());
    }

    #[test]
    fn p1_has_two_minima() {
        let cfg = OptimizerConfig { rng_seed: 5, ..Default::default() };
        let rep = enumerate_minima(50, 1, 1000, 1e-4, &cfg).unwrap();
        assert_eq!(rep.count, 2);
        assert!(rep.residuals.iter().all(|r| (r - 0.25).abs() < 1e-7));
    }

    #[test]
    fn rejects_controllable_regime() {
        assert!(enumerate_minima(6, 3, 10, 1e-4, &OptimizerConfig::default()).is_err());
        assert!(optimize_random(10, 1, 0, &OptimizerConfig::default()).is_err());
    }
}
