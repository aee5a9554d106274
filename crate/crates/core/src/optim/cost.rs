use alloc::vec::Vec;

use super::regular::regular_step;
use super::{
    interpolate_schedule, linear_seed, next_depth, optimize_start, OptimResult, OptimizerConfig, SEED_DT,
};
use crate::dynamics::{fit_power_law, PowerLawFit};
use crate::error::{domain, Result};
use crate::landscape::Landscape;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMode {
    /// Uniform random starts in the period cell.
    Random,
    /// Total iterations of the regular construction from P/2 up to P.
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRow {
    pub p: usize,
    /// Mean BFGS iterations over the runs that reached the bound.
    pub n_iter: f64,
    pub runs: usize,
    pub reached: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostScan {
    pub mode: InitMode,
    pub rows: Vec<CostRow>,
    /// Log-log fit of `n_iter` against P; absent for fewer than three usable rows.
    pub fit: Option<PowerLawFit>,
}

impl CostRow {
    /// Mean iterations of the runs at depth `p` that ended within `gap_tol`
    /// of the bound on the ring `cost_chain_length(p)`; NaN when none did.
    pub fn from_random_runs(p: usize, runs: &[OptimResult], gap_tol: f64) -> Self {
        let bound = 1.0 / (2.0 * p as f64 + 2.0);
        let hits: Vec<&OptimResult> = runs.iter().filter(|r| r.residual - bound <= gap_tol).collect();
        let n_iter = if hits.is_empty() {
            f64::NAN
        } else {
            hits.iter().map(|r| r.iterations as f64).sum::<f64>() / hits.len() as f64
        };
        CostRow { p, n_iter, runs: runs.len(), reached: hits.len() }
    }
}

impl CostScan {
    /// Attaches the log-log fit; rows without a finite positive count are
    /// left out of it.
    pub fn from_rows(mode: InitMode, rows: Vec<CostRow>) -> Self {
        let table: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.n_iter.is_finite() && r.n_iter > 0.0)
            .map(|r| (r.p as f64, r.n_iter))
            .collect();
        let fit = if table.len() >= 3 { fit_power_law(&table).ok() } else { None };
        CostScan { mode, rows, fit }
    }
}

/// Chain length used for depth `p`: far enough from the light-cone limit
/// that the bound `1/(2P+2)` applies.
pub fn cost_chain_length(p: usize) -> usize {
    2 * p + 10
}

/// Iterations to reach the bound, per depth, under one initialization mode.
///
/// `cfg.bound_gap_tolerance` is the halting tolerance of the scan.
pub fn iteration_cost_scan(
    p_list: &[usize],
    mode: InitMode,
    n_random_starts: usize,
    cfg: &OptimizerConfig,
) -> Result<CostScan> {
    if p_list.is_empty() || p_list.windows(2).any(|w| w[0] >= w[1]) || p_list[0] == 0 {
        return Err(domain("P list must be non-empty, positive and strictly ascending"));
    }
    let rows = match mode {
        InitMode::Random => {
            if n_random_starts == 0 {
                return Err(domain("random mode needs at least one start"));
            }
            p_list
                .iter()
                .map(|&p| {
                    let land = Landscape::new(cost_chain_length(p), p)?;
                    let runs = (0..n_random_starts as u64)
                        .map(|i| optimize_start(&land, i, cfg))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(CostRow::from_random_runs(p, &runs, cfg.bound_gap_tolerance))
                })
                .collect::<Result<Vec<_>>>()?
        }
        InitMode::Iterative => {
            if p_list[0] < 2 {
                return Err(domain("iterative mode needs P >= 2"));
            }
            let mut stops: Vec<usize> = p_list.iter().flat_map(|&p| [p / 2, p]).collect();
            stops.sort_unstable();
            stops.dedup();
            // cumulative gap-halted iterations of the walk, read at every stop
            let mut spent: Vec<(usize, usize)> = Vec::with_capacity(stops.len());
            let mut p = stops[0].min(2);
            let mut current = regular_step(cost_chain_length(p), &linear_seed(p, SEED_DT)?, cfg)?;
            let mut total = current.iterations;
            for &stop in &stops {
                while p < stop {
                    p = next_depth(p, stop);
                    let init = interpolate_schedule(&current.schedule, p)?;
                    current = regular_step(cost_chain_length(p), &init, cfg)?;
                    total += current.iterations;
                }
                spent.push((stop, total));
            }
            let at = |d: usize| spent.iter().find(|s| s.0 == d).map(|s| s.1).expect("stop recorded");
            p_list
                .iter()
                .map(|&p| CostRow { p, n_iter: (at(p) - at(p / 2)) as f64, runs: 1, reached: 1 })
                .collect()
        }
    };
    Ok(CostScan::from_rows(mode, rows))
}
