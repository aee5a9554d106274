//! Self-checks of the core against independent references.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

use qaoa_ring::dynamics::{effective_field, mat_distance, mode_unitary, vector_part_norm_sqr_expanded};
use qaoa_ring::optim::closed_form_controllable;
use qaoa_ring::oracle::{exact_residual_energy, verify_abc_translation, verify_reduction, MAX_SITES};
use qaoa_ring::rng::{random_start, stream};
use qaoa_ring::{residual_energy, residual_gradient, AngleSchedule, Symmetry};
use rand::Rng;

use crate::error::CliResult;
use crate::output::Check;
use crate::par::{map_indices, map_items};

/// Stream offsets keep the suites' random draws disjoint under one seed.
const ORACLE_STREAM: u64 = 1 << 32;
const REDUCTION_STREAM: u64 = 2 << 32;
const SYMMETRY_STREAM: u64 = 3 << 32;
const FIELD_STREAM: u64 = 4 << 32;
const GRADIENT_STREAM: u64 = 5 << 32;

pub const ORACLE_TOL: f64 = 1e-10;
pub const REDUCTION_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const FIELD_TOL: f64 = 1e-12;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const CONTROLLABLE_TOL: f64 = 1e-12;

fn random_schedule(seed: u64, index: u64, p: usize) -> AngleSchedule {
    AngleSchedule::from_flat(&random_start(seed, index, p)).expect("even-length start")
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Pseudo-spin residual against the 2^N state vector, per (N, P).
pub fn oracle_suite(
    ns: &[usize],
    ps: &[usize],
    samples: usize,
    seed: u64,
    serial: bool,
) -> CliResult<Vec<Check>> {
    let pairs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| ps.iter().map(move |&p| (n, p))).collect();
    let per_pair = map_items(serial, &pairs, |&(n, p)| -> CliResult<Check> {
        let mut worst: f64 = 0.0;
        for i in 0..samples as u64 {
            let s = random_schedule(seed, ORACLE_STREAM + ((n * 16 + p) as u64) * 100_000 + i, p);
            let fast = residual_energy(n, &s)?.total;
            let exact = exact_residual_energy(n, &s)?;
            worst = worst.max((fast - exact).abs());
        }
        let regime = if 2 * p < n { "abc" } else { "pbc" };
        Ok(Check::below(format!("oracle N={n} P={p} ({regime})"), worst, ORACLE_TOL))
    });
    per_pair.into_iter().collect()
}

/// Reduced-chain identities: the central link equals that of the
/// `2P + 2`-site chain for either boundary sign, and the anti-periodic state
/// is translation invariant with `N_R⟨σᶻσᶻ⟩ = ⟨H + N_R⟩`.
pub fn reduction_suite(n_sites: usize, ps: &[usize], samples: usize, seed: u64) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for &p in ps {
        for jb in [1.0, -1.0] {
            let mut link: f64 = 0.0;
            let mut spread: f64 = 0.0;
            let mut all = true;
            for i in 0..samples as u64 {
                let s = random_schedule(seed, REDUCTION_STREAM + (p as u64) * 100_000 + i, p);
                let r = verify_reduction(n_sites, &s, jb)?;
                link = link.max((r.full_link - r.reduced_link).abs());
                spread = spread.max(r.interior_spread);
                all &= r.passed;
            }
            out.push(Check::below(
                format!("reduction N={n_sites} P={p} Jb={jb:+} link"),
                link,
                REDUCTION_TOL,
            ));
            let mut c = Check::below(
                format!("reduction N={n_sites} P={p} Jb={jb:+} interior"),
                spread,
                REDUCTION_TOL,
            );
            c.passed &= all;
            out.push(c);
        }
        let nr = 2 * p + 2;
        let mut inv: f64 = 0.0;
        let mut ident: f64 = 0.0;
        let mut bounded = true;
        for i in 0..samples as u64 {
            let s = random_schedule(seed, REDUCTION_STREAM + 50_000 + (p as u64) * 100_000 + i, p);
            let r = verify_abc_translation(nr, &s)?;
            inv = inv.max(r.invariance_error);
            ident = ident.max((r.link_side - r.hamiltonian_side).abs());
            bounded &= r.abc_energy >= -(2.0 * nr as f64 - 2.0) - REDUCTION_TOL;
        }
        out.push(Check::below(format!("abc translation invariance N_R={nr} P={p}"), inv, REDUCTION_TOL));
        let mut c = Check::below(format!("abc link identity N_R={nr} P={p}"), ident, REDUCTION_TOL);
        c.passed &= bounded;
        out.push(c);
    }
    Ok(out)
}

/// The eight landscape identities, each on `samples` random schedules with
/// P cycling through `1..=p_max`. Even samples sit in the reduced regime
/// (N = 50), odd ones in the periodic regime (N = 2P).
pub fn symmetry_suite(samples: usize, p_max: usize, seed: u64, serial: bool) -> CliResult<Vec<Check>> {
    let worst = map_indices(serial, samples, |i| -> CliResult<Vec<f64>> {
        let p = 1 + i % p_max;
        let n = if i % 2 == 0 { 50.max(2 * p + 2) } else { (2 * p).max(4) };
        let s = random_schedule(seed, SYMMETRY_STREAM + i as u64, p);
        let eps = residual_energy(n, &s)?.total;
        Symmetry::ALL
            .iter()
            .map(|sym| {
                let (t, rel) = qaoa_ring::symmetry_transform(&s, *sym);
                Ok((residual_energy(n, &t)?.total - rel.predict(eps)).abs())
            })
            .collect()
    })
    .into_iter()
    .collect::<CliResult<Vec<_>>>()?;
    Ok(Symmetry::ALL
        .iter()
        .enumerate()
        .map(|(j, sym)| {
            Check::below(
                format!("symmetry {sym} ({samples} samples)"),
                max(worst.iter().map(|w| w[j])),
                SYMMETRY_TOL,
            )
        })
        .collect())
}

/// Effective-field checks: exponential reconstruction on random points,
/// the gap closing at `k = π, β = γ` and its linear opening away from π.
pub fn effective_field_suite(samples: usize, seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = stream(seed, FIELD_STREAM);
    let mut recon: f64 = 0.0;
    let mut expanded: f64 = 0.0;
    let mut skipped = 0usize;
    for _ in 0..samples {
        let k = PI - rng.gen_range(0.0..PI);
        let g = rng.gen_range(0.0..FRAC_PI_2);
        let b = rng.gen_range(0.0..FRAC_PI_2);
        let f = effective_field(k, g, b)?;
        if !f.principal {
            skipped += 1;
            continue;
        }
        recon = recon.max(mat_distance(&f.exponential(), &mode_unitary(k, g, b)));
        expanded =
            expanded.max((vector_part_norm_sqr_expanded(k, g, b) - f.vector_part.norm().powi(2)).abs());
    }
    let mut out = vec![
        Check::below(
            format!("exp reconstruction ({} principal samples)", samples - skipped),
            recon,
            FIELD_TOL,
        ),
        Check::below("expanded |q|^2 form", expanded, FIELD_TOL),
    ];

    let mut closed: f64 = 0.0;
    for _ in 0..100 {
        let g = rng.gen_range(1e-3..FRAC_PI_2);
        closed = closed.max(effective_field(PI, g, g)?.omega_norm);
    }
    out.push(Check::holds("|omega| at k=pi, beta=gamma", closed, "== 0", closed == 0.0));

    // |ω|Δt ≈ δ sin 2γ for k = π − δ, with a relative error of order δ
    let g = FRAC_PI_8;
    let mut worst_ratio: f64 = 0.0;
    for d in [1e-2, 1e-3, 1e-4] {
        let f = effective_field(PI - d, g, g)?;
        let ratio = f.omega_norm * f.dt / (d * (2.0 * g).sin());
        worst_ratio = worst_ratio.max((ratio - 1.0).abs() / d);
    }
    out.push(Check::holds("linear gap |ratio-1|/delta", worst_ratio, "< 1", worst_ratio < 1.0));
    Ok(out)
}

/// Analytic gradient against central differences, relative 2-norm error.
pub fn gradient_suite(ps: &[usize], samples: usize, seed: u64, serial: bool) -> CliResult<Vec<Check>> {
    const H: f64 = 1e-6;
    let per_p = map_items(serial, ps, |&p| -> CliResult<Check> {
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let n = if i % 2 == 0 { 2 * p + 10 } else { (2 * p).max(4) };
            let s = random_schedule(seed, GRADIENT_STREAM + (p as u64) * 100_000 + i as u64, p);
            let g = residual_gradient(n, &s)?;
            let x = s.to_flat();
            let mut err = 0.0;
            let mut norm = 0.0;
            for j in 0..x.len() {
                let mut xp = x.clone();
                xp[j] += H;
                let mut xm = x.clone();
                xm[j] -= H;
                let fp = residual_energy(n, &AngleSchedule::from_flat(&xp)?)?.total;
                let fm = residual_energy(n, &AngleSchedule::from_flat(&xm)?)?.total;
                let fd = (fp - fm) / (2.0 * H);
                err += (g[j] - fd).powi(2);
                norm += fd * fd;
            }
            worst = worst.max((err / norm.max(1e-300)).sqrt());
        }
        Ok(Check::below(format!("gradient P={p} ({samples} points)"), worst, GRADIENT_TOL))
    });
    per_p.into_iter().collect()
}

/// Zero residual of a schedule with `2P >= N`, from the pseudo-spin sum and,
/// when the chain is small enough, from the state vector.
pub fn controllable_checks(n_sites: usize, sched: &AngleSchedule) -> CliResult<Vec<Check>> {
    let p = sched.depth();
    let mut out = vec![Check::holds("2P >= N", (2 * p) as f64, format!(">= {n_sites}"), 2 * p >= n_sites)];
    out.push(Check::below(
        format!("residual N={n_sites} P={p}"),
        residual_energy(n_sites, sched)?.total,
        CONTROLLABLE_TOL,
    ));
    if n_sites <= MAX_SITES {
        out.push(Check::below(
            format!("state-vector residual N={n_sites} P={p}"),
            exact_residual_energy(n_sites, sched)?,
            CONTROLLABLE_TOL,
        ));
    }
    Ok(out)
}

/// Checks for the closed-form zero-residual schedule at `(N, P)`.
pub fn closed_form_checks(n_sites: usize, p: usize) -> CliResult<Vec<Check>> {
    controllable_checks(n_sites, &closed_form_controllable(n_sites, p)?)
}

/// One schedule against the state vector.
pub fn schedule_oracle_check(n_sites: usize, sched: &AngleSchedule) -> CliResult<Check> {
    let fast = residual_energy(n_sites, sched)?.total;
    let exact = exact_residual_energy(n_sites, sched)?;
    Ok(Check::below(
        format!("schedule vs state vector N={n_sites} (eps={fast})"),
        (fast - exact).abs(),
        ORACLE_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for c in oracle_suite(&[4, 6], &[1, 2, 3], 5, 1, true).unwrap() {
            assert!(c.passed, "{}", c.line());
        }
        for c in reduction_suite(10, &[1, 2], 3, 1).unwrap() {
            assert!(c.passed, "{}", c.line());
        }
        for c in symmetry_suite(40, 4, 1, true).unwrap() {
            assert!(c.passed, "{}", c.line());
        }
        for c in effective_field_suite(200, 1).unwrap() {
            assert!(c.passed, "{}", c.line());
        }
        for c in gradient_suite(&[1, 3], 3, 1, true).unwrap() {
            assert!(c.passed, "{}", c.line());
        }
        assert!(closed_form_checks(8, 4).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn serial_and_parallel_agree() {
        assert_eq!(symmetry_suite(24, 3, 9, true).unwrap(), symmetry_suite(24, 3, 9, false).unwrap());
    }

    #[test]
    fn wrong_schedule_fails_controllable_check() {
        let s = AngleSchedule::new(vec![0.3; 4], vec![0.2; 4]).unwrap();
        assert!(!controllable_checks(8, &s).unwrap().iter().all(|c| c.passed));
    }
}
