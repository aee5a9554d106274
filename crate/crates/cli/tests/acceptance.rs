//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines always reach the console.
//! Every threshold is pinned here rather than taken from the library.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use qaoa_ring::dynamics::{defect_point, fit_power_law, fit_window, RunSpec};
use qaoa_ring::landscape::Landscape;
use qaoa_ring::optim::{
    closed_form_controllable, cluster_minima, cost_chain_length, iteration_cost_scan, linear_seed,
    optimize_random, optimize_regular, polish_start, regular_chain, InitMode, OptimizerConfig, SEED_DT,
};
use qaoa_ring::schedules::{angles_to_s, optimize_family_parameter, Family, COLLAPSE_EDGE};
use qaoa_ring::{residual_bound, residual_energy};
use qaoa_ring_cli::args::{EntropyArgs, Globals};
use qaoa_ring_cli::commands::{argmin, collapse_scan, distance_at, entropy, random_cost_scan};
use qaoa_ring_cli::output::Check;
use qaoa_ring_cli::par::{map_indices, map_items};
use qaoa_ring_cli::verify;

const SEED: u64 = 2024;

const BOUND_TOL: f64 = 1e-7;
const CONTROLLABLE_OPT_TOL: f64 = 1e-7;
const CLOSED_FORM_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-10;
const REDUCTION_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;
const FIELD_TOL: f64 = 1e-12;
const GRADIENT_TOL: f64 = 1e-6;

const KZ_WINDOW: (f64, f64) = (32.0, 1024.0);
const LINEAR_EXPONENT: (f64, f64) = (-0.5, 0.05);
const REGULAR_EXPONENT: (f64, f64) = (-1.0, 0.1);
const RC_EXPONENT: f64 = -0.75;
const PL_EXPONENT: f64 = -0.8;
const OPTIMIZED_SOFT: f64 = 0.1;
const OPTIMIZED_HARD: f64 = 0.15;

const ENTROPY_BAND: (f64, f64) = (0.8, 1.2);
const COLLAPSE_ALPHA: (f64, f64) = (1.75, 0.1);
const RANDOM_SLOPE: (f64, f64) = (2.0, 0.5);
const ITERATIVE_SLOPE: (f64, f64) = (0.5, 0.3);

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Fails on the first failing check and otherwise summarizes the worst value.
fn from_checks(checks: &[Check], tol: f64) -> Outcome {
    if let Some(c) = checks.iter().find(|c| !c.passed || c.value.abs().is_nan() || c.value.abs() >= tol) {
        return outcome(false, c.line());
    }
    let worst = checks.iter().map(|c| c.value.abs()).fold(0.0, f64::max);
    outcome(true, format!("{} checks, worst {worst:e} < {tol:e}", checks.len()))
}

fn cfg(gap: f64, max_iterations: usize) -> OptimizerConfig {
    OptimizerConfig { bound_gap_tolerance: gap, rng_seed: SEED, max_iterations, ..Default::default() }
}

fn globals(n: usize) -> Globals {
    Globals {
        n: Some(n),
        p: None,
        seed: SEED,
        tol_bound: BOUND_TOL,
        tol_iter: 1e-5,
        serial: false,
        out: PathBuf::from("unused"),
    }
}

fn bound_saturation() -> Outcome {
    let depths = [1, 2, 3, 4, 6, 8, 16, 32, 64];
    let c = cfg(BOUND_TOL, 20000);
    let mut eps = vec![(1, optimize_random(cost_chain_length(1), 1, 20, &c).unwrap().best().residual)];
    let chain =
        regular_chain(&depths[1..], cost_chain_length, &linear_seed(2, SEED_DT).unwrap(), &c).unwrap();
    eps.extend(chain.iter().map(|r| (r.schedule.depth(), r.residual)));
    let worst = eps
        .iter()
        .map(|&(p, e)| (p, e - residual_bound(cost_chain_length(p), p)))
        .fold((0, 0.0f64), |w, (p, g)| if g.abs() > w.1.abs() { (p, g) } else { w });
    let below = eps.iter().any(|&(p, e)| e < 1.0 / (2 * p + 2) as f64 - 1e-12);
    outcome(
        worst.1.abs() <= BOUND_TOL && !below && eps.len() == depths.len(),
        format!("P in {depths:?}, N = 2P+10: worst eps - 1/(2P+2) = {:e} at P={}", worst.1, worst.0),
    )
}

fn controllability() -> Outcome {
    let c = cfg(BOUND_TOL, 20000);
    let mut worst_opt: f64 = 0.0;
    let mut worst_cf: f64 = 0.0;
    for n in [4, 6, 8, 12] {
        for p in [n / 2, n / 2 + 1, n] {
            worst_opt = worst_opt.max(optimize_random(n, p, 20, &c).unwrap().best().residual);
        }
        let cf = closed_form_controllable(n, n / 2).unwrap();
        worst_cf = worst_cf.max(residual_energy(n, &cf).unwrap().total.abs());
    }
    outcome(
        worst_opt < CONTROLLABLE_OPT_TOL && worst_cf < CLOSED_FORM_TOL,
        format!("optimized worst {worst_opt:e} < {CONTROLLABLE_OPT_TOL:e}, closed form worst {worst_cf:e} < {CLOSED_FORM_TOL:e}"),
    )
}

fn minima() -> Outcome {
    let c = OptimizerConfig { rng_seed: SEED, ..Default::default() };
    let mut counts = Vec::new();
    let mut worst_gap: f64 = 0.0;
    for p in 1..=4 {
        let land = Landscape::new(50, p).unwrap();
        let runs: Vec<_> = map_indices(false, 10_000, |i| polish_start(&land, i as u64, &c).unwrap());
        let rep = cluster_minima(&land, &runs, 1e-4);
        counts.push(rep.count);
        for r in &rep.residuals {
            worst_gap = worst_gap.max((r - residual_bound(50, p)).abs());
        }
    }
    outcome(
        counts == [2, 4, 8, 16] && worst_gap <= BOUND_TOL,
        format!("cluster counts {counts:?} (want [2, 4, 8, 16]), worst cluster gap {worst_gap:e}"),
    )
}

fn exponent_of(table: &[(f64, f64)]) -> f64 {
    fit_power_law(&fit_window(table, KZ_WINDOW.0, KZ_WINDOW.1)).map_or(f64::NAN, |f| f.exponent)
}

fn tau_grid() -> Vec<f64> {
    (5..=10).map(|e| f64::from(1u32 << e)).collect()
}

fn optimized_exponent(family: Family, n: usize) -> f64 {
    let spec = RunSpec::Digitized { family, c: 0.0, sampling: family.default_sampling(), dt: 1.0 };
    let rows = map_items(false, &tau_grid(), |&tau| {
        let best =
            optimize_family_parameter(family, |c| defect_point(n, &spec.with_parameter(c), tau)).unwrap();
        (tau, best.epsilon)
    });
    exponent_of(&rows)
}

fn kibble_zurek() -> Outcome {
    let spec = RunSpec::Digitized {
        family: Family::Linear,
        c: 0.0,
        sampling: Family::Linear.default_sampling(),
        dt: 1.0,
    };
    let linear: Vec<_> = tau_grid().iter().map(|&t| (t, defect_point(1024, &spec, t).unwrap())).collect();
    let lin = exponent_of(&linear);

    let levels = optimize_regular(1024, 256, &cfg(BOUND_TOL, 20000)).unwrap();
    let reg = exponent_of(&levels.iter().map(|r| (r.total_time_tau, r.residual)).collect::<Vec<_>>());

    let rc = optimized_exponent(Family::RolandCerf, 4096);
    let pl = optimized_exponent(Family::PowerLaw, 4096);

    let within = |x: f64, (c, w): (f64, f64)| (x - c).abs() <= w;
    let hard = within(lin, LINEAR_EXPONENT)
        && within(reg, REGULAR_EXPONENT)
        && within(rc, (RC_EXPONENT, OPTIMIZED_HARD))
        && within(pl, (PL_EXPONENT, OPTIMIZED_HARD));
    let soft = |x: f64, c: f64| if within(x, (c, OPTIMIZED_SOFT)) { "" } else { " [outside soft band]" };
    outcome(
        hard,
        format!(
            "linear {lin:.4} ({}±{}), regular {reg:.4} ({}±{}), roland-cerf {rc:.4}{} ({RC_EXPONENT}±{OPTIMIZED_SOFT}), power-law {pl:.4}{} ({PL_EXPONENT}±{OPTIMIZED_SOFT})",
            LINEAR_EXPONENT.0, LINEAR_EXPONENT.1, REGULAR_EXPONENT.0, REGULAR_EXPONENT.1, soft(rc, RC_EXPONENT), soft(pl, PL_EXPONENT)
        ),
    )
}

fn adiabaticity() -> Outcome {
    let args = EntropyArgs { p_list: vec![16, 32, 64, 128], max_iter: 200_000 };
    let rep = entropy(&globals(1024), &args).unwrap();
    let t = &rep.tables[0];
    let col = |name: &str| -> Vec<f64> {
        let i = t.column(name).unwrap();
        t.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    };
    let (reg, lin, rnd) = (col("S_regular"), col("S_linear_dqa"), col("4S/N_random_init"));
    let ordered = reg.iter().zip(&lin).all(|(r, l)| r < l);
    let decreasing = reg.windows(2).all(|w| w[1] < w[0]);
    let band = rnd.iter().all(|x| (ENTROPY_BAND.0..=ENTROPY_BAND.1).contains(x));
    outcome(
        ordered && decreasing && band,
        format!(
            "S_regular {:?} < S_linear {:?}: {ordered}, decreasing: {decreasing}, random 4S/N {:?} in {ENTROPY_BAND:?}: {band}",
            reg.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
            lin.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
            rnd.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
        ),
    )
}

fn collapse() -> Outcome {
    let c = cfg(BOUND_TOL, 20000);
    let seed = linear_seed(2, SEED_DT).unwrap();
    let profiles = |levels: Vec<qaoa_ring::optim::OptimResult>| -> Vec<_> {
        levels.iter().map(|r| angles_to_s(&r.schedule).unwrap()).collect()
    };
    let fixed = profiles(regular_chain(&[32, 64, 128], |_| 1024, &seed, &c).unwrap());
    let rows = collapse_scan(&fixed, &[0.5, 1.0, 1.5], COLLAPSE_EDGE).unwrap();
    let (d05, d1, d15) = (distance_at(&rows, 0.5), distance_at(&rows, 1.0), distance_at(&rows, 1.5));

    let ctrl = profiles(regular_chain(&[64, 128, 256], |p| 2 * p, &seed, &c).unwrap());
    let grid: Vec<f64> = (0..=80).map(|i| 0.5 + 0.025 * i as f64).collect();
    let (best, _) = argmin(&collapse_scan(&ctrl, &grid, COLLAPSE_EDGE).unwrap());
    let near = (best - COLLAPSE_ALPHA.0).abs() <= COLLAPSE_ALPHA.1 + 1e-12;
    outcome(
        d1 < d05 && d1 < d15 && near,
        format!(
            "fixed N: d(1) = {d1:.4} vs d(0.5) = {d05:.4}, d(1.5) = {d15:.4}; N = 2P argmin alpha = {best:.3} ({}±{})",
            COLLAPSE_ALPHA.0, COLLAPSE_ALPHA.1
        ),
    )
}

fn cost() -> Outcome {
    let c = cfg(1e-5, 200_000);
    let random = random_cost_scan(&[4, 8, 16, 32, 64], 5, &c, false).unwrap();
    let iterative = iteration_cost_scan(&[4, 8, 16, 32, 64, 128], InitMode::Iterative, 1, &c).unwrap();
    let (r, i) =
        (random.fit.map_or(f64::NAN, |f| f.exponent), iterative.fit.map_or(f64::NAN, |f| f.exponent));
    let note = |x: f64, (t, w): (f64, f64)| if (x - t).abs() <= w { "within" } else { "outside" };
    outcome(
        r > i,
        format!(
            "random slope {r:.3} ({} {}±{}), iterative slope {i:.3} ({} {}±{}), random > iterative",
            note(r, RANDOM_SLOPE),
            RANDOM_SLOPE.0,
            RANDOM_SLOPE.1,
            note(i, ITERATIVE_SLOPE),
            ITERATIVE_SLOPE.0,
            ITERATIVE_SLOPE.1
        ),
    )
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture may be forwarded; a filter picks criteria.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let evens: Vec<usize> = (4..=12).step_by(2).collect();
    let criteria: Vec<Criterion> = vec![
        ("1 bound saturation", Box::new(bound_saturation)),
        ("2 controllability", Box::new(controllability)),
        (
            "3 oracle equivalence",
            Box::new(move || {
                from_checks(
                    &verify::oracle_suite(&evens, &[1, 2, 3, 4, 5, 6], 200, SEED, false).unwrap(),
                    ORACLE_TOL,
                )
            }),
        ),
        (
            "4 reduced chain and translation",
            Box::new(|| {
                from_checks(&verify::reduction_suite(10, &[1, 2, 3], 20, SEED).unwrap(), REDUCTION_TOL)
            }),
        ),
        (
            "5 landscape identities",
            Box::new(|| from_checks(&verify::symmetry_suite(1000, 8, SEED, false).unwrap(), SYMMETRY_TOL)),
        ),
        ("6 degenerate minima", Box::new(minima)),
        ("7 kibble-zurek exponents", Box::new(kibble_zurek)),
        ("8 adiabaticity ordering", Box::new(adiabaticity)),
        (
            "9 effective field",
            Box::new(|| {
                // The linear-gap check reports |ratio - 1|/δ, bounded by 1.
                let checks = verify::effective_field_suite(10_000, SEED).unwrap();
                let (gap, exact): (Vec<Check>, Vec<Check>) =
                    checks.into_iter().partition(|c| c.name.starts_with("linear gap"));
                let mut o = from_checks(&exact, FIELD_TOL);
                if let Some(c) = gap.iter().find(|c| !c.passed) {
                    o = outcome(false, c.line());
                }
                o
            }),
        ),
        ("10 scaling collapse", Box::new(collapse)),
        ("11 iteration cost", Box::new(cost)),
        (
            "12 gradient",
            Box::new(|| {
                let ps: Vec<usize> = (1..=16).collect();
                from_checks(&verify::gradient_suite(&ps, 100, SEED, false).unwrap(), GRADIENT_TOL)
            }),
        ),
    ];

    let mut failed = 0;
    let mut ran = 0;
    for (name, f) in &criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = f();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} [{name}] {} ({:.1}s)", o.detail, start.elapsed().as_secs_f64());
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
