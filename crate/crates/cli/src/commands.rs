use qaoa_ring::dynamics::{
    defect_point, fit_power_law, fit_window, shannon_adiabaticity, PowerLawFit, RunSpec,
};
use qaoa_ring::landscape::Landscape;
use qaoa_ring::optim::{
    cluster_minima, cost_chain_length, iteration_cost_scan, linear_seed, optimize_regular,
    optimize_regular_controllable, optimize_start, polish_start, regular_chain, CostRow, CostScan, InitMode,
    MultistartReport, OptimResult, OptimizerConfig, SEED_DT,
};
use qaoa_ring::schedules::{
    angles_to_s, digitize, optimize_family_parameter, scaling_collapse, ContinuousSchedule, DtMode, Family,
    SProfile, Sampling,
};
use qaoa_ring::{residual_bound, AngleSchedule};
use serde_json::json;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{num, Check, Report, Table};
use crate::par::{map_indices, map_items};
use crate::schedule_io::{read_schedule, ScheduleFile};
use crate::verify;

pub const BOUND_COLUMN: &str = "eps_bound = 1/(2P+2)";
/// Largest `max |γ_m − β_{P+1−m}|` accepted for a regular solution.
pub const DUALITY_TOL: f64 = 1e-6;

fn config(g: &Globals, gap: f64, max_iterations: usize) -> CliResult<OptimizerConfig> {
    let cfg =
        OptimizerConfig { bound_gap_tolerance: gap, rng_seed: g.seed, max_iterations, ..Default::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn need_p(g: &Globals, cmd: &str) -> CliResult<usize> {
    match g.p {
        Some(p) if p > 0 => Ok(p),
        Some(_) => Err(CliError::usage("--p must be positive")),
        None => Err(CliError::usage(format!("{cmd} needs --p"))),
    }
}

fn ascending(list: &[usize], what: &str) -> CliResult<()> {
    if list.is_empty() || list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage(format!("{what} must be positive and strictly ascending")));
    }
    Ok(())
}

pub fn duality_asymmetry(s: &AngleSchedule) -> f64 {
    s.gamma().iter().zip(s.beta().iter().rev()).map(|(g, b)| (g - b).abs()).fold(0.0, f64::max)
}

fn bound_check(name: String, eps: f64, bound: f64, tol: f64) -> Check {
    let gap = eps - bound;
    Check::holds(name, gap, format!("|eps - bound| <= {tol:e}"), gap.abs() <= tol)
}

fn fit_meta(t: &mut Table, prefix: &str, fit: Option<&PowerLawFit>) {
    match fit {
        Some(f) => {
            t.meta(&format!("{prefix}exponent"), f.exponent);
            t.meta(&format!("{prefix}prefactor"), f.prefactor);
            t.meta(&format!("{prefix}r_squared"), f.r_squared);
        }
        None => {
            t.meta(&format!("{prefix}exponent"), "none");
        }
    }
}

pub fn optimize(g: &Globals, a: &OptimizeArgs) -> CliResult<Report> {
    let p = need_p(g, "optimize")?;
    let n = g.n.unwrap_or(2 * p + 10);
    let cfg = config(g, g.tol_bound, a.max_iter)?;
    let bound = residual_bound(n, p);
    let results: Vec<OptimResult> = match a.mode {
        InitArg::Random => {
            if a.starts == 0 {
                return Err(CliError::usage("--starts must be positive"));
            }
            let land = Landscape::new(n, p)?;
            map_indices(g.serial, a.starts, |i| optimize_start(&land, i as u64, &cfg))
                .into_iter()
                .collect::<Result<_, _>>()?
        }
        InitArg::Iterative => regular_chain(&[p], |_| n, &linear_seed(p.min(2), SEED_DT)?, &cfg)?,
    };
    let ms = MultistartReport::from_results(results)?;
    let best = ms.best();

    let mut t = Table::new(
        "optimize",
        &["start", "eps", BOUND_COLUMN, "gap", "iterations", "converged", "termination", "tau"],
    );
    t.meta("N", n).meta("P", p).meta("mode", format!("{:?}", a.mode).to_lowercase());
    t.meta("best_start", ms.best_index).meta("best_eps", best.residual);
    for (i, r) in ms.results.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            num(r.residual),
            num(bound),
            num(r.residual - bound),
            r.iterations.to_string(),
            r.converged.to_string(),
            format!("{:?}", r.termination),
            num(r.total_time_tau),
        ]);
    }
    let schedule = match a.mode {
        InitArg::Random => best.schedule.canonicalized(),
        InitArg::Iterative => best.schedule.clone(),
    };
    let check = if 2 * p < n {
        bound_check(format!("best eps at bound N={n} P={p}"), best.residual, bound, g.tol_bound)
    } else {
        Check::below(format!("best eps N={n} P={p} (2P >= N)"), best.residual, g.tol_bound)
    };
    Ok(Report {
        tables: vec![t],
        schedules: vec![("optimize_best".into(), schedule.into())],
        checks: vec![check],
        config: json!({ "N": n, "P": p, "optimizer": format!("{cfg:?}") }),
    })
}

fn profile_rows(t: &mut Table, levels: &[OptimResult]) -> CliResult<()> {
    for r in levels {
        let prof = angles_to_s(&r.schedule)?;
        let mids = prof.step_mid_times();
        for (m, (gb, (s, mid))) in r.schedule.layers().zip(prof.s_values.iter().zip(&mids)).enumerate() {
            t.push(vec![
                r.schedule.depth().to_string(),
                (m + 1).to_string(),
                num(gb.0),
                num(gb.1),
                num(gb.0 + gb.1),
                num(*s),
                num(mid / prof.tau),
            ]);
        }
    }
    Ok(())
}

pub fn regular(g: &Globals, a: &RegularArgs) -> CliResult<Report> {
    let cfg = config(g, g.tol_bound, OptimizerConfig::default().max_iterations)?;
    let n_of = |p: usize| if a.controllable { 2 * p } else { g.n.unwrap_or(1024) };
    let levels = if a.controllable {
        optimize_regular_controllable(a.p_max, &cfg)?
    } else {
        optimize_regular(n_of(a.p_max), a.p_max, &cfg)?
    };

    let mut t = Table::new(
        "regular",
        &["P", "N", "eps", BOUND_COLUMN, "gap", "iterations", "tau", "duality_asymmetry"],
    );
    t.meta("family", if a.controllable { "N = 2P" } else { "fixed N" });
    let mut checks = Vec::new();
    let mut worst_asym: f64 = 0.0;
    for r in &levels {
        let p = r.schedule.depth();
        let n = n_of(p);
        let bound = residual_bound(n, p);
        let asym = duality_asymmetry(&r.schedule);
        worst_asym = worst_asym.max(asym);
        t.push(vec![
            p.to_string(),
            n.to_string(),
            num(r.residual),
            num(bound),
            num(r.residual - bound),
            r.iterations.to_string(),
            num(r.total_time_tau),
            num(asym),
        ]);
        checks.push(bound_check(format!("regular P={p} at bound"), r.residual, bound, g.tol_bound));
    }
    checks.push(Check::below("duality asymmetry max |gamma_m - beta_{P+1-m}|", worst_asym, DUALITY_TOL));

    let mut prof = Table::new("regular_profile", &["P", "m", "gamma", "beta", "dt", "s", "t_mid_over_tau"]);
    profile_rows(&mut prof, &levels)?;
    let top = levels.last().expect("at least one level");
    Ok(Report {
        tables: vec![t, prof],
        schedules: vec![(format!("regular_P{}", top.schedule.depth()), top.schedule.clone().into())],
        checks,
        config: json!({ "p_max": a.p_max, "controllable": a.controllable, "N": if a.controllable { None } else { Some(n_of(1)) } }),
    })
}

pub fn minima(g: &Globals, a: &MinimaArgs) -> CliResult<Report> {
    let p = need_p(g, "minima")?;
    let n = g.n.unwrap_or(50);
    if 2 * p >= n {
        return Err(CliError::usage("minima enumeration needs 2P < N"));
    }
    if a.starts == 0 || !(a.cluster_tol > 0.0) {
        return Err(CliError::usage("--starts and --cluster-tol must be positive"));
    }
    let cfg = config(g, g.tol_bound, OptimizerConfig::default().max_iterations)?;
    let land = Landscape::new(n, p)?;
    let runs = map_indices(g.serial, a.starts, |i| polish_start(&land, i as u64, &cfg))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let rep = cluster_minima(&land, &runs, a.cluster_tol);
    let bound = land.bound();

    let mut t = Table::new("minima", &["cluster", "size", "eps", BOUND_COLUMN, "gap", "tau"]);
    t.meta("N", n).meta("P", p).meta("starts", a.starts).meta("cluster_tol", a.cluster_tol);
    t.meta("count", rep.count).meta("duality_quotient_count", rep.duality_quotient_count);
    t.meta("rejected", rep.rejected);
    let mut angles = Table::new("minima_angles", &["cluster", "m", "gamma", "beta"]);
    for (c, (s, (&eps, &size))) in
        rep.representatives.iter().zip(rep.residuals.iter().zip(&rep.sizes)).enumerate()
    {
        t.push(vec![
            c.to_string(),
            size.to_string(),
            num(eps),
            num(bound),
            num(eps - bound),
            num(s.total_time()),
        ]);
        for (m, (gm, bm)) in s.layers().enumerate() {
            angles.push(vec![c.to_string(), (m + 1).to_string(), num(gm), num(bm)]);
        }
    }
    let mut checks = vec![Check::holds(
        "cluster count",
        rep.count as f64,
        format!("== 2^P = {}", 1usize << p),
        rep.count == 1 << p,
    )];
    let worst = rep.residuals.iter().map(|e| (e - bound).abs()).fold(0.0, f64::max);
    checks.push(Check::holds("cluster eps at bound", worst, "<= 1e-7", worst <= 1e-7));
    Ok(Report { tables: vec![t, angles], schedules: Vec::new(), checks, config: json!({ "N": n, "P": p }) })
}

fn tau_grid(lo: f64, hi: f64) -> CliResult<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(CliError::usage("need 0 < --tau-min <= --tau-max"));
    }
    let mut out = Vec::new();
    let mut t = lo;
    while t <= hi * (1.0 + 1e-12) {
        out.push(t);
        t *= 2.0;
    }
    Ok(out)
}

fn core_family(f: FamilyArg) -> Option<Family> {
    match f {
        FamilyArg::Linear => Some(Family::Linear),
        FamilyArg::RolandCerf => Some(Family::RolandCerf),
        FamilyArg::PowerLaw => Some(Family::PowerLaw),
        FamilyArg::Regular => None,
    }
}

fn core_sampling(s: SamplingArg) -> Sampling {
    match s {
        SamplingArg::Midpoint => Sampling::Midpoint,
        SamplingArg::RightEndpoint => Sampling::RightEndpoint,
    }
}

/// Largest power-of-two depth with `2P < N`, capped at 512.
fn deepest_regular_level(n: usize) -> usize {
    let mut p = 2;
    while 2 * (2 * p) < n && 2 * p <= 512 {
        p *= 2;
    }
    p
}

pub fn scaling(g: &Globals, a: &ScalingArgs) -> CliResult<Report> {
    let n = g.n.unwrap_or(1024);
    let taus = tau_grid(a.tau_min, a.tau_max)?;
    let mut t;
    let table: Vec<(f64, f64)>;
    match core_family(a.family) {
        None => {
            let p_max = g.p.unwrap_or_else(|| deepest_regular_level(n));
            let cfg = config(g, g.tol_bound, OptimizerConfig::default().max_iterations)?;
            let levels = optimize_regular(n, p_max, &cfg)?;
            t = Table::new("scaling", &["tau", "eps", "P", BOUND_COLUMN]);
            for r in &levels {
                let p = r.schedule.depth();
                t.push(vec![
                    num(r.total_time_tau),
                    num(r.residual),
                    p.to_string(),
                    num(residual_bound(n, p)),
                ]);
            }
            table = levels.iter().map(|r| (r.total_time_tau, r.residual)).collect();
        }
        Some(family) => {
            if !(a.dt > 0.0 && a.step > 0.0) {
                return Err(CliError::usage("--dt and --step must be positive"));
            }
            let sampling = a.sampling.map(core_sampling).unwrap_or(family.default_sampling());
            let spec = if a.continuous {
                RunSpec::Continuous { family, c: a.c.unwrap_or(0.0), step: a.step }
            } else {
                RunSpec::Digitized { family, c: a.c.unwrap_or(0.0), sampling, dt: a.dt }
            };
            let rows = map_items(g.serial, &taus, |&tau| -> CliResult<(f64, f64, f64)> {
                if family == Family::Linear || a.c.is_some() {
                    return Ok((tau, defect_point(n, &spec, tau)?, a.c.unwrap_or(0.0)));
                }
                let best =
                    optimize_family_parameter(family, |c| defect_point(n, &spec.with_parameter(c), tau))?;
                Ok((tau, best.epsilon, best.c))
            })
            .into_iter()
            .collect::<CliResult<Vec<_>>>()?;
            t = Table::new("scaling", &["tau", "eps", "C"]);
            t.meta("sampling", format!("{sampling:?}"));
            t.meta(
                "integrator",
                if a.continuous { format!("rk4 step {}", a.step) } else { format!("digitized dt {}", a.dt) },
            );
            for (tau, eps, c) in &rows {
                t.push(vec![num(*tau), num(*eps), num(*c)]);
            }
            table = rows.iter().map(|r| (r.0, r.1)).collect();
        }
    }
    t.meta("N", n).meta("family", format!("{:?}", a.family));
    t.meta("fit_window", format!("[{}, {}]", a.tau_min, a.tau_max));
    let window = fit_window(&table, a.tau_min, a.tau_max);
    let fit = if window.len() >= 2 { fit_power_law(&window).ok() } else { None };
    fit_meta(&mut t, "fit_", fit.as_ref());
    let checks = vec![Check::holds(
        "power-law fit available",
        fit.map_or(f64::NAN, |f| f.exponent),
        "fit over at least two points",
        fit.is_some(),
    )
    .soft()];
    Ok(Report { tables: vec![t], schedules: Vec::new(), checks, config: json!({ "N": n }) })
}

/// Linear ramp with one time unit per step.
pub fn linear_dqa(p: usize) -> CliResult<AngleSchedule> {
    let ramp = ContinuousSchedule::new(Family::Linear, 0.0, p as f64)?;
    Ok(digitize(&ramp, p, Family::Linear.default_sampling(), DtMode::Uniform(1.0))?.angles().clone())
}

pub fn entropy(g: &Globals, a: &EntropyArgs) -> CliResult<Report> {
    let n = g.n.unwrap_or(1024);
    ascending(&a.p_list, "--p-list")?;
    if a.p_list[0] < 2 || 2 * a.p_list[a.p_list.len() - 1] >= n {
        return Err(CliError::usage("--p-list entries need P >= 2 and 2P < N"));
    }
    let cfg = config(g, g.tol_bound, OptimizerConfig::default().max_iterations)?;
    let regular = regular_chain(&a.p_list, |_| n, &linear_seed(2, SEED_DT)?, &cfg)?;
    let rcfg = config(g, g.tol_bound, a.max_iter)?;
    let random = map_items(g.serial, &a.p_list, |&p| -> CliResult<OptimResult> {
        Ok(optimize_start(&Landscape::new(n, p)?, 0, &rcfg)?)
    })
    .into_iter()
    .collect::<CliResult<Vec<_>>>()?;

    let mut t = Table::new(
        "entropy",
        &[
            "P",
            "S_regular",
            "S_linear_dqa",
            "S_random_init",
            "4S/N_regular",
            "4S/N_linear_dqa",
            "4S/N_random_init",
            "random_init_gap",
            "degenerate_steps",
        ],
    );
    t.meta("N", n).meta("linear_dqa", "dt = 1, right-endpoint sampling");
    let mut checks = Vec::new();
    let mut prev: Option<f64> = None;
    for ((&p, reg), rnd) in a.p_list.iter().zip(&regular).zip(&random) {
        let sr = shannon_adiabaticity(n, &reg.schedule)?;
        let sl = shannon_adiabaticity(n, &linear_dqa(p)?)?;
        let sx = shannon_adiabaticity(n, &rnd.schedule)?;
        let gap = rnd.residual - residual_bound(n, p);
        let degenerate = sr.degenerate_steps.len() + sl.degenerate_steps.len() + sx.degenerate_steps.len();
        t.push(vec![
            p.to_string(),
            num(sr.entropy),
            num(sl.entropy),
            num(sx.entropy),
            num(sr.normalized),
            num(sl.normalized),
            num(sx.normalized),
            num(gap),
            degenerate.to_string(),
        ]);
        checks.push(Check::holds(
            format!("S_regular < S_linear_dqa P={p}"),
            sr.entropy - sl.entropy,
            "< 0",
            sr.entropy < sl.entropy,
        ));
        if let Some(prev) = prev {
            checks.push(Check::holds(
                format!("S_regular decreasing at P={p}"),
                sr.entropy - prev,
                "< 0",
                sr.entropy < prev,
            ));
        }
        prev = Some(sr.entropy);
        checks.push(Check::holds(
            format!("random-init 4S/N P={p}"),
            sx.normalized,
            "in [0.8, 1.2]",
            (0.8..=1.2).contains(&sx.normalized),
        ));
        checks.push(
            Check::holds(
                format!("random-init run at bound P={p}"),
                gap,
                format!("<= {:e}", g.tol_bound),
                gap <= g.tol_bound,
            )
            .soft(),
        );
    }
    Ok(Report { tables: vec![t], schedules: Vec::new(), checks, config: json!({ "N": n }) })
}

fn alpha_grid(lo: f64, hi: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(CliError::usage("need --alpha-min <= --alpha-max and --alpha-step > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + step * i as f64).collect())
}

/// `(α*, distance)` minimizing the normalized collapse distance.
pub fn collapse_scan(profiles: &[SProfile], alphas: &[f64], edge: f64) -> CliResult<Vec<(f64, f64, f64)>> {
    alphas
        .iter()
        .map(|&a| {
            let c = scaling_collapse(profiles, a, edge)?;
            Ok((a, c.distance, c.raw_distance))
        })
        .collect()
}

pub fn argmin(rows: &[(f64, f64, f64)]) -> (f64, f64) {
    rows.iter().fold((f64::NAN, f64::INFINITY), |best, r| if r.1 < best.1 { (r.0, r.1) } else { best })
}

/// Distance at the grid point nearest to `alpha`.
pub fn distance_at(rows: &[(f64, f64, f64)], alpha: f64) -> f64 {
    rows.iter().min_by(|a, b| (a.0 - alpha).abs().total_cmp(&(b.0 - alpha).abs())).map_or(f64::NAN, |r| r.1)
}

/// Tolerance on the collapse exponent of the N = 2P family.
pub const CONTROLLABLE_ALPHA: (f64, f64) = (1.75, 0.1);

pub fn collapse(g: &Globals, a: &CollapseArgs) -> CliResult<Report> {
    let p_list = a.p_list.clone().unwrap_or_else(|| match a.family {
        CollapseFamily::Regular => vec![32, 64, 128],
        CollapseFamily::Controllable => vec![64, 128, 256],
    });
    ascending(&p_list, "--p-list")?;
    if p_list.len() < 2 || p_list[0] < 2 {
        return Err(CliError::usage("a collapse needs at least two depths, all >= 2"));
    }
    let alphas = alpha_grid(a.alpha_min, a.alpha_max, a.alpha_step)?;
    let cfg = config(g, g.tol_bound, OptimizerConfig::default().max_iterations)?;
    let seed = linear_seed(2, SEED_DT)?;
    let n = g.n.unwrap_or(1024);
    let levels = match a.family {
        CollapseFamily::Regular => regular_chain(&p_list, |_| n, &seed, &cfg)?,
        CollapseFamily::Controllable => regular_chain(&p_list, |p| 2 * p, &seed, &cfg)?,
    };
    let profiles = levels.iter().map(|r| angles_to_s(&r.schedule)).collect::<Result<Vec<_>, _>>()?;
    let rows = collapse_scan(&profiles, &alphas, a.edge)?;
    let (best, dist) = argmin(&rows);
    let raw_best = rows.iter().fold((f64::NAN, f64::INFINITY), |b, r| if r.2 < b.1 { (r.0, r.2) } else { b });

    let mut t = Table::new("collapse", &["alpha", "distance", "raw_distance"]);
    t.meta("family", format!("{:?}", a.family)).meta("P", format!("{p_list:?}")).meta("edge", a.edge);
    t.meta("argmin_alpha", best).meta("argmin_distance", dist).meta("argmin_alpha_raw", raw_best.0);
    for (al, d, raw) in &rows {
        t.push(vec![num(*al), num(*d), num(*raw)]);
    }
    let mut curves =
        Table::new("collapse_curves", &["P", "t_mid_over_tau", "s", "scaled = tau^alpha (s - 1/2)"]);
    curves.meta("alpha", best);
    for (r, prof) in levels.iter().zip(&profiles) {
        let scale = prof.tau.powf(best);
        for (mid, s) in prof.step_mid_times().iter().zip(&prof.s_values) {
            curves.push(vec![
                r.schedule.depth().to_string(),
                num(mid / prof.tau),
                num(*s),
                num(scale * (s - 0.5)),
            ]);
        }
    }
    let mut checks = vec![Check::holds(
        "collapse argmin inside the grid",
        best,
        "interior point",
        best > alphas[0] && best < alphas[alphas.len() - 1],
    )
    .soft()];
    match a.family {
        CollapseFamily::Regular => {
            let at_one = distance_at(&rows, 1.0);
            for other in [0.5, 1.5] {
                let d = distance_at(&rows, other);
                checks.push(
                    Check::holds(
                        format!("distance(1) below distance({other})"),
                        at_one - d,
                        "< 0",
                        at_one < d,
                    )
                    .soft(),
                );
            }
        }
        CollapseFamily::Controllable => {
            let (target, tol) = CONTROLLABLE_ALPHA;
            checks.push(
                Check::holds(
                    "collapse argmin near 1.75",
                    best,
                    format!("|alpha - {target}| <= {tol}"),
                    (best - target).abs() <= tol,
                )
                .soft(),
            );
        }
    }
    Ok(Report { tables: vec![t, curves], schedules: Vec::new(), checks, config: json!({ "N": n }) })
}

fn angles_from_file(path: &std::path::Path) -> CliResult<AngleSchedule> {
    match read_schedule(path)? {
        ScheduleFile::Angles(s) => Ok(s),
        ScheduleFile::Continuous(_) => {
            Err(CliError::usage("verify needs an angle schedule (P/gamma/beta), not a continuous one"))
        }
    }
}

pub fn verify_cmd(g: &Globals, a: &VerifyArgs) -> CliResult<Report> {
    let mut checks: Vec<(String, Check)> = Vec::new();
    let tag =
        |suite: &str, cs: Vec<Check>| cs.into_iter().map(move |c| (suite.to_string(), c)).collect::<Vec<_>>();

    if a.controllable {
        let (n, sched) = match &a.schedule {
            Some(path) => {
                let s = angles_from_file(path)?;
                (g.n.unwrap_or(2 * s.depth()), s)
            }
            None => {
                let n = g.n.unwrap_or(8);
                let p = g.p.unwrap_or(n / 2);
                (n, qaoa_ring::optim::closed_form_controllable(n, p)?)
            }
        };
        checks.extend(tag("controllable", verify::controllable_checks(n, &sched)?));
    } else if let Some(path) = &a.schedule {
        let s = angles_from_file(path)?;
        let n = g.n.unwrap_or((2 * s.depth() + 2).max(4));
        checks.push(("schedule".into(), verify::schedule_oracle_check(n, &s)?));
    }

    let suite = a.suite.or(if a.controllable || a.schedule.is_some() { None } else { Some(Suite::All) });
    let wants = |s: Suite| suite == Some(s) || suite == Some(Suite::All);
    let samples = |default: usize| a.samples.unwrap_or(default);
    let ps = |default: std::ops::RangeInclusive<usize>| g.p.map_or_else(|| default.collect(), |p| vec![p]);
    if wants(Suite::Oracle) {
        let ns: Vec<usize> = g.n.map_or_else(|| (4..=12).step_by(2).collect(), |n| vec![n]);
        checks.extend(tag("oracle", verify::oracle_suite(&ns, &ps(1..=6), samples(200), g.seed, g.serial)?));
    }
    if wants(Suite::Reduction) {
        checks.extend(tag(
            "reduction",
            verify::reduction_suite(g.n.unwrap_or(10), &ps(1..=3), samples(20), g.seed)?,
        ));
    }
    if wants(Suite::Symmetry) {
        checks.extend(tag(
            "symmetry",
            verify::symmetry_suite(samples(1000), g.p.unwrap_or(8), g.seed, g.serial)?,
        ));
    }
    if wants(Suite::EffectiveField) {
        checks.extend(tag("effective-field", verify::effective_field_suite(samples(10000), g.seed)?));
    }
    if wants(Suite::Gradient) {
        checks.extend(tag("gradient", verify::gradient_suite(&ps(1..=16), samples(100), g.seed, g.serial)?));
    }
    if checks.is_empty() {
        return Err(CliError::usage("nothing to verify"));
    }

    let mut t = Table::new("verify", &["suite", "check", "value", "criterion", "passed"]);
    t.meta("seed", g.seed);
    for (suite, c) in &checks {
        t.push(vec![suite.clone(), c.name.clone(), num(c.value), c.criterion.clone(), c.passed.to_string()]);
    }
    Ok(Report {
        tables: vec![t],
        schedules: Vec::new(),
        checks: checks.into_iter().map(|(_, c)| c).collect(),
        config: json!({ "suite": suite }),
    })
}

/// Random-start cost rows with the starts of every depth run in parallel.
pub fn random_cost_scan(
    p_list: &[usize],
    starts: usize,
    cfg: &OptimizerConfig,
    serial: bool,
) -> CliResult<CostScan> {
    let jobs: Vec<(usize, u64)> =
        p_list.iter().flat_map(|&p| (0..starts as u64).map(move |i| (p, i))).collect();
    let lands =
        p_list.iter().map(|&p| Landscape::new(cost_chain_length(p), p)).collect::<Result<Vec<_>, _>>()?;
    let runs = map_items(serial, &jobs, |&(p, i)| {
        let land = &lands[p_list.iter().position(|&q| q == p).expect("listed depth")];
        optimize_start(land, i, cfg)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<CostRow> = p_list
        .iter()
        .zip(runs.chunks(starts))
        .map(|(&p, chunk)| CostRow::from_random_runs(p, chunk, cfg.bound_gap_tolerance))
        .collect();
    Ok(CostScan::from_rows(InitMode::Random, rows))
}

pub fn cost(g: &Globals, a: &CostArgs) -> CliResult<Report> {
    ascending(&a.p_list, "--p-list")?;
    if a.starts == 0 {
        return Err(CliError::usage("--starts must be positive"));
    }
    let cfg = config(g, g.tol_iter, a.max_iter)?;
    let mut scans = Vec::new();
    if a.mode != CostMode::Iterative {
        scans.push(random_cost_scan(&a.p_list, a.starts, &cfg, g.serial)?);
    }
    if a.mode != CostMode::Random {
        if a.p_list[0] < 2 {
            return Err(CliError::usage("iterative mode needs P >= 2"));
        }
        scans.push(iteration_cost_scan(&a.p_list, InitMode::Iterative, 1, &cfg)?);
    }

    let mut t = Table::new("cost", &["mode", "P", "n_iter", "runs", "reached"]);
    t.meta("tolerance", g.tol_iter).meta("chain_length", "N = 2P + 10");
    let mut checks = Vec::new();
    for s in &scans {
        let name = format!("{:?}", s.mode).to_lowercase();
        for r in &s.rows {
            t.push(vec![
                name.clone(),
                r.p.to_string(),
                num(r.n_iter),
                r.runs.to_string(),
                r.reached.to_string(),
            ]);
        }
        fit_meta(&mut t, &format!("{name}_"), s.fit.as_ref());
        let (target, width) = match s.mode {
            InitMode::Random => (2.0, 0.5),
            InitMode::Iterative => (0.5, 0.3),
        };
        let slope = s.fit.map_or(f64::NAN, |f| f.exponent);
        checks.push(
            Check::holds(
                format!("{name} slope"),
                slope,
                format!("{target} +- {width}"),
                (slope - target).abs() <= width,
            )
            .soft(),
        );
    }
    if let [r, i] = &scans[..] {
        if let (Some(fr), Some(fi)) = (r.fit, i.fit) {
            checks.push(Check::holds(
                "random slope > iterative slope",
                fr.exponent - fi.exponent,
                "> 0",
                fr.exponent > fi.exponent,
            ));
        }
    }
    Ok(Report { tables: vec![t], schedules: Vec::new(), checks, config: json!({ "p_list": a.p_list }) })
}
