//! Continuous annealing schedules `s(t)`, their digitization into QAOA angles,
//! the inverse map from angles back to `s_m`, and the scaling-collapse test.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::schedule::AngleSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Linear,
    RolandCerf,
    PowerLaw,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::RolandCerf => "roland_cerf",
            Family::PowerLaw => "power_law",
        }
    }

    /// Search interval for the shape parameter `C`.
    pub fn default_bracket(self) -> Option<(f64, f64)> {
        match self {
            Family::Linear => None,
            Family::RolandCerf => Some((0.1, 100.0)),
            Family::PowerLaw => Some((1.0, 32.0)),
        }
    }

    /// Sampling rule used when the caller does not choose one.
    pub fn default_sampling(self) -> Sampling {
        match self {
            Family::Linear => Sampling::RightEndpoint,
            _ => Sampling::Midpoint,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Family::Linear),
            "roland_cerf" => Ok(Family::RolandCerf),
            "power_law" => Ok(Family::PowerLaw),
            other => Err(domain(format!("unknown schedule family `{other}`"))),
        }
    }
}

/// `s(t)` on `[0, τ]` with `s(0) = 0`, `s(τ/2) = 1/2`, `s(τ) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousSchedule {
    family: Family,
    c: f64,
    tau: f64,
}

impl ContinuousSchedule {
    /// `c` is ignored for the linear family and must be positive otherwise.
    pub fn new(family: Family, c: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(domain(format!("total time must be positive, got {tau}")));
        }
        if family != Family::Linear && !(c > 0.0 && c.is_finite()) {
            return Err(domain(format!("{family} needs C > 0, got {c}")));
        }
        Ok(ContinuousSchedule { family, c, tau })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.c
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `s` at the fraction `u = t/τ ∈ [0, 1]`.
    pub fn at_fraction(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let x = 2.0 * u - 1.0;
        match self.family {
            Family::Linear => u,
            Family::RolandCerf => 0.5 + (x * self.c.atan()).tan() / (2.0 * self.c),
            Family::PowerLaw => 0.5 + 0.5 * x.signum() * x.abs().powf(self.c),
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.tau).contains(&t) {
            return Err(domain(format!("t = {t} outside [0, {}]", self.tau)));
        }
        Ok(self.at_fraction(t / self.tau))
    }

    /// `ds/dt`, used by the continuous-time integrator.
    pub fn rate(&self, t: f64) -> f64 {
        let u = t / self.tau;
        let x = 2.0 * u - 1.0;
        let du = 1.0 / self.tau;
        match self.family {
            Family::Linear => du,
            Family::RolandCerf => {
                let a = self.c.atan();
                let sec = 1.0 / (x * a).cos();
                sec * sec * a / self.c * du
            }
            Family::PowerLaw => {
                if x == 0.0 && self.c > 1.0 {
                    0.0
                } else {
                    self.c * x.abs().powf(self.c - 1.0) * du
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// `s_m = s((m − 1/2) τ/P)`
    Midpoint,
    /// `s_m = s(m τ/P)`, so the last step is pure cost.
    RightEndpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtMode {
    /// Every step lasts `dt`; the schedule shape is sampled at fractions of
    /// its own τ and the digitized total time is `P·dt`.
    Uniform(f64),
    /// Every step lasts `τ/P`.
    Proportional,
}

/// A step-function schedule `s_m` with durations `Δt_m` and its angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitizedSchedule {
    s_values: Vec<f64>,
    dt_values: Vec<f64>,
    angles: AngleSchedule,
}

impl DigitizedSchedule {
    /// Builds the schedule from step values; `γ_m = s_m Δt_m`, `β_m = (1 − s_m) Δt_m`.
    pub fn from_steps(s_values: Vec<f64>, dt_values: Vec<f64>) -> Result<Self> {
        if s_values.len() != dt_values.len() {
            return Err(domain("s and dt must have the same length"));
        }
        if dt_values.iter().any(|&d| !(d > 0.0)) {
            return Err(domain("step durations must be positive"));
        }
        let gamma = s_values.iter().zip(&dt_values).map(|(s, d)| s * d).collect();
        let beta = s_values.iter().zip(&dt_values).map(|(s, d)| (1.0 - s) * d).collect();
        let angles = AngleSchedule::new(gamma, beta)?;
        Ok(DigitizedSchedule { s_values, dt_values, angles })
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s_values
    }

    pub fn dt_values(&self) -> &[f64] {
        &self.dt_values
    }

    pub fn angles(&self) -> &AngleSchedule {
        &self.angles
    }

    pub fn tau(&self) -> f64 {
        self.dt_values.iter().sum()
    }
}

pub fn digitize(
    sched: &ContinuousSchedule,
    p: usize,
    sampling: Sampling,
    dt_mode: DtMode,
) -> Result<DigitizedSchedule> {
    if p == 0 {
        return Err(domain("digitization needs P >= 1"));
    }
    let dt = match dt_mode {
        DtMode::Uniform(dt) => dt,
        DtMode::Proportional => sched.tau() / p as f64,
    };
    let s_values = (1..=p)
        .map(|m| {
            let u = match sampling {
                Sampling::Midpoint => (m as f64 - 0.5) / p as f64,
                Sampling::RightEndpoint => m as f64 / p as f64,
            };
            sched.at_fraction(u)
        })
        .collect();
    DigitizedSchedule::from_steps(s_values, alloc::vec![dt; p])
}

/// Step values recovered from a QAOA schedule: `s_m = γ_m/(γ_m + β_m)`,
/// `Δt_m = γ_m + β_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SProfile {
    pub s_values: Vec<f64>,
    pub dt_values: Vec<f64>,
    pub tau: f64,
}

impl SProfile {
    /// Time at the end of each step.
    pub fn step_end_times(&self) -> Vec<f64> {
        let mut t = 0.0;
        self.dt_values
            .iter()
            .map(|d| {
                t += d;
                t
            })
            .collect()
    }

    /// Time at the centre of each step.
    pub fn step_mid_times(&self) -> Vec<f64> {
        self.step_end_times().iter().zip(&self.dt_values).map(|(t, d)| t - 0.5 * d).collect()
    }

    /// Total variation `Σ |s_{m+1} − s_m|`.
    pub fn total_variation(&self) -> f64 {
        self.s_values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }
}

pub fn angles_to_s(sched: &AngleSchedule) -> Result<SProfile> {
    let mut s_values = Vec::with_capacity(sched.depth());
    let mut dt_values = Vec::with_capacity(sched.depth());
    for (m, (g, b)) in sched.layers().enumerate() {
        let dt = g + b;
        if dt == 0.0 {
            return Err(domain(format!("step {} has zero duration", m + 1)));
        }
        s_values.push(g / dt);
        dt_values.push(dt);
    }
    Ok(SProfile { tau: dt_values.iter().sum(), s_values, dt_values })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseReport {
    pub alpha: f64,
    /// Largest pairwise sup-distance, relative to the mean sup-norm of the
    /// rescaled curves.
    pub distance: f64,
    /// The same pairwise sup-distance without normalization.
    pub raw_distance: f64,
    pub grid: Vec<f64>,
}

/// Default half-width excluded at each end of `t/τ` in the collapse.
pub const COLLAPSE_EDGE: f64 = 0.1;
const COLLAPSE_GRID: usize = 201;

fn resample(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    ys[i - 1] + (x - x0) / (x1 - x0) * (ys[i] - ys[i - 1])
}

/// Tests `s_τ(t) = 1/2 + τ^{−α} f(t/τ)` on a set of profiles.
///
/// Each profile is mapped to `(t/τ, τ^α (s − 1/2))` at step centres,
/// resampled on a common grid inside `[edge, 1 − edge]`, and compared.
pub fn scaling_collapse(runs: &[SProfile], alpha: f64, edge: f64) -> Result<CollapseReport> {
    if runs.len() < 2 {
        return Err(domain("a collapse needs at least two runs"));
    }
    let curves: Vec<(Vec<f64>, Vec<f64>)> = runs
        .iter()
        .map(|r| {
            let xs: Vec<f64> = r.step_mid_times().iter().map(|t| t / r.tau).collect();
            let ys: Vec<f64> = r.s_values.iter().map(|s| r.tau.powf(alpha) * (s - 0.5)).collect();
            (xs, ys)
        })
        .collect();
    if curves.iter().any(|(xs, _)| xs.len() < 2) {
        return Err(domain("every profile needs at least two steps"));
    }
    let lo = curves.iter().map(|(xs, _)| xs[0]).fold(edge, f64::max);
    let hi = curves.iter().map(|(xs, _)| xs[xs.len() - 1]).fold(1.0 - edge, f64::min);
    if !(hi > lo) {
        return Err(domain("profiles share no common t/τ window"));
    }
    let grid: Vec<f64> =
        (0..COLLAPSE_GRID).map(|i| lo + (hi - lo) * i as f64 / (COLLAPSE_GRID - 1) as f64).collect();
    let sampled: Vec<Vec<f64>> =
        curves.iter().map(|(xs, ys)| grid.iter().map(|&x| resample(xs, ys, x)).collect()).collect();
    let mut raw: f64 = 0.0;
    for i in 0..sampled.len() {
        for j in i + 1..sampled.len() {
            let d = sampled[i].iter().zip(&sampled[j]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            raw = raw.max(d);
        }
    }
    let scale = sampled.iter().map(|c| c.iter().fold(0.0, |m: f64, v| m.max(v.abs()))).sum::<f64>()
        / sampled.len() as f64;
    let distance = if scale > 0.0 { raw / scale } else { 0.0 };
    Ok(CollapseReport { alpha, distance, raw_distance: raw, grid })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyOptimum {
    pub c: f64,
    pub epsilon: f64,
    pub evaluations: usize,
}

/// Coarse log-spaced scan of `C` over the family bracket, then golden-section
/// refinement (in `log C`) around the best grid point.
///
/// `evaluator` maps `C` to the residual energy of the digitized run.
pub fn optimize_family_parameter<F>(family: Family, mut evaluator: F) -> Result<FamilyOptimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (lo, hi) = family.default_bracket().ok_or_else(|| domain("the linear family has no parameter"))?;
    optimize_in_bracket(lo, hi, &mut evaluator)
}

pub fn optimize_in_bracket<F>(lo: f64, hi: f64, evaluator: &mut F) -> Result<FamilyOptimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    const COARSE: usize = 25;
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    if !(0.0 < lo && lo < hi) {
        return Err(domain("bracket must satisfy 0 < lo < hi"));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut evaluations = 0;
    let mut eval = |lc: f64| -> Result<f64> {
        evaluations += 1;
        evaluator(lc.exp())
    };
    let grid: Vec<f64> = (0..COARSE).map(|i| llo + (lhi - llo) * i as f64 / (COARSE - 1) as f64).collect();
    let values = grid.iter().map(|&g| eval(g)).collect::<Result<Vec<f64>>>()?;
    let best = (0..COARSE).fold(0, |b, i| if values[i] < values[b] { i } else { b });
    if best == 0 || best == COARSE - 1 {
        return Err(Error::BracketFailure { lo, hi });
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    while b - a > 1e-6 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = eval(x2)?;
        }
    }
    let (mut lc, mut eps) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if values[best] < eps {
        lc = grid[best];
        eps = values[best];
    }
    Ok(FamilyOptimum { c: lc.exp(), epsilon: eps, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn families_pass_through_half() {
        for fam in [Family::Linear, Family::RolandCerf, Family::PowerLaw] {
            for c in [0.3, 1.0, 7.0] {
                let s = ContinuousSchedule::new(fam, c, 10.0).unwrap();
                assert!((s.evaluate(5.0).unwrap() - 0.5).abs() < 1e-15);
                assert!(s.evaluate(0.0).unwrap().abs() < 1e-12);
                assert!((s.evaluate(10.0).unwrap() - 1.0).abs() < 1e-12);
                assert!(s.evaluate(10.5).is_err());
                let ts: Vec<f64> = (0..=100).map(|i| s.evaluate(0.1 * i as f64).unwrap()).collect();
                assert!(ts.windows(2).all(|w| w[1] >= w[0]));
            }
        }
    }

    #[test]
    fn interior_values_are_exact() {
        let rc = ContinuousSchedule::new(Family::RolandCerf, 1.0, 4.0).unwrap();
        // tan(π/8)/2 above one half at u = 3/4
        let want = 0.5 + (core::f64::consts::FRAC_PI_8).tan() / 2.0;
        assert!((rc.evaluate(3.0).unwrap() - want).abs() < 1e-15);
        let pl = ContinuousSchedule::new(Family::PowerLaw, 2.0, 4.0).unwrap();
        assert!((pl.evaluate(1.0).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn limits_reduce_to_linear() {
        let lin = ContinuousSchedule::new(Family::Linear, 0.0, 1.0).unwrap();
        let pl = ContinuousSchedule::new(Family::PowerLaw, 1.0, 1.0).unwrap();
        let rc = ContinuousSchedule::new(Family::RolandCerf, 1e-6, 1.0).unwrap();
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            assert!((pl.at_fraction(u) - lin.at_fraction(u)).abs() < 1e-15);
            assert!((rc.at_fraction(u) - lin.at_fraction(u)).abs() < 1e-11);
        }
        assert!(ContinuousSchedule::new(Family::PowerLaw, 0.0, 1.0).is_err());
        assert!(ContinuousSchedule::new(Family::Linear, 0.0, 0.0).is_err());
    }

    #[test]
    fn rate_matches_finite_difference() {
        for fam in [Family::Linear, Family::RolandCerf, Family::PowerLaw] {
            let s = ContinuousSchedule::new(fam, 2.5, 7.0).unwrap();
            for t in [0.4, 2.0, 4.1, 6.5] {
                let h = 1e-6;
                let fd = (s.evaluate(t + h).unwrap() - s.evaluate(t - h).unwrap()) / (2.0 * h);
                assert!((fd - s.rate(t)).abs() < 1e-7, "{fam} at {t}");
            }
        }
    }

    #[test]
    fn linear_right_endpoint_p2() {
        let lin = ContinuousSchedule::new(Family::Linear, 0.0, 2.0).unwrap();
        let d = digitize(&lin, 2, Sampling::RightEndpoint, DtMode::Uniform(1.0)).unwrap();
        assert_eq!(d.s_values(), &[0.5, 1.0]);
        assert_eq!(d.angles().gamma(), &[0.5, 1.0]);
        assert_eq!(d.angles().beta(), &[0.5, 0.0]);
        assert_eq!(d.tau(), 2.0);
    }

    #[test]
    fn sum_rule_and_round_trip() {
        let rc = ContinuousSchedule::new(Family::RolandCerf, 3.0, 8.0).unwrap();
        for mode in [DtMode::Uniform(0.7), DtMode::Proportional] {
            let d = digitize(&rc, 8, Sampling::Midpoint, mode).unwrap();
            assert!((d.angles().total_time() - d.tau()).abs() < 1e-12);
            let back = angles_to_s(d.angles()).unwrap();
            for (a, b) in back.s_values.iter().zip(d.s_values()) {
                assert!((a - b).abs() < 1e-14);
            }
            for (a, b) in back.dt_values.iter().zip(d.dt_values()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        let prof = digitize(&rc, 8, Sampling::Midpoint, DtMode::Proportional).unwrap();
        let s = prof.s_values();
        // steep near the ends, flat through the middle
        assert!(s[1] - s[0] > s[4] - s[3]);
    }

    #[test]
    fn angles_to_s_examples() {
        let eq = AngleSchedule::new(vec![0.3, 0.7], vec![0.3, 0.7]).unwrap();
        assert_eq!(angles_to_s(&eq).unwrap().s_values, vec![0.5, 0.5]);
        let zero = AngleSchedule::new(vec![0.3, 0.0], vec![0.3, 0.0]).unwrap();
        assert!(angles_to_s(&zero).is_err());
    }

    #[test]
    fn identical_profiles_collapse() {
        let prof = SProfile { s_values: vec![0.1, 0.4, 0.6, 0.9], dt_values: vec![1.0; 4], tau: 4.0 };
        let rep = scaling_collapse(&[prof.clone(), prof], 1.3, COLLAPSE_EDGE).unwrap();
        assert_eq!(rep.raw_distance, 0.0);
        assert_eq!(rep.distance, 0.0);
    }

    #[test]
    fn bracket_search() {
        let opt =
            optimize_in_bracket(0.1, 100.0, &mut |c: f64| Ok((c.ln() - 2.0f64.ln()).powi(2) + 0.1)).unwrap();
        assert!((opt.c - 2.0).abs() < 1e-5);
        let edge = optimize_in_bracket(1.0, 32.0, &mut |c: f64| Ok(c));
        assert!(matches!(edge, Err(Error::BracketFailure { .. })));
    }
}
