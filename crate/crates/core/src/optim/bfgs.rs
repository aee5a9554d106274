//! Dense BFGS with a strong-Wolfe line search (Nocedal & Wright, Alg. 3.5/3.6
//! and 6.1).

use alloc::vec::Vec;

use num_traits::Float;

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Gradient norm fell below the tolerance.
    Gradient,
    /// The objective came within the gap tolerance of the known target.
    Target,
    /// No step satisfying the Wolfe conditions could be found.
    LineSearch,
    /// Iteration budget exhausted.
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    pub c1: f64,
    pub c2: f64,
    /// Known lower bound on the objective and the gap at which to stop.
    pub target: Option<(f64, f64)>,
    /// Cap on the largest coordinate change of a single step.
    pub max_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub termination: Termination,
    /// Objective at every accepted iterate, starting with the initial point.
    pub history: Vec<f64>,
}

impl BfgsOutcome {
    pub fn converged(&self) -> bool {
        matches!(self.termination, Termination::Gradient | Termination::Target)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Probe {
    alpha: f64,
    value: f64,
    slope: f64,
    x: Vec<f64>,
    grad: Vec<f64>,
}

struct LineSearch<'a, F> {
    objective: &'a mut F,
    x0: &'a [f64],
    dir: &'a [f64],
    f0: f64,
    slope0: f64,
    c1: f64,
    c2: f64,
    evaluations: usize,
}

impl<F: FnMut(&[f64], &mut [f64]) -> f64> LineSearch<'_, F> {
    fn probe(&mut self, alpha: f64) -> Probe {
        let x: Vec<f64> = self.x0.iter().zip(self.dir).map(|(x, d)| x + alpha * d).collect();
        let mut grad = alloc::vec![0.0; x.len()];
        let value = (self.objective)(&x, &mut grad);
        self.evaluations += 1;
        let slope = dot(&grad, self.dir);
        Probe { alpha, value, slope, x, grad }
    }

    fn armijo(&self, p: &Probe) -> bool {
        p.value <= self.f0 + self.c1 * p.alpha * self.slope0
    }

    fn curvature(&self, p: &Probe) -> bool {
        p.slope.abs() <= -self.c2 * self.slope0
    }

    fn search(&mut self, alpha_init: f64, alpha_max: f64) -> Option<Probe> {
        let mut prev =
            Probe { alpha: 0.0, value: self.f0, slope: self.slope0, x: self.x0.to_vec(), grad: Vec::new() };
        let mut alpha = alpha_init;
        for i in 0..40 {
            let cur = self.probe(alpha);
            if !cur.value.is_finite() {
                return None;
            }
            if !self.armijo(&cur) || (i > 0 && cur.value >= prev.value) {
                return self.zoom(prev, cur);
            }
            if self.curvature(&cur) {
                return Some(cur);
            }
            if cur.slope >= 0.0 {
                return self.zoom(cur, prev);
            }
            if alpha >= alpha_max {
                return Some(cur);
            }
            alpha = (2.0 * alpha).min(alpha_max);
            prev = cur;
        }
        None
    }

    /// `lo` satisfies Armijo and has the lowest value seen; the minimizer lies
    /// between `lo` and `hi`.
    fn zoom(&mut self, mut lo: Probe, mut hi: Probe) -> Option<Probe> {
        let mut best: Option<Probe> = None;
        for _ in 0..60 {
            let width = hi.alpha - lo.alpha;
            if width.abs() < 1e-16 * lo.alpha.abs().max(1.0) {
                break;
            }
            let alpha = interpolate(&lo, &hi);
            let cur = self.probe(alpha);
            if !self.armijo(&cur) || cur.value >= lo.value {
                hi = cur;
            } else {
                if self.curvature(&cur) {
                    return Some(cur);
                }
                if cur.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = cur;
                if best.as_ref().is_none_or(|b| lo.value < b.value) {
                    best = Some(Probe {
                        alpha: lo.alpha,
                        value: lo.value,
                        slope: lo.slope,
                        x: lo.x.clone(),
                        grad: lo.grad.clone(),
                    });
                }
            }
        }
        // Fall back on an Armijo point that still lowered the objective.
        best.filter(|b| b.value < self.f0)
    }
}

/// Cubic interpolation of the minimizer between two probes, safeguarded to
/// the inner 80% of the interval.
fn interpolate(lo: &Probe, hi: &Probe) -> f64 {
    let (a, b) = (lo.alpha, hi.alpha);
    let d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
    let disc = d1 * d1 - lo.slope * hi.slope;
    let mid = 0.5 * (a + b);
    let candidate = if disc >= 0.0 {
        let d2 = (b - a).signum() * disc.sqrt();
        b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2)
    } else {
        mid
    };
    let (left, right) = if a < b { (a, b) } else { (b, a) };
    let margin = 0.1 * (right - left);
    if !candidate.is_finite() || candidate < left + margin || candidate > right - margin {
        mid
    } else {
        candidate
    }
}

/// Minimizes `objective`, which returns the value and writes the gradient.
pub fn minimize<F>(objective: &mut F, x0: &[f64], opts: &BfgsOptions) -> BfgsOutcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut grad = alloc::vec![0.0; n];
    let mut value = objective(&x, &mut grad);
    let mut evaluations = 1;
    let mut history = alloc::vec![value];
    // inverse Hessian approximation, row-major
    let mut h = alloc::vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    let mut first_update = true;
    let mut iterations = 0;
    let reached = |v: f64| opts.target.is_some_and(|(t, gap)| v - t <= gap);

    let termination = loop {
        let gnorm = norm(&grad);
        if reached(value) {
            break Termination::Target;
        }
        if gnorm < opts.gradient_tolerance {
            break Termination::Gradient;
        }
        if iterations >= opts.max_iterations {
            break Termination::MaxIterations;
        }
        let mut dir: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &grad)).collect();
        let mut slope0 = dot(&dir, &grad);
        if !(slope0 < 0.0) {
            // lost positive definiteness: restart from steepest descent
            h.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..n {
                h[i * n + i] = 1.0;
            }
            first_update = true;
            dir = grad.iter().map(|g| -g).collect();
            slope0 = -gnorm * gnorm;
        }
        let alpha_max = match opts.max_step {
            Some(cap) => cap / dir.iter().fold(0.0, |m: f64, d| m.max(d.abs())),
            None => 1e3,
        };
        let alpha_init = if first_update { (1.0 / norm(&dir)).min(1.0) } else { 1.0 }.min(alpha_max);
        let mut ls = LineSearch {
            objective: &mut *objective,
            x0: &x,
            dir: &dir,
            f0: value,
            slope0,
            c1: opts.c1,
            c2: opts.c2,
            evaluations: 0,
        };
        let step = ls.search(alpha_init, alpha_max);
        evaluations += ls.evaluations;
        let Some(step) = step else {
            break Termination::LineSearch;
        };
        iterations += 1;

        let s: Vec<f64> = step.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = step.grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if first_update {
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
                first_update = false;
            }
            bfgs_update(&mut h, &s, &y, sy);
        }
        x = step.x;
        grad = step.grad;
        value = step.value;
        history.push(value);
    };

    BfgsOutcome { gradient_norm: norm(&grad), x, value, iterations, evaluations, termination, history }
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, `ρ = 1/(yᵀs)`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let coef = (1.0 + rho * yhy) * rho;
    for i in 0..n {
        let row = &mut h[i * n..(i + 1) * n];
        for j in 0..n {
            row[j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> BfgsOptions {
        BfgsOptions {
            gradient_tolerance: 1e-10,
            max_iterations: 500,
            c1: 1e-4,
            c2: 0.9,
            target: None,
            max_step: None,
        }
    }

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let out = minimize(&mut f, &[-1.2, 1.0], &opts());
        assert!(out.converged(), "{:?}", out.termination);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] - 1.0).abs() < 1e-8);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn quadratic_target_halt() {
        let mut f = |x: &[f64], g: &mut [f64]| {
            g.iter_mut().zip(x).enumerate().for_each(|(i, (gi, xi))| *gi = 2.0 * (i + 1) as f64 * xi);
            x.iter().enumerate().map(|(i, xi)| (i + 1) as f64 * xi * xi).sum()
        };
        let mut o = opts();
        o.target = Some((0.0, 1e-3));
        let out = minimize(&mut f, &[1.0, 1.0, 1.0], &o);
        assert_eq!(out.termination, Termination::Target);
        assert!(out.value <= 1e-3);
    }

    #[test]
    fn iteration_cap_reported() {
        let mut f = |x: &[f64], g: &mut [f64]| {
            g[0] = 4.0 * x[0].powi(3);
            x[0].powi(4)
        };
        let mut o = opts();
        o.max_iterations = 2;
        let out = minimize(&mut f, &[3.0], &o);
        assert_eq!(out.termination, Termination::MaxIterations);
        assert!(!out.converged());
        assert!(out.value < 81.0);
    }
}
