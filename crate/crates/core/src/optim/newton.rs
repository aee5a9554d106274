use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::landscape::Landscape;

/// Central-difference step for the Hessian columns.
const HESSIAN_STEP: f64 = 1e-5;
/// Largest accepted Newton step (max-norm); larger ones mean the point was
/// not inside the quadratic region.
const MAX_NEWTON_STEP: f64 = 1e-3;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` for a numerically singular matrix.
fn solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton iterations on `∇ε = 0` with a Hessian differenced from the analytic
/// gradient.
///
/// Near a flat minimum the residual itself stops resolving the position long
/// before the gradient does, so this refines a point BFGS has already brought
/// into the quadratic region. A step is kept only if it shortens the gradient
/// without raising the residual beyond rounding. Returns the number of steps
/// kept.
pub(crate) fn newton_polish(land: &Landscape, x: &mut [f64], max_steps: usize) -> usize {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut value = land.value_and_gradient(x, &mut g);
    let mut kept = 0;
    let mut gp = vec![0.0; n];
    let mut gm = vec![0.0; n];
    for _ in 0..max_steps {
        let mut hess = vec![vec![0.0; n]; n];
        let mut probe = x.to_vec();
        for j in 0..n {
            probe[j] = x[j] + HESSIAN_STEP;
            land.value_and_gradient(&probe, &mut gp);
            probe[j] = x[j] - HESSIAN_STEP;
            land.value_and_gradient(&probe, &mut gm);
            probe[j] = x[j];
            for i in 0..n {
                hess[i][j] = (gp[i] - gm[i]) / (2.0 * HESSIAN_STEP);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (hess[i][j] + hess[j][i]);
                hess[i][j] = s;
                hess[j][i] = s;
            }
        }
        let mut rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        let Some(step) = solve(&mut hess, &mut rhs) else { break };
        if step.iter().fold(0.0, |m: f64, v| m.max(v.abs())) > MAX_NEWTON_STEP {
            break;
        }
        let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + d).collect();
        let mut gt = vec![0.0; n];
        let vt = land.value_and_gradient(&trial, &mut gt);
        let slack = 64.0 * f64::EPSILON * value.abs().max(1e-300);
        if !(norm(&gt) < norm(&g)) || vt > value + slack {
            break;
        }
        x.copy_from_slice(&trial);
        g = gt;
        value = vt;
        kept += 1;
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let mut b = vec![3.0, 5.0];
        let x = solve(&mut a, &mut b).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(solve(&mut [vec![0.0]], &mut [1.0]).is_none());
    }

    #[test]
    fn polish_sharpens_p1_minimum() {
        let land = Landscape::new(20, 1).unwrap();
        let mut x = vec![core::f64::consts::FRAC_PI_8 + 1e-5, core::f64::consts::FRAC_PI_8 - 1e-5];
        let kept = newton_polish(&land, &mut x, 5);
        assert!(kept >= 1);
        assert!((x[0] - core::f64::consts::FRAC_PI_8).abs() < 1e-10);
        assert!((x[1] - core::f64::consts::FRAC_PI_8).abs() < 1e-10);
    }
}
