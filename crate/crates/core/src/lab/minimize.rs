//! Quasi-Newton descent on a smooth objective with finite-difference
//! gradients, and Newton steps back onto a constraint set.

use nalgebra::{DMatrix, DVector, SVD};

/// Iteration cap handed to the SVD; its default is unbounded.
pub(crate) const SVD_MAX_ITERS: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Relative central-difference step; `h_i = rel_step · max(1, |x_i|)`.
    pub rel_step: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_iters: 500, grad_tol: 1e-12, rel_step: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub iterations: usize,
}

pub(crate) fn gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], rel_step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = rel_step * x[i].abs().max(1.0);
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS on the inverse Hessian with Armijo backtracking. Stops on a small
/// gradient, a failed line search, or the iteration cap.
pub(crate) fn bfgs(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, opts: Options) -> Outcome {
    let m = x0.len();
    let identity = |m: usize| {
        let mut h = vec![0.0; m * m];
        for i in 0..m {
            h[i * m + i] = 1.0;
        }
        h
    };
    let mut h = identity(m);
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = gradient(&f, &x, opts.rel_step);
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if g.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())) <= opts.grad_tol {
            break;
        }
        let mut dir: Vec<f64> = (0..m).map(|i| -dot(&h[i * m..(i + 1) * m], &g)).collect();
        let mut slope = dot(&dir, &g);
        if !(slope < 0.0) {
            h = identity(m);
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let ft = f(&trial);
            if ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else { break };
        iterations += 1;

        let g_new = gradient(&f, &x_new, opts.rel_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            // H ← (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..m).map(|i| dot(&h[i * m..(i + 1) * m], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..m {
                for j in 0..m {
                    h[i * m + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        let stalled = f_new >= fx && s.iter().all(|v| v.abs() <= 1e-16 * x.iter().fold(1.0_f64, |a, b| a.max(b.abs())));
        x = x_new;
        fx = f_new;
        g = g_new;
        if stalled {
            break;
        }
    }
    Outcome { x, iterations }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Minimum-norm Newton corrections `x ← x − J⁺ c(x)` toward `c = 0`, with a
/// central-difference Jacobian and step halving whenever `max |c|` fails to
/// drop. Runs until `done(x)`, a stall, or `max_steps`; returns the final
/// point and the number of accepted steps.
pub(crate) fn newton_feasibility(
    c: impl Fn(&[f64]) -> Vec<f64>,
    x0: Vec<f64>,
    max_steps: usize,
    done: impl Fn(&[f64]) -> bool,
) -> (Vec<f64>, usize) {
    let mut x = x0;
    let mut cx = c(&x);
    let mut steps = 0;
    while steps < max_steps && !done(&x) {
        let m = x.len();
        let mut jac = DMatrix::<f64>::zeros(cx.len(), m);
        let mut probe = x.clone();
        for i in 0..m {
            let h = 1e-7 * x[i].abs().max(1.0);
            probe[i] = x[i] + h;
            let up = c(&probe);
            probe[i] = x[i] - h;
            let down = c(&probe);
            probe[i] = x[i];
            for (r, (u, d)) in up.iter().zip(&down).enumerate() {
                jac[(r, i)] = (u - d) / (2.0 * h);
            }
        }
        let Some(svd) = SVD::try_new(jac, true, true, f64::EPSILON, SVD_MAX_ITERS) else { break };
        let tol = 1e-10 * svd.singular_values.max().max(1.0);
        let Ok(delta) = svd.solve(&DVector::from_column_slice(&cx), tol) else { break };
        let current = max_abs(&cx);
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..12 {
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a - scale * b).collect();
            let ct = c(&trial);
            if max_abs(&ct) < current {
                accepted = Some((trial, ct));
                break;
            }
            scale *= 0.5;
        }
        let Some((xn, cn)) = accepted else { break };
        x = xn;
        cx = cn;
        steps += 1;
    }
    (x, steps)
}
