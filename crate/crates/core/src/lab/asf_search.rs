use serde::Serialize;

use super::minimize::{self, Options};
use crate::banach::{asf_dist_sq, dual_norm, Asf, Exponent, PNormSpace};
use crate::error::{FrameLabError, Result};
use crate::spectral::dot;

const STALL_ROUNDS: usize = 3;
const NEWTON_STEPS: usize = 50;

/// Penalty weights for [`nearest_enp_asf_search`].
///
/// Each outer round minimizes `dist² + Σ λ_i c_i + μ Σ c_i²` over the
/// constraint values `c_i`, then updates `λ_i += 2μ c_i` and multiplies `μ`
/// by `growth` (capped at `mu_max`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PenaltySchedule {
    pub mu0: f64,
    pub growth: f64,
    pub mu_max: f64,
    pub max_rounds: usize,
    /// Iteration cap of a single inner minimization.
    pub inner_iters: usize,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self { mu0: 10.0, growth: 10.0, mu_max: 1e6, max_rounds: 25, inner_iters: 2000 }
    }
}

#[derive(Clone, Debug)]
pub struct AsfSearchResult {
    pub asf: Asf,
    pub dist_sq: f64,
    pub certified: bool,
    /// [`enp_residual`] of `asf`, recomputed from the returned pair.
    pub residual: f64,
    pub rounds: usize,
    pub iterations: usize,
}

/// Constraint values of the equal-norm Parseval conditions at `(f, τ)`:
/// entries of `S − I`, then `‖τ_j‖²_p − d/n`, `‖f_j‖²_q − d/n`, `f_j(τ_j) − d/n`.
fn constraints(space: &PNormSpace, functionals: &[&[f64]], vectors: &[&[f64]], out: &mut Vec<f64>) {
    let d = space.dim;
    let c = d as f64 / vectors.len() as f64;
    out.clear();
    for r in 0..d {
        for k in 0..d {
            let s: f64 = vectors.iter().zip(functionals).map(|(t, f)| t[r] * f[k]).sum();
            out.push(s - if r == k { 1.0 } else { 0.0 });
        }
    }
    out.extend(vectors.iter().map(|t| space.norm(t).powi(2) - c));
    out.extend(functionals.iter().map(|f| dual_norm(space, f).powi(2) - c));
    out.extend(vectors.iter().zip(functionals).map(|(t, f)| dot(f, t) - c));
}

/// Largest absolute violation of the equal-norm Parseval conditions.
pub fn enp_residual(asf: &Asf) -> f64 {
    let fs: Vec<&[f64]> = asf.functionals().iter().map(Vec::as_slice).collect();
    let ts: Vec<&[f64]> = asf.vectors().iter().map(Vec::as_slice).collect();
    let mut c = Vec::new();
    constraints(asf.space(), &fs, &ts, &mut c);
    c.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn split(x: &[f64], n: usize, d: usize) -> (Vec<&[f64]>, Vec<&[f64]>) {
    let (t, f) = x.split_at(n * d);
    (f.chunks(d).collect(), t.chunks(d).collect())
}

fn assemble(space: PNormSpace, x: &[f64], n: usize) -> Result<Asf> {
    let (fs, ts) = split(x, n, space.dim);
    Asf::new(space, fs.iter().map(|v| v.to_vec()).collect(), ts.iter().map(|v| v.to_vec()).collect())
}

/// Local search for an equal-norm Parseval ASF near `asf` over a smooth `ℓᵖ`.
///
/// `max_iters` caps the inner descent iterations summed over all rounds.
pub fn nearest_enp_asf_search(
    asf: &Asf,
    certify_tol: f64,
    max_iters: usize,
    schedule: PenaltySchedule,
) -> Result<AsfSearchResult> {
    let space = *asf.space();
    if !space.p.is_smooth() {
        return Err(FrameLabError::UnsupportedExponent(format!("local search needs 1 < p < inf, got p = {}", space.p)));
    }
    let (n, d) = (asf.len(), asf.dim());
    if n % d != 0 {
        return Err(FrameLabError::Infeasible(format!(
            "no equal-norm Parseval ASF search for d = {d} not dividing n = {n}"
        )));
    }
    if !(certify_tol > 0.0) || !(schedule.mu0 > 0.0) || !(schedule.growth >= 1.0) {
        return Err(FrameLabError::InvalidArgument("certify tolerance and penalty weights must be positive".into()));
    }

    let start = enp_residual(asf);
    if start <= certify_tol {
        return Ok(AsfSearchResult {
            asf: asf.clone(),
            dist_sq: 0.0,
            certified: true,
            residual: start,
            rounds: 0,
            iterations: 0,
        });
    }

    let origin: Vec<f64> = asf.vectors().iter().chain(asf.functionals()).flatten().copied().collect();
    let q: Exponent = space.q();
    let dist_sq = |x: &[f64]| -> f64 {
        let (t, f) = x.split_at(n * d);
        let (t0, f0) = origin.split_at(n * d);
        let mut total = 0.0;
        let mut diff = vec![0.0; d];
        for j in 0..n {
            let span = j * d..(j + 1) * d;
            diff.iter_mut().zip(&t[span.clone()]).zip(&t0[span.clone()]).for_each(|((o, a), b)| *o = a - b);
            let vt = space.p.norm(&diff);
            diff.iter_mut().zip(&f[span.clone()]).zip(&f0[span]).for_each(|((o, a), b)| *o = a - b);
            let vf = q.norm(&diff);
            total += 0.5 * (vt * vt + vf * vf);
        }
        total
    };

    let mut lambda: Vec<f64> = Vec::new();
    let mut mu = schedule.mu0;
    let mut x = origin.clone();
    let mut iterations = 0;
    let mut rounds = 0;
    let mut best_certified: Option<(Vec<f64>, f64)> = None;
    let mut best_any: (Vec<f64>, f64) = (origin.clone(), start);
    let mut scratch = Vec::new();
    let mut stalled_rounds = 0;

    while rounds < schedule.max_rounds && iterations < max_iters {
        let weight = mu;
        let multipliers = lambda.clone();
        let objective = |y: &[f64]| -> f64 {
            let (fs, ts) = split(y, n, d);
            let mut c = Vec::new();
            constraints(&space, &fs, &ts, &mut c);
            let penalty: f64 = c
                .iter()
                .enumerate()
                .map(|(i, ci)| multipliers.get(i).copied().unwrap_or(0.0) * ci + weight * ci * ci)
                .sum();
            dist_sq(y) + penalty
        };
        let budget = schedule.inner_iters.min(max_iters - iterations);
        let out = minimize::bfgs(objective, x, Options { max_iters: budget, ..Options::default() });
        iterations += out.iterations.max(1);
        rounds += 1;
        x = out.x;

        let (fs, ts) = split(&x, n, d);
        constraints(&space, &fs, &ts, &mut scratch);
        if lambda.is_empty() {
            lambda = vec![0.0; scratch.len()];
        }
        for (l, c) in lambda.iter_mut().zip(&scratch) {
            *l += 2.0 * mu * c;
        }
        let residual = scratch.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let dist = dist_sq(&x);
        if residual <= certify_tol {
            if best_certified.as_ref().is_none_or(|b| dist < b.1) {
                best_certified = Some((x.clone(), dist));
            }
            break;
        }
        if residual < 0.5 * best_any.1 {
            stalled_rounds = 0;
        } else {
            stalled_rounds += 1;
        }
        if residual < best_any.1 {
            best_any = (x.clone(), residual);
        }
        if stalled_rounds >= STALL_ROUNDS {
            break;
        }
        mu = (mu * schedule.growth).min(schedule.mu_max);
    }

    // The penalty stage stalls where a squared norm is not twice
    // differentiable (zero coordinates for p != 2); Newton corrections on
    // the constraints finish the job without moving far.
    let chosen = match best_certified {
        Some(b) => b.0,
        None => {
            let c = |y: &[f64]| {
                let (fs, ts) = split(y, n, d);
                let mut out = Vec::new();
                constraints(&space, &fs, &ts, &mut out);
                out
            };
            let target = 1e-2 * certify_tol;
            let (polished, steps) = minimize::newton_feasibility(c, best_any.0, NEWTON_STEPS, |y| {
                c(y).iter().fold(0.0_f64, |acc, v| acc.max(v.abs())) <= target
            });
            iterations += steps;
            polished
        }
    };
    let result = assemble(space, &chosen, n)?;
    let residual = enp_residual(&result);
    let dist_sq = asf_dist_sq(asf, &result)?;
    Ok(AsfSearchResult { certified: residual <= certify_tol, asf: result, dist_sq, residual, rounds, iterations })
}
