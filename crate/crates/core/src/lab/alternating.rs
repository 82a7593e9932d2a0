use nalgebra::{DMatrix, DVector, SVD};
use serde::Serialize;

use super::minimize::{self, SVD_MAX_ITERS};
use crate::error::{FrameLabError, Result};
use crate::hilbert::{analyze_frame, closest_equal_norm, closest_parseval, frame_dist_sq, Frame};

const MAX_REFINEMENTS: usize = 200;
/// Refinement stops once the tangential part of `input − y` is this small.
const STATIONARITY_TOL: f64 = 1e-10;

/// How the alternating solver settles on its output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Alternate the two closest-point maps until both certificates pass.
    Plain,
    /// Plain alternation, then repeatedly step along the tangential part of
    /// `input − y` and re-project, until `y` is a critical point of the
    /// distance to the input on the equal-norm Parseval set.
    #[default]
    Refined,
}

#[derive(Clone, Debug)]
pub struct AlternatingResult {
    pub frame: Frame,
    pub dist_sq: f64,
    /// Alternation rounds, summed over the initial projection and every re-projection.
    pub rounds: usize,
    pub refinements: usize,
}

fn residual(frame: &Frame) -> f64 {
    let r = analyze_frame(frame);
    match (r.eps_parseval, r.eps_equal_norm) {
        (Some(a), Some(b)) => a.max(b),
        _ => f64::INFINITY,
    }
}

/// Alternates until `x` certifies at `tol`; `rounds` counts across calls.
///
/// With `polish`, a round that fails to halve the residual hands over to
/// Newton corrections on the constraints (alternation slows to a crawl near
/// points where the two sets meet tangentially).
fn project_enp(x: &Frame, target: f64, tol: f64, max_rounds: usize, rounds: &mut usize, polish: bool) -> Result<Frame> {
    let (n, d) = (x.len(), x.dim());
    let mut y = x.clone();
    let mut previous = f64::INFINITY;
    let mut newton_tried = false;
    loop {
        let res = residual(&y);
        if res <= tol {
            return Ok(y);
        }
        if *rounds >= max_rounds {
            return Err(FrameLabError::NoConvergence { rounds: *rounds, residual: res });
        }
        if polish && !newton_tried && res > 0.5 * previous {
            newton_tried = true;
            let flat: Vec<f64> = y.vectors().iter().flatten().copied().collect();
            let certified = |v: &[f64]| {
                Frame::new(d, v.chunks(d).map(<[f64]>::to_vec).collect()).is_ok_and(|f| residual(&f) <= tol)
            };
            let (v, steps) =
                minimize::newton_feasibility(|v| enp_constraints(v, n, d), flat, max_rounds - *rounds, certified);
            *rounds += steps;
            y = Frame::new(d, v.chunks(d).map(<[f64]>::to_vec).collect())?;
            continue;
        }
        previous = res;
        let (parseval, _) = closest_parseval(&y)?;
        y = closest_equal_norm(&parseval, Some(target))?.0;
        *rounds += 1;
    }
}

/// `θᵀθ − I` (upper triangle) and `‖y_j‖² − d/n` for a flattened frame.
fn enp_constraints(v: &[f64], n: usize, d: usize) -> Vec<f64> {
    let c = d as f64 / n as f64;
    let rows: Vec<&[f64]> = v.chunks(d).collect();
    let mut out = Vec::with_capacity(d * (d + 1) / 2 + n);
    for a in 0..d {
        for b in a..d {
            let s: f64 = rows.iter().map(|r| r[a] * r[b]).sum();
            out.push(s - if a == b { 1.0 } else { 0.0 });
        }
    }
    out.extend(rows.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>() - c));
    out
}

/// Part of `v` orthogonal to the normal space at an equal-norm Parseval `y`.
///
/// The normal space is spanned by `θA` (`A` symmetric) and by `e_j y_jᵀ`;
/// the normal component is found by least squares.
fn tangential(y: &Frame, v: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, d) = (y.len(), y.dim());
    let idx = |j: usize, k: usize| j * d + k;
    let cols = d * (d + 1) / 2 + n;
    let mut m = DMatrix::<f64>::zeros(n * d, cols);
    let mut col = 0;
    for a in 0..d {
        for b in a..d {
            for (j, yj) in y.vectors().iter().enumerate() {
                m[(idx(j, b), col)] += yj[a];
                if a != b {
                    m[(idx(j, a), col)] += yj[b];
                }
            }
            col += 1;
        }
    }
    for (j, yj) in y.vectors().iter().enumerate() {
        for k in 0..d {
            m[(idx(j, k), col)] = yj[k];
        }
        col += 1;
    }
    let rhs = DVector::from_iterator(n * d, v.iter().flatten().copied());
    let normal = SVD::try_new(m.clone(), true, true, f64::EPSILON, SVD_MAX_ITERS)
        .and_then(|svd| {
            let tol = 1e-12 * svd.singular_values.max().max(1.0);
            svd.solve(&rhs, tol).ok()
        })
        .map_or_else(|| DVector::zeros(n * d), |coef| &m * coef);
    (0..n).map(|j| (0..d).map(|k| rhs[idx(j, k)] - normal[idx(j, k)]).collect()).collect()
}

/// Equal-norm Parseval frame near `frame` via the default [`Scheme`].
pub fn nearest_enp_alternating(frame: &Frame, certify_tol: f64, max_rounds: usize) -> Result<AlternatingResult> {
    nearest_enp_with_scheme(frame, certify_tol, max_rounds, Scheme::default())
}

pub fn nearest_enp_with_scheme(
    frame: &Frame,
    certify_tol: f64,
    max_rounds: usize,
    scheme: Scheme,
) -> Result<AlternatingResult> {
    if !(certify_tol > 0.0) {
        return Err(FrameLabError::InvalidArgument(format!("certify tolerance {certify_tol} must be positive")));
    }
    let (n, d) = (frame.len(), frame.dim());
    if d > n {
        return Err(FrameLabError::UnsupportedShape(format!("{n} vectors cannot span dimension {d}")));
    }
    let report = analyze_frame(frame);
    if !report.is_frame {
        // Surfaces the singular-operator error with its eigenvalue.
        closest_parseval(frame)?;
    }
    let target = (d as f64 / n as f64).sqrt();
    let mut rounds = 0;
    let polish = scheme == Scheme::Refined;
    let mut y = project_enp(frame, target, certify_tol, max_rounds, &mut rounds, polish)?;
    let mut dist_sq = frame_dist_sq(frame, &y)?;
    let mut refinements = 0;

    if scheme == Scheme::Refined && rounds > 0 {
        while refinements < MAX_REFINEMENTS {
            let gap: Vec<Vec<f64>> = frame
                .vectors()
                .iter()
                .zip(y.vectors())
                .map(|(x, v)| x.iter().zip(v).map(|(a, b)| a - b).collect())
                .collect();
            let step = tangential(&y, &gap);
            let size = step.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            if size <= STATIONARITY_TOL {
                break;
            }
            let moved: Vec<Vec<f64>> =
                y.vectors().iter().zip(&step).map(|(v, s)| v.iter().zip(s).map(|(a, b)| a + b).collect()).collect();
            let candidate =
                project_enp(&Frame::new(d, moved)?, target, certify_tol, max_rounds + rounds, &mut rounds, polish)?;
            let candidate_dist = frame_dist_sq(frame, &candidate)?;
            refinements += 1;
            if candidate_dist >= dist_sq {
                break;
            }
            y = candidate;
            dist_sq = candidate_dist;
        }
    }
    Ok(AlternatingResult { frame: y, dist_sq, rounds, refinements })
}
