use super::{analyze_frame, frame_dist_sq, frame_operator, Frame};
use crate::error::{FrameLabError, Result};
use crate::spectral::{self, Matrix};

/// Closest Parseval frame `{S^{-1/2} τ_j}` and its squared distance to the input.
pub fn closest_parseval(frame: &Frame) -> Result<(Frame, f64)> {
    let s = frame_operator(frame);
    let root = spectral::inv_sqrt_psd(&s, spectral::DEFAULT_PSD_FLOOR)?;
    let out = frame.transformed(&root)?;
    let dist_sq = frame_dist_sq(frame, &out)?;
    Ok((out, dist_sq))
}

/// Closest equal-norm frame: every vector rescaled to a common norm `c`.
///
/// `c` is `target` when given, otherwise the mean of the input norms.
pub fn closest_equal_norm(frame: &Frame, target: Option<f64>) -> Result<(Frame, f64)> {
    let norms: Vec<f64> = frame.vectors().iter().map(|v| spectral::norm(v)).collect();
    if let Some(j) = norms.iter().position(|&r| r == 0.0) {
        return Err(FrameLabError::ZeroVector(j));
    }
    let c = match target {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(c) => return Err(FrameLabError::InvalidArgument(format!("target norm {c} must be positive"))),
        None => norms.iter().sum::<f64>() / norms.len() as f64,
    };
    let vectors = frame.vectors().iter().zip(&norms).map(|(v, r)| v.iter().map(|x| c * x / r).collect()).collect();
    let dist_sq = norms.iter().map(|r| (r - c) * (r - c)).sum();
    Ok((Frame::new(frame.dim(), vectors)?, dist_sq))
}

/// Naimark complement of a Parseval frame with `n > d`.
///
/// The analysis matrix is first made an exact isometry with `S^{-1/2}`; the
/// complement vectors are the rows of an orthonormal basis of the orthogonal
/// complement of its range, read off the unit eigenspace of `I − θθᵀ`.
pub fn naimark_complement(frame: &Frame, tol: f64) -> Result<Frame> {
    let report = analyze_frame(frame);
    let eps = report.eps_parseval.unwrap_or(f64::INFINITY);
    if !(eps <= tol) {
        return Err(FrameLabError::NotParseval { eps, tol });
    }
    let n = frame.len();
    let d = frame.dim();
    if n == d {
        return Err(FrameLabError::NoComplement);
    }

    let (isometry, _) = closest_parseval(frame)?;
    let complement_projection = &Matrix::identity(n) - &isometry.gram();
    let eig = spectral::sym_eig(&complement_projection, spectral::DEFAULT_SYM_TOL)?;
    let k = n - d;
    let vectors = (0..n).map(|j| (d..n).map(|col| eig.eigenvectors[(j, col)]).collect()).collect();
    Frame::new(k, vectors)
}
