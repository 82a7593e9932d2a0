use std::f64::consts::PI;

use super::{analyze_frame, closest_parseval, Frame};
use crate::error::{FrameLabError, Result};
use crate::sampling;
use crate::spectral;

/// Frame families produced by [`generate`].
#[derive(Clone, Debug)]
pub enum FrameFamily {
    /// i.i.d. standard normal entries.
    Random { dim: usize, n: usize },
    /// A random frame mapped to its closest Parseval frame.
    RandomParseval { dim: usize, n: usize },
    /// The real harmonic equal-norm Parseval frame.
    Harmonic { dim: usize, n: usize },
    /// Every vector displaced by a random vector of norm at most `delta`.
    Perturb { base: Frame, delta: f64 },
    /// A Parseval frame multiplied by `√(1 + eps)`.
    Scaled { base: Frame, eps: f64 },
}

/// Deterministic in `(family, seed)`.
pub fn generate(family: &FrameFamily, seed: u64) -> Result<Frame> {
    let mut rng = sampling::stream(seed);
    match family {
        FrameFamily::Random { dim, n } => {
            let vectors = (0..*n).map(|_| sampling::gaussian_vec(&mut rng, *dim)).collect();
            Frame::new(*dim, vectors)
        }
        FrameFamily::RandomParseval { dim, n } => {
            check_redundant(*dim, *n)?;
            let vectors = (0..*n).map(|_| sampling::gaussian_vec(&mut rng, *dim)).collect();
            Ok(closest_parseval(&Frame::new(*dim, vectors)?)?.0)
        }
        FrameFamily::Harmonic { dim, n } => harmonic(*dim, *n),
        FrameFamily::Perturb { base, delta } => {
            if !(*delta >= 0.0 && delta.is_finite()) {
                return Err(FrameLabError::InvalidArgument(format!("perturbation size {delta}")));
            }
            let vectors = base
                .vectors()
                .iter()
                .map(|v| {
                    let u = sampling::in_unit_ball(&mut rng, v.len(), spectral::norm);
                    v.iter().zip(u).map(|(x, e)| x + delta * e).collect()
                })
                .collect();
            Frame::new(base.dim(), vectors)
        }
        FrameFamily::Scaled { base, eps } => {
            if !(*eps >= 0.0 && eps.is_finite()) {
                return Err(FrameLabError::InvalidArgument(format!("scale parameter {eps}")));
            }
            let base_eps = analyze_frame(base).eps_parseval.unwrap_or(f64::INFINITY);
            if base_eps > 1e-8 {
                return Err(FrameLabError::NotParseval { eps: base_eps, tol: 1e-8 });
            }
            Ok(base.scaled((1.0 + eps).sqrt()))
        }
    }
}

fn check_redundant(dim: usize, n: usize) -> Result<()> {
    if dim == 0 || n < dim {
        return Err(FrameLabError::UnsupportedShape(format!(
            "a Parseval frame needs n >= d >= 1 (d = {dim}, n = {n})"
        )));
    }
    Ok(())
}

/// Real harmonic frame: vector `j` (1-based) has entries `√(2/n)·cos(2πkj/n)`,
/// `√(2/n)·sin(2πkj/n)` for `k = 1..⌊d/2⌋`, led by `1/√n` when `d` is odd.
///
/// The rows of the analysis matrix are orthonormal, so the result is Parseval
/// with every squared norm `d/n`. For `n = d` the standard basis is returned.
pub fn harmonic(dim: usize, n: usize) -> Result<Frame> {
    check_redundant(dim, n)?;
    if n == dim {
        return Ok(Frame::standard_basis(dim));
    }
    let nf = n as f64;
    let amp = (2.0 / nf).sqrt();
    let vectors = (1..=n)
        .map(|j| {
            let mut v = Vec::with_capacity(dim);
            if dim % 2 == 1 {
                v.push(1.0 / nf.sqrt());
            }
            for k in 1..=dim / 2 {
                let angle = 2.0 * PI * ((k * j) % n) as f64 / nf;
                v.push(amp * angle.cos());
                v.push(amp * angle.sin());
            }
            v
        })
        .collect();
    Frame::new(dim, vectors)
}
