//! Finite frames for real d-dimensional Hilbert space.
//!
//! A [`Frame`] is any finite family of d-vectors. Whether it actually spans
//! (is a frame) is certified by [`analyze_frame`], never assumed.

mod generate;
mod nearest;

pub use generate::{generate, harmonic, FrameFamily};
pub use nearest::{closest_equal_norm, closest_parseval, naimark_complement};

use serde::Serialize;

use crate::error::{FrameLabError, Result};
use crate::spectral::{self, dot, Matrix};

/// A family of `n` vectors in `ℝ^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameLabError::UnsupportedShape("dimension must be at least 1".into()));
        }
        if vectors.is_empty() {
            return Err(FrameLabError::UnsupportedShape("a frame needs at least one vector".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(FrameLabError::ShapeMismatch(format!("vector {j} has length {}, expected {dim}", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(FrameLabError::NonFinite("frame vector"));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// The standard basis of `ℝ^dim`.
    pub fn standard_basis(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self { dim, vectors }
    }

    /// The unit-norm Mercedes-Benz frame in `ℝ²`.
    pub fn mercedes_benz() -> Self {
        let h = 3f64.sqrt() / 2.0;
        Self { dim: 2, vectors: vec![vec![0.0, 1.0], vec![-h, -0.5], vec![h, -0.5]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j]
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| dot(v, v)).collect()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let vectors = self.vectors.iter().map(|v| v.iter().map(|x| alpha * x).collect()).collect();
        Self { dim: self.dim, vectors }
    }

    /// Rescales every vector to unit norm; fails on a zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let mut vectors = Vec::with_capacity(self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            let r = spectral::norm(v);
            if r == 0.0 {
                return Err(FrameLabError::ZeroVector(j));
            }
            vectors.push(v.iter().map(|x| x / r).collect());
        }
        Ok(Self { dim: self.dim, vectors })
    }

    /// The analysis operator as an `n × d` matrix whose rows are the vectors.
    pub fn analysis_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.vectors).expect("frame vectors are validated")
    }

    /// Gram matrix `θ θᵀ` (`n × n`).
    pub fn gram(&self) -> Matrix {
        let n = self.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(&self.vectors[i], &self.vectors[j]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Applies `m` to every vector.
    pub fn transformed(&self, m: &Matrix) -> Result<Self> {
        let vectors = self.vectors.iter().map(|v| m.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        Frame::new(m.rows(), vectors)
    }
}

/// `x ↦ (⟨x, τ_j⟩)_j`.
pub fn analysis(frame: &Frame, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != frame.dim() {
        return Err(FrameLabError::ShapeMismatch(format!(
            "vector of length {} for a frame in dimension {}",
            x.len(),
            frame.dim()
        )));
    }
    Ok(frame.vectors().iter().map(|t| dot(x, t)).collect())
}

/// `c ↦ Σ_j c_j τ_j`.
pub fn synthesis(frame: &Frame, c: &[f64]) -> Result<Vec<f64>> {
    if c.len() != frame.len() {
        return Err(FrameLabError::ShapeMismatch(format!(
            "{} coefficients for {} frame vectors",
            c.len(),
            frame.len()
        )));
    }
    let mut out = vec![0.0; frame.dim()];
    for (cj, t) in c.iter().zip(frame.vectors()) {
        for (o, x) in out.iter_mut().zip(t) {
            *o += cj * x;
        }
    }
    Ok(out)
}

/// `S = Σ_j τ_j τ_jᵀ`, exactly symmetric.
pub fn frame_operator(frame: &Frame) -> Matrix {
    let d = frame.dim();
    let mut s = Matrix::zeros(d, d);
    for t in frame.vectors() {
        for i in 0..d {
            for k in 0..=i {
                s[(i, k)] += t[i] * t[k];
            }
        }
    }
    for i in 0..d {
        for k in 0..i {
            s[(k, i)] = s[(i, k)];
        }
    }
    s
}

/// Certified nearness quantities of a frame.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub dim: usize,
    pub n: usize,
    /// `(λ_min, λ_max)` of the frame operator.
    pub frame_bounds: (f64, f64),
    pub is_frame: bool,
    pub eps_parseval: Option<f64>,
    pub eps_equal_norm: Option<f64>,
    /// `‖S − (tr S/d) I‖_HS`
    pub tightness_defect_hs: f64,
    /// `‖S − (n/d) I‖_HS`
    pub unit_defect_hs: f64,
    /// `tr S²`
    pub frame_potential: f64,
    pub norms_sq: Vec<f64>,
}

impl FrameReport {
    /// The larger of the two nearness parameters, when both exist.
    pub fn eps_both(&self) -> Option<f64> {
        Some(self.eps_parseval?.max(self.eps_equal_norm?))
    }
}

/// `max(1 − a, b − 1)` when below one.
pub(crate) fn eps_from_bounds(a: f64, b: f64) -> Option<f64> {
    let eps = (1.0 - a).max(b - 1.0);
    (eps < 1.0).then_some(eps)
}

/// `max_j |(n/d)·v_j − 1|` when below one.
pub(crate) fn eps_from_norms(norms_sq: &[f64], dim: usize) -> Option<f64> {
    let ratio = norms_sq.len() as f64 / dim as f64;
    let eps = norms_sq.iter().map(|v| (ratio * v - 1.0).abs()).fold(0.0, f64::max);
    (eps < 1.0).then_some(eps)
}

pub(crate) fn shifted_hs(s: &Matrix, shift: f64) -> f64 {
    (s - &Matrix::identity(s.rows()).scale(shift)).hs_norm()
}

pub fn analyze_frame(frame: &Frame) -> FrameReport {
    let d = frame.dim();
    let n = frame.len();
    let s = frame_operator(frame);
    let eig = spectral::sym_eig(&s, spectral::DEFAULT_SYM_TOL).expect("frame operator is symmetric by construction");
    let a = eig.min_eigenvalue();
    let b = eig.max_eigenvalue();
    let norms_sq = frame.norms_sq();
    FrameReport {
        dim: d,
        n,
        frame_bounds: (a, b),
        is_frame: a > 0.0,
        eps_parseval: eps_from_bounds(a, b),
        eps_equal_norm: eps_from_norms(&norms_sq, d),
        tightness_defect_hs: shifted_hs(&s, s.trace() / d as f64),
        unit_defect_hs: shifted_hs(&s, n as f64 / d as f64),
        frame_potential: s.as_slice().iter().map(|x| x * x).sum(),
        norms_sq,
    }
}

/// `(Σ_j ‖τ_j − ω_j‖²)^{1/2}`.
pub fn frame_dist(a: &Frame, b: &Frame) -> Result<f64> {
    Ok(frame_dist_sq(a, b)?.sqrt())
}

pub fn frame_dist_sq(a: &Frame, b: &Frame) -> Result<f64> {
    if a.dim() != b.dim() || a.len() != b.len() {
        return Err(FrameLabError::ShapeMismatch(format!(
            "frames of shape {}x{} and {}x{}",
            a.len(),
            a.dim(),
            b.len(),
            b.dim()
        )));
    }
    Ok(a.vectors()
        .iter()
        .zip(b.vectors())
        .map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
        .sum())
}
