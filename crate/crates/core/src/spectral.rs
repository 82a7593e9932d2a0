//! Dense small-matrix kernel: a row-major [`Matrix`], a cyclic Jacobi
//! eigensolver for symmetric input, PSD inverse square roots, and the general
//! (possibly complex) spectrum of a real square matrix.
//!
//! Everything here is sized for d up to a few dozen. Nothing is cached and all
//! values are immutable once built.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{FrameLabError, Result};

/// Relative symmetry tolerance accepted by [`sym_eig`] by default.
pub const DEFAULT_SYM_TOL: f64 = 1e-10;
/// Smallest eigenvalue [`inv_sqrt_psd`] accepts by default.
pub const DEFAULT_PSD_FLOOR: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense real matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FrameLabError::ShapeMismatch(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(FrameLabError::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(FrameLabError::ShapeMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[f64], v: &[f64]) -> Self {
        let data = u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect();
        Self { rows: u.len(), cols: v.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(FrameLabError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(FrameLabError::ShapeMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| alpha * x).collect() }
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Sum of the diagonal. Panics on non-square input.
    pub fn trace(&self) -> f64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// `‖A − Aᵀ‖_HS`; infinite for non-square matrices.
    pub fn symmetry_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)];
                s += d * d;
            }
        }
        s.sqrt()
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        let mut s = self.clone();
        for i in 0..self.rows {
            for j in 0..i {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        s
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.check_same_shape(rhs);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.check_same_shape(rhs);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on incompatible shapes; use [`Matrix::matmul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{x:>12.6e}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigen-decomposition of a symmetric matrix with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// `V·diag(f(λ))·Vᵀ`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(d, d);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            for i in 0..d {
                let vik = w * v[(i, k)];
                if vik == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += vik * v[(j, k)];
                }
            }
        }
        out.symmetrized()
    }

    pub fn reconstruct(&self) -> Matrix {
        self.map_eigenvalues(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// `tol` bounds the accepted asymmetry relative to `max(1, ‖A‖_HS)`; the
/// input is symmetrized before rotating.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(FrameLabError::AsymmetricInput { defect: f64::INFINITY });
    }
    let defect = a.symmetry_defect();
    if defect > tol * a.hs_norm().max(1.0) {
        return Err(FrameLabError::AsymmetricInput { defect });
    }
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    let scale = m.hs_norm();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 =
            (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        if off <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// `A^{-1/2}` for a symmetric positive definite `A`.
pub fn inv_sqrt_psd(a: &Matrix, floor: f64) -> Result<Matrix> {
    let eig = sym_eig(a, DEFAULT_SYM_TOL)?;
    let min = eig.min_eigenvalue();
    if !(min > floor) {
        return Err(FrameLabError::SingularOperator { min_eigenvalue: min, floor });
    }
    Ok(eig.map_eigenvalues(|x| 1.0 / x.sqrt()))
}

/// Eigenvalues of a general real square matrix as `(re, im)` pairs.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ComplexSpectrum {
    pub values: Vec<(f64, f64)>,
}

impl ComplexSpectrum {
    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|v| v.1.abs()).fold(0.0, f64::max)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.0).collect()
    }

    pub fn sum(&self) -> (f64, f64) {
        self.values.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1))
    }
}

/// Spectrum via the real Schur form; sorted by real then imaginary part.
pub fn general_spectrum(a: &Matrix) -> Result<ComplexSpectrum> {
    if !a.is_square() {
        return Err(FrameLabError::ShapeMismatch(format!("spectrum of a {}x{} matrix", a.rows(), a.cols())));
    }
    if a.rows() == 0 {
        return Ok(ComplexSpectrum { values: Vec::new() });
    }
    if a.symmetry_defect() == 0.0 {
        let mut values: Vec<(f64, f64)> = sym_eig(a, 0.0)?.eigenvalues.into_iter().map(|v| (v, 0.0)).collect();
        values.sort_by(|x, y| x.0.total_cmp(&y.0));
        return Ok(ComplexSpectrum { values });
    }
    let eig = to_faer(a).eigenvalues().map_err(|_| FrameLabError::NoConvergence { rounds: 0, residual: f64::NAN })?;
    let mut values: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
    values.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(ComplexSpectrum { values })
}

fn to_faer(a: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let mut s = match to_faer(a).singular_values() {
        Ok(s) => s,
        Err(_) => {
            let gram = &a.transpose() * a;
            sym_eig(&gram.symmetrized(), DEFAULT_SYM_TOL)
                .map(|e| e.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect())
                .unwrap_or_default()
        }
    };
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MatrixFunctionals {
    pub hs_norm: f64,
    /// Absent for non-square input.
    pub trace: Option<f64>,
    /// Largest |eigenvalue|, present only for symmetric input.
    pub op_norm_sym: Option<f64>,
}

pub fn matrix_functionals(a: &Matrix) -> MatrixFunctionals {
    let hs_norm = a.hs_norm();
    let trace = a.is_square().then(|| a.trace());
    let op_norm_sym = sym_eig(a, DEFAULT_SYM_TOL)
        .ok()
        .map(|e| e.min_eigenvalue().abs().max(e.max_eigenvalue().abs()))
        .filter(|x| x.is_finite());
    MatrixFunctionals { hs_norm, trace, op_norm_sym }
}
