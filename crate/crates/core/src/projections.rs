//! Projection-problem quantities: certified idempotents, balance over
//! orthonormal and Auerbach systems, the projection-pair distance and the
//! chordal distance `(m − tr PQ)^{1/2}`.

use serde::Serialize;

use crate::banach::{dual_norm, PNormSpace};
use crate::error::{FrameLabError, Result};
use crate::spectral::{self, dot, Matrix};

/// Eigenvalues of a projection must lie this close to 0 or 1.
pub const RANK_TOL: f64 = 1e-8;
/// Tolerance for the Auerbach and orthonormality conditions.
pub const SYSTEM_TOL: f64 = 1e-10;

/// A square matrix certified to be idempotent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionOp {
    dim: usize,
    matrix: Matrix,
    idempotency_defect: f64,
    self_adjoint_defect: f64,
    rank: usize,
    orthogonal: bool,
}

impl ProjectionOp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `‖P² − P‖_HS`
    pub fn idempotency_defect(&self) -> f64 {
        self.idempotency_defect
    }

    /// `‖P − Pᵀ‖_HS`
    pub fn self_adjoint_defect(&self) -> f64 {
        self.self_adjoint_defect
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Self-adjoint within the certification tolerance.
    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }
}

pub fn certify_projection(m: &Matrix, orthogonal_required: bool, proj_tol: f64) -> Result<ProjectionOp> {
    if !m.is_square() {
        return Err(FrameLabError::ShapeMismatch(format!("{}x{} projection", m.rows(), m.cols())));
    }
    let idempotency_defect = (&(m * m) - m).hs_norm();
    if idempotency_defect > proj_tol {
        return Err(FrameLabError::NotIdempotent(format!("‖P² − P‖_HS = {idempotency_defect:e}")));
    }
    let self_adjoint_defect = m.symmetry_defect();
    let orthogonal = self_adjoint_defect <= proj_tol;
    if orthogonal_required && !orthogonal {
        return Err(FrameLabError::NotSelfAdjoint { defect: self_adjoint_defect });
    }

    let spectrum = spectral::general_spectrum(m)?;
    let mut rank = 0;
    for &(re, im) in &spectrum.values {
        if im.abs() > RANK_TOL {
            return Err(FrameLabError::NotIdempotent(format!("eigenvalue {re}{im:+}i")));
        }
        if (re - 1.0).abs() <= RANK_TOL {
            rank += 1;
        } else if re.abs() > RANK_TOL {
            return Err(FrameLabError::NotIdempotent(format!("eigenvalue {re} is neither 0 nor 1")));
        }
    }
    let sv_rank = spectral::singular_values(m).iter().filter(|&&s| s > RANK_TOL).count();
    if sv_rank != rank {
        return Err(FrameLabError::NotIdempotent(format!(
            "eigenvalue rank {rank} disagrees with singular-value rank {sv_rank}"
        )));
    }
    Ok(ProjectionOp { dim: m.rows(), matrix: m.clone(), idempotency_defect, self_adjoint_defect, rank, orthogonal })
}

/// Normalized basis `u_k` with normalized biorthogonal functionals `ζ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuerbachSystem {
    space: PNormSpace,
    basis_vectors: Vec<Vec<f64>>,
    dual_functionals: Vec<Vec<f64>>,
}

impl AuerbachSystem {
    pub fn new(space: PNormSpace, basis_vectors: Vec<Vec<f64>>, dual_functionals: Vec<Vec<f64>>) -> Result<Self> {
        let d = space.dim;
        if basis_vectors.len() != d || dual_functionals.len() != d {
            return Err(FrameLabError::ShapeMismatch(format!(
                "an Auerbach system in dimension {d} needs {d} vectors and {d} functionals"
            )));
        }
        for v in basis_vectors.iter().chain(&dual_functionals) {
            if v.len() != d {
                return Err(FrameLabError::ShapeMismatch(format!("entry of length {} in dimension {d}", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(FrameLabError::NonFinite("Auerbach system"));
            }
        }
        for k in 0..d {
            let nu = space.norm(&basis_vectors[k]);
            let nz = dual_norm(&space, &dual_functionals[k]);
            if (nu - 1.0).abs() > SYSTEM_TOL || (nz - 1.0).abs() > SYSTEM_TOL {
                return Err(FrameLabError::InvalidArgument(format!(
                    "Auerbach element {k} has norms ({nu}, {nz}), expected 1"
                )));
            }
            for (j, zeta) in dual_functionals.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                let pairing = dot(zeta, &basis_vectors[k]);
                if (pairing - target).abs() > SYSTEM_TOL {
                    return Err(FrameLabError::InvalidArgument(format!("ζ_{j}(u_{k}) = {pairing}, expected {target}")));
                }
            }
        }
        Ok(Self { space, basis_vectors, dual_functionals })
    }

    /// Standard basis with coordinate functionals; Auerbach for every `p`.
    pub fn canonical(space: PNormSpace) -> Self {
        let basis: Vec<Vec<f64>> =
            (0..space.dim).map(|k| (0..space.dim).map(|i| if i == k { 1.0 } else { 0.0 }).collect()).collect();
        Self { space, basis_vectors: basis.clone(), dual_functionals: basis }
    }

    pub fn space(&self) -> &PNormSpace {
        &self.space
    }

    pub fn basis_vectors(&self) -> &[Vec<f64>] {
        &self.basis_vectors
    }

    pub fn dual_functionals(&self) -> &[Vec<f64>] {
        &self.dual_functionals
    }
}

fn check_dim(p: &ProjectionOp, dim: usize) -> Result<()> {
    if p.dim() != dim {
        return Err(FrameLabError::ShapeMismatch(format!("projection on dim {} vs system dim {dim}", p.dim())));
    }
    Ok(())
}

/// `max_k |(d/n)‖Pu_k‖² − 1|` when below one, for an orthogonal projection of
/// rank `n` and an orthonormal system `u_1..u_d`.
pub fn balance_epsilon_hilbert(p: &ProjectionOp, onb: &[Vec<f64>]) -> Result<Option<f64>> {
    if !p.is_orthogonal() {
        return Err(FrameLabError::NotSelfAdjoint { defect: p.self_adjoint_defect() });
    }
    if p.rank() == 0 {
        return Err(FrameLabError::RankZero);
    }
    let d = p.dim();
    if onb.len() != d || onb.iter().any(|u| u.len() != d) {
        return Err(FrameLabError::ShapeMismatch(format!("orthonormal system must hold {d} vectors of length {d}")));
    }
    for (i, u) in onb.iter().enumerate() {
        for (j, v) in onb.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot(u, v) - target).abs() > SYSTEM_TOL {
                return Err(FrameLabError::InvalidArgument("system is not orthonormal".into()));
            }
        }
    }
    let ratio = d as f64 / p.rank() as f64;
    let mut eps = 0.0f64;
    for u in onb {
        let pu = p.matrix().mul_vec(u)?;
        eps = eps.max((ratio * dot(&pu, &pu) - 1.0).abs());
    }
    Ok((eps < 1.0).then_some(eps))
}

/// Per-basis-element values of the Banach balance chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalanceEntry {
    pub k: usize,
    /// `‖P u_k‖²_p`
    pub vector_norm_sq: f64,
    /// `‖ζ_k ∘ P‖²_q`
    pub functional_norm_sq: f64,
    /// `|ζ_k(P u_k)|`
    pub pairing: f64,
    pub chain_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BanachBalance {
    pub epsilon: Option<f64>,
    pub chain_holds: bool,
    pub entries: Vec<BalanceEntry>,
}

pub fn balance_epsilon_banach(p: &ProjectionOp, sys: &AuerbachSystem, tol: f64) -> Result<BanachBalance> {
    check_dim(p, sys.space().dim)?;
    if p.rank() == 0 {
        return Err(FrameLabError::RankZero);
    }
    let pt = p.matrix().transpose();
    let space = sys.space();
    let mut entries = Vec::with_capacity(p.dim());
    for (k, (u, z)) in sys.basis_vectors().iter().zip(sys.dual_functionals()).enumerate() {
        let pu = p.matrix().mul_vec(u)?;
        let zp = pt.mul_vec(z)?;
        let a = space.norm(&pu).powi(2);
        let b = dual_norm(space, &zp).powi(2);
        let c = dot(z, &pu).abs();
        let spread = a.max(b).max(c) - a.min(b).min(c);
        entries.push(BalanceEntry {
            k,
            vector_norm_sq: a,
            functional_norm_sq: b,
            pairing: c,
            chain_holds: spread <= tol,
        });
    }
    let chain_holds = entries.iter().all(|e| e.chain_holds);
    let epsilon = if chain_holds {
        let ratio = p.dim() as f64 / p.rank() as f64;
        let eps = entries.iter().map(|e| (ratio * e.vector_norm_sq - 1.0).abs()).fold(0.0, f64::max);
        (eps < 1.0).then_some(eps)
    } else {
        None
    };
    Ok(BanachBalance { epsilon, chain_holds, entries })
}

/// `Σ_k ½(‖Pu_k − Qu_k‖²_p + ‖ζ_k P − ζ_k Q‖²_q)`.
pub fn projection_pair_distance(p: &ProjectionOp, q: &ProjectionOp, sys: &AuerbachSystem) -> Result<f64> {
    check_dim(p, sys.space().dim)?;
    check_dim(q, sys.space().dim)?;
    let diff = p.matrix() - q.matrix();
    let diff_t = diff.transpose();
    let space = sys.space();
    let mut total = 0.0;
    for (u, z) in sys.basis_vectors().iter().zip(sys.dual_functionals()) {
        let a = space.norm(&diff.mul_vec(u)?).powi(2);
        let b = dual_norm(space, &diff_t.mul_vec(z)?).powi(2);
        total += 0.5 * (a + b);
    }
    Ok(total)
}

/// `tr(PQ)` summed so that swapping the arguments gives a bitwise-equal result.
fn symmetric_trace_product(p: &Matrix, q: &Matrix) -> f64 {
    let d = p.rows();
    let mut s = 0.0;
    for i in 0..d {
        s += p[(i, i)] * q[(i, i)];
        for j in (i + 1)..d {
            s += p[(i, j)] * q[(j, i)] + p[(j, i)] * q[(i, j)];
        }
    }
    s
}

/// `(m − tr PQ)^{1/2}` for projections of common rank `m ≥ 1`.
///
/// Values of `m − tr PQ` in `[−tol, 0]` are clamped to zero; anything more
/// negative (possible for oblique pairs) is an error.
pub fn chordal_distance(p: &ProjectionOp, q: &ProjectionOp, tol: f64) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(FrameLabError::ShapeMismatch(format!("dimensions {} and {}", p.dim(), q.dim())));
    }
    if p.rank() != q.rank() {
        return Err(FrameLabError::RankMismatch(p.rank(), q.rank()));
    }
    if p.rank() == 0 {
        return Err(FrameLabError::RankZero);
    }
    // tr P² = m holds exactly only in exact arithmetic; the square root would
    // turn a 1e-16 roundoff into a 1e-8 distance.
    if p.matrix() == q.matrix() {
        return Ok(0.0);
    }
    let s = p.rank() as f64 - symmetric_trace_product(p.matrix(), q.matrix());
    if s < -tol {
        return Err(FrameLabError::NegativeChordal(s));
    }
    Ok(s.max(0.0).sqrt())
}
