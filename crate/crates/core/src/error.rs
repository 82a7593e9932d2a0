use thiserror::Error;

/// Errors raised by framelab operations.
#[derive(Debug, Error)]
pub enum FrameLabError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric within tolerance (defect {defect:e})")]
    AsymmetricInput { defect: f64 },

    #[error("operator is numerically singular (smallest eigenvalue {min_eigenvalue:e} <= floor {floor:e})")]
    SingularOperator { min_eigenvalue: f64, floor: f64 },

    #[error("vector {0} is zero; its direction is undefined")]
    ZeroVector(usize),

    #[error("frame is not Parseval within tolerance (eps {eps:e} > {tol:e})")]
    NotParseval { eps: f64, tol: f64 },

    #[error("no Naimark complement exists when n = d")]
    NoComplement,

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("vector {index} is not unit norm (norm {norm})")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("step t = {t} must satisfy 0 < t < 1/(2n) = {limit}")]
    StepTooLarge { t: f64, limit: f64 },

    #[error("repeated basis needs d | n (d = {d}, n = {n})")]
    IndivisibleRepeat { d: usize, n: usize },

    #[error("matrix is not idempotent: {0}")]
    NotIdempotent(String),

    #[error("projection is not self-adjoint (defect {defect:e})")]
    NotSelfAdjoint { defect: f64 },

    #[error("projection has rank 0")]
    RankZero,

    #[error("projection ranks differ ({0} vs {1})")]
    RankMismatch(usize, usize),

    #[error("m - trace(PQ) = {0:e} is negative beyond tolerance")]
    NegativeChordal(f64),

    #[error("exponent p = {0} is not supported here (need 1 < p < inf)")]
    UnsupportedExponent(String),

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("no convergence after {rounds} rounds (residual {residual:e})")]
    NoConvergence { rounds: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = FrameLabError> = std::result::Result<T, E>;
