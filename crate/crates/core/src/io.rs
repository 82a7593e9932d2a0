//! JSON documents for frames, ASFs, projections and Auerbach systems.
//!
//! ```json
//! {"kind": "hilbert_frame", "dim": 2, "vectors": [[1, 0], [0, 1]]}
//! {"kind": "asf", "dim": 2, "p": "inf", "functionals": [...], "vectors": [...]}
//! {"kind": "projection", "dim": 2, "matrix": [[1, 0], [0, 0]]}
//! {"kind": "auerbach_system", "p": 3, "basis_vectors": [...], "dual_functionals": [...]}
//! ```

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::banach::{Asf, Exponent, PNormSpace};
use crate::error::{FrameLabError, Result};
use crate::hilbert::Frame;
use crate::projections::AuerbachSystem;
use crate::spectral::Matrix;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

impl RawExponent {
    fn value(&self) -> Result<f64> {
        match self {
            RawExponent::Number(p) => Ok(*p),
            RawExponent::Text(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            RawExponent::Text(s) => {
                Err(FrameLabError::InvalidDocument(format!("exponent {s:?} is neither a number nor \"inf\"")))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawDocument {
    HilbertFrame { dim: usize, vectors: Vec<Vec<f64>> },
    Asf { dim: usize, p: RawExponent, functionals: Vec<Vec<f64>>, vectors: Vec<Vec<f64>> },
    Projection { dim: usize, matrix: Vec<Vec<f64>> },
    AuerbachSystem { dim: Option<usize>, p: RawExponent, basis_vectors: Vec<Vec<f64>>, dual_functionals: Vec<Vec<f64>> },
}

/// A parsed and validated document.
#[derive(Clone, Debug)]
pub enum Document {
    Frame(Frame),
    Asf(Asf),
    Projection(Matrix),
    Auerbach(AuerbachSystem),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Frame(_) => "hilbert_frame",
            Document::Asf(_) => "asf",
            Document::Projection(_) => "projection",
            Document::Auerbach(_) => "auerbach_system",
        }
    }
}

fn check_rows(rows: &[Vec<f64>], width: usize, what: &str) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(FrameLabError::InvalidDocument(format!(
                "{what} row {i} has {} entries, expected {width}",
                r.len()
            )));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(FrameLabError::InvalidDocument(format!("{what} row {i} has a non-finite entry")));
        }
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text)?;
    match raw {
        RawDocument::HilbertFrame { dim, vectors } => {
            check_rows(&vectors, dim, "vectors")?;
            Ok(Document::Frame(Frame::new(dim, vectors)?))
        }
        RawDocument::Asf { dim, p, functionals, vectors } => {
            check_rows(&vectors, dim, "vectors")?;
            check_rows(&functionals, dim, "functionals")?;
            Ok(Document::Asf(Asf::new(PNormSpace::new(dim, p.value()?)?, functionals, vectors)?))
        }
        RawDocument::Projection { dim, matrix } => {
            if matrix.len() != dim {
                return Err(FrameLabError::InvalidDocument(format!(
                    "projection has {} rows, expected {dim}",
                    matrix.len()
                )));
            }
            check_rows(&matrix, dim, "matrix")?;
            Ok(Document::Projection(Matrix::from_rows(&matrix)?))
        }
        RawDocument::AuerbachSystem { dim, p, basis_vectors, dual_functionals } => {
            let dim = dim.unwrap_or(basis_vectors.len());
            check_rows(&basis_vectors, dim, "basis_vectors")?;
            check_rows(&dual_functionals, dim, "dual_functionals")?;
            let space = PNormSpace::new(dim, p.value()?)?;
            Ok(Document::Auerbach(AuerbachSystem::new(space, basis_vectors, dual_functionals)?))
        }
    }
}

pub fn read_document(path: impl AsRef<Path>) -> Result<Document> {
    parse_document(&fs::read_to_string(path)?)
}

fn wrong_kind(expected: &str, found: &Document) -> FrameLabError {
    FrameLabError::InvalidDocument(format!("expected a {expected} document, found {}", found.kind()))
}

pub fn read_frame(path: impl AsRef<Path>) -> Result<Frame> {
    match read_document(path)? {
        Document::Frame(f) => Ok(f),
        other => Err(wrong_kind("hilbert_frame", &other)),
    }
}

pub fn read_asf(path: impl AsRef<Path>) -> Result<Asf> {
    match read_document(path)? {
        Document::Asf(a) => Ok(a),
        other => Err(wrong_kind("asf", &other)),
    }
}

pub fn read_projection(path: impl AsRef<Path>) -> Result<Matrix> {
    match read_document(path)? {
        Document::Projection(m) => Ok(m),
        other => Err(wrong_kind("projection", &other)),
    }
}

pub fn read_auerbach(path: impl AsRef<Path>) -> Result<AuerbachSystem> {
    match read_document(path)? {
        Document::Auerbach(s) => Ok(s),
        other => Err(wrong_kind("auerbach_system", &other)),
    }
}

fn exponent_value(p: Exponent) -> Value {
    match p {
        Exponent::Finite(p) => json!(p),
        Exponent::Infinity => json!("inf"),
    }
}

pub fn frame_value(frame: &Frame) -> Value {
    json!({"kind": "hilbert_frame", "dim": frame.dim(), "vectors": frame.vectors()})
}

pub fn asf_value(asf: &Asf) -> Value {
    json!({
        "kind": "asf",
        "dim": asf.dim(),
        "p": exponent_value(asf.space().p),
        "functionals": asf.functionals(),
        "vectors": asf.vectors(),
    })
}

pub fn projection_value(m: &Matrix) -> Value {
    json!({"kind": "projection", "dim": m.rows(), "matrix": m.to_rows()})
}

pub fn auerbach_value(sys: &AuerbachSystem) -> Value {
    json!({
        "kind": "auerbach_system",
        "dim": sys.space().dim,
        "p": exponent_value(sys.space().p),
        "basis_vectors": sys.basis_vectors(),
        "dual_functionals": sys.dual_functionals(),
    })
}

pub fn write_json(path: impl AsRef<Path>, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
