//! Approximate Schauder frames over `ℓᵖ_d`.
//!
//! Functionals are stored as their representing vectors under the Euclidean
//! pairing and measured in the dual `q`-norm; vectors are measured in the
//! `p`-norm.

use std::fmt;

use serde::Serialize;

use crate::error::{FrameLabError, Result};
use crate::hilbert::{eps_from_norms, Frame};
use crate::sampling;
use crate::spectral::{self, dot, Matrix};

/// Imaginary parts above this make a spectrum non-real.
pub const SPEC_TOL: f64 = 1e-9;
/// Smallest singular value of `S` for the family to count as an ASF.
pub const INVERTIBILITY_FLOOR: f64 = 1e-12;

/// An exponent in `[1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(FrameLabError::InvalidArgument(format!("exponent p = {p} must lie in [1, inf]")))
        }
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1 < p < ∞`.
    pub fn is_smooth(self) -> bool {
        matches!(self, Exponent::Finite(p) if p > 1.0)
    }

    pub fn norm(self, x: &[f64]) -> f64 {
        let m = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        match self {
            Exponent::Infinity => m,
            Exponent::Finite(1.0) => x.iter().map(|v| v.abs()).sum(),
            Exponent::Finite(2.0) => spectral::norm(x),
            Exponent::Finite(p) => {
                if m == 0.0 {
                    return 0.0;
                }
                m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// `ℓᵖ_d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PNormSpace {
    pub dim: usize,
    pub p: Exponent,
}

impl PNormSpace {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(FrameLabError::UnsupportedShape("dimension must be at least 1".into()));
        }
        Ok(Self { dim, p: Exponent::new(p)? })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { dim, p: Exponent::Finite(2.0) }
    }

    pub fn q(&self) -> Exponent {
        self.p.conjugate()
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.p.norm(x)
    }
}

/// Norm of a functional, i.e. the `q`-norm of its representing vector.
pub fn dual_norm(space: &PNormSpace, f: &[f64]) -> f64 {
    space.q().norm(f)
}

/// Functionals `f_j` and vectors `τ_j` over a common `ℓᵖ_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Asf {
    space: PNormSpace,
    functionals: Vec<Vec<f64>>,
    vectors: Vec<Vec<f64>>,
}

fn check_family(dim: usize, family: &[Vec<f64>], what: &'static str) -> Result<()> {
    for (j, v) in family.iter().enumerate() {
        if v.len() != dim {
            return Err(FrameLabError::ShapeMismatch(format!("{what} {j} has length {}, expected {dim}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(FrameLabError::NonFinite(what));
        }
    }
    Ok(())
}

impl Asf {
    pub fn new(space: PNormSpace, functionals: Vec<Vec<f64>>, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if functionals.len() != vectors.len() {
            return Err(FrameLabError::ShapeMismatch(format!(
                "{} functionals for {} vectors",
                functionals.len(),
                vectors.len()
            )));
        }
        if vectors.is_empty() {
            return Err(FrameLabError::UnsupportedShape("an ASF needs at least one pair".into()));
        }
        check_family(space.dim, &functionals, "functional")?;
        check_family(space.dim, &vectors, "vector")?;
        Ok(Self { space, functionals, vectors })
    }

    pub fn space(&self) -> &PNormSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn functionals(&self) -> &[Vec<f64>] {
        &self.functionals
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// `S = Σ_j τ_j f_jᵀ`, so that `S x = Σ_j f_j(x) τ_j`.
    pub fn frame_operator(&self) -> Matrix {
        let d = self.dim();
        let mut s = Matrix::zeros(d, d);
        for (f, t) in self.functionals.iter().zip(&self.vectors) {
            for i in 0..d {
                for k in 0..d {
                    s[(i, k)] += t[i] * f[k];
                }
            }
        }
        s
    }

    /// `S x` evaluated pointwise from the definition.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(FrameLabError::ShapeMismatch(format!("vector of length {}", x.len())));
        }
        let mut out = vec![0.0; self.dim()];
        for (f, t) in self.functionals.iter().zip(&self.vectors) {
            let c = dot(f, x);
            for (o, v) in out.iter_mut().zip(t) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    pub fn vector_norms_sq(&self) -> Vec<f64> {
        self.vectors.iter().map(|t| self.space.norm(t).powi(2)).collect()
    }

    pub fn functional_norms_sq(&self) -> Vec<f64> {
        self.functionals.iter().map(|f| dual_norm(&self.space, f).powi(2)).collect()
    }

    /// `f_j(τ_j)`.
    pub fn pairings(&self) -> Vec<f64> {
        self.functionals.iter().zip(&self.vectors).map(|(f, t)| dot(f, t)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsfReport {
    #[serde(rename = "S")]
    pub s: Matrix,
    pub invertible: bool,
    pub min_singular_value: f64,
    /// `λ = tr S / d` when `‖S − λI‖_HS ≤ tol`.
    pub tight_lambda: Option<f64>,
    /// `‖S − I‖_HS ≤ tol`.
    pub parseval: bool,
    pub funtf: bool,
    /// `max_i |λ_i − 1|` over a real spectrum, when below one.
    pub eps_parseval: Option<f64>,
    /// All eigenvalues have imaginary part at most [`SPEC_TOL`].
    pub spectrum_real: bool,
    pub spectrum: spectral::ComplexSpectrum,
    pub eps_equal_norm: Option<f64>,
    /// Largest spread among `‖τ_j‖²_p`, `f_j(τ_j)`, `‖f_j‖²_q`.
    pub norm_triple_defect: f64,
    pub vector_norms_sq: Vec<f64>,
    pub functional_norms_sq: Vec<f64>,
    pub pairings: Vec<f64>,
}

impl AsfReport {
    pub fn eps_both(&self) -> Option<f64> {
        Some(self.eps_parseval?.max(self.eps_equal_norm?))
    }
}

pub fn analyze_asf(asf: &Asf, tol: f64) -> AsfReport {
    let d = asf.dim();
    let s = asf.frame_operator();
    let min_singular_value = spectral::singular_values(&s).last().copied().unwrap_or(0.0);
    // An unresolved spectrum counts as non-real.
    let (spectrum, spectrum_real) = match spectral::general_spectrum(&s) {
        Ok(sp) => {
            let real = sp.max_abs_imag() <= SPEC_TOL;
            (sp, real)
        }
        Err(_) => (spectral::ComplexSpectrum { values: Vec::new() }, false),
    };
    let eps_parseval = if spectrum_real {
        let eps = spectrum.values.iter().map(|v| (v.0 - 1.0).abs()).fold(0.0, f64::max);
        (eps < 1.0).then_some(eps)
    } else {
        None
    };

    let lambda = s.trace() / d as f64;
    let tight_defect = (&s - &Matrix::identity(d).scale(lambda)).hs_norm();
    let tight_lambda = (tight_defect <= tol && lambda.abs() > INVERTIBILITY_FLOOR).then_some(lambda);
    let parseval = (&s - &Matrix::identity(d)).hs_norm() <= tol;

    let vector_norms_sq = asf.vector_norms_sq();
    let functional_norms_sq = asf.functional_norms_sq();
    let pairings = asf.pairings();
    let norm_triple_defect = (0..asf.len())
        .map(|j| {
            let t = [vector_norms_sq[j], pairings[j], functional_norms_sq[j]];
            let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .fold(0.0, f64::max);
    let eps_equal_norm = if norm_triple_defect <= tol { eps_from_norms(&vector_norms_sq, d) } else { None };

    let funtf = tight_lambda.is_some()
        && asf.vectors().iter().zip(asf.functionals()).all(|(t, f)| {
            (asf.space().norm(t) - 1.0).abs() <= tol
                && (dual_norm(asf.space(), f) - 1.0).abs() <= tol
                && (dot(f, t) - 1.0).abs() <= tol
        });

    AsfReport {
        s,
        invertible: min_singular_value > INVERTIBILITY_FLOOR,
        min_singular_value,
        tight_lambda,
        parseval,
        funtf,
        eps_parseval,
        spectrum_real,
        spectrum,
        eps_equal_norm,
        norm_triple_defect,
        vector_norms_sq,
        functional_norms_sq,
        pairings,
    }
}

/// Which distance between two ASFs to measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistVariant {
    /// `(Σ_j ½(‖τ_j−ω_j‖²_p + ‖f_j−g_j‖²_q))^{1/2}`
    Default,
    /// `½[(Σ_j ‖τ_j−ω_j‖²_p)^{1/2} + (Σ_j ‖f_j−g_j‖²_q)^{1/2}]`
    Star,
    /// `(Σ_j ½(‖τ_j−ω_j‖^r_p + ‖f_j−g_j‖^r_q))^{1/r}` for `r > 0`.
    Power(f64),
}

fn termwise(a: &Asf, b: &Asf) -> Result<Vec<(f64, f64)>> {
    if a.space() != b.space() || a.len() != b.len() {
        return Err(FrameLabError::ShapeMismatch(format!(
            "ASFs of size {} over dim {} (p = {}) and size {} over dim {} (p = {})",
            a.len(),
            a.dim(),
            a.space().p,
            b.len(),
            b.dim(),
            b.space().p
        )));
    }
    let space = a.space();
    let diff = |u: &[f64], v: &[f64]| -> Vec<f64> { u.iter().zip(v).map(|(x, y)| x - y).collect() };
    Ok((0..a.len())
        .map(|j| {
            let vec_term = space.norm(&diff(&a.vectors()[j], &b.vectors()[j]));
            let fun_term = dual_norm(space, &diff(&a.functionals()[j], &b.functionals()[j]));
            (vec_term, fun_term)
        })
        .collect())
}

pub fn asf_dist(a: &Asf, b: &Asf, variant: DistVariant) -> Result<f64> {
    let terms = termwise(a, b)?;
    match variant {
        DistVariant::Default => Ok(asf_dist_sq_terms(&terms).sqrt()),
        DistVariant::Star => {
            let v: f64 = terms.iter().map(|t| t.0 * t.0).sum();
            let f: f64 = terms.iter().map(|t| t.1 * t.1).sum();
            Ok(0.5 * (v.sqrt() + f.sqrt()))
        }
        DistVariant::Power(r) => {
            if !(r > 0.0) || !r.is_finite() {
                return Err(FrameLabError::InvalidArgument(format!("distance exponent {r} must be positive")));
            }
            let s: f64 = terms.iter().map(|t| 0.5 * (t.0.powf(r) + t.1.powf(r))).sum();
            Ok(s.powf(1.0 / r))
        }
    }
}

fn asf_dist_sq_terms(terms: &[(f64, f64)]) -> f64 {
    terms.iter().map(|t| 0.5 * (t.0 * t.0 + t.1 * t.1)).sum()
}

/// Square of the default distance.
pub fn asf_dist_sq(a: &Asf, b: &Asf) -> Result<f64> {
    Ok(asf_dist_sq_terms(&termwise(a, b)?))
}

/// Lifts a Hilbert frame to `ℓ²_d` with `f_j = ⟨·, τ_j⟩`.
pub fn from_hilbert(frame: &Frame) -> Asf {
    Asf {
        space: PNormSpace::euclidean(frame.dim()),
        functionals: frame.vectors().to_vec(),
        vectors: frame.vectors().to_vec(),
    }
}

/// ASF families produced by [`generate_asf`].
#[derive(Clone, Debug)]
pub enum AsfFamily {
    /// `(e_j*, e_j)`, `n = d`.
    Canonical { space: PNormSpace },
    /// Each `(e_j*, e_j)` repeated `n/d` times with both sides scaled by `√(d/n)`.
    RepeatedBasis { space: PNormSpace, n: usize },
    /// i.i.d. standard normal entries on both sides.
    Random { space: PNormSpace, n: usize },
    /// Vectors displaced within the `p`-ball and functionals within the
    /// `q`-ball of radius `delta`.
    Perturb { base: Asf, delta: f64 },
}

fn scaled_basis(dim: usize, j: usize, c: f64) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[j] = c;
    e
}

pub fn generate_asf(family: &AsfFamily, seed: u64) -> Result<Asf> {
    let mut rng = sampling::stream(seed);
    match family {
        AsfFamily::Canonical { space } => {
            let basis: Vec<_> = (0..space.dim).map(|j| scaled_basis(space.dim, j, 1.0)).collect();
            Asf::new(*space, basis.clone(), basis)
        }
        AsfFamily::RepeatedBasis { space, n } => {
            let d = space.dim;
            if *n == 0 || n % d != 0 {
                return Err(FrameLabError::IndivisibleRepeat { d, n: *n });
            }
            let c = (d as f64 / *n as f64).sqrt();
            let family: Vec<_> = (0..d).flat_map(|j| std::iter::repeat_n(scaled_basis(d, j, c), n / d)).collect();
            Asf::new(*space, family.clone(), family)
        }
        AsfFamily::Random { space, n } => {
            let functionals = (0..*n).map(|_| sampling::gaussian_vec(&mut rng, space.dim)).collect();
            let vectors = (0..*n).map(|_| sampling::gaussian_vec(&mut rng, space.dim)).collect();
            Asf::new(*space, functionals, vectors)
        }
        AsfFamily::Perturb { base, delta } => {
            if !(*delta >= 0.0 && delta.is_finite()) {
                return Err(FrameLabError::InvalidArgument(format!("perturbation size {delta}")));
            }
            let space = *base.space();
            let shift = |rng: &mut sampling::Stream, v: &[f64], e: Exponent| -> Vec<f64> {
                let u = sampling::in_unit_ball(rng, v.len(), |x| e.norm(x));
                v.iter().zip(u).map(|(x, y)| x + delta * y).collect()
            };
            let mut vectors = Vec::with_capacity(base.len());
            let mut functionals = Vec::with_capacity(base.len());
            for (t, f) in base.vectors().iter().zip(base.functionals()) {
                vectors.push(shift(&mut rng, t, space.p));
                functionals.push(shift(&mut rng, f, space.q()));
            }
            Asf::new(space, functionals, vectors)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::frame_dist;

    fn space(d: usize, p: f64) -> PNormSpace {
        PNormSpace::new(d, p).unwrap()
    }

    #[test]
    fn dual_norm_examples() {
        assert_eq!(dual_norm(&space(2, 1.0), &[0.5, 0.5]), 0.5);
        assert_eq!(dual_norm(&space(2, 2.0), &[3.0, 4.0]), 5.0);
        assert_eq!(dual_norm(&space(2, f64::INFINITY), &[1.0, -1.0]), 2.0);
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(Exponent::new(1.0).unwrap().conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::new(3.0).unwrap().conjugate(), Exponent::Finite(1.5));
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn canonical_report() {
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let a = generate_asf(&AsfFamily::Canonical { space: space(3, p) }, 0).unwrap();
            let r = analyze_asf(&a, 1e-10);
            assert_eq!(r.s, Matrix::identity(3));
            assert!(r.parseval && r.funtf && r.invertible);
            assert_eq!(r.eps_parseval, Some(0.0));
            assert_eq!(r.eps_equal_norm, Some(0.0));
            assert_eq!(r.tight_lambda, Some(1.0));
        }
    }

    #[test]
    fn repeated_basis_l1() {
        let a = generate_asf(&AsfFamily::RepeatedBasis { space: space(2, 1.0), n: 4 }, 0).unwrap();
        let r = analyze_asf(&a, 1e-10);
        assert!((&r.s - &Matrix::identity(2)).hs_norm() < 1e-15);
        for j in 0..4 {
            assert!((r.vector_norms_sq[j] - 0.5).abs() < 1e-15);
            assert!((r.pairings[j] - 0.5).abs() < 1e-15);
            assert!((r.functional_norms_sq[j] - 0.5).abs() < 1e-15);
        }
        assert!(r.parseval);
        assert!(r.eps_equal_norm.unwrap() < 1e-14);
        assert!(!r.funtf);
    }

    #[test]
    fn repeated_basis_certificates_for_all_exponents() {
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let a = generate_asf(&AsfFamily::RepeatedBasis { space: space(2, p), n: 4 }, 0).unwrap();
            let r = analyze_asf(&a, 1e-10);
            assert!(r.eps_parseval.unwrap() <= 1e-14, "p={p}");
            assert!(r.eps_equal_norm.unwrap() <= 1e-14, "p={p}");
            assert!(r.norm_triple_defect <= 1e-12, "p={p}");
        }
        assert!(matches!(
            generate_asf(&AsfFamily::RepeatedBasis { space: space(2, 3.0), n: 5 }, 0),
            Err(FrameLabError::IndivisibleRepeat { d: 2, n: 5 })
        ));
    }

    #[test]
    fn triangular_operator_exposes_spectrum_gap() {
        let a = Asf::new(space(2, 2.0), vec![vec![1.0, 1.0], vec![0.0, 1.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let r = analyze_asf(&a, 1e-10);
        assert_eq!(r.s, Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap());
        assert!(r.invertible);
        assert!(r.eps_parseval.unwrap() < 1e-7);
        assert!(!r.parseval);
        assert!(r.tight_lambda.is_none());
    }

    #[test]
    fn non_real_spectrum_has_no_parseval_eps() {
        let a = Asf::new(space(2, 2.0), vec![vec![0.0, -1.0], vec![1.0, 0.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let r = analyze_asf(&a, 1e-10);
        assert!(!r.spectrum_real);
        assert_eq!(r.eps_parseval, None);
        assert!(r.invertible);
    }

    #[test]
    fn operator_matches_pointwise_definition() {
        let a = generate_asf(&AsfFamily::Random { space: space(3, 1.5), n: 5 }, 4).unwrap();
        let s = a.frame_operator();
        for k in 0..3 {
            let e = scaled_basis(3, k, 1.0);
            let col = a.apply(&e).unwrap();
            for i in 0..3 {
                assert!((s[(i, k)] - col[i]).abs() <= 1e-12);
            }
        }
        let r = analyze_asf(&a, 1e-10);
        assert_eq!(r.invertible, r.min_singular_value > INVERTIBILITY_FLOOR);
    }

    #[test]
    fn distance_examples() {
        let base = generate_asf(&AsfFamily::Canonical { space: space(2, 2.0) }, 0).unwrap();
        for v in [DistVariant::Default, DistVariant::Star, DistVariant::Power(1.3)] {
            assert_eq!(asf_dist(&base, &base, v).unwrap(), 0.0);
        }
        let moved = Asf::new(*base.space(), base.functionals().to_vec(), vec![vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((asf_dist(&base, &moved, DistVariant::Default).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((asf_dist(&base, &moved, DistVariant::Star).unwrap() - 0.5).abs() < 1e-15);
        assert!(asf_dist(&base, &moved, DistVariant::Power(0.0)).is_err());
        let other = generate_asf(&AsfFamily::Canonical { space: space(2, 3.0) }, 0).unwrap();
        assert!(asf_dist(&base, &other, DistVariant::Default).is_err());
    }

    #[test]
    fn lifted_mercedes_benz() {
        let mb = Frame::mercedes_benz();
        let r = analyze_asf(&from_hilbert(&mb), 1e-10);
        assert!((&r.s - &Matrix::identity(2).scale(1.5)).hs_norm() < 1e-14);
        assert!((r.eps_parseval.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(
            from_hilbert(&Frame::standard_basis(2)),
            generate_asf(&AsfFamily::Canonical { space: PNormSpace::euclidean(2) }, 0).unwrap()
        );
        let shrunk = mb.scaled((2.0f64 / 3.0).sqrt());
        let lifted = asf_dist(&from_hilbert(&mb), &from_hilbert(&shrunk), DistVariant::Default).unwrap();
        assert!((lifted - frame_dist(&mb, &shrunk).unwrap()).abs() < 1e-15);
        assert!((lifted - 0.317_837_2).abs() < 1e-7);
    }

    #[test]
    fn perturb_zero_is_identity() {
        let base = generate_asf(&AsfFamily::Canonical { space: space(3, 1.5) }, 0).unwrap();
        let p = generate_asf(&AsfFamily::Perturb { base: base.clone(), delta: 0.0 }, 3).unwrap();
        assert_eq!(p, base);
    }

    #[test]
    fn perturb_stays_in_balls() {
        let base = generate_asf(&AsfFamily::RepeatedBasis { space: space(2, 1.5), n: 4 }, 0).unwrap();
        let p = generate_asf(&AsfFamily::Perturb { base: base.clone(), delta: 0.2 }, 3).unwrap();
        let sp = base.space();
        for j in 0..4 {
            let dv: Vec<f64> = p.vectors()[j].iter().zip(&base.vectors()[j]).map(|(a, b)| a - b).collect();
            let df: Vec<f64> = p.functionals()[j].iter().zip(&base.functionals()[j]).map(|(a, b)| a - b).collect();
            assert!(sp.norm(&dv) <= 0.2 + 1e-14);
            assert!(dual_norm(sp, &df) <= 0.2 + 1e-14);
        }
    }

    #[test]
    fn norms_are_monotone_in_p() {
        let x = [0.3, -1.2, 0.7, 2.0];
        let ps = [1.0, 1.2, 1.5, 2.0, 3.0, 7.0, f64::INFINITY];
        let norms: Vec<f64> = ps.iter().map(|&p| Exponent::new(p).unwrap().norm(&x)).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        let duals: Vec<f64> = ps.iter().map(|&p| dual_norm(&space(4, p), &x)).collect();
        assert!(duals.windows(2).all(|w| w[1] + 1e-15 >= w[0]));
    }
}
