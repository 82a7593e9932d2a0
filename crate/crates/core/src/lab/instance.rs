use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::banach::{analyze_asf, generate_asf, Asf, AsfFamily, AsfReport, Exponent, PNormSpace};
use crate::error::{FrameLabError, Result};
use crate::hilbert::{analyze_frame, generate, harmonic, Frame, FrameFamily, FrameReport};
use crate::sampling;
use crate::spectral;

/// Chain tolerance used when certifying generated ASF instances.
const INSTANCE_CHAIN_TOL: f64 = 1e-12;
const MAX_DIRECTION_ATTEMPTS: u64 = 64;
const BISECTION_STEPS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    /// Harmonic frame with every vector displaced by a tuned random amount.
    PerturbedEnp,
    /// `√(1+ε)` times the harmonic frame.
    ScaledEnp,
    /// Repeated-basis ASF with displaced vectors and matching norming functionals.
    PerturbedAsf,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::PerturbedEnp => "perturbed_enp",
            InstanceKind::ScaledEnp => "scaled_enp",
            InstanceKind::PerturbedAsf => "perturbed_asf",
        }
    }

    pub fn is_banach(self) -> bool {
        self == InstanceKind::PerturbedAsf
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = FrameLabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perturbed_enp" => Ok(InstanceKind::PerturbedEnp),
            "scaled_enp" => Ok(InstanceKind::ScaledEnp),
            "perturbed_asf" => Ok(InstanceKind::PerturbedAsf),
            other => Err(FrameLabError::InvalidArgument(format!("unknown instance kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    pub dim: usize,
    pub n: usize,
    pub epsilon_target: f64,
    /// Exponent of the ambient `ℓᵖ`; ignored by the Hilbert kinds.
    pub p: f64,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn hilbert(kind: InstanceKind, dim: usize, n: usize, epsilon_target: f64, seed: u64) -> Self {
        Self { kind, dim, n, epsilon_target, p: 2.0, seed }
    }

    pub fn asf(dim: usize, n: usize, epsilon_target: f64, p: f64, seed: u64) -> Self {
        Self { kind: InstanceKind::PerturbedAsf, dim, n, epsilon_target, p, seed }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_target > 0.0 && self.epsilon_target < 1.0) {
            return Err(FrameLabError::InvalidArgument(format!(
                "epsilon target {} must lie in (0, 1)",
                self.epsilon_target
            )));
        }
        if self.dim == 0 || self.dim > self.n {
            return Err(FrameLabError::Infeasible(format!("need 1 <= d <= n (d = {}, n = {})", self.dim, self.n)));
        }
        if self.kind.is_banach() {
            Exponent::new(self.p)?;
            if !self.n.is_multiple_of(self.dim) {
                return Err(FrameLabError::Infeasible(format!(
                    "equal-norm Parseval ASF base needs d | n (d = {}, n = {})",
                    self.dim, self.n
                )));
            }
        }
        Ok(())
    }
}

/// A generated instance with its generating equal-norm Parseval base point
/// and a fresh certificate.
#[derive(Clone, Debug)]
pub enum Instance {
    Hilbert { frame: Frame, base: Frame, report: FrameReport, delta: Option<f64> },
    Banach { asf: Asf, base: Asf, report: AsfReport, delta: f64 },
}

impl Instance {
    pub fn measured_eps_parseval(&self) -> Option<f64> {
        match self {
            Instance::Hilbert { report, .. } => report.eps_parseval,
            Instance::Banach { report, .. } => report.eps_parseval,
        }
    }

    pub fn measured_eps_equal_norm(&self) -> Option<f64> {
        match self {
            Instance::Hilbert { report, .. } => report.eps_equal_norm,
            Instance::Banach { report, .. } => report.eps_equal_norm,
        }
    }

    pub fn frame(&self) -> Option<&Frame> {
        match self {
            Instance::Hilbert { frame, .. } => Some(frame),
            Instance::Banach { .. } => None,
        }
    }

    pub fn asf(&self) -> Option<&Asf> {
        match self {
            Instance::Banach { asf, .. } => Some(asf),
            Instance::Hilbert { .. } => None,
        }
    }
}

/// Norming functional of `x` scaled so that `f(x) = ‖f‖²_q = ‖x‖²_p`.
///
/// Unique for `1 < p < ∞`; for `p ∈ {1, ∞}` a canonical selection is returned.
pub fn duality_map(p: Exponent, x: &[f64]) -> Vec<f64> {
    let r = p.norm(x);
    if r == 0.0 {
        return vec![0.0; x.len()];
    }
    match p {
        Exponent::Infinity => {
            let k = (0..x.len()).max_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs())).unwrap_or(0);
            let mut f = vec![0.0; x.len()];
            f[k] = r * x[k].signum();
            f
        }
        Exponent::Finite(1.0) => x.iter().map(|v| r * sign(*v)).collect(),
        Exponent::Finite(p) => {
            let scale = r.powf(2.0 - p);
            x.iter().map(|v| scale * sign(*v) * v.abs().powf(p - 1.0)).collect()
        }
    }
}

fn sign(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum()
    }
}

/// Largest `δ` (up to bisection accuracy) with `measure(δ) <= target`,
/// assuming `measure(0) <= target`.
fn tune_delta(target: f64, initial: f64, measure: impl Fn(f64) -> f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = initial;
    let mut expansions = 0;
    while measure(hi) <= target {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return lo;
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if measure(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn attempt_seed(seed: u64, attempt: u64) -> u64 {
    seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn displaced(base: &[Vec<f64>], directions: &[Vec<f64>], delta: f64) -> Vec<Vec<f64>> {
    base.iter().zip(directions).map(|(b, u)| b.iter().zip(u).map(|(x, e)| x + delta * e).collect()).collect()
}

fn eps_or_inf(parseval: Option<f64>, equal_norm: Option<f64>) -> f64 {
    match (parseval, equal_norm) {
        (Some(a), Some(b)) => a.max(b),
        _ => f64::INFINITY,
    }
}

/// Builds an instance whose measured nearness parameters do not exceed
/// `spec.epsilon_target`.
pub fn generate_instance(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let (d, n, eps) = (spec.dim, spec.n, spec.epsilon_target);
    match spec.kind {
        InstanceKind::ScaledEnp => {
            let base = harmonic(d, n)?;
            let frame = generate(&FrameFamily::Scaled { base: base.clone(), eps }, spec.seed)?;
            let report = analyze_frame(&frame);
            Ok(Instance::Hilbert { frame, base, report, delta: None })
        }
        InstanceKind::PerturbedEnp => {
            let base = harmonic(d, n)?;
            let mut rng = sampling::stream(spec.seed);
            let directions: Vec<Vec<f64>> =
                (0..n).map(|_| sampling::in_unit_ball(&mut rng, d, spectral::norm)).collect();
            let build = |delta: f64| Frame::new(d, displaced(base.vectors(), &directions, delta));
            let measure = |delta: f64| {
                build(delta).map_or(f64::INFINITY, |f| {
                    let r = analyze_frame(&f);
                    eps_or_inf(r.eps_parseval, r.eps_equal_norm)
                })
            };
            let delta = tune_delta(eps, eps * (d as f64 / n as f64).sqrt(), measure);
            let frame = build(delta)?;
            let report = analyze_frame(&frame);
            Ok(Instance::Hilbert { frame, base, report, delta: Some(delta) })
        }
        InstanceKind::PerturbedAsf => {
            let space = PNormSpace::new(d, spec.p)?;
            let base = generate_asf(&AsfFamily::RepeatedBasis { space, n }, spec.seed)?;
            let build = |directions: &[Vec<f64>], delta: f64| {
                let vectors = displaced(base.vectors(), directions, delta);
                let functionals = vectors.iter().map(|t| duality_map(space.p, t)).collect();
                Asf::new(space, functionals, vectors)
            };
            let measure = |directions: &[Vec<f64>], delta: f64| {
                build(directions, delta).map_or(f64::INFINITY, |a| {
                    let r = analyze_asf(&a, INSTANCE_CHAIN_TOL);
                    eps_or_inf(r.eps_parseval, r.eps_equal_norm)
                })
            };
            // Non-normal operators near I can carry a complex pair for every
            // small displacement along a direction; such directions are redrawn.
            for attempt in 0..MAX_DIRECTION_ATTEMPTS {
                let mut rng = sampling::stream(attempt_seed(spec.seed, attempt));
                let directions: Vec<Vec<f64>> =
                    (0..n).map(|_| sampling::in_unit_ball(&mut rng, d, |x| space.norm(x))).collect();
                let delta = tune_delta(eps, eps * (d as f64 / n as f64).sqrt(), |delta| measure(&directions, delta));
                if measure(&directions, delta) < 0.5 * eps {
                    continue;
                }
                let asf = build(&directions, delta)?;
                let report = analyze_asf(&asf, INSTANCE_CHAIN_TOL);
                return Ok(Instance::Banach { asf, base, report, delta });
            }
            Err(FrameLabError::Infeasible(format!("no displacement direction reached eps {eps} with a real spectrum")))
        }
    }
}
