//! Spherical gradient flow toward a unit-norm tight frame.
//!
//! Each step rotates `τ_j` inside the plane spanned by `τ_j` and its tangent
//! direction `ω_j = Sτ_j − ⟨Sτ_j, τ_j⟩τ_j` by the angle `‖ω_j‖·t`, so unit
//! norms are preserved exactly up to rounding.

use std::io::Write;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{FrameLabError, Result};
use crate::hilbert::{frame_operator, shifted_hs, Frame};
use crate::spectral::{dot, norm, Matrix};

/// Accepted deviation of `‖τ_j‖` from one on entry.
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowConfig {
    pub step_t: f64,
    pub max_iters: usize,
    /// Stop once `‖S − (n/d) I‖_HS` falls to this value.
    pub stop_defect: f64,
    /// Tangent vectors at or below this norm count as zero.
    pub zero_threshold: f64,
    /// Renormalize every vector after this many steps.
    pub renormalize_every: Option<usize>,
}

impl FlowConfig {
    pub fn new(step_t: f64) -> Self {
        Self { step_t, max_iters: 100_000, stop_defect: 1e-6, zero_threshold: 1e-14, renormalize_every: None }
    }

    /// Step `t = 1/(4n)`, the middle of the admissible range.
    pub fn for_len(n: usize) -> Self {
        Self::new(1.0 / (4.0 * n as f64))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let limit = 1.0 / (2.0 * n as f64);
        if !(self.step_t > 0.0) || !self.step_t.is_finite() {
            return Err(FrameLabError::InvalidArgument(format!("step t = {} must be positive", self.step_t)));
        }
        if self.step_t >= limit {
            return Err(FrameLabError::StepTooLarge { t: self.step_t, limit });
        }
        if !(self.zero_threshold >= 0.0) || !(self.stop_defect >= 0.0) {
            return Err(FrameLabError::InvalidArgument("thresholds must be non-negative".into()));
        }
        if self.renormalize_every == Some(0) {
            return Err(FrameLabError::InvalidArgument("renormalization period must be positive".into()));
        }
        Ok(())
    }
}

/// The tangent directions `ω_j` of a unit-norm frame.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFamily {
    pub vectors: Vec<Vec<f64>>,
}

impl TangentFamily {
    pub fn max_norm(&self) -> f64 {
        self.vectors.iter().map(|w| norm(w)).fold(0.0, f64::max)
    }
}

fn check_unit_norm(frame: &Frame) -> Result<()> {
    for (index, v) in frame.vectors().iter().enumerate() {
        let r = norm(v);
        if (r - 1.0).abs() > UNIT_NORM_TOL {
            return Err(FrameLabError::NotUnitNorm { index, norm: r });
        }
    }
    Ok(())
}

fn tangents_with(frame: &Frame, s: &Matrix) -> Vec<Vec<f64>> {
    frame
        .vectors()
        .iter()
        .map(|t| {
            let st = s.mul_vec(t).expect("frame operator matches frame dimension");
            // Dividing by ‖τ‖² (= 1 on the sphere) keeps ω exactly tangent;
            // without it, roundoff in ‖τ‖ grows by about 1 + 2(n/d)t per step.
            let c = dot(&st, t) / dot(t, t);
            st.iter().zip(t).map(|(a, b)| a - c * b).collect()
        })
        .collect()
}

pub fn tangent_family(frame: &Frame) -> Result<TangentFamily> {
    check_unit_norm(frame)?;
    Ok(TangentFamily { vectors: tangents_with(frame, &frame_operator(frame)) })
}

fn rotate(frame: &Frame, tangents: &[Vec<f64>], t: f64, zero_threshold: f64) -> Frame {
    let vectors = frame
        .vectors()
        .iter()
        .zip(tangents)
        .map(|(tau, w)| {
            let r = norm(w);
            if r <= zero_threshold {
                return tau.clone();
            }
            let (sin, cos) = (r * t).sin_cos();
            tau.iter().zip(w).map(|(x, y)| cos * x - sin * y / r).collect()
        })
        .collect();
    Frame::new(frame.dim(), vectors).expect("rotation keeps the frame shape")
}

/// One step of the flow.
pub fn flow_step(frame: &Frame, config: &FlowConfig) -> Result<Frame> {
    config.validate(frame.len())?;
    let tangents = tangent_family(frame)?;
    Ok(rotate(frame, &tangents.vectors, config.step_t, config.zero_threshold))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowRecord {
    pub iter: usize,
    pub unit_defect_hs: f64,
    pub frame_potential: f64,
    pub max_tangent_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowTrace {
    pub records: Vec<FlowRecord>,
    pub final_iter: usize,
    pub termination: Termination,
    /// `gcd(n, d) = 1`.
    pub coprime: bool,
    /// `‖S⁰ − (n/d) I‖²_HS ≤ 2/d³` held on entry.
    pub small_initial_defect: bool,
    /// `‖S^{final} − S⁰‖_HS`.
    pub displacement: f64,
    /// `4 d²⁰ n^8.5 / (1 − 2nt) · ‖S⁰ − (n/d) I‖_HS`; reported only.
    pub displacement_bound: f64,
}

impl FlowTrace {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn last(&self) -> &FlowRecord {
        self.records.last().expect("a trace holds at least the initial record")
    }
}

/// Iterates [`flow_step`] until the unit defect reaches `stop_defect` or
/// `max_iters` steps have been taken. Records every visited iterate.
pub fn run_flow(frame: &Frame, config: &FlowConfig) -> Result<(Frame, FlowTrace)> {
    let n = frame.len();
    let d = frame.dim();
    config.validate(n)?;
    check_unit_norm(frame)?;

    let target = n as f64 / d as f64;
    let s0 = frame_operator(frame);
    let initial_defect = shifted_hs(&s0, target);

    let mut current = frame.clone();
    let mut records = Vec::new();
    let mut s = s0.clone();
    let termination = loop {
        let iter = records.len();
        let unit_defect_hs = shifted_hs(&s, target);
        let frame_potential = s.as_slice().iter().map(|x| x * x).sum();
        let tangents = tangents_with(&current, &s);
        let max_tangent_norm = tangents.iter().map(|w| norm(w)).fold(0.0, f64::max);
        records.push(FlowRecord { iter, unit_defect_hs, frame_potential, max_tangent_norm });

        if unit_defect_hs <= config.stop_defect {
            break Termination::Converged;
        }
        if iter == config.max_iters {
            break Termination::MaxIters;
        }
        current = rotate(&current, &tangents, config.step_t, config.zero_threshold);
        if config.renormalize_every.is_some_and(|k| (iter + 1) % k == 0) {
            current = current.normalized()?;
        }
        s = frame_operator(&current);
    };

    let nf = n as f64;
    let trace = FlowTrace {
        final_iter: records.len() - 1,
        records,
        termination,
        coprime: n.gcd(&d) == 1,
        small_initial_defect: initial_defect * initial_defect <= 2.0 / (d as f64).powi(3),
        displacement: (&s - &s0).hs_norm(),
        displacement_bound: 4.0 * (d as f64).powi(20) * nf.powf(8.5) / (1.0 - 2.0 * nf * config.step_t)
            * initial_defect,
    };
    Ok((current, trace))
}
