use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::instance::{generate_instance, Instance, InstanceKind, InstanceSpec};
use super::{bound_bc, bound_hm, lower_ref, nearest_enp_alternating, nearest_enp_asf_search, PenaltySchedule};
use crate::banach::{analyze_asf, asf_dist_sq, Exponent};
use crate::error::{FrameLabError, Result};
use crate::hilbert::{analyze_frame, frame_dist_sq};

const MAX_ROUNDS: usize = 10_000;
const MAX_SEARCH_ITERS: usize = 50_000;

/// One trial of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub spec: InstanceSpec,
    pub measured_eps_parseval: Option<f64>,
    pub measured_eps_equal_norm: Option<f64>,
    /// Best certified upper bound on the distance to the equal-norm Parseval
    /// set: the solver output or the generating base, whichever is closer.
    pub achieved_dist_sq: Option<f64>,
    /// The solver's own output re-verified as equal-norm Parseval.
    pub certified: bool,
    pub solver_dist_sq: Option<f64>,
    pub base_dist_sq: Option<f64>,
    pub bound_hm: f64,
    pub bound_bc: f64,
    pub lower_ref: f64,
    pub iterations: usize,
    pub wall_time: Duration,
    pub error: Option<String>,
}

impl ExperimentRecord {
    fn failed(spec: InstanceSpec, started: Instant, err: FrameLabError) -> Self {
        Self {
            bound_hm: bound_hm(spec.epsilon_target, spec.dim),
            bound_bc: bound_bc(spec.epsilon_target, spec.dim, spec.n),
            lower_ref: lower_ref(spec.epsilon_target, spec.dim),
            spec,
            measured_eps_parseval: None,
            measured_eps_equal_norm: None,
            achieved_dist_sq: None,
            certified: false,
            solver_dist_sq: None,
            base_dist_sq: None,
            iterations: 0,
            wall_time: started.elapsed(),
            error: Some(err.to_string()),
        }
    }

    pub fn violates_hm(&self) -> bool {
        self.certified && !self.spec.kind.is_banach() && self.achieved_dist_sq.is_some_and(|v| v > self.bound_hm)
    }

    pub fn violates_bc(&self) -> bool {
        self.certified && !self.spec.kind.is_banach() && self.achieved_dist_sq.is_some_and(|v| v > self.bound_bc)
    }
}

struct Solved {
    dist_sq: f64,
    certified: bool,
    iterations: usize,
}

fn run_trial(spec: InstanceSpec, certify_tol: f64) -> ExperimentRecord {
    let started = Instant::now();
    let instance = match generate_instance(&spec) {
        Ok(i) => i,
        Err(e) => return ExperimentRecord::failed(spec, started, e),
    };

    let (base_dist_sq, solved) =
        match &instance {
            Instance::Hilbert { frame, base, .. } => {
                let base_ok = analyze_frame(base).eps_both().is_some_and(|e| e <= certify_tol);
                let base_dist = frame_dist_sq(frame, base).ok().filter(|_| base_ok);
                let solved = nearest_enp_alternating(frame, certify_tol, MAX_ROUNDS).map(|r| Solved {
                    certified: analyze_frame(&r.frame).eps_both().is_some_and(|e| e <= certify_tol),
                    dist_sq: r.dist_sq,
                    iterations: r.rounds,
                });
                (base_dist, solved)
            }
            Instance::Banach { asf, base, .. } => {
                let base_ok = analyze_asf(base, certify_tol).eps_both().is_some_and(|e| e <= certify_tol);
                let base_dist = asf_dist_sq(asf, base).ok().filter(|_| base_ok);
                let solved = nearest_enp_asf_search(asf, certify_tol, MAX_SEARCH_ITERS, PenaltySchedule::default())
                    .map(|r| Solved {
                        certified: r.certified
                            && analyze_asf(&r.asf, certify_tol).eps_both().is_some_and(|e| e <= certify_tol),
                        dist_sq: r.dist_sq,
                        iterations: r.iterations,
                    });
                (base_dist, solved)
            }
        };

    let mut record = ExperimentRecord::failed(spec, started, FrameLabError::InvalidArgument(String::new()));
    record.error = None;
    record.measured_eps_parseval = instance.measured_eps_parseval();
    record.measured_eps_equal_norm = instance.measured_eps_equal_norm();
    record.base_dist_sq = base_dist_sq;
    match solved {
        Ok(s) => {
            record.certified = s.certified;
            record.iterations = s.iterations;
            record.solver_dist_sq = Some(s.dist_sq);
            let solver = s.certified.then_some(s.dist_sq);
            record.achieved_dist_sq = match (solver, base_dist_sq) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        Err(e) => {
            record.achieved_dist_sq = base_dist_sq;
            record.error = Some(e.to_string());
        }
    }
    record.wall_time = started.elapsed();
    record
}

/// Aggregate over all trials of one grid point.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub kind: InstanceKind,
    pub dim: usize,
    pub n: usize,
    pub p: f64,
    pub eps_target: f64,
    pub trials: usize,
    pub failures: usize,
    pub fraction_certified: f64,
    pub max_dist_sq: Option<f64>,
    pub mean_dist_sq: Option<f64>,
    pub median_dist_sq: Option<f64>,
    /// `max_dist_sq / bound_hm`
    pub ratio_hm: Option<f64>,
    pub ratio_bc: Option<f64>,
    pub ratio_lower_ref: Option<f64>,
    pub hm_violations: usize,
    pub bc_violations: usize,
}

fn summarize(records: &[ExperimentRecord]) -> GroupSummary {
    let spec = &records[0].spec;
    let mut values: Vec<f64> = records.iter().filter_map(|r| r.achieved_dist_sq).collect();
    values.sort_by(f64::total_cmp);
    let max = values.last().copied();
    let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
    let median = (!values.is_empty()).then(|| {
        let m = values.len() / 2;
        if values.len() % 2 == 1 {
            values[m]
        } else {
            0.5 * (values[m - 1] + values[m])
        }
    });
    let eps = spec.epsilon_target;
    GroupSummary {
        kind: spec.kind,
        dim: spec.dim,
        n: spec.n,
        p: spec.p,
        eps_target: eps,
        trials: records.len(),
        failures: records.iter().filter(|r| r.error.is_some()).count(),
        fraction_certified: records.iter().filter(|r| r.certified).count() as f64 / records.len() as f64,
        max_dist_sq: max,
        mean_dist_sq: mean,
        median_dist_sq: median,
        ratio_hm: max.map(|m| m / bound_hm(eps, spec.dim)),
        ratio_bc: max.map(|m| m / bound_bc(eps, spec.dim, spec.n)),
        ratio_lower_ref: max.map(|m| m / lower_ref(eps, spec.dim)),
        hm_violations: records.iter().filter(|r| r.violates_hm()).count(),
        bc_violations: records.iter().filter(|r| r.violates_bc()).count(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<GroupSummary>,
}

/// Runs `trials` trials of every grid point; trial `k` of a spec uses seed
/// `spec.seed + k`. Records come out in grid order, then trial order.
pub fn estimate_paulsen(grid: &[InstanceSpec], trials: usize, certify_tol: f64) -> Result<Estimate> {
    if grid.is_empty() {
        return Err(FrameLabError::InvalidArgument("empty grid".into()));
    }
    if trials == 0 {
        return Err(FrameLabError::InvalidArgument("trial count must be positive".into()));
    }
    if !(certify_tol > 0.0) {
        return Err(FrameLabError::InvalidArgument(format!("certify tolerance {certify_tol} must be positive")));
    }
    let mut records = Vec::with_capacity(grid.len() * trials);
    let mut summary = Vec::with_capacity(grid.len());
    for spec in grid {
        let group: Vec<ExperimentRecord> =
            (0..trials as u64).map(|k| run_trial(spec.with_seed(spec.seed.wrapping_add(k)), certify_tol)).collect();
        summary.push(summarize(&group));
        records.extend(group);
    }
    Ok(Estimate { records, summary })
}

/// One CSV line of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub d: usize,
    pub n: usize,
    pub p: String,
    pub kind: InstanceKind,
    pub eps_target: f64,
    pub eps_measured_parseval: Option<f64>,
    pub eps_measured_equalnorm: Option<f64>,
    pub dist_sq: Option<f64>,
    pub certified: bool,
    pub rounds: usize,
    pub bound_hm: f64,
    pub bound_bc: f64,
    pub lower_ref: f64,
}

impl From<&ExperimentRecord> for CsvRow {
    fn from(r: &ExperimentRecord) -> Self {
        let p = match Exponent::new(r.spec.p) {
            Ok(e) => e.to_string(),
            Err(_) => r.spec.p.to_string(),
        };
        Self {
            d: r.spec.dim,
            n: r.spec.n,
            p,
            kind: r.spec.kind,
            eps_target: r.spec.epsilon_target,
            eps_measured_parseval: r.measured_eps_parseval,
            eps_measured_equalnorm: r.measured_eps_equal_norm,
            dist_sq: r.achieved_dist_sq,
            certified: r.certified,
            rounds: r.iterations,
            bound_hm: r.bound_hm,
            bound_bc: r.bound_bc,
            lower_ref: r.lower_ref,
        }
    }
}

pub fn write_records_csv<W: Write>(records: &[ExperimentRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}
