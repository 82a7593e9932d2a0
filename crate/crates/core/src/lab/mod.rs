//! Experiment engine: nearly equal-norm Parseval instances, nearest
//! equal-norm Parseval searches, and the Paulsen-function estimator.

mod alternating;
mod asf_search;
mod estimate;
mod instance;
mod minimize;

pub use alternating::{nearest_enp_alternating, nearest_enp_with_scheme, AlternatingResult, Scheme};
pub use asf_search::{enp_residual, nearest_enp_asf_search, AsfSearchResult, PenaltySchedule};
pub use estimate::{estimate_paulsen, write_records_csv, CsvRow, Estimate, ExperimentRecord, GroupSummary};
pub use instance::{duality_map, generate_instance, Instance, InstanceKind, InstanceSpec};

/// Default certification tolerance; `FRAMELAB_TOL` overrides it in the CLI.
pub const DEFAULT_CERTIFY_TOL: f64 = 1e-8;

/// `20 ε d²`
pub fn bound_hm(eps: f64, d: usize) -> f64 {
    20.0 * eps * (d * d) as f64
}

/// `(29/8) d² n (n − 1)⁸ ε`
pub fn bound_bc(eps: f64, d: usize, n: usize) -> f64 {
    let nf = n as f64;
    29.0 / 8.0 * (d * d) as f64 * nf * (nf - 1.0).powi(8) * eps
}

/// `ε² d`, reported only.
pub fn lower_ref(eps: f64, d: usize) -> f64 {
    eps * eps * d as f64
}
