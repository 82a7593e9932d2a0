//! Numerical laboratory for the Paulsen and projection problems.
//!
//! * [`spectral`]: dense symmetric eigensolver and matrix functionals.
//! * [`hilbert`]: frames, their certificates, closest Parseval / equal-norm
//!   frames and Naimark complements.
//! * [`flow`]: the spherical gradient flow that equalizes a unit-norm frame.
//! * [`banach`]: approximate Schauder frames over `ℓᵖ_d`.
//! * [`projections`]: projection certificates, balance and chordal distance.
//! * [`lab`]: instance generation, nearest equal-norm Parseval search and the
//!   Paulsen-function estimator.
//! * [`io`]: JSON documents and CSV output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banach;
pub mod cli;
pub mod error;
pub mod flow;
pub mod hilbert;
pub mod io;
pub mod lab;
pub mod projections;
mod sampling;
pub mod spectral;

pub use error::{FrameLabError, Result};
pub use hilbert::{analyze_frame, Frame, FrameReport};
pub use spectral::Matrix;
