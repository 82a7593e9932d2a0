//! C ABI over `framelab`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`FlStatus`]; on failure `fl_last_error_message` describes the cause for
//! the calling thread. Matrices and vector families are dense row-major
//! `double` arrays: a family of `n` vectors in dimension `d` is `n * d`
//! values, vector `j` occupying `[j*d, (j+1)*d)`.
//!
//! Optional scalars (an epsilon that does not exist, a default target) are
//! encoded as NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use framelab::banach::{analyze_asf, asf_dist, Asf, DistVariant, PNormSpace};
use framelab::flow::{run_flow, FlowConfig, Termination};
use framelab::hilbert::{closest_equal_norm, closest_parseval, frame_dist, naimark_complement};
use framelab::lab::nearest_enp_alternating;
use framelab::projections::{certify_projection, chordal_distance, ProjectionOp};
use framelab::{analyze_frame, Frame, FrameLabError, Matrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    NonFinite = 4,
    Singular = 5,
    NotParseval = 6,
    NoComplement = 7,
    NotUnitNorm = 8,
    StepTooLarge = 9,
    NotProjection = 10,
    RankMismatch = 11,
    Unsupported = 12,
    Infeasible = 13,
    NoConvergence = 14,
    BufferTooSmall = 15,
    Panic = 16,
    Other = 17,
}

impl From<&FrameLabError> for FlStatus {
    fn from(e: &FrameLabError) -> Self {
        use FrameLabError as E;
        match e {
            E::ShapeMismatch(_) | E::UnsupportedShape(_) => FlStatus::ShapeMismatch,
            E::NonFinite(_) => FlStatus::NonFinite,
            E::SingularOperator { .. } | E::ZeroVector(_) => FlStatus::Singular,
            E::NotParseval { .. } => FlStatus::NotParseval,
            E::NoComplement => FlStatus::NoComplement,
            E::NotUnitNorm { .. } => FlStatus::NotUnitNorm,
            E::StepTooLarge { .. } => FlStatus::StepTooLarge,
            E::NotIdempotent(_) | E::NotSelfAdjoint { .. } | E::AsymmetricInput { .. } => FlStatus::NotProjection,
            E::RankMismatch(..) | E::RankZero | E::NegativeChordal(_) => FlStatus::RankMismatch,
            E::UnsupportedExponent(_) => FlStatus::Unsupported,
            E::Infeasible(_) | E::IndivisibleRepeat { .. } => FlStatus::Infeasible,
            E::NoConvergence { .. } => FlStatus::NoConvergence,
            E::InvalidArgument(_) => FlStatus::InvalidArgument,
            _ => FlStatus::Other,
        }
    }
}

/// A frame of `n` vectors in `R^d`.
pub struct FlFrame(Frame);

/// An approximate Schauder frame over `l^p_d`.
pub struct FlAsf(Asf);

/// A certified projection.
pub struct FlProjection(ProjectionOp);

/// Certificate of a frame. Absent epsilons are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct FlFrameReport {
    pub dim: usize,
    pub n: usize,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame: bool,
    pub eps_parseval: f64,
    pub eps_equal_norm: f64,
    pub tightness_defect_hs: f64,
    pub unit_defect_hs: f64,
    pub frame_potential: f64,
}

/// Certificate of an ASF. Absent epsilons are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct FlAsfReport {
    pub invertible: bool,
    pub min_singular_value: f64,
    pub parseval: bool,
    pub funtf: bool,
    pub spectrum_real: bool,
    pub eps_parseval: f64,
    pub eps_equal_norm: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FlFlowConfig {
    /// Must satisfy `0 < step_t < 1/(2n)`.
    pub step_t: f64,
    pub max_iters: usize,
    pub stop_defect: f64,
    /// Renormalize every vector after this many steps; 0 disables.
    pub renormalize_every: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct FlFlowSummary {
    pub final_iter: usize,
    pub converged: bool,
    pub unit_defect_hs: f64,
    pub frame_potential: f64,
    pub coprime: bool,
    pub displacement: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(FlStatus, String);

impl From<FrameLabError> for Failure {
    fn from(e: FrameLabError) -> Self {
        Failure(FlStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FlStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FlStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

/// Splits `rows * cols` doubles at `data` into rows.
unsafe fn read_rows(data: *const f64, rows: usize, cols: usize, what: &str) -> Result<Vec<Vec<f64>>, Failure> {
    let total = rows
        .checked_mul(cols)
        .ok_or_else(|| Failure(FlStatus::InvalidArgument, format!("{what}: {rows} x {cols} overflows")))?;
    if total == 0 {
        return Ok(vec![Vec::new(); rows]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    let flat = unsafe { std::slice::from_raw_parts(data, total) };
    Ok(flat.chunks(cols).map(<[f64]>::to_vec).collect())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn or_nan(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

/// Message for the last failed call on this thread, or null after a
/// success. Valid until the next `fl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a frame from `n * dim` row-major values.
///
/// # Safety
/// `vectors` must point to `n * dim` readable doubles and `out` to a
/// writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_new(dim: usize, n: usize, vectors: *const f64, out: *mut *mut FlFrame) -> FlStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        let rows = unsafe { read_rows(vectors, n, dim, "vectors") }?;
        *out = boxed(FlFrame(Frame::new(dim, rows)?));
        Ok(())
    })
}

/// Releases a frame. Null is ignored.
///
/// # Safety
/// `frame` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_free(frame: *mut FlFrame) {
    if !frame.is_null() {
        drop(unsafe { Box::from_raw(frame) });
    }
}

/// Dimension of the ambient space, or 0 for null.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_dim(frame: *const FlFrame) -> usize {
    unsafe { frame.as_ref() }.map_or(0, |f| f.0.dim())
}

/// Number of vectors, or 0 for null.
///
/// # Safety
/// `frame` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_len(frame: *const FlFrame) -> usize {
    unsafe { frame.as_ref() }.map_or(0, |f| f.0.len())
}

/// Copies the vectors row-major into `buf`, which holds `capacity` doubles.
///
/// # Safety
/// `buf` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_copy_vectors(frame: *const FlFrame, buf: *mut f64, capacity: usize) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let needed = frame.0.len() * frame.0.dim();
        if capacity < needed {
            return Err(Failure(FlStatus::BufferTooSmall, format!("need {needed} doubles, got {capacity}")));
        }
        if needed > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let dst = unsafe { std::slice::from_raw_parts_mut(buf, needed) };
            dst.iter_mut().zip(frame.0.vectors().iter().flatten()).for_each(|(d, s)| *d = *s);
        }
        Ok(())
    })
}

/// # Safety
/// Pointers must be live handles or writable structs.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_analyze(frame: *const FlFrame, out: *mut FlFrameReport) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let r = analyze_frame(&frame.0);
        *out = FlFrameReport {
            dim: r.dim,
            n: r.n,
            lower_bound: r.frame_bounds.0,
            upper_bound: r.frame_bounds.1,
            is_frame: r.is_frame,
            eps_parseval: or_nan(r.eps_parseval),
            eps_equal_norm: or_nan(r.eps_equal_norm),
            tightness_defect_hs: r.tightness_defect_hs,
            unit_defect_hs: r.unit_defect_hs,
            frame_potential: r.frame_potential,
        };
        Ok(())
    })
}

/// `sum_j |a_j - b_j|^2` square-rooted.
///
/// # Safety
/// Pointers must be live handles or a writable double.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_dist(a: *const FlFrame, b: *const FlFrame, out: *mut f64) -> FlStatus {
    guard(|| {
        let (a, b) = unsafe { (as_ref(a, "a")?, as_ref(b, "b")?) };
        *unsafe { out_ref(out, "out") }? = frame_dist(&a.0, &b.0)?;
        Ok(())
    })
}

unsafe fn emit_frame(frame: Frame, dist_sq: f64, out: *mut *mut FlFrame, dist_out: *mut f64) -> Result<(), Failure> {
    let slot = unsafe { out_ref(out, "out") }?;
    if let Some(d) = unsafe { dist_out.as_mut() } {
        *d = dist_sq;
    }
    *slot = boxed(FlFrame(frame));
    Ok(())
}

/// Closest Parseval frame. `dist_sq` may be null.
///
/// # Safety
/// Pointers must be live handles or writable slots.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_closest_parseval(
    frame: *const FlFrame,
    out: *mut *mut FlFrame,
    dist_sq: *mut f64,
) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let (g, d) = closest_parseval(&frame.0)?;
        unsafe { emit_frame(g, d, out, dist_sq) }
    })
}

/// Closest equal-norm frame with common norm `target` (NaN: mean norm).
///
/// # Safety
/// Pointers must be live handles or writable slots.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_closest_equal_norm(
    frame: *const FlFrame,
    target: f64,
    out: *mut *mut FlFrame,
    dist_sq: *mut f64,
) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let (g, d) = closest_equal_norm(&frame.0, (!target.is_nan()).then_some(target))?;
        unsafe { emit_frame(g, d, out, dist_sq) }
    })
}

/// Equal-norm Parseval frame near `frame`, certified to `tol`.
///
/// # Safety
/// Pointers must be live handles or writable slots.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_nearest_enp(
    frame: *const FlFrame,
    tol: f64,
    max_rounds: usize,
    out: *mut *mut FlFrame,
    dist_sq: *mut f64,
) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let r = nearest_enp_alternating(&frame.0, tol, max_rounds)?;
        unsafe { emit_frame(r.frame, r.dist_sq, out, dist_sq) }
    })
}

/// Naimark complement of a Parseval frame (Parseval within `tol`).
///
/// # Safety
/// Pointers must be live handles or writable slots.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_naimark(frame: *const FlFrame, tol: f64, out: *mut *mut FlFrame) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let c = naimark_complement(&frame.0, tol)?;
        unsafe { emit_frame(c, f64::NAN, out, ptr::null_mut()) }
    })
}

/// Defaults for a frame of `n` vectors: `t = 1/(4n)`.
#[no_mangle]
pub extern "C" fn fl_flow_default_config(n: usize) -> FlFlowConfig {
    let c = FlowConfig::for_len(n.max(1));
    FlFlowConfig { step_t: c.step_t, max_iters: c.max_iters, stop_defect: c.stop_defect, renormalize_every: 0 }
}

/// Runs the equalization flow on a unit-norm frame. `summary` may be null.
///
/// # Safety
/// Pointers must be live handles or writable slots.
#[no_mangle]
pub unsafe extern "C" fn fl_flow_run(
    frame: *const FlFrame,
    config: *const FlFlowConfig,
    out: *mut *mut FlFrame,
    summary: *mut FlFlowSummary,
) -> FlStatus {
    guard(|| {
        let frame = unsafe { as_ref(frame, "frame") }?;
        let c = unsafe { as_ref(config, "config") }?;
        let config = FlowConfig {
            max_iters: c.max_iters,
            stop_defect: c.stop_defect,
            renormalize_every: (c.renormalize_every > 0).then_some(c.renormalize_every),
            ..FlowConfig::new(c.step_t)
        };
        let (last, trace) = run_flow(&frame.0, &config)?;
        if let Some(s) = unsafe { summary.as_mut() } {
            *s = FlFlowSummary {
                final_iter: trace.final_iter,
                converged: trace.termination == Termination::Converged,
                unit_defect_hs: trace.last().unit_defect_hs,
                frame_potential: trace.last().frame_potential,
                coprime: trace.coprime,
                displacement: trace.displacement,
            };
        }
        unsafe { emit_frame(last, f64::NAN, out, ptr::null_mut()) }
    })
}

/// Builds an ASF over `l^p_dim` (`p` may be INFINITY) from `n` functionals
/// and `n` vectors, each row-major.
///
/// # Safety
/// `functionals` and `vectors` must point to `n * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_asf_new(
    dim: usize,
    p: f64,
    n: usize,
    functionals: *const f64,
    vectors: *const f64,
    out: *mut *mut FlAsf,
) -> FlStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        let fs = unsafe { read_rows(functionals, n, dim, "functionals") }?;
        let ts = unsafe { read_rows(vectors, n, dim, "vectors") }?;
        *out = boxed(FlAsf(Asf::new(PNormSpace::new(dim, p)?, fs, ts)?));
        Ok(())
    })
}

/// Releases an ASF. Null is ignored.
///
/// # Safety
/// `asf` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_asf_free(asf: *mut FlAsf) {
    if !asf.is_null() {
        drop(unsafe { Box::from_raw(asf) });
    }
}

/// # Safety
/// Pointers must be live handles or writable structs.
#[no_mangle]
pub unsafe extern "C" fn fl_asf_analyze(asf: *const FlAsf, tol: f64, out: *mut FlAsfReport) -> FlStatus {
    guard(|| {
        let asf = unsafe { as_ref(asf, "asf") }?;
        let out = unsafe { out_ref(out, "out") }?;
        if tol.is_nan() || tol < 0.0 {
            return Err(Failure(FlStatus::InvalidArgument, format!("tolerance {tol} must be non-negative")));
        }
        let r = analyze_asf(&asf.0, tol);
        *out = FlAsfReport {
            invertible: r.invertible,
            min_singular_value: r.min_singular_value,
            parseval: r.parseval,
            funtf: r.funtf,
            spectrum_real: r.spectrum_real,
            eps_parseval: or_nan(r.eps_parseval),
            eps_equal_norm: or_nan(r.eps_equal_norm),
        };
        Ok(())
    })
}

/// Default ASF distance, `(sum_j (|a_j - b_j|_p^2 + |f_j - g_j|_q^2) / 2)^(1/2)`.
///
/// # Safety
/// Pointers must be live handles or a writable double.
#[no_mangle]
pub unsafe extern "C" fn fl_asf_dist(a: *const FlAsf, b: *const FlAsf, out: *mut f64) -> FlStatus {
    guard(|| {
        let (a, b) = unsafe { (as_ref(a, "a")?, as_ref(b, "b")?) };
        *unsafe { out_ref(out, "out") }? = asf_dist(&a.0, &b.0, DistVariant::Default)?;
        Ok(())
    })
}

/// Certifies a `dim x dim` row-major matrix as a projection within `tol`.
///
/// # Safety
/// `matrix` must point to `dim * dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_projection_new(
    dim: usize,
    matrix: *const f64,
    orthogonal_required: bool,
    tol: f64,
    out: *mut *mut FlProjection,
) -> FlStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        let rows = unsafe { read_rows(matrix, dim, dim, "matrix") }?;
        let m = Matrix::from_rows(&rows)?;
        *out = boxed(FlProjection(certify_projection(&m, orthogonal_required, tol)?));
        Ok(())
    })
}

/// Releases a projection. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_projection_free(p: *mut FlProjection) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Rank of the projection, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_projection_rank(p: *const FlProjection) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.rank())
}

/// Chordal distance between equal-rank projections.
///
/// # Safety
/// Pointers must be live handles or a writable double.
#[no_mangle]
pub unsafe extern "C" fn fl_chordal_distance(
    p: *const FlProjection,
    q: *const FlProjection,
    tol: f64,
    out: *mut f64,
) -> FlStatus {
    guard(|| {
        let (p, q) = unsafe { (as_ref(p, "p")?, as_ref(q, "q")?) };
        *unsafe { out_ref(out, "out") }? = chordal_distance(&p.0, &q.0, tol)?;
        Ok(())
    })
}
