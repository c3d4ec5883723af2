//! C ABI for the annealing toolkit.
//!
//! Problems and runs are opaque handles created by `*_new` functions and
//! released with the matching `*_free`. Every fallible function returns a
//! [`MosarStatus`]; on failure [`mosar_last_error_message`] describes the
//! error for the calling thread. Point sets are passed as flat arrays of
//! interleaved `(f1, f2)` pairs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mosar::annealer::{Algorithm, Schedule};
use mosar::geometry::ExtentMode;
use mosar::harness::{self, RunResult, RunSpec};
use mosar::metrics::{self, ParetoSet};
use mosar::problems::{build_problem, Problem, ProblemKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MosarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    UnknownAlgorithm = 4,
    BufferTooSmall = 5,
    OutOfRange = 6,
    EmptyInput = 7,
    Panic = 8,
}

/// Options for [`mosar_run_new`]. Non-positive schedule fields and a zero
/// iteration count select the problem's default schedule.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MosarRunOptions {
    /// "srn", "tnk" or "config".
    pub problem: *const c_char,
    /// "amosa", "mosar1" or "mosar2".
    pub algorithm: *const c_char,
    pub seed: u64,
    /// Cube side length, used by "config" only.
    pub side_length: f64,
    pub t_max: f64,
    pub t_min: f64,
    pub alpha: f64,
    pub iters_per_temp: u32,
    /// Use the closed-form extent formulas instead of the exact envelope.
    pub closed_form_envelope: bool,
}

/// Opaque problem handle.
pub struct MosarProblem {
    inner: Box<dyn Problem>,
}

/// Opaque handle owning a finished run.
pub struct MosarRun {
    result: RunResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: MosarStatus, message: impl Into<String>) -> MosarStatus {
    set_error(message);
    status
}

fn status_of(e: &mosar::Error) -> MosarStatus {
    match e {
        mosar::Error::UnknownProblem(_) => MosarStatus::UnknownProblem,
        mosar::Error::UnknownAlgorithm(_) => MosarStatus::UnknownAlgorithm,
        mosar::Error::Empty(_) => MosarStatus::EmptyInput,
        _ => MosarStatus::InvalidArgument,
    }
}

fn from_error(e: mosar::Error) -> MosarStatus {
    fail(status_of(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> MosarStatus) -> MosarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MosarStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, MosarStatus> {
    if p.is_null() {
        return Err(fail(MosarStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(MosarStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn points_arg(p: *const f64, count: usize, what: &str) -> Result<ParetoSet, MosarStatus> {
    if count == 0 {
        return Ok(ParetoSet::default());
    }
    if p.is_null() {
        return Err(fail(MosarStatus::NullPointer, format!("{what} is null")));
    }
    let flat = std::slice::from_raw_parts(p, 2 * count);
    Ok(ParetoSet::new(flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect()))
}

fn envelope(closed_form: bool) -> ExtentMode {
    if closed_form {
        ExtentMode::ClosedForm
    } else {
        ExtentMode::Exact
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mosar_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a problem. `side_length` is ignored for the benchmarks.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_new(
    name: *const c_char,
    side_length: f64,
    closed_form_envelope: bool,
    out: *mut *mut MosarProblem,
) -> MosarStatus {
    guard(|| {
        if out.is_null() {
            return fail(MosarStatus::NullPointer, "out is null");
        }
        let name = match str_arg(name, "name") {
            Ok(n) => n,
            Err(s) => return s,
        };
        let problem = ProblemKind::from_name(name)
            .and_then(|kind| build_problem(kind, Some(side_length), envelope(closed_form_envelope)));
        match problem {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MosarProblem { inner }));
                MosarStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `problem` must be null or a handle from [`mosar_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_free(problem: *mut MosarProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of decision variables, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_dimension(problem: *const MosarProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.descriptor().dimension())
}

/// Length of the combined objective vector (objectives then violations).
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_objective_count(problem: *const MosarProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.descriptor().objective_count)
}

/// Number of trailing violation entries in the combined objective vector.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_constraint_count(problem: *const MosarProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.descriptor().constraint_count)
}

/// Evaluates `x` and writes the combined objective vector to `out`.
///
/// # Safety
/// `x` must point to `x_len` doubles and `out` to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mosar_problem_evaluate(
    problem: *const MosarProblem,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
    out_len: usize,
) -> MosarStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(MosarStatus::NullPointer, "problem is null");
        };
        if x.is_null() || out.is_null() {
            return fail(MosarStatus::NullPointer, "x or out is null");
        }
        let dim = p.inner.descriptor().dimension();
        if x_len != dim {
            return fail(MosarStatus::InvalidArgument, format!("expected {dim} variables, got {x_len}"));
        }
        let v = p.inner.evaluate(std::slice::from_raw_parts(x, x_len));
        if out_len < v.len() {
            return fail(MosarStatus::BufferTooSmall, format!("need {} outputs, got {out_len}", v.len()));
        }
        std::slice::from_raw_parts_mut(out, v.len()).copy_from_slice(v.values());
        MosarStatus::Ok
    })
}

/// Options with the given names, seed 0 and every schedule field defaulted.
#[no_mangle]
pub extern "C" fn mosar_run_options_default(problem: *const c_char, algorithm: *const c_char) -> MosarRunOptions {
    MosarRunOptions {
        problem,
        algorithm,
        seed: 0,
        side_length: 0.0,
        t_max: 0.0,
        t_min: 0.0,
        alpha: 0.0,
        iters_per_temp: 0,
        closed_form_envelope: false,
    }
}

unsafe fn spec_from(options: &MosarRunOptions) -> Result<RunSpec, MosarStatus> {
    let kind = ProblemKind::from_name(str_arg(options.problem, "problem")?).map_err(from_error)?;
    let algorithm = Algorithm::from_name(str_arg(options.algorithm, "algorithm")?).map_err(from_error)?;
    let side_length = (kind == ProblemKind::Config).then_some(options.side_length);
    if side_length.is_some_and(|s| !(s > 0.0)) {
        return Err(fail(MosarStatus::InvalidArgument, "config problem needs a positive side length"));
    }
    let mut spec = RunSpec::new(kind, side_length, algorithm, options.seed);
    spec.envelope = envelope(options.closed_form_envelope);
    let base = spec.run.schedule;
    let pick = |v: f64, d: f64| if v > 0.0 { v } else { d };
    spec.run.schedule = Schedule::new(
        pick(options.t_max, base.t_max),
        pick(options.t_min, base.t_min),
        pick(options.alpha, base.alpha),
        if options.iters_per_temp > 0 { options.iters_per_temp as usize } else { base.iters_per_temp },
    )
    .map_err(from_error)?;
    Ok(spec)
}

/// Runs one annealing run to completion.
///
/// # Safety
/// `options` must point to a valid [`MosarRunOptions`] whose strings are
/// NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_new(options: *const MosarRunOptions, out: *mut *mut MosarRun) -> MosarStatus {
    guard(|| {
        let Some(options) = options.as_ref() else {
            return fail(MosarStatus::NullPointer, "options is null");
        };
        if out.is_null() {
            return fail(MosarStatus::NullPointer, "out is null");
        }
        let spec = match spec_from(options) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match harness::solve(&spec) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(MosarRun { result }));
                MosarStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `run` must be null or a handle from [`mosar_run_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_free(run: *mut MosarRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_archive_len(run: *const MosarRun) -> usize {
    run.as_ref().map_or(0, |r| r.result.archive.len())
}

/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_feasible_count(run: *const MosarRun) -> usize {
    run.as_ref().map_or(0, |r| r.result.feasible_count())
}

/// Total evaluations including archive initialisation.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_evaluations(run: *const MosarRun) -> u64 {
    run.as_ref().map_or(0, |r| r.result.evaluations())
}

/// Copies archive entry `index`. Either output buffer may be null to skip it.
///
/// # Safety
/// Non-null buffers must hold the stated number of doubles; `feasible` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_entry(
    run: *const MosarRun,
    index: usize,
    decision: *mut f64,
    decision_len: usize,
    objectives: *mut f64,
    objectives_len: usize,
    feasible: *mut bool,
) -> MosarStatus {
    guard(|| {
        let Some(r) = run.as_ref() else {
            return fail(MosarStatus::NullPointer, "run is null");
        };
        let Some(e) = r.result.archive.get(index) else {
            return fail(
                MosarStatus::OutOfRange,
                format!("index {index} beyond archive of {}", r.result.archive.len()),
            );
        };
        for (buf, len, src) in [(decision, decision_len, &e.decision), (objectives, objectives_len, &e.objectives)] {
            if buf.is_null() {
                continue;
            }
            if len < src.len() {
                return fail(MosarStatus::BufferTooSmall, format!("need {} values, got {len}", src.len()));
            }
            std::slice::from_raw_parts_mut(buf, src.len()).copy_from_slice(src);
        }
        if let Some(f) = feasible.as_mut() {
            *f = e.feasible;
        }
        MosarStatus::Ok
    })
}

/// Writes the run's result file text (without wall-clock time) into `buf`
/// as a NUL-terminated string. `required` receives the size including NUL.
///
/// # Safety
/// `buf` must be null or hold `buf_len` bytes; `required` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_run_payload(
    run: *const MosarRun,
    buf: *mut c_char,
    buf_len: usize,
    required: *mut usize,
) -> MosarStatus {
    guard(|| {
        let Some(r) = run.as_ref() else {
            return fail(MosarStatus::NullPointer, "run is null");
        };
        let text = r.result.to_text(false);
        let need = text.len() + 1;
        if let Some(req) = required.as_mut() {
            *req = need;
        }
        if buf.is_null() || buf_len < need {
            return fail(MosarStatus::BufferTooSmall, format!("need {need} bytes"));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        *buf.add(text.len()) = 0;
        MosarStatus::Ok
    })
}

/// Inverted generational distance of `front` against `reference`. An empty
/// front yields infinity.
///
/// # Safety
/// Arrays hold `2 * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_igd(
    front: *const f64,
    front_count: usize,
    reference: *const f64,
    reference_count: usize,
    out: *mut f64,
) -> MosarStatus {
    guard(|| {
        let (pf, star) =
            match (points_arg(front, front_count, "front"), points_arg(reference, reference_count, "reference")) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(s), _) | (_, Err(s)) => return s,
            };
        write_metric(out, metrics::igd(&pf, &star))
    })
}

/// Normalised hypervolume of `front` with reference point 1.1 times the
/// componentwise maximum of `source`.
///
/// # Safety
/// Arrays hold `2 * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_hypervolume_2d(
    front: *const f64,
    front_count: usize,
    source: *const f64,
    source_count: usize,
    out: *mut f64,
) -> MosarStatus {
    guard(|| {
        let (pf, src) = match (points_arg(front, front_count, "front"), points_arg(source, source_count, "source")) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        write_metric(out, metrics::hypervolume_2d(&pf, &src))
    })
}

/// Fraction of `b` dominated by `a`.
///
/// # Safety
/// Arrays hold `2 * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_coverage(
    a: *const f64,
    a_count: usize,
    b: *const f64,
    b_count: usize,
    out: *mut f64,
) -> MosarStatus {
    guard(|| {
        let (sa, sb) = match (points_arg(a, a_count, "a"), points_arg(b, b_count, "b")) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        write_metric(out, Ok(metrics::coverage(&sa, &sb)))
    })
}

/// Minimal spacing standardised by the set's own objective ranges.
///
/// # Safety
/// `points` holds `2 * count` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mosar_minimal_spacing(points: *const f64, count: usize, out: *mut f64) -> MosarStatus {
    guard(|| match points_arg(points, count, "points") {
        Ok(ps) => write_metric(out, Ok(metrics::minimal_spacing_own(&ps))),
        Err(s) => s,
    })
}

unsafe fn write_metric(out: *mut f64, value: mosar::Result<f64>) -> MosarStatus {
    if out.is_null() {
        return fail(MosarStatus::NullPointer, "out is null");
    }
    match value {
        Ok(v) => {
            *out = v;
            MosarStatus::Ok
        }
        Err(e) => from_error(e),
    }
}
