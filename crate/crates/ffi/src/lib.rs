//! C ABI for opnodal.
//!
//! Every fallible function returns an [`OpnStatus`]; on failure the message
//! is available from [`opn_last_error`] on the same thread. Strings returned
//! through `char **` out-parameters are owned by the caller and released with
//! [`opn_string_free`]. Trajectories are opaque handles released with
//! [`opn_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use opnodal::atlas::{ChartPoint, Params, PainleveType};
use opnodal::flow::{self, IntegratorConfig, PathSpec, Status, Trajectory};
use opnodal::{riccati, rootlat, verify};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    DomainError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpnComplex {
    pub re: f64,
    pub im: f64,
}

impl From<OpnComplex> for Complex64 {
    fn from(z: OpnComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for OpnComplex {
    fn from(z: Complex64) -> Self {
        OpnComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OpnSample {
    pub t: OpnComplex,
    pub chart: u32,
    pub x: OpnComplex,
    pub y: OpnComplex,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpnIntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Chart switching threshold.
    pub rho: f64,
    pub min_puncture_distance: f64,
    pub max_steps: u64,
}

impl From<IntegratorConfig> for OpnIntegratorConfig {
    fn from(c: IntegratorConfig) -> Self {
        OpnIntegratorConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step: c.max_step,
            rho: c.rho,
            min_puncture_distance: c.min_puncture_distance,
            max_steps: c.max_steps as u64,
        }
    }
}

impl From<OpnIntegratorConfig> for IntegratorConfig {
    fn from(c: OpnIntegratorConfig) -> Self {
        IntegratorConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step: c.max_step,
            rho: c.rho,
            min_puncture_distance: c.min_puncture_distance,
            max_steps: usize::try_from(c.max_steps).unwrap_or(usize::MAX),
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpnTrajectoryStatus {
    Completed = 0,
    StepLimit = 1,
    NoChartAvailable = 2,
}

/// An integrated trajectory.
pub struct OpnTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OpnStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure(OpnStatus::DomainError, e.to_string())
}

fn invalid<E: std::fmt::Display>(e: E) -> Failure {
    Failure(OpnStatus::InvalidArgument, e.to_string())
}

/// Runs `f`, records its error and converts panics into `Panic`.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> OpnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OpnStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OpnStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(OpnStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(OpnStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, n: usize, name: &str) -> FfiResult<&'a [T]> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(OpnStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn out_arg<T>(p: *mut T, name: &str) -> FfiResult<()> {
    if p.is_null() {
        Err(Failure(OpnStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    out_arg(out, "out")?;
    *out = CString::new(s).map_err(invalid)?.into_raw();
    Ok(())
}

fn painleve_type(s: &str) -> FfiResult<PainleveType> {
    s.parse().map_err(invalid)
}

unsafe fn params_arg(pt: PainleveType, p: *const OpnComplex, n: usize) -> FfiResult<Params> {
    let values = slice_arg(p, n, "params")?.iter().map(|&z| z.into()).collect();
    Params::new(pt, values).map_err(invalid)
}

unsafe fn path_arg(p: *const OpnComplex, n: usize) -> FfiResult<PathSpec> {
    PathSpec::new(slice_arg(p, n, "path")?.iter().map(|&z| z.into()).collect()).map_err(invalid)
}

unsafe fn config_arg(cfg: *const OpnIntegratorConfig) -> IntegratorConfig {
    if cfg.is_null() {
        IntegratorConfig::default()
    } else {
        (*cfg).into()
    }
}

unsafe fn handle<'a>(h: *const OpnTrajectory) -> FfiResult<&'a Trajectory> {
    if h.is_null() {
        return Err(Failure(OpnStatus::NullPointer, "trajectory is null".into()));
    }
    Ok(&(*h).inner)
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this
/// thread.
#[no_mangle]
pub extern "C" fn opn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn opn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the default integrator settings.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_default_config(out: *mut OpnIntegratorConfig) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = IntegratorConfig::default().into();
        Ok(())
    })
}

/// Classification table 2, 3 or 4 as JSON.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_table_json(table: u32, out: *mut *mut c_char) -> OpnStatus {
    guard(|| {
        let t = match table {
            2 => rootlat::table2(),
            3 => rootlat::table3(),
            4 => rootlat::table4(),
            _ => return Err(invalid(format!("no table {table}"))),
        };
        write_string(out, t.to_json())
    })
}

/// E8 roots spanning `root_type` (e.g. `"D4+A1^4"`) as a JSON array of
/// doubled coordinates.
///
/// # Safety
/// `root_type` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_embedding_json(root_type: *const c_char, out: *mut *mut c_char) -> OpnStatus {
    guard(|| {
        let t: rootlat::RootSystemType = str_arg(root_type, "root_type")?.parse().map_err(invalid)?;
        let e = rootlat::find_embedding(&t).map_err(domain)?;
        write_string(out, serde_json::to_string(&e.vectors).map_err(domain)?)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_moduli_dim(r: i64, s: i64, out: *mut i64) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = rootlat::moduli_dim(r, s).map_err(domain)?;
        Ok(())
    })
}

/// Riccati loci of a Painleve type (`"E6"`, `"D4~"`, ...) as JSON.
///
/// # Safety
/// `painleve` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_riccati_catalog_json(painleve: *const c_char, out: *mut *mut c_char) -> OpnStatus {
    guard(|| {
        let pt = painleve_type(str_arg(painleve, "painleve")?)?;
        write_string(out, riccati::catalog_json(pt).to_string())
    })
}

/// Active loci and their configuration type at the given parameters, as
/// JSON `{"active": [...], "configuration": "..."}`.
///
/// # Safety
/// `painleve` must be a nul-terminated string, `params` must point to
/// `n_params` values and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_config_json(
    painleve: *const c_char,
    params: *const OpnComplex,
    n_params: usize,
    out: *mut *mut c_char,
) -> OpnStatus {
    guard(|| {
        let pt = painleve_type(str_arg(painleve, "painleve")?)?;
        let p = params_arg(pt, params, n_params)?;
        let r = riccati::config_at_params(&p).map_err(domain)?;
        let v = serde_json::json!({"active": r.active, "configuration": r.root_type});
        write_string(out, v.to_string())
    })
}

/// Integrates the Painleve system of `painleve` from `(x, y)` in `chart`
/// along the waypoints `path`. A null `cfg` selects the defaults. The
/// trajectory is returned even when its status is not `Completed`.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn opn_integrate(
    painleve: *const c_char,
    params: *const OpnComplex,
    n_params: usize,
    chart: u32,
    x: OpnComplex,
    y: OpnComplex,
    path: *const OpnComplex,
    n_path: usize,
    cfg: *const OpnIntegratorConfig,
    out: *mut *mut OpnTrajectory,
) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        let pt = painleve_type(str_arg(painleve, "painleve")?)?;
        let p = params_arg(pt, params, n_params)?;
        let path = path_arg(path, n_path)?;
        let init = ChartPoint::new(chart as usize, x.into(), y.into());
        let traj = flow::integrate_atlas(&p, &path, init, &config_arg(cfg)).map_err(domain)?;
        *out = Box::into_raw(Box::new(OpnTrajectory { inner: traj }));
        Ok(())
    })
}

/// Integrates the scalar Riccati equation on `locus`, directly or through
/// its linearization. Samples store the value on chart 0 (`x`) or chart 1
/// (`1/x`) in their `x` field.
///
/// # Safety
/// As for [`opn_integrate`]; `locus` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn opn_riccati_solve(
    painleve: *const c_char,
    locus: *const c_char,
    params: *const OpnComplex,
    n_params: usize,
    x0: OpnComplex,
    path: *const OpnComplex,
    n_path: usize,
    linear: bool,
    cfg: *const OpnIntegratorConfig,
    out: *mut *mut OpnTrajectory,
) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        let pt = painleve_type(str_arg(painleve, "painleve")?)?;
        let l = riccati::find_locus(pt, str_arg(locus, "locus")?).map_err(domain)?;
        let p = params_arg(pt, params, n_params)?;
        if !l.constraint.holds(p.values()) {
            return Err(domain(riccati::RiccatiError::ConstraintViolated(l.constraint.render(pt))));
        }
        let ode = riccati::reduce(l).instantiate(&p).map_err(domain)?;
        let path = path_arg(path, n_path)?;
        let cfg = config_arg(cfg);
        let traj = if linear {
            riccati::solve_via_linear(&ode, x0.into(), &path, &cfg)
        } else {
            flow::integrate_riccati(&ode, &path, x0.into(), &cfg)
        }
        .map_err(domain)?;
        *out = Box::into_raw(Box::new(OpnTrajectory { inner: traj }));
        Ok(())
    })
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_len(h: *const OpnTrajectory) -> usize {
    handle(h).map_or(0, |t| t.samples.len())
}

/// Number of chart switches.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_switch_count(h: *const OpnTrajectory) -> usize {
    handle(h).map_or(0, |t| t.events.len())
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_sample(h: *const OpnTrajectory, index: usize, out: *mut OpnSample) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        let t = handle(h)?;
        let s = t.samples.get(index).ok_or_else(|| invalid(format!("index {index} out of range")))?;
        *out = OpnSample { t: s.t.into(), chart: s.chart as u32, x: s.x.into(), y: s.y.into() };
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_status(h: *const OpnTrajectory, out: *mut OpnTrajectoryStatus) -> OpnStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = match handle(h)?.status {
            Status::Completed => OpnTrajectoryStatus::Completed,
            Status::StepLimit => OpnTrajectoryStatus::StepLimit,
            Status::NoChartAvailable => OpnTrajectoryStatus::NoChartAvailable,
        };
        Ok(())
    })
}

/// The trajectory as CSV with header `t_re,t_im,chart,x_re,x_im,y_re,y_im`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_csv(h: *const OpnTrajectory, out: *mut *mut c_char) -> OpnStatus {
    guard(|| write_string(out, handle(h)?.to_csv()))
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `h` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn opn_trajectory_free(h: *mut OpnTrajectory) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs every reproducibility check with `seed`. Writes the number of
/// passing checks to `passed` and their results as JSON to `out`.
///
/// # Safety
/// `passed` and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opn_verify_all(seed: u64, passed: *mut u32, out: *mut *mut c_char) -> OpnStatus {
    guard(|| {
        out_arg(passed, "passed")?;
        let results = verify::run_all(seed);
        *passed = results.iter().filter(|r| r.passed).count() as u32;
        write_string(out, serde_json::to_string(&results).map_err(domain)?)
    })
}
