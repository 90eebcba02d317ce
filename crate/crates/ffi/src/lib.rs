//! C ABI for `chipfire`.
//!
//! Objects cross the boundary as opaque handles created by `cf_*_new`-style
//! constructors and released with the matching `cf_*_free`. Every fallible
//! call returns a `CfStatus`; on failure `cf_last_error()` describes the
//! problem until the next failing call on the same thread. Rust panics are
//! caught and reported as `CF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chipfire::chip_core::{default_budget, simulate_to_cycle, ChipConfig};
use chipfire::circle_lift::{
    lift_from_cdf, lift_from_config, rotation_number_from_orbit, rotation_number_numeric,
    stair_interval, CdfSpec, ExactLift, RotationOptions, Q,
};
use chipfire::laws::{check_suite, FamilySpec, LawParams};
use chipfire::staircase::{phase_diagram, PhaseDiagram};
use chipfire::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    NotPreconfined = 4,
    DegenerateStair = 5,
    UnknownLaw = 6,
    Io = 7,
    Overflow = 8,
    Panic = 9,
}

/// A chip configuration on `K_n`.
pub struct CfConfig(ChipConfig);

/// The exact lift of a preconfined configuration.
pub struct CfLift(ExactLift);

/// A phase diagram `k ↦ a(σ_n + k)`, `k = 0..=n`.
pub struct CfDiagram(PhaseDiagram);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfSummary {
    pub n: usize,
    pub transient: u64,
    pub period: u64,
    pub activity_num: u64,
    pub activity_den: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfRow {
    pub k: u64,
    pub activity_num: u64,
    pub activity_den: u64,
    pub period: u64,
    pub transient: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CfRotation {
    pub lower: f64,
    pub upper: f64,
    /// True when `num/den` is certified.
    pub snapped: bool,
    pub num: u64,
    pub den: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CfStair {
    pub a: f64,
    pub b: f64,
    pub width: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded { .. } | Error::BudgetExceededAt { .. } => {
                CfStatus::BudgetExceeded
            }
            Error::NotPreconfined { .. } => CfStatus::NotPreconfined,
            Error::DegenerateStair { .. } => CfStatus::DegenerateStair,
            Error::UnknownLaw(_) => CfStatus::UnknownLaw,
            Error::Io(_) | Error::Csv(_) => CfStatus::Io,
            _ => CfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CfStatus::NullPointer, format!("{what} is null"))
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CfStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn to_i64(x: i128) -> Result<i64, Failure> {
    i64::try_from(x)
        .map_err(|_| Failure(CfStatus::Overflow, format!("{x} does not fit in 64 bits")))
}

/// Message for the last failing call on this thread; empty if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `n` heights into a new configuration.
///
/// # Safety
/// `heights` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_config_new(
    heights: *const u64,
    n: usize,
    out: *mut *mut CfConfig,
) -> CfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        if heights.is_null() && n > 0 {
            return Err(null("heights"));
        }
        let slice = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(heights, n)
        };
        *out = Box::into_raw(Box::new(CfConfig(ChipConfig::new(slice.to_vec())?)));
        Ok(())
    })
}

/// `σ_n + k` for a family named `slope2`, `constant:<c>` or `pq:<p>/<q>`.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_config_family(
    family: *const c_char,
    n: usize,
    k: u64,
    out: *mut *mut CfConfig,
) -> CfStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec: FamilySpec = str_arg(family, "family")?.parse()?;
        *out = Box::into_raw(Box::new(CfConfig(spec.config(n)?.add_to_all(k)?)));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from a `cf_config_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn cf_config_free(cfg: *mut CfConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `cfg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cf_config_n(cfg: *const CfConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.0.n())
}

/// Copies the heights into `buf`, which must hold at least `n` values.
///
/// # Safety
/// `cfg` must be a live handle; `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn cf_config_heights(
    cfg: *const CfConfig,
    buf: *mut u64,
    len: usize,
) -> CfStatus {
    guard(|| {
        let c = &ref_arg(cfg, "cfg")?.0;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < c.n() {
            return Err(Failure(
                CfStatus::InvalidArgument,
                format!("buffer holds {len} values, need {}", c.n()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, c.n()).copy_from_slice(c.heights());
        Ok(())
    })
}

/// Applies one parallel update in place; `fired` (optional) receives the
/// number of vertices that fired.
///
/// # Safety
/// `cfg` must be a live handle; `fired` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn cf_config_update(cfg: *mut CfConfig, fired: *mut usize) -> CfStatus {
    guard(|| {
        let c = out_arg(cfg, "cfg")?;
        let (next, r) = c.0.update();
        c.0 = next;
        if let Some(f) = fired.as_mut() {
            *f = r;
        }
        Ok(())
    })
}

/// Runs to the eventual cycle; `max_steps = 0` uses the default budget.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_simulate(
    cfg: *const CfConfig,
    max_steps: u64,
    out: *mut CfSummary,
) -> CfStatus {
    guard(|| {
        let c = &ref_arg(cfg, "cfg")?.0;
        let out = out_arg(out, "out")?;
        let budget = if max_steps == 0 {
            default_budget(c.n())
        } else {
            max_steps
        };
        let s = simulate_to_cycle(c, budget)?;
        *out = CfSummary {
            n: s.n,
            transient: s.transient,
            period: s.period,
            activity_num: s.activity.num(),
            activity_den: s.activity.den(),
        };
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_lift_from_config(
    cfg: *const CfConfig,
    out: *mut *mut CfLift,
) -> CfStatus {
    guard(|| {
        let c = &ref_arg(cfg, "cfg")?.0;
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(CfLift(lift_from_config(c)?)));
        Ok(())
    })
}

/// # Safety
/// `lift` must come from `cf_lift_from_config`, or be null.
#[no_mangle]
pub unsafe extern "C" fn cf_lift_free(lift: *mut CfLift) {
    if !lift.is_null() {
        drop(Box::from_raw(lift));
    }
}

/// `f^t(0)` as the reduced fraction `num/den`.
///
/// # Safety
/// `lift` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_lift_iterate_zero(
    lift: *const CfLift,
    t: u64,
    num: *mut i64,
    den: *mut i64,
) -> CfStatus {
    guard(|| {
        let f = &ref_arg(lift, "lift")?.0;
        let (num, den) = (out_arg(num, "num")?, out_arg(den, "den")?);
        let x = f.iterate(Q::from_integer(0), t);
        *num = to_i64(*x.numer())?;
        *den = to_i64(*x.denom())?;
        Ok(())
    })
}

/// The exact rotation number from the orbit of 0, following at most
/// `max_iter` iterates (0 means 2^20).
///
/// # Safety
/// `lift` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_lift_rotation_number(
    lift: *const CfLift,
    max_iter: u64,
    num: *mut u64,
    den: *mut u64,
) -> CfStatus {
    guard(|| {
        let f = &ref_arg(lift, "lift")?.0;
        let (num, den) = (out_arg(num, "num")?, out_arg(den, "den")?);
        let limit = if max_iter == 0 { 1 << 20 } else { max_iter };
        let r = rotation_number_from_orbit(f, limit).ok_or_else(|| {
            Failure(
                CfStatus::BudgetExceeded,
                format!("orbit did not close within {limit} iterates"),
            )
        })?;
        *num = r.num();
        *den = r.den();
        Ok(())
    })
}

fn cdf_arg(name: &str) -> Result<CdfSpec, Failure> {
    Ok(CdfSpec::builtin(name)?)
}

/// `ρ(Φ_y)` for a built-in CDF (`slope2`, `sqrt`, `sine`, `identity`).
///
/// # Safety
/// `cdf` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_rotation_cdf(
    cdf: *const c_char,
    y: f64,
    out: *mut CfRotation,
) -> CfStatus {
    guard(|| {
        let spec = cdf_arg(str_arg(cdf, "cdf")?)?;
        let out = out_arg(out, "out")?;
        let opts = RotationOptions::default();
        let est = rotation_number_numeric(&lift_from_cdf(&spec, y, opts.cdf_grid)?, &opts);
        *out = CfRotation {
            lower: est.lower,
            upper: est.upper,
            snapped: est.snapped.is_some(),
            num: est.snapped.map_or(0, |r| r.num()),
            den: est.snapped.map_or(0, |r| r.den()),
        };
        Ok(())
    })
}

/// The stair `{y : ρ(Φ_y) = p/q}` with endpoints within `tol`.
///
/// # Safety
/// `cdf` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_stair_interval(
    cdf: *const c_char,
    p: u64,
    q: u64,
    tol: f64,
    out: *mut CfStair,
) -> CfStatus {
    guard(|| {
        let spec = cdf_arg(str_arg(cdf, "cdf")?)?;
        let out = out_arg(out, "out")?;
        let s = stair_interval(&spec, p, q, tol, &RotationOptions::default())?;
        *out = CfStair {
            a: s.a,
            b: s.b,
            width: s.width,
        };
        Ok(())
    })
}

/// `budget = 0` uses the default per-`k` budget.
///
/// # Safety
/// `family` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_phase_diagram(
    family: *const c_char,
    n: usize,
    budget: u64,
    out: *mut *mut CfDiagram,
) -> CfStatus {
    guard(|| {
        let spec: FamilySpec = str_arg(family, "family")?.parse()?;
        let out = out_arg(out, "out")?;
        let d = phase_diagram(&spec, n, (budget > 0).then_some(budget))?;
        *out = Box::into_raw(Box::new(CfDiagram(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must come from `cf_phase_diagram`, or be null.
#[no_mangle]
pub unsafe extern "C" fn cf_diagram_free(d: *mut CfDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of rows (`n + 1`); 0 for a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cf_diagram_len(d: *const CfDiagram) -> usize {
    d.as_ref().map_or(0, |d| d.0.rows.len())
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_diagram_row(
    d: *const CfDiagram,
    index: usize,
    out: *mut CfRow,
) -> CfStatus {
    guard(|| {
        let d = &ref_arg(d, "diagram")?.0;
        let out = out_arg(out, "out")?;
        let r = d.rows.get(index).ok_or_else(|| {
            Failure(
                CfStatus::InvalidArgument,
                format!("row {index} of {}", d.rows.len()),
            )
        })?;
        *out = CfRow {
            k: r.k,
            activity_num: r.activity.num(),
            activity_den: r.activity.den(),
            period: r.period,
            transient: r.transient,
        };
        Ok(())
    })
}

/// Runs a law suite (`all` or a law name). `json_out` receives the report,
/// to be released with `cf_string_free`; `passed` is set when every law held.
///
/// # Safety
/// `suite` must be a NUL-terminated string; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_check_laws(
    suite: *const c_char,
    n_min: usize,
    n_max: usize,
    trials: usize,
    seed: u64,
    json_out: *mut *mut c_char,
    passed: *mut bool,
) -> CfStatus {
    guard(|| {
        let suite = str_arg(suite, "suite")?;
        let json_out = out_arg(json_out, "json_out")?;
        let passed = out_arg(passed, "passed")?;
        let params = LawParams {
            n_min,
            n_max,
            trials,
            seed,
        };
        let reports = check_suite(suite, &params)?;
        let text = serde_json::to_string(&reports)
            .map_err(|e| Failure(CfStatus::InvalidArgument, e.to_string()))?;
        *passed = reports.iter().all(|r| r.passed);
        *json_out = CString::new(text).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
