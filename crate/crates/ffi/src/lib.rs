//! C ABI for orbitstab.
//!
//! Scenes are opaque handles. Every fallible call returns an
//! [`OrbitstabStatus`]; on failure `orbitstab_last_error` describes the
//! error on the calling thread. Strings returned through out-parameters are
//! owned by the caller and released with `orbitstab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use orbitstab::closure::CycleBounds;
use orbitstab::error::Error;
use orbitstab::orbit::cyclic_orbit;
use orbitstab::scene::{Bounds, Scene};
use orbitstab::stabilizer::{cyclic_orbit_stabilizer, dynamical_degree, membership, MembershipVerdict};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitstabStatus {
    Ok = 0,
    ParseError = 1,
    HypothesisNotMet = 2,
    SizeLimit = 3,
    InvalidArgument = 4,
    NullPointer = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitstabVerdict {
    In = 0,
    Out = 1,
    VerifiedUpToBound = 2,
}

/// A parsed scene file.
pub struct OrbitstabScene {
    scene: Scene,
    bounds: Bounds,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbitstabStatus {
    match e {
        Error::Parse { .. } => OrbitstabStatus::ParseError,
        Error::HypothesisNotMet(_) | Error::CycleNotResolved(_) => OrbitstabStatus::HypothesisNotMet,
        Error::SizeLimit { .. } => OrbitstabStatus::SizeLimit,
        _ => OrbitstabStatus::InvalidArgument,
    }
}

struct Fail(OrbitstabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status and the thread's
/// last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OrbitstabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbitstabStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error (panic)");
            OrbitstabStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(OrbitstabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(OrbitstabStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn scene_arg<'a>(p: *const OrbitstabScene) -> Result<&'a OrbitstabScene, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(OrbitstabStatus::NullPointer, "scene is null".into()))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(OrbitstabStatus::Internal, "output contains a nul byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(OrbitstabStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn wrap(scene: Scene) -> *mut OrbitstabScene {
    let bounds = scene.options.resolve();
    Box::into_raw(Box::new(OrbitstabScene { scene, bounds }))
}

/// Loads a scene file.
///
/// # Safety
/// `path` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_scene_load(path: *const c_char, out: *mut *mut OrbitstabScene) -> OrbitstabStatus {
    guard(|| {
        check_out(out, "out")?;
        let path = str_arg(path, "path")?;
        *out = wrap(Scene::load(Path::new(path))?);
        Ok(())
    })
}

/// Parses a scene from a JSON document.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_scene_parse(json: *const c_char, out: *mut *mut OrbitstabScene) -> OrbitstabStatus {
    guard(|| {
        check_out(out, "out")?;
        let src = str_arg(json, "json")?;
        *out = wrap(Scene::parse(src)?);
        Ok(())
    })
}

/// Releases a scene; null is ignored.
///
/// # Safety
/// `scene` must come from `orbitstab_scene_load` or `orbitstab_scene_parse`
/// and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_scene_free(scene: *mut OrbitstabScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

fn cycle_bounds(b: &Bounds) -> CycleBounds {
    CycleBounds {
        n: b.n,
        d: b.d,
        lmax: b.lmax,
        bit_cap: b.bit_cap,
    }
}

/// Stabilizer descriptor (JSON) of the orbit of `point` under `aut`.
///
/// # Safety
/// Pointers must be valid; `*out_json` must be released with
/// `orbitstab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_cyclic_stabilizer(
    scene: *const OrbitstabScene,
    aut: *const c_char,
    point: *const c_char,
    out_json: *mut *mut c_char,
) -> OrbitstabStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        let s = scene_arg(scene)?;
        let phi = s.scene.automorphism(str_arg(aut, "aut")?)?;
        let p = s.scene.point(str_arg(point, "point")?)?;
        let d = cyclic_orbit_stabilizer(phi, p, cycle_bounds(&s.bounds), 2 * s.bounds.n)?;
        out_string(d.to_json().to_string(), out_json)
    })
}

/// Whether `psi` maps the orbit of `point` under `aut` onto itself.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_membership(
    scene: *const OrbitstabScene,
    aut: *const c_char,
    point: *const c_char,
    psi: *const c_char,
    out_verdict: *mut OrbitstabVerdict,
) -> OrbitstabStatus {
    guard(|| {
        check_out(out_verdict, "out_verdict")?;
        let s = scene_arg(scene)?;
        let phi = s.scene.automorphism(str_arg(aut, "aut")?)?;
        let p = s.scene.point(str_arg(point, "point")?)?;
        let psi = s.scene.automorphism(str_arg(psi, "psi")?)?;
        let orbit = cyclic_orbit(phi, p, s.bounds.n, s.bounds.bit_cap)?;
        let stab = cyclic_orbit_stabilizer(phi, p, cycle_bounds(&s.bounds), 2 * s.bounds.n).ok();
        *out_verdict = match membership(psi, &orbit, stab.as_ref()).verdict {
            MembershipVerdict::In => OrbitstabVerdict::In,
            MembershipVerdict::Out => OrbitstabVerdict::Out,
            MembershipVerdict::VerifiedUpToBound => OrbitstabVerdict::VerifiedUpToBound,
        };
        Ok(())
    })
}

/// Degrees of aut, aut², ..., aut^m written to `out_degrees` (length m).
///
/// # Safety
/// `out_degrees` must have room for `m` values.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_dynamical_degree(
    scene: *const OrbitstabScene,
    aut: *const c_char,
    m: usize,
    out_degrees: *mut u32,
) -> OrbitstabStatus {
    guard(|| {
        check_out(out_degrees, "out_degrees")?;
        let s = scene_arg(scene)?;
        let phi = s.scene.automorphism(str_arg(aut, "aut")?)?;
        let dd = dynamical_degree(phi, m, s.bounds.bit_cap)?;
        ptr::copy_nonoverlapping(dd.degrees.as_ptr(), out_degrees, dd.degrees.len());
        Ok(())
    })
}

/// Runs a command line (`argv[0]` is the program name) and returns its JSON
/// report and exit status. The status of the call itself is `Ok` whenever a
/// report was produced, including error reports.
///
/// # Safety
/// `argv` must hold `argc` valid strings; `*out_json` must be released with
/// `orbitstab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_run(
    argc: c_int,
    argv: *const *const c_char,
    out_json: *mut *mut c_char,
    out_exit_code: *mut c_int,
) -> OrbitstabStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        check_out(out_exit_code, "out_exit_code")?;
        if argv.is_null() || argc < 1 {
            return Err(Fail(OrbitstabStatus::NullPointer, "argv is empty".into()));
        }
        let args = (0..argc as usize)
            .map(|i| str_arg(*argv.add(i), "argv entry").map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        let out = orbitstab::cli::run(args);
        *out_exit_code = out.code;
        out_string(out.stdout, out_json)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orbitstab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn orbitstab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn orbitstab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
