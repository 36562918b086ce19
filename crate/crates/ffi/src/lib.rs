//! C interface to `weierfm`.
//!
//! Every function returns a [`WfStatus`]. Structured results are written as
//! JSON strings (rationals as `"p/q"`) into `*out`, owned by the caller and
//! released with [`wf_string_free`]. Surface models live behind the opaque
//! [`WfModel`] handle. On failure [`wf_last_error`] describes what went wrong
//! on the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use weierfm::duality::{duality_decision, engine_conclusion, SheafScenario};
use weierfm::fm::{commutativity_check, dual_char, slope, transform_char, KernelChoice, LineBundleX, Polarization, TruncatedChar, WitType};
use weierfm::presets::Preset;
use weierfm::ring::{x_integrate, LatticeVector, SurfaceModel, ThreefoldClass};
use weierfm::stability::{certify, enumerate_candidates, transform_stability, Bounds, DestabilizerCandidate};
use weierfm::Error;

/// Result of every call. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfStatus {
    Ok = 0,
    /// Malformed or inconsistent input.
    InputError = 1,
    /// A hypothesis of the requested result does not hold.
    HypothesisViolation = 2,
    /// An internal consistency check failed.
    InternalError = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// The engine panicked; the call had no effect.
    Panic = 5,
}

/// A surface model together with its default ample class, if any.
pub struct WfModel {
    model: SurfaceModel,
    default_h: Option<LatticeVector>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Engine(Error),
    Null(&'static str),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            WfStatus::Ok
        }
        Ok(Err(failure)) => {
            let (status, msg) = match failure {
                Failure::Engine(e) => {
                    let status = match e.exit_code() {
                        2 => WfStatus::HypothesisViolation,
                        3 => WfStatus::InternalError,
                        _ => WfStatus::InputError,
                    };
                    (status, e.to_string())
                }
                Failure::Null(what) => (WfStatus::NullPointer, format!("{what} must not be null")),
                Failure::Input(msg) => (WfStatus::InputError, msg),
            };
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            WfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Input(format!("{what} is not valid UTF-8")))
}

unsafe fn optional_text<'a>(p: *const c_char, what: &'static str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

fn parse<T: DeserializeOwned>(json: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(json).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

unsafe fn model_ref<'a>(p: *const WfModel) -> Result<&'a WfModel, Failure> {
    p.as_ref().ok_or(Failure::Null("model"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure::Input("output contains a nul byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_json<T: Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure::Engine(Error::InvariantBreach(e.to_string())))?;
    write_string(out, s)
}

fn kernel(name: Option<&str>) -> Result<KernelChoice, Failure> {
    name.map_or(Ok(KernelChoice::Standard), |n| n.parse().map_err(Failure::Engine))
}

unsafe fn bundle(model: &SurfaceModel, m: i64, twist_json: *const c_char) -> Result<LineBundleX, Failure> {
    let lb = match optional_text(twist_json, "twist")? {
        Some(t) => LineBundleX::new(m, parse(t, "twist")?),
        None => LineBundleX::untwisted(m, model.picard_rank()),
    };
    model.check_vector(&lb.twist)?;
    Ok(lb)
}

unsafe fn polarization(h: &WfModel, pol_json: *const c_char) -> Result<Polarization, Failure> {
    let pol: Polarization = parse(text(pol_json, "polarization")?, "polarization")?;
    h.model.check_vector(&pol.h)?;
    pol.validate(&h.model)?;
    Ok(pol)
}

fn scenario(n: u32, c: u32, wit: u8, dim_shift: i32) -> Result<SheafScenario, Failure> {
    let wit = match wit {
        0 => WitType::Wit0,
        1 => WitType::Wit1,
        other => return Err(Failure::Input(format!("wit must be 0 or 1, got {other}"))),
    };
    Ok(SheafScenario::new(n, c, wit, dim_shift))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn wf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a built-in surface: `k3_quartic`, `enriques` or `general_demo`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_model_from_preset(name: *const c_char, out: *mut *mut WfModel) -> WfStatus {
    guard(|| {
        let preset: Preset = text(name, "name")?.parse()?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let handle = WfModel { model: preset.model(), default_h: Some(preset.default_ample()) };
        *out = Box::into_raw(Box::new(handle));
        Ok(())
    })
}

/// Loads a surface model from its JSON form. Such a model has no default
/// ample class.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wf_model_from_json(json: *const c_char, out: *mut *mut WfModel) -> WfStatus {
    guard(|| {
        let model: SurfaceModel = serde_json::from_str(text(json, "json")?).map_err(|e| Failure::Input(format!("model: {e}")))?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = Box::into_raw(Box::new(WfModel { model, default_h: None }));
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wf_model_free(model: *mut WfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// JSON form of a model.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_model_to_json(model: *const WfModel, out: *mut *mut c_char) -> WfStatus {
    guard(|| write_json(out, &model_ref(model)?.model))
}

/// Default polarization `ω = Θ + p*H_S` as JSON, for preset models only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_model_default_polarization(model: *const WfModel, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let ample = h.default_h.clone().ok_or_else(|| Failure::Input("this model has no default ample class".into()))?;
        let pol = Polarization::new(&h.model, 1.into(), 1.into(), ample)?;
        write_json(out, &pol)
    })
}

/// Transform of `O_X(mΘ) ⊗ p*N`: character, WIT type and local freeness.
/// `twist_json` (a JSON array of rationals) and `kernel` (`"standard"` or
/// `"untwisted"`) may be null.
///
/// # Safety
/// Pointers must be valid; optional ones may be null.
#[no_mangle]
pub unsafe extern "C" fn wf_transform(
    model: *const WfModel,
    m: i64,
    twist_json: *const c_char,
    kernel_name: *const c_char,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let lb = bundle(&h.model, m, twist_json)?;
        let k = kernel(optional_text(kernel_name, "kernel")?)?;
        write_json(out, &transform_char(&h.model, &lb, k)?)
    })
}

/// Slope `μ_ω` of a character, written as a `"p/q"` string.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_slope(
    model: *const WfModel,
    char_json: *const c_char,
    pol_json: *const c_char,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let v: TruncatedChar = parse(text(char_json, "character")?, "character")?;
        let pol = polarization(h, pol_json)?;
        write_string(out, slope(&h.model, &v, &pol)?.to_wire())
    })
}

/// Character of the derived dual.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_dual_char(char_json: *const c_char, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let v: TruncatedChar = parse(text(char_json, "character")?, "character")?;
        write_json(out, &dual_char(&v))
    })
}

/// Character-level check that duality commutes with the transform.
///
/// # Safety
/// Pointers must be valid; `twist_json` and `kernel_name` may be null.
#[no_mangle]
pub unsafe extern "C" fn wf_commutativity_check(
    model: *const WfModel,
    m: i64,
    twist_json: *const c_char,
    kernel_name: *const c_char,
    out_holds: *mut bool,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let lb = bundle(&h.model, m, twist_json)?;
        let k = kernel(optional_text(kernel_name, "kernel")?)?;
        let holds = commutativity_check(&h.model, &lb, k)?;
        if out_holds.is_null() {
            return Err(Failure::Null("out_holds"));
        }
        *out_holds = holds;
        Ok(())
    })
}

/// Closed-form duality decision for a WIT sheaf (`wit` is 0 or 1).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_duality_decision(n: u32, c: u32, wit: u8, dim_shift: i32, out: *mut *mut c_char) -> WfStatus {
    guard(|| write_json(out, &duality_decision(&scenario(n, c, wit, dim_shift)?)?))
}

/// Spectral-sequence derivation for the same scenario: pages, relations and
/// the derived conclusion.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_duality_engine(n: u32, c: u32, wit: u8, dim_shift: i32, out: *mut *mut c_char) -> WfStatus {
    guard(|| write_json(out, &engine_conclusion(&scenario(n, c, wit, dim_shift)?)?))
}

/// Checks one destabilizer candidate of `Φ(O_X(-nΘ))`. `candidate_json`
/// may be null only when `n = 1`.
///
/// # Safety
/// Pointers must be valid; `candidate_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn wf_certify(
    model: *const WfModel,
    n: u32,
    pol_json: *const c_char,
    candidate_json: *const c_char,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let pol = polarization(h, pol_json)?;
        let cand: Option<DestabilizerCandidate> = match optional_text(candidate_json, "candidate")? {
            Some(t) => Some(parse(t, "candidate")?),
            None => None,
        };
        write_json(out, &certify(&h.model, n, &pol, cand.as_ref())?)
    })
}

/// Exhaustive candidate search for `Φ(O_X(-nΘ))`. `bounds_json` may be null
/// for the defaults; `out` may be null when only the flag is wanted.
///
/// # Safety
/// Pointers must be valid; optional ones may be null.
#[no_mangle]
pub unsafe extern "C" fn wf_enumerate(
    model: *const WfModel,
    n: u32,
    pol_json: *const c_char,
    bounds_json: *const c_char,
    out_any_violation: *mut bool,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let pol = polarization(h, pol_json)?;
        let bounds: Bounds = match optional_text(bounds_json, "bounds")? {
            Some(t) => parse(t, "bounds")?,
            None => Bounds::default(),
        };
        if out_any_violation.is_null() {
            return Err(Failure::Null("out_any_violation"));
        }
        let en = enumerate_candidates(&h.model, n, &pol, &bounds, None)?;
        *out_any_violation = en.any_violation;
        if !out.is_null() {
            write_json(out, &en)?;
        }
        Ok(())
    })
}

/// Stability of the transform of `O_X(mΘ) ⊗ p*N`, `m ≠ 0`.
///
/// # Safety
/// Pointers must be valid; `twist_json` and `bounds_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn wf_transform_stability(
    model: *const WfModel,
    m: i64,
    twist_json: *const c_char,
    pol_json: *const c_char,
    bounds_json: *const c_char,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let lb = bundle(&h.model, m, twist_json)?;
        let pol = polarization(h, pol_json)?;
        let bounds: Bounds = match optional_text(bounds_json, "bounds")? {
            Some(t) => parse(t, "bounds")?,
            None => Bounds::default(),
        };
        write_json(out, &transform_stability(&h.model, &lb, &pol, &bounds)?)
    })
}

/// Product of two classes on the threefold.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_x_mul(
    model: *const WfModel,
    u_json: *const c_char,
    v_json: *const c_char,
    out: *mut *mut c_char,
) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let u: ThreefoldClass = parse(text(u_json, "u")?, "u")?;
        let v: ThreefoldClass = parse(text(v_json, "v")?, "v")?;
        write_json(out, &h.model.x_mul(&u, &v)?)
    })
}

/// Degree of a class on the threefold, as `"p/q"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn wf_x_integrate(model: *const WfModel, u_json: *const c_char, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let h = model_ref(model)?;
        let u: ThreefoldClass = parse(text(u_json, "u")?, "u")?;
        h.model.check_threefold(&u)?;
        write_string(out, x_integrate(&u).to_wire())
    })
}
