use std::ffi::{c_char, CStr, CString};
use std::ptr;

use weierfm_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { wf_string_free(s) };
    out
}

fn last_error() -> String {
    let p = wf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn preset(name: &str) -> *mut WfModel {
    let name = CString::new(name).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { wf_model_from_preset(name.as_ptr(), &mut model) }, WfStatus::Ok);
    model
}

fn polarization(model: *const WfModel) -> CString {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wf_model_default_polarization(model, &mut out) }, WfStatus::Ok);
    CString::new(take(out)).unwrap()
}

#[test]
fn transform_and_slope() {
    let model = preset("k3_quartic");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wf_transform(model, -1, ptr::null(), ptr::null(), &mut out) }, WfStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(json["character"]["ch0"], "-1/1");
    assert_eq!(json["locally_free"], true);

    let ch = CString::new(json["character"].to_string()).unwrap();
    let pol = polarization(model);
    assert_eq!(unsafe { wf_slope(model, ch.as_ptr(), pol.as_ptr(), &mut out) }, WfStatus::Ok);
    let slope = take(out);
    assert!(slope.contains('/'), "{slope}");
    unsafe { wf_model_free(model) };
}

#[test]
fn commutativity_depends_on_kernel() {
    let model = preset("general_demo");
    let mut holds = false;
    let standard = CString::new("standard").unwrap();
    let untwisted = CString::new("untwisted").unwrap();
    assert_eq!(unsafe { wf_commutativity_check(model, 2, ptr::null(), standard.as_ptr(), &mut holds) }, WfStatus::Ok);
    assert!(holds);
    assert_eq!(unsafe { wf_commutativity_check(model, 2, ptr::null(), untwisted.as_ptr(), &mut holds) }, WfStatus::Ok);
    assert!(!holds);
    unsafe { wf_model_free(model) };
}

#[test]
fn duality_table_and_engine_agree() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wf_duality_decision(3, 1, 1, 0, &mut out) }, WfStatus::Ok);
    let table: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(unsafe { wf_duality_engine(3, 1, 1, 0, &mut out) }, WfStatus::Ok);
    let engine: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(table["conclusion"], engine["conclusion"]);
}

#[test]
fn stability_search() {
    let model = preset("k3_quartic");
    let pol = polarization(model);
    let mut any = true;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wf_enumerate(model, 2, pol.as_ptr(), ptr::null(), &mut any, &mut out) }, WfStatus::Ok);
    assert!(!any);
    let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!(report["candidate_count"].as_u64().unwrap() > 0);

    assert_eq!(unsafe { wf_certify(model, 1, pol.as_ptr(), ptr::null(), &mut out) }, WfStatus::Ok);
    take(out);
    assert_eq!(unsafe { wf_transform_stability(model, 2, ptr::null(), pol.as_ptr(), ptr::null(), &mut out) }, WfStatus::Ok);
    let st: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(st["stable"], true);
    unsafe { wf_model_free(model) };
}

#[test]
fn model_round_trips_through_json() {
    let model = preset("enriques");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { wf_model_to_json(model, &mut out) }, WfStatus::Ok);
    let json = CString::new(take(out)).unwrap();
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { wf_model_from_json(json.as_ptr(), &mut copy) }, WfStatus::Ok);
    assert_eq!(unsafe { wf_model_to_json(copy, &mut out) }, WfStatus::Ok);
    assert_eq!(take(out), json.to_str().unwrap());
    assert_eq!(unsafe { wf_model_default_polarization(copy, &mut out) }, WfStatus::InputError);
    unsafe {
        wf_model_free(model);
        wf_model_free(copy);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("no_such_surface").unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { wf_model_from_preset(bad.as_ptr(), &mut model) }, WfStatus::InputError);
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { wf_transform(ptr::null(), 1, ptr::null(), ptr::null(), &mut out) }, WfStatus::NullPointer);
    assert!(last_error().contains("model"));

    assert_eq!(unsafe { wf_duality_decision(3, 1, 7, 0, &mut out) }, WfStatus::InputError);
    assert_eq!(unsafe { wf_duality_decision(3, 9, 0, 0, &mut out) }, WfStatus::InputError);

    let model = preset("general_demo");
    let pol = polarization(model);
    let mut any = false;
    assert_eq!(
        unsafe { wf_enumerate(model, 2, pol.as_ptr(), ptr::null(), &mut any, ptr::null_mut()) },
        WfStatus::HypothesisViolation
    );

    let version = unsafe { CStr::from_ptr(wf_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
    unsafe { wf_model_free(model) };
}
