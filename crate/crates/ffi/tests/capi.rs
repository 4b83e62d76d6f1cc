use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spherekernel_ffi::*;

fn model(json: &str) -> *mut SkModel {
    let text = CString::new(json).unwrap();
    let mut handle = ptr::null_mut();
    let status = unsafe { sk_model_from_json(text.as_ptr(), &mut handle) };
    assert_eq!(status, SkStatus::Ok);
    assert!(!handle.is_null());
    handle
}

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        sk_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn evaluates_kernels() {
    let m = model(r#"{"variant":"geometric","c":0.5,"r":0.5}"#);
    let mut v = 0.0;
    unsafe {
        assert_eq!(sk_phi_eval_inf(m, 0.0, 1e-12, &mut v), SkStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(sk_phi_eval_inf(m, 1.0, 1e-12, &mut v), SkStatus::Ok);
        let c = 1f64.cos();
        assert!((v - 0.5 / (1.0 - 0.5 * c)).abs() < 1e-12);
        assert_eq!(sk_phi_eval_d(m, 2, 0.0, 1e-12, &mut v), SkStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(sk_derivative_at_zero(m, 1, 1e-12, &mut v), SkStatus::Ok);
        // phi = 0.5 / (1 - 0.5 cos) has phi''(0) = -1
        assert!((v + 1.0).abs() < 1e-10);
        sk_model_free(m);
    }
}

#[test]
fn classification_codes() {
    let mut out = SkSmoothness::default();
    unsafe {
        let p = model(r#"{"variant":"powerlaw","C":1,"p":4.5}"#);
        assert_eq!(sk_classify(p, 0, 6, &mut out), SkStatus::Ok);
        assert_eq!((out.max_ell, out.unbounded), (3, 0));
        assert_eq!(sk_classify(p, 2, 6, &mut out), SkStatus::Ok);
        assert_eq!((out.max_ell, out.unbounded), (1, 0));
        let mut v = 0.0;
        assert_eq!(sk_derivative_at_zero(p, 4, 1e-8, &mut v), SkStatus::DivergentSeries);
        assert!(last_error().contains("diverges"));
        sk_model_free(p);

        let g = model(r#"{"variant":"poisson","c":2}"#);
        assert_eq!(sk_classify(g, 0, 6, &mut out), SkStatus::Ok);
        assert_eq!(out.unbounded, 1);
        sk_model_free(g);
    }
}

#[test]
fn transform_fills_buffer() {
    let m = model(r#"{"variant":"finite","terms":[0,0,0,1]}"#);
    let mut values = [f64::NAN; 5];
    unsafe {
        assert_eq!(sk_transform(m, 1e-12, values.as_mut_ptr(), values.len()), SkStatus::Ok);
        sk_model_free(m);
    }
    assert_eq!(values, [0.0, 0.75, 0.0, 0.25, 0.0]);
}

#[test]
fn btable_cells_as_strings() {
    let mut table = ptr::null_mut();
    let mut buf = [0 as std::ffi::c_char; 64];
    let mut needed = 0usize;
    unsafe {
        assert_eq!(sk_btable_new(4, 2, &mut table), SkStatus::Ok);
        assert_eq!(sk_btable_cell(table, 2, 0, buf.as_mut_ptr(), buf.len(), &mut needed), SkStatus::Ok);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "12");
        assert_eq!(needed, 2);
        assert_eq!(sk_btable_cell(table, 2, 0, buf.as_mut_ptr(), 2, &mut needed), SkStatus::BufferTooSmall);
        assert_eq!(needed, 2);
        assert_eq!(
            sk_btable_cell(table, 3, 0, buf.as_mut_ptr(), buf.len(), ptr::null_mut()),
            SkStatus::UnsupportedRange
        );
        sk_btable_free(table);

        assert_eq!(sk_btable_new(3, 3, &mut table), SkStatus::UnsupportedRange);
    }
}

#[test]
fn errors_are_status_codes() {
    let mut handle = ptr::null_mut();
    let bad = CString::new(r#"{"variant":"geometric","c":1,"r":2}"#).unwrap();
    let mut v = 0.0;
    unsafe {
        assert_eq!(sk_model_from_json(bad.as_ptr(), &mut handle), SkStatus::InvalidArgument);
        assert!(handle.is_null());
        assert!(last_error().contains("ratio"));
        assert_eq!(sk_model_from_json(ptr::null(), &mut handle), SkStatus::NullPointer);
        assert_eq!(sk_phi_eval_inf(ptr::null(), 0.0, 1e-10, &mut v), SkStatus::NullPointer);

        let slow = model(r#"{"variant":"powerlaw","C":1,"p":1.05}"#);
        assert_eq!(sk_phi_eval_inf(slow, 0.5, 1e-10, &mut v), SkStatus::ToleranceUnreachable);
        assert_eq!(sk_phi_eval_inf(slow, 4.0, 1e-10, &mut v), SkStatus::InvalidArgument);
        sk_model_free(slow);

        let name = CStr::from_ptr(sk_status_name(SkStatus::DivergentSeries));
        assert_eq!(name.to_str().unwrap(), "DivergentSeries");
        sk_model_free(ptr::null_mut());
        sk_btable_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spherekernel.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "typedef struct SkModel SkModel;",
        "typedef struct SkBTable SkBTable;",
        "SK_STATUS_DIVERGENT_SERIES = 3",
        "sk_model_from_json",
        "sk_btable_cell",
        "sk_last_error_message",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // compiles as C when a compiler is around
    if let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    {
        assert!(status.success());
    }
}
