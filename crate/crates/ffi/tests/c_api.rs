use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hypercf_ffi::*;

const EXAMPLE3: &str =
    r#"{"genus":1,"A":["-3","0","1"],"R":["-2","-1"],"P0":["-1","0","1"],"Q0":["-2","-2"]}"#;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { hcf_string_free(s) };
    text
}

fn last_error() -> String {
    let p = hcf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn new_expansion(json: &str) -> (HcfStatus, *mut HcfExpansion) {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let status = unsafe { hcf_expansion_new(c.as_ptr(), &mut h) };
    (status, h)
}

#[test]
fn expansion_round_trip() {
    let (status, h) = new_expansion(EXAMPLE3);
    assert_eq!(status, HcfStatus::Ok);
    assert_eq!(unsafe { hcf_expansion_genus(h) }, 1);

    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hcf_expansion_lines(h, 2, 1, &mut out) },
        HcfStatus::Ok
    );
    let lines: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    let lines = lines.as_array().unwrap();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["n"], -1);
    assert_eq!(lines[1]["d"], "1");
    assert_eq!(lines[1]["v"], "-1");

    assert_eq!(
        unsafe { hcf_expansion_hankel(h, 5, 0, &mut out) },
        HcfStatus::Ok
    );
    let table: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(
        table["delta"],
        serde_json::json!(["1", "1", "2", "3", "7", "23"])
    );

    assert_eq!(
        unsafe { hcf_expansion_moments(h, 3, 0, &mut out) },
        HcfStatus::Ok
    );
    assert_eq!(
        serde_json::from_str::<Vec<String>>(&take(out))
            .unwrap()
            .len(),
        3
    );

    assert_eq!(
        unsafe { hcf_expansion_tau(h, 8, 4, &mut out) },
        HcfStatus::Ok
    );
    let seq = take(out);
    assert_eq!(unsafe { hcf_expansion_free(h) }, ());

    let seq_c = CString::new(seq.clone()).unwrap();
    assert_eq!(
        unsafe { hcf_somos_find(seq_c.as_ptr(), 4, &mut out) },
        HcfStatus::Ok
    );
    let rel = take(out);
    assert!(rel.contains("\"k\":4"), "{rel}");
    let rel_c = CString::new(rel).unwrap();
    assert_eq!(
        unsafe { hcf_somos_verify(rel_c.as_ptr(), seq_c.as_ptr()) },
        HcfStatus::Ok
    );
}

#[test]
fn error_codes() {
    let (status, h) = new_expansion("{not json");
    assert_eq!(status, HcfStatus::Parse);
    assert!(h.is_null());
    assert!(!last_error().is_empty());

    let bad = EXAMPLE3.replace(r#""A":["-3","0","1"]"#, r#""A":["-3","1","1"]"#);
    assert_eq!(new_expansion(&bad).0, HcfStatus::InvalidInput);

    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { hcf_expansion_new(ptr::null(), &mut h) },
        HcfStatus::NullArgument
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hcf_expansion_lines(ptr::null(), 1, 0, &mut out) },
        HcfStatus::NullArgument
    );
    assert_eq!(unsafe { hcf_expansion_genus(ptr::null()) }, 0);

    let suite = CString::new("nonsense").unwrap();
    assert_eq!(
        unsafe { hcf_verify(suite.as_ptr(), 1, 1, 0, &mut out) },
        HcfStatus::InvalidInput
    );
    assert!(last_error().contains("nonsense"));

    let short = CString::new(r#"{"start":0,"terms":["1","1","1"]}"#).unwrap();
    assert_eq!(
        unsafe { hcf_somos_find(short.as_ptr(), 4, &mut out) },
        HcfStatus::InsufficientData
    );

    unsafe {
        hcf_string_free(ptr::null_mut());
        hcf_expansion_free(ptr::null_mut());
    }
}

#[test]
fn singular_expansion_returns_prefix() {
    // R = 0: the expansion of A itself, which terminates.
    let json =
        r#"{"genus":2,"A":["-1","-5","0","1"],"R":[],"P0":["-1","-5","0","1"],"Q0":["1","2","3"]}"#;
    let (status, h) = new_expansion(json);
    assert_eq!(status, HcfStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { hcf_expansion_lines(h, 10, 0, &mut out) },
        HcfStatus::Singular
    );
    let lines: Vec<serde_json::Value> = serde_json::from_str(&take(out)).unwrap();
    assert!(!lines.is_empty() && lines.len() <= 4);
    assert!(last_error().contains("singular"));
    assert_eq!(
        unsafe { hcf_expansion_lines(h, 0, 1, &mut out) },
        HcfStatus::Singular
    );
    take(out);
    unsafe { hcf_expansion_free(h) };
}

#[test]
fn repro_and_verify() {
    let id = CString::new("example3").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hcf_repro(id.as_ptr(), &mut out) }, HcfStatus::Ok);
    assert!(take(out).contains("\"passed\":true"));

    let unknown = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { hcf_repro(unknown.as_ptr(), &mut out) },
        HcfStatus::InvalidInput
    );

    let suite = CString::new("poisson").unwrap();
    assert_eq!(
        unsafe { hcf_verify(suite.as_ptr(), 1, 3, 7, &mut out) },
        HcfStatus::Ok
    );
    assert!(take(out).contains("\"suite\":\"poisson\""));
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(hcf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hypercf.h")).unwrap();
    for name in [
        "hcf_expansion_new",
        "hcf_expansion_free",
        "hcf_expansion_lines",
        "hcf_somos_find",
        "hcf_repro",
        "hcf_verify",
        "hcf_string_free",
        "hcf_last_error",
        "HCF_STATUS_SINGULAR",
        "typedef struct HcfExpansion HcfExpansion",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
