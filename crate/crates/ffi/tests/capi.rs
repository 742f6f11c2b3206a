use std::ffi::{CStr, CString};
use std::ptr;

use coverhom_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = coverhom_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn mod_ell(g: u32, ell: u64) -> *mut CoverhomCover {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { coverhom_cover_mod_ell(g, ell, &mut h) },
        CoverhomStatus::Ok
    );
    assert!(!h.is_null());
    h
}

#[test]
fn build_and_query() {
    let h = mod_ell(2, 2);
    let (mut n, mut r, mut g, mut chi) = (0usize, 0usize, 0i64, 0i64);
    unsafe {
        assert_eq!(coverhom_cover_degree(h, &mut n), CoverhomStatus::Ok);
        assert_eq!(coverhom_cover_rank(h, &mut r), CoverhomStatus::Ok);
        assert_eq!(coverhom_cover_genus(h, &mut g), CoverhomStatus::Ok);
        assert_eq!(
            coverhom_cover_euler_characteristic(h, &mut chi),
            CoverhomStatus::Ok
        );
        coverhom_cover_free(h);
    }
    assert_eq!((n, r, g, chi), (16, 34, 17, -32));
}

#[test]
fn gram_buffer_protocol() {
    let h = mod_ell(1, 2);
    let mut written = 0usize;
    let mut small = [0i64; 1];
    unsafe {
        assert_eq!(
            coverhom_cover_gram(h, small.as_mut_ptr(), small.len(), &mut written),
            CoverhomStatus::BufferTooSmall
        );
        assert_eq!(written, 4);
        let mut buf = vec![0i64; written];
        assert_eq!(
            coverhom_cover_gram(h, buf.as_mut_ptr(), buf.len(), &mut written),
            CoverhomStatus::Ok
        );
        assert_eq!(buf[0], 0);
        assert_eq!(buf[1], -buf[2]);
        assert_eq!(buf[1].abs(), 1);
        coverhom_cover_free(h);
    }
}

#[test]
fn lift_from_json_cover() {
    let json = c(r#"{"type":"identity","genus":1}"#);
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            coverhom_cover_from_json(json.as_ptr(), &mut h),
            CoverhomStatus::Ok
        );
        let mut buf = [0i64; 2];
        let mut passes = 0usize;
        let w = c("a1 a1 B1");
        assert_eq!(
            coverhom_lift_class(h, w.as_ptr(), 0, buf.as_mut_ptr(), buf.len(), &mut passes),
            CoverhomStatus::Ok
        );
        assert_eq!(passes, 1);
        assert_eq!(buf.iter().map(|x| x.abs()).sum::<i64>(), 3);
        let bad = c("a1 q7");
        assert_eq!(
            coverhom_lift_class(h, bad.as_ptr(), 0, buf.as_mut_ptr(), buf.len(), &mut passes),
            CoverhomStatus::InvalidInput
        );
        assert!(last_error().contains("q7"));
        coverhom_cover_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let json = c(r#"{"genus":1,"degree":2,"perm":{"a1":[1,2],"b1":[1,2]}}"#);
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            coverhom_cover_from_json(json.as_ptr(), &mut h),
            CoverhomStatus::Disconnected
        );
        assert!(h.is_null());
        assert!(last_error().contains("disconnected"));
        assert_eq!(
            coverhom_cover_from_json(ptr::null(), &mut h),
            CoverhomStatus::NullPointer
        );
        let mut r = 0usize;
        assert_eq!(
            coverhom_cover_rank(ptr::null(), &mut r),
            CoverhomStatus::NullPointer
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            coverhom_cover_from_json(bad.as_ptr().cast(), &mut h),
            CoverhomStatus::InvalidUtf8
        );
        coverhom_cover_free(ptr::null_mut());
    }
}

#[test]
fn checks_through_the_abi() {
    let h = mod_ell(2, 2);
    let mut report = ptr::null_mut();
    let mut code = -1;
    unsafe {
        let name = c("fullness");
        let params = c(r#"{"seed": 3}"#);
        assert_eq!(
            coverhom_run_check(h, name.as_ptr(), params.as_ptr(), &mut report, &mut code),
            CoverhomStatus::Ok
        );
        assert_eq!(code, 0);
        let text = CStr::from_ptr(report).to_str().unwrap().to_owned();
        coverhom_string_free(report);
        let golden = include_str!("../../core/tests/golden/fullness_mod2_g2_seed3.json");
        assert_eq!(text, golden);

        let gap = c("gap");
        let p = c(r#"{"budget": 10}"#);
        assert_eq!(
            coverhom_run_check(
                ptr::null(),
                gap.as_ptr(),
                p.as_ptr(),
                &mut report,
                &mut code
            ),
            CoverhomStatus::Ok
        );
        assert_eq!(code, 0);
        coverhom_string_free(report);

        assert_eq!(
            coverhom_run_check(
                ptr::null(),
                name.as_ptr(),
                ptr::null(),
                &mut report,
                &mut code
            ),
            CoverhomStatus::NullPointer
        );
        let unknown = c("nosuch");
        assert_eq!(
            coverhom_run_check(h, unknown.as_ptr(), ptr::null(), &mut report, &mut code),
            CoverhomStatus::InvalidInput
        );
        let badp = c(r#"{"budgett": 1}"#);
        assert_eq!(
            coverhom_run_check(h, name.as_ptr(), badp.as_ptr(), &mut report, &mut code),
            CoverhomStatus::InvalidInput
        );
        coverhom_cover_free(h);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(coverhom_version()) }
        .to_str()
        .unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/coverhom.h");
    for f in [
        "coverhom_cover_from_json",
        "coverhom_cover_mod_ell",
        "coverhom_cover_free",
        "coverhom_cover_degree",
        "coverhom_cover_rank",
        "coverhom_cover_genus",
        "coverhom_cover_euler_characteristic",
        "coverhom_cover_gram",
        "coverhom_lift_class",
        "coverhom_run_check",
        "coverhom_string_free",
        "coverhom_last_error",
        "coverhom_version",
        "COVERHOM_STATUS_BUFFER_TOO_SMALL = 5",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}
