use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use posetpack_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pp_string_free(s) };
    out
}

fn last_error() -> String {
    let p = pp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn standard(name: &str) -> *mut PpPoset {
    let name = CString::new(name).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { pp_poset_standard(name.as_ptr(), &mut p) },
        PpStatus::Ok
    );
    p
}

#[test]
fn closure_of_v_through_handles() {
    let v = standard("V");
    assert_eq!(unsafe { pp_poset_size(v) }, 3);
    let mut cert = ptr::null_mut();
    assert_eq!(
        unsafe { pp_minimal_closure(v, false, 0, &mut cert) },
        PpStatus::Ok
    );
    assert_eq!(unsafe { pp_certificate_m(cert) }, 3);
    assert_eq!(unsafe { pp_certificate_k(cert) }, 2);
    let mut image = [u64::MAX; 3];
    assert_eq!(
        unsafe { pp_certificate_witness(cert, image.as_mut_ptr(), 3) },
        PpStatus::Ok
    );
    assert_eq!(image, [0, 1, 2]);
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { pp_certificate_to_json(cert, &mut json) },
        PpStatus::Ok
    );
    assert_eq!(
        take_string(json),
        r#"{"mode":"weak","m":3,"k":2,"witness":[[],[1],[2]],"exhaustive_to":3}"#
    );
    assert_eq!(
        unsafe { pp_certificate_witness(cert, image.as_mut_ptr(), 2) },
        PpStatus::InvalidInput
    );
    unsafe {
        pp_certificate_free(cert);
        pp_poset_free(v);
    }
}

#[test]
fn plan_counts_and_verifies() {
    let v = standard("V");
    let mut cert = ptr::null_mut();
    let mut plan = ptr::null_mut();
    unsafe {
        assert_eq!(pp_minimal_closure(v, false, 0, &mut cert), PpStatus::Ok);
        assert_eq!(pp_plan_build(cert, 12, 2, &mut plan), PpStatus::Ok);
        let (mut copies, mut sets) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pp_plan_count(plan, &mut copies, &mut sets), PpStatus::Ok);
        assert_eq!(take_string(copies), "218");
        assert_eq!(take_string(sets), "654");
        assert_eq!(
            pp_plan_count(plan, ptr::null_mut(), ptr::null_mut()),
            PpStatus::Ok
        );
        assert_eq!(pp_plan_verify(plan), PpStatus::Ok);
        pp_plan_free(plan);

        let mut small = ptr::null_mut();
        assert_eq!(
            pp_plan_build(cert, 2, 1, &mut small),
            PpStatus::InvalidInput
        );
        assert!(small.is_null());
        assert!(last_error().contains("smallest feasible n"));
        pp_certificate_free(cert);
        pp_poset_free(v);
    }
}

#[test]
fn strong_plan_for_j() {
    let j = standard("J");
    let mut cert = ptr::null_mut();
    let mut plan = ptr::null_mut();
    unsafe {
        assert_eq!(pp_minimal_closure(j, true, 0, &mut cert), PpStatus::Ok);
        assert_eq!(pp_certificate_m(cert), 5);
        assert_eq!(pp_plan_build(cert, 14, 1, &mut plan), PpStatus::Ok);
        assert_eq!(pp_plan_verify(plan), PpStatus::Ok);
        pp_plan_free(plan);
        pp_certificate_free(cert);
        pp_poset_free(j);
    }
}

#[test]
fn families_and_chains() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(
            pp_family_new(2, [0b11u64, 0].as_ptr(), 2, &mut f),
            PpStatus::Ok
        );
        let mut convex = true;
        assert_eq!(pp_family_is_convex(f, &mut convex), PpStatus::Ok);
        assert!(!convex);

        let mut c = ptr::null_mut();
        assert_eq!(pp_family_closure(f, &mut c), PpStatus::Ok);
        let mut total = 0;
        assert_eq!(
            pp_family_masks(c, ptr::null_mut(), 0, &mut total),
            PpStatus::Ok
        );
        assert_eq!(total, 4);
        let mut buf = [0u64; 4];
        assert_eq!(
            pp_family_masks(c, buf.as_mut_ptr(), 4, &mut total),
            PpStatus::Ok
        );
        assert_eq!(buf, [0, 1, 2, 3]);

        let mut chains = ptr::null_mut();
        assert_eq!(pp_chains_through(f, &mut chains), PpStatus::Ok);
        assert_eq!(take_string(chains), "2");

        let json = CString::new(r#"{"n": 2, "sets": [[1]]}"#).unwrap();
        let json2 = CString::new(r#"{"n": 2, "sets": [[2]]}"#).unwrap();
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pp_family_from_json(json.as_ptr(), &mut a), PpStatus::Ok);
        assert_eq!(pp_family_from_json(json2.as_ptr(), &mut b), PpStatus::Ok);
        assert_eq!(pp_family_len(a), 1);
        let mut free = false;
        assert_eq!(pp_families_unrelated(a, b, &mut free), PpStatus::Ok);
        assert!(free);
        assert_eq!(pp_families_unrelated(a, c, &mut free), PpStatus::Ok);
        assert!(!free);

        for h in [f, c, a, b] {
            pp_family_free(h);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(
            pp_poset_new(2, [0usize, 1, 1, 0].as_ptr(), 2, &mut p),
            PpStatus::InvalidInput
        );
        assert!(last_error().contains("cycle"));
        assert_eq!(
            pp_poset_new(2, [0usize, 1].as_ptr(), 1, ptr::null_mut()),
            PpStatus::NullArgument
        );
        assert_eq!(
            pp_poset_new(2, ptr::null(), 1, &mut p),
            PpStatus::NullArgument
        );

        let bad = CString::new("{\"elements\": 2,\n \"relations\": [[0,]]}").unwrap();
        assert_eq!(
            pp_poset_from_json(bad.as_ptr(), &mut p),
            PpStatus::InvalidInput
        );
        assert!(last_error().contains("line 2"));

        let unknown = CString::new("W").unwrap();
        assert_eq!(
            pp_poset_standard(unknown.as_ptr(), &mut p),
            PpStatus::InvalidInput
        );

        let mut out = ptr::null_mut();
        assert_eq!(pp_gst(3, 2, &mut out), PpStatus::InvalidInput);
        assert_eq!(pp_gst(1, 4, &mut out), PpStatus::Ok);
        assert!(pp_last_error_message().is_null());
        assert_eq!(take_string(out), "6");

        assert_eq!(
            pp_family_is_convex(ptr::null(), &mut false),
            PpStatus::NullArgument
        );
        pp_poset_free(ptr::null_mut());
        pp_family_free(ptr::null_mut());
        pp_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/posetpack.h");
    let source = include_str!("../src/lib.rs");
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in ["PpPoset", "PpFamily", "PpCertificate", "PpPlan"] {
        assert!(
            header.contains(&format!("typedef struct {ty} {ty};")),
            "{ty}"
        );
    }
}
