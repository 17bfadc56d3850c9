use std::ffi::{CStr, CString};
use std::ptr;

use qfsys::gallery::{gen_block_pair, gen_galois_pair, gen_triangular_pair};
use qfsys::quadforms::{MatrixFile, QFSystem};
use qfsys::verify::verify_payload;
use qfsys_ffi::*;

fn handle(sys: &QFSystem) -> *mut QfsSystem {
    let json = CString::new(sys.to_json()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { qfs_system_from_json(json.as_ptr(), &mut h) }, QfsStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let p = qfs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn round_trip_and_shape() {
    let sys = gen_galois_pair();
    let h = handle(&sys);
    let (mut dim, mut len) = (0usize, 0usize);
    unsafe {
        assert_eq!(qfs_system_dim(h, &mut dim), QfsStatus::Ok);
        assert_eq!(qfs_system_len(h, &mut len), QfsStatus::Ok);
    }
    assert_eq!((dim, len), (4, 2));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_system_to_json(h, &mut s) }, QfsStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), sys.to_json());
    unsafe {
        qfs_string_free(s);
        qfs_system_free(h);
    }
    assert!(qfs_last_error().is_null());
}

#[test]
fn decisions() {
    let h = handle(&gen_triangular_pair());
    let (mut sgn, mut exists) = (0i64, true);
    assert_eq!(unsafe { qfs_decide(h, &mut sgn, &mut exists) }, QfsStatus::Ok);
    assert_eq!((sgn, exists), (2, false));
    let mut cl = 0usize;
    assert_eq!(unsafe { qfs_closure_dim(h, &mut cl) }, QfsStatus::Ok);
    assert_eq!(cl, 3);
    let (mut order, mut exact) = (0u64, false);
    assert_eq!(unsafe { qfs_weak_order(h, 2, 3, &mut order, &mut exact) }, QfsStatus::NotFound);
    assert!(exact);
    unsafe { qfs_system_free(h) };

    let h = handle(&gen_block_pair(1).unwrap());
    assert_eq!(unsafe { qfs_weak_order(h, 3, 3, &mut order, &mut exact) }, QfsStatus::Ok);
    assert_eq!((order, exact), (2, true));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_witness_json(h, 3, &mut s) }, QfsStatus::NotFound);
    assert!(s.is_null());
    unsafe { qfs_system_free(h) };
}

#[test]
fn witness_is_checkable() {
    let sys = gen_galois_pair();
    let h = handle(&sys);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_witness_json(h, 3, &mut s) }, QfsStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe {
        qfs_string_free(s);
        qfs_system_free(h);
    }
    let file = MatrixFile::from_json(&text).unwrap();
    assert_eq!(verify_payload(&sys, &file).unwrap(), Some(true));
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    let bad = CString::new("{\"dim\":2,\"forms\":[[[\"1\",\"0\"],[\"1\",\"1\"]]]}").unwrap();
    assert_ne!(unsafe { qfs_system_from_json(bad.as_ptr(), &mut h) }, QfsStatus::Ok);
    assert!(h.is_null());
    assert!(!last_error().is_empty());

    let junk = CString::new("not json").unwrap();
    assert_eq!(unsafe { qfs_system_from_json(junk.as_ptr(), &mut h) }, QfsStatus::Parse);
    assert!(last_error().contains("parse"));

    assert_eq!(unsafe { qfs_system_from_json(ptr::null(), &mut h) }, QfsStatus::NullPointer);
    let mut dim = 0usize;
    assert_eq!(unsafe { qfs_system_dim(ptr::null(), &mut dim) }, QfsStatus::NullPointer);
    let ok = handle(&gen_galois_pair());
    assert_eq!(unsafe { qfs_system_dim(ok, ptr::null_mut()) }, QfsStatus::NullPointer);

    // a pair whose span has no unimodular form
    let singular = QFSystem::from_i64(&[&[&[1, 0], &[0, 0]], &[&[2, 0], &[0, 0]]]).unwrap();
    let hs = handle(&singular);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qfs_witness_json(hs, 3, &mut s) }, QfsStatus::Refused);
    assert!(last_error().contains("singular"));
    unsafe {
        qfs_system_free(hs);
        qfs_system_free(ok);
        qfs_system_free(ptr::null_mut());
        qfs_string_free(ptr::null_mut());
    }
}
