use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use pinchlab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pl_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn twelve_gon_through_handle() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pl_gr_range_new(2, 1, 1, &mut h), PlStatus::Ok);
        let mut n = 0;
        assert_eq!(pl_gr_poset_len(h, &mut n), PlStatus::Ok);
        assert_eq!(n, 12);
        let mut len = 0;
        assert_eq!(pl_gr_poset_betti(h, ptr::null_mut(), 0, &mut len), PlStatus::Capacity);
        assert_eq!(len, 2);
        let mut buf = [0usize; 4];
        assert_eq!(pl_gr_poset_betti(h, buf.as_mut_ptr(), buf.len(), &mut len), PlStatus::Ok);
        assert_eq!(&buf[..len], &[1, 1]);
        pl_gr_poset_free(h);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(pl_gr_range_new(2, 1, 1, ptr::null_mut()), PlStatus::NullPointer);
        assert!(last_error().contains("out"));
        assert_eq!(pl_gr_poset_len(ptr::null(), &mut 0), PlStatus::NullPointer);
        assert_eq!(pl_trig_new(ptr::null(), 3, &mut ptr::null_mut()), PlStatus::NullPointer);
        assert_eq!(pl_twelve_cycle_check(ptr::null_mut()), PlStatus::NullPointer);
        pl_gr_poset_free(ptr::null_mut());
        pl_trig_free(ptr::null_mut());
    }
}

#[test]
fn bad_arguments() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pl_gr_range_new(9, 0, 1, &mut h), PlStatus::Capacity);
        assert!(h.is_null());
        let even = [1.0, 0.0];
        assert_ne!(pl_trig_new(even.as_ptr(), even.len(), &mut ptr::null_mut()), PlStatus::Ok);
        assert!(!last_error().is_empty());
    }
}

#[test]
fn trig_and_family() {
    // cos 3a has six simple roots
    let c = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pl_trig_new(c.as_ptr(), c.len(), &mut h), PlStatus::Ok);
        let mut v = 0.0;
        assert_eq!(pl_trig_eval(h, 0.0, &mut v), PlStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        let (mut n, mut g) = (0, 0);
        assert_eq!(pl_trig_genus(h, 1e-6, &mut n, &mut g), PlStatus::Ok);
        assert_eq!((n, g), (6, 2));
        assert_eq!(pl_trig_genus(h, -1.0, &mut n, &mut g), PlStatus::InvalidArgument);
        pl_trig_free(h);

        let a = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let b = [0.0, 0.0];
        let mut genus = 0;
        assert_eq!(pl_family_genus(a.as_ptr(), b.as_ptr(), 2, 2, 1e-6, &mut genus), PlStatus::Ok);
        assert_eq!(genus, 2);
        assert_ne!(pl_family_genus(a.as_ptr(), b.as_ptr(), 1, 2, 1e-6, &mut genus), PlStatus::Ok);

        let mut ok = false;
        assert_eq!(pl_twelve_cycle_check(&mut ok), PlStatus::Ok);
        assert!(ok);
        assert!(!CStr::from_ptr(pl_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pinchlab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["pl_gr_range_new", "pl_trig_genus", "pl_family_genus", "pl_last_error"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    // skipped when no C compiler is on the path
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
