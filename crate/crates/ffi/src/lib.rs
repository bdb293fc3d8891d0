//! C ABI over `pinchlab`. Objects are opaque handles released with their
//! `*_free` function; every call returns a `PlStatus` and leaves a message
//! for `pl_last_error` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pinchlab::family::{genus_map, ParamPoint, RegionProfile};
use pinchlab::grassmann::{build_gr_range, GrRangePoset};
use pinchlab::homology::betti_numbers;
use pinchlab::linkhom::{check_twelve_cycle, twelve_cycle};
use pinchlab::trigpoly::{n_odd, roots, TrigPoly};
use pinchlab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque `Gr^n[lo, hi]` poset with cached Betti numbers.
pub struct PlGrPoset {
    inner: GrRangePoset,
    betti: Option<Vec<usize>>,
}

/// Opaque trigonometric polynomial.
pub struct PlTrigPoly {
    inner: TrigPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PlStatus {
    match e {
        Error::Capacity(_) => PlStatus::Capacity,
        Error::Domain(_) | Error::DegreeDrop { .. } | Error::Boundary(_) | Error::ProfileTooLarge(_) => PlStatus::Domain,
        _ => PlStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (PlStatus, String)>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PlStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (PlStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PlStatus, String) {
    (PlStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `Gr^n[lo, hi]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn pl_gr_range_new(n: usize, lo: usize, hi: usize, out: *mut *mut PlGrPoset) -> PlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = build_gr_range(n, lo, hi).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PlGrPoset { inner, betti: None }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`pl_gr_range_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_gr_poset_len(h: *const PlGrPoset, out: *mut usize) -> PlStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = h.inner.len();
        Ok(())
    })
}

/// Number of elements in a longest chain.
///
/// # Safety
/// `h` must come from [`pl_gr_range_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_gr_poset_max_chain(h: *const PlGrPoset, out: *mut usize) -> PlStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = h.inner.poset.max_chain_length();
        Ok(())
    })
}

/// Z2 Betti numbers of the order complex. Writes up to `cap` entries into
/// `buf` and the full length into `len`; a short buffer gives `Capacity`.
///
/// # Safety
/// `h` must come from [`pl_gr_range_new`]; `buf` must hold `cap` entries
/// (may be null when `cap` is 0); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_gr_poset_betti(h: *mut PlGrPoset, buf: *mut usize, cap: usize, len: *mut usize) -> PlStatus {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        let len = len.as_mut().ok_or_else(|| null("len"))?;
        if h.betti.is_none() {
            let k = h.inner.order_complex().map_err(lib_err)?;
            h.betti = Some(betti_numbers(&k).map_err(lib_err)?);
        }
        let b = h.betti.as_ref().expect("just computed");
        *len = b.len();
        if cap < b.len() {
            return Err((PlStatus::Capacity, format!("buffer holds {cap}, need {}", b.len())));
        }
        if buf.is_null() && !b.is_empty() {
            return Err(null("buf"));
        }
        if !b.is_empty() {
            ptr::copy_nonoverlapping(b.as_ptr(), buf, b.len());
        }
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`pl_gr_range_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_gr_poset_free(h: *mut PlGrPoset) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// From `[s0, s1, s1', s2, s2', ...]` (odd length).
///
/// # Safety
/// `coeffs` must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_trig_new(coeffs: *const f64, len: usize, out: *mut *mut PlTrigPoly) -> PlStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let c = std::slice::from_raw_parts(coeffs, len);
        let inner = TrigPoly::from_coeffs(c).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PlTrigPoly { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`pl_trig_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_trig_eval(h: *const PlTrigPoly, alpha: f64, out: *mut f64) -> PlStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = h.inner.eval(alpha);
        Ok(())
    })
}

/// Real roots of odd multiplicity and the genus `max(n_odd / 2 - 1, 0)`.
///
/// # Safety
/// `h` must come from [`pl_trig_new`]; `n_odd_out` and `genus_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_trig_genus(h: *const PlTrigPoly, tol: f64, n_odd_out: *mut usize, genus_out: *mut usize) -> PlStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let n_out = n_odd_out.as_mut().ok_or_else(|| null("n_odd_out"))?;
        let g_out = genus_out.as_mut().ok_or_else(|| null("genus_out"))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err((PlStatus::InvalidArgument, format!("tolerance {tol} must be positive")));
        }
        let cfg = roots(&h.inner, tol).map_err(lib_err)?;
        let n = n_odd(&cfg, tol);
        *n_out = n;
        *g_out = pinchlab::trigpoly::genus_from_n_odd(n);
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`pl_trig_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_trig_free(h: *mut PlTrigPoly) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Genus of the family member at `a` (6 entries) and `b` (`2g - 2` entries),
/// with the default region profile.
///
/// # Safety
/// `a` must hold 6 doubles, `b` must hold `b_len` doubles (may be null when
/// `b_len` is 0), `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_family_genus(a: *const f64, b: *const f64, b_len: usize, g: usize, tol: f64, out: *mut usize) -> PlStatus {
    guard(|| {
        if a.is_null() {
            return Err(null("a"));
        }
        if b.is_null() && b_len > 0 {
            return Err(null("b"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let mut av = [0.0; 6];
        av.copy_from_slice(std::slice::from_raw_parts(a, 6));
        let bv = if b_len == 0 { Vec::new() } else { std::slice::from_raw_parts(b, b_len).to_vec() };
        let p = ParamPoint::new(av, bv, g).map_err(lib_err)?;
        *out = genus_map(&p, &RegionProfile::default(), tol);
        Ok(())
    })
}

/// Whether the twelve pinching strata give a non-bounding cycle in `Gr^2[1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_twelve_cycle_check(out: *mut bool) -> PlStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = check_twelve_cycle(&twelve_cycle()).map_err(lib_err)?.passed();
        Ok(())
    })
}
