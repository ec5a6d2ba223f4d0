//! C ABI over `posetpack`.
//!
//! Every object crosses the boundary as an opaque handle created by a
//! `pp_*_new`/`pp_*_from_*` function and released by the matching `pp_*_free`.
//! Fallible functions return a [`PpStatus`]; on failure the message is kept
//! per thread and can be read with [`pp_last_error_message`]. Big integers are
//! returned as NUL-terminated decimal strings owned by the caller and released
//! with [`pp_string_free`].
//!
//! Budgets default to the library defaults (or `POSETPACK_BUDGET`) and can be
//! replaced process-wide with [`pp_set_budget`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::atomic::{AtomicU64, Ordering};

use posetpack::embedding::minimal_closure;
use posetpack::io::{certificate_to_json, parse_family, parse_poset};
use posetpack::lattice::{chains_through, closure, is_convex, unrelated};
use posetpack::oracle::gst_formula;
use posetpack::packing::{build_plan, count_copies, materialize, verify_unrelated, PackingPlan};
use posetpack::{ClosureCertificate, Error, Family, Limits, Mode, Poset, StandardPoset};

/// Result of a fallible call. Values match the command-line exit codes where
/// they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    BudgetExceeded = 3,
    VerificationFailed = 4,
    Internal = 5,
}

/// A finite poset.
pub struct PpPoset(Poset);

/// A family of subsets of `[n]`.
pub struct PpFamily(Family);

/// A minimum-closure certificate: closure size, target size and witness.
pub struct PpCertificate(ClosureCertificate);

/// A layered packing plan.
pub struct PpPlan(PackingPlan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

static BUDGET: AtomicU64 = AtomicU64::new(0);

fn limits() -> Limits {
    match BUDGET.load(Ordering::Relaxed) {
        0 => Limits::from_env(),
        b => Limits::default().with_budget(b),
    }
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: PpStatus, message: impl Into<String>) -> PpStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> PpStatus {
    let status = if e.is_budget() {
        PpStatus::BudgetExceeded
    } else {
        PpStatus::InvalidInput
    };
    fail(status, e.to_string())
}

/// Runs `body`, converting panics into [`PpStatus::Internal`].
fn guard(body: impl FnOnce() -> Result<(), PpStatus>) -> PpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PpStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PpStatus::Internal, "internal panic"),
    }
}

fn lib<T>(r: posetpack::Result<T>) -> Result<T, PpStatus> {
    r.map_err(from_error)
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, PpStatus> {
    p.as_ref()
        .ok_or_else(|| fail(PpStatus::NullArgument, "null handle"))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, PpStatus> {
    p.as_mut()
        .ok_or_else(|| fail(PpStatus::NullArgument, "null output pointer"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, PpStatus> {
    if s.is_null() {
        return Err(fail(PpStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PpStatus::InvalidInput, "string is not UTF-8"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], PpStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(PpStatus::NullArgument, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message describing the last failure on this thread, or NULL.
///
/// The pointer stays valid until the next `pp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Replaces every work budget for later calls. Zero restores the defaults.
#[no_mangle]
pub extern "C" fn pp_set_budget(budget: u64) {
    BUDGET.store(budget, Ordering::Relaxed);
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a poset on `0..size` from `pair_count` relations `a < b`, stored
/// flat in `pairs` as `a0, b0, a1, b1, ...`.
///
/// # Safety
/// `pairs` must point to `2 * pair_count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_poset_new(
    size: usize,
    pairs: *const usize,
    pair_count: usize,
    out: *mut *mut PpPoset,
) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let flat = slice(
            pairs,
            pair_count.checked_mul(2).ok_or(PpStatus::InvalidInput)?,
        )?;
        let rel: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        *out = boxed(PpPoset(lib(Poset::new(size, &rel))?));
        Ok(())
    })
}

/// A named poset such as `"V"`, `"J"`, `"chain(2)"` or `"antichain(3)"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_poset_standard(
    name: *const c_char,
    out: *mut *mut PpPoset,
) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let which: StandardPoset = text(name)?.parse().map_err(|e: Error| from_error(e))?;
        *out = boxed(PpPoset(Poset::standard(which)));
        Ok(())
    })
}

/// Parses the poset JSON format `{"elements": p, "relations": [[a, b], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_poset_from_json(
    json: *const c_char,
    out: *mut *mut PpPoset,
) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = boxed(PpPoset(lib(parse_poset(text(json)?))?));
        Ok(())
    })
}

/// Number of elements, or 0 for NULL.
///
/// # Safety
/// `poset` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pp_poset_size(poset: *const PpPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.0.size())
}

/// # Safety
/// `poset` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_poset_free(poset: *mut PpPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// A family on `[n]` from bit masks (bit `i` stands for element `i + 1`).
/// Duplicates are merged.
///
/// # Safety
/// `masks` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_family_new(
    n: usize,
    masks: *const u64,
    len: usize,
    out: *mut *mut PpFamily,
) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let masks = slice(masks, len)?;
        *out = boxed(PpFamily(lib(Family::from_masks(n, masks.iter().copied()))?));
        Ok(())
    })
}

/// Parses the family JSON format `{"n": n, "sets": [[1, 3], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_family_from_json(
    json: *const c_char,
    out: *mut *mut PpFamily,
) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = boxed(PpFamily(lib(parse_family(text(json)?))?));
        Ok(())
    })
}

/// Number of sets, or 0 for NULL.
///
/// # Safety
/// `family` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pp_family_len(family: *const PpFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.len())
}

/// Copies up to `cap` member masks, in increasing order, into `buf` and
/// stores the total number of members in `total`.
///
/// # Safety
/// `buf` must have room for `cap` values (it may be NULL when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn pp_family_masks(
    family: *const PpFamily,
    buf: *mut u64,
    cap: usize,
    total: *mut usize,
) -> PpStatus {
    guard(|| {
        let masks = deref(family)?.0.masks();
        *out_ptr(total)? = masks.len();
        let count = masks.len().min(cap);
        if count > 0 {
            if buf.is_null() {
                return Err(fail(PpStatus::NullArgument, "null buffer"));
            }
            ptr::copy_nonoverlapping(masks.as_ptr(), buf, count);
        }
        Ok(())
    })
}

/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_family_closure(
    family: *const PpFamily,
    out: *mut *mut PpFamily,
) -> PpStatus {
    guard(|| {
        let f = deref(family)?;
        let out = out_ptr(out)?;
        *out = boxed(PpFamily(lib(closure(&f.0, &limits()))?));
        Ok(())
    })
}

/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_family_is_convex(family: *const PpFamily, out: *mut bool) -> PpStatus {
    guard(|| {
        let f = deref(family)?;
        *out_ptr(out)? = lib(is_convex(&f.0, &limits()))?;
        Ok(())
    })
}

/// Whether no set of one family equals, contains or lies in a set of the other.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_families_unrelated(
    first: *const PpFamily,
    second: *const PpFamily,
    out: *mut bool,
) -> PpStatus {
    guard(|| {
        let (a, b) = (deref(first)?, deref(second)?);
        *out_ptr(out)? = lib(unrelated(&a.0, &b.0))?;
        Ok(())
    })
}

/// Number of full chains meeting the family, as a decimal string.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_chains_through(
    family: *const PpFamily,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let f = deref(family)?;
        let out = out_ptr(out)?;
        *out = owned_string(lib(chains_through(&f.0, &limits()))?.to_string());
        Ok(())
    })
}

/// # Safety
/// `family` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_family_free(family: *mut PpFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Minimum closure size over weak (or, with `strong`, induced) embeddings
/// into `B_k` for `k <= k_max`. A `k_max` of 0 searches up to the poset size.
///
/// # Safety
/// `poset` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_minimal_closure(
    poset: *const PpPoset,
    strong: bool,
    k_max: usize,
    out: *mut *mut PpCertificate,
) -> PpStatus {
    guard(|| {
        let p = deref(poset)?;
        let out = out_ptr(out)?;
        let mode = if strong { Mode::Strong } else { Mode::Weak };
        let k_max = (k_max > 0).then_some(k_max);
        *out = boxed(PpCertificate(lib(minimal_closure(
            &p.0,
            mode,
            k_max,
            &limits(),
        ))?));
        Ok(())
    })
}

/// Closure size `m`, or 0 for NULL.
///
/// # Safety
/// `cert` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pp_certificate_m(cert: *const PpCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.m)
}

/// Target lattice size `k` of the witness, or 0 for NULL.
///
/// # Safety
/// `cert` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pp_certificate_k(cert: *const PpCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.k)
}

/// Witness image masks indexed by poset element. `buf` needs room for
/// `pp_poset_size` values.
///
/// # Safety
/// `cert` must be a live handle and `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn pp_certificate_witness(
    cert: *const PpCertificate,
    buf: *mut u64,
    cap: usize,
) -> PpStatus {
    guard(|| {
        let image = deref(cert)?.0.witness.image();
        if cap < image.len() {
            return Err(fail(
                PpStatus::InvalidInput,
                format!("buffer holds {cap} values, witness has {}", image.len()),
            ));
        }
        if !image.is_empty() {
            let buf = out_ptr(buf)?;
            ptr::copy_nonoverlapping(image.as_ptr(), buf, image.len());
        }
        Ok(())
    })
}

/// The certificate in its JSON form.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_certificate_to_json(
    cert: *const PpCertificate,
    out: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let c = deref(cert)?;
        *out_ptr(out)? = owned_string(certificate_to_json(&c.0));
        Ok(())
    })
}

/// # Safety
/// `cert` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_certificate_free(cert: *mut PpCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Lays out the packing of the certificate's witness in `B_n` with words of
/// length at most `iterations`.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_plan_build(
    cert: *const PpCertificate,
    n: usize,
    iterations: usize,
    out: *mut *mut PpPlan,
) -> PpStatus {
    guard(|| {
        let c = deref(cert)?;
        let out = out_ptr(out)?;
        *out = boxed(PpPlan(lib(build_plan(
            &c.0.witness,
            n,
            iterations,
            &limits(),
        ))?));
        Ok(())
    })
}

/// Exact copy count and total number of sets, as decimal strings. Either
/// output may be NULL to skip it.
///
/// # Safety
/// `plan` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_plan_count(
    plan: *const PpPlan,
    copies: *mut *mut c_char,
    family_size: *mut *mut c_char,
) -> PpStatus {
    guard(|| {
        let (c, s) = count_copies(&deref(plan)?.0);
        if let Some(out) = copies.as_mut() {
            *out = owned_string(c.to_string());
        }
        if let Some(out) = family_size.as_mut() {
            *out = owned_string(s.to_string());
        }
        Ok(())
    })
}

/// Writes out every copy and checks that they are pairwise unrelated (and,
/// for strong witnesses, induced). Returns [`PpStatus::VerificationFailed`]
/// when they are not.
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pp_plan_verify(plan: *const PpPlan) -> PpStatus {
    guard(|| {
        let plan = &deref(plan)?.0;
        let copies = lib(materialize(plan, &limits()))?;
        let pattern = (plan.embedding.mode() == Mode::Strong).then(|| plan.embedding.image());
        let report = verify_unrelated(&copies, pattern);
        if report.passed() {
            Ok(())
        } else {
            Err(fail(PpStatus::VerificationFailed, format!("{report:?}")))
        }
    })
}

/// # Safety
/// `plan` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pp_plan_free(plan: *mut PpPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// `(k + 1) * C(n - k, floor((n - k) / 2))` as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pp_gst(k: usize, n: usize, out: *mut *mut c_char) -> PpStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = owned_string(lib(gst_formula(k, n))?.to_string());
        Ok(())
    })
}
