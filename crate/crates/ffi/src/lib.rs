//! C ABI over `orbitscope`.
//!
//! Objects are opaque heap handles created by `os_*_new` style functions and
//! released with the matching `os_*_free`. Every fallible function returns an
//! [`OsStatus`]; on failure a message is available from [`os_last_error`]
//! until the next call on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbitscope::levi::{numeric_levi_signature_with, LeviCharacter};
use orbitscope::lie_core::{Family, GroupSpec};
use orbitscope::linalg::{CVec, C64};
use orbitscope::models::{slice_point, Coords, ModelPoint, SliceId};
use orbitscope::orbits::{classify_point, domain_contains, invariant_f, DomainId, OrbitLabel};
use orbitscope::stein::verify_stein_table;
use orbitscope::Error;

/// Status codes. `OS_STATUS_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidSpec = 2,
    SpecMismatch = 3,
    ParamOutOfDomain = 4,
    IncidenceDivisor = 5,
    Unclassifiable = 6,
    DomainNotInFamily = 7,
    NotHypersurface = 8,
    DegenerateGradient = 9,
    OutOfDomain = 10,
    BufferTooSmall = 11,
    Numerical = 12,
    Other = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsFamily {
    So0 = 0,
    Su = 1,
}

/// Domains of the table; `param` is `a` for `D*`, `b` for `S*`, ignored otherwise.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsDomain {
    D1 = 0,
    D2 = 1,
    S1 = 2,
    S2 = 3,
    W11 = 4,
    W12 = 5,
    W21 = 6,
    W22 = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsOrbitKind {
    SingularZ1 = 0,
    SingularZ2 = 1,
    SingularZ3 = 2,
    Principal = 3,
    NonClosed = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OsClassification {
    pub kind: OsOrbitKind,
    /// Slice index for principal orbits, `w` index for non-closed ones, else 0.
    pub index: u8,
    /// Slice parameter for principal orbits, else NaN.
    pub param: f64,
    pub f: f64,
    pub tangent_rank: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsLeviCharacter {
    Definite = 0,
    Semidefinite = 1,
    Indefinite = 2,
    IdenticallyZero = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OsLeviSignature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
    pub character: OsLeviCharacter,
}

/// Opaque group spec.
pub struct OsSpec(GroupSpec);

/// Opaque model point.
pub struct OsPoint(ModelPoint);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OsStatus {
    match e {
        Error::InvalidSpec(_) => OsStatus::InvalidSpec,
        Error::SpecMismatch(_) => OsStatus::SpecMismatch,
        Error::ParamOutOfDomain { .. } => OsStatus::ParamOutOfDomain,
        Error::IncidenceDivisor => OsStatus::IncidenceDivisor,
        Error::Unclassifiable { .. } => OsStatus::Unclassifiable,
        Error::DomainNotInFamily(_) => OsStatus::DomainNotInFamily,
        Error::NotHypersurface { .. } => OsStatus::NotHypersurface,
        Error::DegenerateGradient => OsStatus::DegenerateGradient,
        Error::OutOfDomain => OsStatus::OutOfDomain,
        Error::Numerical(_) => OsStatus::Numerical,
        _ => OsStatus::Other,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (OsStatus, String)>>(f: F) -> OsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OsStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            OsStatus::Panic
        }
    }
}

fn lib<T>(r: orbitscope::Result<T>) -> Result<T, (OsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (OsStatus, String) {
    (OsStatus::NullArgument, "null argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (OsStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn read_cvec(re: *const f64, im: *const f64, len: usize) -> Result<CVec, (OsStatus, String)> {
    if re.is_null() || im.is_null() {
        return Err(null());
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = std::slice::from_raw_parts(im, len);
    Ok(CVec::from_iterator(len, re.iter().zip(im).map(|(a, b)| C64::new(*a, *b))))
}

fn into_handle<T>(v: T, out: *mut *mut T) -> Result<(), (OsStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    unsafe { *out = Box::into_raw(Box::new(v)) };
    Ok(())
}

fn into_c_string(s: String, out: *mut *mut c_char) -> Result<(), (OsStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| (OsStatus::Other, "interior NUL in output".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn os_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn os_spec_new(family: OsFamily, n: usize, out: *mut *mut OsSpec) -> OsStatus {
    guard(|| {
        let fam = match family {
            OsFamily::So0 => Family::SO0,
            OsFamily::Su => Family::SU,
        };
        into_handle(OsSpec(lib(GroupSpec::new(fam, n))?), out)
    })
}

/// # Safety
/// `spec` must come from [`os_spec_new`] and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn os_spec_free(spec: *mut OsSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Real dimension of `G^C / K^C`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_spec_real_dim(spec: *const OsSpec, out: *mut usize) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        if out.is_null() {
            return Err(null());
        }
        *out = s.0.real_dim();
        Ok(())
    })
}

/// Point on the hyperquadric (SO0 family) from `n + 1` complex coordinates.
///
/// # Safety
/// `re` and `im` must point to `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn os_point_new_quadric(
    spec: *const OsSpec,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut OsPoint,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let xi = read_cvec(re, im, len)?;
        into_handle(OsPoint(lib(ModelPoint::quadric(s.0, xi))?), out)
    })
}

/// Point of the pair model (SU family); each factor has `len = n + 1` coordinates.
///
/// # Safety
/// Each coordinate array must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn os_point_new_pair(
    spec: *const OsSpec,
    z_re: *const f64,
    z_im: *const f64,
    w_re: *const f64,
    w_im: *const f64,
    len: usize,
    out: *mut *mut OsPoint,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let z = read_cvec(z_re, z_im, len)?;
        let w = read_cvec(w_re, w_im, len)?;
        into_handle(OsPoint(lib(ModelPoint::pair(s.0, z, w))?), out)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_slice_point(
    spec: *const OsSpec,
    slice: u8,
    param: f64,
    out: *mut *mut OsPoint,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        into_handle(OsPoint(lib(slice_point(s.0, SliceId::new(slice), param))?), out)
    })
}

/// # Safety
/// `point` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn os_point_free(point: *mut OsPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Copies the coordinates (`xi`, or `z` followed by `w`) into caller buffers.
///
/// `len_out` always receives the required length; `BufferTooSmall` is
/// returned when `cap` is smaller.
///
/// # Safety
/// `re` and `im` must hold `cap` doubles; `len_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_point_coords(
    point: *const OsPoint,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> OsStatus {
    guard(|| {
        let p = deref(point)?;
        if len_out.is_null() {
            return Err(null());
        }
        let vals: Vec<C64> = match &p.0.coords {
            Coords::Quadric(x) => x.iter().copied().collect(),
            Coords::Pair { z, w } => z.iter().chain(w.iter()).copied().collect(),
        };
        *len_out = vals.len();
        if cap < vals.len() {
            return Err((OsStatus::BufferTooSmall, format!("need {} entries", vals.len())));
        }
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        for (k, v) in vals.iter().enumerate() {
            *re.add(k) = v.re;
            *im.add(k) = v.im;
        }
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_invariant_f(point: *const OsPoint, out: *mut f64) -> OsStatus {
    guard(|| {
        let p = deref(point)?;
        if out.is_null() {
            return Err(null());
        }
        *out = lib(invariant_f(&p.0))?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_classify(
    spec: *const OsSpec,
    point: *const OsPoint,
    out: *mut OsClassification,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let p = deref(point)?;
        if out.is_null() {
            return Err(null());
        }
        let r = lib(classify_point(s.0, &p.0))?;
        let (kind, index, param) = match r.label {
            OrbitLabel::SingularZ1 => (OsOrbitKind::SingularZ1, 0, f64::NAN),
            OrbitLabel::SingularZ2 => (OsOrbitKind::SingularZ2, 0, f64::NAN),
            OrbitLabel::SingularZ3 => (OsOrbitKind::SingularZ3, 0, f64::NAN),
            OrbitLabel::Principal { slice, param } => (OsOrbitKind::Principal, slice, param),
            OrbitLabel::NonClosed(k) => (OsOrbitKind::NonClosed, k, f64::NAN),
        };
        *out = OsClassification { kind, index, param, f: r.f, tangent_rank: r.rank };
        Ok(())
    })
}

/// Numeric Levi signature of the orbit through `point`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_levi_signature(
    spec: *const OsSpec,
    point: *const OsPoint,
    zero_threshold: f64,
    out: *mut OsLeviSignature,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let p = deref(point)?;
        if out.is_null() {
            return Err(null());
        }
        let sig = lib(numeric_levi_signature_with(s.0, &p.0, zero_threshold))?;
        let character = match sig.character {
            LeviCharacter::Definite => OsLeviCharacter::Definite,
            LeviCharacter::Semidefinite => OsLeviCharacter::Semidefinite,
            LeviCharacter::Indefinite => OsLeviCharacter::Indefinite,
            LeviCharacter::IdenticallyZero => OsLeviCharacter::IdenticallyZero,
        };
        *out = OsLeviSignature { pos: sig.pos, neg: sig.neg, zero: sig.zero, character };
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn os_domain_contains(
    spec: *const OsSpec,
    domain: OsDomain,
    param: f64,
    point: *const OsPoint,
    out: *mut bool,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let p = deref(point)?;
        if out.is_null() {
            return Err(null());
        }
        let d = match domain {
            OsDomain::D1 => DomainId::D1(param),
            OsDomain::D2 => DomainId::D2(param),
            OsDomain::S1 => DomainId::S1(param),
            OsDomain::S2 => DomainId::S2(param),
            OsDomain::W11 => DomainId::W11,
            OsDomain::W12 => DomainId::W12,
            OsDomain::W21 => DomainId::W21,
            OsDomain::W22 => DomainId::W22,
        };
        *out = lib(domain_contains(s.0, &d, &p.0))?;
        Ok(())
    })
}

/// Runs the Stein-table checks and returns the JSON report; `all_pass` may be NULL.
///
/// # Safety
/// Pointers must be valid; release the string with [`os_string_free`].
#[no_mangle]
pub unsafe extern "C" fn os_verify_table_json(
    spec: *const OsSpec,
    samples: usize,
    seed: u64,
    json_out: *mut *mut c_char,
    all_pass: *mut bool,
) -> OsStatus {
    guard(|| {
        let s = deref(spec)?;
        let rows = lib(verify_stein_table(s.0, samples, seed))?;
        if !all_pass.is_null() {
            *all_pass = rows.iter().all(|r| r.pass);
        }
        let text = serde_json::to_string(&rows).map_err(|e| (OsStatus::Other, e.to_string()))?;
        into_c_string(text, json_out)
    })
}

/// # Safety
/// `s` must come from this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn os_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn os_version() -> *const c_char {
    static V: &CStr = c"0.1.0";
    V.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_handles() {
        unsafe {
            let mut spec = ptr::null_mut();
            assert_eq!(os_spec_new(OsFamily::Su, 2, &mut spec), OsStatus::Ok);
            let mut p = ptr::null_mut();
            assert_eq!(os_slice_point(spec, 3, 0.25, &mut p), OsStatus::Ok);
            let mut cls = OsClassification { kind: OsOrbitKind::SingularZ1, index: 0, param: 0.0, f: 0.0, tangent_rank: 0 };
            assert_eq!(os_classify(spec, p, &mut cls), OsStatus::Ok);
            assert_eq!(cls.kind, OsOrbitKind::Principal);
            assert_eq!(cls.index, 3);
            assert!((cls.param - 0.25).abs() < 1e-9);

            let mut len = 0;
            assert_eq!(os_point_coords(p, ptr::null_mut(), ptr::null_mut(), 0, &mut len), OsStatus::BufferTooSmall);
            assert_eq!(len, 6);
            let (mut re, mut im) = (vec![0.0; len], vec![0.0; len]);
            assert_eq!(os_point_coords(p, re.as_mut_ptr(), im.as_mut_ptr(), len, &mut len), OsStatus::Ok);
            let mut q = ptr::null_mut();
            assert_eq!(
                os_point_new_pair(spec, re.as_ptr(), im.as_ptr(), re[3..].as_ptr(), im[3..].as_ptr(), 3, &mut q),
                OsStatus::Ok
            );
            let mut inside = false;
            assert_eq!(os_domain_contains(spec, OsDomain::D2, 0.1, q, &mut inside), OsStatus::Ok);
            assert!(inside);

            let mut sig = OsLeviSignature { pos: 0, neg: 0, zero: 0, character: OsLeviCharacter::Definite };
            assert_eq!(os_levi_signature(spec, q, 1e-8, &mut sig), OsStatus::Ok);
            assert_eq!(sig.pos + sig.neg + sig.zero, 3);

            os_point_free(p);
            os_point_free(q);
            os_spec_free(spec);
        }
    }

    #[test]
    fn errors_carry_codes_and_messages() {
        unsafe {
            let mut spec = ptr::null_mut();
            assert_eq!(os_spec_new(OsFamily::So0, 1, &mut spec), OsStatus::InvalidSpec);
            assert!(!os_last_error().is_null());
            assert_eq!(os_spec_new(OsFamily::So0, 3, &mut spec), OsStatus::Ok);
            assert!(os_last_error().is_null());
            let mut p = ptr::null_mut();
            assert_eq!(os_slice_point(spec, 1, 1.5, &mut p), OsStatus::ParamOutOfDomain);
            let mut f = 0.0;
            assert_eq!(os_invariant_f(ptr::null(), &mut f), OsStatus::NullArgument);
            let mut inside = false;
            assert_eq!(os_slice_point(spec, 2, 0.5, &mut p), OsStatus::Ok);
            assert_eq!(os_domain_contains(spec, OsDomain::W11, 0.0, p, &mut inside), OsStatus::DomainNotInFamily);
            let mut json = ptr::null_mut();
            let mut ok = false;
            assert_eq!(os_verify_table_json(spec, 5, 0, &mut json, &mut ok), OsStatus::Ok);
            assert!(ok);
            let text = CStr::from_ptr(json).to_str().unwrap();
            assert!(text.starts_with('['));
            os_string_free(json);
            os_point_free(p);
            os_spec_free(spec);
        }
    }
}
