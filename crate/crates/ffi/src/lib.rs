//! C ABI over the fbounds library.
//!
//! Callers work with opaque handles (`FbState`, `FbProfile`) created and
//! released through paired `_new`/`_free` calls. Every fallible function
//! returns an [`FbStatus`]; on failure a human-readable message is stored
//! per thread and can be read back with [`fb_last_error`]. No call unwinds
//! across the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::path::Path;

use libc::{c_char, size_t};
use num_complex::Complex64;

use fbounds::coherence::CoherenceProfile;
use fbounds::source::{StateInput, parse_state_spec, read_state_file};
use fbounds::{
    Basis, Error, PhiProfile, PureState, bounds_from_fidelity, coherence_bounds_from_fidelity,
    coherence_profile, profile_phi,
};

/// Outcome of a fallible call. Anything other than `Ok` leaves a message
/// readable through [`fb_last_error`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FbStatus {
    /// The call succeeded.
    Ok = 0,
    /// The input was rejected (bad state, bad dimensions, bad domain).
    InvalidArgument = 1,
    /// A numerical routine failed or two evaluation routes disagreed.
    Numerical = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    Utf8 = 4,
    /// An internal invariant was violated; the library state is unharmed.
    Panic = 5,
}

/// An owned quantum state, pure or mixed. Opaque to C.
pub struct FbState {
    inner: StateInput,
}

/// A profiled reference state: the pure state itself plus everything the
/// bounds need about it. Opaque to C.
pub struct FbProfile {
    phi: PureState,
    gme: PhiProfile,
    coh: CoherenceProfile,
}

/// All outputs of the entanglement-bound evaluation. `*_raw` fields can be
/// negative (the measurement certifies nothing); the unsuffixed fields are
/// clamped to zero.
#[repr(C)]
pub struct FbGmeBounds {
    pub fidelity: f64,
    pub s1_prime: f64,
    pub m_prime: size_t,
    pub s: f64,
    pub witness_value: f64,
    pub cren_raw: f64,
    pub cren: f64,
    pub concurrence_raw: f64,
    pub concurrence: f64,
    pub gconcurrence_raw: f64,
    pub gconcurrence: f64,
    pub geometric_raw: f64,
    pub geometric: f64,
}

/// All outputs of the coherence-bound evaluation, in the computational
/// basis. `formation_branch` is 1 for the entropy branch and 2 for the
/// linear branch of the formation bound.
#[repr(C)]
pub struct FbCoherenceBounds {
    pub fidelity: f64,
    pub d_max_sq: f64,
    pub m: size_t,
    pub d: f64,
    pub witness_value: f64,
    pub l1_raw: f64,
    pub l1: f64,
    pub geometric_raw: f64,
    pub geometric: f64,
    pub formation_raw: f64,
    pub formation: f64,
    pub formation_branch: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> FbStatus {
    if err.is_numerical() {
        FbStatus::Numerical
    } else {
        FbStatus::InvalidArgument
    }
}

/// Runs a closure that may touch caller pointers, converting panics and
/// library errors into status codes.
fn guarded(f: impl FnOnce() -> Result<(), (FbStatus, String)>) -> FbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FbStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (FbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (FbStatus, String) {
    (FbStatus::NullPointer, format!("{name} must not be null"))
}

/// Borrows a C string argument as UTF-8.
///
/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, (FbStatus, String)> {
    if ptr.is_null() {
        return Err(null_err(name));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| (FbStatus::Utf8, format!("{name} is not valid UTF-8")))
}

unsafe fn out_handle<T>(
    out: *mut *mut T,
    name: &str,
    value: T,
) -> Result<(), (FbStatus, String)> {
    if out.is_null() {
        return Err(null_err(name));
    }
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    Ok(())
}

/// Message of the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn fb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string. Never freed by the caller.
#[unsafe(no_mangle)]
pub extern "C" fn fb_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Builds a state from a factory spec such as `ghz:4`, `w:3`,
/// `cluster:5` or `wnoise:ghz:3:p=0.9`, or from a path to a state file.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
/// On success `*out` owns the state and must be released with
/// [`fb_state_free`].
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_from_spec(
    spec: *const c_char,
    out: *mut *mut FbState,
) -> FbStatus {
    guarded(|| {
        let spec = unsafe { utf8_arg(spec, "spec") }?;
        let inner = parse_state_spec(spec).map_err(lib_err)?;
        unsafe { out_handle(out, "out", FbState { inner }) }
    })
}

/// Reads a state file (JSON with `dims`, `kind`, `data`).
///
/// # Safety
/// Same contract as [`fb_state_from_spec`].
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_from_file(
    path: *const c_char,
    out: *mut *mut FbState,
) -> FbStatus {
    guarded(|| {
        let path = unsafe { utf8_arg(path, "path") }?;
        let inner = read_state_file(Path::new(path)).map_err(lib_err)?;
        unsafe { out_handle(out, "out", FbState { inner }) }
    })
}

/// Builds a pure state from raw amplitudes in the computational basis,
/// ordered with the first party as the most significant digit. `im` may be
/// null for a real state. The amplitude count must equal the product of the
/// local dimensions and the vector must already be normalized (a deviation
/// below 1e-9 is corrected silently).
///
/// # Safety
/// `dims` must point to `num_parties` entries, `re` (and `im` when non-null)
/// to `num_amplitudes` entries, and `out` must be a valid pointer. On
/// success `*out` must be released with [`fb_state_free`].
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_pure_new(
    dims: *const u32,
    num_parties: size_t,
    re: *const f64,
    im: *const f64,
    num_amplitudes: size_t,
    out: *mut *mut FbState,
) -> FbStatus {
    guarded(|| {
        if dims.is_null() {
            return Err(null_err("dims"));
        }
        if re.is_null() {
            return Err(null_err("re"));
        }
        let dims: Vec<usize> = unsafe { std::slice::from_raw_parts(dims, num_parties) }
            .iter()
            .map(|&d| d as usize)
            .collect();
        let re = unsafe { std::slice::from_raw_parts(re, num_amplitudes) };
        let amps: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = unsafe { std::slice::from_raw_parts(im, num_amplitudes) };
            re.iter()
                .zip(im)
                .map(|(&x, &y)| Complex64::new(x, y))
                .collect()
        };
        let psi = fbounds::states::from_amplitudes(&dims, &amps).map_err(lib_err)?;
        unsafe { out_handle(out, "out", FbState { inner: StateInput::Pure(psi) }) }
    })
}

/// Number of parties of the state, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_num_parties(state: *const FbState) -> size_t {
    if state.is_null() {
        return 0;
    }
    unsafe { (*state).inner.dims().len() }
}

/// Total Hilbert-space dimension of the state, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_dim(state: *const FbState) -> size_t {
    if state.is_null() {
        return 0;
    }
    unsafe { (*state).inner.dims().iter().product() }
}

/// True when the handle holds a pure state (false for null).
///
/// # Safety
/// `state` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_is_pure(state: *const FbState) -> bool {
    !state.is_null() && unsafe { (*state).inner.is_pure() }
}

/// Fidelity `<phi| rho |phi>` between a state and a pure reference.
///
/// # Safety
/// `state` and `phi` must be live handles from this library and `out` a
/// valid pointer. `phi` must hold a pure state.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_fidelity(
    state: *const FbState,
    phi: *const FbState,
    out: *mut f64,
) -> FbStatus {
    guarded(|| {
        if state.is_null() {
            return Err(null_err("state"));
        }
        if phi.is_null() {
            return Err(null_err("phi"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let phi = unsafe { &(*phi).inner };
        let Some(phi) = phi.as_pure() else {
            return Err((
                FbStatus::InvalidArgument,
                "phi must be a pure state".to_string(),
            ));
        };
        let f = unsafe { &(*state).inner }.fidelity_with(phi).map_err(lib_err)?;
        unsafe { out.write(f) };
        Ok(())
    })
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle produced by this library that has not
/// been freed yet.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_state_free(state: *mut FbState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Profiles a pure reference state: Schmidt spectra over all bipartitions
/// for the entanglement bounds, and the largest amplitude in the
/// computational basis for the coherence bounds.
///
/// # Safety
/// `phi` must be a live handle holding a pure state and `out` a valid
/// pointer. On success `*out` must be released with [`fb_profile_free`].
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_new(
    phi: *const FbState,
    out: *mut *mut FbProfile,
) -> FbStatus {
    guarded(|| {
        if phi.is_null() {
            return Err(null_err("phi"));
        }
        let Some(phi) = unsafe { &(*phi).inner }.as_pure() else {
            return Err((
                FbStatus::InvalidArgument,
                "profile requires a pure state".to_string(),
            ));
        };
        let gme = profile_phi(phi).map_err(lib_err)?;
        let coh = coherence_profile(phi, &Basis::computational()).map_err(lib_err)?;
        unsafe {
            out_handle(
                out,
                "out",
                FbProfile {
                    phi: phi.clone(),
                    gme,
                    coh,
                },
            )
        }
    })
}

/// Largest Schmidt coefficient squared over all bipartitions, or NaN for a
/// null handle.
///
/// # Safety
/// `profile` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_s1_prime(profile: *const FbProfile) -> f64 {
    if profile.is_null() {
        return f64::NAN;
    }
    unsafe { (*profile).gme.s1_prime() }
}

/// Smallest one-sided dimension maximized over bipartitions, or 0 for a
/// null handle.
///
/// # Safety
/// `profile` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_m_prime(profile: *const FbProfile) -> size_t {
    if profile.is_null() {
        return 0;
    }
    unsafe { (*profile).gme.m_prime() }
}

/// Largest amplitude modulus squared in the computational basis, or NaN for
/// a null handle.
///
/// # Safety
/// `profile` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_d_max_sq(profile: *const FbProfile) -> f64 {
    if profile.is_null() {
        return f64::NAN;
    }
    unsafe { (*profile).coh.d_max_sq }
}

/// Hilbert-space dimension used by the coherence bounds, or 0 for a null
/// handle.
///
/// # Safety
/// `profile` must be null or a live handle from this library.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_m(profile: *const FbProfile) -> size_t {
    if profile.is_null() {
        return 0;
    }
    unsafe { (*profile).coh.m }
}

/// Releases a profile handle. Null is ignored.
///
/// # Safety
/// `profile` must be null or a handle produced by this library that has not
/// been freed yet.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_profile_free(profile: *mut FbProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}

fn fill_gme(profile: &FbProfile, fidelity: f64, out: &mut FbGmeBounds) -> Result<(), (FbStatus, String)> {
    let rep = bounds_from_fidelity(fidelity, None, &profile.gme).map_err(lib_err)?;
    *out = FbGmeBounds {
        fidelity: rep.fidelity,
        s1_prime: rep.s1_prime,
        m_prime: rep.m_prime,
        s: rep.s,
        witness_value: rep.witness_value,
        cren_raw: rep.cren.raw,
        cren: rep.cren.value,
        concurrence_raw: rep.concurrence.raw,
        concurrence: rep.concurrence.value,
        gconcurrence_raw: rep.gconcurrence.raw,
        gconcurrence: rep.gconcurrence.value,
        geometric_raw: rep.geometric.raw,
        geometric: rep.geometric.value,
    };
    Ok(())
}

fn fill_coherence(
    profile: &FbProfile,
    fidelity: f64,
    out: &mut FbCoherenceBounds,
) -> Result<(), (FbStatus, String)> {
    let rep = coherence_bounds_from_fidelity(fidelity, &profile.coh).map_err(lib_err)?;
    *out = FbCoherenceBounds {
        fidelity: rep.fidelity,
        d_max_sq: rep.d_max_sq,
        m: rep.m,
        d: rep.d,
        witness_value: rep.witness_value,
        l1_raw: rep.l1.raw,
        l1: rep.l1.value,
        geometric_raw: rep.geometric.raw,
        geometric: rep.geometric.value,
        formation_raw: rep.formation.raw,
        formation: rep.formation.value,
        formation_branch: rep.formation_branch.index(),
    };
    Ok(())
}

/// Entanglement bounds from an externally measured fidelity.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_gme_bounds_from_fidelity(
    profile: *const FbProfile,
    fidelity: f64,
    out: *mut FbGmeBounds,
) -> FbStatus {
    guarded(|| {
        if profile.is_null() {
            return Err(null_err("profile"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        fill_gme(unsafe { &*profile }, fidelity, unsafe { &mut *out })
    })
}

/// Entanglement bounds for a concrete state; the fidelity with the profiled
/// reference is computed internally.
///
/// # Safety
/// `profile` and `state` must be live handles and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_gme_bounds(
    profile: *const FbProfile,
    state: *const FbState,
    out: *mut FbGmeBounds,
) -> FbStatus {
    guarded(|| {
        if profile.is_null() {
            return Err(null_err("profile"));
        }
        if state.is_null() {
            return Err(null_err("state"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let profile = unsafe { &*profile };
        let f = unsafe { &(*state).inner }
            .fidelity_with(&profile.phi)
            .map_err(lib_err)?;
        fill_gme(profile, f, unsafe { &mut *out })
    })
}

/// Coherence bounds from an externally measured fidelity, in the
/// computational basis.
///
/// # Safety
/// `profile` must be a live handle and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_coherence_bounds_from_fidelity(
    profile: *const FbProfile,
    fidelity: f64,
    out: *mut FbCoherenceBounds,
) -> FbStatus {
    guarded(|| {
        if profile.is_null() {
            return Err(null_err("profile"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        fill_coherence(unsafe { &*profile }, fidelity, unsafe { &mut *out })
    })
}

/// Coherence bounds for a concrete state; the fidelity with the profiled
/// reference is computed internally.
///
/// # Safety
/// `profile` and `state` must be live handles and `out` a valid pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn fb_coherence_bounds(
    profile: *const FbProfile,
    state: *const FbState,
    out: *mut FbCoherenceBounds,
) -> FbStatus {
    guarded(|| {
        if profile.is_null() {
            return Err(null_err("profile"));
        }
        if state.is_null() {
            return Err(null_err("state"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let profile = unsafe { &*profile };
        let f = unsafe { &(*state).inner }
            .fidelity_with(&profile.phi)
            .map_err(lib_err)?;
        fill_coherence(profile, f, unsafe { &mut *out })
    })
}
