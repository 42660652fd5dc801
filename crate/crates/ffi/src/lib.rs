//! C interface to ipskit.
//!
//! Systems and circuits are opaque handles created by `ipskit_*_parse` or
//! the builders and released with the matching `_free`. Every fallible call
//! returns an [`IpsStatus`]; on failure a message is available from
//! [`ipskit_last_error`] until the next call on the same thread. Strings
//! returned to the caller are released with [`ipskit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ipskit::circuit::{parse_circuit, write_circuit, Circuit};
use ipskit::cnf::{parse_dimacs, parse_system, translate, write_system, CnfError, PolySystem};
use ipskit::field::Prime;
use ipskit::ips::{self, Certificate, IpsError, Target, VerifyMode};
use ipskit::poly::{Caps, PolyError};
use ipskit::vnp::{self, VnpError, VnpMode, VnpOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Status codes; 1 to 3 agree with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpsStatus {
    Ok = 0,
    Rejected = 1,
    InvalidInput = 2,
    ResourceCap = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpsMode {
    Exact = 0,
    Randomized = 1,
}

/// Outcome of [`ipskit_verify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpsVerdict {
    pub accepted: bool,
    /// First failing condition (1 or 2), 0 when accepted.
    pub failure_condition: u8,
    pub trials: usize,
    /// Bound on wrongly accepting; 0 in exact mode.
    pub soundness: f64,
    /// Modulus used, 0 for exact integer arithmetic.
    pub prime: u64,
}

/// A polynomial system `F_1 = ... = F_m = 0`.
pub struct IpsSystem(PolySystem);

/// An algebraic circuit over `x` and placeholder variables.
pub struct IpsCircuit(Circuit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

struct Fail(IpsStatus, String);

impl Fail {
    fn input(e: impl std::fmt::Display) -> Self {
        Fail(IpsStatus::InvalidInput, e.to_string())
    }
}

impl From<PolyError> for Fail {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::TermBlowup { .. } | PolyError::DegreeBlowup { .. } => {
                Fail(IpsStatus::ResourceCap, e.to_string())
            }
            _ => Fail::input(e),
        }
    }
}

impl From<IpsError> for Fail {
    fn from(e: IpsError) -> Self {
        match e {
            IpsError::Poly(p) | IpsError::SplitBlowup(p) => p.into(),
            _ => Fail::input(e),
        }
    }
}

impl From<CnfError> for Fail {
    fn from(e: CnfError) -> Self {
        match e {
            CnfError::CubeTooLarge(..) => Fail(IpsStatus::ResourceCap, e.to_string()),
            _ => Fail::input(e),
        }
    }
}

impl From<VnpError> for Fail {
    fn from(e: VnpError) -> Self {
        match e {
            VnpError::CubeTooLarge { .. } => Fail(IpsStatus::ResourceCap, e.to_string()),
            _ => Fail::input(e),
        }
    }
}

/// Runs `f`, recording failures and converting panics.
fn guard(f: impl FnOnce() -> Result<IpsStatus, Fail>) -> IpsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            IpsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(IpsStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::input("string is not UTF-8"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(IpsStatus::NullPointer, "null output pointer".into()))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(IpsStatus::NullPointer, "null handle".into()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failure on this thread, or NULL. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn ipskit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ipskit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ipskit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Translates DIMACS text into a system, optionally with Boolean axioms.
///
/// # Safety
/// `dimacs` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_system_from_dimacs(
    dimacs: *const c_char,
    boolean_axioms: bool,
    out: *mut *mut IpsSystem,
) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let cnf = parse_dimacs(str_arg(dimacs)?)?;
        *out = boxed(IpsSystem(translate(&cnf, boolean_axioms)));
        Ok(IpsStatus::Ok)
    })
}

/// Parses a system in its text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_system_parse(text: *const c_char, out: *mut *mut IpsSystem) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let sys = parse_system(str_arg(text)?).map_err(Fail::input)?;
        *out = boxed(IpsSystem(sys));
        Ok(IpsStatus::Ok)
    })
}

/// Number of equations.
///
/// # Safety
/// `sys` must be a live handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn ipskit_system_len(sys: *const IpsSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.len())
}

/// Writes the system as text; free the result with [`ipskit_string_free`].
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_system_to_text(sys: *const IpsSystem, out: *mut *mut c_char) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = c_string(write_system(&ref_arg(sys)?.0));
        Ok(IpsStatus::Ok)
    })
}

/// # Safety
/// `sys` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ipskit_system_free(sys: *mut IpsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Parses an algcircuit document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_circuit_parse(text: *const c_char, out: *mut *mut IpsCircuit) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let c = parse_circuit(str_arg(text)?).map_err(Fail::input)?;
        *out = boxed(IpsCircuit(c));
        Ok(IpsStatus::Ok)
    })
}

/// Writes the circuit as an algcircuit document.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_circuit_to_text(c: *const IpsCircuit, out: *mut *mut c_char) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        *out = c_string(write_circuit(&ref_arg(c)?.0));
        Ok(IpsStatus::Ok)
    })
}

/// Node count of the circuit, 0 for NULL.
///
/// # Safety
/// `c` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn ipskit_circuit_size(c: *const IpsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ipskit_circuit_free(c: *mut IpsCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Hilbert-like certificate for an unsatisfiable CNF given as DIMACS text.
/// With `summand` set, returns instead the summand over `x` and
/// `e = x_{n+1..2n}` whose sum over `e in {0,1}^n` is the certificate.
///
/// # Safety
/// `dimacs` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_construct_vnp(
    dimacs: *const c_char,
    summand: bool,
    out: *mut *mut IpsCircuit,
) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let cnf = parse_dimacs(str_arg(dimacs)?)?;
        let mode = if summand { VnpMode::Summand } else { VnpMode::Explicit };
        *out = boxed(IpsCircuit(vnp::build_certificate(&cnf, mode, &VnpOptions::default())?));
        Ok(IpsStatus::Ok)
    })
}

/// Verifies `cert` against `sys`. `target` is NULL for a refutation and
/// otherwise the derived polynomial; `modulus` 0 keeps the default field.
/// Returns `Ok` when accepted and `Rejected` otherwise, with `out` filled
/// in both cases.
///
/// # Safety
/// `sys` and `cert` must be live handles, `target` a live handle or NULL,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ipskit_verify(
    sys: *const IpsSystem,
    cert: *const IpsCircuit,
    target: *const IpsCircuit,
    mode: IpsMode,
    trials: usize,
    seed: u64,
    modulus: u64,
    out: *mut IpsVerdict,
) -> IpsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let sys = &ref_arg(sys)?.0;
        let circuit = ref_arg(cert)?.0.clone();
        let target = match target.as_ref() {
            Some(t) => Target::Poly(t.0.clone()),
            None => Target::One,
        };
        let prime = match modulus {
            0 => None,
            p => Some(Prime::new(p).map_err(Fail::input)?),
        };
        let vm = match mode {
            IpsMode::Exact => VerifyMode::Exact { caps: Caps::default(), field: prime },
            IpsMode::Randomized => VerifyMode::Randomized { trials, prime },
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = ips::verify(&Certificate { circuit, target }, sys, vm, &mut rng)?;
        *out = IpsVerdict {
            accepted: v.accepted,
            failure_condition: v.failure_condition.unwrap_or(0),
            trials: v.trials,
            soundness: v.soundness_bound,
            prime: v.prime.map_or(0, Prime::get),
        };
        Ok(if v.accepted { IpsStatus::Ok } else { IpsStatus::Rejected })
    })
}
