//! C ABI over the `dseqsync` estimators.
//!
//! Complex buffers are interleaved `re, im` doubles; every `len` argument
//! counts complex samples. Handles are opaque and must be released with the
//! matching `*_free`. Every fallible call returns a [`DsStatus`].

use dseqsync::analysis::{lemma1_variance, lemma2_variance};
use dseqsync::est::{aux_channels, aux_invert, aux_ratio, estimate_zc, sumdiff_channels, sumdiff_invert, sumdiff_ratio};
use dseqsync::quant::{kappa_for_bits, Bits};
use dseqsync::seq::{aux_pair, sumdiff_pair, zc_time_symbol, AuxParams, ComplexSequence, SumDiffParams};
use dseqsync::{Complex64, Error};
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    InvalidParameter = 1,
    LengthMismatch = 2,
    Undefined = 3,
    DegenerateChannels = 4,
    OnNull = 5,
    OptimizationDegenerate = 6,
    Config = 7,
    Io = 8,
    NullPointer = 9,
    Panic = 10,
}

impl From<&Error> for DsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => DsStatus::InvalidParameter,
            Error::LengthMismatch { .. } => DsStatus::LengthMismatch,
            Error::Undefined(_) => DsStatus::Undefined,
            Error::DegenerateChannels => DsStatus::DegenerateChannels,
            Error::OnNull => DsStatus::OnNull,
            Error::OptimizationDegenerate => DsStatus::OptimizationDegenerate,
            Error::Config(_) => DsStatus::Config,
            Error::Io(_) | Error::Csv(_) => DsStatus::Io,
        }
    }
}

/// Auxiliary-sequence estimator for one `{θ, δ}` design.
pub struct DsAuxEstimator {
    params: AuxParams,
}

/// Sum/difference estimator for one `η`.
pub struct DsSumDiffEstimator {
    params: SumDiffParams,
}

/// ZC estimator holding the mapped time-domain reference symbol.
pub struct DsZcEstimator {
    reference: ComplexSequence,
}

enum Fail {
    Null,
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DsStatus::Ok,
        Ok(Err(Fail::Null)) => DsStatus::NullPointer,
        Ok(Err(Fail::Lib(e))) => DsStatus::from(&e),
        Err(_) => DsStatus::Panic,
    }
}

unsafe fn read_complex(ptr: *const f64, len: usize) -> Result<Vec<Complex64>, Fail> {
    if ptr.is_null() {
        return Err(Fail::Null);
    }
    let raw = slice::from_raw_parts(ptr, 2 * len);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

unsafe fn write_complex(ptr: *mut f64, len: usize, seq: &[Complex64]) -> Result<(), Fail> {
    if ptr.is_null() {
        return Err(Fail::Null);
    }
    if len != seq.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), got: len }.into());
    }
    let out = slice::from_raw_parts_mut(ptr, 2 * len);
    for (o, v) in out.chunks_exact_mut(2).zip(seq) {
        o[0] = v.re;
        o[1] = v.im;
    }
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = v;
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or(Fail::Null)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ds_status_str(status: DsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DsStatus::Ok => c"ok",
        DsStatus::InvalidParameter => c"invalid parameter",
        DsStatus::LengthMismatch => c"length mismatch",
        DsStatus::Undefined => c"estimate undefined",
        DsStatus::DegenerateChannels => c"degenerate auxiliary channel powers",
        DsStatus::OnNull => c"ratio evaluated on a null",
        DsStatus::OptimizationDegenerate => c"optimization degenerate",
        DsStatus::Config => c"configuration error",
        DsStatus::Io => c"i/o error",
        DsStatus::NullPointer => c"null pointer argument",
        DsStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// `θ` in radians per sample, `δ = 2k′π/N`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_aux_estimator_new(
    theta: f64,
    k_prime: usize,
    n: usize,
    out: *mut *mut DsAuxEstimator,
) -> DsStatus {
    guard(|| {
        let params = AuxParams::new(theta, k_prime, n)?;
        put(out, Box::into_raw(Box::new(DsAuxEstimator { params })))
    })
}

/// # Safety
/// `h` must come from `ds_aux_estimator_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_aux_estimator_free(h: *mut DsAuxEstimator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes the two auxiliary time-domain sequences, `len` must equal `N`.
///
/// # Safety
/// `h` valid; `d0`, `d1` hold `2·len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_aux_sequences(h: *const DsAuxEstimator, d0: *mut f64, d1: *mut f64, len: usize) -> DsStatus {
    guard(|| {
        let (a, b) = aux_pair(&handle(h)?.params)?;
        write_complex(d0, len, &a.samples)?;
        write_complex(d1, len, &b.samples)
    })
}

/// `μ̂` from the two received slots of one antenna.
///
/// # Safety
/// `h` valid; `q0`, `q1` hold `2·len` doubles; `mu_hat` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_aux_estimate(
    h: *const DsAuxEstimator,
    q0: *const f64,
    q1: *const f64,
    len: usize,
    mu_hat: *mut f64,
) -> DsStatus {
    guard(|| {
        let est = handle(h)?;
        let ch = aux_channels(&read_complex(q0, len)?, &read_complex(q1, len)?)?;
        put(mu_hat, aux_invert(aux_ratio(&ch)?, &est.params).mu_hat)
    })
}

/// `η` in radians per sample.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_sumdiff_estimator_new(eta: f64, n: usize, out: *mut *mut DsSumDiffEstimator) -> DsStatus {
    guard(|| {
        let params = SumDiffParams::new(eta, n)?;
        put(out, Box::into_raw(Box::new(DsSumDiffEstimator { params })))
    })
}

/// # Safety
/// `h` must come from `ds_sumdiff_estimator_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_sumdiff_estimator_free(h: *mut DsSumDiffEstimator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` valid; `d_sum`, `d_diff` hold `2·len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_sumdiff_sequences(
    h: *const DsSumDiffEstimator,
    d_sum: *mut f64,
    d_diff: *mut f64,
    len: usize,
) -> DsStatus {
    guard(|| {
        let (a, b) = sumdiff_pair(&handle(h)?.params)?;
        write_complex(d_sum, len, &a.samples)?;
        write_complex(d_diff, len, &b.samples)
    })
}

/// # Safety
/// `h` valid; `q_sum`, `q_diff` hold `2·len` doubles; `mu_hat` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_sumdiff_estimate(
    h: *const DsSumDiffEstimator,
    q_sum: *const f64,
    q_diff: *const f64,
    len: usize,
    mu_hat: *mut f64,
) -> DsStatus {
    guard(|| {
        let est = handle(h)?;
        let ch = sumdiff_channels(&read_complex(q_sum, len)?, &read_complex(q_diff, len)?)?;
        put(mu_hat, sumdiff_invert(sumdiff_ratio(&ch)?, &est.params).mu_hat)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_zc_estimator_new(n_zc: usize, root: usize, n: usize, out: *mut *mut DsZcEstimator) -> DsStatus {
    guard(|| {
        let reference = zc_time_symbol(n_zc, root, n)?;
        put(out, Box::into_raw(Box::new(DsZcEstimator { reference })))
    })
}

/// # Safety
/// `h` must come from `ds_zc_estimator_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ds_zc_estimator_free(h: *mut DsZcEstimator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` valid; `symbol` holds `2·len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ds_zc_symbol(h: *const DsZcEstimator, symbol: *mut f64, len: usize) -> DsStatus {
    guard(|| write_complex(symbol, len, &handle(h)?.reference.samples))
}

/// # Safety
/// `h` valid; `q` holds `2·len` doubles; `mu_hat` writable.
#[no_mangle]
pub unsafe extern "C" fn ds_zc_estimate(h: *const DsZcEstimator, q: *const f64, len: usize, mu_hat: *mut f64) -> DsStatus {
    guard(|| {
        let est = handle(h)?;
        put(mu_hat, estimate_zc(&read_complex(q, len)?, &est.reference.samples)?.mu_hat)
    })
}

/// Quantizer NMSE; `bits = 0` means infinite resolution.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_kappa_for_bits(bits: u8, out: *mut f64) -> DsStatus {
    guard(|| {
        let b = if bits == 0 { Bits::Infinite } else { Bits::Finite(bits) };
        put(out, kappa_for_bits(b)?)
    })
}

/// Auxiliary-design `var(μ̂)`; `+∞` at formula singularities.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_lemma1_variance(
    n: usize,
    kappa: f64,
    theta: f64,
    delta: f64,
    mu: f64,
    gamma: f64,
    alpha: f64,
    out: *mut f64,
) -> DsStatus {
    guard(|| put(out, lemma1_variance(n, kappa, theta, delta, mu, gamma, alpha)?.variance))
}

/// Sum/difference-design `var(μ̂)`; `+∞` at formula singularities.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_lemma2_variance(
    n: usize,
    kappa: f64,
    eta: f64,
    mu: f64,
    gamma: f64,
    beta: f64,
    out: *mut f64,
) -> DsStatus {
    guard(|| put(out, lemma2_variance(n, kappa, eta, mu, gamma, beta)?.variance))
}
