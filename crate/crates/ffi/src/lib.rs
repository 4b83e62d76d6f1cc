//! C ABI for `spherekernel`.
//!
//! Models and b-tables are opaque heap handles created and released through
//! this interface. Every fallible call returns an [`SkStatus`]; on failure the
//! message is kept per thread and can be read with [`sk_last_error_message`].
//! No call unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spherekernel::deriv::{build_b_table, BTable};
use spherekernel::kernel::{phi_eval_d, phi_eval_inf};
use spherekernel::transform::{classify_d, classify_inf, derivative_at_zero_series, transform_sequence, Order};
use spherekernel::{Error, KernelSpec, SequenceModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DivergentSeries = 3,
    UnsupportedRange = 4,
    ToleranceUnreachable = 5,
    DimensionMismatch = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Coefficient model handle.
pub struct SkModel {
    model: SequenceModel,
}

/// Derivative coefficient table handle.
pub struct SkBTable {
    table: BTable,
}

/// Outcome of a smoothness classification. `unbounded` is nonzero when every
/// even derivative exists, in which case `max_ell` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SkSmoothness {
    pub max_ell: u32,
    pub unbounded: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::DivergentSeries(_) => SkStatus::DivergentSeries,
        Error::UnsupportedRange(_) => SkStatus::UnsupportedRange,
        Error::ToleranceUnreachable(_) => SkStatus::ToleranceUnreachable,
        Error::DimensionMismatch(_) => SkStatus::DimensionMismatch,
        Error::InvalidArgument(_) => SkStatus::InvalidArgument,
    }
}

enum Fail {
    Status(SkStatus, String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(SkStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SkStatus::Ok
        }
        Ok(Err(Fail::Status(status, message))) => {
            set_error(message);
            status
        }
        Ok(Err(Fail::Domain(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SkStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const SkModel) -> Result<&'a SequenceModel, Fail> {
    model.as_ref().map(|m| &m.model).ok_or_else(|| null("model"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Parses a JSON model such as `{"variant":"geometric","c":0.5,"r":0.5}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_model_from_json(json: *const c_char, out: *mut *mut SkModel) -> SkStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail::Status(SkStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let model: SequenceModel = serde_json::from_str(text)
            .map_err(|e| Fail::Status(SkStatus::InvalidArgument, format!("invalid model: {e}")))?;
        write_out(out, Box::into_raw(Box::new(SkModel { model })))
    })
}

/// # Safety
/// `model` must come from [`sk_model_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_model_free(model: *mut SkModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Kernel value on the Hilbert sphere at angle `theta`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_phi_eval_inf(model: *const SkModel, theta: f64, tol: f64, out: *mut f64) -> SkStatus {
    guard(|| {
        let spec = KernelSpec::on_hilbert_sphere(model_ref(model)?.clone());
        write_out(out, phi_eval_inf(&spec, theta, tol)?)
    })
}

/// Kernel value on `S^d` with the model read as Gegenbauer coefficients.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_phi_eval_d(
    model: *const SkModel,
    d: u32,
    theta: f64,
    tol: f64,
    out: *mut f64,
) -> SkStatus {
    guard(|| {
        let spec = KernelSpec::on_sphere(d, model_ref(model)?.clone())?;
        write_out(out, phi_eval_d(&spec, theta, tol)?)
    })
}

/// `phi^(2l)(0)` on the Hilbert sphere.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_derivative_at_zero(model: *const SkModel, ell: u32, tol: f64, out: *mut f64) -> SkStatus {
    guard(|| write_out(out, derivative_at_zero_series(model_ref(model)?, ell, tol)?))
}

/// Classifies smoothness: `d == 0` reads cosine-power coefficients on the
/// Hilbert sphere, `d > 0` reads Gegenbauer coefficients on `S^d`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sk_classify(
    model: *const SkModel,
    d: u32,
    ell_max_probe: u32,
    out: *mut SkSmoothness,
) -> SkStatus {
    guard(|| {
        let model = model_ref(model)?;
        let report = if d == 0 {
            classify_inf(model, ell_max_probe)?
        } else {
            classify_d(model, ell_max_probe)?
        };
        let value = match report.max_ell {
            Order::Finite(l) => SkSmoothness { max_ell: l, unbounded: 0 },
            Order::Unbounded => SkSmoothness { max_ell: 0, unbounded: 1 },
        };
        write_out(out, value)
    })
}

/// Circle coefficients `a_{0,1}, ..., a_{len-1,1}` written into `values`.
///
/// # Safety
/// `values` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sk_transform(model: *const SkModel, tol: f64, values: *mut f64, len: usize) -> SkStatus {
    guard(|| {
        let model = model_ref(model)?;
        if len == 0 {
            return Ok(());
        }
        if values.is_null() {
            return Err(null("values"));
        }
        let seq = transform_sequence(model, Some(len as u64 - 1), tol)?;
        let dst = std::slice::from_raw_parts_mut(values, len);
        for (slot, v) in dst.iter_mut().zip(seq.values()) {
            *slot = v;
        }
        Ok(())
    })
}

/// Builds the exact table for `cos^j` up to derivative order `max_order`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_btable_new(j: u64, max_order: u32, out: *mut *mut SkBTable) -> SkStatus {
    guard(|| {
        let table = build_b_table(j, max_order)?;
        write_out(out, Box::into_raw(Box::new(SkBTable { table })))
    })
}

/// # Safety
/// `table` must come from [`sk_btable_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_btable_free(table: *mut SkBTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Writes cell `(n1, n2)` as a NUL-terminated decimal string.
///
/// `needed` receives the string length without the terminator, also when
/// the buffer is too small, so callers can size a second attempt.
///
/// # Safety
/// `buf` must point to `len` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn sk_btable_cell(
    table: *const SkBTable,
    n1: u32,
    n2: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SkStatus {
    guard(|| {
        let table = &table.as_ref().ok_or_else(|| null("table"))?.table;
        let digits = table
            .cell(n1, n2)
            .ok_or_else(|| {
                Fail::Domain(Error::UnsupportedRange(format!(
                    "cell ({n1}, {n2}) outside table of order {}",
                    table.max_order()
                )))
            })?
            .to_string();
        if !needed.is_null() {
            needed.write(digits.len());
        }
        copy_c_string(&digits, buf, len)
    })
}

unsafe fn copy_c_string(s: &str, buf: *mut c_char, len: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if s.len() + 1 > len {
        return Err(Fail::Status(
            SkStatus::BufferTooSmall,
            format!("need {} bytes, buffer holds {len}", s.len() + 1),
        ));
    }
    ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (truncated to
/// fit) and returns its full length.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn sk_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}

/// Static name of a status code, e.g. `"DivergentSeries"`.
#[no_mangle]
pub extern "C" fn sk_status_name(status: SkStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SkStatus::Ok => b"Ok\0",
        SkStatus::NullPointer => b"NullPointer\0",
        SkStatus::InvalidArgument => b"InvalidArgument\0",
        SkStatus::DivergentSeries => b"DivergentSeries\0",
        SkStatus::UnsupportedRange => b"UnsupportedRange\0",
        SkStatus::ToleranceUnreachable => b"ToleranceUnreachable\0",
        SkStatus::DimensionMismatch => b"DimensionMismatch\0",
        SkStatus::BufferTooSmall => b"BufferTooSmall\0",
        SkStatus::Panic => b"Panic\0",
    };
    s.as_ptr() as *const c_char
}
