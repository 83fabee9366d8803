//! C interface to `fractal-spectra`.
//!
//! Results live behind opaque handles that the caller releases with the
//! matching `*_free` function. Every fallible call returns an [`FsStatus`];
//! the message for the last failure on the current thread is available from
//! [`fs_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fractal_spectra::closed_form::{closed_form_spectrum, SpectrumMulti};
use fractal_spectra::level_ops::{parse_rational, pencil_determinant};
use fractal_spectra::numeric_spectra::numeric_spectrum;
use fractal_spectra::schreier::{
    action_graph, labeled_isomorphic, substitution_graph, to_csv, to_dot, LabeledGraph,
};
use fractal_spectra::{Error, GroupPreset};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownGroup = 3,
    ResourceLimit = 4,
    OutOfRange = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FsConstruction {
    Action = 0,
    Substitution = 1,
}

/// Eigenvalues with multiplicities, ascending.
pub struct FsSpectrum(SpectrumMulti);

/// Labelled Schreier graph.
pub struct FsGraph(LabeledGraph);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: FsStatus, message: impl Into<String>) -> FsStatus {
    let msg = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

fn from_error(e: Error) -> FsStatus {
    let status = match e {
        Error::UnknownGroup(_) => FsStatus::UnknownGroup,
        Error::ResourceLimit { .. } => FsStatus::ResourceLimit,
        Error::Internal(_) => FsStatus::Internal,
        _ => FsStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FsStatus> {
    if s.is_null() {
        return Err(fail(FsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FsStatus::InvalidArgument, "argument is not UTF-8"))
}

unsafe fn read_group(s: *const c_char) -> Result<GroupPreset, FsStatus> {
    read_str(s)?.parse().map_err(from_error)
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message describing the last failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Closed-form spectrum of the level-`level` Hecke operator.
///
/// # Safety
/// `group` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_closed_form(
    group: *const c_char,
    level: u32,
    out: *mut *mut FsSpectrum,
) -> FsStatus {
    if out.is_null() {
        return fail(FsStatus::NullPointer, "null output pointer");
    }
    let g = try_status!(read_group(group));
    let s = try_status!(closed_form_spectrum(g, level as usize).map_err(from_error));
    *out = Box::into_raw(Box::new(FsSpectrum(s)));
    FsStatus::Ok
}

/// Spectrum from the dense eigensolver, multiplicities by clustering.
///
/// # Safety
/// As for [`fs_spectrum_closed_form`].
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_numeric(
    group: *const c_char,
    level: u32,
    out: *mut *mut FsSpectrum,
) -> FsStatus {
    if out.is_null() {
        return fail(FsStatus::NullPointer, "null output pointer");
    }
    let g = try_status!(read_group(group));
    let e = try_status!(numeric_spectrum(g, level as usize).map_err(from_error));
    *out = Box::into_raw(Box::new(FsSpectrum(e.clustered())));
    FsStatus::Ok
}

/// Number of distinct eigenvalues.
///
/// # Safety
/// `s` must come from this library; `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_len(s: *const FsSpectrum, len: *mut usize) -> FsStatus {
    if s.is_null() || len.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    *len = (*s).0.pairs.len();
    FsStatus::Ok
}

/// Sum of multiplicities.
///
/// # Safety
/// As for [`fs_spectrum_len`].
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_dim(s: *const FsSpectrum, dim: *mut u64) -> FsStatus {
    if s.is_null() || dim.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    *dim = (*s).0.dim;
    FsStatus::Ok
}

/// The `index`-th distinct eigenvalue and its multiplicity.
///
/// # Safety
/// As for [`fs_spectrum_len`].
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_get(
    s: *const FsSpectrum,
    index: usize,
    value: *mut f64,
    mult: *mut u64,
) -> FsStatus {
    if s.is_null() || value.is_null() || mult.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    let spectrum = &*s;
    match spectrum.0.pairs.get(index) {
        Some(p) => {
            *value = p.value;
            *mult = p.mult;
            FsStatus::Ok
        }
        None => fail(FsStatus::OutOfRange, format!("index {index} out of range")),
    }
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_spectrum_free(s: *mut FsSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Schreier graph of the level action; `construction` is an
/// [`FsConstruction`] value.
///
/// # Safety
/// `group` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_graph_new(
    group: *const c_char,
    level: u32,
    construction: u32,
    out: *mut *mut FsGraph,
) -> FsStatus {
    if out.is_null() {
        return fail(FsStatus::NullPointer, "null output pointer");
    }
    let g = try_status!(read_group(group));
    let graph = match construction {
        c if c == FsConstruction::Action as u32 => action_graph(g, level as usize),
        c if c == FsConstruction::Substitution as u32 => substitution_graph(g, level as usize),
        c => {
            return fail(
                FsStatus::InvalidArgument,
                format!("unknown construction {c}"),
            )
        }
    };
    let graph = try_status!(graph.map_err(from_error));
    *out = Box::into_raw(Box::new(FsGraph(graph)));
    FsStatus::Ok
}

/// # Safety
/// `g` must come from this library; `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_graph_vertex_count(g: *const FsGraph, count: *mut usize) -> FsStatus {
    if g.is_null() || count.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    *count = (*g).0.vertex_count();
    FsStatus::Ok
}

/// Whether a basepoint- and label-preserving isomorphism exists.
///
/// # Safety
/// Both handles must come from this library; `result` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_graph_isomorphic(
    a: *const FsGraph,
    b: *const FsGraph,
    result: *mut bool,
) -> FsStatus {
    if a.is_null() || b.is_null() || result.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    *result = labeled_isomorphic(&(*a).0, &(*b).0);
    FsStatus::Ok
}

/// DOT (`csv == false`) or CSV text of the graph. Release with
/// [`fs_string_free`].
///
/// # Safety
/// `g` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_graph_export(
    g: *const FsGraph,
    csv: bool,
    out: *mut *mut c_char,
) -> FsStatus {
    if g.is_null() || out.is_null() {
        return fail(FsStatus::NullPointer, "null pointer");
    }
    let text = if csv {
        to_csv(&(*g).0)
    } else {
        to_dot(&(*g).0)
    };
    *out = try_status!(CString::new(text).map_err(|_| fail(FsStatus::Internal, "NUL in output")))
        .into_raw();
    FsStatus::Ok
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_graph_free(g: *mut FsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Exact determinant of the operator pencil at rational `λ`, `μ` (strings
/// such as `"3/2"`), written as `"p/q"` or `"p"`.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_pencil_determinant(
    group: *const c_char,
    level: u32,
    lambda: *const c_char,
    mu: *const c_char,
    out: *mut *mut c_char,
) -> FsStatus {
    if out.is_null() {
        return fail(FsStatus::NullPointer, "null output pointer");
    }
    let g = try_status!(read_group(group));
    let l = try_status!(parse_rational(try_status!(read_str(lambda))).map_err(from_error));
    let m = try_status!(parse_rational(try_status!(read_str(mu))).map_err(from_error));
    let det = try_status!(pencil_determinant(g, level as usize, &l, &m).map_err(from_error));
    *out = CString::new(det.to_string())
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut());
    FsStatus::Ok
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
