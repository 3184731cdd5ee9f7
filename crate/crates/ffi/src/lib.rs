//! C interface to the `biframe` crate.
//!
//! Every fallible function returns a [`BfStatus`]; on failure a message is
//! stored per thread and can be read with [`bf_last_error_message`]. Handles
//! are opaque and must be released with [`bf_pair_free`]. Complex arrays are
//! interleaved `(re, im)` doubles; matrices are row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use biframe::measure::{Atom, AtomSpace, Label};
use biframe::multiplier::SymbolFunction;
use biframe::{
    assemble, build_multiplier, canonical_dual, classify, document, duality_residual, reconstruct,
    tensor, BiframePair, Error, Scalar, Side, Space, Vector, VectorFamily,
};
use num_complex::Complex64;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfStatus {
    Ok = 0,
    InvalidArgument = 1,
    Shape = 2,
    Singular = 3,
    NotHermitian = 4,
    Format = 5,
    Validation = 6,
    Io = 7,
    NullPointer = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfSide {
    Left = 0,
    Right = 1,
}

/// Optimal bounds and diagnostics of a pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BfBounds {
    pub lower: f64,
    pub upper: f64,
    pub hermitian_residual: f64,
    pub imaginary_form_max: f64,
    pub is_bessel: bool,
    pub is_biframe: bool,
}

/// Opaque handle to a biframe pair.
pub struct BfPair {
    inner: BiframePair,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BfStatus {
    match e {
        Error::InvalidArgument(_) => BfStatus::InvalidArgument,
        Error::Shape(_) => BfStatus::Shape,
        Error::SingularOperator { .. } => BfStatus::Singular,
        Error::NotHermitian { .. } => BfStatus::NotHermitian,
        Error::Format { .. } => BfStatus::Format,
        Error::Validation { .. } => BfStatus::Validation,
        Error::Io { .. } => BfStatus::Io,
    }
}

struct Fail(BfStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn null(what: &str) -> Fail {
    set_error(format!("null pointer: {what}"));
    Fail(BfStatus::NullPointer)
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BfStatus::Ok
        }
        Ok(Err(Fail(status))) => status,
        Err(_) => {
            set_error("internal panic".into());
            BfStatus::Panic
        }
    }
}

unsafe fn pair_ref<'a>(p: *const BfPair, what: &str) -> Result<&'a BiframePair, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn write_handle(out: *mut *mut BfPair, pair: BiframePair) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(BfPair { inner: pair }));
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        Fail(BfStatus::InvalidArgument)
    })
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn pair_from_parts(
    space: Space,
    weights: &[f64],
    f: Vec<Scalar>,
    g: Vec<Scalar>,
) -> Result<BiframePair, Error> {
    let atoms = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| Atom { label: Label::Index(i), weight: w })
        .collect();
    let atoms = Arc::new(AtomSpace::from_atoms(atoms)?);
    let dim = space.dim();
    let family = |data: Vec<Scalar>| -> Result<VectorFamily, Error> {
        let vectors = data
            .chunks(dim)
            .map(|c| Vector::new(space, c.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        VectorFamily::new(space, Arc::clone(&atoms), vectors)
    };
    BiframePair::new(family(f)?, family(g)?)
}

/// Parses a pair from a JSON document (NUL-terminated UTF-8).
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_from_json(json: *const c_char, out: *mut *mut BfPair) -> BfStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        write_handle(out, document::load_str(text)?.pair)
    })
}

/// Loads a pair from a JSON document on disk.
///
/// # Safety
/// `path` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_load(path: *const c_char, out: *mut *mut BfPair) -> BfStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        write_handle(out, document::load_document(path)?.pair)
    })
}

/// Builds a real pair. `f` and `g` hold `atoms` vectors of length `dim`, one
/// after another.
///
/// # Safety
/// `weights` must hold `atoms` doubles, `f` and `g` `atoms * dim` doubles each.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_new_real(
    dim: usize,
    atoms: usize,
    weights: *const f64,
    f: *const f64,
    g: *const f64,
    out: *mut *mut BfPair,
) -> BfStatus {
    guard(|| {
        let n = atoms.checked_mul(dim).ok_or_else(|| Fail::from(Error::InvalidArgument("size overflow".into())))?;
        let w = slice(weights, atoms, "weights")?;
        let to_c = |s: &[f64]| s.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let f = to_c(slice(f, n, "f")?);
        let g = to_c(slice(g, n, "g")?);
        let space = Space::new(dim, biframe::Field::Real)?;
        write_handle(out, pair_from_parts(space, w, f, g)?)
    })
}

/// Builds a complex pair from interleaved `(re, im)` data.
///
/// # Safety
/// `weights` must hold `atoms` doubles, `f` and `g` `2 * atoms * dim` doubles each.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_new_complex(
    dim: usize,
    atoms: usize,
    weights: *const f64,
    f: *const f64,
    g: *const f64,
    out: *mut *mut BfPair,
) -> BfStatus {
    guard(|| {
        let n = atoms
            .checked_mul(dim)
            .and_then(|n| n.checked_mul(2))
            .ok_or_else(|| Fail::from(Error::InvalidArgument("size overflow".into())))?;
        let w = slice(weights, atoms, "weights")?;
        let to_c = |s: &[f64]| s.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let f = to_c(slice(f, n, "f")?);
        let g = to_c(slice(g, n, "g")?);
        let space = Space::new(dim, biframe::Field::Complex)?;
        write_handle(out, pair_from_parts(space, w, f, g)?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `pair` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_free(pair: *mut BfPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Dimension of the underlying space, or 0 for a null handle.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_dim(pair: *const BfPair) -> usize {
    pair.as_ref().map_or(0, |p| p.inner.space().dim())
}

/// Number of atoms, or 0 for a null handle.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_atom_count(pair: *const BfPair) -> usize {
    pair.as_ref().map_or(0, |p| p.inner.atom_space().len())
}

/// Optimal biframe bounds with relative tolerance `tol`.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_bounds(pair: *const BfPair, tol: f64, out: *mut BfBounds) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")).into());
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = classify(p, tol);
        *out = BfBounds {
            lower: r.lower,
            upper: r.upper,
            hermitian_residual: r.hermitian_residual,
            imaginary_form_max: r.imaginary_form_max,
            is_bessel: r.is_bessel,
            is_biframe: r.is_biframe,
        };
        Ok(())
    })
}

/// Writes the mixed operator as a row-major interleaved matrix; `len` must be
/// at least `2 * dim * dim`.
///
/// # Safety
/// `out` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_operator(pair: *const BfPair, out: *mut f64, len: usize) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        let dim = p.space().dim();
        if len < 2 * dim * dim {
            return Err(Error::Shape(format!("buffer of {len} doubles, need {}", 2 * dim * dim)).into());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let buf = std::slice::from_raw_parts_mut(out, 2 * dim * dim);
        let m = assemble(p).op;
        for i in 0..dim {
            for j in 0..dim {
                let z = m.matrix()[(i, j)];
                buf[2 * (i * dim + j)] = z.re;
                buf[2 * (i * dim + j) + 1] = z.im;
            }
        }
        Ok(())
    })
}

/// Operator norm of `S - I`; zero exactly for a dual pair.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_duality_residual(pair: *const BfPair, out: *mut f64) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        *out.as_mut().ok_or_else(|| null("out"))? = duality_residual(p);
        Ok(())
    })
}

/// Canonical dual pair on the given side.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_canonical_dual(
    pair: *const BfPair,
    side: BfSide,
    tol: f64,
    out: *mut *mut BfPair,
) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        let side = match side {
            BfSide::Left => Side::Left,
            BfSide::Right => Side::Right,
        };
        write_handle(out, canonical_dual(p, side, tol)?)
    })
}

/// Largest reconstruction residuals over the standard basis, for the left
/// and right formulas.
///
/// # Safety
/// `pair` must be a live handle; `left` and `right` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_reconstruction_residual(
    pair: *const BfPair,
    tol: f64,
    left: *mut f64,
    right: *mut f64,
) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        let (left, right) = (
            left.as_mut().ok_or_else(|| null("left"))?,
            right.as_mut().ok_or_else(|| null("right"))?,
        );
        let (mut l, mut r) = (0.0f64, 0.0f64);
        for i in 0..p.space().dim() {
            let e = Vector::basis(p.space(), i);
            let (a, b) = reconstruct(p, &e, tol)?.residuals(&e);
            l = l.max(a);
            r = r.max(b);
        }
        *left = l;
        *right = r;
        Ok(())
    })
}

/// Tensor product pair over the product measure.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_tensor_pair(a: *const BfPair, b: *const BfPair, out: *mut *mut BfPair) -> BfStatus {
    guard(|| {
        let (a, b) = (pair_ref(a, "a")?, pair_ref(b, "b")?);
        write_handle(out, tensor::tensor_pair(a, b).pair)
    })
}

/// Norm of the multiplier with symbol `symbol` (interleaved, one value per
/// atom; null means the unit symbol) and its a-priori bound.
///
/// # Safety
/// `symbol` must be null or hold `2 * atoms` doubles; `norm` and `bound` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_multiplier_norm(
    pair: *const BfPair,
    symbol: *const f64,
    norm: *mut f64,
    bound: *mut f64,
) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        let atoms = Arc::clone(p.atom_space());
        let m = if symbol.is_null() {
            SymbolFunction::unit(atoms)
        } else {
            let raw = slice(symbol, 2 * atoms.len(), "symbol")?;
            let values = raw.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            SymbolFunction::new(atoms, values)?
        };
        let (norm, bound) = (
            norm.as_mut().ok_or_else(|| null("norm"))?,
            bound.as_mut().ok_or_else(|| null("bound"))?,
        );
        let mult = build_multiplier(&m, p.f(), p.g())?;
        *norm = mult.actual_norm;
        *bound = mult.norm_bound;
        Ok(())
    })
}

/// Serializes a pair to a JSON document. Free the string with [`bf_string_free`].
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bf_pair_to_json(pair: *const BfPair, out: *mut *mut c_char) -> BfStatus {
    guard(|| {
        let p = pair_ref(pair, "pair")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = document::BiframeDocument::from_pair(p, None, Default::default());
        let s = CString::new(doc.to_json()).map_err(|_| Fail::from(Error::InvalidArgument("NUL in JSON".into())))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn bf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!(),
    };
    VERSION.as_ptr()
}
