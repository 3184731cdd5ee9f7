use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use biframe_ffi::*;

// Three vectors against the standard basis; bounds [2, 4].
const F38: [f64; 9] = [2.0, 1.0, 1.0, -1.0, 3.0, -1.0, -1.0, 1.0, 4.0];
const E3: [f64; 9] = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
const ONES: [f64; 3] = [1.0; 3];

fn new_real(f: &[f64], g: &[f64], w: &[f64], dim: usize) -> *mut BfPair {
    let mut out = ptr::null_mut();
    let st = unsafe { bf_pair_new_real(dim, w.len(), w.as_ptr(), f.as_ptr(), g.as_ptr(), &mut out) };
    assert_eq!(st, BfStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    let p = bf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn orthonormal_pair_has_unit_bounds() {
    let p = new_real(&E3, &E3, &ONES, 3);
    let mut b = BfBounds::default();
    assert_eq!(unsafe { bf_pair_bounds(p, 1e-10, &mut b) }, BfStatus::Ok);
    assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);
    assert!(b.is_biframe && b.is_bessel);
    assert_eq!(b.hermitian_residual, 0.0);
    assert_eq!(unsafe { bf_pair_dim(p) }, 3);
    assert_eq!(unsafe { bf_pair_atom_count(p) }, 3);
    unsafe { bf_pair_free(p) };
}

#[test]
fn operator_buffer_matches_outer_product_sum() {
    let p = new_real(&F38, &E3, &ONES, 3);
    let mut buf = [f64::NAN; 18];
    assert_eq!(unsafe { bf_pair_operator(p, buf.as_mut_ptr(), buf.len()) }, BfStatus::Ok);
    // S = Σ e_k F_k^T, so row k of S is F_k.
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(buf[2 * (i * 3 + j)], F38[i * 3 + j]);
            assert_eq!(buf[2 * (i * 3 + j) + 1], 0.0);
        }
    }
    let mut small = [0.0; 4];
    assert_eq!(unsafe { bf_pair_operator(p, small.as_mut_ptr(), small.len()) }, BfStatus::Shape);
    unsafe { bf_pair_free(p) };
}

#[test]
fn canonical_duals_are_dual() {
    let p = new_real(&F38, &E3, &ONES, 3);
    for side in [BfSide::Left, BfSide::Right] {
        let mut d = ptr::null_mut();
        assert_eq!(unsafe { bf_pair_canonical_dual(p, side, 1e-10, &mut d) }, BfStatus::Ok);
        let mut r = f64::NAN;
        assert_eq!(unsafe { bf_pair_duality_residual(d, &mut r) }, BfStatus::Ok);
        assert!(r < 1e-12, "{side:?}: {r}");
        unsafe { bf_pair_free(d) };
    }
    let (mut l, mut r) = (f64::NAN, f64::NAN);
    assert_eq!(unsafe { bf_pair_reconstruction_residual(p, 1e-10, &mut l, &mut r) }, BfStatus::Ok);
    assert!(l < 1e-12 && r < 1e-12);
    unsafe { bf_pair_free(p) };
}

#[test]
fn singular_pair_reports_status_and_message() {
    let zeros = [0.0; 9];
    let p = new_real(&zeros, &E3, &ONES, 3);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_canonical_dual(p, BfSide::Right, 1e-10, &mut d) }, BfStatus::Singular);
    assert!(d.is_null());
    assert!(!last_error().is_empty());
    unsafe { bf_pair_free(p) };
}

#[test]
fn null_and_shape_errors() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_from_json(ptr::null(), &mut out) }, BfStatus::NullPointer);
    assert!(last_error().contains("json"));
    let mut b = BfBounds::default();
    assert_eq!(unsafe { bf_pair_bounds(ptr::null(), 1e-10, &mut b) }, BfStatus::NullPointer);
    assert_eq!(unsafe { bf_pair_dim(ptr::null()) }, 0);
    let w = [1.0, -1.0, 1.0];
    let st = unsafe { bf_pair_new_real(3, 3, w.as_ptr(), E3.as_ptr(), E3.as_ptr(), &mut out) };
    assert_ne!(st, BfStatus::Ok);
    let bad = CString::new("{ not json").unwrap();
    assert_eq!(unsafe { bf_pair_from_json(bad.as_ptr(), &mut out) }, BfStatus::Format);
    unsafe { bf_pair_free(ptr::null_mut()) };
}

#[test]
fn json_round_trip_and_load() {
    let p = new_real(&F38, &E3, &ONES, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_to_json(p, &mut s) }, BfStatus::Ok);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_from_json(s, &mut q) }, BfStatus::Ok);
    let (mut a, mut b) = ([0.0; 18], [0.0; 18]);
    unsafe {
        bf_pair_operator(p, a.as_mut_ptr(), 18);
        bf_pair_operator(q, b.as_mut_ptr(), 18);
    }
    assert_eq!(a, b);

    let dir = std::env::temp_dir().join(format!("bf-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.json");
    std::fs::write(&path, unsafe { CStr::from_ptr(s) }.to_bytes()).unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_load(cpath.as_ptr(), &mut r) }, BfStatus::Ok);
    let missing = CString::new(dir.join("missing.json").to_str().unwrap()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_load(missing.as_ptr(), &mut m) }, BfStatus::Io);
    std::fs::remove_dir_all(&dir).ok();
    unsafe {
        bf_string_free(s);
        bf_pair_free(p);
        bf_pair_free(q);
        bf_pair_free(r);
    }
}

#[test]
fn complex_pair_and_tensor() {
    // f = g = {(1, i)/√2, (1, -i)/√2}: orthonormal basis of C².
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let data = [h, 0.0, 0.0, h, h, 0.0, 0.0, -h];
    let w = [1.0, 1.0];
    let mut p = ptr::null_mut();
    let st = unsafe { bf_pair_new_complex(2, 2, w.as_ptr(), data.as_ptr(), data.as_ptr(), &mut p) };
    assert_eq!(st, BfStatus::Ok);
    let mut b = BfBounds::default();
    unsafe { bf_pair_bounds(p, 1e-10, &mut b) };
    assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);

    let q = new_real(&F38, &E3, &ONES, 3);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { bf_tensor_pair(p, q, &mut t) }, BfStatus::Ok);
    assert_eq!(unsafe { bf_pair_dim(t) }, 6);
    assert_eq!(unsafe { bf_pair_atom_count(t) }, 6);
    let mut tb = BfBounds::default();
    unsafe { bf_pair_bounds(t, 1e-10, &mut tb) };
    assert!((tb.lower - 2.0).abs() < 1e-12 && (tb.upper - 4.0).abs() < 1e-12);
    unsafe {
        bf_pair_free(p);
        bf_pair_free(q);
        bf_pair_free(t);
    }
}

#[test]
fn multiplier_norm_within_bound() {
    let p = new_real(&F38, &E3, &ONES, 3);
    let (mut n, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { bf_multiplier_norm(p, ptr::null(), &mut n, &mut b) }, BfStatus::Ok);
    assert!(n <= b * (1.0 + 1e-12));
    let sym = [0.5, 0.0, 2.0, 0.0, -1.0, 0.0];
    assert_eq!(unsafe { bf_multiplier_norm(p, sym.as_ptr(), &mut n, &mut b) }, BfStatus::Ok);
    assert!(n <= b * (1.0 + 1e-12));
    unsafe { bf_pair_free(p) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(bf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api_and_compiles() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/biframe.h");
    let header = std::fs::read_to_string(path).unwrap();
    for name in [
        "bf_pair_from_json",
        "bf_pair_load",
        "bf_pair_new_real",
        "bf_pair_new_complex",
        "bf_pair_free",
        "bf_pair_bounds",
        "bf_pair_operator",
        "bf_pair_canonical_dual",
        "bf_tensor_pair",
        "bf_multiplier_norm",
        "bf_last_error_message",
        "typedef struct BfPair BfPair",
        "BF_STATUS_SINGULAR = 3",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
    // Only syntax-check when a C compiler is on PATH.
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_and_runs() {
    // The static library sits next to the deps/ directory holding this test.
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libbiframe_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let manifest = env!("CARGO_MANIFEST_DIR");
    let dir = std::env::temp_dir().join(format!("bf-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bin = dir.join("smoke");
    let out = Command::new("cc")
        .args(["-Wall", "-Werror", "-I", &format!("{manifest}/include")])
        .arg(format!("{manifest}/examples/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let p = new_real(&F38, &E3, &ONES, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bf_pair_to_json(p, &mut s) }, BfStatus::Ok);
    let doc = dir.join("pair.json");
    std::fs::write(&doc, unsafe { CStr::from_ptr(s) }.to_bytes()).unwrap();
    unsafe {
        bf_string_free(s);
        bf_pair_free(p);
    }
    let run = Command::new(&bin).arg(&doc).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success() && stdout.starts_with("lower 2 upper 4 residual "), "{stdout}");
    let missing = Command::new(&bin).arg(dir.join("missing.json")).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}
