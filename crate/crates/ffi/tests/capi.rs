use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use conformal_bounds_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let len = unsafe { cb_last_error(buf.as_mut_ptr(), buf.len()) };
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned();
    assert_eq!(s.len(), len.min(255));
    s
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(cb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn assembly_handle_life_cycle() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cb_assembly_new(CbTarget::C1Lower, &mut h) }, CbStatus::Ok);
    assert!(!h.is_null());

    let mut holds = false;
    assert_eq!(unsafe { cb_assembly_identity_holds(h, &mut holds) }, CbStatus::Ok);
    assert!(holds);

    // (n²−8n−5)/(4(n+2)(n+1)(n−1)²(n−3)) at n = 9: 4/42240.
    let mut v = 0.0;
    assert_eq!(unsafe { cb_assembly_total(h, 9, &mut v) }, CbStatus::Ok);
    assert!((v - 4.0 / 168960.0).abs() < 1e-18, "{v}");

    assert_eq!(unsafe { cb_assembly_total(h, 3, &mut v) }, CbStatus::Domain);
    assert!(last_error().contains("pole"), "{}", last_error());

    let mut needed = 0usize;
    assert_eq!(unsafe { cb_assembly_total_text(h, ptr::null_mut(), 0, &mut needed) }, CbStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed + 1];
    assert_eq!(unsafe { cb_assembly_total_text(h, buf.as_mut_ptr(), buf.len(), &mut needed) }, CbStatus::Ok);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_string();
    assert_eq!(text.len(), needed);
    assert!(text.contains("n^2 - 8*n - 5"), "{text}");

    unsafe { cb_assembly_free(h) };
    unsafe { cb_assembly_free(ptr::null_mut()) };
}

#[test]
fn null_pointers_are_rejected() {
    assert_eq!(unsafe { cb_assembly_new(CbTarget::C2Lower, ptr::null_mut()) }, CbStatus::NullPointer);
    assert_eq!(unsafe { cb_assembly_total(ptr::null(), 9, ptr::null_mut()) }, CbStatus::NullPointer);
    assert!(last_error().contains("null"));
    assert_eq!(unsafe { cb_first_positive(CbTarget::C1Lower, ptr::null_mut()) }, CbStatus::NullPointer);
}

#[test]
fn thresholds_and_identities() {
    let mut n = 0i64;
    assert_eq!(unsafe { cb_first_positive(CbTarget::C1Lower, &mut n) }, CbStatus::Ok);
    assert_eq!(n, 9);
    assert_eq!(unsafe { cb_first_positive(CbTarget::C2Lower, &mut n) }, CbStatus::Ok);
    assert_eq!(n, 7);

    let (mut passed, mut total) = (0usize, 0usize);
    assert_eq!(unsafe { cb_verify_identities(CbCase::Nonumbilic, true, &mut passed, &mut total) }, CbStatus::Ok);
    assert_eq!((passed, total), (21, 21));
    assert_eq!(unsafe { cb_verify_identities(CbCase::Umbilic, false, &mut passed, &mut total) }, CbStatus::Ok);
    assert_eq!(passed, total);
    assert!(total < 21);
}

#[test]
fn field_handle() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { cb_field_solve(CbTag::V, 9, 129, &mut f) }, CbStatus::Ok);
    let (mut nr, mut ns) = (0, 0);
    assert_eq!(unsafe { cb_field_dims(f, &mut nr, &mut ns) }, CbStatus::Ok);
    assert_eq!((nr, ns), (129, 129));

    let (mut r, mut s, mut v) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { cb_field_node(f, 0, 5, &mut r, &mut s, &mut v) }, CbStatus::Ok);
    assert_eq!(r, 0.0);
    assert!(s > 0.0 && v > 0.0);
    assert_eq!(unsafe { cb_field_node(f, 129, 0, &mut r, &mut s, &mut v) }, CbStatus::InvalidArgument);

    // The solution at (0, 1) lies between the sub- and supersolution values.
    assert_eq!(unsafe { cb_field_interpolate(f, 0.0, 1.0, &mut v) }, CbStatus::Ok);
    assert!((1.0 / 36864.0..=1.0 / 18432.0).contains(&v), "{v}");
    assert_eq!(unsafe { cb_field_interpolate(f, 1e6, 1.0, &mut v) }, CbStatus::InvalidArgument);

    let mut pass = false;
    assert_eq!(unsafe { cb_field_sandwich(f, 1e-6, &mut pass) }, CbStatus::Ok);
    assert!(pass);
    assert_eq!(unsafe { cb_field_sandwich(f, f64::NAN, &mut pass) }, CbStatus::InvalidArgument);
    unsafe { cb_field_free(f) };

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cb_field_solve(CbTag::Lambda, 2, 129, &mut g) }, CbStatus::Domain);
    assert!(g.is_null());
    assert_eq!(unsafe { cb_field_solve(CbTag::V, 9, 8, &mut g) }, CbStatus::InvalidArgument);
}

#[test]
fn numeric_constant_is_contained() {
    let mut c = CbConstant::default();
    assert_eq!(unsafe { cb_compute_constant(CbCase::Nonumbilic, 9, &mut c) }, CbStatus::Ok);
    assert!(c.contained);
    assert!(c.lower_bound <= c.value + c.error && c.value - c.error <= c.upper_bound);
    assert_eq!(unsafe { cb_compute_constant(CbCase::Umbilic, 7, &mut c) }, CbStatus::Ok);
    assert!(c.upper_bound.is_nan());
    assert!(c.value + c.error >= c.lower_bound);
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/conformal_bounds.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "cb_version",
        "cb_last_error",
        "cb_assembly_new",
        "cb_assembly_free",
        "cb_assembly_total",
        "cb_assembly_identity_holds",
        "cb_assembly_total_text",
        "cb_first_positive",
        "cb_verify_identities",
        "cb_field_solve",
        "cb_field_free",
        "cb_field_dims",
        "cb_field_node",
        "cb_field_interpolate",
        "cb_field_sandwich",
        "cb_compute_constant",
        "typedef struct CbAssembly CbAssembly;",
        "typedef struct CbField CbField;",
        "CB_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"conformal_bounds.h\"\n\
         int main(void) {\n\
           CbAssembly *h = 0;\n\
           double v = 0;\n\
           if (cb_assembly_new(CB_TARGET_C1_LOWER, &h) != CB_STATUS_OK) return 1;\n\
           CbStatus st = cb_assembly_total(h, 9, &v);\n\
           cb_assembly_free(h);\n\
           return st == CB_STATUS_OK && v > 0 ? 0 : 2;\n\
         }\n",
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());

    // Link and run against the static library when cargo has produced it.
    let exe = std::env::current_exe().unwrap();
    let Some(lib) = exe.ancestors().map(|d| d.join("libconformal_bounds_ffi.a")).find(|p| p.exists()) else {
        eprintln!("static library not built; skipping link test");
        return;
    };
    let bin = dir.path().join("use");
    let linked = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(linked.success());
    assert!(Command::new(&bin).status().unwrap().success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
