use std::ffi::{c_char, CStr, CString};
use std::ptr;

use opnodal_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { opn_string_free(p) };
    s
}

fn last_error() -> String {
    let p = opn_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn z(re: f64, im: f64) -> OpnComplex {
    OpnComplex { re, im }
}

#[test]
fn tables_and_errors() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { opn_table_json(2, &mut out) }, OpnStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert!(opn_last_error().is_null());

    assert_eq!(unsafe { opn_table_json(5, &mut out) }, OpnStatus::InvalidArgument);
    assert!(last_error().contains("no table 5"));
    assert_eq!(unsafe { opn_table_json(2, ptr::null_mut()) }, OpnStatus::NullPointer);
}

#[test]
fn moduli_and_embeddings() {
    let mut d = 0i64;
    assert_eq!(unsafe { opn_moduli_dim(5, 4, &mut d) }, OpnStatus::Ok);
    assert_eq!(d, 1);
    assert_eq!(unsafe { opn_moduli_dim(20, 0, &mut d) }, OpnStatus::DomainError);

    let t = CString::new("E7+A1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { opn_embedding_json(t.as_ptr(), &mut out) }, OpnStatus::Ok);
    let v: Vec<[i32; 8]> = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v.len(), 8);
    assert_eq!(unsafe { opn_embedding_json(ptr::null(), &mut out) }, OpnStatus::NullPointer);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { opn_embedding_json(bad.as_ptr() as *const c_char, &mut out) }, OpnStatus::InvalidUtf8);
}

#[test]
fn catalog_and_config() {
    let e6 = CString::new("E6").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { opn_riccati_catalog_json(e6.as_ptr(), &mut out) }, OpnStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["loci"].as_array().unwrap().len(), 3);

    let params = [z(0.0, 0.0), z(0.0, 0.0)];
    assert_eq!(unsafe { opn_config_json(e6.as_ptr(), params.as_ptr(), 2, &mut out) }, OpnStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["configuration"], "A2");
    assert_eq!(unsafe { opn_config_json(e6.as_ptr(), params.as_ptr(), 1, &mut out) }, OpnStatus::InvalidArgument);
}

#[test]
fn trajectory_handle() {
    let e7 = CString::new("E7").unwrap();
    let params = [z(-0.5, 0.0)];
    let path = [z(0.0, 0.0), z(2.0, 0.0)];
    let mut cfg = OpnIntegratorConfig { rel_tol: 0.0, abs_tol: 0.0, max_step: 0.0, rho: 0.0, min_puncture_distance: 0.0, max_steps: 0 };
    assert_eq!(unsafe { opn_default_config(&mut cfg) }, OpnStatus::Ok);
    assert_eq!(cfg.rho, 1e3);
    let mut h = ptr::null_mut();
    let status = unsafe {
        opn_integrate(e7.as_ptr(), params.as_ptr(), 1, 0, z(-2.0, 0.0), z(0.0, 0.0), path.as_ptr(), 2, &cfg, &mut h)
    };
    assert_eq!(status, OpnStatus::Ok);
    let n = unsafe { opn_trajectory_len(h) };
    assert!(n > 10);
    assert!(unsafe { opn_trajectory_switch_count(h) } >= 1);
    let mut st = OpnTrajectoryStatus::StepLimit;
    assert_eq!(unsafe { opn_trajectory_status(h, &mut st) }, OpnStatus::Ok);
    assert_eq!(st, OpnTrajectoryStatus::Completed);
    let mut s = OpnSample::default();
    assert_eq!(unsafe { opn_trajectory_sample(h, n - 1, &mut s) }, OpnStatus::Ok);
    assert_eq!(s.t, z(2.0, 0.0));
    assert_eq!(unsafe { opn_trajectory_sample(h, n, &mut s) }, OpnStatus::InvalidArgument);
    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { opn_trajectory_csv(h, &mut csv) }, OpnStatus::Ok);
    let csv = take_string(csv);
    assert_eq!(csv.lines().count(), n + 1);
    unsafe { opn_trajectory_free(h) };
    unsafe { opn_trajectory_free(ptr::null_mut()) };
    assert_eq!(unsafe { opn_trajectory_len(ptr::null()) }, 0);
}

#[test]
fn riccati_solve_through_pole() {
    let e6 = CString::new("E6").unwrap();
    let c0 = CString::new("C0").unwrap();
    let params = [z(0.0, 0.0), z(1.0, 0.0)];
    let path = [z(0.0, 0.0), z(2.0, 0.0)];
    let mut h = ptr::null_mut();
    let status = unsafe {
        opn_riccati_solve(e6.as_ptr(), c0.as_ptr(), params.as_ptr(), 2, z(-1.0, 0.0), path.as_ptr(), 2, false, ptr::null(), &mut h)
    };
    assert_eq!(status, OpnStatus::Ok);
    assert!(unsafe { opn_trajectory_switch_count(h) } >= 1);
    unsafe { opn_trajectory_free(h) };

    let off = [z(1.0, 0.0), z(1.0, 0.0)];
    let status = unsafe {
        opn_riccati_solve(e6.as_ptr(), c0.as_ptr(), off.as_ptr(), 2, z(0.0, 0.0), path.as_ptr(), 2, true, ptr::null(), &mut h)
    };
    assert_eq!(status, OpnStatus::DomainError);
    assert!(last_error().contains("k0 = 0"));
}

#[test]
fn verify_all_reports_thirteen() {
    let mut passed = 0u32;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { opn_verify_all(1, &mut passed, &mut out) }, OpnStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    assert_eq!(passed, 13);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/opnodal.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["opn_integrate", "opn_trajectory_free", "opn_last_error", "OPN_STATUS_DOMAIN_ERROR"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ return (int)OPN_STATUS_OK; }}\n")).unwrap();
    match std::process::Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler found; header syntax not checked"),
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("opnodal-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
