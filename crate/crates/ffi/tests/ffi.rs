use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use robin_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(robin_last_error_message()) }.to_string_lossy().into_owned()
}

fn disk(radius: f64) -> *mut RobinDomain {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { robin_domain_disk(radius, &mut d) }, RobinStatus::Ok);
    assert!(!d.is_null());
    d
}

#[test]
fn disk_bracket_contains_exact_value() {
    let d = disk(1.0);
    let mut b = RobinBracket::default();
    let mut exact = 0.0;
    unsafe {
        assert_eq!(robin_bracket(d, 80.0, ptr::null(), &mut b), RobinStatus::Ok);
        assert_eq!(robin_disk_exact(1.0, 80.0, &mut exact), RobinStatus::Ok);
        robin_domain_free(d);
    }
    assert!(b.lower <= exact && exact <= b.upper);
    assert_eq!(b.exterior, 0);
    assert!((b.gamma_max - 1.0).abs() < 1e-9);
    assert_eq!(last_error(), "");
}

#[test]
fn options_are_honoured() {
    let d = disk(1.0);
    let mut opts = robin_bracket_options_default();
    opts.m = 7;
    opts.paper_mode = 1;
    let mut b = RobinBracket::default();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(robin_bracket(d, 400.0, &opts, &mut b), RobinStatus::Ok);
        assert_eq!(robin_bracket_json(d, 400.0, &opts, &mut json), RobinStatus::Ok);
    }
    assert_eq!(b.m, 7);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe {
        robin_string_free(json);
        robin_domain_free(d);
    }
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["mode"], "paper-asymptotic");
    assert_eq!(value["lower"].as_f64().unwrap(), b.lower);
}

#[test]
fn errors_map_to_status_codes() {
    let lens = CString::new(
        "[[arc]]\nkind = \"circle\"\ncenter = [-0.5, 0]\nradius = 1\nspan = [\"-pi/3\", \"pi/3\"]\n\
         [[arc]]\nkind = \"circle\"\ncenter = [0.5, 0]\nradius = 1\nspan = [\"2pi/3\", \"4pi/3\"]\n",
    )
    .unwrap();
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(robin_domain_from_toml(lens.as_ptr(), &mut d), RobinStatus::Ok);
        assert_eq!(robin_domain_validate(d), RobinStatus::AssumptionViolation);
        assert!(last_error().contains("convex corner"));
        let mut b = RobinBracket::default();
        assert_eq!(robin_bracket(d, 100.0, ptr::null(), &mut b), RobinStatus::AssumptionViolation);
        robin_domain_free(d);

        let bad = CString::new("[[arc]]\nkind = \"circle\"\nradus = 1\n").unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(robin_domain_from_toml(bad.as_ptr(), &mut d), RobinStatus::Parse);
        assert!(d.is_null());
        assert!(last_error().contains("radus"));

        let mut g = RobinGroundState::default();
        assert_eq!(robin_robin_ground(0.1, 2.0, 0.5, &mut g), RobinStatus::Precondition);
        assert_eq!(robin_bracket(ptr::null(), 10.0, ptr::null(), &mut b), RobinStatus::NullPointer);
        assert_eq!(robin_disk_exact(1.0, 10.0, ptr::null_mut()), RobinStatus::NullPointer);
        let missing = CString::new("/nonexistent/domain.toml").unwrap();
        assert_eq!(robin_domain_load(missing.as_ptr(), &mut d), RobinStatus::Parse);
        robin_domain_free(ptr::null_mut());
        robin_string_free(ptr::null_mut());
    }
}

#[test]
fn model_ground_states() {
    let mut g = RobinGroundState::default();
    unsafe {
        assert_eq!(robin_robin_ground(0.5, 10.0, 1.0, &mut g), RobinStatus::Ok);
    }
    assert!((g.eigenvalue + 100.022_172_890_645_756).abs() < 1e-9);
    assert_eq!(g.strictly_inside, 1);
    unsafe {
        assert_eq!(robin_dirichlet_ground(2.0, 800.0, &mut g), RobinStatus::Ok);
    }
    assert_eq!(g.strictly_inside, 1);
    assert!(g.ln_gap.is_finite() && g.ln_gap < -1000.0);
}

#[test]
fn errors_are_per_thread() {
    let d = disk(1.0);
    let mut b = RobinBracket::default();
    unsafe { assert_eq!(robin_bracket(d, 1.0, ptr::null(), &mut b), RobinStatus::Validity) };
    let other = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(other, "");
    assert!(last_error().contains("below threshold"));
    unsafe { robin_domain_free(d) };
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/robin.h")).unwrap();
    let source = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from robin.h");
    }
    assert!(header.contains("typedef struct RobinDomain RobinDomain;"));
}

/// Compile and run the C program against the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("librobin_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let bin = out_dir.join("robin_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke program exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("<="));
}
