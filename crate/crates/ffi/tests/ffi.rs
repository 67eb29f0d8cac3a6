use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use orbitstab_ffi::*;

fn scene_path(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/scenes")
        .join(format!("{name}.json"));
    CString::new(p.to_str().unwrap()).unwrap()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn load(name: &str) -> *mut OrbitstabScene {
    let mut scene = ptr::null_mut();
    let status = unsafe { orbitstab_scene_load(scene_path(name).as_ptr(), &mut scene) };
    assert_eq!(status, OrbitstabStatus::Ok);
    assert!(!scene.is_null());
    scene
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(orbitstab_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn cyclic_stabilizer_json() {
    let scene = load("cyclic_hyperbola");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { orbitstab_cyclic_stabilizer(scene, c("phi").as_ptr(), c("p").as_ptr(), &mut out) };
    assert_eq!(status, OrbitstabStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    assert_eq!(json["case_tag"], "Cyclic_b_i");
    assert_eq!(json["relation_exponent"], -1);
    unsafe {
        orbitstab_string_free(out);
        orbitstab_scene_free(scene);
    }
}

#[test]
fn membership_and_degrees() {
    let scene = load("masejem_a");
    let mut verdict = OrbitstabVerdict::Out;
    let status = unsafe {
        orbitstab_membership(
            scene,
            c("phi").as_ptr(),
            c("p").as_ptr(),
            c("psi").as_ptr(),
            &mut verdict,
        )
    };
    assert_eq!(status, OrbitstabStatus::Ok);
    assert_eq!(verdict, OrbitstabVerdict::In);
    unsafe { orbitstab_scene_free(scene) };

    let scene = load("henon");
    let mut degrees = [0u32; 6];
    let status = unsafe { orbitstab_dynamical_degree(scene, c("phi").as_ptr(), 6, degrees.as_mut_ptr()) };
    assert_eq!(status, OrbitstabStatus::Ok);
    assert_eq!(degrees, [2, 4, 8, 16, 32, 64]);
    unsafe { orbitstab_scene_free(scene) };
}

#[test]
fn error_statuses() {
    let mut scene = ptr::null_mut();
    let bad = c(r#"{"field": {"kind": "rationals"}, "points": {"p": ["1"]}}"#);
    assert_eq!(
        unsafe { orbitstab_scene_parse(bad.as_ptr(), &mut scene) },
        OrbitstabStatus::ParseError
    );
    assert!(last_error().contains("points.p"));
    assert!(scene.is_null());
    assert_eq!(
        unsafe { orbitstab_scene_parse(ptr::null(), &mut scene) },
        OrbitstabStatus::NullPointer
    );

    let periodic = c(
        r#"{"field": {"kind": "rationals"}, "automorphisms": {"phi": [{"kind": "swap"}]}, "points": {"p": ["1", "2"]}}"#,
    );
    assert_eq!(
        unsafe { orbitstab_scene_parse(periodic.as_ptr(), &mut scene) },
        OrbitstabStatus::Ok
    );
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { orbitstab_cyclic_stabilizer(scene, c("phi").as_ptr(), c("p").as_ptr(), &mut out) };
    assert_eq!(status, OrbitstabStatus::HypothesisNotMet);
    assert!(out.is_null());
    let status = unsafe { orbitstab_cyclic_stabilizer(scene, c("nope").as_ptr(), c("p").as_ptr(), &mut out) };
    assert_eq!(status, OrbitstabStatus::InvalidArgument);
    assert!(last_error().contains("nope"));
    unsafe { orbitstab_scene_free(scene) };
}

#[test]
fn run_command_line() {
    let path = scene_path("henon");
    let args = [
        c("orbitstab"),
        c("ddeg"),
        c("--scene"),
        path,
        c("--aut"),
        c("phi"),
        c("-M"),
        c("4"),
    ];
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out: *mut c_char = ptr::null_mut();
    let mut code: c_int = -1;
    let status = unsafe { orbitstab_run(argv.len() as c_int, argv.as_ptr(), &mut out, &mut code) };
    assert_eq!(status, OrbitstabStatus::Ok);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    assert_eq!(json["dynamical_degree"]["degrees"], serde_json::json!([2, 4, 8, 16]));
    unsafe { orbitstab_string_free(out) };
    let version = unsafe { CStr::from_ptr(orbitstab_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api_and_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/orbitstab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "orbitstab_scene_load",
        "orbitstab_scene_parse",
        "orbitstab_scene_free",
        "orbitstab_cyclic_stabilizer",
        "orbitstab_membership",
        "orbitstab_dynamical_degree",
        "orbitstab_run",
        "orbitstab_string_free",
        "orbitstab_last_error",
        "typedef struct OrbitstabScene OrbitstabScene",
    ] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        "#include \"orbitstab.h\"\nint main(void) { OrbitstabScene *s = 0; return orbitstab_scene_load(\"x\", &s) == ORBITSTAB_STATUS_OK; }\n",
    )
    .unwrap();
    match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
    {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("no C compiler available, syntax check not run: {e}"),
    }
}
