use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use lieforge_ffi::*;

const AFF1: &str = "algebra aff1 {\n  basis x y\n  [x,y] = y\n}\n\
                    conn lsa on aff1 {\n  x => matrix [[0, 0], [0, 1]]\n}\n\
                    check teo2(aff1, lsa)\ncheck torsion_free(aff1, lsa)\n";

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    lf_string_free(s);
    out
}

#[test]
fn parse_run_free() {
    let text = CString::new(AFF1).unwrap();
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(lf_workspace_parse(text.as_ptr(), &mut ws), LfStatus::LfOk);
        assert!(!ws.is_null());
        let mut json = ptr::null_mut();
        assert_eq!(lf_workspace_run(ws, 2, &mut json), LfStatus::LfOk);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["all_pass"], true);
        let mut dsl = ptr::null_mut();
        assert_eq!(lf_workspace_to_dsl(ws, &mut dsl), LfStatus::LfOk);
        assert_eq!(take(dsl), AFF1);
        lf_workspace_free(ws);
    }
}

#[test]
fn failing_check_status() {
    let text = CString::new(AFF1.replace(
        "x => matrix [[0, 0], [0, 1]]",
        "y => matrix [[0, 0], [0, 1]]",
    ))
    .unwrap();
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(lf_workspace_parse(text.as_ptr(), &mut ws), LfStatus::LfOk);
        let mut json = ptr::null_mut();
        let st = lf_workspace_run(ws, 0, &mut json);
        assert_ne!(st, LfStatus::LfOk);
        lf_string_free(json);
        lf_workspace_free(ws);
    }
}

#[test]
fn parse_error_sets_last_error() {
    let text = CString::new("algebra g {\n  basis x\n  [x,y] = x\n}").unwrap();
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(
            lf_workspace_parse(text.as_ptr(), &mut ws),
            LfStatus::LfParseError
        );
        assert!(ws.is_null());
        let msg = CStr::from_ptr(lf_last_error()).to_str().unwrap();
        assert!(msg.starts_with("3:6"), "{msg}");
    }
}

#[test]
fn null_arguments() {
    unsafe {
        let mut ws = ptr::null_mut();
        assert_eq!(
            lf_workspace_parse(ptr::null(), &mut ws),
            LfStatus::LfNullArgument
        );
        assert_eq!(
            lf_workspace_run(ptr::null(), 0, ptr::null_mut()),
            LfStatus::LfNullArgument
        );
        lf_workspace_free(ptr::null_mut());
        lf_string_free(ptr::null_mut());
    }
}

#[test]
fn catalog_emit() {
    let name = CString::new("euclid").unwrap();
    let params = [3usize];
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            lf_catalog_emit(name.as_ptr(), params.as_ptr(), 1, 0, &mut out),
            LfStatus::LfOk
        );
        assert!(take(out).starts_with("algebra euclid_3 {"));
        assert_eq!(
            lf_catalog_emit(name.as_ptr(), params.as_ptr(), 1, 1, &mut out),
            LfStatus::LfOk
        );
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["dim"], 6);
        let bad = CString::new("nope").unwrap();
        assert_eq!(
            lf_catalog_emit(bad.as_ptr(), ptr::null(), 0, 0, &mut out),
            LfStatus::LfNotFound
        );
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(lf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("lieforge.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "lf_workspace_parse",
        "lf_workspace_run",
        "lf_string_free",
        "lf_last_error",
        "LF_PARSE_ERROR",
    ] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"lieforge.h\"\nint main(void) { LfWorkspace *ws = 0; char *s = 0;\n\
         LfStatus st = lf_workspace_parse(\"algebra a { basis x }\", &ws);\n\
         if (st == LF_OK) { lf_workspace_run(ws, 0, &s); lf_string_free(s); lf_workspace_free(ws); }\n\
         return (int)st; }\n",
    )
    .unwrap();
    match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status()
    {
        Ok(st) => assert!(st.success(), "C compiler rejected the header"),
        Err(e) => eprintln!("no C compiler available ({e}); header syntax not checked"),
    }
}
