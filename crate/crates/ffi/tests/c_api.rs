use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ehrlimit_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    ehr_string_free(p);
    s
}

fn last_error() -> String {
    let p = ehr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn coefficients(s: *const EhrSimplex) -> Vec<u64> {
    let mut h = ptr::null_mut();
    assert_eq!(ehr_hstar(s, &mut h), EhrStatus::Ok);
    let out = (0..ehr_polynomial_len(h))
        .map(|i| {
            let mut c = 0;
            assert_eq!(ehr_polynomial_coeff_u64(h, i, &mut c), EhrStatus::Ok);
            c
        })
        .collect();
    ehr_polynomial_free(h);
    out
}

#[test]
fn hstar_of_named_family() {
    unsafe {
        let mut s = ptr::null_mut();
        let spec = cstr(r#"{"kind":"bidiagonal","m":2,"d":14}"#);
        assert_eq!(
            ehr_simplex_from_family(spec.as_ptr(), &mut s),
            EhrStatus::Ok
        );
        assert_eq!(ehr_simplex_dim(s), 13);
        let mut vol = ptr::null_mut();
        assert_eq!(ehr_simplex_volume(s, &mut vol), EhrStatus::Ok);
        assert_eq!(take_string(vol), "4096");
        assert_eq!(&coefficients(s)[..6], &[1, 1, 4, 20, 84, 356]);
        ehr_simplex_free(s);
    }
}

#[test]
fn simplex_from_vertex_array() {
    unsafe {
        // e_1 and e_1 + 2 e_2, origin implicit
        let coords = [1i64, 0, 1, 2];
        let mut s = ptr::null_mut();
        assert_eq!(
            ehr_simplex_from_vertices(coords.as_ptr(), 2, 2, &mut s),
            EhrStatus::Ok
        );
        assert_eq!(coefficients(s), vec![1, 1]);
        ehr_simplex_free(s);

        let segment = [-1i64, 1];
        assert_eq!(
            ehr_simplex_from_vertices(segment.as_ptr(), 2, 1, &mut s),
            EhrStatus::Ok
        );
        assert_eq!(coefficients(s), vec![1, 1]);
        ehr_simplex_free(s);
    }
}

#[test]
fn parse_text_matrix() {
    unsafe {
        let mut s = ptr::null_mut();
        let text = cstr("1 1 0\n0 2 1\n0 0 2\n");
        assert_eq!(ehr_simplex_parse(text.as_ptr(), &mut s), EhrStatus::Ok);
        assert_eq!(coefficients(s), vec![1, 1, 2]);
        ehr_simplex_free(s);
    }
}

#[test]
fn big_coefficients_as_strings() {
    unsafe {
        let mut s = ptr::null_mut();
        let spec = cstr(r#"{"kind":"bidiagonal","m":3,"d":10}"#);
        assert_eq!(
            ehr_simplex_from_family(spec.as_ptr(), &mut s),
            EhrStatus::Ok
        );
        let mut h = ptr::null_mut();
        assert_eq!(ehr_hstar(s, &mut h), EhrStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(ehr_polynomial_coeff_string(h, 0, &mut text), EhrStatus::Ok);
        assert_eq!(take_string(text), "1");
        assert_eq!(
            ehr_polynomial_coeff_string(h, 1000, &mut text),
            EhrStatus::Ok
        );
        assert_eq!(take_string(text), "0");
        ehr_polynomial_free(h);
        ehr_simplex_free(s);
    }
}

#[test]
fn limit_reports() {
    unsafe {
        let mut out = ptr::null_mut();
        let fam = cstr(r#"{"kind":"bidiagonal","m":2}"#);
        let st = ehr_limit(
            fam.as_ptr(),
            3,
            EhrLimitMode::Certified,
            0,
            0,
            1 << 22,
            &mut out,
        );
        assert_eq!(st, EhrStatus::Ok);
        let json = take_string(out);
        assert!(json.contains(r#""prefix":[1,1,4,20]"#), "{json}");

        let st = ehr_limit(
            fam.as_ptr(),
            5,
            EhrLimitMode::Certified,
            0,
            0,
            1000,
            &mut out,
        );
        assert_eq!(st, EhrStatus::BudgetExceeded);
        assert!(last_error().contains("2097152"));

        let cross = cstr(r#"{"kind":"crosspolytope"}"#);
        let st = ehr_limit(
            cross.as_ptr(),
            1,
            EhrLimitMode::Empirical,
            3,
            8,
            1 << 22,
            &mut out,
        );
        assert_eq!(st, EhrStatus::NotStable);
        assert!(take_string(out).contains(r#""unstable":[1]"#));

        let gcd = cstr(r#"{"kind":"multidiagonal","a":[4,2]}"#);
        let st = ehr_limit(
            gcd.as_ptr(),
            1,
            EhrLimitMode::Certified,
            0,
            0,
            1 << 22,
            &mut out,
        );
        assert_eq!(st, EhrStatus::InvalidArgument);
    }
}

#[test]
fn errors_and_null_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            ehr_simplex_from_family(ptr::null(), &mut s),
            EhrStatus::NullPointer
        );
        let bad = cstr("{not json");
        assert_eq!(
            ehr_simplex_from_family(bad.as_ptr(), &mut s),
            EhrStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        let flat = [0i64, 0, 1, 1, 2, 2];
        assert_eq!(
            ehr_simplex_from_vertices(flat.as_ptr(), 3, 2, &mut s),
            EhrStatus::InvalidArgument
        );
        assert_eq!(ehr_simplex_dim(ptr::null()), 0);
        assert_eq!(ehr_polynomial_len(ptr::null()), 0);
        let mut h = ptr::null_mut();
        assert_eq!(ehr_hstar(ptr::null(), &mut h), EhrStatus::NullPointer);
        ehr_simplex_free(ptr::null_mut());
        ehr_polynomial_free(ptr::null_mut());
        ehr_string_free(ptr::null_mut());

        let spec = cstr(r#"{"kind":"standard_reflexive","d":2}"#);
        assert_eq!(
            ehr_simplex_from_family(spec.as_ptr(), &mut s),
            EhrStatus::Ok
        );
        assert!(ehr_last_error_message().is_null());
        ehr_simplex_free(s);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_staticlib() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/ehrlimit.h");
    assert!(header.exists(), "header not generated");
    let lib = target_dir().join("libehrlimit_ffi.a");
    let compiler = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&compiler).arg("--version").output().is_err() {
        eprintln!("skipping C link check: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&compiler)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("1 7 15 14 15 7 1"));
    assert!(lines.next().unwrap().starts_with("invalid parameter"));
}
