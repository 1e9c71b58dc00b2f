use std::ffi::{c_char, CStr, CString};
use std::ptr;

use implicit_series_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    is_string_free(s);
    out
}

unsafe fn parse(text: &str, vars: Option<&str>, order: u32) -> *mut IsSeries {
    let text = cstr(text);
    let vars = vars.map(cstr);
    let mut out = ptr::null_mut();
    let st = is_series_parse(text.as_ptr(), vars.as_ref().map_or(ptr::null(), |v| v.as_ptr()), order, order, &mut out);
    assert_eq!(st, IsStatus::Ok);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(is_last_error_message()).to_str().unwrap().to_string()
}

#[test]
fn catalan_through_the_c_interface() {
    unsafe {
        let g = parse("w + z^2", None, 6);
        let mut phi = ptr::null_mut();
        assert_eq!(is_solve(g, IsVariant::Finite, false, ptr::null(), &mut phi), IsStatus::Ok);
        assert_eq!(is_wseries_nvars(phi), 1);
        assert_eq!(is_wseries_order(phi), 6);
        let expected = ["0/1", "1/1", "1/1", "2/1", "5/1", "14/1", "42/1"];
        for (n, want) in expected.iter().enumerate() {
            let mut s = ptr::null_mut();
            assert_eq!(is_wseries_coeff(phi, &(n as u32), 1, &mut s), IsStatus::Ok);
            assert_eq!(take(s), *want);
        }
        let mut x = 0.0;
        assert_eq!(is_wseries_coeff_f64(phi, &6, 1, &mut x), IsStatus::Ok);
        assert_eq!(x, 42.0);
        let mut text = ptr::null_mut();
        assert_eq!(is_wseries_to_text(phi, &mut text), IsStatus::Ok);
        assert!(take(text).starts_with("w^[1] z^0 : 1/1\n"));
        is_wseries_free(phi);
        is_series_free(g);
    }
}

#[test]
fn every_variant_and_composition() {
    unsafe {
        let g = parse("w + w*z + z^3", None, 6);
        let h = parse("1/(1-z)", None, 6);
        let mut reference = String::new();
        for v in [IsVariant::Finite, IsVariant::Integer, IsVariant::Recurrence] {
            let mut phi = ptr::null_mut();
            assert_eq!(is_solve(g, v, false, h, &mut phi), IsStatus::Ok);
            let mut text = ptr::null_mut();
            assert_eq!(is_wseries_to_text(phi, &mut text), IsStatus::Ok);
            let text = take(text);
            if reference.is_empty() {
                reference = text;
            } else {
                assert_eq!(text, reference);
            }
            is_wseries_free(phi);
        }
        is_series_free(h);
        is_series_free(g);
    }
}

#[test]
fn inversion_and_lattice_gas() {
    unsafe {
        let f = parse("z*exp(-z)", None, 5);
        let mut inv = ptr::null_mut();
        assert_eq!(is_invert(f, 5, &mut inv), IsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(is_wseries_coeff(inv, &5, 1, &mut s), IsStatus::Ok);
        assert_eq!(take(s), "125/24");
        is_wseries_free(inv);
        is_series_free(f);

        let mut x0 = ptr::null_mut();
        assert_eq!(is_sokal_x0(4, &mut x0), IsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(is_wseries_coeff(x0, &1, 1, &mut s), IsStatus::Ok);
        assert_eq!(take(s), "1/2");
        is_wseries_free(x0);
    }
}

#[test]
fn universal_and_analytic() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(is_universal_coeff(2, [2u32, 1].as_ptr(), 2, &mut s), IsStatus::Ok);
        assert_eq!(take(s), "2");
        assert_eq!(is_universal_coeff(1, [0u32, 2].as_ptr(), 2, &mut s), IsStatus::Ok);
        assert_eq!(take(s), "0");

        let g = parse("w + z*(1-exp(-z))", None, 30);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(is_analytic_fixed_point(g, &0.1, &0.0, 1, &mut re, &mut im), IsStatus::Ok);
        assert!((re - 0.11183255915896).abs() < 1e-12, "{re}");
        assert!(im.abs() < 1e-12);
        is_series_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut out = ptr::null_mut();
        let bad = cstr("w + (z");
        assert_eq!(is_series_parse(bad.as_ptr(), ptr::null(), 4, 4, &mut out), IsStatus::Syntax);
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        let unknown = cstr("w + q");
        assert_eq!(is_series_parse(unknown.as_ptr(), ptr::null(), 4, 4, &mut out), IsStatus::UnknownIdentifier);
        assert_eq!(is_series_parse(ptr::null(), ptr::null(), 4, 4, &mut out), IsStatus::NullPointer);

        let g = parse("1 + z + w", None, 4);
        let mut phi = ptr::null_mut();
        assert_eq!(is_solve(g, IsVariant::Finite, false, ptr::null(), &mut phi), IsStatus::Domain);
        is_series_free(g);

        let g = parse("2*z + w", None, 4);
        assert_eq!(is_solve(g, IsVariant::Finite, false, ptr::null(), &mut phi), IsStatus::Condition);
        assert!(last_error().contains("normalize"), "{}", last_error());
        is_series_free(g);

        let f = parse("z^2", None, 4);
        assert_eq!(is_invert(f, 4, &mut phi), IsStatus::Domain);
        is_series_free(f);

        let two = parse("u*v + z^2", Some("u,v"), 3);
        assert_eq!(is_solve(two, IsVariant::Finite, false, ptr::null(), &mut phi), IsStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(is_wseries_coeff(phi, &1, 1, &mut s), IsStatus::Range);
        is_wseries_free(phi);
        is_series_free(two);

        assert_eq!(CStr::from_ptr(is_status_name(IsStatus::Domain)).to_str().unwrap(), "domain");
        is_series_free(ptr::null_mut());
        is_wseries_free(ptr::null_mut());
        is_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/implicit_series.h")).unwrap();
    for name in [
        "is_last_error_message",
        "is_status_name",
        "is_string_free",
        "is_series_parse",
        "is_series_free",
        "is_wseries_free",
        "is_solve",
        "is_invert",
        "is_sokal_x0",
        "is_wseries_nvars",
        "is_wseries_order",
        "is_wseries_coeff",
        "is_wseries_coeff_f64",
        "is_wseries_to_text",
        "is_universal_coeff",
        "is_analytic_fixed_point",
        "IS_STATUS_DOMAIN",
        "IS_VARIANT_RECURRENCE",
        "typedef struct IsSeries IsSeries",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
