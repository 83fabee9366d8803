use std::ffi::{CStr, CString};
use std::ptr;

use fractal_spectra_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn closed_form_spectrum_through_handles() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            fs_spectrum_closed_form(c("g").as_ptr(), 2, &mut h),
            FsStatus::Ok
        );
        let mut len = 0;
        let mut dim = 0;
        assert_eq!(fs_spectrum_len(h, &mut len), FsStatus::Ok);
        assert_eq!(fs_spectrum_dim(h, &mut dim), FsStatus::Ok);
        assert_eq!((len, dim), (4, 4));
        let (mut v, mut m) = (0.0, 0);
        assert_eq!(fs_spectrum_get(h, 0, &mut v, &mut m), FsStatus::Ok);
        assert!((v - (1.0 - 5f64.sqrt())).abs() < 1e-12 && m == 1);
        assert_eq!(fs_spectrum_get(h, 4, &mut v, &mut m), FsStatus::OutOfRange);
        fs_spectrum_free(h);
    }
}

#[test]
fn numeric_matches_closed_form() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            fs_spectrum_closed_form(c("gammabar").as_ptr(), 3, &mut a),
            FsStatus::Ok
        );
        assert_eq!(
            fs_spectrum_numeric(c("gammabar").as_ptr(), 3, &mut b),
            FsStatus::Ok
        );
        let (mut la, mut lb) = (0, 0);
        fs_spectrum_len(a, &mut la);
        fs_spectrum_len(b, &mut lb);
        assert_eq!(la, lb);
        for i in 0..la {
            let (mut va, mut ma, mut vb, mut mb) = (0.0, 0, 0.0, 0);
            fs_spectrum_get(a, i, &mut va, &mut ma);
            fs_spectrum_get(b, i, &mut vb, &mut mb);
            assert!((va - vb).abs() < 1e-9 && ma == mb);
        }
        fs_spectrum_free(a);
        fs_spectrum_free(b);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            fs_spectrum_closed_form(c("nope").as_ptr(), 1, &mut h),
            FsStatus::UnknownGroup
        );
        let msg = CStr::from_ptr(fs_last_error_message()).to_str().unwrap();
        assert!(msg.contains("nope"));
        assert_eq!(
            fs_spectrum_closed_form(ptr::null(), 1, &mut h),
            FsStatus::NullPointer
        );
        assert_eq!(
            fs_spectrum_closed_form(c("g").as_ptr(), 1, ptr::null_mut()),
            FsStatus::NullPointer
        );
        assert_eq!(
            fs_spectrum_numeric(c("g").as_ptr(), 40, &mut h),
            FsStatus::ResourceLimit
        );
        let mut g = ptr::null_mut();
        assert_eq!(
            fs_graph_new(c("g").as_ptr(), 2, 7, &mut g),
            FsStatus::InvalidArgument
        );
        fs_spectrum_free(ptr::null_mut());
        fs_graph_free(ptr::null_mut());
        fs_string_free(ptr::null_mut());
    }
}

#[test]
fn graphs_and_determinants() {
    unsafe {
        let (mut a, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            fs_graph_new(
                c("gamma").as_ptr(),
                3,
                FsConstruction::Action as u32,
                &mut a
            ),
            FsStatus::Ok
        );
        assert_eq!(
            fs_graph_new(
                c("gamma").as_ptr(),
                3,
                FsConstruction::Substitution as u32,
                &mut s
            ),
            FsStatus::Ok
        );
        let mut n = 0;
        fs_graph_vertex_count(a, &mut n);
        assert_eq!(n, 27);
        let mut iso = false;
        assert_eq!(fs_graph_isomorphic(a, s, &mut iso), FsStatus::Ok);
        assert!(iso);
        let mut text = ptr::null_mut();
        assert_eq!(fs_graph_export(a, false, &mut text), FsStatus::Ok);
        assert!(CStr::from_ptr(text)
            .to_str()
            .unwrap()
            .starts_with("digraph"));
        fs_string_free(text);
        fs_graph_free(a);
        fs_graph_free(s);

        let mut det = ptr::null_mut();
        assert_eq!(
            fs_pencil_determinant(
                c("g").as_ptr(),
                1,
                c("1").as_ptr(),
                c("0").as_ptr(),
                &mut det
            ),
            FsStatus::Ok
        );
        assert_eq!(CStr::from_ptr(det).to_str().unwrap(), "3");
        fs_string_free(det);
        assert_eq!(
            fs_pencil_determinant(
                c("g").as_ptr(),
                1,
                c("x").as_ptr(),
                c("0").as_ptr(),
                &mut det
            ),
            FsStatus::InvalidArgument
        );
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/fractal_spectra.h"
    ))
    .unwrap();
    for name in [
        "fs_spectrum_closed_form",
        "fs_spectrum_numeric",
        "fs_spectrum_get",
        "fs_spectrum_free",
        "fs_graph_new",
        "fs_graph_export",
        "fs_pencil_determinant",
        "fs_string_free",
        "fs_last_error_message",
        "FS_STATUS_RESOURCE_LIMIT",
        "typedef struct FsSpectrum FsSpectrum",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
