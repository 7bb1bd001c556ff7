use la_nodal_ffi::*;
use std::ffi::CStr;
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(la_last_error()) }.to_string_lossy().into_owned()
}

fn planar_field(family: LaFamily, k: u32, num: i64, den: i64) -> *mut LaField {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { la_field_planar(family, k, num, den, &mut f) }, LaStatus::Ok, "{}", last_error());
    f
}

#[test]
fn frequency_of_homogeneous_field_is_its_degree() {
    let f = planar_field(LaFamily::Even, 4, 1, 3);
    let radii = [1.0, 0.5, 0.1, 0.01];
    let mut n = [0.0; 4];
    let st = unsafe { la_frequency(f, [0.0, 0.0].as_ptr(), radii.as_ptr(), 4, n.as_mut_ptr()) };
    assert_eq!(st, LaStatus::Ok);
    for v in n {
        assert!((v - 4.0).abs() < 1e-8, "{v}");
    }
    unsafe { la_field_free(f) };
}

#[test]
fn classification_of_mixed_field() {
    // odd cubic plus an antisymmetric term of order 1 - a + 1 = 5/2 at a = -1/2
    let e = planar_field(LaFamily::Odd, 3, -1, 2);
    let mut o = ptr::null_mut();
    assert_eq!(unsafe { la_field_antisymmetric(1, -1, 2, &mut o) }, LaStatus::Ok);
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { la_field_combine(1.0, e, 0.5, o, &mut u) }, LaStatus::Ok);
    let mut c = LaClassification { k_raw: 0.0, k_snapped: 0.0, stratum: LaStratum::Regular, parity: LaParity::None, spine_dim: 0, residual: 0.0 };
    assert_eq!(unsafe { la_classify(u, [0.0, 0.0].as_ptr(), &mut c) }, LaStatus::Ok, "{}", last_error());
    assert_eq!(c.k_snapped, 2.5);
    assert_eq!(c.stratum, LaStratum::GammaA);
    assert_eq!(c.parity, LaParity::Mixed);
    unsafe {
        la_field_free(u);
        la_field_free(o);
        la_field_free(e);
    }
}

#[test]
fn vanishing_order_and_value() {
    let alpha = [1u32, 1];
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { la_field_extension(alpha.as_ptr(), 2, 1, 4, &mut f) }, LaStatus::Ok);
    assert_eq!(unsafe { la_field_dim(f) }, 2);
    let mut v = 0.0;
    assert_eq!(unsafe { la_field_value(f, [0.5, 0.25, 0.7].as_ptr(), &mut v) }, LaStatus::Ok);
    assert!((v - 0.125).abs() < 1e-15, "{v}");
    let (mut raw, mut snapped) = (0.0, 0.0);
    assert_eq!(unsafe { la_vanishing_order(f, [0.0; 3].as_ptr(), &mut raw, &mut snapped) }, LaStatus::Ok);
    assert_eq!(snapped, 2.0);
    unsafe { la_field_free(f) };
}

#[test]
fn grid_solution_reproduces_quadratic() {
    let f = planar_field(LaFamily::Even, 2, 1, 4);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { la_solve(f, 33, 1.0, 1.0, 1e-12, &mut g) }, LaStatus::Ok, "{}", last_error());
    let (mut exact, mut approx) = (0.0, 0.0);
    let p = [0.3, 0.4];
    unsafe {
        la_field_value(f, p.as_ptr(), &mut exact);
        la_field_value(g, p.as_ptr(), &mut approx);
    }
    assert!((exact - approx).abs() < 1e-6, "{exact} vs {approx}");
    unsafe {
        la_field_free(g);
        la_field_free(f);
    }
}

#[test]
fn nodal_length_of_linear_field() {
    let f = planar_field(LaFamily::Planar, 1, 0, 1);
    let mut len = 0.0;
    assert_eq!(unsafe { la_nodal_length(f, 1.0, 128, &mut len) }, LaStatus::Ok);
    assert!((len - 2.0).abs() < 1e-3, "{len}");
    unsafe { la_field_free(f) };
}

#[test]
fn errors_are_reported() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { la_field_planar(LaFamily::Even, 3, 0, 1, &mut f) }, LaStatus::WrongParity);
    assert!(f.is_null());
    assert!(last_error().contains("even degree"), "{}", last_error());
    assert_eq!(unsafe { la_field_planar(LaFamily::Even, 2, -3, 2, &mut f) }, LaStatus::InvalidArgument);
    assert_eq!(unsafe { la_field_planar(LaFamily::Even, 2, 1, 0, &mut f) }, LaStatus::InvalidArgument);
    assert_eq!(unsafe { la_field_planar(LaFamily::Even, 2, 0, 1, ptr::null_mut()) }, LaStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { la_field_value(ptr::null(), [0.0, 0.0].as_ptr(), &mut v) }, LaStatus::NullPointer);
    let g = planar_field(LaFamily::Even, 2, 0, 1);
    // (1, 0) is not a zero of x^2/2 - y^2/2
    let (mut raw, mut snapped) = (0.0, 0.0);
    assert_eq!(unsafe { la_vanishing_order(g, [1.0, 0.0].as_ptr(), &mut raw, &mut snapped) }, LaStatus::Domain);
    unsafe { la_field_free(g) };
    assert!(unsafe { CStr::from_ptr(la_version()) }.to_str().unwrap().starts_with("0."));
}
