use std::ffi::CStr;
use std::ptr;

use quadlat_ffi::*;

fn last_error() -> String {
    unsafe {
        let mut buf = vec![0 as std::ffi::c_char; 256];
        ql_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn ring(d: i64) -> *mut QlRing {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(ql_ring_new(d, &mut r), QlStatus::Ok);
        r
    }
}

#[test]
fn ring_lifecycle_and_queries() {
    unsafe {
        let r = ring(3);
        assert_eq!(ql_ring_d(r), 3);
        assert!(ql_ring_is_euclidean(r));
        assert!((ql_ring_covering_radius(r) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let (mut a, mut b) = (0, 0);
        // 0.5 + 0.866i is ω itself
        assert_eq!(ql_quantize(r, 0.5, 0.75f64.sqrt(), &mut a, &mut b), QlStatus::Ok);
        assert_eq!((a, b), (0, 1));
        ql_ring_free(r);
        ql_ring_free(ptr::null_mut());
    }
}

#[test]
fn bad_inputs_report_status_and_message() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(ql_ring_new(4, &mut r), QlStatus::InvalidRing);
        assert!(r.is_null());
        assert!(last_error().contains("square-free"));
        assert_eq!(ql_ring_new(1, ptr::null_mut()), QlStatus::NullPointer);
        let (mut a, mut b) = (0, 0);
        assert_eq!(ql_quantize(ptr::null(), 0.0, 0.0, &mut a, &mut b), QlStatus::NullPointer);
        assert_eq!(ql_ring_d(ptr::null()), 0);
        assert!(ql_ring_covering_radius(ptr::null()).is_nan());
    }
}

#[test]
fn error_message_is_truncated_and_cleared() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(ql_ring_new(-2, &mut r), QlStatus::InvalidRing);
        let full = ql_last_error_message(ptr::null_mut(), 0);
        assert!(full > 8);
        let mut small = [0 as std::ffi::c_char; 5];
        assert_eq!(ql_last_error_message(small.as_mut_ptr(), small.len()), full);
        assert_eq!(small[4], 0);
        let r = ring(1);
        assert_eq!(ql_last_error_message(ptr::null_mut(), 0), 0);
        ql_ring_free(r);
    }
}

/// A 2-D basis over Z[ω] whose Gauss reduction has squared norms 16 and 28.
#[test]
fn gauss_and_alll_through_the_abi() {
    unsafe {
        let r = ring(3);
        let w = (0.5, 0.75f64.sqrt());
        let z = |a: f64, b: f64| (a + b * w.0, b * w.1);
        let cols = [z(4.0, 1.0), z(-1.0, 5.0), z(1.0, 4.0), z(1.0, 2.0)];
        let re: Vec<f64> = cols.iter().map(|c| c.0).collect();
        let im: Vec<f64> = cols.iter().map(|c| c.1).collect();
        let mut basis = ptr::null_mut();
        assert_eq!(ql_basis_new(r, 2, re.as_ptr(), im.as_ptr(), &mut basis), QlStatus::Ok);
        assert_eq!(ql_basis_dim(basis), 2);

        let mut red = ptr::null_mut();
        assert_eq!(ql_gauss_reduce(basis, &mut red), QlStatus::Ok);
        let mut norms = [0.0; 2];
        assert_eq!(ql_reduction_squared_norms(red, norms.as_mut_ptr(), 2), QlStatus::Ok);
        assert!((norms[0] - 16.0).abs() < 1e-9 && (norms[1] - 28.0).abs() < 1e-9);
        assert!(!ql_reduction_non_euclidean(red));
        assert_eq!(ql_reduction_squared_norms(red, norms.as_mut_ptr(), 1), QlStatus::BufferTooSmall);
        ql_reduction_free(red);

        let mut red = ptr::null_mut();
        assert_eq!(ql_alll_reduce(basis, 0.99, &mut red), QlStatus::Ok);
        assert_eq!(ql_reduction_dim(red), 2);
        assert!(ql_reduction_bounds_hold(red));
        let (mut ua, mut ub) = ([0i64; 4], [0i64; 4]);
        assert_eq!(ql_reduction_transform(red, ua.as_mut_ptr(), ub.as_mut_ptr(), 4), QlStatus::Ok);
        let (mut rre, mut rim) = ([0.0; 4], [0.0; 4]);
        assert_eq!(ql_reduction_basis(red, rre.as_mut_ptr(), rim.as_mut_ptr(), 4), QlStatus::Ok);
        // reduced = B·U, checked in plain complex arithmetic
        let elem = |k: usize| (ua[k] as f64 + ub[k] as f64 * w.0, ub[k] as f64 * w.1);
        for j in 0..2 {
            for i in 0..2 {
                let (mut sr, mut si) = (0.0, 0.0);
                for k in 0..2 {
                    let (br, bi) = (re[k * 2 + i], im[k * 2 + i]);
                    let (ur, ui) = elem(j * 2 + k);
                    sr += br * ur - bi * ui;
                    si += br * ui + bi * ur;
                }
                assert!((sr - rre[j * 2 + i]).abs() < 1e-9 && (si - rim[j * 2 + i]).abs() < 1e-9);
            }
        }
        ql_reduction_free(red);

        let (mut a, mut b, mut norm) = ([0i64; 2], [0i64; 2], 0.0);
        assert_eq!(ql_svp(basis, a.as_mut_ptr(), b.as_mut_ptr(), 2, &mut norm), QlStatus::Ok);
        assert!((norm * norm - 16.0).abs() < 1e-9);
        ql_basis_free(basis);
        ql_ring_free(r);
    }
}

#[test]
fn dependent_basis_is_rejected() {
    unsafe {
        let r = ring(1);
        let re = [1.0, 2.0, 2.0, 4.0];
        let im = [0.0; 4];
        let mut basis = ptr::null_mut();
        assert_eq!(ql_basis_new(r, 2, re.as_ptr(), im.as_ptr(), &mut basis), QlStatus::DependentBasis);
        assert!(basis.is_null());
        assert_eq!(ql_basis_new(r, 0, re.as_ptr(), im.as_ptr(), &mut basis), QlStatus::Dimension);
        ql_ring_free(r);
    }
}

#[test]
fn gauss_needs_two_dimensions() {
    unsafe {
        let r = ring(1);
        let re = [1.0];
        let im = [0.0];
        let mut basis = ptr::null_mut();
        assert_eq!(ql_basis_new(r, 1, re.as_ptr(), im.as_ptr(), &mut basis), QlStatus::Ok);
        let mut red = ptr::null_mut();
        assert_eq!(ql_gauss_reduce(basis, &mut red), QlStatus::Dimension);
        ql_basis_free(basis);
        ql_ring_free(r);
    }
}

#[test]
fn scalar_computation_rate() {
    unsafe {
        let r = ring(1);
        let (hr, hi) = ([1.0], [0.0]);
        let (a, b) = ([1i64], [0i64]);
        let mut rate = 0.0;
        // P = 3 (linear) gives log₂ 4 = 2
        let db = 10.0 * 3f64.log10();
        assert_eq!(
            ql_computation_rate(r, 1, hr.as_ptr(), hi.as_ptr(), db, a.as_ptr(), b.as_ptr(), &mut rate),
            QlStatus::Ok
        );
        assert!((rate - 2.0).abs() < 1e-12);
        let zero = [0i64];
        assert_eq!(
            ql_computation_rate(r, 1, hr.as_ptr(), hi.as_ptr(), db, zero.as_ptr(), zero.as_ptr(), &mut rate),
            QlStatus::DependentBasis
        );
        ql_ring_free(r);
    }
}

#[test]
fn version_is_a_c_string() {
    unsafe {
        let v = CStr::from_ptr(ql_version());
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
