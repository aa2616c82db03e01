use std::ffi::CStr;
use std::ptr;

use sto_twocenter_ffi::*;

fn last_error() -> String {
    let p = sto_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn s1(zeta: f64) -> StoOrbital {
    StoOrbital { n: 1.0, l: 0, lambda: 0, zeta }
}

#[test]
fn legendre_paths_agree() {
    let (mut a, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(sto_legendre(1, 1, 0.5, &mut a), StoStatus::Ok);
        assert_eq!(sto_legendre_recurrence(1, 1, 0.5, &mut b), StoStatus::Ok);
    }
    assert!((a - 0.75).abs() < 1e-15);
    assert!((a - b).abs() < 1e-15);
    unsafe {
        assert_eq!(sto_legendre(2, 3, 0.5, &mut a), StoStatus::DomainError);
    }
    assert!(!last_error().is_empty());
    unsafe {
        assert_eq!(sto_legendre(1, 0, 0.5, ptr::null_mut()), StoStatus::NullPointer);
    }
}

#[test]
fn product_table_handle() {
    let mut t: *mut StoProductTable = ptr::null_mut();
    unsafe {
        assert_eq!(sto_product_table_new(1, 1, 1, &mut t), StoStatus::Ok);
        assert!(!t.is_null());
        assert_eq!(sto_product_table_len(t), 4);
        let mut term = StoProductTerm::default();
        for i in 0..4 {
            assert_eq!(sto_product_table_term(t, i, &mut term), StoStatus::Ok);
        }
        assert_eq!(sto_product_table_term(t, 4, &mut term), StoStatus::DomainError);

        let (mu, nu) = (2.0f64, 0.3f64);
        let mut v = 0.0;
        assert_eq!(sto_product_table_eval(t, mu, nu, &mut v), StoStatus::Ok);
        let ca = (1.0 + mu * nu) / (mu + nu);
        let cb = (1.0 - mu * nu) / (mu - nu);
        let (mut pa, mut pb) = (0.0, 0.0);
        sto_legendre(1, 1, ca, &mut pa);
        sto_legendre(1, 1, cb, &mut pb);
        assert!((v - pa * pb).abs() < 1e-14, "{v} vs {}", pa * pb);

        assert_eq!(sto_product_table_eval(t, 0.5, nu, &mut v), StoStatus::DomainError);
        sto_product_table_free(t);
        sto_product_table_free(ptr::null_mut());
        assert_eq!(sto_product_table_len(ptr::null()), 0);

        assert_eq!(sto_product_table_new(2, 3, 4, &mut t), StoStatus::DomainError);
    }
}

#[test]
fn overlap_1s_1s() {
    let (a, b) = (s1(1.0), s1(1.0));
    let mut res = StoIntegralResult::default();
    unsafe {
        assert_eq!(sto_integral(&a, &b, 2.0, STO_KIND_OVERLAP, &mut res), StoStatus::Ok);
    }
    let want = (-2.0f64).exp() * (1.0 + 2.0 + 4.0 / 3.0);
    assert!((res.value - want).abs() < 1e-14);
    assert_eq!(res.method, STO_METHOD_ANALYTIC);

    let mut q = StoIntegralResult::default();
    unsafe {
        assert_eq!(sto_integral_quadrature(&a, &b, 2.0, STO_KIND_OVERLAP, &mut q), StoStatus::Ok);
    }
    assert_eq!(q.method, STO_METHOD_QUADRATURE);
    assert!((q.value - want).abs() < 1e-9 * want);
}

#[test]
fn integral_errors() {
    let a = StoOrbital { n: 1.5, l: 0, lambda: 0, zeta: 1.0 };
    let b = s1(1.0);
    let mut res = StoIntegralResult::default();
    unsafe {
        assert_eq!(sto_integral(&a, &b, 2.0, STO_KIND_OVERLAP, &mut res), StoStatus::Unsupported);
        assert_eq!(sto_integral(&b, &b, 2.0, 7, &mut res), StoStatus::DomainError);
        assert!(last_error().contains("kind"));
        assert_eq!(sto_integral(&b, &b, -1.0, STO_KIND_OVERLAP, &mut res), StoStatus::DomainError);
        assert_eq!(sto_integral(ptr::null(), &b, 2.0, STO_KIND_OVERLAP, &mut res), StoStatus::NullPointer);
        assert_eq!(
            sto_integral_quadrature(&a, &b, 2.0, STO_KIND_NUCLEAR_ATTRACTION_A, &mut res),
            StoStatus::Ok
        );
    }
    assert!(res.value.is_finite() && res.value > 0.0);
}

#[test]
fn auxiliary_buffers() {
    let mut buf = [0.0; 3];
    unsafe {
        assert_eq!(sto_aux_a(2, 2.0, buf.as_mut_ptr(), buf.len()), StoStatus::Ok);
    }
    assert!((buf[0] - (-2.0f64).exp() / 2.0).abs() < 1e-16);
    assert!((buf[1] - 0.75 * (-2.0f64).exp()).abs() < 1e-16);
    unsafe {
        assert_eq!(sto_aux_b(2, 0.0, buf.as_mut_ptr(), buf.len()), StoStatus::Ok);
    }
    assert_eq!(buf[0], 2.0);
    assert_eq!(buf[1], 0.0);
    unsafe {
        assert_eq!(sto_aux_a(5, 2.0, buf.as_mut_ptr(), buf.len()), StoStatus::BufferTooSmall);
        assert_eq!(sto_aux_a(1, 0.0, buf.as_mut_ptr(), buf.len()), StoStatus::DomainError);
    }
}

#[test]
fn status_strings() {
    let s = unsafe { CStr::from_ptr(sto_status_str(StoStatus::NonConvergence)) };
    assert_eq!(s.to_str().unwrap(), "quadrature did not converge");
}

#[test]
fn header_lists_every_export() {
    let header = include_str!("../include/sto_twocenter.h");
    for name in [
        "sto_last_error",
        "sto_status_str",
        "sto_legendre",
        "sto_legendre_recurrence",
        "sto_product_table_new",
        "sto_product_table_free",
        "sto_product_table_len",
        "sto_product_table_term",
        "sto_product_table_eval",
        "sto_integral",
        "sto_integral_quadrature",
        "sto_aux_a",
        "sto_aux_b",
        "typedef struct StoProductTable StoProductTable",
        "STO_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
