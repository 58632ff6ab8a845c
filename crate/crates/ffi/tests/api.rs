use std::ffi::{CStr, CString};
use std::ptr;

use coupler_ffi::*;

fn c(re: f64, im: f64) -> CplComplex {
    CplComplex { re, im }
}

fn input() -> CplCoherentInput {
    CplCoherentInput {
        alpha: c(0.5, 0.2),
        beta: c(0.3, -0.1),
        gamma: c(0.2, 0.15),
    }
}

fn params(gamma_nl: f64) -> *mut CplParams {
    let mut p = ptr::null_mut();
    let st = unsafe { cpl_params_new(c(0.1, 0.0), c(gamma_nl, 0.0), 1e-4, &mut p) };
    assert_eq!(st, CplStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let p = cpl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn analytic_calls() {
    let p = params(1e-3);
    let inp = input();
    unsafe {
        let mut co = std::mem::zeroed::<CplCoefficients>();
        assert_eq!(cpl_coefficients(p, 0.0, &mut co), CplStatus::Ok);
        assert_eq!(co.f[0], c(1.0, 0.0));
        assert_eq!(co.g[1], c(1.0, 0.0));

        let mut n = [0.0; 3];
        assert_eq!(
            cpl_mean_photon_numbers(p, &inp, 0.0, n.as_mut_ptr()),
            CplStatus::Ok
        );
        assert!((n[0] - 0.29).abs() < 1e-12);

        let (mut y1, mut y2) = (0.0, 0.0);
        assert_eq!(
            cpl_amp_sq(p, &inp, 30.0, CPL_MODE_A, &mut y1, &mut y2),
            CplStatus::Ok
        );
        assert_eq!(y1, -y2);

        let (mut e, mut ep) = (0.0, 0.0);
        assert_eq!(cpl_hz(p, &inp, 30.0, 1, 1, &mut e, &mut ep), CplStatus::Ok);
        assert!(e != 0.0 && e == -ep);

        let mut tri = [0.0; CPL_TRIPARTITE_LEN];
        assert_eq!(cpl_tripartite(p, &inp, 30.0, tri.as_mut_ptr()), CplStatus::Ok);
        let g2 = 0.2f64 * 0.2 + 0.15 * 0.15;
        assert_eq!(tri[0], 0.0);
        assert!((tri[2] - g2 * e).abs() < 1e-12 * e.abs());
        assert!((tri[4] - g2 * e).abs() < 1e-12 * e.abs());
        assert!((tri[6] + g2 * e).abs() < 1e-12 * e.abs());

        let mut d = 0.0;
        assert_eq!(cpl_hoa(p, &inp, 30.0, CPL_MODE_B1, 3, &mut d), CplStatus::Ok);
        assert!(d.is_finite());
        cpl_params_free(p);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut p = ptr::null_mut();
    let st = unsafe { cpl_params_new(c(0.1, 0.0), c(1e-3, 0.0), f64::NAN, &mut p) };
    assert_eq!(st, CplStatus::InvalidParams);
    assert!(p.is_null());

    let p = unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(
            cpl_params_new(c(0.1, 0.0), c(1e-3, 0.0), 0.2, &mut p),
            CplStatus::Ok
        );
        p
    };
    let mut co = unsafe { std::mem::zeroed::<CplCoefficients>() };
    assert_eq!(unsafe { cpl_coefficients(p, 1.0, &mut co) }, CplStatus::GuardBand);
    assert!(last_error().contains("guard band"));
    unsafe { cpl_params_free(p) };

    let p = params(1e-3);
    let inp = input();
    let mut d = 0.0;
    unsafe {
        assert_eq!(
            cpl_hoa(p, &inp, 1.0, CPL_MODE_A, 1, &mut d),
            CplStatus::InvalidOrder
        );
        assert_eq!(cpl_hoa(p, &inp, 1.0, 7, 2, &mut d), CplStatus::InvalidArgument);
        assert_eq!(cpl_hoa(p, ptr::null(), 1.0, 0, 2, &mut d), CplStatus::NullPointer);
        assert_eq!(
            cpl_hoa(p, &inp, 1.0, 0, 2, ptr::null_mut()),
            CplStatus::NullPointer
        );
        assert_eq!(cpl_hoa(p, &inp, 1.0, 0, 2, &mut d), CplStatus::Ok);
        assert!(cpl_last_error_message().is_null());
        cpl_params_free(p);
        cpl_params_free(ptr::null_mut());
    }
}

#[test]
fn state_round_trip() {
    let p = params(1e-3);
    let inp = input();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cpl_state_coherent(&inp, 10, 10, 6, &mut s), CplStatus::Ok);
        assert_eq!(cpl_state_dim(s), 11 * 11 * 7);

        let mut m = c(0.0, 0.0);
        let zero = [0u32; 3];
        assert_eq!(
            cpl_state_moment(s, zero.as_ptr(), [1, 0, 0].as_ptr(), &mut m),
            CplStatus::Ok
        );
        assert!((m.re - 0.5).abs() < 1e-6 && (m.im - 0.2).abs() < 1e-6);

        let mut drift = -1.0;
        assert_eq!(cpl_state_evolve(s, p, 20.0, &mut drift), CplStatus::Ok);
        assert!((0.0..1e-8).contains(&drift));

        let mut n = [0.0; 3];
        cpl_mean_photon_numbers(p, &inp, 20.0, n.as_mut_ptr());
        let mut na = c(0.0, 0.0);
        cpl_state_moment(s, [1, 0, 0].as_ptr(), [1, 0, 0].as_ptr(), &mut na);
        assert!((na.re - n[0]).abs() < 1e-4, "{} vs {}", na.re, n[0]);

        let st = cpl_state_moment(s, [9, 0, 0].as_ptr(), zero.as_ptr(), &mut m);
        assert_eq!(st, CplStatus::WordTooLong);

        cpl_state_free(s);
        cpl_state_free(ptr::null_mut());
        assert_eq!(cpl_state_dim(ptr::null()), 0);
        cpl_params_free(p);
    }
}

#[test]
fn sweep_csv_from_config_text() {
    let cfg = CString::new("profile=fig2\npoints=3\nwitness=hoa:a:2\n").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cpl_sweep_csv(cfg.as_ptr(), &mut out), CplStatus::Ok);
        let csv = CStr::from_ptr(out).to_str().unwrap().to_owned();
        cpl_string_free(out);
        assert!(csv.starts_with("z,gamma_z,hoa_a_2_analytic\n"));
        assert_eq!(csv.lines().count(), 4);

        let bad = CString::new("profile=fig2\nwitness=nope\n").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(cpl_sweep_csv(bad.as_ptr(), &mut out), CplStatus::Config);
        assert!(out.is_null());
        assert!(last_error().contains("line 2"));
    }
}
