use std::ffi::CStr;
use std::ptr;

use kdist_ffi::*;

fn last_error() -> String {
    let len = unsafe { kdist_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0 as std::ffi::c_char; len + 1];
    unsafe { kdist_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn empty_report() -> KdistReport {
    KdistReport {
        value: f64::NAN,
        iterations: 0,
        achieved_bound: f64::NAN,
        start_index: 0,
        strategy_used: KdistStrategyUsed::ClosedForm,
        underflow_adjusted: false,
        converged: false,
    }
}

#[test]
fn kprime_with_options_handle() {
    let opts = kdist_options_new();
    unsafe {
        assert_eq!(kdist_options_set_tolerance(opts, 1e-4), KdistStatus::Ok);
        assert_eq!(
            kdist_options_set_strategy(opts, KdistStrategy::Method2 as i32),
            KdistStatus::Ok
        );
        let mut rep = empty_report();
        assert_eq!(
            kdist_kprime_cdf(5.0, 20.0, 10.0, 1.0, opts, &mut rep),
            KdistStatus::Ok
        );
        assert!((rep.value - 0.0007).abs() < 5e-5);
        assert_eq!(rep.strategy_used, KdistStrategyUsed::Method2);
        assert_eq!(rep.start_index, 59);
        assert!(rep.converged && rep.achieved_bound <= 1e-4);
        kdist_options_free(opts);
    }
}

#[test]
fn null_options_mean_defaults() {
    let mut rep = empty_report();
    let status = unsafe { kdist_ksquare_cdf(2.0, 20.0, 18.0, 46.667, 36.0, ptr::null(), &mut rep) };
    assert_eq!(status, KdistStatus::Ok);
    assert!((rep.value - 0.777_087_345).abs() < 1e-9);
    assert_eq!(rep.strategy_used, KdistStrategyUsed::Hybrid);
}

#[test]
fn invalid_option_values_are_rejected_and_kept() {
    let opts = kdist_options_new();
    unsafe {
        assert_eq!(kdist_options_set_tolerance(opts, -1.0), KdistStatus::Domain);
        assert!(last_error().contains("tolerance"));
        assert_eq!(
            kdist_options_set_hybrid_threshold(opts, 2.0),
            KdistStatus::Domain
        );
        assert_eq!(
            kdist_options_set_max_iterations(opts, 0),
            KdistStatus::Domain
        );
        assert_eq!(kdist_options_set_strategy(opts, 17), KdistStatus::Domain);
        assert!(last_error().contains("17"));
        let mut rep = empty_report();
        assert_eq!(
            kdist_kprime_cdf(3.0, 4.0, 1.0, 0.5, opts, &mut rep),
            KdistStatus::Ok
        );
        assert_eq!(last_error(), "");
        kdist_options_free(opts);
        assert_eq!(
            kdist_options_set_tolerance(ptr::null_mut(), 1e-6),
            KdistStatus::NullPointer
        );
        kdist_options_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let mut rep = empty_report();
    unsafe {
        assert_eq!(
            kdist_kprime_cdf(-1.0, 2.0, 1.0, 1.0, ptr::null(), &mut rep),
            KdistStatus::Domain
        );
        assert!(last_error().contains("q must be positive"));
        assert_eq!(
            kdist_kprime_cdf(1.0, 2.0, 1.0, 1.0, ptr::null(), ptr::null_mut()),
            KdistStatus::NullPointer
        );

        let opts = kdist_options_new();
        kdist_options_set_strategy(opts, KdistStrategy::Method2 as i32);
        let status = kdist_ksquare_cdf(10.0, 20.0, 30.0, 500.0, 0.1, opts, &mut rep);
        assert_eq!(status, KdistStatus::Underflow);

        kdist_options_set_strategy(opts, KdistStrategy::Method1 as i32);
        kdist_options_set_max_iterations(opts, 5);
        let status = kdist_ksquare_cdf(11.0, 1199.0, 1188.0, 10791.0, 972.0, opts, &mut rep);
        assert_eq!(status, KdistStatus::NotConverged);
        kdist_options_free(opts);
    }
}

#[test]
fn scalar_entry_points() {
    let mut v = f64::NAN;
    let mut w = f64::NAN;
    unsafe {
        assert_eq!(kdist_p_rep(1.10, 10, &mut v), KdistStatus::Ok);
        assert!((v - 0.776_610).abs() < 1e-6);

        assert_eq!(
            kdist_prob_replication(1.10, 10, 10, 1.734, false, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!((v - 0.333_686).abs() < 1e-6);
        assert_eq!(
            kdist_prob_replication(1.10, 10, 10, -1.734, true, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!((v - 0.027_279_5).abs() < 1e-6);

        assert_eq!(
            kdist_corr_sampling_cdf(250, 0.8, 0.75, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!((v - 0.022_699_7).abs() < 1e-7);

        assert_eq!(
            kdist_corr_confidence_limits(30, 0.6, 0.95, ptr::null(), &mut v, &mut w),
            KdistStatus::Ok
        );
        assert!(v < 0.6 && 0.6 < w);
        assert_eq!(
            kdist_corr_confidence_limits(30, 0.6, 0.95, ptr::null(), &mut v, ptr::null_mut()),
            KdistStatus::NullPointer
        );

        assert_eq!(
            kdist_mcorr_sampling_cdf(100, 5, 0.5, 0.33, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!((v - 0.006_287).abs() < 1e-5);

        assert_eq!(
            kdist_predictive_f_sf(0.0, 3, 10.0, 10.0, 0.0, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert_eq!(v, 1.0);

        assert_eq!(
            kdist_kprime_quantile(9.0, 4.0, 0.0, 0.5, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!(v.abs() < 1e-9);
        assert_eq!(
            kdist_ksquare_quantile(4.0, 11.0, 7.0, 4.7143, 0.0126, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!((v - 0.19444).abs() < 1e-3);
        assert_eq!(
            kdist_kprime_ncp_solve(5.0, 6.0, 0.0, 0.5, ptr::null(), &mut v),
            KdistStatus::Ok
        );
        assert!(v.abs() < 1e-8);

        assert_eq!(kdist_student_t_cdf(1.0, 1.0, &mut v), KdistStatus::Ok);
        assert!((v - 0.75).abs() < 1e-15);
        assert_eq!(kdist_student_t_cdf(1.0, 0.0, &mut v), KdistStatus::Domain);
    }
    assert_eq!(kdist_normal_cdf(0.0), 0.5);
}

#[test]
fn errors_are_per_thread() {
    let mut rep = empty_report();
    unsafe { kdist_kprime_cdf(-1.0, 2.0, 1.0, 1.0, ptr::null(), &mut rep) };
    let other = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(other, "");
    assert!(!last_error().is_empty());
}

#[test]
fn status_strings() {
    let s = unsafe { CStr::from_ptr(kdist_status_string(KdistStatus::Underflow)) };
    assert_eq!(s.to_str().unwrap(), "underflow");
}
