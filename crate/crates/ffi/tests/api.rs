use std::ffi::{CStr, CString};
use std::ptr;

use chipfire_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cf_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn family(name: &str, n: usize, k: u64) -> *mut CfConfig {
    let name = CString::new(name).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { cf_config_family(name.as_ptr(), n, k, &mut cfg) },
        CfStatus::Ok
    );
    cfg
}

#[test]
fn simulate_through_handles() {
    let cfg = family("slope2", 100, 68);
    let mut s = CfSummary::default();
    unsafe {
        assert_eq!(cf_config_n(cfg), 100);
        assert_eq!(cf_simulate(cfg, 0, &mut s), CfStatus::Ok);
        cf_config_free(cfg);
    }
    assert_eq!((s.activity_num, s.activity_den, s.period), (5, 7, 7));
}

#[test]
fn config_round_trip_and_update() {
    let heights = [2u64, 0];
    let mut cfg = ptr::null_mut();
    let mut buf = [0u64; 2];
    let mut fired = 0usize;
    unsafe {
        assert_eq!(cf_config_new(heights.as_ptr(), 2, &mut cfg), CfStatus::Ok);
        assert_eq!(cf_config_update(cfg, &mut fired), CfStatus::Ok);
        assert_eq!(cf_config_heights(cfg, buf.as_mut_ptr(), 2), CfStatus::Ok);
        assert_eq!(
            cf_config_heights(cfg, buf.as_mut_ptr(), 1),
            CfStatus::InvalidArgument
        );
        cf_config_free(cfg);
    }
    assert_eq!((buf, fired), ([1, 1], 1));
}

#[test]
fn errors_are_codes_with_messages() {
    let mut cfg = ptr::null_mut();
    let mut s = CfSummary::default();
    unsafe {
        assert_eq!(
            cf_config_new(ptr::null(), 3, &mut cfg),
            CfStatus::NullPointer
        );
        assert_eq!(
            cf_config_new([1u64].as_ptr(), 0, &mut cfg),
            CfStatus::InvalidArgument
        );
        assert_eq!(cf_simulate(ptr::null(), 0, &mut s), CfStatus::NullPointer);
    }
    assert!(last_error().contains("cfg"));

    let cfg = family("slope2", 10, 5);
    unsafe {
        assert_eq!(cf_simulate(cfg, 1, &mut s), CfStatus::BudgetExceeded);
        cf_config_free(cfg);
    }

    let bad = family("constant:30", 10, 0);
    let mut lift = ptr::null_mut();
    unsafe {
        assert_eq!(
            cf_lift_from_config(bad, &mut lift),
            CfStatus::NotPreconfined
        );
        cf_config_free(bad);
    }
    assert!(lift.is_null());

    let name = CString::new("slope9").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { cf_config_family(name.as_ptr(), 10, 0, &mut cfg) },
        CfStatus::InvalidArgument
    );
    unsafe { cf_config_free(ptr::null_mut()) };
}

#[test]
fn lift_orbit_and_rotation() {
    let cfg = family("slope2", 10, 7);
    let mut lift = ptr::null_mut();
    let (mut num, mut den) = (0i64, 0i64);
    let (mut p, mut q) = (0u64, 0u64);
    unsafe {
        assert_eq!(cf_lift_from_config(cfg, &mut lift), CfStatus::Ok);
        assert_eq!(
            cf_lift_iterate_zero(lift, 3, &mut num, &mut den),
            CfStatus::Ok
        );
        assert_eq!(
            cf_lift_rotation_number(lift, 0, &mut p, &mut q),
            CfStatus::Ok
        );
        cf_lift_free(lift);
        cf_config_free(cfg);
    }
    // Activity 2/3 with period 3: α_3 = 20, so f^3(0) = 2.
    assert_eq!((num, den), (2, 1));
    assert_eq!((p, q), (2, 3));
}

#[test]
fn cdf_rotation_and_stairs() {
    let cdf = CString::new("slope2").unwrap();
    let mut rot = CfRotation::default();
    let mut stair = CfStair::default();
    unsafe {
        assert_eq!(cf_rotation_cdf(cdf.as_ptr(), 0.5, &mut rot), CfStatus::Ok);
        assert_eq!(
            cf_stair_interval(cdf.as_ptr(), 1, 2, 1e-4, &mut stair),
            CfStatus::Ok
        );
    }
    assert!(rot.snapped);
    assert_eq!((rot.num, rot.den), (1, 2));
    assert!((stair.width - 1.0 / 6.0).abs() < 1e-3);

    let ident = CString::new("identity").unwrap();
    let status = unsafe { cf_stair_interval(ident.as_ptr(), 1, 3, 1e-4, &mut stair) };
    assert_eq!(status, CfStatus::DegenerateStair);
}

#[test]
fn diagram_rows() {
    let name = CString::new("slope2").unwrap();
    let mut d = ptr::null_mut();
    let mut row = CfRow::default();
    unsafe {
        assert_eq!(cf_phase_diagram(name.as_ptr(), 10, 0, &mut d), CfStatus::Ok);
        assert_eq!(cf_diagram_len(d), 11);
        assert_eq!(cf_diagram_row(d, 4, &mut row), CfStatus::Ok);
        assert_eq!(cf_diagram_row(d, 11, &mut row), CfStatus::InvalidArgument);
        cf_diagram_free(d);
    }
    assert_eq!(
        (row.k, row.activity_num, row.activity_den, row.period),
        (4, 1, 3, 3)
    );
}

#[test]
fn law_report_as_json() {
    let suite = CString::new("reflection").unwrap();
    let mut json = ptr::null_mut();
    let mut passed = false;
    unsafe {
        assert_eq!(
            cf_check_laws(suite.as_ptr(), 2, 12, 20, 42, &mut json, &mut passed),
            CfStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        cf_string_free(json);
        assert!(text.contains("\"law\":\"reflection\""));
    }
    assert!(passed);

    let bogus = CString::new("bogus").unwrap();
    let status = unsafe { cf_check_laws(bogus.as_ptr(), 2, 12, 20, 42, &mut json, &mut passed) };
    assert_eq!(status, CfStatus::UnknownLaw);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(cf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
