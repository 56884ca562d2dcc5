use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pvi_e6_ffi::*;

const STATE: &str = r#"{"q": ["2/5","3/5","9/20"], "p": ["3/10","-1/5","1/4"], "s": "3/10",
    "alpha": ["21/100","13/100","7/100","1/100","11/100","17/100","1/20"]}"#;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pvi_string_free(s) };
    out
}

fn last_error() -> String {
    take(pvi_last_error_message())
}

fn state() -> *mut PviState {
    let json = CString::new(STATE).unwrap();
    let mut st = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_state_from_json(json.as_ptr(), &mut st) },
        PviStatus::Ok
    );
    st
}

#[test]
fn cartan_matrix_rows() {
    let mut m = [0i64; 49];
    assert_eq!(unsafe { pvi_cartan_matrix(m.as_mut_ptr()) }, PviStatus::Ok);
    assert_eq!(&m[21..28], &[0, 0, -1, 2, -1, 0, -1]);
    assert_eq!(
        unsafe { pvi_cartan_matrix(ptr::null_mut()) },
        PviStatus::NullPointer
    );
    assert!(last_error().contains("null"));
}

#[test]
fn state_round_trip_and_hamiltonian() {
    let q = [0.4, 0.6, 0.45];
    let p = [0.3, -0.2, 0.25];
    let a = [0.21, 0.13, 0.07, 0.01, 0.11, 0.17, 0.05];
    let mut st = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_state_new(q.as_ptr(), p.as_ptr(), 0.3, a.as_ptr(), &mut st) },
        PviStatus::Ok
    );
    let (mut q2, mut p2, mut s2, mut a2) = ([0.0; 3], [0.0; 3], 0.0, [0.0; 7]);
    assert_eq!(
        unsafe {
            pvi_state_get(
                st,
                q2.as_mut_ptr(),
                p2.as_mut_ptr(),
                &mut s2,
                a2.as_mut_ptr(),
            )
        },
        PviStatus::Ok
    );
    assert_eq!((q2, p2, s2, a2), (q, p, 0.3, a));

    let mut h = 0.0;
    assert_eq!(unsafe { pvi_hamiltonian(st, &mut h) }, PviStatus::Ok);
    let expect = pvi_e6::hamiltonian::coupled_h(
        &pvi_e6::hamiltonian::PhasePoint::new(q, p, 0.3),
        &pvi_e6::weyl::ParameterVector(a),
    );
    assert_eq!(h, expect);

    let mut v = [0.0; 6];
    assert_eq!(
        unsafe { pvi_vector_field(st, v.as_mut_ptr()) },
        PviStatus::Ok
    );
    assert!(v.iter().all(|x| x.is_finite()));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pvi_state_to_json(st, &mut json) }, PviStatus::Ok);
    assert!(take(json).contains("\"alpha\""));
    unsafe { pvi_state_free(st) };
}

#[test]
fn apply_word_in_place() {
    let st = state();
    let w = CString::new("pi1").unwrap();
    assert_eq!(
        unsafe { pvi_state_apply_word(st, w.as_ptr(), 1e-12) },
        PviStatus::Ok
    );
    let mut q = [0.0; 3];
    unsafe {
        pvi_state_get(
            st,
            q.as_mut_ptr(),
            ptr::null_mut(),
            ptr::null_mut(),
            ptr::null_mut(),
        )
    };
    for (a, b) in q.iter().zip([0.45, 0.6, 0.4]) {
        assert!((a - b).abs() < 1e-15, "{a} vs {b}");
    }

    let bad = CString::new("r9").unwrap();
    assert_eq!(
        unsafe { pvi_state_apply_word(st, bad.as_ptr(), 1e-12) },
        PviStatus::InvalidArgument
    );
    unsafe { pvi_state_free(st) };
}

#[test]
fn singular_word_reports_step() {
    let json = CString::new(STATE.replace("\"3/10\",\"-1/5\"", "\"0\",\"-1/5\"")).unwrap();
    let mut st = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_state_from_json(json.as_ptr(), &mut st) },
        PviStatus::Ok
    );
    let w = CString::new("r0,r2").unwrap();
    assert_eq!(
        unsafe { pvi_state_apply_word(st, w.as_ptr(), 1e-12) },
        PviStatus::Singular
    );
    assert!(last_error().contains("step 1"));
    unsafe { pvi_state_free(st) };
}

#[test]
fn exact_transform_involution() {
    let w = CString::new("r2,r2").unwrap();
    let st = CString::new(STATE).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_transform_exact_json(w.as_ptr(), st.as_ptr(), &mut out) },
        PviStatus::Ok
    );
    let got: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    let want: serde_json::Value = serde_json::from_str(STATE).unwrap();
    assert_eq!(got, want);

    let junk = CString::new("{").unwrap();
    assert_eq!(
        unsafe { pvi_transform_exact_json(w.as_ptr(), junk.as_ptr(), &mut out) },
        PviStatus::Parse
    );
}

#[test]
fn integrate_and_read_samples() {
    let st = state();
    let mut traj = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_integrate(st, 0.7, 1e-10, 1e-12, 0, &mut traj) },
        PviStatus::Ok
    );
    let n = unsafe { pvi_trajectory_len(traj) };
    assert!(n > 2);
    let (mut s, mut y) = (0.0, [0.0; 6]);
    assert_eq!(
        unsafe { pvi_trajectory_sample(traj, n - 1, &mut s, y.as_mut_ptr()) },
        PviStatus::Ok
    );
    assert_eq!(s, 0.7);
    assert_eq!(
        unsafe { pvi_trajectory_sample(traj, n, &mut s, y.as_mut_ptr()) },
        PviStatus::InvalidArgument
    );
    let mut csv = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_trajectory_to_csv(traj, &mut csv) },
        PviStatus::Ok
    );
    let text = take(csv);
    assert!(text.starts_with("s,q1,p1,q2,p2,q3,p3\n"));
    assert_eq!(text.lines().count(), n + 1);
    unsafe { pvi_trajectory_free(traj) };

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_integrate(st, 1.5, 1e-10, 1e-12, 0, &mut bad) },
        PviStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { pvi_integrate(st, 0.7, 1e-10, 1e-12, 2, &mut bad) },
        PviStatus::Integrator
    );
    unsafe { pvi_state_free(st) };
    assert_eq!(unsafe { pvi_trajectory_len(ptr::null()) }, 0);
}

#[test]
fn verify_claims() {
    let claim = CString::new("theorem1:r2").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { pvi_verify(claim.as_ptr(), 10, 0xE6, &mut out) },
        PviStatus::Ok
    );
    assert!(take(out).contains("\"pass\":true"));

    let claim = CString::new("unknown").unwrap();
    assert_eq!(
        unsafe { pvi_verify(claim.as_ptr(), 10, 0xE6, &mut out) },
        PviStatus::InvalidArgument
    );
    assert!(last_error().contains("unknown claim"));
}

#[test]
fn header_declares_every_entry_point() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/pvi_e6.h")).unwrap();
    let source =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let names: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 15);
    for n in names {
        assert!(header.contains(&format!("{n}(")), "{n} missing from header");
    }
    assert!(header.contains("PVI_STATUS_CLAIM_FAILED = 6"));
}
