use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use parallel_ea_ffi::*;

fn topology(name: &str, mu: usize) -> *mut PeaTopology {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pea_topology_new(name.as_ptr(), mu, &mut h) }, PeaStatus::Ok);
    h
}

fn objective(name: &str, n: usize) -> *mut PeaObjective {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { pea_objective_new(name.as_ptr(), n, &mut h) }, PeaStatus::Ok);
    h
}

#[test]
fn handles_and_queries() {
    let t = topology("torus", 9);
    unsafe {
        assert_eq!(pea_topology_num_vertices(t), 9);
        assert_eq!(pea_topology_num_edges(t), 36);
        let mut d = 0;
        assert_eq!(pea_topology_diameter(t, &mut d), PeaStatus::Ok);
        assert_eq!(d, 2);
        pea_topology_free(t);
        pea_topology_free(ptr::null_mut());
    }
    let o = objective("lo", 4);
    let mut v = 0;
    let bits = [1u8, 1, 0, 1];
    unsafe {
        assert_eq!(pea_objective_evaluate(o, bits.as_ptr(), 4, &mut v), PeaStatus::Ok);
        assert_eq!(v, 2);
        assert_eq!(pea_objective_evaluate(o, bits.as_ptr(), 3, &mut v), PeaStatus::Objective);
        pea_objective_free(o);
    }
}

#[test]
fn errors_set_status_and_message() {
    let name = CString::new("star").unwrap();
    let mut h = ptr::null_mut();
    let status = unsafe { pea_topology_new(name.as_ptr(), 4, &mut h) };
    assert_eq!(status, PeaStatus::Topology);
    assert!(h.is_null());
    let msg = unsafe { CStr::from_ptr(pea_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("star"), "{msg}");
    assert_eq!(unsafe { pea_topology_new(ptr::null(), 4, &mut h) }, PeaStatus::NullPointer);
    let o = objective("onemax", 4);
    let t = topology("complete", 4);
    let mut out = PeaRunOutcome::default();
    assert_eq!(unsafe { pea_run(o, t, 1.5, 1, 0, 100, &mut out) }, PeaStatus::Model);
    let mut x = 0.0;
    assert_eq!(unsafe { pea_topology_bound(o, t, -0.5, &mut x) }, PeaStatus::Bound);
    unsafe {
        pea_objective_free(o);
        pea_topology_free(t);
    }
}

#[test]
fn runs_bounds_and_oracle() {
    let o = objective("onemax", 2);
    let single = topology("complete", 1);
    let mut exact = 0.0;
    let start = CString::new("00").unwrap();
    unsafe {
        assert_eq!(pea_oracle_expected_time(o, single, 1.0, 1, start.as_ptr(), &mut exact), PeaStatus::Ok);
    }
    assert!((exact - 4.0).abs() < 1e-12);

    let lo = objective("lo", 4);
    let ring = topology("biring", 4);
    let mut v = 0.0;
    unsafe {
        assert_eq!(pea_seq_bound(lo, &mut v), PeaStatus::Ok);
        assert!((v - 16.0 * std::f64::consts::E).abs() < 1e-9);
        assert_eq!(pea_topology_bound(lo, ring, 1.0, &mut v), PeaStatus::Ok);
        let e = std::f64::consts::E;
        assert!((v - (8.0 * (4.0 * e).sqrt() + 4.0 * e)).abs() < 1e-9);
        let mut best = 0.0;
        assert_eq!(pea_best_bound(lo, ring, 1.0, &mut best), PeaStatus::Ok);
        assert!(best <= v);

        let mut out = PeaRunOutcome::default();
        assert_eq!(pea_run(lo, ring, 0.5, 1, 42, 1_000_000, &mut out), PeaStatus::Ok);
        assert!(out.success);
        assert_eq!(out.t_seq, 4 * out.t_par);
        let mut again = PeaRunOutcome::default();
        pea_run(lo, ring, 0.5, 1, 42, 1_000_000, &mut again);
        assert_eq!(out, again);

        let mut times = [0i64; 4];
        assert_eq!(pea_hitting_times(ring, 1.0, 0, 100, 7, times.as_mut_ptr(), 4), PeaStatus::Ok);
        assert_eq!(times, [0, 1, 1, 2]);
        assert_eq!(pea_hitting_times(ring, 1.0, 0, 100, 7, times.as_mut_ptr(), 3), PeaStatus::InvalidArgument);

        for h in [o, lo] {
            pea_objective_free(h);
        }
        for h in [single, ring] {
            pea_topology_free(h);
        }
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn find_static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?;
    for dir in [deps, deps.parent()?] {
        let candidate = dir.join("libparallel_ea_ffi.a");
        if candidate.exists() {
            return Some(candidate);
        }
    }
    None
}

#[test]
fn header_declares_every_symbol() {
    let header = std::fs::read_to_string(crate_dir().join("include/parallel_ea.h")).unwrap();
    for symbol in [
        "pea_last_error_message",
        "pea_topology_new",
        "pea_topology_free",
        "pea_objective_new",
        "pea_objective_evaluate",
        "pea_run",
        "pea_hitting_times",
        "pea_seq_bound",
        "pea_topology_bound",
        "pea_best_bound",
        "pea_oracle_expected_time",
        "typedef struct PeaTopology PeaTopology",
        "PEA_STATUS_OK = 0",
    ] {
        assert!(header.contains(symbol), "missing {symbol}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = find_static_lib().expect("static library is built alongside the tests");
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <math.h>
#include "parallel_ea.h"

int main(void) {
    PeaObjective *om = NULL;
    PeaTopology *one = NULL;
    if (pea_objective_new("onemax", 2, &om) != PEA_STATUS_OK) return 1;
    if (pea_topology_new("complete", 1, &one) != PEA_STATUS_OK) return 2;
    double t = 0.0;
    if (pea_oracle_expected_time(om, one, 1.0, 1, "00", &t) != PEA_STATUS_OK) return 3;
    if (fabs(t - 4.0) > 1e-12) return 4;
    PeaRunOutcome out;
    if (pea_run(om, one, 1.0, 1, 3, 1000, &out) != PEA_STATUS_OK || !out.success) return 5;
    PeaTopology *bad = NULL;
    if (pea_topology_new("torus", 5, &bad) != PEA_STATUS_TOPOLOGY) return 6;
    printf("%s\n", pea_last_error_message());
    pea_objective_free(om);
    pea_topology_free(one);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("torus"));
}
