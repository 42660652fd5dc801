use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use ipskit::circuit::write_circuit;
use ipskit::poly::parse_poly_in;
use ipskit_ffi::*;
use num_bigint::BigInt;

const UNSAT: &str = "p cnf 1 2\n1 0\n-1 0\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn circuit(poly: &str) -> *mut IpsCircuit {
    let c = parse_poly_in::<BigInt>(poly, ()).unwrap().try_to_circuit().unwrap();
    let text = cstr(&write_circuit(&c));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ipskit_circuit_parse(text.as_ptr(), &mut out) }, IpsStatus::Ok);
    out
}

fn system(dimacs: &str) -> *mut IpsSystem {
    let d = cstr(dimacs);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ipskit_system_from_dimacs(d.as_ptr(), false, &mut out) }, IpsStatus::Ok);
    out
}

fn last_error() -> String {
    let p = ipskit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn verdict() -> IpsVerdict {
    IpsVerdict { accepted: false, failure_condition: 9, trials: 0, soundness: -1.0, prime: 0 }
}

#[test]
fn verify_exact_and_randomized() {
    let sys = system(UNSAT);
    assert_eq!(unsafe { ipskit_system_len(sys) }, 2);
    // f1 = 1 - x1, f2 = x1
    let good = circuit("f1 + f2");
    let bad = circuit("f1");
    let mut v = verdict();
    unsafe {
        assert_eq!(ipskit_verify(sys, good, ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Ok);
        assert!(v.accepted);
        assert_eq!((v.failure_condition, v.trials, v.soundness, v.prime), (0, 0, 0.0, 0));

        assert_eq!(ipskit_verify(sys, bad, ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Rejected);
        assert!(!v.accepted);
        assert_eq!(v.failure_condition, 2);

        assert_eq!(ipskit_verify(sys, good, ptr::null(), IpsMode::Randomized, 10, 7, 0, &mut v), IpsStatus::Ok);
        assert_eq!(v.trials, 10);
        assert!(v.prime > 0 && v.soundness > 0.0 && v.soundness < 1e-6);

        assert_eq!(ipskit_verify(sys, good, ptr::null(), IpsMode::Randomized, 5, 7, 10007, &mut v), IpsStatus::Ok);
        assert_eq!(v.prime, 10007);
        ipskit_circuit_free(good);
        ipskit_circuit_free(bad);
        ipskit_system_free(sys);
    }
}

#[test]
fn derivation_target() {
    let sys = system(UNSAT);
    let cert = circuit("x1*f1");
    let target = circuit("x1 - x1^2");
    let wrong = circuit("x1");
    let mut v = verdict();
    unsafe {
        assert_eq!(ipskit_verify(sys, cert, target, IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Ok);
        assert_eq!(ipskit_verify(sys, cert, wrong, IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Rejected);
        for h in [cert, target, wrong] {
            ipskit_circuit_free(h);
        }
        ipskit_system_free(sys);
    }
}

#[test]
fn construct_then_verify() {
    let dimacs = cstr("p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n");
    let mut sys = ptr::null_mut();
    let mut cert = ptr::null_mut();
    let mut v = verdict();
    unsafe {
        assert_eq!(ipskit_system_from_dimacs(dimacs.as_ptr(), false, &mut sys), IpsStatus::Ok);
        assert_eq!(ipskit_construct_vnp(dimacs.as_ptr(), false, &mut cert), IpsStatus::Ok);
        assert_eq!(ipskit_verify(sys, cert, ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Ok);
        ipskit_circuit_free(cert);
        // a single summand is not a certificate
        assert_eq!(ipskit_construct_vnp(dimacs.as_ptr(), true, &mut cert), IpsStatus::Ok);
        assert!(ipskit_circuit_size(cert) > 0);
        assert_eq!(ipskit_verify(sys, cert, ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Rejected);
        ipskit_circuit_free(cert);
        ipskit_system_free(sys);
    }
}

#[test]
fn text_round_trip() {
    let sys = system(UNSAT);
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ipskit_system_to_text(sys, &mut s), IpsStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(ipskit_system_parse(s, &mut again), IpsStatus::Ok);
        assert_eq!(ipskit_system_len(again), 2);
        ipskit_string_free(s);
        ipskit_system_free(again);
        ipskit_system_free(sys);

        let c = circuit("3*x1*f2 - f1");
        let mut t = ptr::null_mut();
        assert_eq!(ipskit_circuit_to_text(c, &mut t), IpsStatus::Ok);
        let mut c2 = ptr::null_mut();
        assert_eq!(ipskit_circuit_parse(t, &mut c2), IpsStatus::Ok);
        assert_eq!(ipskit_circuit_size(c), ipskit_circuit_size(c2));
        ipskit_string_free(t);
        ipskit_circuit_free(c);
        ipskit_circuit_free(c2);
    }
}

#[test]
fn errors_are_reported() {
    let mut sys = ptr::null_mut();
    let mut v = verdict();
    let garbage = cstr("p cnf x y\n");
    unsafe {
        assert_eq!(ipskit_system_from_dimacs(garbage.as_ptr(), false, &mut sys), IpsStatus::InvalidInput);
        assert!(sys.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(ipskit_system_from_dimacs(ptr::null(), false, &mut sys), IpsStatus::NullPointer);
        assert_eq!(
            ipskit_verify(ptr::null(), ptr::null(), ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v),
            IpsStatus::NullPointer
        );

        let s = system(UNSAT);
        let c = circuit("f1 + f2");
        assert_eq!(ipskit_verify(s, c, ptr::null(), IpsMode::Exact, 0, 0, 12, &mut v), IpsStatus::InvalidInput);
        assert_eq!(ipskit_verify(s, c, ptr::null(), IpsMode::Exact, 0, 0, 0, &mut v), IpsStatus::Ok);
        assert!(ipskit_last_error().is_null());

        ipskit_system_free(ptr::null_mut());
        ipskit_circuit_free(ptr::null_mut());
        ipskit_string_free(ptr::null_mut());
        ipskit_circuit_free(c);
        ipskit_system_free(s);
    }
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ipskit.h")).unwrap();
    for name in [
        "typedef struct IpsSystem IpsSystem;",
        "typedef struct IpsCircuit IpsCircuit;",
        "IPS_STATUS_RESOURCE_CAP = 3",
        "ipskit_verify(",
        "ipskit_construct_vnp(",
        "ipskit_system_from_dimacs(",
        "ipskit_last_error(void)",
        "ipskit_string_free(",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "ipskit.h"

int main(void) {
    IpsSystem *sys = NULL;
    IpsCircuit *cert = NULL;
    IpsVerdict v;
    const char *cnf = "p cnf 1 2\n1 0\n-1 0\n";
    if (ipskit_system_from_dimacs(cnf, false, &sys) != IPS_STATUS_OK) return 10;
    if (ipskit_construct_vnp(cnf, false, &cert) != IPS_STATUS_OK) return 11;
    IpsStatus s = ipskit_verify(sys, cert, NULL, IPS_MODE_RANDOMIZED, 20, 1, 0, &v);
    printf("status=%d accepted=%d trials=%zu\n", (int)s, (int)v.accepted, v.trials);
    if (ipskit_system_from_dimacs("nonsense", false, &sys) != IPS_STATUS_INVALID_INPUT) return 12;
    if (ipskit_last_error() == NULL) return 13;
    ipskit_circuit_free(cert);
    ipskit_system_free(sys);
    return s == IPS_STATUS_OK && v.accepted ? 0 : 1;
}
"#;

#[test]
fn c_program_links_against_staticlib() {
    let lib = profile_dir().join("libipskit_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "status=0 accepted=1 trials=20");
}
