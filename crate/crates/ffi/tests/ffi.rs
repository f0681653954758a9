use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use logring_ffi::*;

struct Ring(*mut LogringRing);

impl Ring {
    fn new(n: usize, mu: f64, central: bool) -> Self {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { logring_ring_new(n, mu, central, &mut r) }, LogringStatus::Ok);
        Ring(r)
    }
}

impl Drop for Ring {
    fn drop(&mut self) {
        unsafe { logring_ring_free(self.0) }
    }
}

#[test]
fn construction_errors() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(logring_ring_new(1, 0.5, true, &mut r), LogringStatus::InvalidArgument);
        assert_eq!(logring_ring_new(4, -0.5, true, &mut r), LogringStatus::InvalidArgument);
        assert_eq!(
            logring_ring_new(4, 0.5, true, ptr::null_mut()),
            LogringStatus::NullPointer
        );
        assert!(r.is_null());
        // mu is ignored without a central body
        assert_eq!(logring_ring_new(4, -0.5, false, &mut r), LogringStatus::Ok);
        logring_ring_free(r);
        logring_ring_free(ptr::null_mut());
    }
}

#[test]
fn classify_and_bounds() {
    let ring = Ring::new(5, 0.5, true);
    let mut v = LogringVerdict {
        stability: LogringStability::Unstable,
        max_re_lambda: 1.0,
        witness_mode: 0,
    };
    unsafe {
        assert_eq!(logring_classify(ring.0, &mut v), LogringStatus::Ok);
        let mut w = 0.0;
        assert_eq!(logring_ring_omega(ring.0, &mut w), LogringStatus::Ok);
        assert!((w * w - 2.0).abs() <= 1e-14);
        assert_eq!(logring_classify(ptr::null(), &mut v), LogringStatus::NullPointer);
    }
    assert_eq!(v.stability, LogringStability::SpectrallyStable);
    assert_eq!(v.witness_mode, -1);

    let ring = Ring::new(7, 0.0, false);
    unsafe { logring_classify(ring.0, &mut v) };
    assert_eq!(v.stability, LogringStability::Degenerate);
    assert_eq!(v.witness_mode, 3);

    let mut b = LogringBounds {
        kind: LogringBoundsKind::Empty,
        lower_num: 0,
        lower_den: 0,
        upper_num: 0,
        upper_den: 0,
        upper_inclusive: false,
    };
    unsafe {
        assert_eq!(logring_theorem_bounds(11, &mut b), LogringStatus::Ok);
        assert_eq!((b.lower_num, b.lower_den, b.upper_num, b.upper_den), (1, 25, 2, 5));
        assert_eq!(b.kind, LogringBoundsKind::Odd);
        logring_theorem_bounds(2, &mut b);
        assert_eq!((b.kind, b.lower_den, b.upper_den), (LogringBoundsKind::Empty, 0, 0));
        assert_eq!(logring_theorem_bounds(1, &mut b), LogringStatus::InvalidArgument);
    }
}

#[test]
fn spectrum_access() {
    let ring = Ring::new(4, 0.5, true);
    let mut spec = ptr::null_mut();
    let mut len = 0;
    unsafe {
        assert_eq!(logring_spectrum_new(ring.0, &mut spec), LogringStatus::Ok);
        logring_spectrum_len(spec, &mut len);
        assert_eq!(len, 16);
        let (mut j, mut re, mut im) = (9usize, 0.0, 0.0);
        assert_eq!(
            logring_spectrum_get(spec, 0, &mut j, &mut re, &mut im),
            LogringStatus::Ok
        );
        assert_eq!(j, 0);
        assert!(im > 0.0);
        assert_eq!(
            logring_spectrum_get(spec, 16, &mut j, &mut re, &mut im),
            LogringStatus::IndexOutOfRange
        );
        assert_eq!(
            logring_spectrum_get(spec, 0, ptr::null_mut(), &mut re, &mut im),
            LogringStatus::NullPointer
        );
        logring_spectrum_free(spec);
    }
}

#[test]
fn simulation_handles() {
    let ring = Ring::new(2, 0.5, true);
    let mut traj = ptr::null_mut();
    unsafe {
        assert_eq!(
            logring_simulate(ring.0, 0.0, 10, -1, 0.0, 1e-10, &mut traj),
            LogringStatus::InvalidArgument
        );
        assert_eq!(
            logring_simulate(ring.0, 1.0, 10, 2, 1e-8, 1e-10, &mut traj),
            LogringStatus::IndexOutOfRange
        );
        assert_eq!(
            logring_simulate(ring.0, 2.0, 20, 1, 1e-8, 1e-10, &mut traj),
            LogringStatus::Ok
        );
        let (mut samples, mut bodies) = (0, 0);
        logring_trajectory_shape(traj, &mut samples, &mut bodies);
        assert_eq!((samples, bodies), (41, 3));
        let mut collided = true;
        logring_trajectory_collided(traj, &mut collided);
        assert!(!collided);
        let mut state = [0.0; 12];
        let mut t = -1.0;
        assert_eq!(
            logring_trajectory_sample(traj, 0, &mut t, state.as_mut_ptr(), 12),
            LogringStatus::Ok
        );
        assert_eq!(t, 0.0);
        assert!((state[0] - 1.0).abs() <= 1e-6);
        assert_eq!(
            logring_trajectory_sample(traj, 0, &mut t, state.as_mut_ptr(), 11),
            LogringStatus::InvalidArgument
        );
        assert_eq!(
            logring_trajectory_sample(traj, 41, &mut t, state.as_mut_ptr(), 12),
            LogringStatus::IndexOutOfRange
        );
        logring_trajectory_free(traj);
    }
}

#[test]
fn status_messages() {
    let msg = unsafe { CStr::from_ptr(logring_status_message(LogringStatus::IndexOutOfRange)) };
    assert_eq!(msg.to_str().unwrap(), "index out of range");
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/logring.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "logring_ring_new",
        "logring_ring_free",
        "logring_classify",
        "logring_theorem_bounds",
        "logring_spectrum_get",
        "logring_simulate",
        "logring_trajectory_sample",
        "logring_trajectory_free",
        "typedef struct LogringRing LogringRing;",
        "LOGRING_STATUS_PANIC = 5",
    ] {
        assert!(text.contains(name), "{name}");
    }
}

/// Compile and run a C program against the header and static library when
/// a C compiler is on the path.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // `cargo test` refreshes the archive in deps/, not the uplifted copy
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("liblogring_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/smoke.c");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "smoke exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            Command::new(c)
                .arg("--version")
                .output()
                .is_ok_and(|o| o.status.success())
        })
        .ok_or(())
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("logring-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
