//! C ABI over `logring-core`.
//!
//! Every function returns a [`LogringStatus`] and writes results through
//! out-pointers. Handles are opaque and must be released with the matching
//! `*_free` function. Panics are caught at the boundary and reported as
//! [`LogringStatus::Panic`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use logring_core::dynamics::{integrate, period, perturb_along_mode, IntegratorConfig, Trajectory};
use logring_core::model::re_configuration;
use logring_core::spectral::{mode_factor, mode_factors};
use logring_core::stability::{classify_spectral, theorem_bounds, BoundsKind};
use logring_core::{Error, RingParams, Status};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogringStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    NumericalFailure = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogringStability {
    SpectrallyStable = 0,
    Degenerate = 1,
    Unstable = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogringBoundsKind {
    Empty = 0,
    Point = 1,
    OpenUnit = 2,
    Even = 3,
    Odd = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LogringVerdict {
    pub stability: LogringStability,
    pub max_re_lambda: f64,
    /// -1 when there is no witness.
    pub witness_mode: i64,
}

/// Stable mass-ratio interval as exact fractions. Zero denominators mean
/// the interval is empty.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LogringBounds {
    pub kind: LogringBoundsKind,
    pub lower_num: i64,
    pub lower_den: i64,
    pub upper_num: i64,
    pub upper_den: i64,
    pub upper_inclusive: bool,
}

pub struct LogringRing(RingParams);

pub struct LogringSpectrum {
    rows: Vec<(usize, f64, f64)>,
}

pub struct LogringTrajectory(Trajectory);

fn guard(f: impl FnOnce() -> LogringStatus) -> LogringStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(LogringStatus::Panic)
}

fn status_of(e: &Error) -> LogringStatus {
    match e {
        Error::Domain(_) | Error::OutsideRegime { .. } => LogringStatus::InvalidArgument,
        _ => LogringStatus::NumericalFailure,
    }
}

/// Static, NUL-terminated description of `status`.
#[no_mangle]
pub extern "C" fn logring_status_message(status: LogringStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        LogringStatus::Ok => b"ok\0",
        LogringStatus::NullPointer => b"null pointer argument\0",
        LogringStatus::InvalidArgument => b"invalid argument\0",
        LogringStatus::IndexOutOfRange => b"index out of range\0",
        LogringStatus::NumericalFailure => b"numerical failure\0",
        LogringStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Build a ring of `n` bodies. `mu` is ignored when `has_central` is false.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn logring_ring_new(
    n: usize,
    mu: f64,
    has_central: bool,
    out: *mut *mut LogringRing,
) -> LogringStatus {
    guard(|| {
        if out.is_null() {
            return LogringStatus::NullPointer;
        }
        let params = if has_central {
            RingParams::central(n, mu)
        } else {
            RingParams::free(n)
        };
        match params {
            Ok(p) => {
                *out = Box::into_raw(Box::new(LogringRing(p)));
                LogringStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `ring` must come from [`logring_ring_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn logring_ring_free(ring: *mut LogringRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// # Safety
/// `ring` must be a live handle and `omega` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_ring_omega(ring: *const LogringRing, omega: *mut f64) -> LogringStatus {
    guard(|| {
        let (Some(r), false) = (ring.as_ref(), omega.is_null()) else {
            return LogringStatus::NullPointer;
        };
        *omega = r.0.omega();
        LogringStatus::Ok
    })
}

/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_classify(ring: *const LogringRing, out: *mut LogringVerdict) -> LogringStatus {
    guard(|| {
        let (Some(r), false) = (ring.as_ref(), out.is_null()) else {
            return LogringStatus::NullPointer;
        };
        let v = classify_spectral(&r.0);
        *out = LogringVerdict {
            stability: match v.status {
                Status::SpectrallyStable => LogringStability::SpectrallyStable,
                Status::Degenerate => LogringStability::Degenerate,
                Status::Unstable => LogringStability::Unstable,
            },
            max_re_lambda: v.max_re_lambda,
            witness_mode: v.witness_mode.map_or(-1, |j| j as i64),
        };
        LogringStatus::Ok
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn logring_theorem_bounds(n: usize, out: *mut LogringBounds) -> LogringStatus {
    guard(|| {
        if out.is_null() {
            return LogringStatus::NullPointer;
        }
        if n < 2 {
            return LogringStatus::InvalidArgument;
        }
        let b = theorem_bounds(n);
        let parts = |q: Option<logring_core::spectral::Rational>| q.map_or((0, 0), |q| (*q.numer(), *q.denom()));
        let (lower_num, lower_den) = parts(b.lower);
        let (upper_num, upper_den) = parts(b.upper);
        *out = LogringBounds {
            kind: match b.kind {
                BoundsKind::Unstable => LogringBoundsKind::Empty,
                BoundsKind::Point => LogringBoundsKind::Point,
                BoundsKind::OpenUnit => LogringBoundsKind::OpenUnit,
                BoundsKind::Even => LogringBoundsKind::Even,
                BoundsKind::Odd => LogringBoundsKind::Odd,
            },
            lower_num,
            lower_den,
            upper_num,
            upper_den,
            upper_inclusive: b.upper_inclusive,
        };
        LogringStatus::Ok
    })
}

/// All `4n` eigenvalues, ordered by mode, then imaginary part descending,
/// then real part descending.
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_spectrum_new(
    ring: *const LogringRing,
    out: *mut *mut LogringSpectrum,
) -> LogringStatus {
    guard(|| {
        let (Some(r), false) = (ring.as_ref(), out.is_null()) else {
            return LogringStatus::NullPointer;
        };
        let mut rows: Vec<(usize, f64, f64)> = mode_factors(&r.0)
            .iter()
            .flat_map(|f| f.lambdas.iter().map(move |l| (f.j(), l.re, l.im)))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0).then(b.2.total_cmp(&a.2)).then(b.1.total_cmp(&a.1)));
        *out = Box::into_raw(Box::new(LogringSpectrum { rows }));
        LogringStatus::Ok
    })
}

/// # Safety
/// `spectrum` must be a live handle and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_spectrum_len(spectrum: *const LogringSpectrum, len: *mut usize) -> LogringStatus {
    guard(|| {
        let (Some(s), false) = (spectrum.as_ref(), len.is_null()) else {
            return LogringStatus::NullPointer;
        };
        *len = s.rows.len();
        LogringStatus::Ok
    })
}

/// # Safety
/// `spectrum` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn logring_spectrum_get(
    spectrum: *const LogringSpectrum,
    index: usize,
    mode: *mut usize,
    re: *mut f64,
    im: *mut f64,
) -> LogringStatus {
    guard(|| {
        let Some(s) = spectrum.as_ref() else {
            return LogringStatus::NullPointer;
        };
        if mode.is_null() || re.is_null() || im.is_null() {
            return LogringStatus::NullPointer;
        }
        let Some(&(j, a, b)) = s.rows.get(index) else {
            return LogringStatus::IndexOutOfRange;
        };
        *mode = j;
        *re = a;
        *im = b;
        LogringStatus::Ok
    })
}

/// # Safety
/// `spectrum` must come from [`logring_spectrum_new`]. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn logring_spectrum_free(spectrum: *mut LogringSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Integrate for `periods` rotation periods with `samples_per_period`
/// samples per period. `perturb_mode < 0` starts on the equilibrium;
/// otherwise the start is displaced by `eps` along that mode's fastest
/// eigenvector. The absolute tolerance is `rel_tol / 100`. A collision is
/// not an error; see [`logring_trajectory_collided`].
///
/// # Safety
/// `ring` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_simulate(
    ring: *const LogringRing,
    periods: f64,
    samples_per_period: usize,
    perturb_mode: i64,
    eps: f64,
    rel_tol: f64,
    out: *mut *mut LogringTrajectory,
) -> LogringStatus {
    guard(|| {
        let (Some(r), false) = (ring.as_ref(), out.is_null()) else {
            return LogringStatus::NullPointer;
        };
        let p = r.0;
        if !(periods > 0.0 && periods.is_finite()) || samples_per_period == 0 || !(rel_tol > 0.0) {
            return LogringStatus::InvalidArgument;
        }
        let start = if perturb_mode < 0 {
            re_configuration(&p, 0.0)
        } else {
            let j = perturb_mode as usize;
            if j >= p.n() {
                return LogringStatus::IndexOutOfRange;
            }
            match perturb_along_mode(&p, j, mode_factor(&p, j).dominant_root(), eps) {
                Ok(s) => s,
                Err(e) => return status_of(&e),
            }
        };
        let cfg = IntegratorConfig::with_tolerances(rel_tol, rel_tol * 1e-2)
            .with_stride(period(&p) / samples_per_period as f64);
        match integrate(&start, periods * period(&p), &cfg) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(LogringTrajectory(t)));
                LogringStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `traj` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn logring_trajectory_shape(
    traj: *const LogringTrajectory,
    samples: *mut usize,
    bodies: *mut usize,
) -> LogringStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else {
            return LogringStatus::NullPointer;
        };
        if samples.is_null() || bodies.is_null() {
            return LogringStatus::NullPointer;
        }
        *samples = t.0.samples.len();
        *bodies = t.0.samples[0].len();
        LogringStatus::Ok
    })
}

/// # Safety
/// `traj` must be a live handle and `collided` writable.
#[no_mangle]
pub unsafe extern "C" fn logring_trajectory_collided(
    traj: *const LogringTrajectory,
    collided: *mut bool,
) -> LogringStatus {
    guard(|| {
        let (Some(t), false) = (traj.as_ref(), collided.is_null()) else {
            return LogringStatus::NullPointer;
        };
        *collided = t.0.collision.is_some();
        LogringStatus::Ok
    })
}

/// Copy sample `index` into `state` as `x, y, vx, vy` per body; `state`
/// must hold `4 * bodies` doubles.
///
/// # Safety
/// `traj` must be a live handle, `time` writable and `state` valid for
/// `state_len` writes.
#[no_mangle]
pub unsafe extern "C" fn logring_trajectory_sample(
    traj: *const LogringTrajectory,
    index: usize,
    time: *mut f64,
    state: *mut f64,
    state_len: usize,
) -> LogringStatus {
    guard(|| {
        let Some(t) = traj.as_ref() else {
            return LogringStatus::NullPointer;
        };
        if time.is_null() || state.is_null() {
            return LogringStatus::NullPointer;
        }
        let Some(s) = t.0.samples.get(index) else {
            return LogringStatus::IndexOutOfRange;
        };
        if state_len < 4 * s.len() {
            return LogringStatus::InvalidArgument;
        }
        let dst = std::slice::from_raw_parts_mut(state, state_len);
        for (k, (z, v)) in s.positions.iter().zip(&s.velocities).enumerate() {
            dst[4 * k..4 * k + 4].copy_from_slice(&[z.re, z.im, v.re, v.im]);
        }
        *time = s.time;
        LogringStatus::Ok
    })
}

/// # Safety
/// `traj` must come from [`logring_simulate`]. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn logring_trajectory_free(traj: *mut LogringTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
