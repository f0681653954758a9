//! Nonlinear integration of the full n-body flow in the inertial frame.
//!
//! The stepper is the Dormand-Prince 5(4) pair with local extrapolation and
//! proportional step control on a mixed absolute/relative error norm.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linmat::{assemble, mode_eigenvector, physical_combination};
use crate::model::{accelerations_into, re_configuration, BodySet, RingParams, DEFAULT_DMIN};

/// Inertial-frame state of every body. The central body, if any, is last.
pub type PhaseState = BodySet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Spacing of recorded samples; `None` records only the endpoints.
    pub sample_stride: Option<f64>,
    pub dmin: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            sample_stride: None,
            dmin: DEFAULT_DMIN,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_stride(mut self, stride: f64) -> Self {
        self.sample_stride = Some(stride);
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step > 0.0
            && self.sample_stride.is_none_or(|s| s > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid integrator configuration {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionInfo {
    pub i: usize,
    pub j: usize,
    pub time: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    /// Set when the run stopped early because two bodies came within `dmin`.
    pub collision: Option<CollisionInfo>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &PhaseState {
        self.samples.last().expect("trajectory holds the initial state")
    }
}

// Dormand-Prince 5(4) tableau; the flow is autonomous so the nodes are not needed
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct System<'a> {
    masses: &'a [f64],
    dmin: f64,
}

impl System<'_> {
    /// `y = (positions, velocities)`; writes `(velocities, accelerations)`.
    fn rhs(&self, y: &[Complex64], out: &mut [Complex64]) -> std::result::Result<(), (usize, usize, f64)> {
        let nb = self.masses.len();
        out[..nb].copy_from_slice(&y[nb..]);
        let (_, acc) = out.split_at_mut(nb);
        accelerations_into(self.masses, &y[..nb], self.dmin, acc)
    }
}

fn pack(state: &PhaseState) -> Vec<Complex64> {
    state.positions.iter().chain(&state.velocities).copied().collect()
}

fn unpack(masses: &[f64], y: &[Complex64], time: f64) -> PhaseState {
    let nb = masses.len();
    BodySet {
        masses: masses.to_vec(),
        positions: y[..nb].to_vec(),
        velocities: y[nb..].to_vec(),
        time,
    }
}

/// Integrate from `initial.time` to `t_final`, recording samples every
/// `cfg.sample_stride`. A collision stops the run and returns the partial
/// trajectory with [`Trajectory::collision`] set.
pub fn integrate(initial: &PhaseState, t_final: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let t0 = initial.time;
    if !(t_final > t0) {
        return Err(Error::Domain(format!("t_final {t_final} must exceed start time {t0}")));
    }
    let sys = System {
        masses: &initial.masses,
        dmin: cfg.dmin,
    };
    let dim = 2 * initial.len();
    let mut y = pack(initial);
    let mut k = vec![vec![Complex64::new(0.0, 0.0); dim]; 7];
    let mut stage = vec![Complex64::new(0.0, 0.0); dim];
    let mut y_new = vec![Complex64::new(0.0, 0.0); dim];

    let mut traj = Trajectory {
        samples: vec![initial.clone()],
        collision: None,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let collided = |(i, j, distance): (usize, usize, f64), time: f64| CollisionInfo { i, j, time, distance };

    if let Err(c) = sys.rhs(&y, &mut k[0]) {
        traj.collision = Some(collided(c, t0));
        return Ok(traj);
    }

    let span = t_final - t0;
    let mut t = t0;
    let mut h = (1e-3 * span).min(cfg.max_step);
    let mut next_sample = cfg.sample_stride.map(|s| t0 + s);
    let mut sample_index = 1usize;

    while t < t_final {
        if traj.accepted_steps + traj.rejected_steps >= cfg.max_steps {
            return Err(Error::StepUnderflow { time: t, step: h });
        }
        if h < 1e-14 * t.abs().max(span) {
            return Err(Error::StepUnderflow { time: t, step: h });
        }
        // a sample time within rounding of the end is the end sample
        let target = match next_sample {
            Some(s) if s < t_final - 1e-12 * span => s,
            _ => t_final,
        };
        let truncated = t + h >= target;
        let step = if truncated { target - t } else { h };

        let mut collision = None;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (r, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += k[r][i] * (step * a);
                    }
                }
                stage[i] = acc;
            }
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
            if let Err(c) = sys.rhs(&stage, &mut k[s]) {
                collision = Some(c);
                break;
            }
        }
        if let Some(c) = collision {
            traj.collision = Some(collided(c, t));
            return Ok(traj);
        }

        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = Complex64::new(0.0, 0.0);
            for (r, coef) in E.iter().enumerate() {
                if *coef != 0.0 {
                    e += k[r][i] * coef;
                }
            }
            e *= step;
            let sc_re = cfg.abs_tol + cfg.rel_tol * y[i].re.abs().max(y_new[i].re.abs());
            let sc_im = cfg.abs_tol + cfg.rel_tol * y[i].im.abs().max(y_new[i].im.abs());
            err_sq += (e.re / sc_re).powi(2) + (e.im / sc_im).powi(2);
        }
        let err = (err_sq / (2 * dim) as f64).sqrt();

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            t = if truncated { target } else { t + step };
            y.copy_from_slice(&y_new);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            traj.accepted_steps += 1;
            if truncated {
                if let (Some(s), Some(stride)) = (next_sample, cfg.sample_stride) {
                    if target == s {
                        traj.samples.push(unpack(&initial.masses, &y, t));
                        sample_index += 1;
                        next_sample = Some(t0 + sample_index as f64 * stride);
                    }
                }
                if t >= t_final {
                    break;
                }
            }
            // truncation must not shrink the proposal for the next step
            h = (h.max(step) * factor).min(cfg.max_step);
        } else {
            traj.rejected_steps += 1;
            h = step * factor.min(1.0);
        }
    }
    if traj.last().time < t_final {
        traj.samples.push(unpack(&initial.masses, &y, t_final));
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedQuantities {
    pub energy: f64,
    pub kinetic: f64,
    pub angular_momentum: f64,
    pub linear_momentum: Complex64,
}

impl ConservedQuantities {
    /// Energy change relative to `max(|E|, T)` of `self`; the logarithmic
    /// potential has no natural zero, so the kinetic part sets the scale when
    /// `E` happens to be small.
    pub fn energy_drift(&self, later: &Self) -> f64 {
        (later.energy - self.energy).abs() / self.energy.abs().max(self.kinetic)
    }

    pub fn angular_momentum_drift(&self, later: &Self) -> f64 {
        (later.angular_momentum - self.angular_momentum).abs() / self.angular_momentum.abs()
    }
}

/// Energy `1/2 sum m |v|^2 + sum_{i<j} m_i m_j ln |x_i - x_j|`, angular and
/// linear momentum.
pub fn conserved(state: &PhaseState) -> Result<ConservedQuantities> {
    let mut kinetic = 0.0;
    let mut angular = 0.0;
    let mut linear = Complex64::new(0.0, 0.0);
    for ((m, x), v) in state.masses.iter().zip(&state.positions).zip(&state.velocities) {
        kinetic += 0.5 * m * v.norm_sqr();
        angular += m * (x.conj() * v).im;
        linear += v * *m;
    }
    let mut potential = 0.0;
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            let d = (state.positions[j] - state.positions[i]).norm();
            if !(d >= DEFAULT_DMIN) {
                return Err(Error::Collision {
                    i,
                    j,
                    time: state.time,
                    distance: d,
                });
            }
            potential += state.masses[i] * state.masses[j] * d.ln();
        }
    }
    Ok(ConservedQuantities {
        energy: kinetic + potential,
        kinetic,
        angular_momentum: angular,
        linear_momentum: linear,
    })
}

/// Equilibrium at `t = 0` displaced along eigenpair `(j, lambda)`.
///
/// The co-rotating mode vector is made conjugacy-respecting, mapped back to
/// inertial coordinates (`dz_k = e^{i theta_k} dw_k`,
/// `dz'_k = e^{i theta_k} (i w dw_k + dw'_k)`) and scaled so the largest ring
/// displacement is `eps`. The central body moves to keep the centre of mass
/// at rest at the origin.
pub fn perturb_along_mode(params: &RingParams, j: usize, lambda: Complex64, eps: f64) -> Result<PhaseState> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("perturbation size must be positive, got {eps}")));
    }
    if j >= params.n() {
        return Err(Error::Domain(format!("mode {j} out of range for n = {}", params.n())));
    }
    let n = params.n();
    let matrix = assemble(params);
    let pair = mode_eigenvector(&matrix, j, lambda)?;
    let (dw, dw_dot) = physical_combination(&pair, n).ok_or(Error::DegenerateEigenvector {
        j,
        lambda,
        residual: 0.0,
    })?;

    let w = params.omega();
    let iw = Complex64::new(0.0, w);
    let mut dz = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, params.theta(k));
        dz.push(phase * dw[k]);
        dv.push(phase * (iw * dw[k] + dw_dot[k]));
    }
    let size = dz.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let size = if size > 0.0 {
        size
    } else {
        dv.iter().map(|z| z.norm()).fold(0.0, f64::max) / w
    };
    let scale = eps / size;

    let mut state = re_configuration(params, 0.0);
    for k in 0..n {
        state.positions[k] += dz[k] * scale;
        state.velocities[k] += dv[k] * scale;
    }
    if params.has_central() {
        let mu = params.mu();
        let sz: Complex64 = dz.iter().sum();
        let sv: Complex64 = dv.iter().sum();
        state.positions[n] -= sz * (mu * scale);
        state.velocities[n] -= sv * (mu * scale);
    }
    Ok(state)
}

/// Largest distance of any body from its place in the rotating equilibrium.
pub fn deviation(state: &PhaseState, params: &RingParams) -> f64 {
    let reference = re_configuration(params, state.time);
    state
        .positions
        .iter()
        .zip(&reference.positions)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub rate: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub samples: usize,
}

pub const MIN_WINDOW_SAMPLES: usize = 50;

/// Fit `ln d(t)` linearly over the stretch where the deviation first lies
/// in `[10 eps, 1000 eps]`.
pub fn growth_rate(traj: &Trajectory, params: &RingParams, eps: f64) -> Result<GrowthEstimate> {
    let (lo, hi) = (10.0 * eps, 1000.0 * eps);
    let devs: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.time, deviation(s, params))).collect();
    let start = devs.iter().position(|&(_, d)| d >= lo);
    let Some(start) = start else {
        return Err(Error::WindowNotFound { lo, hi });
    };
    let end = devs[start..]
        .iter()
        .position(|&(_, d)| d > hi)
        .map_or(devs.len(), |p| start + p);
    let window = &devs[start..end];
    if window.len() < MIN_WINDOW_SAMPLES {
        return Err(Error::WindowNotFound { lo, hi });
    }

    let m = window.len() as f64;
    let (st, sl) = window.iter().fold((0.0, 0.0), |(a, b), &(t, d)| (a + t, b + d.ln()));
    let (mt, ml) = (st / m, sl / m);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(t, d) in window {
        let (x, y) = (t - mt, d.ln() - ml);
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let rate = sxy / sxx;
    let r_squared = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(GrowthEstimate {
        rate,
        window: (window[0].0, window[window.len() - 1].0),
        r_squared,
        samples: window.len(),
    })
}

/// Rotation period `2 pi / w` of the equilibrium.
pub fn period(params: &RingParams) -> f64 {
    2.0 * PI / params.omega()
}
