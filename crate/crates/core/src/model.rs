//! The scaled logarithmic n-body problem and its regular n-gon equilibria.
//!
//! Positions and velocities are planar vectors stored as complex numbers
//! `x + iy`. The pair force between bodies at distance `d` has magnitude
//! `m / d` (the gradient of `m ln d`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Minimum admissible pairwise distance before a configuration counts as a
/// collision.
pub const DEFAULT_DMIN: f64 = 1e-12;

/// One regular n-gon problem instance.
///
/// With a central body the ring masses are `mu` and the central mass is one.
/// Without one the ring masses are fixed to one (`mu` is stored as `1.0`),
/// since the free-ring spectrum does not depend on the ring mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingParams {
    n: usize,
    mu: f64,
    has_central: bool,
    r: f64,
    omega: f64,
    omega_sq: f64,
}

impl RingParams {
    pub fn new(n: usize, mu: f64, has_central: bool, r: f64) -> Result<Self> {
        check_common(n, mu, r)?;
        let w2r2 = omega_sq_r_sq(n, mu, has_central);
        Ok(Self {
            n,
            mu: if has_central { mu } else { 1.0 },
            has_central,
            r,
            omega: w2r2.sqrt() / r,
            omega_sq: w2r2 / (r * r),
        })
    }

    /// Ring of `n` bodies of mass ratio `mu` about a unit central mass, unit radius.
    pub fn central(n: usize, mu: f64) -> Result<Self> {
        Self::new(n, mu, true, 1.0)
    }

    /// Ring of `n` unit masses with nothing at the centre, unit radius.
    pub fn free(n: usize) -> Result<Self> {
        Self::new(n, 1.0, false, 1.0)
    }

    /// Copy with a different angular velocity. The result is generally not a
    /// relative equilibrium; used to probe residuals.
    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self.omega_sq = omega * omega;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn has_central(&self) -> bool {
        self.has_central
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `w^2` straight from the radius relation, without the square-root round trip.
    pub fn omega_sq(&self) -> f64 {
        self.omega_sq
    }

    /// Polar angle `2 pi j / n` of ring vertex `j` (taken mod n).
    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * (j % self.n) as f64 / self.n as f64
    }

    /// True when a central-mass ring uses `mu > 1`; formulas still hold but
    /// the closed-form bounds only cover `mu <= 1`.
    pub fn outside_physical_regime(&self) -> bool {
        self.has_central && self.mu > 1.0
    }

    /// Number of bodies including the central one.
    pub fn body_count(&self) -> usize {
        self.n + usize::from(self.has_central)
    }
}

/// Masses, positions and velocities of all bodies at one instant.
///
/// The central body, when present, is the last entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodySet {
    pub masses: Vec<f64>,
    pub positions: Vec<Complex64>,
    pub velocities: Vec<Complex64>,
    pub time: f64,
}

impl BodySet {
    pub fn new(masses: Vec<f64>, positions: Vec<Complex64>, velocities: Vec<Complex64>, time: f64) -> Result<Self> {
        if masses.len() != positions.len() || masses.len() != velocities.len() {
            return domain(format!(
                "length mismatch: {} masses, {} positions, {} velocities",
                masses.len(),
                positions.len(),
                velocities.len()
            ));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0)) {
            return domain(format!("masses must be strictly positive, got {m}"));
        }
        Ok(Self {
            masses,
            positions,
            velocities,
            time,
        })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Smallest pairwise distance together with the offending pair.
    pub fn closest_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.len() {
            for k in i + 1..self.len() {
                let d = (self.positions[k] - self.positions[i]).norm();
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, k, d));
                }
            }
        }
        best
    }
}

fn check_common(n: usize, mu: f64, r: f64) -> Result<()> {
    if n < 2 {
        return domain(format!("need at least two ring bodies, got n = {n}"));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("mass ratio must be positive and finite, got {mu}"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("ring radius must be positive and finite, got {r}"));
    }
    Ok(())
}

/// Angular velocity of the regular n-gon equilibrium of radius `r`.
///
/// Central mass: `r^2 w^2 = 1 + mu (n-1)/2`. Free ring: `r^2 w^2 = (n-1)/2`.
pub fn re_angular_velocity(n: usize, mu: f64, r: f64, has_central: bool) -> Result<f64> {
    check_common(n, mu, r)?;
    Ok(omega_sq_r_sq(n, mu, has_central).sqrt() / r)
}

fn omega_sq_r_sq(n: usize, mu: f64, has_central: bool) -> f64 {
    let nm1 = (n - 1) as f64;
    if has_central {
        1.0 + 0.5 * mu * nm1
    } else {
        0.5 * nm1
    }
}

/// Angular velocity of the same polygon under Newtonian attraction, for comparison.
pub fn newtonian_re_omega(n: usize, mu: f64, r: f64) -> Result<f64> {
    check_common(n, mu, r)?;
    let sum: f64 = (1..n).map(|k| 1.0 / (2.0 * (PI * k as f64 / n as f64).sin())).sum();
    Ok(((1.0 + 0.5 * mu * sum) / (r * r * r)).sqrt())
}

/// The equilibrium at time `t`: vertex `j` sits at angle `w t + 2 pi j / n`
/// and moves tangentially with speed `r w`; the central body rests at the origin.
pub fn re_configuration(params: &RingParams, t: f64) -> BodySet {
    let n = params.n;
    let w = params.omega;
    let mut masses = vec![params.mu; n];
    let mut positions = Vec::with_capacity(params.body_count());
    let mut velocities = Vec::with_capacity(params.body_count());
    for j in 0..n {
        let z = Complex64::from_polar(params.r, w * t + params.theta(j));
        positions.push(z);
        velocities.push(Complex64::i() * w * z);
    }
    if params.has_central {
        masses.push(1.0);
        positions.push(Complex64::new(0.0, 0.0));
        velocities.push(Complex64::new(0.0, 0.0));
    }
    BodySet {
        masses,
        positions,
        velocities,
        time: t,
    }
}

/// Acceleration of every body under the pairwise logarithmic force,
/// `a_i = sum_k m_k (z_k - z_i) / |z_k - z_i|^2`.
pub fn accelerations(bodies: &BodySet, dmin: f64) -> Result<Vec<Complex64>> {
    let mut acc = vec![Complex64::new(0.0, 0.0); bodies.len()];
    accelerations_into(&bodies.masses, &bodies.positions, dmin, &mut acc).map_err(|(i, j, distance)| {
        Error::Collision {
            i,
            j,
            time: bodies.time,
            distance,
        }
    })?;
    Ok(acc)
}

/// Allocation-free kernel shared with the integrator. On collision returns
/// the offending pair and its distance.
pub(crate) fn accelerations_into(
    masses: &[f64],
    positions: &[Complex64],
    dmin: f64,
    out: &mut [Complex64],
) -> std::result::Result<(), (usize, usize, f64)> {
    out.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
    for i in 0..positions.len() {
        for k in i + 1..positions.len() {
            let d = positions[k] - positions[i];
            let d2 = d.norm_sqr();
            if !(d2 >= dmin * dmin) {
                return Err((i, k, d2.sqrt()));
            }
            let unit = d / d2;
            out[i] += unit * masses[k];
            out[k] -= unit * masses[i];
        }
    }
    Ok(())
}

/// Largest violation of `a_j = -w^2 z_j` over the ring at the equilibrium
/// configuration; the central body contributes its own acceleration.
pub fn re_residual(params: &RingParams) -> f64 {
    let bodies = re_configuration(params, 0.0);
    let acc = accelerations(&bodies, 0.0).expect("regular polygon has no coincident vertices");
    let w2 = params.omega * params.omega;
    acc.iter()
        .zip(&bodies.positions)
        .map(|(a, z)| (a + z * w2).norm())
        .fold(0.0, f64::max)
}
