//! Named invariant suites run by `logring verify`.
//!
//! Checks run in a fixed order and all of them run even after a failure;
//! [`VerifyReport::first_failure`] names the earliest one that failed.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{conserved, deviation, growth_rate, integrate, period, perturb_along_mode, IntegratorConfig};
use crate::linmat::{assemble, det_at, full_spectrum_check_with, SpectrumCheck, RESIDUAL_TOL};
use crate::model::{re_angular_velocity, re_configuration, re_residual, RingParams};
use crate::spectral::{
    c_sum_bruteforce, c_sum_closed, mode_factor, mode_factors_with, parabola_factor, product_formula, rational_string,
    rational_to_f64, trig_identity_sums, DeltaPlacement,
};
use crate::stability::{classify_spectral, cross_check, interior_grid, theorem_bounds, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub delta_placement: DeltaPlacement,
    pub passed: bool,
    pub first_failure: Option<&'static str>,
    pub invariants: Vec<InvariantResult>,
}

type Check = std::result::Result<String, String>;

type Suite<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ring_grid(n_max: usize) -> impl Iterator<Item = RingParams> {
    (2..=n_max).flat_map(|n| {
        [0.1, 0.5, 1.0]
            .into_iter()
            .map(move |mu| RingParams::central(n, mu).unwrap())
            .chain(std::iter::once(RingParams::free(n).unwrap()))
    })
}

fn force_balance(level: Level) -> Check {
    let n_max = level.pick(16, 64);
    let mut worst: f64 = 0.0;
    for p in ring_grid(n_max) {
        worst = worst.max(re_residual(&p));
    }
    verdict(worst <= 1e-12, format!("max residual {worst:.3e} for n <= {n_max}"))
}

fn omega_relation(level: Level) -> Check {
    let n_max = level.pick(16, 64);
    let mut worst: f64 = 0.0;
    for n in 2..=n_max {
        for (mu, central) in [(0.3, true), (1.0, true), (1.0, false)] {
            for r in [0.5, 1.0, 3.0] {
                let w = re_angular_velocity(n, mu, r, central).map_err(|e| e.to_string())?;
                let expect = if central {
                    1.0 + mu * (n - 1) as f64 / 2.0
                } else {
                    (n - 1) as f64 / 2.0
                };
                worst = worst.max((r * r * w * w - expect).abs() / expect);
            }
        }
    }
    verdict(worst <= 1e-14, format!("max relative error {worst:.3e}"))
}

fn closed_sums(level: Level) -> Check {
    let n_max = level.pick(16, 512);
    let (mut worst, mut worst_im): (f64, f64) = (0.0, 0.0);
    for n in 2..=n_max {
        let scale = 1e-10 * ((n * n) as f64).max(1.0);
        for j in 0..n {
            let (re, im) = c_sum_bruteforce(n, j);
            let err = (re - rational_to_f64(c_sum_closed(n, j))).abs();
            worst = worst.max(err / scale);
            worst_im = worst_im.max(im);
        }
    }
    verdict(
        worst <= 1.0 && worst_im <= 1e-10,
        format!("max error {worst:.3e} of tolerance, max imaginary part {worst_im:.3e}, n <= {n_max}"),
    )
}

fn trig_identities(level: Level) -> Check {
    let n_max = level.pick(16, 512);
    let mut worst: f64 = 0.0;
    for n in 2..=n_max {
        let (s1, s2) = trig_identity_sums(n);
        let nf = n as f64;
        let scale = 1e-10 * (nf * nf).max(1.0);
        worst = worst
            .max((s1 - (nf * nf - 1.0) / 3.0).abs() / scale)
            .max((s2 - (nf - 1.0) * (nf - 5.0) / 3.0).abs() / scale);
    }
    verdict(
        worst <= 1.0,
        format!("max error {worst:.3e} of tolerance, n <= {n_max}"),
    )
}

fn mode_zero(level: Level) -> Check {
    let n_max = level.pick(16, 64);
    for p in ring_grid(n_max) {
        let f = mode_factor(&p, 0);
        let w = p.omega();
        let mut roots = f.lambdas.to_vec();
        roots.sort_by(|a, b| a.im.total_cmp(&b.im));
        let want = [
            Complex64::new(0.0, -w * 2f64.sqrt()),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, w * 2f64.sqrt()),
        ];
        let err = roots.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if err > 1e-10 || f.root_product != 0.0 {
            return Err(format!(
                "n={} mu={} central={}: mode 0 roots off by {err:.3e}",
                p.n(),
                p.mu(),
                p.has_central()
            ));
        }
    }
    Ok(format!("mode 0 is {{0, 0, +-i w sqrt 2}} for n <= {n_max}"))
}

fn spectrum_checks(level: Level, placement: DeltaPlacement) -> Vec<(RingParams, SpectrumCheck)> {
    let n_max = level.pick(8, 12);
    ring_grid(n_max)
        .map(|p| (p, full_spectrum_check_with(&p, placement)))
        .collect()
}

fn describe(p: &RingParams) -> String {
    if p.has_central() {
        format!("n={} mu={}", p.n(), p.mu())
    } else {
        format!("n={} free", p.n())
    }
}

fn linmat_residual(checks: &[(RingParams, SpectrumCheck)]) -> Check {
    let mut worst: f64 = 0.0;
    for (p, c) in checks {
        if !c.residual_ok() {
            return Err(format!(
                "{}: residual {:.3e} of ||M|| with {} eigenvector failures (limit {RESIDUAL_TOL:e})",
                describe(p),
                c.max_residual,
                c.eigenvector_failures.len()
            ));
        }
        worst = worst.max(c.max_residual);
    }
    Ok(format!("max residual {worst:.3e} of ||M|| over {} rings", checks.len()))
}

fn linmat_determinant(checks: &[(RingParams, SpectrumCheck)]) -> Check {
    let mut worst: f64 = 0.0;
    for (p, c) in checks {
        if !c.det_ok() {
            return Err(format!("{}: scaled determinant {:.3e}", describe(p), c.max_det_scaled));
        }
        worst = worst.max(c.max_det_scaled);
    }
    Ok(format!("max scaled determinant {worst:.3e}"))
}

fn linmat_trace(checks: &[(RingParams, SpectrumCheck)]) -> Check {
    let mut worst: f64 = 0.0;
    for (p, c) in checks {
        if !c.trace_ok() {
            return Err(format!("{}: trace error {:.3e} of ||M||", describe(p), c.trace_error));
        }
        worst = worst.max(c.trace_error);
    }
    Ok(format!("max trace error {worst:.3e} of ||M||"))
}

/// `det(M - lambda I)` against the product of the mode factors on a fixed
/// lattice of `lambda` with `|lambda| <= 3 w`.
fn det_factorization(level: Level, placement: DeltaPlacement) -> Check {
    let n_max = level.pick(6, 8);
    let mut worst: f64 = 0.0;
    for p in ring_grid(n_max) {
        let m = assemble(&p);
        let factors = mode_factors_with(&p, placement);
        let w = p.omega();
        for k in 0..12 {
            let angle = 0.37 + k as f64 * 0.61;
            let radius = w * (0.4 + 2.5 * (k as f64 / 11.0));
            let lambda = Complex64::from_polar(radius, angle);
            let direct = det_at(&m, lambda).det;
            let product: Complex64 = factors.iter().map(|f| f.eval(lambda)).product();
            let err = (direct - product).norm() / product.norm().max(direct.norm());
            worst = worst.max(err);
        }
    }
    verdict(
        worst <= 1e-6,
        format!("max relative mismatch {worst:.3e}, n <= {n_max}"),
    )
}

fn product_formulas(level: Level, placement: DeltaPlacement) -> Check {
    let n_max = level.pick(16, 64);
    for n in 2..=n_max {
        let rings = (1..=20)
            .map(|s| RingParams::central(n, s as f64 / 20.0).unwrap())
            .chain(std::iter::once(RingParams::free(n).unwrap()));
        for p in rings {
            let w4 = p.omega_sq() * p.omega_sq();
            for f in mode_factors_with(&p, placement) {
                let g = product_formula(&p, f.j());
                let scale = f.root_product.abs().max(g.abs()).max(w4);
                if (f.root_product - g).abs() > 1e-10 * scale {
                    return Err(format!(
                        "{} j={}: factor gives {:e}, closed form {:e}",
                        describe(&p),
                        f.j(),
                        f.root_product,
                        g
                    ));
                }
            }
        }
    }
    Ok(format!("all modes agree for n <= {n_max}"))
}

fn theorem_agreement(level: Level) -> Check {
    let n_max = level.pick(16, 60);
    let grid = interior_grid(200);
    let mut boundary = 0;
    for n in 2..=n_max {
        let report = cross_check(n, &grid).map_err(|e| e.to_string())?;
        if let Some(d) = report.interior_failures().next() {
            return Err(format!(
                "n={n} mu={}: spectral {} but closed form {}",
                d.mu, d.spectral, d.theorem
            ));
        }
        boundary += report.disagreements.len();
    }
    Ok(format!(
        "no interior disagreements for n <= {n_max}; {boundary} on endpoints"
    ))
}

fn endpoints(level: Level) -> Check {
    let n_max = level.pick(16, 60);
    let expect = [(10, "4/81", "4/7"), (11, "1/25", "2/5")];
    for (n, lo, hi) in expect {
        let b = theorem_bounds(n);
        let got = (b.lower.map(rational_string), b.upper.map(rational_string));
        if got != (Some(lo.to_string()), Some(hi.to_string())) {
            return Err(format!("n={n}: bounds {got:?}"));
        }
    }
    for n in 4..=9 {
        let lo = theorem_bounds(n).lower.map(rational_string);
        if lo
            != Some(rational_string(crate::spectral::Rational::new(
                4,
                ((n - 1) * (n - 1)) as i64,
            )))
        {
            return Err(format!("n={n}: lower bound {lo:?}"));
        }
    }
    if !theorem_bounds(2).is_empty() || theorem_bounds(3).endpoints() != vec![1.0] {
        return Err("small-n bounds".into());
    }
    for n in 3..=n_max {
        let b = theorem_bounds(n);
        // the open end at mu = 1 for 4 <= n <= 9 is a regime cut, not a degeneracy
        let closed = b.lower.iter().chain(b.upper.iter().filter(|_| b.upper_inclusive));
        for mu in closed.map(|q| rational_to_f64(*q)) {
            let p = RingParams::central(n, mu).unwrap();
            let status = classify_spectral(&p).status;
            if status != Status::Degenerate {
                return Err(format!("n={n} endpoint mu={mu}: {status}"));
            }
        }
    }
    Ok(format!(
        "exact rationals reproduced; endpoints degenerate for n <= {n_max}"
    ))
}

fn free_ring(level: Level) -> Check {
    let n_max = level.pick(16, 100);
    for n in 2..=n_max {
        let v = classify_spectral(&RingParams::free(n).unwrap());
        let ok = match n {
            2..=6 => v.status == Status::SpectrallyStable,
            7 => v.status == Status::Degenerate && v.per_mode_p[3] == 0.0 && v.per_mode_p[4] == 0.0,
            _ => {
                let best = (1..n).min_by_key(|&j| parabola_factor(n, j)).unwrap();
                let min = parabola_factor(n, best);
                v.status == Status::Unstable && v.witness_mode.is_some_and(|w| parabola_factor(n, w) == min)
            }
        };
        if !ok {
            return Err(format!("n={n}: {} witness {:?}", v.status, v.witness_mode));
        }
    }
    Ok(format!("stable for n <= 6, degenerate at 7, unstable up to {n_max}"))
}

fn re_fidelity() -> Check {
    let p = RingParams::central(6, 0.5).unwrap();
    let start = re_configuration(&p, 0.0);
    let cfg = IntegratorConfig::default().with_stride(period(&p) / 20.0);
    let traj = integrate(&start, 10.0 * period(&p), &cfg).map_err(|e| e.to_string())?;
    let pos = traj.samples.iter().map(|s| deviation(s, &p)).fold(0.0, f64::max);
    let q0 = conserved(&start).map_err(|e| e.to_string())?;
    let q1 = conserved(traj.last()).map_err(|e| e.to_string())?;
    let (de, dl) = (q0.energy_drift(&q1), q0.angular_momentum_drift(&q1));
    verdict(
        pos <= 1e-6 && de <= 1e-8 && dl <= 1e-10,
        format!("position error {pos:.3e}, energy drift {de:.3e}, angular momentum drift {dl:.3e}"),
    )
}

fn conservation(level: Level) -> Check {
    let n_max = level.pick(6, 12);
    let (mut we, mut wl, mut wp): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=n_max {
        for p in [RingParams::central(n, 0.5).unwrap(), RingParams::free(n).unwrap()] {
            let start = re_configuration(&p, 0.0);
            let traj = integrate(&start, 10.0 * period(&p), &IntegratorConfig::default()).map_err(|e| e.to_string())?;
            let q0 = conserved(&start).map_err(|e| e.to_string())?;
            let q1 = conserved(traj.last()).map_err(|e| e.to_string())?;
            we = we.max(q0.energy_drift(&q1));
            wl = wl.max(q0.angular_momentum_drift(&q1));
            wp = wp.max(q1.linear_momentum.norm());
        }
    }
    verdict(
        we <= 1e-8 && wl <= 1e-10 && wp <= 1e-12,
        format!("energy {we:.3e}, angular momentum {wl:.3e}, linear momentum {wp:.3e}, n <= {n_max}"),
    )
}

fn growth_rates() -> Check {
    let eps = 1e-8;
    let cases = [
        (RingParams::central(2, 0.5).unwrap(), 1),
        (RingParams::free(8).unwrap(), 3),
    ];
    let mut parts = Vec::new();
    for (p, j) in cases {
        let lambda = mode_factor(&p, j).dominant_root();
        let start = perturb_along_mode(&p, j, lambda, eps).map_err(|e| e.to_string())?;
        let traj =
            integrate(&start, 20.0, &IntegratorConfig::default().with_stride(0.05)).map_err(|e| e.to_string())?;
        let g = growth_rate(&traj, &p, eps).map_err(|e| format!("{}: {e}", describe(&p)))?;
        let ok = (g.rate - lambda.re).abs() <= 0.2 * lambda.re && g.r_squared >= 0.99;
        let line = format!(
            "{} j={j}: fitted {:.5} vs {:.5}, r2 {:.6}",
            describe(&p),
            g.rate,
            lambda.re,
            g.r_squared
        );
        if !ok {
            return Err(line);
        }
        parts.push(line);
    }
    Ok(parts.join("; "))
}

/// Run every suite at `level`. `placement` swaps the Kronecker-term
/// placement used by the spectral side of the oracle comparisons.
pub fn run(level: Level, placement: DeltaPlacement) -> VerifyReport {
    let checks = spectrum_checks(level, placement);
    let suites: Vec<Suite<'_>> = vec![
        ("model.force_balance", Box::new(|| force_balance(level))),
        ("model.omega_relation", Box::new(|| omega_relation(level))),
        ("spectral.closed_sums", Box::new(|| closed_sums(level))),
        ("spectral.trig_identities", Box::new(|| trig_identities(level))),
        ("spectral.mode_zero", Box::new(|| mode_zero(level))),
        ("linmat.residual", Box::new(|| linmat_residual(&checks))),
        ("linmat.determinant", Box::new(|| linmat_determinant(&checks))),
        ("linmat.trace", Box::new(|| linmat_trace(&checks))),
        (
            "linmat.det_factorization",
            Box::new(|| det_factorization(level, placement)),
        ),
        (
            "spectral.product_formula",
            Box::new(|| product_formulas(level, placement)),
        ),
        ("stability.theorem_agreement", Box::new(|| theorem_agreement(level))),
        ("stability.endpoints", Box::new(|| endpoints(level))),
        ("stability.free_ring", Box::new(|| free_ring(level))),
        ("dynamics.re_fidelity", Box::new(re_fidelity)),
        ("dynamics.conservation", Box::new(|| conservation(level))),
        ("dynamics.growth_rate", Box::new(growth_rates)),
    ];
    let invariants: Vec<InvariantResult> = suites
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            InvariantResult { name, passed, detail }
        })
        .collect();
    let first_failure = invariants.iter().find(|r| !r.passed).map(|r| r.name);
    VerifyReport {
        level,
        delta_placement: placement,
        passed: first_failure.is_none(),
        first_failure,
        invariants,
    }
}
