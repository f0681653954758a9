//! Linear stability verdicts: numerically from the mode factors, and from
//! the closed-form mass-ratio intervals.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::RingParams;
use crate::spectral::{mode_factors, rational_string, rational_to_f64, ModeFactor, Rational};

/// Distance below which a mass ratio counts as sitting on an interval endpoint.
pub const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    SpectrallyStable,
    Degenerate,
    Unstable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::SpectrallyStable => "spectrally_stable",
            Status::Degenerate => "degenerate",
            Status::Unstable => "unstable",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub status: Status,
    /// Largest real part over all eigenvalues except the two trivial zeros.
    pub max_re_lambda: f64,
    /// Mode with the largest real part (unstable), or the first mode with an
    /// extra zero eigenvalue (degenerate).
    pub witness_mode: Option<usize>,
    pub trivial_zeros_excluded: usize,
    pub per_mode_p: Vec<f64>,
}

impl StabilityVerdict {
    /// Smallest root product over the modes `j >= 1`.
    pub fn min_nontrivial_p(&self) -> f64 {
        self.per_mode_p[1..].iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Scale-aware tolerances `(tol_p, tol_re) = (1e-9 w^4, 1e-9 w)`.
pub fn tolerances(params: &RingParams) -> (f64, f64) {
    let w = params.omega();
    (1e-9 * w.powi(4), 1e-9 * w)
}

pub fn classify_spectral(params: &RingParams) -> StabilityVerdict {
    classify_factors(params, &mode_factors(params))
}

/// Verdict from precomputed mode factors (one per `j`, in order).
pub fn classify_factors(params: &RingParams, factors: &[ModeFactor]) -> StabilityVerdict {
    let (tol_p, tol_re) = tolerances(params);

    // mode 0 carries the symmetry pair: drop its two smallest roots
    let mut zero_mode = factors[0].lambdas;
    zero_mode.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut max_re = zero_mode[2..].iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let mut unstable: Option<(usize, f64)> = None;
    if max_re > tol_re {
        unstable = Some((0, max_re));
    }
    let mut degenerate = None;

    for f in &factors[1..] {
        let re = f.max_re();
        max_re = max_re.max(re);
        let p = f.root_product;
        let growing = p < -tol_p || (p > tol_p && re > tol_re);
        if growing {
            if unstable.is_none_or(|(_, best)| re > best) {
                unstable = Some((f.j(), re));
            }
        } else if p.abs() <= tol_p && degenerate.is_none() {
            degenerate = Some(f.j());
        }
    }

    let (status, witness) = match (unstable, degenerate) {
        (Some((j, _)), _) => (Status::Unstable, Some(j)),
        (None, Some(j)) => (Status::Degenerate, Some(j)),
        (None, None) => (Status::SpectrallyStable, None),
    };
    StabilityVerdict {
        status,
        max_re_lambda: max_re,
        witness_mode: witness,
        trivial_zeros_excluded: 2,
        per_mode_p: factors.iter().map(|f| f.root_product).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsKind {
    /// No admissible mass ratio (n = 2).
    Unstable,
    /// Only `mu = 1` (n = 3).
    Point,
    /// `[4/(n-1)^2, 1)` for 4 <= n <= 9.
    OpenUnit,
    /// `[4/(n-1)^2, 16/(n^2-8n+8)]` for even n >= 10.
    Even,
    /// `[4/(n-1)^2, 16/((n-1)(n-7))]` for odd n >= 11.
    Odd,
}

impl BoundsKind {
    pub fn label(&self) -> &'static str {
        match self {
            BoundsKind::Unstable => "unstable",
            BoundsKind::Point => "point",
            BoundsKind::OpenUnit => "open-unit",
            BoundsKind::Even => "even",
            BoundsKind::Odd => "odd",
        }
    }
}

/// Closed-form interval of mass ratios giving a linearly stable ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuBounds {
    pub n: usize,
    pub kind: BoundsKind,
    #[serde(serialize_with = "ser_rational")]
    pub lower: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Option<Rational>,
    pub upper_inclusive: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&rational_string(*q)),
        None => s.serialize_none(),
    }
}

impl MuBounds {
    pub fn is_empty(&self) -> bool {
        self.lower.is_none()
    }

    pub fn contains(&self, mu: f64) -> bool {
        let (Some(lo), Some(hi)) = (self.lower, self.upper) else {
            return false;
        };
        let (lo, hi) = (rational_to_f64(lo), rational_to_f64(hi));
        mu >= lo && if self.upper_inclusive { mu <= hi } else { mu < hi }
    }

    /// Interval endpoints as floats (one entry for the point case).
    pub fn endpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .lower
            .iter()
            .chain(&self.upper)
            .map(|q| rational_to_f64(*q))
            .collect();
        out.dedup();
        out
    }

    /// Distance from `mu` to the nearest endpoint; infinite when empty.
    pub fn boundary_distance(&self, mu: f64) -> f64 {
        self.endpoints()
            .into_iter()
            .map(|b| (mu - b).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn theorem_bounds(n: usize) -> MuBounds {
    assert!(n >= 2, "theorem_bounds needs n >= 2");
    let ni = n as i64;
    let lower = Rational::new(4, (ni - 1) * (ni - 1));
    let one = Rational::from_integer(1);
    let (kind, lower, upper, upper_inclusive) = match n {
        2 => (BoundsKind::Unstable, None, None, false),
        3 => (BoundsKind::Point, Some(one), Some(one), true),
        4..=9 => (BoundsKind::OpenUnit, Some(lower), Some(one), false),
        _ if n.is_multiple_of(2) => (
            BoundsKind::Even,
            Some(lower),
            Some(Rational::new(16, ni * ni - 8 * ni + 8)),
            true,
        ),
        _ => (
            BoundsKind::Odd,
            Some(lower),
            Some(Rational::new(16, (ni - 1) * (ni - 7))),
            true,
        ),
    };
    MuBounds {
        n,
        kind,
        lower,
        upper,
        upper_inclusive,
    }
}

/// Verdict read off the closed-form results: interval membership with a
/// central mass, `n <= 6` without. Never returns [`Status::Degenerate`].
pub fn classify_theorem(n: usize, mu: f64, has_central: bool) -> Result<Status> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    let stable = if has_central {
        if !(mu > 0.0) {
            return Err(Error::Domain(format!("mass ratio must be positive, got {mu}")));
        }
        if mu > 1.0 {
            return Err(Error::OutsideRegime { mu });
        }
        theorem_bounds(n).contains(mu)
    } else {
        n <= 6
    };
    Ok(if stable {
        Status::SpectrallyStable
    } else {
        Status::Unstable
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconciliation {
    /// Away from every endpoint: a genuine failure.
    Interior,
    /// On an endpoint, where extra zero eigenvalues appear.
    Boundary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub mu: f64,
    pub spectral: Status,
    pub theorem: Status,
    pub boundary_distance: f64,
    pub kind: Reconciliation,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub checked: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrossCheckReport {
    pub fn interior_failures(&self) -> impl Iterator<Item = &Disagreement> {
        self.disagreements.iter().filter(|d| d.kind == Reconciliation::Interior)
    }
}

/// Compare the numerical and closed-form verdicts of the central ring over
/// a grid of mass ratios in (0, 1]. Output order follows the grid.
pub fn cross_check(n: usize, mu_grid: &[f64]) -> Result<CrossCheckReport> {
    let bounds = theorem_bounds(n);
    let rows = mu_grid
        .par_iter()
        .map(|&mu| -> Result<Option<Disagreement>> {
            let spectral = classify_spectral(&RingParams::central(n, mu)?).status;
            let theorem = classify_theorem(n, mu, true)?;
            if spectral == theorem {
                return Ok(None);
            }
            let boundary_distance = bounds.boundary_distance(mu);
            let kind = if boundary_distance > BOUNDARY_EPS {
                Reconciliation::Interior
            } else {
                Reconciliation::Boundary
            };
            Ok(Some(Disagreement {
                mu,
                spectral,
                theorem,
                boundary_distance,
                kind,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheckReport {
        n,
        checked: mu_grid.len(),
        disagreements: rows.into_iter().flatten().collect(),
    })
}

/// `count` points evenly spaced strictly inside (0, 1).
pub fn interior_grid(count: usize) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / (count + 1) as f64).collect()
}
