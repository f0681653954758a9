//! Roots-of-unity reduction of the linearized equilibrium.
//!
//! The linearization is block circulant, so each n-th root of unity
//! `rho_j = exp(2 pi i j / n)` selects a 4-dimensional invariant subspace
//! whose characteristic polynomial is the biquadratic
//! `lambda^4 + A lambda^2 + B` with `A = 2 w^2`. Everything about mode `j`
//! lives in a [`ModeFactor`].

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::model::RingParams;

/// Exact rationals used for closed-form sums and bounds.
pub type Rational = Ratio<i64>;

pub fn rational_to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Always `p/q`, including integers (`1/1`).
pub fn rational_string(q: Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Mode label `j` with its root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeIndex {
    pub n: usize,
    pub j: usize,
    pub rho: Complex64,
}

impl ModeIndex {
    /// Panics if `j >= n`.
    pub fn new(n: usize, j: usize) -> Self {
        assert!(j < n, "mode index {j} out of range for n = {n}");
        Self {
            n,
            j,
            rho: Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64),
        }
    }

    /// `rho^k`, reduced mod n before taking the exponential.
    pub fn rho_pow(&self, k: usize) -> Complex64 {
        let m = (self.j * k) % self.n;
        // angle taken in (-pi, pi] so that rho^k and rho^{n-k} are exact conjugates
        let m = if 2 * m > self.n {
            m as f64 - self.n as f64
        } else {
            m as f64
        };
        Complex64::from_polar(1.0, 2.0 * PI * m / self.n as f64)
    }

    /// Index of the conjugate mode `n - j` (0 maps to 0).
    pub fn conjugate(&self) -> usize {
        (self.n - self.j) % self.n
    }
}

/// Where the two Kronecker terms `n delta` land in the off-diagonal entries
/// of the central-mass mode matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaPlacement {
    /// Upper entry carries `delta_{j,1}`, lower entry `delta_{j,n-1}`. This is
    /// what summing the circulant blocks produces.
    #[default]
    Split,
    /// Both entries carry `delta_{j,1}`. Kept only to demonstrate that the
    /// dense-matrix oracle rejects it.
    LiteralFirstTwice,
}

/// Characteristic data of one mode.
#[derive(Debug, Clone, Serialize)]
pub struct ModeFactor {
    pub mode: ModeIndex,
    /// `C_j`.
    pub c_sum: f64,
    /// `A` in `y^2 + A y + B`, always `2 w^2`.
    pub quad_coef: f64,
    /// `B` in `y^2 + A y + B`.
    pub const_coef: f64,
    /// Discriminant: `A^2/4 - B` for the central ring, `A^2 - 4B` for the free ring.
    pub delta: f64,
    /// `S = y1 + y2 = -A`.
    pub root_sum: f64,
    /// `P = y1 y2 = B`.
    pub root_product: f64,
    /// `[+sqrt(y1), -sqrt(y1), +sqrt(y2), -sqrt(y2)]`.
    pub lambdas: [Complex64; 4],
}

impl ModeFactor {
    fn from_coefficients(mode: ModeIndex, c_sum: f64, a: f64, b: f64, delta: f64) -> Self {
        Self {
            mode,
            c_sum,
            quad_coef: a,
            const_coef: b,
            delta,
            root_sum: -a,
            root_product: b,
            lambdas: biquadratic_roots(a, b),
        }
    }

    pub fn j(&self) -> usize {
        self.mode.j
    }

    /// `lambda^4 + A lambda^2 + B`.
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let l2 = lambda * lambda;
        l2 * l2 + l2 * self.quad_coef + self.const_coef
    }

    pub fn max_re(&self) -> f64 {
        self.lambdas.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Root with the largest real part, ties broken by larger imaginary part.
    pub fn dominant_root(&self) -> Complex64 {
        *self
            .lambdas
            .iter()
            .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
            .expect("four roots")
    }
}

/// `C_j = 1/4 sum_{k=1}^{n-1} rho_j^k / sin^2(pi k / n)` summed term by term.
/// Returns the real part and the magnitude of the imaginary part.
pub fn c_sum_bruteforce(n: usize, j: usize) -> (f64, f64) {
    let mode = ModeIndex::new(n, j);
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for k in 1..n {
        let s = (PI * k.min(n - k) as f64 / n as f64).sin();
        let term = mode.rho_pow(k) / (s * s);
        re.add(term.re);
        im.add(term.im);
    }
    (0.25 * re.total(), 0.25 * im.total().abs())
}

/// Compensated running sum.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.carry += if self.sum.abs() >= x.abs() {
            (self.sum - t) + x
        } else {
            (x - t) + self.sum
        };
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `C_j = (n^2 - 6 n j + 6 j^2 - 1) / 12`, exactly.
pub fn c_sum_closed(n: usize, j: usize) -> Rational {
    assert!(n >= 2 && j < n, "c_sum_closed needs n >= 2 and j < n");
    let (n, j) = (n as i64, j as i64);
    Rational::new(n * n - 6 * n * j + 6 * j * j - 1, 12)
}

/// `(sum 1/sin^2(theta_k/2), Re sum e^{i theta_k}/sin^2(theta_k/2))` over
/// `k = 1..n-1`; these equal `(n^2-1)/3` and `(n-1)(n-5)/3`.
pub fn trig_identity_sums(n: usize) -> (f64, f64) {
    let mut plain = 0.0;
    let mut weighted = Complex64::new(0.0, 0.0);
    for k in 1..n {
        let theta = 2.0 * PI * k as f64 / n as f64;
        let s = (0.5 * theta).sin();
        let inv = 1.0 / (s * s);
        plain += inv;
        weighted += Complex64::from_polar(inv, theta);
    }
    (plain, weighted.re)
}

/// Parabola `j^2 - j n + 2(n-1)` whose sign decides the generic modes.
pub fn parabola_factor(n: usize, j: usize) -> i64 {
    let (n, j) = (n as i64, j as i64);
    j * j - j * n + 2 * (n - 1)
}

/// The two constants absorbing the self-interaction sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralConstants {
    /// Central ring: `mu w^2 (n-1)(n-5) / (6 (2 + mu (n-1)))`.
    pub a: f64,
    /// Free ring: `w^2 (n-5) / 6`.
    pub b: f64,
}

impl SpectralConstants {
    pub fn new(params: &RingParams) -> Self {
        let n = params.n() as f64;
        let mu = params.mu();
        let w2 = params.omega_sq();
        Self {
            a: mu * w2 * (n - 1.0) * (n - 5.0) / (6.0 * (2.0 + mu * (n - 1.0))),
            b: w2 * (n - 5.0) / 6.0,
        }
    }
}

/// `(C_0 - C_j)`, exactly `j (n - j) / 2`.
fn c_gap(n: usize, j: usize) -> f64 {
    rational_to_f64(c_sum_closed(n, 0) - c_sum_closed(n, j))
}

/// Mode factor of the ring with a central mass, Kronecker terms split.
pub fn mode_factor_central(params: &RingParams, j: usize) -> ModeFactor {
    mode_factor_central_with(params, j, DeltaPlacement::Split)
}

/// Mode factor of the ring with a central mass.
///
/// The off-diagonal brackets are `X + (mu n / r^2) delta` with
/// `X = 1/r^2 - a + (mu/r^2) C_j`. The relation between `w` and `r` gives
/// `X = w^2 - (mu/r^2)(C_0 - C_j)`, which is how `X` is evaluated so that
/// `B` vanishes exactly at `j = 0`.
pub fn mode_factor_central_with(params: &RingParams, j: usize, placement: DeltaPlacement) -> ModeFactor {
    let n = params.n();
    let mode = ModeIndex::new(n, j);
    let inv_r2 = 1.0 / (params.r() * params.r());
    let w2 = params.omega_sq();
    let mu = params.mu();

    let kick = mu * n as f64 * inv_r2;
    let upper = if j == 1 { kick } else { 0.0 };
    let lower = match placement {
        DeltaPlacement::Split if j == n - 1 => kick,
        DeltaPlacement::LiteralFirstTwice if j == 1 => kick,
        _ => 0.0,
    };
    let d = mu * inv_r2 * c_gap(n, j);
    // brackets are w^2 - u and w^2 - v
    let u = d - upper;
    let v = d - lower;
    let b = w2 * (u + v) - u * v;
    let delta = (w2 - u) * (w2 - v);
    ModeFactor::from_coefficients(mode, rational_to_f64(c_sum_closed(n, j)), 2.0 * w2, b, delta)
}

/// Mode factor of the free ring: `B = w^4 - (C_j / r^2 - b)^2`, with
/// `C_j / r^2 - b = w^2 - (C_0 - C_j) / r^2`.
pub fn mode_factor_free(params: &RingParams, j: usize) -> ModeFactor {
    let n = params.n();
    let mode = ModeIndex::new(n, j);
    let w2 = params.omega_sq();
    let d = c_gap(n, j) / (params.r() * params.r());
    let y = w2 - d;
    ModeFactor::from_coefficients(
        mode,
        rational_to_f64(c_sum_closed(n, j)),
        2.0 * w2,
        d * (2.0 * w2 - d),
        4.0 * y * y,
    )
}

pub fn mode_factor(params: &RingParams, j: usize) -> ModeFactor {
    if params.has_central() {
        mode_factor_central(params, j)
    } else {
        mode_factor_free(params, j)
    }
}

pub fn mode_factors(params: &RingParams) -> Vec<ModeFactor> {
    (0..params.n()).map(|j| mode_factor(params, j)).collect()
}

pub fn mode_factors_with(params: &RingParams, placement: DeltaPlacement) -> Vec<ModeFactor> {
    (0..params.n())
        .map(|j| {
            if params.has_central() {
                mode_factor_central_with(params, j, placement)
            } else {
                mode_factor_free(params, j)
            }
        })
        .collect()
}

/// Closed-form root product `P_j` for the central ring.
///
/// Generic modes: `w^4 mu j(n-j) [mu (j^2 - jn + 2(n-1)) + 4] / (mu(n-1) + 2)^2`.
/// Modes 1 and n-1 (n >= 3): `w^4 mu (mu (n-1)^2 - 4) / (2 + mu(n-1))^2`.
/// For n = 2 both Kronecker terms hit the single mode 1 and the product
/// becomes `-3 mu (4 + 5 mu) w^4 / (2 + mu)^2`.
pub fn product_formula_central(params: &RingParams, j: usize) -> f64 {
    let n = params.n();
    assert!(j < n);
    let mu = params.mu();
    let w4 = params.omega_sq().powi(2);
    let nf = n as f64;
    let denom = (2.0 + mu * (nf - 1.0)).powi(2);
    if j == 0 {
        0.0
    } else if n == 2 {
        -3.0 * mu * (4.0 + 5.0 * mu) * w4 / denom
    } else if j == 1 || j == n - 1 {
        w4 * mu * (mu * (nf - 1.0).powi(2) - 4.0) / denom
    } else {
        let jf = j as f64;
        w4 * mu * jf * (nf - jf) * (mu * parabola_factor(n, j) as f64 + 4.0) / denom
    }
}

/// Closed-form root product for the free ring,
/// `w^4 j (n-j) (j^2 - jn + 2(n-1)) / (n-1)^2`.
pub fn product_formula_free(params: &RingParams, j: usize) -> f64 {
    let n = params.n();
    assert!(j < n);
    let w4 = params.omega_sq().powi(2);
    let jn = (j * (n - j)) as f64;
    w4 * jn * parabola_factor(n, j) as f64 / ((n - 1) as f64).powi(2)
}

pub fn product_formula(params: &RingParams, j: usize) -> f64 {
    if params.has_central() {
        product_formula_central(params, j)
    } else {
        product_formula_free(params, j)
    }
}

/// Roots of `lambda^4 + A lambda^2 + B`.
///
/// The quadratic in `y = lambda^2` is solved with the cancellation-free pair
/// `q = -(A + sign(A) sqrt(A^2 - 4B)) / 2`, `y = {q, B/q}`. A discriminant
/// within rounding of zero is treated as a double root.
pub fn biquadratic_roots(a: f64, b: f64) -> [Complex64; 4] {
    let disc = a * a - 4.0 * b;
    let noise = 16.0 * f64::EPSILON * (a * a).max(4.0 * b.abs());
    let (y1, y2) = if disc.abs() <= noise {
        let y = Complex64::new(-0.5 * a, 0.0);
        (y, y)
    } else if disc > 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (a + a.signum() * s);
        let other = if q != 0.0 { b / q } else { 0.0 };
        (Complex64::new(q, 0.0), Complex64::new(other, 0.0))
    } else {
        let s = (-disc).sqrt();
        (Complex64::new(-0.5 * a, 0.5 * s), Complex64::new(-0.5 * a, -0.5 * s))
    };
    let r1 = lambda_from_y(y1);
    let r2 = lambda_from_y(y2);
    [r1, -r1, r2, -r2]
}

fn lambda_from_y(y: Complex64) -> Complex64 {
    if y.im == 0.0 {
        if y.re < 0.0 {
            Complex64::new(0.0, (-y.re).sqrt())
        } else {
            Complex64::new(y.re.sqrt(), 0.0)
        }
    } else {
        y.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same_multiset(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        // greedy matching is enough for four values
        let mut pool = b.to_vec();
        for x in a {
            match pool
                .iter()
                .enumerate()
                .min_by(|p, q| (p.1 - x).norm().total_cmp(&(q.1 - x).norm()))
            {
                Some((i, y)) if (y - x).norm() <= tol => {
                    pool.remove(i);
                }
                _ => return false,
            }
        }
        true
    }

    /// `X` evaluated straight from its definition, `1/r^2 - a + (mu/r^2) C_j`.
    fn bracket_from_definition(p: &RingParams, j: usize) -> f64 {
        let k = SpectralConstants::new(p);
        let inv_r2 = 1.0 / (p.r() * p.r());
        inv_r2 - k.a + p.mu() * inv_r2 * c_sum_bruteforce(p.n(), j).0
    }

    #[test]
    fn bruteforce_examples() {
        let (re, im) = c_sum_bruteforce(4, 0);
        assert!((re - 1.25).abs() <= 1e-15 && im == 0.0);
        let (re, im) = c_sum_bruteforce(5, 1);
        assert!(re.abs() <= 1e-14 && im <= 1e-14);
        let (a, _) = c_sum_bruteforce(7, 3);
        let (b, _) = c_sum_bruteforce(7, 4);
        assert!((a - b).abs() <= 1e-14);
    }

    #[test]
    fn closed_examples() {
        assert_eq!(c_sum_closed(10, 0), Rational::new(99, 12));
        assert_eq!(rational_to_f64(c_sum_closed(10, 0)), 8.25);
        assert_eq!(c_sum_closed(9, 1), Rational::new(32, 12));
        assert_eq!(c_sum_closed(6, 3), Rational::new(-19, 12));
        let (bf, _) = c_sum_bruteforce(6, 3);
        assert!((bf + 19.0 / 12.0).abs() <= 1e-14);
    }

    #[test]
    fn closed_matches_bruteforce_small() {
        for n in 2..=96 {
            for j in 0..n {
                let (re, im) = c_sum_bruteforce(n, j);
                let exact = rational_to_f64(c_sum_closed(n, j));
                let tol = 1e-10 * (n * n).max(1) as f64;
                assert!((re - exact).abs() <= tol, "n={n} j={j}");
                assert!(im <= 1e-10, "n={n} j={j} im={im}");
            }
        }
    }

    #[test]
    fn closed_sum_symmetric() {
        for n in 2..200 {
            for j in 1..n {
                assert_eq!(c_sum_closed(n, j), c_sum_closed(n, n - j));
            }
        }
    }

    #[test]
    fn trig_sum_examples() {
        let (s, t) = trig_identity_sums(2);
        assert!((s - 1.0).abs() <= 1e-15 && (t + 1.0).abs() <= 1e-15);
        let (s, t) = trig_identity_sums(3);
        assert!((s - 8.0 / 3.0).abs() <= 1e-14 && (t + 4.0 / 3.0).abs() <= 1e-14);
        let (s, t) = trig_identity_sums(5);
        assert!((s - 8.0).abs() <= 1e-13 && t.abs() <= 1e-13);
    }

    #[test]
    fn constants_match_definitions() {
        let p = RingParams::central(7, 0.4).unwrap();
        let k = SpectralConstants::new(&p);
        let (_, weighted) = trig_identity_sums(7);
        // a = mu/(4 r^2) * sum e^{i theta}/sin^2
        assert!((k.a - 0.4 / 4.0 * weighted).abs() <= 1e-14);
        let f = RingParams::free(7).unwrap();
        let k = SpectralConstants::new(&f);
        assert!((k.b - 0.25 * weighted).abs() <= 1e-14);
    }

    #[test]
    fn bracket_rewrite_agrees_with_definition() {
        for n in 2..30 {
            for &mu in &[0.05, 0.5, 1.0, 3.0] {
                let p = RingParams::new(n, mu, true, 1.3).unwrap();
                let w2 = p.omega() * p.omega();
                for j in 0..n {
                    let rewritten = w2 - mu / (p.r() * p.r()) * c_gap(n, j);
                    let direct = bracket_from_definition(&p, j);
                    assert!((rewritten - direct).abs() <= 1e-12 * w2 * n as f64, "n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn central_mode_zero() {
        for &(n, mu) in &[(2, 0.5), (5, 0.1), (13, 1.0), (40, 0.77)] {
            let p = RingParams::central(n, mu).unwrap();
            let f = mode_factor_central(&p, 0);
            assert_eq!(f.root_product, 0.0);
            let w = p.omega();
            let expect = [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, w * 2f64.sqrt()),
                Complex64::new(0.0, -w * 2f64.sqrt()),
            ];
            assert!(same_multiset(&f.lambdas, &expect, 1e-12));
        }
    }

    #[test]
    fn central_mode_one_examples() {
        let p = RingParams::central(3, 1.0).unwrap();
        assert!(mode_factor_central(&p, 1).root_product.abs() <= 1e-14);

        let p = RingParams::central(10, 0.5).unwrap();
        let f = mode_factor_central(&p, 1);
        let w4 = p.omega().powi(4);
        // oracle: expand the bracket product with X from its definition
        let x = bracket_from_definition(&p, 1);
        let oracle = w4 - x * (x + 0.5 * 10.0);
        assert!((f.root_product - oracle).abs() <= 1e-12 * w4);
        assert!((f.root_product - w4 * 18.25 / 42.25).abs() <= 1e-12 * w4);

        for &(n, mu) in &[(3, 0.3), (10, 0.5), (17, 0.9)] {
            let p = RingParams::central(n, mu).unwrap();
            let f = mode_factor_central(&p, 1);
            let nf = n as f64;
            let expect = 4.0 * p.omega().powi(4) * (mu * nf + 1.0) / (2.0 + mu * (nf - 1.0)).powi(2);
            assert!((f.delta - expect).abs() <= 1e-12 * expect);
            assert!(f.delta > 0.0);
        }
    }

    #[test]
    fn central_coefficients_are_consistent() {
        let p = RingParams::central(9, 0.6).unwrap();
        for f in mode_factors(&p) {
            assert_eq!(f.root_sum, -f.quad_coef);
            assert_eq!(f.root_product, f.const_coef);
            assert_eq!(f.quad_coef, 2.0 * p.omega_sq());
        }
    }

    #[test]
    fn free_examples() {
        let p = RingParams::free(7).unwrap();
        assert_eq!(parabola_factor(7, 3), 0);
        assert_eq!(mode_factor_free(&p, 3).root_product, 0.0);

        let p = RingParams::free(8).unwrap();
        assert_eq!(parabola_factor(8, 3), -1);
        let f = mode_factor_free(&p, 3);
        let w4 = p.omega().powi(4);
        assert!(f.root_product < 0.0);
        assert!((f.root_product - -15.0 * w4 / 49.0).abs() <= 1e-12 * w4);

        for n in 2..20 {
            let p = RingParams::free(n).unwrap();
            let f = mode_factor_free(&p, 0);
            assert_eq!(f.root_product, 0.0);
            let w = p.omega();
            let expect = [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, w * 2f64.sqrt()),
                Complex64::new(0.0, -w * 2f64.sqrt()),
            ];
            assert!(same_multiset(&f.lambdas, &expect, 1e-12));
        }
    }

    #[test]
    fn free_delta_is_full_discriminant() {
        let p = RingParams::free(11).unwrap();
        for f in mode_factors(&p) {
            let full = f.quad_coef * f.quad_coef - 4.0 * f.const_coef;
            assert!((f.delta - full).abs() <= 1e-10 * f.quad_coef.powi(2));
            assert!(f.delta >= 0.0);
        }
    }

    #[test]
    fn product_formula_examples() {
        let p = RingParams::central(10, 0.5).unwrap();
        let w4 = p.omega().powi(4);
        assert!((product_formula_central(&p, 5) - w4 * 6.25 / 42.25).abs() <= 1e-13 * w4);
        assert!((mode_factor_central(&p, 5).root_product - w4 * 6.25 / 42.25).abs() <= 1e-12 * w4);

        let p = RingParams::central(4, 4.0 / 9.0).unwrap();
        assert!(product_formula_central(&p, 1).abs() <= 1e-15);
        assert!(mode_factor_central(&p, 1).root_product.abs() <= 1e-14);

        for n in 2..10 {
            let p = RingParams::central(n, 0.3).unwrap();
            assert_eq!(product_formula_central(&p, 0), 0.0);
        }
    }

    #[test]
    fn two_ring_product() {
        // dense 2-ring: both off-diagonal brackets carry the n mu / r^2 kick
        for &mu in &[0.1, 0.5, 1.0] {
            let p = RingParams::central(2, mu).unwrap();
            let x = bracket_from_definition(&p, 1) + 2.0 * mu;
            let oracle = p.omega().powi(4) - x * x;
            let f = mode_factor_central(&p, 1);
            assert!((f.root_product - oracle).abs() <= 1e-12);
            assert!((product_formula_central(&p, 1) - oracle).abs() <= 1e-12);
            assert!(f.root_product < 0.0);
        }
    }

    #[test]
    fn product_formula_agrees_with_factors() {
        for n in 2..=64 {
            for step in 1..=20 {
                let mu = step as f64 / 20.0;
                let p = RingParams::central(n, mu).unwrap();
                let w4 = p.omega_sq().powi(2);
                for j in 0..n {
                    let f = mode_factor_central(&p, j).root_product;
                    let g = product_formula_central(&p, j);
                    // exact zeros sit on the interval endpoints, so w^4 is the floor
                    let scale = f.abs().max(g.abs()).max(w4);
                    assert!((f - g).abs() <= 1e-10 * scale, "n={n} mu={mu} j={j}: {f} vs {g}");
                }
            }
            let p = RingParams::free(n).unwrap();
            let w4 = p.omega_sq().powi(2);
            for j in 0..n {
                let f = mode_factor_free(&p, j).root_product;
                let g = product_formula_free(&p, j);
                let scale = f.abs().max(g.abs()).max(w4);
                assert!((f - g).abs() <= 1e-10 * scale, "free n={n} j={j}");
            }
        }
    }

    #[test]
    fn biquadratic_examples() {
        let i = Complex64::i();
        let r = biquadratic_roots(2.0, 1.0);
        assert!(same_multiset(&r, &[i, -i, i, -i], 1e-15));
        let r = biquadratic_roots(2.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        assert!(same_multiset(&r, &[z, z, i * 2f64.sqrt(), -i * 2f64.sqrt()], 1e-15));
        let r = biquadratic_roots(2.0, -3.0);
        let one = Complex64::new(1.0, 0.0);
        assert!(same_multiset(
            &r,
            &[one, -one, i * 3f64.sqrt(), -i * 3f64.sqrt()],
            1e-15
        ));
    }

    #[test]
    fn biquadratic_complex_case() {
        // y^2 + y + 1: complex y, lambdas off both axes
        let r = biquadratic_roots(1.0, 1.0);
        for l in r {
            let l2 = l * l;
            assert!((l2 * l2 + l2 + 1.0).norm() <= 1e-14);
            assert!(l.re.abs() > 0.1 && l.im.abs() > 0.1);
        }
    }

    #[test]
    fn conjugate_modes_share_spectrum() {
        for n in 2..24 {
            for p in [RingParams::central(n, 0.35).unwrap(), RingParams::free(n).unwrap()] {
                let fs = mode_factors(&p);
                for f in &fs {
                    let g = &fs[f.mode.conjugate()];
                    assert!(same_multiset(&f.lambdas, &g.lambdas, 1e-10), "n={n} j={}", f.j());
                }
            }
        }
    }

    #[test]
    fn literal_placement_breaks_pairing() {
        let p = RingParams::central(6, 0.5).unwrap();
        let a = mode_factor_central_with(&p, 1, DeltaPlacement::LiteralFirstTwice);
        let b = mode_factor_central_with(&p, 5, DeltaPlacement::LiteralFirstTwice);
        assert!((a.root_product - b.root_product).abs() > 1e-3);
    }
}
