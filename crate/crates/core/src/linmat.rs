//! The dense `4n x 4n` linearization in co-rotating coordinates and the
//! constructive checks that tie it to the per-mode factors.
//!
//! State ordering is `(dW_0, ..., dW_{n-1}, dW'_0, ..., dW'_{n-1})` with
//! `dW_k = (dw_k, dw_k conj)` treated as two independent complex unknowns.
//! The lower-left block row `j` holds `D` on the diagonal and
//! `N_{(k-j) mod n}` in column `k`; the lower-right is `diag(Omega)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::RingParams;
use crate::spectral::{mode_factors_with, DeltaPlacement, ModeIndex, SpectralConstants};

pub type Block = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ZERO_BLOCK: Block = [[ZERO; 2]; 2];

/// Eigenvector residual bound, relative to `||M||`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Bound on the row-scaled determinant at a predicted eigenvalue.
pub const DET_TOL: f64 = 1e-8;
/// Bound on `|sum lambda - tr M|`, relative to `||M||`.
pub const TRACE_TOL: f64 = 1e-8;

fn swap_block(upper: Complex64, lower: Complex64) -> Block {
    [[ZERO, upper], [lower, ZERO]]
}

#[derive(Debug, Clone)]
pub struct LinearizationMatrix {
    params: RingParams,
    entries: Vec<Complex64>,
    d: Block,
    /// `n_blocks[k]` is `N_k`; index 0 is unused and zero.
    n_blocks: Vec<Block>,
    omega: Block,
}

impl LinearizationMatrix {
    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn dim(&self) -> usize {
        4 * self.n()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn d_block(&self) -> Block {
        self.d
    }

    /// `N_k` for `1 <= k <= n-1`.
    pub fn n_block(&self, k: usize) -> Block {
        assert!(k >= 1 && k < self.n());
        self.n_blocks[k]
    }

    pub fn omega_block(&self) -> Block {
        self.omega
    }

    /// 2x2 block of the dense matrix at block coordinates (in units of 2).
    pub fn block_at(&self, block_row: usize, block_col: usize) -> Block {
        let (r, c) = (2 * block_row, 2 * block_col);
        [
            [self.get(r, c), self.get(r, c + 1)],
            [self.get(r + 1, c), self.get(r + 1, c + 1)],
        ]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let dim = self.dim();
        self.entries
            .chunks(dim)
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        self.entries
            .chunks(self.dim())
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `K(lambda) = D + sum_k rho^k N_k + lambda Omega - lambda^2 I` for mode `j`,
    /// summed block by block.
    pub fn mode_matrix(&self, j: usize, lambda: Complex64) -> Block {
        let mode = ModeIndex::new(self.n(), j);
        let mut k = self.d;
        for (idx, nb) in self.n_blocks.iter().enumerate().skip(1) {
            let w = mode.rho_pow(idx);
            for (r, row) in nb.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    k[r][c] += w * x;
                }
            }
        }
        let l2 = lambda * lambda;
        for (r, row) in k.iter_mut().enumerate() {
            row[r] += lambda * self.omega[r][r] - l2;
        }
        k
    }
}

/// Dense linearization for either ring type.
pub fn assemble(params: &RingParams) -> LinearizationMatrix {
    let n = params.n();
    let w = params.omega();
    let w2 = params.omega_sq();
    let inv_r2 = 1.0 / (params.r() * params.r());
    let consts = SpectralConstants::new(params);

    let off_diag = if params.has_central() {
        (1.0 + params.mu()) * inv_r2 - consts.a
    } else {
        -consts.b
    };
    let d = [
        [Complex64::new(w2, 0.0), Complex64::new(off_diag, 0.0)],
        [Complex64::new(off_diag, 0.0), Complex64::new(w2, 0.0)],
    ];

    let mut n_blocks = vec![ZERO_BLOCK; n];
    for (k, block) in n_blocks.iter_mut().enumerate().skip(1) {
        let theta = params.theta(k);
        let s = (0.5 * theta).sin();
        let q = 1.0 / (4.0 * s * s);
        *block = if params.has_central() {
            let scale = params.mu() * inv_r2;
            swap_block(
                (Complex64::from_polar(1.0, -theta) + q) * scale,
                (Complex64::from_polar(1.0, theta) + q) * scale,
            )
        } else {
            let v = Complex64::new(q * inv_r2, 0.0);
            swap_block(v, v)
        };
    }

    let omega = [
        [Complex64::new(0.0, -2.0 * w), ZERO],
        [ZERO, Complex64::new(0.0, 2.0 * w)],
    ];

    let dim = 4 * n;
    let half = 2 * n;
    let mut entries = vec![ZERO; dim * dim];
    for i in 0..half {
        entries[i * dim + half + i] = Complex64::new(1.0, 0.0);
    }
    for bj in 0..n {
        for bk in 0..n {
            let blk = if bj == bk { d } else { n_blocks[(bk + n - bj) % n] };
            for r in 0..2 {
                for c in 0..2 {
                    entries[(half + 2 * bj + r) * dim + 2 * bk + c] = blk[r][c];
                }
            }
        }
        for r in 0..2 {
            entries[(half + 2 * bj + r) * dim + half + 2 * bj + r] = omega[r][r];
        }
    }

    LinearizationMatrix {
        params: *params,
        entries,
        d,
        n_blocks,
        omega,
    }
}

/// Eigenvector of the dense matrix built from the circulant ansatz.
#[derive(Debug, Clone, Serialize)]
pub struct ModeEigenpair {
    pub j: usize,
    pub lambda: Complex64,
    pub xi: [Complex64; 2],
    /// `(xi, rho xi, ..., rho^{n-1} xi, lambda xi, ..., lambda rho^{n-1} xi)`.
    pub v: Vec<Complex64>,
}

fn block_norm(b: &Block) -> f64 {
    b.iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kernel vector of `K(lambda)` for mode `j`, lifted to the full state.
pub fn mode_eigenvector(matrix: &LinearizationMatrix, j: usize, lambda: Complex64) -> Result<ModeEigenpair> {
    let n = matrix.n();
    let k = matrix.mode_matrix(j, lambda);
    let first = [k[0][1], -k[0][0]];
    let second = [k[1][1], -k[1][0]];
    let norm2 = |x: &[Complex64; 2]| (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
    let (n1, n2) = (norm2(&first), norm2(&second));
    let floor = 1e-13 * matrix.norm_inf().max(1.0);
    let mut xi = if n1.max(n2) < floor {
        [Complex64::new(1.0, 0.0), ZERO]
    } else if n1 >= n2 {
        first
    } else {
        second
    };
    let scale = norm2(&xi);
    xi.iter_mut().for_each(|z| *z /= scale);

    let kxi = [k[0][0] * xi[0] + k[0][1] * xi[1], k[1][0] * xi[0] + k[1][1] * xi[1]];
    let residual = norm2(&kxi);
    if residual > 1e-8 * block_norm(&k) {
        return Err(Error::DegenerateEigenvector {
            j,
            lambda,
            residual: residual / block_norm(&k).max(f64::MIN_POSITIVE),
        });
    }

    let mode = ModeIndex::new(n, j);
    let mut v = vec![ZERO; 4 * n];
    for b in 0..n {
        let w = mode.rho_pow(b);
        for c in 0..2 {
            v[2 * b + c] = w * xi[c];
            v[2 * n + 2 * b + c] = lambda * w * xi[c];
        }
    }
    Ok(ModeEigenpair { j, lambda, xi, v })
}

/// `||(M - lambda I) v|| / ||v||`.
pub fn eigen_residual(matrix: &LinearizationMatrix, pair: &ModeEigenpair) -> f64 {
    let mv = matrix.mul_vec(&pair.v);
    let r: Vec<Complex64> = mv.iter().zip(&pair.v).map(|(a, b)| a - pair.lambda * b).collect();
    vec_norm(&r) / vec_norm(&pair.v)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DetResult {
    pub det: Complex64,
    /// `|det| / prod_i max_j |(M - lambda I)_{ij}|`.
    pub scaled: f64,
}

/// `det(M - lambda I)` by LU with partial pivoting on a private copy.
/// An exactly zero pivot yields a zero determinant.
pub fn det_at(matrix: &LinearizationMatrix, lambda: Complex64) -> DetResult {
    let dim = matrix.dim();
    let mut a = matrix.entries.clone();
    for i in 0..dim {
        a[i * dim + i] -= lambda;
    }
    let mut log_row_scale = 0.0;
    for row in a.chunks(dim) {
        let m = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return DetResult { det: ZERO, scaled: 0.0 };
        }
        log_row_scale += m.ln();
    }

    let mut det = Complex64::new(1.0, 0.0);
    let mut log_abs = 0.0;
    for col in 0..dim {
        let pivot_row = (col..dim)
            .max_by(|&x, &y| a[x * dim + col].norm().total_cmp(&a[y * dim + col].norm()))
            .expect("non-empty range");
        let pivot = a[pivot_row * dim + col];
        if pivot.norm() == 0.0 {
            return DetResult { det: ZERO, scaled: 0.0 };
        }
        if pivot_row != col {
            for c in 0..dim {
                a.swap(pivot_row * dim + c, col * dim + c);
            }
            det = -det;
        }
        det *= pivot;
        log_abs += pivot.norm().ln();
        for r in col + 1..dim {
            let factor = a[r * dim + col] / pivot;
            if factor == ZERO {
                continue;
            }
            for c in col + 1..dim {
                let upd = factor * a[col * dim + c];
                a[r * dim + c] -= upd;
            }
        }
    }
    DetResult {
        det,
        scaled: (log_abs - log_row_scale).exp(),
    }
}

/// Physical (conjugacy-respecting) perturbation built from a mode eigenpair:
/// positions `dw_k` and co-rotating velocities `dw'_k` for each ring body.
///
/// The pair `(a_k, b_k) = rho^k xi` and its mirror give
/// `dw_k = c a_k + conj(c b_k)`; `c` is 1 or `i`, whichever gives the larger
/// vector. Returns `None` when both combinations vanish.
pub fn physical_combination(pair: &ModeEigenpair, n: usize) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let build = |c: Complex64| {
        let mut pos = Vec::with_capacity(n);
        let mut vel = Vec::with_capacity(n);
        for k in 0..n {
            let a = pair.v[2 * k];
            let b = pair.v[2 * k + 1];
            pos.push(c * a + (c * b).conj());
            vel.push(c * pair.lambda * a + (c * pair.lambda * b).conj());
        }
        let size = vec_norm(&pos) + vec_norm(&vel);
        (pos, vel, size)
    };
    let (p1, v1, s1) = build(Complex64::new(1.0, 0.0));
    let (p2, v2, s2) = build(Complex64::i());
    let floor = 1e-12 * vec_norm(&pair.v);
    if s1.max(s2) <= floor {
        None
    } else if s1 >= s2 {
        Some((p1, v1))
    } else {
        Some((p2, v2))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheck {
    pub n: usize,
    pub norm: f64,
    pub eigenvalues_checked: usize,
    /// Largest `||(M - lambda I) v|| / ||v||`, divided by `||M||`.
    pub max_residual: f64,
    pub max_det_scaled: f64,
    /// `|sum lambda - tr M| / ||M||`.
    pub trace_error: f64,
    /// Eigenpairs whose kernel vector could not be formed.
    pub eigenvector_failures: Vec<(usize, Complex64)>,
    /// Purely imaginary eigenpairs with no nonzero conjugacy-respecting combination.
    pub conjugacy_gaps: usize,
}

impl SpectrumCheck {
    pub fn residual_ok(&self) -> bool {
        self.eigenvector_failures.is_empty() && self.max_residual <= RESIDUAL_TOL
    }

    pub fn det_ok(&self) -> bool {
        self.max_det_scaled <= DET_TOL
    }

    pub fn trace_ok(&self) -> bool {
        self.trace_error <= TRACE_TOL
    }

    pub fn passes(&self) -> bool {
        self.residual_ok() && self.det_ok() && self.trace_ok()
    }
}

pub fn full_spectrum_check(params: &RingParams) -> SpectrumCheck {
    full_spectrum_check_with(params, DeltaPlacement::Split)
}

/// Run every predicted eigenvalue through the eigenvector residual and the
/// determinant test, and compare the eigenvalue sum with the trace.
pub fn full_spectrum_check_with(params: &RingParams, placement: DeltaPlacement) -> SpectrumCheck {
    let m = assemble(params);
    let norm = m.norm_inf();
    let factors = mode_factors_with(params, placement);
    let mut max_residual: f64 = 0.0;
    let mut max_det: f64 = 0.0;
    let mut failures = Vec::new();
    let mut conjugacy_gaps = 0;
    let mut sum = ZERO;
    let mut checked = 0;
    for f in &factors {
        for &lambda in &f.lambdas {
            checked += 1;
            sum += lambda;
            match mode_eigenvector(&m, f.j(), lambda) {
                Ok(pair) => {
                    max_residual = max_residual.max(eigen_residual(&m, &pair) / norm);
                    if lambda.re == 0.0 && physical_combination(&pair, m.n()).is_none() {
                        conjugacy_gaps += 1;
                    }
                }
                Err(_) => {
                    failures.push((f.j(), lambda));
                    max_residual = f64::INFINITY;
                }
            }
            max_det = max_det.max(det_at(&m, lambda).scaled);
        }
    }
    SpectrumCheck {
        n: params.n(),
        norm,
        eigenvalues_checked: checked,
        max_residual,
        max_det_scaled: max_det,
        trace_error: (sum - m.trace()).norm() / norm,
        eigenvector_failures: failures,
        conjugacy_gaps,
    }
}
