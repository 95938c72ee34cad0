use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::special::legendre_all;
use crate::error::{invalid, Error, Result};
use crate::numeric::quad::GaussLegendre;

const TAIL_TOL: f64 = 1e-12;

/// PSWFs `psi_{n,c}`, `n <= n_max`, as coefficient vectors in the orthonormal
/// Legendre basis `sqrt((2k+1)/2) P_k` of `L^2(-1, 1)`.
#[derive(Debug, Clone)]
pub struct ProlateBasis {
    pub c: f64,
    pub n_max: usize,
    /// Highest Legendre degree kept.
    pub trunc: usize,
    pub coeffs: Vec<Vec<f64>>,
    /// Eigenvalues of the Sturm–Liouville operator, increasing.
    pub chi: Vec<f64>,
    /// `|mu_n|` for `mu_n psi_n(x) = int psi_n(y) e^{-icxy} dy`.
    pub mu_abs: Vec<f64>,
    pub mu_phase: Vec<f64>,
    /// `lambda_n = (c/2pi)|mu_n|^2`, decreasing.
    pub lambda: Vec<f64>,
}

fn diag(k: usize, c: f64) -> f64 {
    let kf = k as f64;
    kf * (kf + 1.0) + c * c * (2.0 * kf * (kf + 1.0) - 1.0) / ((2.0 * kf + 3.0) * (2.0 * kf - 1.0))
}

fn offdiag(k: usize, c: f64) -> f64 {
    let kf = k as f64;
    c * c * (kf + 1.0) * (kf + 2.0)
        / ((2.0 * kf + 3.0) * ((2.0 * kf + 1.0) * (2.0 * kf + 5.0)).sqrt())
}

/// Re-derives an eigenvector of the tridiagonal block by continued-fraction
/// ratios from both ends towards its largest entry, so that entries many
/// orders below the peak keep their relative accuracy.
fn refine(d: &[f64], b: &[f64], chi: f64, rough: &[f64]) -> Vec<f64> {
    let n = d.len();
    let p = rough
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut a = vec![0.0; n];
    a[p] = 1.0;
    // s_i = a_i / a_{i+1}
    let mut s = vec![0.0; n];
    let mut prev = 0.0;
    for i in 0..p {
        let lower = if i > 0 { b[i - 1] * prev } else { 0.0 };
        s[i] = -b[i] / (d[i] - chi + lower);
        prev = s[i];
    }
    for i in (0..p).rev() {
        a[i] = s[i] * a[i + 1];
    }
    // r_i = a_i / a_{i-1}
    let mut r = vec![0.0; n];
    let mut next = 0.0;
    for i in (p + 1..n).rev() {
        let upper = if i + 1 < n { b[i] * next } else { 0.0 };
        r[i] = -b[i - 1] / (d[i] - chi + upper);
        next = r[i];
    }
    for i in p + 1..n {
        a[i] = r[i] * a[i - 1];
    }
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    a.iter_mut().for_each(|v| *v /= norm);
    if a.iter().zip(rough).map(|(x, y)| x * y).sum::<f64>() < 0.0 {
        a.iter_mut().for_each(|v| *v = -*v);
    }
    a
}

fn try_build(c: f64, n_max: usize, trunc: usize) -> std::result::Result<ProlateBasis, f64> {
    let mut coeffs = vec![Vec::new(); n_max + 1];
    let mut chi = vec![0.0; n_max + 1];
    let mut worst_tail: f64 = 0.0;
    for parity in 0..2usize {
        if parity > n_max {
            continue;
        }
        let ks: Vec<usize> = (parity..=trunc).step_by(2).collect();
        let nb = ks.len();
        let d: Vec<f64> = ks.iter().map(|&k| diag(k, c)).collect();
        let b: Vec<f64> = ks.iter().map(|&k| offdiag(k, c)).collect();
        let mat = DMatrix::from_fn(nb, nb, |i, j| {
            if i == j {
                d[i]
            } else if j == i + 1 {
                b[i]
            } else if i == j + 1 {
                b[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(mat);
        let mut order: Vec<usize> = (0..nb).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].partial_cmp(&eig.eigenvalues[y]).unwrap());
        for (j, &col) in order.iter().enumerate() {
            let n = 2 * j + parity;
            if n > n_max {
                break;
            }
            let rough: Vec<f64> = eig.eigenvectors.column(col).iter().cloned().collect();
            let lam = eig.eigenvalues[col];
            let a = refine(&d, &b, lam, &rough);
            worst_tail = worst_tail.max(a[nb - 1].abs());
            let mut full = vec![0.0; trunc + 1];
            for (i, &k) in ks.iter().enumerate() {
                full[k] = a[i];
            }
            // psi_n(1) > 0
            let at_one: f64 = full
                .iter()
                .enumerate()
                .map(|(k, v)| v * ((2 * k + 1) as f64 / 2.0).sqrt())
                .sum();
            if at_one < 0.0 {
                full.iter_mut().for_each(|v| *v = -*v);
            }
            coeffs[n] = full;
            chi[n] = lam;
        }
    }
    if worst_tail > TAIL_TOL {
        return Err(worst_tail);
    }
    let mut basis = ProlateBasis {
        c,
        n_max,
        trunc,
        coeffs,
        chi,
        mu_abs: vec![0.0; n_max + 1],
        mu_phase: vec![0.0; n_max + 1],
        lambda: vec![0.0; n_max + 1],
    };
    for n in 0..=n_max {
        let mu = basis.mu_at_origin(n);
        basis.mu_abs[n] = mu.norm();
        basis.mu_phase[n] = mu.arg();
        basis.lambda[n] = c / (2.0 * PI) * mu.norm_sqr();
    }
    Ok(basis)
}

/// Builds `psi_{0,c}, ..., psi_{N,c}`. The Legendre truncation starts at
/// `max(2N, ceil(2c)) + 30` and is doubled once if the last kept coefficient
/// exceeds `1e-12`.
pub fn compute_basis(c: f64, n_max: usize) -> Result<ProlateBasis> {
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("c must be positive, got {c}"));
    }
    let trunc = (2 * n_max).max((2.0 * c).ceil() as usize) + 30;
    match try_build(c, n_max, trunc) {
        Ok(b) => Ok(b),
        Err(_) => try_build(c, n_max, 2 * trunc).map_err(|tail| {
            Error::Numerical(format!(
                "Legendre truncation {} leaves tail coefficient {tail:e}",
                2 * trunc
            ))
        }),
    }
}

impl ProlateBasis {
    /// `psi_{n,c}(x)` for `x in [-1, 1]`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        let p = legendre_all(self.trunc, x);
        self.coeffs[n]
            .iter()
            .enumerate()
            .map(|(k, a)| a * ((2 * k + 1) as f64 / 2.0).sqrt() * p[k])
            .sum()
    }

    /// `psi_{n,c}'(x)`.
    pub fn eval_derivative(&self, n: usize, x: f64) -> f64 {
        let p = legendre_all(self.trunc, x);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        let mut dp = vec![0.0; self.trunc + 1];
        for k in 1..=self.trunc {
            let below = if k >= 2 { dp[k - 2] } else { 0.0 };
            dp[k] = below + (2 * k - 1) as f64 * p[k - 1];
        }
        self.coeffs[n]
            .iter()
            .enumerate()
            .map(|(k, a)| a * ((2 * k + 1) as f64 / 2.0).sqrt() * dp[k])
            .sum()
    }

    /// `mu_n` from the eigen-equation at `x = 0` (value for even `n`,
    /// derivative for odd `n`); exact up to the coefficient accuracy.
    fn mu_at_origin(&self, n: usize) -> Complex64 {
        let a = &self.coeffs[n];
        if n % 2 == 0 {
            Complex64::new(2f64.sqrt() * a[0] / self.eval(n, 0.0), 0.0)
        } else {
            let v = self.c * (2.0f64 / 3.0).sqrt() * a[1] / self.eval_derivative(n, 0.0);
            Complex64::new(0.0, -v)
        }
    }

    pub fn mu(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.mu_abs[n], self.mu_phase[n])
    }

    /// `mu_n` by Gauss–Legendre quadrature of the eigen-equation at the point
    /// of a 2001-point grid where `|psi_n|` is largest. Loses relative
    /// accuracy once `|mu_n|` approaches the quadrature noise floor.
    pub fn mu_by_quadrature(&self, n: usize) -> Complex64 {
        let (mut best, mut xs) = (0.0, 0.0);
        for i in 0..2001 {
            let x = -1.0 + i as f64 / 1000.0;
            let v = self.eval(n, x).abs();
            if v > best {
                best = v;
                xs = x;
            }
        }
        let g = GaussLegendre::new(self.trunc + 40);
        let c = self.c;
        let re = g.integrate(-1.0, 1.0, |y| self.eval(n, y) * (c * xs * y).cos());
        let im = -g.integrate(-1.0, 1.0, |y| self.eval(n, y) * (c * xs * y).sin());
        Complex64::new(re, im) / self.eval(n, xs)
    }

    /// `|| Q_c psi_n - lambda_n psi_n ||_{L^2(-1,1)}` with the sinc kernel
    /// applied by Gauss–Legendre quadrature.
    pub fn qc_residual(&self, n: usize) -> f64 {
        let g = GaussLegendre::new(self.trunc + 60);
        let c = self.c;
        let vals: Vec<f64> = g.nodes.iter().map(|&y| self.eval(n, y)).collect();
        let mut acc = 0.0;
        for (i, &x) in g.nodes.iter().enumerate() {
            let q: f64 = g
                .nodes
                .iter()
                .zip(&g.weights)
                .zip(&vals)
                .map(|((&y, &w), &v)| {
                    let d = x - y;
                    let ker = if d == 0.0 { c / PI } else { (c * d).sin() / (PI * d) };
                    w * ker * v
                })
                .sum();
            let r = q - self.lambda[n] * vals[i];
            acc += g.weights[i] * r * r;
        }
        acc.sqrt()
    }

    /// Coefficients `beta_k^n`, `k <= kmax`, of `psi_hat_{n,c}` in the
    /// orthonormal basis `P~_{k,c}` of `L^2(-c, c)`. Entries past the
    /// truncation are zero.
    pub fn beta_coeffs(&self, n: usize, kmax: usize) -> Vec<Complex64> {
        let scale = self.fourier_scale(n) * self.c.sqrt();
        (0..=kmax)
            .map(|k| scale * self.coeffs[n].get(k).copied().unwrap_or(0.0))
            .collect()
    }

    /// `(-1)^n (2pi/c) mu_n/|mu_n|^2`, the factor in
    /// `psi_hat_n(xi) = factor * psi_n(xi/c)` on `|xi| <= c`.
    fn fourier_scale(&self, n: usize) -> Complex64 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mu = self.mu(n);
        sign * 2.0 * PI / self.c * mu / mu.norm_sqr()
    }

    /// `psi_hat_{n,c}(xi)`, zero outside `[-c, c]`.
    pub fn fourier(&self, n: usize, xi: f64) -> Complex64 {
        if xi.abs() > self.c {
            return Complex64::new(0.0, 0.0);
        }
        self.fourier_scale(n) * self.eval(n, xi / self.c)
    }
}

/// `Lambda_N`: `sqrt(3 + ec)` if `N <= max(ec, 2)`, else `(2(N+1)/(ec))^{(2N+1)/2}`.
pub fn lambda_sum_bound(c: f64, n: usize) -> f64 {
    let ec = E * c;
    let nf = n as f64;
    if nf <= ec.max(2.0) {
        (3.0 + ec).sqrt()
    } else {
        (2.0 * (nf + 1.0) / ec).powf((2.0 * nf + 1.0) / 2.0)
    }
}

/// Right-hand side of `|beta_k^n| <= 10/(c^{3/2} lambda_n) (e/(2k+3))^{k+1}`.
pub fn beta_coeff_bound(c: f64, lambda_n: f64, k: usize) -> f64 {
    let kf = k as f64;
    let ln = 10f64.ln() - 1.5 * c.ln() - lambda_n.ln() + (kf + 1.0) * (1.0 - (2.0 * kf + 3.0).ln());
    ln.exp()
}
