//! The sampled diffusion matrix `B_m(xi) = int_0^1 A_m(xi,t)^* A_m(xi,t) dt`,
//! by quadrature and by its closed Pick form, with spectra and sweeps.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;
use crate::numeric::dd::Dd;
use crate::numeric::jacobi;
use crate::numeric::quad::GaussLegendre;

/// Relative level below which `lambda_min` of a double-double spectrum is noise.
pub const DD_CLAMP: f64 = 1e-28;
/// Same for spectra computed from f64 entries only.
pub const F64_CLAMP: f64 = 1e-14;

/// For each residue `j in 0..m`, the representative `j'` with `(xi + j')/m in [-1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetIndexMap {
    pub xi: f64,
    pub m: usize,
    /// `indices[j] = j'`
    pub indices: Vec<i64>,
}

pub fn coset_indices(xi: f64, m: usize) -> CosetIndexMap {
    assert!(m >= 1, "m must be at least 1");
    let mf = m as f64;
    let inside = |n: i64| {
        let v = (xi + n as f64) / mf;
        (-0.5..0.5).contains(&v)
    };
    // the admissible n form a run of m consecutive integers starting near -m/2 - xi
    let mut start = (-0.5 * mf - xi).ceil() as i64 - 2;
    while !inside(start) {
        start += 1;
    }
    let mut indices = vec![0i64; m];
    for n in start..start + m as i64 {
        indices[n.rem_euclid(m as i64) as usize] = n;
    }
    CosetIndexMap { xi, m, indices }
}

/// Coset points `(2c/m)(xi + j')`, ordered by residue.
pub fn coset_points(c: f64, m: usize, xi: f64) -> Vec<f64> {
    let h = 2.0 * c / m as f64;
    coset_indices(xi, m)
        .indices
        .iter()
        .map(|&j| h * (xi + j as f64))
        .collect()
}

/// The row `A_m(xi, t)`: entry `j` is `(phi_hat)_p^t((2c/m)(xi + j))`.
pub fn row_a(k: &KernelSpec, m: usize, xi: f64, t: f64) -> Vec<f64> {
    coset_points(k.c(), m, xi)
        .into_iter()
        .map(|x| k.periodize_hat(x, t))
        .collect()
}

/// `(1 - e^{-s})/s` with the removable value at 0.
pub fn pick_entry(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if s.abs() < 1e-8 {
        1.0 - s / 2.0 + s * s / 6.0
    } else {
        -(-s).exp_m1() / s
    }
}

#[derive(Debug, Clone)]
pub struct SampledDiffusionMatrix {
    pub m: usize,
    pub xi: f64,
    pub c: f64,
    /// Row-major `m x m`.
    pub entries: Vec<f64>,
    pub coset_points: Vec<f64>,
    /// Eigenvalues ascending, unclamped.
    pub eig: Vec<f64>,
    /// Relative clamp level matching the precision of `eig`.
    pub clamp: f64,
}

impl SampledDiffusionMatrix {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.m + k]
    }

    /// Quadratic form `v^* B v` for complex `v`.
    pub fn quadratic_form(&self, v: &[num_complex::Complex64]) -> f64 {
        let m = self.m;
        let mut acc = 0.0;
        for j in 0..m {
            for k in 0..m {
                acc += self.entries[j * m + k] * (v[j].conj() * v[k]).re;
            }
        }
        acc
    }
}

/// Pick matrix of the exponents `x_j`, entries in f64 and double-double.
pub fn pick_matrix(x: &[f64]) -> (Vec<f64>, Vec<Dd>) {
    let m = x.len();
    let mut f = vec![0.0; m * m];
    let mut d = vec![Dd::ZERO; m * m];
    for j in 0..m {
        for k in j..m {
            let s = Dd::sum(x[j], x[k]);
            let e = Dd::one_minus_exp_over(s);
            let v = pick_entry(x[j] + x[k]);
            f[j * m + k] = v;
            f[k * m + j] = v;
            d[j * m + k] = e;
            d[k * m + j] = e;
        }
    }
    (f, d)
}

fn dd_eigenvalues(entries: &[Dd], m: usize) -> Vec<f64> {
    jacobi::symmetric_eigen(entries, m)
        .values
        .into_iter()
        .map(Dd::to_f64)
        .collect()
}

/// `B_m(xi)` from the closed Pick form with `x_j = psi((2c/m)(xi + j'))`.
pub fn build_pick(k: &KernelSpec, m: usize, xi: f64) -> SampledDiffusionMatrix {
    let pts = coset_points(k.c(), m, xi);
    let x: Vec<f64> = pts.iter().map(|&p| k.psi_exponent(k.reduce(p))).collect();
    let (entries, dd) = pick_matrix(&x);
    SampledDiffusionMatrix {
        m,
        xi,
        c: k.c(),
        entries,
        coset_points: pts,
        eig: dd_eigenvalues(&dd, m),
        clamp: DD_CLAMP,
    }
}

/// `B_m(xi)` by `n_t`-point Gauss–Legendre quadrature in `t`. The spectrum
/// is computed from the f64 entries, so it resolves eigenvalues only down to
/// about `1e-14 * lambda_max`.
pub fn build_quadrature(k: &KernelSpec, m: usize, xi: f64, n_t: usize) -> SampledDiffusionMatrix {
    assert!(n_t >= 2, "n_t must be at least 2");
    let pts = coset_points(k.c(), m, xi);
    let entries = quadrature_gram(m, n_t, |t| {
        pts.iter().map(|&p| k.periodize_hat(p, t)).collect()
    });
    let eig = jacobi::symmetric_eigen_f64(&entries, m)
        .values
        .into_iter()
        .map(Dd::to_f64)
        .collect();
    SampledDiffusionMatrix {
        m,
        xi,
        c: k.c(),
        entries,
        coset_points: pts,
        eig,
        clamp: F64_CLAMP,
    }
}

/// `int_0^1 a(t)^T a(t) dt` for an arbitrary row function, by Gauss–Legendre.
pub fn quadrature_gram<F: Fn(f64) -> Vec<f64>>(m: usize, n_t: usize, row: F) -> Vec<f64> {
    let (ts, ws) = GaussLegendre::new(n_t).on_interval(0.0, 1.0);
    let mut b = vec![0.0; m * m];
    for (&t, &w) in ts.iter().zip(&ws) {
        let a = row(t);
        for j in 0..m {
            for l in 0..m {
                b[j * m + l] += w * a[j] * a[l];
            }
        }
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cond: f64,
}

/// `(lambda_min, lambda_max, cond)`; `lambda_min` is clamped to 0 below the
/// matrix's precision level, and `cond` is `+inf` when it is not positive.
pub fn spectrum(b: &SampledDiffusionMatrix) -> Spectrum {
    let lmax = *b.eig.last().unwrap();
    let mut lmin = b.eig[0];
    if lmin.abs() <= b.clamp * lmax {
        lmin = 0.0;
    }
    let cond = if lmin <= 0.0 { f64::INFINITY } else { lmax / lmin };
    Spectrum { lambda_min: lmin, lambda_max: lmax, cond }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub c: f64,
    pub param: f64,
    pub xi: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub cond: f64,
}

/// One row per `(m, kernel, xi)`: m outer, kernel parameter in the middle,
/// `xi` inner. Evaluated in parallel, returned in that order.
pub fn sweep(kernels: &[KernelSpec], ms: &[usize], xis: &[f64]) -> Result<Vec<SweepRow>> {
    if kernels.is_empty() || ms.is_empty() || xis.is_empty() {
        return invalid("sweep grids must be non-empty");
    }
    if ms.contains(&0) {
        return invalid("m must be at least 1");
    }
    let cells: Vec<(usize, &KernelSpec, f64)> = ms
        .iter()
        .flat_map(|&m| {
            kernels
                .iter()
                .flat_map(move |k| xis.iter().map(move |&xi| (m, k, xi)))
        })
        .collect();
    Ok(cells
        .par_iter()
        .map(|&(m, k, xi)| {
            let s = spectrum(&build_pick(k, m, xi));
            SweepRow {
                m,
                c: k.c(),
                param: k.param(),
                xi,
                lambda_min: s.lambda_min,
                lambda_max: s.lambda_max,
                cond: s.cond,
            }
        })
        .collect())
}

pub const SWEEP_HEADER: &str = "m,c,sigma_or_param,xi,lambda_min,lambda_max,cond";

/// Sweep table as CSV text (header included, LF line endings).
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    use crate::output::fmt_f64 as f;
    let mut s = String::with_capacity(rows.len() * 120);
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m,
            f(r.c),
            f(r.param),
            f(r.xi),
            f(r.lambda_min),
            f(r.lambda_max),
            f(r.cond)
        ));
    }
    s
}
