use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::diffmatrix::{pick_entry, row_a};
use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;
use crate::numeric::quad::GaussLegendre;
use crate::output::fmt_f64;

use super::signal::{fold_grid, SignalSpectrum};

/// `b(xi_r, t_i)` on the folded frequency grid times a set of time nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceData {
    pub c: f64,
    pub m: usize,
    pub q: usize,
    /// Folded frequencies, one per cell.
    pub xi: Vec<f64>,
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
    /// Row-major `Q x n_t`.
    pub b: Vec<Complex64>,
}

impl TraceData {
    pub fn n_t(&self) -> usize {
        self.t.len()
    }

    pub fn get(&self, r: usize, i: usize) -> Complex64 {
        self.b[r * self.t.len() + i]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("xi,t,re,im\n");
        for (r, &xi) in self.xi.iter().enumerate() {
            for (i, &t) in self.t.iter().enumerate() {
                let v = self.get(r, i);
                s.push_str(&format!("{},{},{},{}\n", fmt_f64(xi), fmt_f64(t), fmt_f64(v.re), fmt_f64(v.im)));
            }
        }
        s
    }
}

fn check_kernel(spec: &SignalSpectrum, k: &KernelSpec) -> Result<()> {
    if (spec.c - k.c()).abs() > 1e-14 * spec.c.max(1.0) {
        return invalid(format!("signal bandwidth {} differs from kernel bandwidth {}", spec.c, k.c()));
    }
    Ok(())
}

/// Trace on `n_t` Gauss–Legendre nodes in `(0, 1)`.
pub fn trace(spec: &SignalSpectrum, k: &KernelSpec, n_t: usize) -> Result<TraceData> {
    if n_t < 2 {
        return invalid("n_t must be at least 2");
    }
    let (t, w) = GaussLegendre::new(n_t).on_interval(0.0, 1.0);
    trace_with_nodes(spec, k, &t, &w)
}

/// `b(xi, t) = (c/(m pi)) A_m(xi, t) f(xi)` at arbitrary time nodes.
pub fn trace_with_nodes(spec: &SignalSpectrum, k: &KernelSpec, t: &[f64], weights: &[f64]) -> Result<TraceData> {
    check_kernel(spec, k)?;
    if t.len() != weights.len() {
        return invalid("one weight per time node");
    }
    let fold = spec.fold();
    let scale = spec.c / (spec.m as f64 * PI);
    let mut b = Vec::with_capacity(spec.q * t.len());
    for (r, &xi) in fold.xi.iter().enumerate() {
        let f = spec.vector(&fold, r);
        for &ti in t {
            let a = row_a(k, spec.m, xi, ti);
            let s: Complex64 = a.iter().zip(&f).map(|(aj, fj)| fj * *aj).sum();
            b.push(s * scale);
        }
    }
    Ok(TraceData {
        c: spec.c,
        m: spec.m,
        q: spec.q,
        xi: fold.xi,
        t: t.to_vec(),
        weights: weights.to_vec(),
        b,
    })
}

/// Adds complex white noise with `E|n|^2 = level^2` to every trace value.
pub fn add_noise(td: &TraceData, level: f64, seed: u64) -> Result<TraceData> {
    if !(level >= 0.0 && level.is_finite()) {
        return invalid("noise level must be non-negative");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = level / 2f64.sqrt();
    let mut out = td.clone();
    for v in &mut out.b {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(re * s, im * s);
    }
    Ok(out)
}

/// `f_t(m pi k / c)` for `|k| <= k_range`, as the inverse DFT
/// `(1/Q) sum_r b(xi_r, t) e^{2 pi i k xi_r}` over the folded grid.
pub fn forward_samples(spec: &SignalSpectrum, k: &KernelSpec, t: f64, k_range: usize) -> Result<Vec<Complex64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return invalid("t must be non-negative");
    }
    let td = trace_with_nodes(spec, k, &[t], &[1.0])?;
    let kr = k_range as i64;
    let q = td.q as f64;
    Ok((-kr..=kr)
        .map(|n| {
            td.xi
                .iter()
                .enumerate()
                .map(|(r, &xi)| td.get(r, 0) * Complex64::from_polar(1.0, 2.0 * PI * n as f64 * xi))
                .sum::<Complex64>()
                / q
        })
        .collect())
}

/// Frame quotient and the two candidate upper caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameQuotient {
    /// `int_0^L sum_k |f_t(m pi k / c)|^2 dt`
    pub energy: f64,
    /// `||f||_2^2`
    pub norm_sq: f64,
    pub quotient: f64,
    /// `(c / 2 pi^2) ||f_hat||^2 / ||f||^2 = c / pi`
    pub cap_hat: f64,
    /// The cap `B = 1`.
    pub cap_unit: f64,
    pub exceeds_hat: bool,
    pub exceeds_unit: bool,
}

/// Quotient over the time interval `[0, 1]`, from the closed form of `B_m`.
pub fn frame_quotient(spec: &SignalSpectrum, k: &KernelSpec) -> Result<FrameQuotient> {
    frame_quotient_horizon(spec, k, 1.0)
}

/// Quotient over `[0, L]`: the Gram matrix has entries `L (1 - e^{-Ls})/(Ls)`.
pub fn frame_quotient_horizon(spec: &SignalSpectrum, k: &KernelSpec, horizon: f64) -> Result<FrameQuotient> {
    check_kernel(spec, k)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return invalid("time horizon must be positive");
    }
    let norm_sq = spec.norm_sq();
    if norm_sq == 0.0 {
        return invalid("frame quotient of the zero signal");
    }
    let m = spec.m;
    let fold = fold_grid(m, spec.q);
    let mut acc = 0.0;
    for (r, &xi) in fold.xi.iter().enumerate() {
        let f = spec.vector(&fold, r);
        let pts = crate::diffmatrix::coset_points(spec.c, m, xi);
        let x: Vec<f64> = pts.iter().map(|&p| k.psi_exponent(k.reduce(p))).collect();
        for j in 0..m {
            for l in 0..m {
                let bjl = horizon * pick_entry(horizon * (x[j] + x[l]));
                acc += bjl * (f[j].conj() * f[l]).re;
            }
        }
    }
    let scale = spec.c / (m as f64 * PI);
    let energy = scale * scale * acc / spec.q as f64;
    let quotient = energy / norm_sq;
    let cap_hat = spec.c / (2.0 * PI * PI) * spec.norm_hat_sq() / norm_sq;
    let cap_unit = 1.0;
    Ok(FrameQuotient {
        energy,
        norm_sq,
        quotient,
        cap_hat,
        cap_unit,
        exceeds_hat: quotient > cap_hat * (1.0 + 1e-12),
        exceeds_unit: quotient > cap_unit * (1.0 + 1e-12),
    })
}
