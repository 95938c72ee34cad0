//! Analytic frame-bound formulas: Vandermonde singular-value bounds, the
//! `lambda_min` sandwich for `B_m(xi)`, the lower frame constant away from
//! blind spots, explicit Gaussian constants and model-space constants.

use std::f64::consts::{E, PI};
use std::fmt;

use nalgebra::DMatrix;

use crate::blindspot::build_sets;
use crate::diffmatrix::{build_pick, coset_points, spectrum};
use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;
use crate::output::fmt_f64;
use crate::pswf::{remez_constant, remez_log_constant, RemezConstant, RemezModel};

#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeBound {
    pub v: Vec<f64>,
    /// `((m-1)/sigma_F^2)^{(m-1)/2} prod |v_j - v_k|`
    pub alpha: f64,
    /// `e^{-1/2} m^{-(m-1)/2} prod |v_j - v_k|`, only when every `v_j` lies in `(0, 1]`.
    pub alpha_tilde: Option<f64>,
    pub sigma_f: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

fn log_abs_diff_product(v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for j in 0..v.len() {
        for k in j + 1..v.len() {
            acc += (v[j] - v[k]).abs().ln();
        }
    }
    acc
}

/// Lower bounds on the smallest singular value of `V = [v_j^k]_{j,k < m}`.
pub fn vandermonde_lower(v: &[f64]) -> Result<VandermondeBound> {
    let m = v.len();
    if m == 0 {
        return invalid("empty node list");
    }
    if v.iter().any(|x| !x.is_finite() || *x == 0.0) {
        return invalid("Vandermonde nodes must be finite and nonzero");
    }
    for j in 0..m {
        for k in j + 1..m {
            if v[j] == v[k] {
                return invalid(format!("duplicate Vandermonde node {}", v[j]));
            }
        }
    }
    let sigma_sq: f64 = v
        .iter()
        .map(|&x| (0..m).map(|k| x.powi(2 * k as i32)).sum::<f64>())
        .sum();
    let mf = m as f64;
    let lp = log_abs_diff_product(v);
    let alpha = if m == 1 { 1.0 } else { (0.5 * (mf - 1.0) * ((mf - 1.0) / sigma_sq).ln() + lp).exp() };
    let alpha_tilde = v
        .iter()
        .all(|&x| x > 0.0 && x <= 1.0)
        .then(|| (-0.5 - 0.5 * (mf - 1.0) * mf.ln() + lp).exp());
    let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    Ok(VandermondeBound {
        v: v.to_vec(),
        alpha,
        alpha_tilde,
        sigma_f: sigma_sq.sqrt(),
        gamma_minus: abs.iter().cloned().fold(f64::INFINITY, f64::min),
        gamma_plus: abs.iter().cloned().fold(0.0, f64::max),
    })
}

/// `Psi_N(t) = (1 - t^2)/(1 - t^{2/N})`, with `Psi_N(1) = N`.
pub fn psi_geom(n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return invalid("N must be at least 1");
    }
    if !(t > 0.0 && t.is_finite()) {
        return invalid(format!("Psi_N needs t > 0, got {t}"));
    }
    let l = t.ln();
    if l == 0.0 {
        return Ok(n as f64);
    }
    Ok((2.0 * l).exp_m1() / ((2.0 / n as f64) * l).exp_m1())
}

/// The `mN x m` matrix `[v_j^{(i-1)/N}]`.
pub fn w_matrix(v: &[f64], n: usize) -> DMatrix<f64> {
    let m = v.len();
    DMatrix::from_fn(m * n, m, |i, j| v[j].powf(i as f64 / n as f64))
}

/// `(1 - kappa^{2/m}) / |ln kappa|` from `l = |ln kappa|`, with the limit
/// `2/m` as `kappa -> 1`.
pub fn kappa_factor(l: f64, m: usize) -> Result<f64> {
    if !(l >= 0.0) {
        return invalid(format!("|ln kappa| must be non-negative, got {l}"));
    }
    if l < 1e-8 {
        return Ok(2.0 / m as f64);
    }
    if l.is_infinite() {
        return Ok(0.0);
    }
    Ok(-(-2.0 / m as f64 * l).exp_m1() / l)
}

/// `prod_{j<k} |phi_hat_p(x_j) - phi_hat_p(x_k)|` over the coset points of `xi`.
pub fn delta_product(k: &KernelSpec, m: usize, xi: f64) -> f64 {
    let vals: Vec<f64> = coset_points(k.c(), m, xi).into_iter().map(|p| k.periodize_hat(p, 1.0)).collect();
    let mut acc = 1.0;
    for j in 0..m {
        for l in j + 1..m {
            acc *= (vals[j] - vals[l]).abs();
        }
    }
    acc
}

/// Guaranteed lower bound `Delta^2 (1 - kappa^{2/m}) / (2 e m^{m^2} |ln kappa|)` on
/// `lambda_min(B_m(xi))`; zero at blind spots.
pub fn lambda_min_lower(k: &KernelSpec, m: usize, xi: f64) -> Result<f64> {
    if m < 2 {
        return invalid("m must be at least 2");
    }
    let d = delta_product(k, m, xi);
    if d == 0.0 {
        return Ok(0.0);
    }
    let f = kappa_factor(k.ln_kappa_abs()?, m)?;
    let mf = m as f64;
    Ok((2.0 * d.ln() + f.ln() - (2.0 * E).ln() - mf * mf * mf.ln()).exp())
}

/// The optimistic upper estimate
/// `16 m exp(-(m-1) pi^2 / (ln 16 + 2 alpha ln(m / (2|xi|))))` for kernels
/// `exp(-|x|^alpha)`; `xi` is reduced modulo 1.
pub fn lambda_min_upper_bt(m: usize, xi: f64, alpha: f64) -> Result<f64> {
    if m < 1 {
        return invalid("m must be at least 1");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("alpha must be positive, got {alpha}"));
    }
    if !xi.is_finite() {
        return invalid("xi must be finite");
    }
    let x = (xi - xi.round()).abs();
    if x == 0.0 {
        return invalid("the upper estimate is degenerate at xi = 0 (mod 1)");
    }
    let mf = m as f64;
    let den = 16f64.ln() + 2.0 * alpha * (mf / (2.0 * x)).ln();
    Ok(16.0 * mf * (-(mf - 1.0) * PI * PI / den).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConstants {
    pub a: f64,
    /// `c / (2 pi^2)`, the upper constant relative to `||f_hat||^2`.
    pub b: f64,
}

/// `A = (c/(4 e pi^2)) delta^{m(m-1)} / m^{1+m^2} (kappa^{2/m} - 1)/ln kappa`.
pub fn frame_a_sufcont(k: &KernelSpec, m: usize, delta: f64) -> Result<FrameConstants> {
    if m < 2 {
        return invalid("m must be at least 2");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("delta must be positive, got {delta}"));
    }
    let c = k.c();
    let mf = m as f64;
    let f = kappa_factor(k.ln_kappa_abs()?, m)?;
    let ln_a = (c / (4.0 * E * PI * PI)).ln() + mf * (mf - 1.0) * delta.ln() - (1.0 + mf * mf) * mf.ln() + f.ln();
    Ok(FrameConstants { a: ln_a.exp(), b: c / (2.0 * PI * PI) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianA {
    pub a: f64,
    pub ln_a: f64,
    pub r: f64,
}

/// Explicit constants for the Gaussian kernel `e^{-(sigma xi)^2}`:
/// `R = 2 sigma^2 min(eta e^{-(sigma eta)^2}, c e^{-(sigma c)^2})` and
/// `A = c/(2 e pi^2 (2 (sigma c)^2 + m)) (4 c R eta)^{m(m-1)} / m^{1-m+2m^2}`.
pub fn gaussian_explicit_a(sigma: f64, c: f64, m: usize, eta: f64) -> Result<GaussianA> {
    if !(eta > 0.0 && eta < 0.25) {
        return invalid(format!("eta must lie in (0, 1/4), got {eta}"));
    }
    if m < 2 {
        return invalid("m must be at least 2");
    }
    if !(sigma != 0.0 && sigma.is_finite()) {
        return invalid("sigma must be finite and nonzero");
    }
    if !(c > 0.0 && c.is_finite()) {
        return invalid("c must be positive");
    }
    let s2 = sigma * sigma;
    let r = 2.0 * s2 * (eta * (-s2 * eta * eta).exp()).min(c * (-s2 * c * c).exp());
    let mf = m as f64;
    let ln_a = (c / (2.0 * E * PI * PI * (2.0 * s2 * c * c + mf))).ln()
        + mf * (mf - 1.0) * (4.0 * c * r * eta).ln()
        - (1.0 - mf + 2.0 * mf * mf) * mf.ln();
    Ok(GaussianA { a: ln_a.exp(), ln_a, r })
}

/// Lower frame constant on a model space, as `A(eta = 1/8) / C_Remez^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelKappa {
    pub ln_kappa: f64,
    pub gaussian: GaussianA,
    pub remez: RemezConstant,
    /// Dimension index used in the Remez constant (`2N` on the difference space).
    pub n_eff: usize,
}

impl ModelKappa {
    pub fn value(&self) -> f64 {
        self.ln_kappa.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln_kappa / std::f64::consts::LN_10
    }
}

/// `kappa` for the Gaussian kernel with `|E|` from the blind-spot sets at
/// `eta = 1/8`. With `difference_space` the Remez constant is taken for
/// `V_{2N}`, which carries stability to the nonlinear class `V_N`.
pub fn model_kappa(
    sigma: f64,
    c: f64,
    m: usize,
    n: usize,
    model: RemezModel,
    gamma: Option<f64>,
    difference_space: bool,
) -> Result<ModelKappa> {
    let e = build_sets(c, m, 0.125)?;
    let gaussian = gaussian_explicit_a(sigma, c, m, 0.125)?;
    let n_eff = if difference_space { 2 * n } else { n };
    let remez = remez_constant(model, c, n_eff, e.measure_e, gamma)?;
    Ok(ModelKappa { ln_kappa: gaussian.ln_a - 2.0 * remez.ln_value, gaussian, remez, n_eff })
}

/// As [`model_kappa`] with a caller-supplied `|E|`, which may exceed `2c`
/// for hypothetical comparisons.
pub fn model_kappa_with_measure(
    sigma: f64,
    c: f64,
    m: usize,
    n: usize,
    model: RemezModel,
    gamma: Option<f64>,
    meas_e: f64,
) -> Result<f64> {
    let gaussian = gaussian_explicit_a(sigma, c, m, 0.125)?;
    let (ln_c, _) = remez_log_constant(model, c, n, meas_e, gamma)?;
    Ok(gaussian.ln_a - 2.0 * ln_c)
}

/// Sandwich `lower <= lambda_min <= min(m, BT)` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichRow {
    pub xi: f64,
    pub lower_bound: f64,
    pub lambda_min: f64,
    /// NaN when the kernel has no power-law exponent or `xi = 0 (mod 1)`.
    pub upper_bound_bt: f64,
    pub m_cap: f64,
}

pub const SANDWICH_HEADER: &str = "xi,lower_bound,lambda_min,upper_bound_bt,m_cap";

pub fn sandwich(k: &KernelSpec, m: usize, xis: &[f64]) -> Result<Vec<SandwichRow>> {
    let alpha = k.power_exponent();
    xis.iter()
        .map(|&xi| {
            let upper = match alpha {
                Some(a) if (xi - xi.round()) != 0.0 => lambda_min_upper_bt(m, xi, a)?,
                _ => f64::NAN,
            };
            Ok(SandwichRow {
                xi,
                lower_bound: lambda_min_lower(k, m, xi)?,
                lambda_min: spectrum(&build_pick(k, m, xi)).lambda_min,
                upper_bound_bt: upper,
                m_cap: m as f64,
            })
        })
        .collect()
}

pub fn sandwich_csv(rows: &[SandwichRow]) -> String {
    let mut s = String::from(SANDWICH_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.xi),
            fmt_f64(r.lower_bound),
            fmt_f64(r.lambda_min),
            fmt_f64(r.upper_bound_bt),
            fmt_f64(r.m_cap)
        ));
    }
    s
}

/// Analytic frame constants for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBoundReport {
    pub kernel: String,
    pub c: f64,
    pub m: usize,
    pub eta: f64,
    /// Separation used for `A`: the minimum of `|d phi_hat / d xi|` over `E`.
    pub delta: f64,
    pub measure_e: f64,
    pub a_lower: f64,
    /// `c / (2 pi^2)` against `||f_hat||^2`.
    pub b_upper: f64,
    /// The cap `B = 1` against `||f||^2`, reported alongside.
    pub b_unit: f64,
    /// Explicit Gaussian constants, when the kernel is Gaussian.
    pub gaussian: Option<GaussianA>,
    pub kappa: Option<ModelKappa>,
}

impl FrameBoundReport {
    pub fn build(k: &KernelSpec, m: usize, eta: f64) -> Result<Self> {
        let e = build_sets(k.c(), m, eta)?;
        let delta = crate::blindspot::delta_from_eta(k, m, eta)?;
        let fc = frame_a_sufcont(k, m, delta)?;
        let gaussian = match k.family() {
            crate::kernel::KernelFamily::Gaussian { sigma } => Some(gaussian_explicit_a(*sigma, k.c(), m, eta)?),
            _ => None,
        };
        Ok(FrameBoundReport {
            kernel: kernel_label(k),
            c: k.c(),
            m,
            eta,
            delta,
            measure_e: e.measure_e,
            a_lower: fc.a,
            b_upper: fc.b,
            b_unit: 1.0,
            gaussian,
            kappa: None,
        })
    }

    pub fn with_kappa(mut self, kappa: ModelKappa) -> Self {
        self.kappa = Some(kappa);
        self
    }
}

pub fn kernel_label(k: &KernelSpec) -> String {
    match k.family() {
        crate::kernel::KernelFamily::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
        crate::kernel::KernelFamily::Fractional { alpha } => format!("fractional(alpha={alpha})"),
        crate::kernel::KernelFamily::Poisson { y } => format!("poisson(y={y})"),
        crate::kernel::KernelFamily::TabulatedEven(_) => "tabulated".into(),
    }
}

impl fmt::Display for FrameBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kernel = {}", self.kernel)?;
        writeln!(f, "c = {}", fmt_f64(self.c))?;
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "eta = {}", fmt_f64(self.eta))?;
        writeln!(f, "delta = {}", fmt_f64(self.delta))?;
        writeln!(f, "measure_E = {}", fmt_f64(self.measure_e))?;
        writeln!(f, "A_lower = {}", fmt_f64(self.a_lower))?;
        writeln!(f, "B_upper_hat = {}", fmt_f64(self.b_upper))?;
        writeln!(f, "B_upper_unit = {}", fmt_f64(self.b_unit))?;
        if let Some(g) = &self.gaussian {
            writeln!(f, "gaussian_R = {}", fmt_f64(g.r))?;
            writeln!(f, "gaussian_A = {}", fmt_f64(g.a))?;
        }
        if let Some(k) = &self.kappa {
            writeln!(f, "model = {:?}", k.remez.model)?;
            writeln!(f, "N = {}", k.n_eff)?;
            writeln!(f, "remez_log10 = {}", fmt_f64(k.remez.log10()))?;
            if let Some(kk) = k.remez.k {
                writeln!(f, "remez_K = {kk}")?;
            }
            writeln!(f, "kappa_log10 = {}", fmt_f64(k.log10()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sigma_min(v: &[f64]) -> f64 {
        let m = v.len();
        let a = DMatrix::from_fn(m, m, |j, k| v[j].powi(k as i32));
        a.singular_values().min()
    }

    #[test]
    fn vandermonde_examples() {
        let b = vandermonde_lower(&[1.0, 2.0]).unwrap();
        assert_relative_eq!(b.alpha, 1.0 / 7f64.sqrt(), max_relative = 1e-15);
        // [[1,1],[1,2]] has singular values (3 -+ sqrt 5)/2
        let smin = (3.0 - 5f64.sqrt()) / 2.0;
        assert_relative_eq!(sigma_min(&[1.0, 2.0]), smin, max_relative = 1e-12);
        assert!(b.alpha <= smin);
        assert!(b.alpha_tilde.is_none());
        assert_eq!(vandermonde_lower(&[0.3]).unwrap().alpha, 1.0);
        assert!(vandermonde_lower(&[0.3, 0.3]).is_err());
        assert!(vandermonde_lower(&[0.0, 0.3]).is_err());
    }

    #[test]
    fn vandermonde_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = rng.gen_range(2..=6);
            let v: Vec<f64> = (0..m).map(|_| rng.gen_range(1e-3..=1.0)).collect();
            let b = vandermonde_lower(&v).unwrap();
            let s = sigma_min(&v);
            assert!(b.alpha <= s * (1.0 + 1e-9), "{v:?}");
            assert!(b.alpha_tilde.unwrap() <= b.alpha * (1.0 + 1e-12));
        }
    }

    #[test]
    fn psi_values() {
        for n in 1..=10 {
            assert_eq!(psi_geom(n, 1.0).unwrap(), n as f64);
            // no cancellation blow-up next to the removable point: first-order expansion
            for t in [1.0 - 1e-7, 1.0 + 1e-7] {
                let nf = n as f64;
                let lin = nf * (1.0 + (1.0 - 1.0 / nf) * f64::ln(t));
                assert!((psi_geom(n, t).unwrap() - lin).abs() < 1e-9);
            }
        }
        assert_relative_eq!(psi_geom(1, 0.3).unwrap(), 1.0, max_relative = 1e-15);
        let r = psi_geom(1_000_000, 0.5).unwrap() / 1e6;
        assert!((r - 0.75 / (2.0 * 2f64.ln())).abs() < 1e-5);
        assert!(psi_geom(3, 0.0).is_err());
    }

    #[test]
    fn lower_bound_example() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let d = delta_product(&k, 2, 0.25);
        let (a, b) = ((-(0.125f64).powi(2)).exp(), (-(0.375f64).powi(2)).exp());
        assert_relative_eq!(d, a - b, max_relative = 1e-14);
        assert!((d - 0.11568).abs() < 5e-5);
        let lo = lambda_min_lower(&k, 2, 0.25).unwrap();
        let oracle = d * d * (1.0 - (-0.25f64).exp()) / (2.0 * E * 16.0 * 0.25);
        assert_relative_eq!(lo, oracle, max_relative = 1e-13);
        assert!((lo - 1.36e-4).abs() < 1e-6);
        let lm = spectrum(&build_pick(&k, 2, 0.25)).lambda_min;
        assert!(lo <= lm);
        assert_eq!(lambda_min_lower(&k, 2, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn kappa_limit() {
        let f = kappa_factor(-(1.0f64 - 1e-10).ln(), 3).unwrap();
        // series: (2/m)(1 - l/m + ...) with l = |ln kappa|
        assert!((f - 2.0 / 3.0).abs() < 1e-4);
        assert_eq!(kappa_factor(0.0, 4).unwrap(), 0.5);
        let g = kappa_factor(-(1.0f64 - 1e-6).ln(), 2).unwrap();
        assert!((g - (1.0 - 1e-6 / 2.0)).abs() < 1e-9);
    }

    #[test]
    fn bt_bound() {
        let v = lambda_min_upper_bt(2, 0.5, 2.0).unwrap();
        assert_relative_eq!(v, 32.0 * (-PI * PI / (8.0 * 2f64.ln())).exp(), max_relative = 1e-14);
        assert!((v - 5.40).abs() < 0.01);
        assert!(lambda_min_upper_bt(2, 0.0, 2.0).is_err());
        assert!(lambda_min_upper_bt(2, 1.0, 2.0).is_err());
        // the denominator shrinks as |xi| grows, so the bound decreases towards 16m e^{...} at 1/2
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let u = lambda_min_upper_bt(3, i as f64 / 200.0, 2.0).unwrap();
            assert!(u <= prev && u < 48.0);
            prev = u;
        }
        for sigma in [0.1, 1.0, 5.0, 50.0] {
            let k = KernelSpec::gaussian(sigma, 0.5).unwrap();
            assert!(spectrum(&build_pick(&k, 2, 0.45)).lambda_min < lambda_min_upper_bt(2, 0.45, 2.0).unwrap());
        }
    }

    #[test]
    fn sufcont_constant() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let fc = frame_a_sufcont(&k, 2, 0.1).unwrap();
        let oracle = 0.5 / (4.0 * E * PI * PI) * 0.01 / 32.0 * (1.0 - (-0.25f64).exp()) / 0.25;
        assert_relative_eq!(fc.a, oracle, max_relative = 1e-13);
        assert!((fc.a - 1.29e-6).abs() < 0.01e-6);
        assert_relative_eq!(fc.b, 1.0 / (4.0 * PI * PI), max_relative = 1e-15);
        let mut prev = fc.a;
        for d in [0.05, 0.01, 1e-3] {
            let a = frame_a_sufcont(&k, 2, d).unwrap().a;
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn gaussian_constants() {
        let g = gaussian_explicit_a(1.0, 0.5, 2, 0.125).unwrap();
        assert!((g.r - 0.24612).abs() < 1e-5);
        let oracle = 0.5 / (2.0 * E * PI * PI * 2.5) * (4.0 * 0.5 * g.r * 0.125).powi(2) / 2f64.powi(7);
        assert_relative_eq!(g.a, oracle, max_relative = 1e-13);
        let base = g.a;
        for s in [1e-3, 1e3] {
            assert!(gaussian_explicit_a(s, 0.5, 2, 0.125).unwrap().a < base * 1e-3);
        }
        assert!(gaussian_explicit_a(1.0, 0.5, 2, 0.25).is_err());
    }

    #[test]
    fn kappa_models() {
        let a = gaussian_explicit_a(1.0, 0.5, 2, 0.125).unwrap();
        let unit = model_kappa_with_measure(1.0, 0.5, 2, 0, RemezModel::FourierPoly, None, 4.0).unwrap();
        assert_relative_eq!(unit, a.ln_a, max_relative = 1e-15);
        for model in [RemezModel::FourierPoly, RemezModel::Pswf, RemezModel::SincTranslates] {
            let mut prev = f64::INFINITY;
            for n in 0..=10 {
                let k = model_kappa(1.0, 0.5, 2, n, model, Some(2.0), false).unwrap();
                assert!(k.ln_kappa.is_finite());
                // K(N) for PSWFs drops sharply when N passes max(ec, 2)
                let regime_switch = model == RemezModel::Pswf && n == 3;
                assert!(k.ln_kappa <= prev || regime_switch, "{model:?} N={n}");
                prev = k.ln_kappa;
            }
        }
        assert!(model_kappa(1.0, 0.5, 2, 1, RemezModel::SincTranslates, None, false).is_err());
        let single = model_kappa(1.0, 0.5, 2, 3, RemezModel::FourierPoly, None, false).unwrap();
        let diff = model_kappa(1.0, 0.5, 2, 3, RemezModel::FourierPoly, None, true).unwrap();
        assert_eq!(diff.n_eff, 6);
        assert!(diff.ln_kappa < single.ln_kappa);
    }

    #[test]
    fn report_text() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let r = FrameBoundReport::build(&k, 2, 0.125).unwrap();
        assert!(r.a_lower > 0.0 && r.a_lower <= r.b_upper);
        let t = r.to_string();
        assert!(t.contains("A_lower = ") && t.contains("gaussian_R = "));
        let rows = sandwich(&k, 2, &[0.1, 0.25]).unwrap();
        let csv = sandwich_csv(&rows);
        assert!(csv.starts_with(SANDWICH_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }
}
