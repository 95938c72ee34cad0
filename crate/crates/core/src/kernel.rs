//! Diffusion kernels described on the Fourier side, `phi_hat(xi)^t`.

use std::io::Read;

use crate::error::{invalid, Error, Result};
use crate::intervals::IntervalSet;

/// Kernel family. All families are even in `xi` and decreasing in `|xi|`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `e^{-sigma^2 xi^2}`
    Gaussian { sigma: f64 },
    /// `e^{-|xi|^alpha}`, `alpha in (0, 1]`
    Fractional { alpha: f64 },
    /// `e^{-y |xi|}`
    Poisson { y: f64 },
    /// Samples of `phi_hat` on `[0, c]`, monotone cubic in between, mirrored.
    TabulatedEven(Tabulated),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xi: Vec<f64>,
    phi: Vec<f64>,
    slope: Vec<f64>,
}

impl Tabulated {
    fn new(xi: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if xi.len() != phi.len() || xi.len() < 2 {
            return invalid("tabulated kernel needs at least two (xi, phi_hat) pairs");
        }
        if xi[0] != 0.0 {
            return invalid("tabulated kernel must start at xi = 0");
        }
        if xi.windows(2).any(|w| w[1] <= w[0]) || xi.iter().any(|v| !v.is_finite()) {
            return invalid("tabulated xi must be strictly increasing");
        }
        if (phi[0] - 1.0).abs() > 1e-12 {
            return invalid("tabulated kernel must satisfy phi_hat(0) = 1");
        }
        let mut phi = phi;
        phi[0] = 1.0;
        let slope = pchip_slopes(&xi, &phi);
        Ok(Tabulated { xi, phi, slope })
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.xi, &self.phi)
    }

    fn locate(&self, r: f64) -> usize {
        let n = self.xi.len();
        match self.xi.binary_search_by(|v| v.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Interpolant and its derivative at `r >= 0`; flat beyond the last sample.
    fn eval(&self, r: f64) -> (f64, f64) {
        let n = self.xi.len();
        if r > self.xi[n - 1] {
            return (self.phi[n - 1], 0.0);
        }
        if r == self.xi[n - 1] {
            return (self.phi[n - 1], self.slope[n - 1]);
        }
        let i = self.locate(r);
        let h = self.xi[i + 1] - self.xi[i];
        let s = (r - self.xi[i]) / h;
        let (y0, y1) = (self.phi[i], self.phi[i + 1]);
        let (d0, d1) = (self.slope[i], self.slope[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = 6.0 * s * (1.0 - s);
        let dh11 = s * (3.0 * s - 2.0);
        let dv = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
        (v, dv)
    }
}

/// Fritsch–Carlson / Fritsch–Butland slopes (as in PCHIP) with the slope at 0
/// pinned to zero so that the even reflection is C^1.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[1] = del[0];
    } else {
        for k in 1..n - 1 {
            if del[k - 1] * del[k] <= 0.0 {
                d[k] = 0.0;
            } else {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
            }
        }
        // shape-preserving three-point end formula
        let (h0, h1) = (h[n - 2], h[n - 3]);
        let (m0, m1) = (del[n - 2], del[n - 3]);
        let mut e = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if e.signum() != m0.signum() {
            e = 0.0;
        } else if m0.signum() != m1.signum() && e.abs() > 3.0 * m0.abs() {
            e = 3.0 * m0;
        }
        d[n - 1] = e;
    }
    d[0] = 0.0;
    d
}

/// A kernel together with its bandwidth `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    c: f64,
}

fn check_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return invalid(format!("bandwidth c must be positive, got {c}"));
    }
    Ok(())
}

impl KernelSpec {
    pub fn gaussian(sigma: f64, c: f64) -> Result<Self> {
        check_c(c)?;
        if !sigma.is_finite() || sigma == 0.0 {
            return invalid(format!("Gaussian sigma must be nonzero, got {sigma}"));
        }
        Ok(KernelSpec { family: KernelFamily::Gaussian { sigma }, c })
    }

    pub fn fractional(alpha: f64, c: f64) -> Result<Self> {
        check_c(c)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return invalid(format!("fractional alpha must lie in (0, 1], got {alpha}"));
        }
        Ok(KernelSpec { family: KernelFamily::Fractional { alpha }, c })
    }

    pub fn poisson(y: f64, c: f64) -> Result<Self> {
        check_c(c)?;
        if !(y.is_finite() && y > 0.0) {
            return invalid(format!("Poisson y must be positive, got {y}"));
        }
        Ok(KernelSpec { family: KernelFamily::Poisson { y }, c })
    }

    /// Tabulated kernel; `c` is the last abscissa.
    pub fn tabulated(xi: Vec<f64>, phi_hat: Vec<f64>) -> Result<Self> {
        let c = *xi.last().ok_or_else(|| Error::InvalidInput("empty table".into()))?;
        check_c(c)?;
        let t = Tabulated::new(xi, phi_hat)?;
        Ok(KernelSpec { family: KernelFamily::TabulatedEven(t), c })
    }

    /// Reads a two-column CSV with header `xi,phi_hat`.
    pub fn tabulated_from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "xi" || &headers[1] != "phi_hat" {
            return invalid("tabulated kernel CSV must have header `xi,phi_hat`");
        }
        let mut xi = Vec::new();
        let mut phi = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::InvalidInput(e.to_string()))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad number `{s}`")))
            };
            xi.push(parse(&rec[0])?);
            phi.push(parse(&rec[1])?);
        }
        Self::tabulated(xi, phi)
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Same family with a different bandwidth (tabulated kernels keep theirs).
    pub fn with_c(&self, c: f64) -> Result<Self> {
        check_c(c)?;
        match self.family {
            KernelFamily::TabulatedEven(_) => invalid("cannot rescale a tabulated kernel"),
            _ => Ok(KernelSpec { family: self.family.clone(), c }),
        }
    }

    /// Family parameter (sigma, alpha or y); NaN for tabulated kernels.
    pub fn param(&self) -> f64 {
        match self.family {
            KernelFamily::Gaussian { sigma } => sigma,
            KernelFamily::Fractional { alpha } => alpha,
            KernelFamily::Poisson { y } => y,
            KernelFamily::TabulatedEven(_) => f64::NAN,
        }
    }

    /// Exponent of `|xi|` in `psi` for power-law families (Gaussian 2, Poisson 1).
    pub fn power_exponent(&self) -> Option<f64> {
        match self.family {
            KernelFamily::Gaussian { .. } => Some(2.0),
            KernelFamily::Fractional { alpha } => Some(alpha),
            KernelFamily::Poisson { .. } => Some(1.0),
            KernelFamily::TabulatedEven(_) => None,
        }
    }

    /// `psi(xi) = -ln phi_hat(xi) >= 0`.
    pub fn psi_exponent(&self, xi: f64) -> f64 {
        let r = xi.abs();
        match &self.family {
            KernelFamily::Gaussian { sigma } => sigma * sigma * xi * xi,
            KernelFamily::Fractional { alpha } => r.powf(*alpha),
            KernelFamily::Poisson { y } => y * r,
            KernelFamily::TabulatedEven(t) => -t.eval(r).0.ln(),
        }
    }

    /// `phi_hat(xi)^t`.
    pub fn eval_hat(&self, xi: f64, t: f64) -> f64 {
        if let KernelFamily::TabulatedEven(tab) = &self.family {
            let v = tab.eval(xi.abs()).0;
            return if t == 1.0 { v } else { v.powf(t) };
        }
        (-t * self.psi_exponent(xi)).exp()
    }

    /// `phi_hat(xi)`.
    pub fn hat(&self, xi: f64) -> f64 {
        self.eval_hat(xi, 1.0)
    }

    /// Reduction of `xi` into the cell `[-c, c)`.
    pub fn reduce(&self, xi: f64) -> f64 {
        reduce_to_cell(xi, self.c)
    }

    /// The 2c-periodisation `(phi_hat)_p^t(xi)`.
    pub fn periodize_hat(&self, xi: f64, t: f64) -> f64 {
        self.eval_hat(self.reduce(xi), t)
    }

    /// `kappa_phi = min_{|xi| <= c} phi_hat(xi) = phi_hat(c)`.
    pub fn kappa(&self) -> Result<f64> {
        match &self.family {
            KernelFamily::TabulatedEven(t) => {
                let m = t.phi.iter().cloned().fold(f64::INFINITY, f64::min);
                if m <= 0.0 {
                    return invalid("tabulated phi_hat has a non-positive sample");
                }
                Ok(m)
            }
            _ => Ok(self.hat(self.c)),
        }
    }

    /// `|ln kappa_phi|`, exact even when `kappa_phi` underflows.
    pub fn ln_kappa_abs(&self) -> Result<f64> {
        match &self.family {
            KernelFamily::TabulatedEven(_) => Ok(-self.kappa()?.ln()),
            _ => Ok(self.psi_exponent(self.c)),
        }
    }

    /// Signed derivative `phi_hat'(xi)`; errors where it does not exist.
    pub fn hat_derivative(&self, xi: f64) -> Result<f64> {
        let r = xi.abs();
        let sgn = if xi < 0.0 { -1.0 } else { 1.0 };
        match &self.family {
            KernelFamily::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                Ok(-2.0 * s2 * xi * (-s2 * xi * xi).exp())
            }
            KernelFamily::Fractional { alpha } => {
                if r == 0.0 {
                    return invalid("fractional kernel is not differentiable at 0");
                }
                Ok(-sgn * alpha * r.powf(alpha - 1.0) * (-r.powf(*alpha)).exp())
            }
            KernelFamily::Poisson { y } => {
                if r == 0.0 {
                    return invalid("Poisson kernel is not differentiable at 0");
                }
                Ok(-sgn * y * (-y * r).exp())
            }
            KernelFamily::TabulatedEven(t) => Ok(sgn * t.eval(r).1),
        }
    }

    /// `min_{xi in E} |phi_hat'(xi)|`.
    pub fn hat_derivative_min(&self, e: &IntervalSet) -> Result<f64> {
        if e.is_empty() {
            return invalid("empty set");
        }
        if !e.within(-self.c, self.c, 1e-12) {
            return invalid("set is not contained in [-c, c]");
        }
        let mut best = f64::INFINITY;
        for &(a, b) in e.intervals() {
            let contains_zero = a <= 0.0 && b >= 0.0;
            if contains_zero
                && matches!(
                    self.family,
                    KernelFamily::Fractional { .. } | KernelFamily::Poisson { .. }
                )
            {
                return invalid("kernel is not differentiable at 0, which lies in the set");
            }
            let v = match self.family {
                // |phi'| is unimodal in |xi|: the minimum sits at an end of the |xi| range
                KernelFamily::TabulatedEven(_) => {
                    let n = 10_000;
                    (0..=n)
                        .map(|i| a + (b - a) * i as f64 / n as f64)
                        .map(|x| self.hat_derivative(x).map(f64::abs))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .fold(f64::INFINITY, f64::min)
                }
                _ => {
                    let lo = if contains_zero { 0.0 } else { a.abs().min(b.abs()) };
                    let hi = a.abs().max(b.abs());
                    let g = |r: f64| self.hat_derivative(r).map(f64::abs);
                    g(lo)?.min(g(hi)?)
                }
            };
            best = best.min(v);
        }
        Ok(best)
    }

    /// `E_phi = sup_{|xi| <= c} |phi_hat'(xi)|`. The Gaussian uses the global
    /// bound `sqrt(2/e)|sigma|`.
    pub fn hat_derivative_sup(&self) -> Result<f64> {
        match &self.family {
            KernelFamily::Gaussian { sigma } => Ok((2.0 / std::f64::consts::E).sqrt() * sigma.abs()),
            KernelFamily::Fractional { alpha } => {
                if *alpha < 1.0 {
                    invalid("fractional kernel with alpha < 1 has unbounded derivative at 0")
                } else {
                    Ok(1.0)
                }
            }
            KernelFamily::Poisson { y } => Ok(*y),
            KernelFamily::TabulatedEven(t) => {
                let n = 20_000;
                Ok((0..=n)
                    .map(|i| t.eval(self.c * i as f64 / n as f64).1.abs())
                    .fold(0.0, f64::max))
            }
        }
    }
}

/// `((xi + c) mod 2c) - c`, leaving points already in `[-c, c)` untouched.
pub fn reduce_to_cell(xi: f64, c: f64) -> f64 {
    if xi >= -c && xi < c {
        return xi;
    }
    let p = 2.0 * c;
    let mut r = (xi + c).rem_euclid(p);
    if r >= p {
        r = 0.0;
    }
    r - c
}
