//! Energy of the sinc flow, its decay constants, maximal-gap and density
//! bounds for sampling sets, covering numbers and the low-density sets of
//! Lu and Vetterli.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::numeric::quad::GaussLegendre;
use crate::output::fmt_f64;

const TIME_NODES: usize = 32;
const FREQ_NODES: usize = 16;

/// `int_0^L |(sinc(c .) * phi_t)(x)|^2 dt` with the inner value
/// `(1/2c) int_{-c}^{c} phi_hat^t(xi) e^{i x xi} dxi`, both by Gauss–Legendre.
pub fn sinc_flow_energy(k: &KernelSpec, l: f64, x: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return invalid(format!("L must be positive, got {l}"));
    }
    let c = k.c();
    // one panel per ~2 radians of oscillation
    let panels = ((x.abs() * c / 2.0).ceil() as usize).max(2);
    let gl = GaussLegendre::new(FREQ_NODES);
    let (ts, ws) = GaussLegendre::new(TIME_NODES).on_interval(0.0, l);
    let mut acc = 0.0;
    for (&t, &w) in ts.iter().zip(&ws) {
        // even kernel: the inner integral is (1/c) int_0^c phi_hat^t cos(x xi)
        let g = gl.integrate_composite(0.0, c, panels, |xi| k.eval_hat(xi, t) * (x * xi).cos()) / c;
        acc += w * g * g;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConstants {
    /// `c_{phi,L} = 2 (kappa^{2L} - 1) / (pi^2 ln kappa)`
    pub c_lower: f64,
    /// `max(1, L) + (kappa / (3 E)) ((1/c + E L / kappa)^3 - 1/c^3)`
    pub c_upper: f64,
    pub l: f64,
    /// `sup |phi_hat'|` on `[-c, c]`.
    pub e_phi: f64,
    pub kappa: f64,
    /// Gaussian only: `(C, c) = (1/c^3 + (1 + sigma^2 e^{(sigma c)^2}) L^3, 2(1 - e^{-2L(sigma c)^2})/(pi^2 (sigma c)^2))`.
    pub packaged: Option<(f64, f64)>,
}

impl DecayConstants {
    /// The pair `(C, c)` used downstream: packaged for the Gaussian, general otherwise.
    pub fn effective(&self) -> (f64, f64) {
        self.packaged.unwrap_or((self.c_upper, self.c_lower))
    }
}

pub fn decay_constants(k: &KernelSpec, l: f64) -> Result<DecayConstants> {
    if !(l > 0.0 && l.is_finite()) {
        return invalid(format!("L must be positive, got {l}"));
    }
    let c = k.c();
    let kappa = k.kappa()?;
    let e_phi = k.hat_derivative_sup()?;
    let lk = -k.ln_kappa_abs()?;
    let c_lower = if lk.abs() < 1e-12 {
        4.0 * l / (PI * PI)
    } else {
        2.0 * (2.0 * l * lk).exp_m1() / (PI * PI * lk)
    };
    let cubic = if e_phi == 0.0 {
        l / (c * c)
    } else {
        kappa / (3.0 * e_phi) * ((1.0 / c + e_phi * l / kappa).powi(3) - 1.0 / c.powi(3))
    };
    let packaged = match k.family() {
        KernelFamily::Gaussian { sigma } => {
            let sc2 = (sigma * c).powi(2);
            let big = 1.0 / c.powi(3) + (1.0 + sigma * sigma * sc2.exp()) * l.powi(3);
            let small = -2.0 * (-2.0 * l * sc2).exp_m1() / (PI * PI * sc2);
            Some((big, small))
        }
        _ => None,
    };
    Ok(DecayConstants { c_lower, c_upper: l.max(1.0) + cubic, l, e_phi, kappa, packaged })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBound {
    /// Maximal gap `R = max(pi/c, (8c/pi)(B/A)(C/c_))`.
    pub r: f64,
    /// `D^- >= min(c/2pi, (pi/16c)(A/B)(c_/C))`
    pub d_minus_lower: f64,
    /// `D^+ <= 4B/c_`
    pub d_plus_upper: f64,
    pub c_big: f64,
    pub c_small: f64,
}

pub fn max_gap_bound(a: f64, b: f64, k: &KernelSpec, l: f64) -> Result<GapBound> {
    if !(a > 0.0) {
        return invalid(format!("A must be positive, got {a}"));
    }
    if !(b >= a && b.is_finite()) {
        return invalid(format!("B must be finite and at least A, got B={b}, A={a}"));
    }
    let c = k.c();
    let (big, small) = decay_constants(k, l)?.effective();
    Ok(GapBound {
        r: (PI / c).max(8.0 * c / PI * (b / a) * big / small),
        d_minus_lower: (c / (2.0 * PI)).min(PI / (16.0 * c) * (a / b) * small / big),
        d_plus_upper: 4.0 * b / small,
        c_big: big,
        c_small: small,
    })
}

/// One row of the quadrature check of the energy bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCheck {
    pub x: f64,
    pub energy: f64,
    /// `energy >= c_`, only defined for `|x| <= pi/2c`.
    pub lower_ok: Option<bool>,
    /// `(1 + x^2) energy <= C`
    pub upper_ok: bool,
}

pub fn verify_decay(k: &KernelSpec, l: f64, xs: &[f64]) -> Result<Vec<DecayCheck>> {
    let (big, small) = decay_constants(k, l)?.effective();
    let half = PI / (2.0 * k.c());
    xs.par_iter()
        .map(|&x| {
            let energy = sinc_flow_energy(k, l, x)?;
            Ok(DecayCheck {
                x,
                energy,
                lower_ok: (x.abs() <= half * (1.0 + 1e-12)).then_some(energy >= small),
                upper_ok: (1.0 + x * x) * energy <= big,
            })
        })
        .collect()
}

pub const DECAY_HEADER: &str = "x,energy,lower_ok,upper_ok";

pub fn decay_csv(rows: &[DecayCheck]) -> String {
    let mut s = String::from(DECAY_HEADER);
    s.push('\n');
    for r in rows {
        let lo = match r.lower_ok {
            Some(true) => "true",
            Some(false) => "false",
            None => "na",
        };
        s.push_str(&format!("{},{},{},{}\n", fmt_f64(r.x), fmt_f64(r.energy), lo, r.upper_ok));
    }
    s
}

/// A finite window of a sampling set.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSet {
    pub points: Vec<f64>,
    pub window: (f64, f64),
    pub tag: String,
}

impl SamplingSet {
    pub fn new(mut points: Vec<f64>, window: (f64, f64), tag: impl Into<String>) -> Result<Self> {
        if !(window.1 > window.0) {
            return invalid("window must have positive length");
        }
        if points.iter().any(|p| !p.is_finite()) {
            return invalid("sampling points must be finite");
        }
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup();
        points.retain(|&p| p >= window.0 && p <= window.1);
        Ok(SamplingSet { points, window, tag: tag.into() })
    }

    /// Points per unit length over the window.
    pub fn density(&self) -> f64 {
        self.points.len() as f64 / (self.window.1 - self.window.0)
    }
}

/// Largest number of points in a closed interval of length `pi/2c`.
pub fn covering_number(s: &SamplingSet, c: f64) -> Result<usize> {
    if !(c > 0.0) {
        return invalid("c must be positive");
    }
    let len = PI / (2.0 * c);
    if s.window.1 - s.window.0 < len {
        return invalid("window shorter than pi/2c");
    }
    let p = &s.points;
    let mut best = 0;
    let mut j = 0;
    for i in 0..p.len() {
        if j < i {
            j = i;
        }
        while j < p.len() && p[j] <= p[i] + len {
            j += 1;
        }
        best = best.max(j - i);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LuVetterli {
    pub set: SamplingSet,
    pub m: u64,
    pub n: u64,
    pub density: f64,
    /// `1/m + ((m-1)/2)/(mn)`
    pub limit_density: f64,
    /// `1/n + 1/m`
    pub density_bound: f64,
    /// The window is shorter than one period `mn`.
    pub unreliable: bool,
}

/// `m Z  u  U_{k=1}^{(m-1)/2} (mn Z + k)` on a window.
pub fn lu_vetterli_set(m: u64, n: u64, window: (f64, f64)) -> Result<LuVetterli> {
    if m < 3 || m % 2 == 0 {
        return invalid(format!("m must be odd and at least 3, got {m}"));
    }
    if n == 0 || n % 2 == 0 {
        return invalid(format!("n must be odd, got {n}"));
    }
    if !(window.0.is_finite() && window.1.is_finite() && window.1 > window.0) {
        return invalid("window must be a finite interval of positive length");
    }
    let (mf, period) = (m as f64, (m * n) as f64);
    let mut pts = Vec::new();
    let mut q = (window.0 / mf).ceil();
    while q * mf <= window.1 {
        pts.push(q * mf);
        q += 1.0;
    }
    for k in 1..=(m - 1) / 2 {
        let kf = k as f64;
        let mut q = ((window.0 - kf) / period).ceil();
        while q * period + kf <= window.1 {
            pts.push(q * period + kf);
            q += 1.0;
        }
    }
    let set = SamplingSet::new(pts, window, format!("lu-vetterli(m={m}, n={n})"))?;
    Ok(LuVetterli {
        density: set.density(),
        set,
        m,
        n,
        limit_density: 1.0 / mf + ((m - 1) / 2) as f64 / period,
        density_bound: 1.0 / n as f64 + 1.0 / mf,
        unreliable: window.1 - window.0 < period,
    })
}
