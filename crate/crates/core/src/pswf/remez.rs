use std::f64::consts::E;

use crate::error::{invalid, Result};
use crate::intervals::IntervalSet;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::basis::compute_basis;
use crate::simulator::{synthesize, SignalModel, SignalSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemezModel {
    /// Fourier images of polynomials of degree `<= N` (Remez inequality).
    FourierPoly,
    /// Sinc translates (Nazarov; needs the absolute constant gamma).
    SincTranslates,
    /// Span of the first `N+1` PSWFs.
    Pswf,
}

impl std::str::FromStr for RemezModel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fourierpoly" | "fourier-poly" | "poly" | "modc" => Ok(RemezModel::FourierPoly),
            "sinctranslates" | "sinc-translates" | "sinc" | "modb" => Ok(RemezModel::SincTranslates),
            "pswf" | "moda" => Ok(RemezModel::Pswf),
            _ => Err(format!("unknown model `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemezConstant {
    pub model: RemezModel,
    pub n: usize,
    pub meas_e: f64,
    pub c: f64,
    /// Natural log of the constant.
    pub ln_value: f64,
    pub k: Option<u64>,
    pub gamma: Option<f64>,
}

impl RemezConstant {
    /// Linear value; `+inf` when it overflows.
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln_value / std::f64::consts::LN_10
    }
}

/// `K(N)` of the PSWF Remez lemma.
pub fn remez_k(c: f64, n: usize, meas_e: f64) -> Result<u64> {
    if !(meas_e > 0.0) {
        return invalid("measure of E must be positive");
    }
    if !(c > 0.0) {
        return invalid("c must be positive");
    }
    let ec = E * c;
    let nf = n as f64;
    Ok(if nf <= ec.max(2.0) {
        let a = (3200.0 * (3.0 + ec) / (c * c * c)).ceil();
        let b = (4.0 * ec / meas_e).ceil();
        a.max(b) as u64
    } else {
        let b = (8.0 * (nf + 1.0) / meas_e).ceil() as u64;
        20u64.max(n as u64).max(b)
    })
}

/// The formula alone, without the `|E| <= 2c` check (used for hypothetical bases).
pub fn remez_log_constant(
    model: RemezModel,
    c: f64,
    n: usize,
    meas_e: f64,
    gamma: Option<f64>,
) -> Result<(f64, Option<u64>)> {
    if !(meas_e > 0.0) {
        return invalid("measure of E must be positive");
    }
    let nh = n as f64 + 0.5;
    match model {
        RemezModel::FourierPoly => Ok((nh * (8.0 * c / meas_e).ln(), None)),
        RemezModel::SincTranslates => match gamma {
            Some(g) if g > 0.0 => Ok((nh * (g * c / meas_e).ln(), None)),
            Some(g) => invalid(format!("gamma must be positive, got {g}")),
            None => invalid("the sinc-translate model needs the absolute constant gamma"),
        },
        RemezModel::Pswf => {
            let k = remez_k(c, n, meas_e)?;
            Ok((std::f64::consts::LN_2 + k as f64 * (8.0 * c / meas_e).ln(), Some(k)))
        }
    }
}

pub fn remez_constant(
    model: RemezModel,
    c: f64,
    n: usize,
    meas_e: f64,
    gamma: Option<f64>,
) -> Result<RemezConstant> {
    if !(meas_e > 0.0 && meas_e <= 2.0 * c * (1.0 + 1e-12)) {
        return invalid(format!("measure of E must lie in (0, 2c], got {meas_e}"));
    }
    let (ln_value, k) = remez_log_constant(model, c, n, meas_e, gamma)?;
    Ok(RemezConstant { model, n, meas_e, c, ln_value, k, gamma: if model == RemezModel::SincTranslates { gamma } else { None } })
}

/// `||f_hat 1_[-c,c]|| / ||f_hat 1_E||` on the spectrum's midpoint grid, each
/// cell weighted by its overlap with `E`. `+inf` when `f_hat` vanishes on `E`.
pub fn empirical_remez_ratio(f_hat: &SignalSpectrum, e: &IntervalSet) -> Result<f64> {
    let c = f_hat.c;
    if !e.within(-c, c, 1e-12) {
        return invalid("E must lie in [-c, c]");
    }
    if !(e.measure() > 0.0) {
        return invalid("E must have positive measure");
    }
    let du = f_hat.du();
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, v) in f_hat.values.iter().enumerate() {
        let u = f_hat.grid_point(p);
        let w = e.overlap(u - 0.5 * du, u + 0.5 * du);
        num += v.norm_sqr() * du;
        den += v.norm_sqr() * w;
    }
    if den == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((num / den).sqrt())
}

/// One random instance: a model signal, a random union of intervals `E`,
/// and both sides of the Remez inequality in log form.
#[derive(Debug, Clone, PartialEq)]
pub struct RemezTrial {
    pub n: usize,
    pub meas_e: f64,
    pub ln_ratio: f64,
    pub ln_constant: f64,
}

impl RemezTrial {
    pub fn holds(&self) -> bool {
        self.ln_ratio <= self.ln_constant
    }
}

fn random_union<R: Rng>(rng: &mut R, c: f64) -> IntervalSet {
    let pieces = rng.gen_range(1..=3);
    let v: Vec<(f64, f64)> = (0..pieces)
        .map(|_| {
            let len = rng.gen_range(0.05..0.6) * c;
            let a = rng.gen_range(-c..c - len);
            (a, a + len)
        })
        .collect();
    IntervalSet::new(v)
}

fn random_coeffs<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect()
}

/// `trials` random signals of the model with `N <= n_max` (Fourier images
/// of polynomials, or PSWF combinations) against random `E`. Sinc translates
/// are not supported since their constant needs the unknown `gamma`.
pub fn remez_trials(model: RemezModel, c: f64, n_max: usize, trials: usize, seed: u64) -> Result<Vec<RemezTrial>> {
    const Q: usize = 4096;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = match model {
        RemezModel::Pswf => Some(compute_basis(c, n_max)?),
        RemezModel::FourierPoly => None,
        RemezModel::SincTranslates => return invalid("sinc translates need gamma; no empirical trial"),
    };
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = rng.gen_range(0..=n_max);
        let e = random_union(&mut rng, c);
        let coeffs = random_coeffs(&mut rng, n + 1);
        let model_sig = match &basis {
            Some(b) => SignalModel::Moda { basis: b.clone(), coeffs },
            None => SignalModel::Modc { coeffs },
        };
        let f = synthesize(&model_sig, c, 1, Q)?;
        let ratio = empirical_remez_ratio(&f, &e)?;
        let (ln_constant, _) = remez_log_constant(model, c, n, e.measure(), None)?;
        out.push(RemezTrial { n, meas_e: e.measure(), ln_ratio: ratio.ln(), ln_constant });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_examples() {
        let want = (3200.0 * (3.0 + E / 2.0) * 8.0f64).ceil() as u64;
        assert_eq!(remez_k(0.5, 0, 0.5).unwrap(), want);
        assert!((want as i64 - 111_578).abs() < 100);
        assert_eq!(remez_k(0.5, 100, 0.5).unwrap(), 1616);
        for n in 3..200 {
            assert!(remez_k(0.5, n, 0.7).unwrap() >= n as u64);
        }
        assert!(remez_k(0.5, 3, 0.0).is_err());
    }

    #[test]
    fn constant_examples() {
        let r = remez_constant(RemezModel::FourierPoly, 0.5, 2, 1.0, None).unwrap();
        assert!((r.value() - 32.0).abs() < 1e-12);
        let (ln, _) = remez_log_constant(RemezModel::FourierPoly, 0.5, 7, 4.0, None).unwrap();
        assert_eq!(ln, 0.0);
        let p = remez_constant(RemezModel::Pswf, 0.5, 4, 0.3, None).unwrap();
        let k = p.k.unwrap();
        assert!((p.ln_value - (2f64.ln() + k as f64 * (4.0f64 / 0.3).ln())).abs() < 1e-9);
        assert!(p.value().is_finite());
        let big = remez_constant(RemezModel::Pswf, 0.5, 0, 0.3, None).unwrap();
        assert!(big.value().is_infinite() && big.ln_value.is_finite());
        assert!(remez_constant(RemezModel::SincTranslates, 0.5, 2, 0.5, None).is_err());
        let s = remez_constant(RemezModel::SincTranslates, 0.5, 2, 0.5, Some(30.0)).unwrap();
        assert!((s.ln_value - 2.5 * 30f64.ln()).abs() < 1e-12);
        assert!(remez_constant(RemezModel::FourierPoly, 0.5, 2, 1.5, None).is_err());
    }

    #[test]
    fn constant_signal_ratio() {
        let f = SignalSpectrum::from_fn(0.5, 2, 64, |_| num_complex::Complex64::new(1.0, 0.0)).unwrap();
        let e = IntervalSet::new(vec![(-0.5, -0.25), (0.0, 0.25)]);
        let r = empirical_remez_ratio(&f, &e).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let zero = SignalSpectrum::from_fn(0.5, 2, 64, |u| {
            num_complex::Complex64::new(if u > 0.3 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert_eq!(empirical_remez_ratio(&zero, &IntervalSet::single(-0.5, 0.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn trials_hold_and_are_reproducible() {
        let a = remez_trials(RemezModel::FourierPoly, 0.5, 6, 30, 1).unwrap();
        assert!(a.iter().all(RemezTrial::holds));
        assert_eq!(a, remez_trials(RemezModel::FourierPoly, 0.5, 6, 30, 1).unwrap());
        assert!(remez_trials(RemezModel::SincTranslates, 0.5, 6, 3, 1).is_err());
    }
}
