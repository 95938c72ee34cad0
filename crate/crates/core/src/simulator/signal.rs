use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::diffmatrix::coset_indices;
use crate::error::{invalid, Result};
use crate::output::fmt_f64;
use crate::pswf::ProlateBasis;

/// `f_hat` sampled on the midpoint grid `u_p = -c + 2c(p + 1/2)/(mQ)`,
/// `p = 0..mQ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpectrum {
    pub c: f64,
    pub m: usize,
    pub q: usize,
    pub values: Vec<Complex64>,
    pub label: Option<String>,
}

/// For each of the `Q` folded frequencies `xi_r in [-1/2, 1/2)`, the grid
/// indices of its `m` coset points, ordered by residue.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetFold {
    pub xi: Vec<f64>,
    pub index: Vec<Vec<usize>>,
}

impl SignalSpectrum {
    pub fn from_fn<F: Fn(f64) -> Complex64>(c: f64, m: usize, q: usize, f: F) -> Result<Self> {
        if q < 4 {
            return invalid(format!("Q must be at least 4, got {q}"));
        }
        if m < 1 {
            return invalid("m must be at least 1");
        }
        if !(c > 0.0 && c.is_finite()) {
            return invalid("c must be positive");
        }
        let n = m * q;
        let values = (0..n)
            .map(|p| f(-c + 2.0 * c * (p as f64 + 0.5) / n as f64))
            .collect();
        Ok(SignalSpectrum { c, m, q, values, label: None })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid_point(&self, p: usize) -> f64 {
        -self.c + 2.0 * self.c * (p as f64 + 0.5) / self.len() as f64
    }

    /// Grid spacing `2c/(mQ)`.
    pub fn du(&self) -> f64 {
        2.0 * self.c / self.len() as f64
    }

    /// `||f_hat||^2_{L^2(-c,c)}` by the midpoint rule.
    pub fn norm_hat_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.du()
    }

    /// `||f||_2^2 = ||f_hat||^2 / (2 pi)`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_hat_sq() / (2.0 * PI)
    }

    /// `xi,re,im` rows over the unfolded grid.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("xi,re,im\n");
        for (p, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{},{},{}\n", fmt_f64(self.grid_point(p)), fmt_f64(v.re), fmt_f64(v.im)));
        }
        s
    }

    pub fn fold(&self) -> CosetFold {
        fold_grid(self.m, self.q)
    }

    /// Vectorisation `f(xi_r)`, ordered by residue.
    pub fn vector(&self, fold: &CosetFold, r: usize) -> Vec<Complex64> {
        fold.index[r].iter().map(|&p| self.values[p]).collect()
    }

    /// Copy with every grid value whose folded frequency fails `keep` set to 0.
    pub fn restricted<F: Fn(f64) -> bool>(&self, keep: F) -> SignalSpectrum {
        let fold = self.fold();
        let mut out = self.clone();
        for (r, &xi) in fold.xi.iter().enumerate() {
            if !keep(xi) {
                for &p in &fold.index[r] {
                    out.values[p] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// `||f_hat 1_S||^2` over grid points whose folded frequency satisfies `keep`.
    pub fn norm_hat_sq_where<F: Fn(f64) -> bool>(&self, keep: F) -> f64 {
        let fold = self.fold();
        let mut acc = 0.0;
        for (r, &xi) in fold.xi.iter().enumerate() {
            if keep(xi) {
                acc += fold.index[r].iter().map(|&p| self.values[p].norm_sqr()).sum::<f64>();
            }
        }
        acc * self.du()
    }
}

/// Cell `r` collects the grid points `aQ + r`; its folded frequency is
/// `(r + 1/2)/Q` reduced to `[-1/2, 1/2)` for even `m` and `(r + 1/2)/Q - 1/2`
/// for odd `m`.
pub fn fold_grid(m: usize, q: usize) -> CosetFold {
    let mut xi = Vec::with_capacity(q);
    let mut index = Vec::with_capacity(q);
    let mf = m as f64;
    for r in 0..q {
        let rho = (r as f64 + 0.5) / q as f64;
        let x = if m % 2 == 1 {
            rho - 0.5
        } else if rho < 0.5 {
            rho
        } else {
            rho - 1.0
        };
        let idx = coset_indices(x, m)
            .indices
            .iter()
            .map(|&j| {
                let a = (x + j as f64 + 0.5 * mf - rho).round();
                debug_assert!(a >= 0.0 && a < mf);
                a as usize * q + r
            })
            .collect();
        xi.push(x);
        index.push(idx);
    }
    CosetFold { xi, index }
}

/// Signal models on the Fourier side.
#[derive(Debug, Clone)]
pub enum SignalModel {
    /// `sum c_n psi_hat_{n,c}`
    Moda { basis: ProlateBasis, coeffs: Vec<Complex64> },
    /// `f = sum c_n sinc c(. - lambda_n)`, `f_hat = (pi/c) sum c_n e^{-i lambda_n xi}`
    Modb { nodes: Vec<f64>, coeffs: Vec<Complex64> },
    /// `f_hat = (pi/c) sum_k a_k (xi/c)^k`
    Modc { coeffs: Vec<Complex64> },
    /// Smooth random band-limited signal: `cos^8(pi xi / 2c)` times a random
    /// trigonometric polynomial of degree 3, drawn from `seed`.
    Random { seed: u64, c: f64, z: Vec<Complex64> },
}

impl SignalModel {
    pub fn random(seed: u64, c: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = (0..7)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        SignalModel::Random { seed, c, z }
    }

    /// `f_hat(xi)`; zero outside `[-c, c]` for the band-limited models.
    pub fn eval(&self, xi: f64, c: f64) -> Complex64 {
        if xi.abs() > c {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            SignalModel::Moda { basis, coeffs } => coeffs
                .iter()
                .enumerate()
                .map(|(n, cn)| cn * basis.fourier(n, xi))
                .sum(),
            SignalModel::Modb { nodes, coeffs } => {
                nodes
                    .iter()
                    .zip(coeffs)
                    .map(|(&l, cn)| cn * Complex64::from_polar(1.0, -l * xi))
                    .sum::<Complex64>()
                    * (PI / c)
            }
            SignalModel::Modc { coeffs } => {
                let s = xi / c;
                let mut acc = Complex64::new(0.0, 0.0);
                for a in coeffs.iter().rev() {
                    acc = acc * s + a;
                }
                acc * (PI / c)
            }
            SignalModel::Random { z, c: cm, .. } => {
                let w = (PI * xi / (2.0 * cm)).cos().powi(8);
                let poly: Complex64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, zn)| {
                        let n = i as f64 - 3.0;
                        zn * Complex64::from_polar(1.0, n * PI * xi / cm)
                    })
                    .sum();
                poly * w
            }
        }
    }

    fn label(&self) -> String {
        match self {
            SignalModel::Moda { coeffs, basis } => format!("moda(N={}, c={})", coeffs.len().saturating_sub(1), basis.c),
            SignalModel::Modb { nodes, .. } => format!("modb(N={})", nodes.len()),
            SignalModel::Modc { coeffs } => format!("modc(deg={})", coeffs.len().saturating_sub(1)),
            SignalModel::Random { seed, .. } => format!("random(seed={seed})"),
        }
    }
}

/// Samples a signal model on the grid for `(c, m, Q)`.
pub fn synthesize(model: &SignalModel, c: f64, m: usize, q: usize) -> Result<SignalSpectrum> {
    match model {
        SignalModel::Moda { basis, coeffs } => {
            if (basis.c - c).abs() > 1e-15 * c {
                return invalid("PSWF basis bandwidth differs from c");
            }
            if coeffs.len() > basis.n_max + 1 {
                return invalid("more coefficients than basis functions");
            }
        }
        SignalModel::Modb { nodes, coeffs } => {
            if nodes.len() != coeffs.len() {
                return invalid("modb needs one coefficient per node");
            }
            if nodes.iter().any(|v| !v.is_finite()) {
                return invalid("modb nodes must be real");
            }
        }
        SignalModel::Modc { coeffs } => {
            if coeffs.is_empty() {
                return invalid("modc needs at least one coefficient");
            }
        }
        SignalModel::Random { c: cm, .. } => {
            if (cm - c).abs() > 1e-15 * c {
                return invalid("random model bandwidth differs from c");
            }
        }
    }
    let mut s = SignalSpectrum::from_fn(c, m, q, |u| model.eval(u, c))?;
    s.label = Some(model.label());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffmatrix::coset_points;

    #[test]
    fn fold_points_are_coset_points() {
        for m in 1..=6 {
            for q in [4usize, 5, 8, 33] {
                let s = SignalSpectrum::from_fn(0.7, m, q, |_| Complex64::new(0.0, 0.0)).unwrap();
                let fold = s.fold();
                let mut seen = vec![false; m * q];
                for r in 0..q {
                    let pts = coset_points(0.7, m, fold.xi[r]);
                    assert!((-0.5..0.5).contains(&fold.xi[r]));
                    for (j, &p) in fold.index[r].iter().enumerate() {
                        assert!((s.grid_point(p) - pts[j]).abs() < 1e-13, "m={m} q={q} r={r}");
                        assert!(!seen[p]);
                        seen[p] = true;
                    }
                }
                assert!(seen.iter().all(|&v| v));
            }
        }
    }

    #[test]
    fn vectorisation_isometry() {
        let model = SignalModel::random(11, 0.5);
        for m in 1..=5 {
            let s = synthesize(&model, 0.5, m, 64).unwrap();
            let fold = s.fold();
            let lhs: f64 = (0..s.q)
                .map(|r| s.vector(&fold, r).iter().map(|v| v.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                / s.q as f64;
            let rhs = m as f64 / (2.0 * s.c) * s.norm_hat_sq();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }

    #[test]
    fn model_examples() {
        let sinc = SignalModel::Modb { nodes: vec![0.0], coeffs: vec![Complex64::new(1.0, 0.0)] };
        let s = synthesize(&sinc, 0.5, 2, 8).unwrap();
        assert!(s.values.iter().all(|v| (v - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-14));
        let constant = SignalModel::Modc { coeffs: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)] };
        let s = synthesize(&constant, 0.5, 3, 8).unwrap();
        assert!(s.values.iter().all(|v| (v - s.values[0]).norm() == 0.0));
        assert!(synthesize(&constant, 0.5, 3, 3).is_err());
    }

    #[test]
    fn random_model_is_reproducible() {
        let a = synthesize(&SignalModel::random(3, 0.5), 0.5, 2, 16).unwrap();
        let b = synthesize(&SignalModel::random(3, 0.5), 0.5, 2, 16).unwrap();
        let c = synthesize(&SignalModel::random(4, 0.5), 0.5, 2, 16).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
    }
}
