//! Frequency sets that stay away from the blind spots `xi in {0, +-1/2} (mod 1)`,
//! the separation function `omega`, and the guaranteed separation `delta(eta)`.

use crate::diffmatrix::row_a;
use crate::error::{invalid, Result};
use crate::intervals::IntervalSet;
use crate::kernel::KernelSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct BlindSpotSet {
    pub c: f64,
    pub m: usize,
    pub eta: f64,
    /// `[-1/2 + eta, -eta] u [eta, 1/2 - eta]`
    pub e_tilde: IntervalSet,
    /// `(2c/m)(E_tilde + Z) n [-c, c]`
    pub e: IntervalSet,
    pub measure_e: f64,
}

impl BlindSpotSet {
    /// Whether a folded frequency `xi in [-1/2, 1/2)` lies in `E_tilde`.
    pub fn contains_folded(&self, xi: f64) -> bool {
        let a = xi.abs();
        a >= self.eta && a <= 0.5 - self.eta
    }
}

pub fn build_sets(c: f64, m: usize, eta: f64) -> Result<BlindSpotSet> {
    if !(eta > 0.0 && eta < 0.25) {
        return invalid(format!("eta must lie in (0, 1/4), got {eta}"));
    }
    if m < 2 {
        return invalid("m must be at least 2");
    }
    if !(c > 0.0 && c.is_finite()) {
        return invalid("c must be positive");
    }
    let e_tilde = IntervalSet::new(vec![(-0.5 + eta, -eta), (eta, 0.5 - eta)]);
    let h = 2.0 * c / m as f64;
    let mi = m as i64;
    let mut pieces = Vec::new();
    for n in -mi - 1..=mi + 1 {
        for &(a, b) in e_tilde.intervals() {
            let lo = (h * (a + n as f64)).max(-c);
            let hi = (h * (b + n as f64)).min(c);
            if hi >= lo {
                pieces.push((lo, hi));
            }
        }
    }
    let e = IntervalSet::new(pieces);
    let measure_e = e.measure();
    Ok(BlindSpotSet { c, m, eta, e_tilde, e, measure_e })
}

/// `min_{j<k} |phi_p((2c/m)(xi+j)) - phi_p((2c/m)(xi+k))|`.
pub fn omega(k: &KernelSpec, m: usize, xi: f64) -> Result<f64> {
    if m < 2 {
        return invalid("m must be at least 2");
    }
    let v = row_a(k, m, xi, 1.0);
    let mut best = f64::INFINITY;
    for j in 0..m {
        for l in j + 1..m {
            best = best.min((v[j] - v[l]).abs());
        }
    }
    Ok(best)
}

/// `delta = 4 c R eta / m` with `R = min_E |phi_hat'|` over the actual set `E`.
pub fn delta_from_eta(k: &KernelSpec, m: usize, eta: f64) -> Result<f64> {
    let sets = build_sets(k.c(), m, eta)?;
    let r = k.hat_derivative_min(&sets.e)?;
    Ok(4.0 * k.c() * r * eta / m as f64)
}
