use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::blindspot::BlindSpotSet;
use crate::diffmatrix::{build_pick, row_a, spectrum};
use crate::error::{invalid, Result};
use crate::kernel::KernelSpec;

use super::signal::{fold_grid, SignalSpectrum};
use super::trace::TraceData;

/// Which folded frequencies are inverted.
#[derive(Debug, Clone)]
pub enum Region {
    /// Every cell; meaningful for `m = 1` or as a demonstration of blind spots.
    Full,
    BlindSpot(BlindSpotSet),
}

impl Region {
    fn contains(&self, xi: f64) -> bool {
        match self {
            Region::Full => true,
            Region::BlindSpot(e) => e.contains_folded(xi),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    /// `f_hat` on the cells of the region, zero elsewhere.
    pub recovered: SignalSpectrum,
    /// `||g - f_hat||_E / ||f_hat||_E`, or the absolute error when the truth vanishes on `E`.
    pub relative_error_on_e: Option<f64>,
    pub pinv_threshold: f64,
    /// `(xi, lambda_min(B_m(xi)))` for every inverted cell.
    pub per_xi_lambda_min: Vec<(f64, f64)>,
    /// Cells whose pseudo-inverse dropped at least one direction.
    pub truncated_cells: Vec<usize>,
}

struct CellSolution {
    g: Vec<Complex64>,
    lambda_min: f64,
    truncated: bool,
}

fn solve_cell(td: &TraceData, k: &KernelSpec, r: usize, tau: f64) -> Result<CellSolution> {
    let (m, n_t) = (td.m, td.n_t());
    let xi = td.xi[r];
    let mut a = DMatrix::<f64>::zeros(n_t, m);
    let mut rhs = DMatrix::<f64>::zeros(n_t, 2);
    let scale = m as f64 * PI / td.c;
    for i in 0..n_t {
        let sw = td.weights[i].sqrt();
        let row = row_a(k, m, xi, td.t[i]);
        for j in 0..m {
            a[(i, j)] = sw * row[j];
        }
        let b = td.get(r, i) * (sw * scale);
        rhs[(i, 0)] = b.re;
        rhs[(i, 1)] = b.im;
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    // s^2 < tau s_max^2 is the same cut as lambda < tau lambda_max on the normal equations
    let eps = smax * tau.sqrt();
    let rank = svd.singular_values.iter().filter(|&&s| s >= eps).count();
    let x = svd
        .solve(&rhs, eps)
        .map_err(|e| crate::Error::Numerical(format!("SVD solve failed at xi={xi}: {e}")))?;
    let g = (0..m).map(|j| Complex64::new(x[(j, 0)], x[(j, 1)])).collect();
    let lambda_min = spectrum(&build_pick(k, m, xi)).lambda_min;
    Ok(CellSolution { g, lambda_min, truncated: rank < m })
}

/// Per-cell least squares in time: `f(xi) = argmin int_0^1 |A_m(xi,t) f - (m pi/c) b(xi,t)|^2 dt`,
/// with singular values below `sqrt(tau) s_max` discarded.
pub fn reconstruct(
    td: &TraceData,
    k: &KernelSpec,
    region: &Region,
    tau: f64,
    truth: Option<&SignalSpectrum>,
) -> Result<ReconstructionResult> {
    if (td.c - k.c()).abs() > 1e-14 * td.c.max(1.0) {
        return invalid("trace and kernel bandwidths differ");
    }
    if !(tau >= 0.0 && tau < 1.0) {
        return invalid(format!("pseudo-inverse threshold must lie in [0, 1), got {tau}"));
    }
    if let Region::BlindSpot(e) = region {
        if e.m != td.m || (e.c - td.c).abs() > 1e-14 * td.c.max(1.0) {
            return invalid("blind-spot set built for a different (c, m)");
        }
    }
    if let Some(t) = truth {
        if t.m != td.m || t.q != td.q || (t.c - td.c).abs() > 1e-14 * td.c.max(1.0) {
            return invalid("ground truth grid differs from the trace grid");
        }
    }
    let cells: Vec<usize> = (0..td.q).filter(|&r| region.contains(td.xi[r])).collect();
    let sols: Vec<CellSolution> = cells
        .par_iter()
        .map(|&r| solve_cell(td, k, r, tau))
        .collect::<Result<_>>()?;

    let fold = fold_grid(td.m, td.q);
    let mut values = vec![Complex64::new(0.0, 0.0); td.m * td.q];
    let mut per_xi_lambda_min = Vec::with_capacity(cells.len());
    let mut truncated_cells = Vec::new();
    for (&r, s) in cells.iter().zip(&sols) {
        for (j, &p) in fold.index[r].iter().enumerate() {
            values[p] = s.g[j];
        }
        per_xi_lambda_min.push((td.xi[r], s.lambda_min));
        if s.truncated {
            truncated_cells.push(r);
        }
    }
    let recovered = SignalSpectrum { c: td.c, m: td.m, q: td.q, values, label: Some("recovered".into()) };

    let relative_error_on_e = truth.map(|t| {
        let (mut err, mut norm) = (0.0, 0.0);
        for &r in &cells {
            for &p in &fold.index[r] {
                err += (recovered.values[p] - t.values[p]).norm_sqr();
                norm += t.values[p].norm_sqr();
            }
        }
        if norm > 0.0 {
            (err / norm).sqrt()
        } else {
            (err * recovered.du()).sqrt()
        }
    });

    Ok(ReconstructionResult {
        recovered,
        relative_error_on_e,
        pinv_threshold: tau,
        per_xi_lambda_min,
        truncated_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blindspot::build_sets;
    use crate::simulator::{synthesize, trace, SignalModel};

    #[test]
    fn round_trip_away_from_blind_spots() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let e = build_sets(0.5, 2, 0.125).unwrap();
        for seed in 0..20 {
            let s = synthesize(&SignalModel::random(seed, 0.5), 0.5, 2, 64).unwrap();
            let td = trace(&s, &k, 48).unwrap();
            let res = reconstruct(&td, &k, &Region::BlindSpot(e.clone()), 1e-12, Some(&s)).unwrap();
            assert!(res.relative_error_on_e.unwrap() <= 1e-8, "seed {seed}: {:?}", res.relative_error_on_e);
            assert!(res.truncated_cells.is_empty());
            assert!(res.per_xi_lambda_min.iter().all(|&(_, l)| l > 0.0));
        }
    }

    #[test]
    fn zero_off_the_region() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let e = build_sets(0.5, 2, 0.125).unwrap();
        let s = synthesize(&SignalModel::random(1, 0.5), 0.5, 2, 32).unwrap();
        let off = s.restricted(|xi| !e.contains_folded(xi));
        let td = trace(&off, &k, 32).unwrap();
        let res = reconstruct(&td, &k, &Region::BlindSpot(e), 1e-12, Some(&off)).unwrap();
        assert!(res.recovered.values.iter().all(|v| v.norm() < 1e-12));
        assert!(res.relative_error_on_e.unwrap() < 1e-12);
    }

    #[test]
    fn nyquist_rate_full_band() {
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let s = synthesize(&SignalModel::random(4, 0.5), 0.5, 1, 64).unwrap();
        let td = trace(&s, &k, 24).unwrap();
        let res = reconstruct(&td, &k, &Region::Full, 1e-12, Some(&s)).unwrap();
        assert!(res.relative_error_on_e.unwrap() <= 1e-10);
    }

    #[test]
    fn blind_spot_cells_get_truncated() {
        // near xi = 0 the two coset points share phi_hat, so B_2 is nearly singular
        let k = KernelSpec::gaussian(1.0, 0.5).unwrap();
        let s = synthesize(&SignalModel::random(4, 0.5), 0.5, 2, 64).unwrap();
        let td = trace(&s, &k, 48).unwrap();
        let res = reconstruct(&td, &k, &Region::Full, 1e-6, Some(&s)).unwrap();
        assert!(!res.truncated_cells.is_empty());
        assert!(res.truncated_cells.iter().all(|&r| td.xi[r].abs() < 0.125 || td.xi[r].abs() > 0.375));
    }
}
