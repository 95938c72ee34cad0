use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use dynsamp::blindspot::{build_sets, delta_from_eta};
use dynsamp::diffmatrix::{sweep, sweep_csv};
use dynsamp::framebounds::{frame_a_sufcont, model_kappa, sandwich, sandwich_csv, FrameBoundReport};
use dynsamp::gapanalysis::{
    covering_number, decay_csv, lu_vetterli_set, max_gap_bound, verify_decay,
};
use dynsamp::output::fmt_f64;
use dynsamp::pswf::{compute_basis, remez_constant, remez_trials, RemezModel};
use dynsamp::simulator::{
    add_noise, forward_samples, frame_quotient, reconstruct, synthesize, trace, trace_with_nodes,
    Region, SignalModel,
};
use dynsamp::{KernelFamily, KernelSpec};

use crate::grid::{parse_grid, parse_usize_list};
use crate::{
    BlindspotCommand, BoundsArgs, CondnumArgs, Family, GapCommand, KernelArgs, NodeScale, PswfArgs,
    RemezArgs, RoundtripArgs, SignalArg,
};

/// Writes to `out`, or stdout when absent.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

impl KernelArgs {
    fn params(&self) -> Result<Vec<f64>> {
        let raw = match self.kernel {
            Family::Gaussian => &self.sigma,
            Family::Fractional => &self.alpha,
            Family::Poisson => &self.y,
            Family::Tabulated => return Ok(vec![f64::NAN]),
        };
        parse_grid(raw)
    }

    fn build(&self, p: f64) -> Result<KernelSpec> {
        Ok(match self.kernel {
            Family::Gaussian => KernelSpec::gaussian(p, self.c)?,
            Family::Fractional => KernelSpec::fractional(p, self.c)?,
            Family::Poisson => KernelSpec::poisson(p, self.c)?,
            Family::Tabulated => {
                let Some(path) = &self.table else {
                    bail!("--kernel tabulated needs --table");
                };
                let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                KernelSpec::tabulated_from_csv(BufReader::new(f))?
            }
        })
    }

    /// All kernels of the parameter grid.
    pub fn kernels(&self) -> Result<Vec<KernelSpec>> {
        self.params()?.into_iter().map(|p| self.build(p)).collect()
    }

    /// Exactly one kernel.
    pub fn kernel(&self) -> Result<KernelSpec> {
        let p = self.params()?;
        if p.len() != 1 {
            bail!("this command takes a single kernel parameter, got {}", p.len());
        }
        self.build(p[0])
    }
}

pub fn condnum(a: &CondnumArgs) -> Result<()> {
    let kernels = a.kernel.kernels()?;
    let ms = parse_usize_list(&a.m)?;
    let xis = parse_grid(&a.xi)?;
    let rows = sweep(&kernels, &ms, &xis)?;
    emit(&a.out, &sweep_csv(&rows))
}

pub fn bounds(a: &BoundsArgs) -> Result<()> {
    let k = a.kernel.kernel()?;
    let mut report = FrameBoundReport::build(&k, a.m, a.eta)?;
    if let Some(model) = a.model {
        let KernelFamily::Gaussian { sigma } = k.family() else {
            bail!("model constants are available for the Gaussian kernel only");
        };
        let n = a.n.unwrap_or(0);
        report = report.with_kappa(model_kappa(*sigma, k.c(), a.m, n, model.into(), a.gamma, a.difference_space)?);
    }
    let xis = parse_grid(&a.xi)?;
    let csv = sandwich_csv(&sandwich(&k, a.m, &xis)?);
    match &a.csv {
        Some(_) => {
            emit(&None, &report.to_string())?;
            emit(&a.csv, &csv)
        }
        None => emit(&None, &format!("{report}\n{csv}")),
    }
}

fn random_coeffs(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect()
}

fn signal_model(a: &RoundtripArgs, c: f64) -> Result<SignalModel> {
    Ok(match a.model {
        SignalArg::Random => SignalModel::random(a.seed, c),
        SignalArg::Modc => SignalModel::Modc { coeffs: random_coeffs(a.seed, a.n + 1) },
        SignalArg::Moda => SignalModel::Moda { basis: compute_basis(c, a.n)?, coeffs: random_coeffs(a.seed, a.n + 1) },
        SignalArg::Modb => {
            let scale = match a.node_scale {
                NodeScale::Absolute => 1.0,
                NodeScale::Nyquist => std::f64::consts::PI / c,
            };
            let nodes: Vec<f64> = parse_grid(&a.nodes)?.into_iter().map(|x| x * scale).collect();
            let coeffs = vec![Complex64::new(1.0, 0.0); nodes.len()];
            SignalModel::Modb { nodes, coeffs }
        }
    })
}

pub fn roundtrip(a: &RoundtripArgs) -> Result<()> {
    let k = a.kernel.kernel()?;
    let c = k.c();
    if a.m < 1 {
        bail!("m must be at least 1");
    }
    let model = signal_model(a, c)?;
    let truth = synthesize(&model, c, a.m, a.q)?;
    let (region, a_const) = if a.m >= 2 {
        let e = build_sets(c, a.m, a.eta)?;
        let delta = delta_from_eta(&k, a.m, a.eta)?;
        (Region::BlindSpot(e), Some(frame_a_sufcont(&k, a.m, delta)?.a))
    } else {
        (Region::Full, None)
    };

    let mut s = String::new();
    writeln!(s, "model = {}", truth.label.clone().unwrap_or_default())?;
    writeln!(s, "c = {}", fmt_f64(c))?;
    writeln!(s, "m = {}", a.m)?;
    writeln!(s, "Q = {}", a.q)?;
    writeln!(s, "eta = {}", fmt_f64(a.eta))?;
    writeln!(s, "tau = {}", fmt_f64(a.tau))?;
    writeln!(s, "noise = {}", fmt_f64(a.noise))?;

    let td = if a.t0_only {
        let samples = forward_samples(&truth, &k, 0.0, a.q / 2 - 1)?;
        let max = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        writeln!(s, "n_t = 1 (t = 0 only)")?;
        writeln!(s, "signal_norm = {}", fmt_f64(truth.norm_sq().sqrt()))?;
        writeln!(s, "max_sample_norm_t0 = {}", fmt_f64(max))?;
        writeln!(s, "identifiable_at_t0 = {}", max > 1e-10)?;
        trace_with_nodes(&truth, &k, &[0.0], &[1.0])?
    } else {
        writeln!(s, "n_t = {}", a.n_t)?;
        trace(&truth, &k, a.n_t)?
    };
    let td = if a.noise > 0.0 { add_noise(&td, a.noise, a.seed.wrapping_add(1))? } else { td };
    let res = reconstruct(&td, &k, &region, a.tau, Some(&truth))?;

    let lmin = res.per_xi_lambda_min.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    writeln!(s, "cells_inverted = {}", res.per_xi_lambda_min.len())?;
    writeln!(s, "cells_truncated = {}", res.truncated_cells.len())?;
    writeln!(s, "min_lambda_min = {}", fmt_f64(lmin))?;
    writeln!(s, "relative_error_on_E = {}", fmt_f64(res.relative_error_on_e.unwrap_or(f64::NAN)))?;
    if truth.norm_sq() > 0.0 {
        let fq = frame_quotient(&truth, &k)?;
        writeln!(s, "frame_quotient = {}", fmt_f64(fq.quotient))?;
        writeln!(s, "cap_hat = {}", fmt_f64(fq.cap_hat))?;
        writeln!(s, "cap_unit = {}", fmt_f64(fq.cap_unit))?;
        writeln!(s, "exceeds_cap_hat = {}", fq.exceeds_hat)?;
        writeln!(s, "exceeds_cap_unit = {}", fq.exceeds_unit)?;
    }
    if let Some(av) = a_const {
        writeln!(s, "A_analytic = {}", fmt_f64(av))?;
    }
    emit(&None, &s)?;
    if a.out.is_some() {
        emit(&a.out, &res.recovered.to_csv())?;
    }
    Ok(())
}

pub fn pswf(a: &PswfArgs) -> Result<()> {
    let b = compute_basis(a.c, a.n)?;
    let mut s = String::from("n,lambda,chi,mu_abs,qc_residual\n");
    for n in 0..=a.n {
        writeln!(
            s,
            "{n},{},{},{},{}",
            fmt_f64(b.lambda[n]),
            fmt_f64(b.chi[n]),
            fmt_f64(b.mu_abs[n]),
            fmt_f64(b.qc_residual(n))
        )?;
    }
    emit(&a.out, &s)
}

pub fn remez(a: &RemezArgs) -> Result<()> {
    let model: RemezModel = a.model.into();
    let meas_e = match a.meas_e {
        Some(v) => v,
        None => build_sets(a.c, a.m, a.eta)?.measure_e,
    };
    let r = remez_constant(model, a.c, a.n, meas_e, a.gamma)?;
    let mut s = String::new();
    writeln!(s, "model = {model:?}")?;
    writeln!(s, "c = {}", fmt_f64(a.c))?;
    writeln!(s, "N = {}", a.n)?;
    writeln!(s, "measure_E = {}", fmt_f64(meas_e))?;
    if let Some(k) = r.k {
        writeln!(s, "K = {k}")?;
    }
    writeln!(s, "log10_constant = {}", fmt_f64(r.log10()))?;
    writeln!(s, "constant = {}", fmt_f64(r.value()))?;
    if a.trials > 0 {
        let t = remez_trials(model, a.c, a.n, a.trials, a.seed)?;
        let violations = t.iter().filter(|x| !x.holds()).count();
        let slack = t.iter().map(|x| x.ln_constant - x.ln_ratio).fold(f64::INFINITY, f64::min);
        writeln!(s, "trials = {}", t.len())?;
        writeln!(s, "violations = {violations}")?;
        writeln!(s, "min_log10_slack = {}", fmt_f64(slack / std::f64::consts::LN_10))?;
    }
    emit(&None, &s)
}

fn parse_window(w: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = w.split(':').collect();
    if parts.len() != 2 {
        bail!("window `{w}` must have the form a:b");
    }
    let a: f64 = parts[0].trim().parse().with_context(|| format!("bad window start `{}`", parts[0]))?;
    let b: f64 = parts[1].trim().parse().with_context(|| format!("bad window end `{}`", parts[1]))?;
    Ok((a, b))
}

pub fn gap(cmd: &GapCommand) -> Result<()> {
    match cmd {
        GapCommand::Bound { kernel, a, b, l } => {
            let k = kernel.kernel()?;
            let g = max_gap_bound(*a, *b, &k, *l)?;
            let mut s = String::new();
            writeln!(s, "R = {}", fmt_f64(g.r))?;
            writeln!(s, "D_minus_lower = {}", fmt_f64(g.d_minus_lower))?;
            writeln!(s, "D_plus_upper = {}", fmt_f64(g.d_plus_upper))?;
            writeln!(s, "C_phi_L = {}", fmt_f64(g.c_big))?;
            writeln!(s, "c_phi_L = {}", fmt_f64(g.c_small))?;
            emit(&None, &s)
        }
        GapCommand::Verify { kernel, l, x, out } => {
            let k = kernel.kernel()?;
            let xs = parse_grid(x)?;
            emit(out, &decay_csv(&verify_decay(&k, *l, &xs)?))
        }
        GapCommand::LuVetterli { m, n, window, c, points } => {
            let lv = lu_vetterli_set(*m, *n, parse_window(window)?)?;
            let mut s = String::new();
            writeln!(s, "set = {}", lv.set.tag)?;
            writeln!(s, "window = [{}, {}]", fmt_f64(lv.set.window.0), fmt_f64(lv.set.window.1))?;
            writeln!(s, "count = {}", lv.set.points.len())?;
            writeln!(s, "density = {}", fmt_f64(lv.density))?;
            writeln!(s, "limit_density = {}", fmt_f64(lv.limit_density))?;
            writeln!(s, "density_bound = {}", fmt_f64(lv.density_bound))?;
            writeln!(s, "unreliable = {}", lv.unreliable)?;
            match covering_number(&lv.set, *c) {
                Ok(n) => writeln!(s, "covering_number = {n}")?,
                Err(_) => writeln!(s, "covering_number = na")?,
            }
            if *points {
                for p in &lv.set.points {
                    writeln!(s, "{}", fmt_f64(*p))?;
                }
            }
            emit(&None, &s)
        }
    }
}

pub fn blindspot(cmd: &BlindspotCommand) -> Result<()> {
    match cmd {
        BlindspotCommand::Show { kernel, m, eta } => {
            let k = kernel.kernel()?;
            let e = build_sets(k.c(), *m, *eta)?;
            let delta = delta_from_eta(&k, *m, *eta)?;
            let mut s = String::new();
            writeln!(s, "c = {}", fmt_f64(e.c))?;
            writeln!(s, "m = {}", e.m)?;
            writeln!(s, "eta = {}", fmt_f64(e.eta))?;
            writeln!(s, "measure_E = {}", fmt_f64(e.measure_e))?;
            writeln!(s, "delta = {}", fmt_f64(delta))?;
            writeln!(s, "E_tilde:")?;
            writeln!(s, "{}", e.e_tilde)?;
            writeln!(s, "E:")?;
            writeln!(s, "{}", e.e)?;
            emit(&None, &s)
        }
    }
}
