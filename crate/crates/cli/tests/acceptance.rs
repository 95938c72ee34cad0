//! Acceptance criteria, one line each. Runs as a plain binary so every
//! verdict is printed; exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dynsamp::blindspot::{build_sets, delta_from_eta};
use dynsamp::diffmatrix::{build_pick, build_quadrature, spectrum};
use dynsamp::framebounds::{
    frame_a_sufcont, lambda_min_lower, lambda_min_upper_bt, psi_geom, vandermonde_lower, w_matrix,
};
use dynsamp::gapanalysis::{decay_constants, lu_vetterli_set, sinc_flow_energy};
use dynsamp::numeric::quad::GaussLegendre;
use dynsamp::pswf::{beta_coeff_bound, compute_basis, lambda_sum_bound, remez_trials, RemezModel};
use dynsamp::simulator::{frame_quotient, reconstruct, synthesize, trace, Region, SignalModel};
use dynsamp::KernelSpec;

const C: f64 = 0.5;
const PICK_QUAD_TOL: f64 = 1e-10;
const PICK_QUAD_TIME: Duration = Duration::from_secs(10);
const PERIOD_TOL: f64 = 1e-9;
const BLIND_REL: f64 = 1e-12;
const LMAX_SLACK: f64 = 1e-9;
const FRAME_ID_TOL: f64 = 1e-6;
const ROUNDTRIP_TOL: f64 = 1e-8;
const ROUNDTRIP_TIME: Duration = Duration::from_secs(30);
const ORTHO_TOL: f64 = 1e-8;
const QC_TOL: f64 = 1e-6;
const CEST_TOL: f64 = 1e-12;
const DENSITY_REL: f64 = 0.01;

type Verdict = (bool, String);

/// 64 midpoints of [-1/2, 1/2).
fn xi_grid() -> Vec<f64> {
    (0..64).map(|i| -0.5 + (i as f64 + 0.5) / 64.0).collect()
}

fn gauss(sigma: f64) -> KernelSpec {
    KernelSpec::gaussian(sigma, C).unwrap()
}

fn c01_pick_vs_quadrature() -> Verdict {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for m in [2, 3, 5] {
        for sigma in [0.5, 1.0, 5.0] {
            let k = gauss(sigma);
            for xi in xi_grid() {
                let p = build_pick(&k, m, xi);
                let q = build_quadrature(&k, m, xi, 48);
                for (a, b) in p.entries.iter().zip(&q.entries) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    let dt = t0.elapsed();
    (worst <= PICK_QUAD_TOL && dt <= PICK_QUAD_TIME, format!("max |pick - quad| = {worst:.2e}, {:.2}s", dt.as_secs_f64()))
}

fn c02_periodicity() -> Verdict {
    let mut worst: f64 = 0.0;
    for m in [2, 3, 5] {
        for sigma in [0.5, 1.0, 5.0] {
            let k = gauss(sigma);
            for xi in xi_grid() {
                let a = build_pick(&k, m, xi).eig;
                let b = build_pick(&k, m, xi + 1.0).eig;
                for (x, y) in a.iter().zip(&b) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    (worst <= PERIOD_TOL, format!("max eigenvalue shift = {worst:.2e}"))
}

fn c03_blind_spots() -> Verdict {
    let mut worst: f64 = 0.0;
    for sigma in [0.5, 1.0, 5.0, 50.0, 200.0] {
        let k = gauss(sigma);
        for (m, xi) in [(2, 0.5), (3, 0.0)] {
            let b = build_pick(&k, m, xi);
            let lmax = *b.eig.last().unwrap();
            worst = worst.max(b.eig[0].abs() / lmax);
        }
    }
    (worst <= BLIND_REL, format!("max lambda_min/lambda_max = {worst:.2e}"))
}

fn c04_sandwich() -> Verdict {
    let xis: Vec<f64> = xi_grid().into_iter().filter(|x| x.abs() >= 0.05 && x.abs() <= 0.45).collect();
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in [2, 3, 5] {
        for sigma in [1.0, 5.0, 50.0] {
            let k = gauss(sigma);
            for &xi in &xis {
                let s = spectrum(&build_pick(&k, m, xi));
                let lo = lambda_min_lower(&k, m, xi).unwrap();
                let hi = lambda_min_upper_bt(m, xi, 2.0).unwrap();
                checked += 1;
                if !(lo <= s.lambda_min && s.lambda_min <= hi && s.lambda_max <= m as f64 + LMAX_SLACK) {
                    bad.push(format!("m={m} sigma={sigma} xi={xi}"));
                }
            }
        }
    }
    (bad.is_empty(), format!("{checked} points, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn sigma_min(v: &[f64]) -> f64 {
    let m = v.len();
    nalgebra::DMatrix::from_fn(m, m, |j, k| v[j].powi(k as i32)).singular_values().min()
}

fn c05_vandermonde() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut alpha_bad = 0;
    for _ in 0..200 {
        let m = rng.gen_range(1..=6);
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b = vandermonde_lower(&v).unwrap();
        if b.alpha > sigma_min(&v) * (1.0 + 1e-12) {
            alpha_bad += 1;
        }
    }
    let mut w_bad = 0;
    let mut w_checked = 0;
    for n in [1usize, 2, 4, 8] {
        let m = rng.gen_range(2..=6);
        let nu = rng.gen_range(0.05..0.9);
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(nu..=1.0)).collect();
        let nu = v.iter().cloned().fold(1.0, f64::min);
        let at = vandermonde_lower(&v).unwrap().alpha_tilde.unwrap();
        let w = w_matrix(&v, n);
        for _ in 0..100 {
            let x = nalgebra::DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
            let nx = x.norm_squared();
            let wx = (&w * &x).norm_squared();
            let lower = at * at * psi_geom(n, nu).unwrap() * nx;
            let upper = (m * m * n) as f64 * nx;
            w_checked += 1;
            if !(lower <= wx * (1.0 + 1e-12) && wx <= upper * (1.0 + 1e-12)) {
                w_bad += 1;
            }
        }
    }
    (alpha_bad + w_bad == 0, format!("alpha: 200 instances, {alpha_bad} violations; W_N: {w_checked} vectors, {w_bad} violations"))
}

// f_t(x) by Gauss–Legendre on [-c, c] straight from the model, independent of the grid
fn spatial_energy(model: &SignalModel, k: &KernelSpec, m: usize, kmax: i64) -> (f64, f64) {
    let (xs, ws) = GaussLegendre::new(16).on_interval(-1.0, 1.0);
    let panels = 96;
    let h = 2.0 * C / panels as f64;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for p in 0..panels {
        let a = -C + p as f64 * h;
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(a + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    let fhat: Vec<Complex64> = nodes.iter().map(|&u| model.eval(u, C)).collect();
    let (ts, tw) = GaussLegendre::new(48).on_interval(0.0, 1.0);
    let (mut total, mut tail) = (0.0, 0.0);
    for (&t, &wt) in ts.iter().zip(&tw) {
        let g: Vec<Complex64> = nodes.iter().zip(&fhat).zip(&weights).map(|((&u, f), &w)| f * (w * k.eval_hat(u, t))).collect();
        for kk in -kmax..=kmax {
            let x = m as f64 * PI * kk as f64 / C;
            let v: Complex64 = nodes.iter().zip(&g).map(|(&u, gv)| gv * Complex64::from_polar(1.0, x * u)).sum::<Complex64>() / (2.0 * PI);
            total += wt * v.norm_sqr();
            if kk.abs() > kmax / 2 {
                tail += wt * v.norm_sqr();
            }
        }
    }
    (total, tail)
}

fn c06_frame_identity() -> Verdict {
    let k = gauss(1.0);
    let mut worst: f64 = 0.0;
    let mut worst_tail: f64 = 0.0;
    for m in [2usize, 3] {
        for seed in 0..10 {
            let model = SignalModel::random(seed, C);
            let s = synthesize(&model, C, m, 256).unwrap();
            let freq = frame_quotient(&s, &k).unwrap().energy;
            let (space, tail) = spatial_energy(&model, &k, m, 40);
            worst = worst.max((freq - space).abs() / space);
            worst_tail = worst_tail.max(tail / space);
        }
    }
    (worst <= FRAME_ID_TOL && worst_tail < 1e-8, format!("20 signals, max rel diff = {worst:.2e}, tail share (|k| in (20,40]) <= {worst_tail:.1e}"))
}

fn c07_sufcont_inequality() -> Verdict {
    let k = gauss(1.0);
    let mut bad = 0;
    let mut min_margin = f64::INFINITY;
    for m in [2usize, 3] {
        let e = build_sets(C, m, 0.125).unwrap();
        let a = frame_a_sufcont(&k, m, delta_from_eta(&k, m, 0.125).unwrap()).unwrap().a;
        for seed in 0..10 {
            let full = synthesize(&SignalModel::random(100 + seed, C), C, m, 256).unwrap();
            let s = full.restricted(|xi| e.contains_folded(xi));
            let fq = frame_quotient(&s, &k).unwrap();
            let lower = a * s.norm_hat_sq_where(|xi| e.contains_folded(xi)) / fq.norm_sq;
            let upper = C / (2.0 * PI * PI) * s.norm_hat_sq() / fq.norm_sq;
            if !(lower <= fq.quotient && fq.quotient <= upper) {
                bad += 1;
            }
            min_margin = min_margin.min(fq.quotient / lower);
        }
    }
    (bad == 0, format!("20 signals, {bad} violations, min quotient/lower = {min_margin:.2e}"))
}

fn c08_roundtrip() -> Verdict {
    let t0 = Instant::now();
    let k = gauss(1.0);
    let mut worst: f64 = 0.0;
    for m in [2usize, 3] {
        let region = Region::BlindSpot(build_sets(C, m, 0.125).unwrap());
        for seed in 0..10 {
            let s = synthesize(&SignalModel::random(200 + seed, C), C, m, 256).unwrap();
            let td = trace(&s, &k, 48).unwrap();
            let r = reconstruct(&td, &k, &region, 1e-12, Some(&s)).unwrap();
            worst = worst.max(r.relative_error_on_e.unwrap());
        }
    }
    let dt = t0.elapsed();
    (worst <= ROUNDTRIP_TOL && dt <= ROUNDTRIP_TIME, format!("20 signals, max rel error on E = {worst:.2e}, {:.2}s", dt.as_secs_f64()))
}

fn c09_pswf_quality() -> Verdict {
    let g = GaussLegendre::new(160);
    let (mut ortho, mut resid) = (0.0f64, 0.0f64);
    let mut decreasing = true;
    let mut lambda_fail = Vec::new();
    for c in [0.5, 1.0, 5.0] {
        let b = compute_basis(c, 20).unwrap();
        let vals: Vec<Vec<f64>> = (0..=20).map(|n| g.nodes.iter().map(|&x| b.eval(n, x)).collect()).collect();
        for i in 0..=20 {
            for j in 0..=i {
                let ip: f64 = g.weights.iter().zip(&vals[i]).zip(&vals[j]).map(|((w, a), b)| w * a * b).sum();
                ortho = ortho.max((ip - if i == j { 1.0 } else { 0.0 }).abs());
            }
            resid = resid.max(b.qc_residual(i));
        }
        decreasing &= b.lambda.windows(2).all(|w| w[1] < w[0]);
        let mut sum = 0.0;
        for n in 0..=10 {
            sum += 1.0 / b.lambda[n];
            let cap = lambda_sum_bound(c, n).powi(2);
            if sum > cap {
                lambda_fail.push(format!("c={c} N={n}: {sum:.3e} > {cap:.3e}"));
            }
        }
    }
    let ok = ortho <= ORTHO_TOL && resid <= QC_TOL && decreasing && lambda_fail.is_empty();
    (
        ok,
        format!(
            "orthonormality {ortho:.1e}, Q_c residual {resid:.1e}, decreasing {decreasing}; sum 1/lambda_n <= Lambda_N^2 fails {}/33 ({})",
            lambda_fail.len(),
            lambda_fail.first().map(String::as_str).unwrap_or("-")
        ),
    )
}

fn c10_beta_bound() -> Verdict {
    let mut detail = Vec::new();
    let mut total_bad = 0;
    for c in [0.5, 1.0, 5.0] {
        let b = compute_basis(c, 10).unwrap();
        let mut bad = 0;
        for n in 0..=10 {
            let beta = b.beta_coeffs(n, 40);
            for (k, v) in beta.iter().enumerate() {
                if v.norm() > beta_coeff_bound(c, b.lambda[n], k) {
                    bad += 1;
                }
            }
        }
        total_bad += bad;
        detail.push(format!("c={c}: {bad}/451"));
    }
    (total_bad == 0, format!("violations {}", detail.join(", ")))
}

fn c11_remez() -> Verdict {
    let poly = remez_trials(RemezModel::FourierPoly, C, 10, 500, 11).unwrap();
    let pswf = remez_trials(RemezModel::Pswf, C, 8, 100, 12).unwrap();
    let bp = poly.iter().filter(|t| !t.holds()).count();
    let bs = pswf.iter().filter(|t| !t.holds()).count();
    let slack = poly.iter().chain(&pswf).map(|t| t.ln_constant - t.ln_ratio).fold(f64::INFINITY, f64::min);
    (bp + bs == 0, format!("polynomials {bp}/500, PSWF {bs}/100 violations, min ln slack {slack:.3}"))
}

fn c12_gap_lemma() -> Verdict {
    let mut bad = Vec::new();
    let mut cest = 0.0f64;
    let mut n = 0;
    for sigma in [0.5, 2.0] {
        for l in [1.0, 4.0] {
            let k = gauss(sigma);
            let d = decay_constants(&k, l).unwrap();
            let (big, small) = d.packaged.unwrap();
            let sc2 = (sigma * C) * (sigma * C);
            let big_ref = 1.0 / (C * C * C) + (1.0 + sigma * sigma * sc2.exp()) * l * l * l;
            let small_ref = 2.0 * (1.0 - (-2.0 * l * sc2).exp()) / (PI * PI * sc2);
            cest = cest.max(((big - big_ref) / big_ref).abs()).max(((small - small_ref) / small_ref).abs());
            for i in 0..=400 {
                let x = -50.0 + i as f64 * 0.25;
                let e = sinc_flow_energy(&k, l, x).unwrap();
                n += 1;
                if x.abs() <= PI / (2.0 * C) && e < small {
                    bad.push(format!("lower sigma={sigma} L={l} x={x}"));
                }
                if (1.0 + x * x) * e > big {
                    bad.push(format!("upper sigma={sigma} L={l} x={x}"));
                }
            }
        }
    }
    (bad.is_empty() && cest <= CEST_TOL, format!("{n} points, {} violations, packaged constants rel diff {cest:.1e}", bad.len()))
}

fn run_condnum(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_dynsamp"))
        .arg("condnum")
        .args(args)
        .env("DYNSAMP_THREADS", threads)
        .output()
        .expect("running dynsamp");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn c13_figures() -> Verdict {
    let fig1 = ["--kernel", "gaussian", "--c", "0.5", "--xi", "0.45", "--m", "2,3,5", "--sigma", "1:200:1"];
    let fig2 = ["--sigma", "200", "--xi", "0.35:0.49:0.001", "--m", "2,3,5"];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, args, rows) in [("fig1", &fig1[..], 600), ("fig2", &fig2[..], 423)] {
        let a = run_condnum(args, "1");
        let b = run_condnum(args, "4");
        let text = String::from_utf8(a.clone()).unwrap();
        let conds: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
        let good = conds.iter().all(|c| c.is_finite() && *c >= 1.0);
        ok &= a == b && good && conds.len() == rows;
        let max = conds.iter().cloned().fold(0.0, f64::max);
        notes.push(format!("{name}: {} rows, identical {}, finite and >= 1 {good}, max cond {max:.2e}", conds.len(), a == b));
    }
    (ok, notes.join("; "))
}

fn c14_lu_vetterli() -> Verdict {
    let s = lu_vetterli_set(3, 5, (0.0, 1e4)).unwrap();
    let rel = (s.density - 0.4).abs() / 0.4;
    (rel <= DENSITY_REL, format!("density {:.5} ({} points), rel diff {rel:.1e}", s.density, s.set.points.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 14] = [
        ("pick vs quadrature", c01_pick_vs_quadrature),
        ("eigenvalue 1-periodicity", c02_periodicity),
        ("exact blind spots", c03_blind_spots),
        ("lambda_min sandwich", c04_sandwich),
        ("Vandermonde bounds", c05_vandermonde),
        ("frame identity", c06_frame_identity),
        ("frame inequality on E", c07_sufcont_inequality),
        ("reconstruction round trip", c08_roundtrip),
        ("PSWF quality", c09_pswf_quality),
        ("Legendre coefficient bound", c10_beta_bound),
        ("Remez empirics", c11_remez),
        ("gap lemma quadrature", c12_gap_lemma),
        ("figure regeneration", c13_figures),
        ("Lu-Vetterli density", c14_lu_vetterli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(v) => v,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:02} {} {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
