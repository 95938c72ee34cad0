//! `dynsamp`: diffusion-matrix sweeps, frame-bound reports, reconstruction
//! round trips, PSWF tables, Remez constants and gap analysis.

mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dynsamp", version, about = "Space-time sampling of bandlimited functions under diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep lambda_min, lambda_max and the condition number of B_m(xi) to CSV.
    Condnum(CondnumArgs),
    /// Analytic frame constants and the lambda_min sandwich.
    Bounds(BoundsArgs),
    /// Synthesize, sample, and reconstruct away from the blind spots.
    Roundtrip(RoundtripArgs),
    /// Table of PSWF eigenvalues and quality checks.
    Pswf(PswfArgs),
    /// Remez–Turán constants, optionally against random trials.
    Remez(RemezArgs),
    /// Maximal-gap bounds, energy decay checks, Lu–Vetterli sets.
    Gap {
        #[command(subcommand)]
        command: GapCommand,
    },
    /// Frequency sets that avoid the blind spots.
    Blindspot {
        #[command(subcommand)]
        command: BlindspotCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gaussian,
    Fractional,
    Poisson,
    Tabulated,
}

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub kernel: Family,
    /// Gaussian width (value, list, or start:end:step where a sweep is allowed).
    #[arg(long, default_value = "1")]
    pub sigma: String,
    /// Fractional exponent.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Poisson parameter.
    #[arg(long, default_value = "1")]
    pub y: String,
    /// CSV with header `xi,phi_hat` for the tabulated kernel; c is its last xi.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Bandwidth.
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
}

#[derive(Args, Debug)]
pub struct CondnumArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value = "2,3,5")]
    pub m: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.45")]
    pub xi: String,
    /// Output CSV file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelArg {
    Fourierpoly,
    Sinc,
    Pswf,
}

impl From<ModelArg> for dynsamp::pswf::RemezModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fourierpoly => dynsamp::pswf::RemezModel::FourierPoly,
            ModelArg::Sinc => dynsamp::pswf::RemezModel::SincTranslates,
            ModelArg::Pswf => dynsamp::pswf::RemezModel::Pswf,
        }
    }
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.125)]
    pub eta: f64,
    /// Frequencies for the sandwich CSV.
    #[arg(long, allow_hyphen_values = true, default_value = "0.05:0.45:0.025")]
    pub xi: String,
    /// Model-space dimension index; with --model, adds the model constant (Gaussian only).
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Absolute constant for the sinc-translate model.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Use the difference space V_{2N}.
    #[arg(long)]
    pub difference_space: bool,
    /// Write the sandwich CSV here instead of after the report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalArg {
    Random,
    Moda,
    Modb,
    Modc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeScale {
    /// Nodes are positions on the real line.
    Absolute,
    /// Nodes are multiples of the Nyquist step pi/c.
    Nyquist,
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long = "Q", default_value_t = 256)]
    pub q: usize,
    #[arg(long, default_value_t = 0.125)]
    pub eta: f64,
    #[arg(long = "n-t", default_value_t = 48)]
    pub n_t: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "random")]
    pub model: SignalArg,
    /// Degree (modc) or highest PSWF index (moda).
    #[arg(long = "N", default_value_t = 4)]
    pub n: usize,
    /// Translation nodes for modb.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub nodes: String,
    #[arg(long, value_enum, default_value = "absolute")]
    pub node_scale: NodeScale,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard deviation of complex white noise added to the trace.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Only use samples at t = 0 and report whether they identify the signal.
    #[arg(long)]
    pub t0_only: bool,
    /// CSV of the recovered spectrum (`xi,re,im`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PswfArgs {
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long = "N", default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RemezArgs {
    #[arg(long, value_enum, default_value = "fourierpoly")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long = "N", default_value_t = 4)]
    pub n: usize,
    /// |E|; defaults to the blind-spot set for --m and --eta.
    #[arg(long = "measE")]
    pub meas_e: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.125)]
    pub eta: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Random trials with N' <= N and random E.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum GapCommand {
    /// R, D^- and D^+ for frame bounds A <= B.
    Bound {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
    },
    /// Quadrature check of the energy bounds, CSV `x,energy,lower_ok,upper_ok`.
    Verify {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "-50:50:0.5")]
        x: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density and covering number of the Lu–Vetterli set.
    LuVetterli {
        #[arg(long, default_value_t = 3)]
        m: u64,
        #[arg(long, default_value_t = 5)]
        n: u64,
        /// Window `a:b`.
        #[arg(long, allow_hyphen_values = true, default_value = "0:10000")]
        window: String,
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        /// Also print the points.
        #[arg(long)]
        points: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum BlindspotCommand {
    /// E_tilde, E, |E| and the separation delta.
    Show {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0.125)]
        eta: f64,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<dynsamp::Error>() {
            return match e {
                dynsamp::Error::InvalidInput(_) => 2,
                dynsamp::Error::Numerical(_) => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    2
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DYNSAMP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("DYNSAMP_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            anyhow::bail!("DYNSAMP_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = init_threads().and_then(|_| match cli.command {
        Command::Condnum(a) => commands::condnum(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Roundtrip(a) => commands::roundtrip(&a),
        Command::Pswf(a) => commands::pswf(&a),
        Command::Remez(a) => commands::remez(&a),
        Command::Gap { command } => commands::gap(&command),
        Command::Blindspot { command } => commands::blindspot(&command),
    });
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
