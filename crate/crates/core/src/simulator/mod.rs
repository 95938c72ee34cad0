//! Discretised forward model `f -> {f_t(m pi k / c)}` on a coset-aligned
//! midpoint frequency grid, frame quotients, and per-frequency least-squares
//! reconstruction.

mod reconstruct;
mod signal;
mod trace;

pub use reconstruct::{reconstruct, ReconstructionResult, Region};
pub use signal::{synthesize, CosetFold, SignalModel, SignalSpectrum};
pub use trace::{
    add_noise, forward_samples, frame_quotient, frame_quotient_horizon, trace, trace_with_nodes,
    FrameQuotient, TraceData,
};
