//! Space-time ("dynamical") sampling of bandlimited functions evolving under a
//! diffusion semigroup.

pub mod error;
pub mod intervals;
pub mod kernel;
pub mod numeric;
pub mod output;
pub mod diffmatrix;
pub mod blindspot;
pub mod pswf;
pub mod simulator;
pub mod framebounds;
pub mod gapanalysis;

pub use error::{Error, Result};
pub use intervals::IntervalSet;
pub use kernel::{KernelFamily, KernelSpec};
