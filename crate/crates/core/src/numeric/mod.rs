//! Small numerical building blocks shared by the modules.

pub mod dd;
pub mod jacobi;
pub mod quad;

pub use dd::Dd;
