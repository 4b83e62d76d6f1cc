//! Isotropic positive definite functions on spheres `S^d` and on the Hilbert
//! sphere `S^inf`.
//!
//! * [`sequence`]: Schoenberg coefficient models with certified tail bounds.
//! * [`kernel`]: Gegenbauer and cosine-power series evaluation.
//! * [`deriv`]: exact derivative coefficients of `cos^j` and a symbolic oracle.
//! * [`asymptotics`]: leading constants and binomial moment sums.
//! * [`transform`]: circle coefficients and smoothness classification.
//! * [`verify`]: end-to-end check suites used by the CLI.

pub mod asymptotics;
pub mod cli;
pub mod deriv;
pub mod error;
pub mod exact;
pub mod kernel;
pub mod sequence;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{KernelSpec, Sphere, UnitVector};
pub use sequence::{SequenceModel, TailBound};
