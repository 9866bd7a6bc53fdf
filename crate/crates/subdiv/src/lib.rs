//! Corner-cutting subdivision schemes with a harmonic-mean limiter.
//!
//! The library implements four refinement schemes on finite sampled
//! curves — the linear shifted four-point scheme, Chaikin's scheme, the
//! harmonic-mean nonlinear scheme and its arithmetic-mean twin — plus
//! analysis harnesses that measure contraction, Hoelder regularity,
//! approximation order, overshoot behaviour near jumps, and stability
//! under data perturbation. The `subdiv` binary exposes all of it as
//! CSV/JSON-producing subcommands.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod grid;
pub mod pph;
pub mod samplers;
pub mod schemes;

pub use error::{Error, Result};
pub use grid::{BoundaryPolicy, SampledCurve};
pub use schemes::SchemeKind;
