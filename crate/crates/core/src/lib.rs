//! Decoherence and localization of a particle tunnelling in a symmetric
//! double well, reduced to a two-level open quantum system.
//!
//! Three mutually cross-validating propagation back ends (closed-form
//! `analytic`, deterministic `dynamics::evolve_rk4` / `dynamics::evolve_exact`,
//! stochastic `trajectories`) plus a first-principles `doublewell`
//! eigensolver that supplies the tunnelling frequency omega from the lowest
//! doublet splitting. hbar = 1 throughout; all rates and omega share
//! inverse-time units.

pub mod analytic;
pub mod doublewell;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod qstate;
pub mod trajectories;

pub use error::{Error, Result};
pub use qstate::{BlochVector, DensityMatrix, PureStateAngles};
pub use dynamics::{Backend, ChannelKind, ChannelSpec, ModelSpec, TimeSeries};
