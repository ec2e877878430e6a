//! Maximum Independent Set solvers for unit-disk lattice graphs.
//!
//! * [`graph`]: instance generation (unit-disk lattices, G(n, m), rewiring)
//!   and the exhaustive census oracle.
//! * [`sla`]: exact sweeping-line dynamic program with degeneracy counting.
//! * [`bnb`]: exact branch and bound with clique-cover bounds, plus an LP
//!   exporter for external ILP solvers.
//! * [`mcmc`]: feasible-space simulated annealing and parallel tempering.
//! * [`metrics`]: hardness, R99/TTS99, percentile summaries and fits.
//! * [`bench`]: experiment grids, CSV output and fitting front-ends.

pub mod bench;
pub mod bnb;
pub mod clock;
pub mod error;
pub mod graph;
pub mod io;
pub mod mcmc;
pub mod metrics;
pub mod rng;
pub mod sla;

pub use error::{Error, Result};
