//! Constrained multi-objective simulated annealing.
//!
//! The crate is organised bottom-up:
//!
//! - [`pareto`]: dominance, amount of domination, the non-dominated archive
//!   and non-dominated sorting.
//! - [`geometry`]: the cylinder kernel used by the configuration problem.
//! - [`problems`]: SRN, TNK and the six-cylinder configuration problem, all
//!   mapped to combined objective vectors (objectives followed by
//!   constraint violations).
//! - [`annealer`]: MOSA/R (both re-seed variants) and the AMOSA baseline.
//! - [`metrics`]: cardinality, IGD, hypervolume, coverage, minimal spacing
//!   and accounted proportion, plus grid reference fronts.
//! - [`harness`]: result files, experiment sweeps and summary tables used by
//!   the `mosar` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annealer;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod pareto;
pub mod problems;

pub use error::{Error, Result};
