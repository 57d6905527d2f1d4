//! Block-matching motion estimation with a harmony-search core.
//!
//! The crate pairs an exhaustive-search quality reference with fast block
//! matchers (three-step search, diamond search, and harmony search with
//! archive-backed fitness estimation), plus the metrics and sequence I/O
//! needed to benchmark them against each other. The `mebench` binary wraps
//! it all in an `estimate` / `compare` CLI.
//!
//! Seeded runs are deterministic: per-block random substreams are derived
//! from the run seed, so outputs are identical regardless of thread count.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod error;
pub mod fitness_approx;
pub mod frame;
pub mod harmony;
pub mod hsbm;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod rng;

pub use error::{Error, Result};
pub use frame::{BlockPosition, Frame, MotionField, MotionVector, SearchWindow};
pub use hsbm::{BlockEstimate, EstimationReport, HsBmConfig};
pub use matching::{SadValue, SearchOutcome};
