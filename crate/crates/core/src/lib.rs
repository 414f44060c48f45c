//! Robust DEA efficiency scoring.
//!
//! Given a dataset of decision-making units (DMUs) with some variables whose
//! inclusion in the efficiency model is uncertain, this crate solves the
//! radial envelopment LP for every subset of the candidate variables and
//! aggregates the per-subset scores into expected values and variances under
//! several probability models on subsets (expert Bernoulli probabilities,
//! maximum entropy, independent Beta priors, and a common uniform prior).
//!
//! The crate is organized around the lifecycle of a scoring run:
//!
//! * [`instances`] loads or generates a [`dea::Dataset`] (a small tennis
//!   corpus is bundled for reproducible runs),
//! * [`dea`] builds the envelopment LP for one DMU and one subset mask,
//! * [`lp`] solves it (primal simplex cold, dual simplex warm-started),
//! * [`engine`] walks all `2^q` subsets, either exhaustively or with a
//!   pruned, warm-started enumeration tree,
//! * [`scores`] turns the streamed `(mask, score)` events into expected
//!   scores and variances per selection model,
//! * [`runner`] wires the above together per DMU and across a dataset.

pub mod dea;
pub mod engine;
pub mod instances;
pub mod lp;
pub mod mask;
pub mod numeric;
pub mod runner;
pub mod scores;

pub use dea::{Dataset, ModelSpec, ReturnsToScale, VariableDef};
pub use engine::{EnumerationStats, ScoreSink};
pub use lp::{LinearProgram, LpSolution, SolveStatus, SolverOptions};
pub use mask::SubsetMask;
pub use scores::SelectionModel;
