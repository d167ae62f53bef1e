//! Graph-building games for attacking graph-theory conjectures with
//! reinforcement learning.
//!
//! The crate bundles the pieces a search needs:
//!
//! - [`graph`]: fixed-size labeled graphs, the canonical edge enumeration, and [`g6`] I/O;
//! - [`invariants`]: Laplacian and adjacency spectra (Jacobi), maximum matching (blossom);
//! - [`rewards`]: conjectures in the normal form `f(G) <= 0` and sparse/incremental reward adapters;
//! - [`env`]: the Linear, Local, Global and Flip games behind one step/reset contract;
//! - [`search`]: random search and the cross-entropy method with a small MLP policy;
//! - [`dataset`]: random-graph generators, Laplacian labels and WL-1 screening.

pub mod dataset;
pub mod env;
pub mod error;
pub mod g6;
pub mod graph;
pub mod invariants;
pub mod rewards;
pub mod search;

pub use env::{Env, EnvConfig, EnvState, Game, Observation, StepOutcome};
pub use error::{Error, Result};
pub use graph::{EdgeIndex, EdgeOrder, EdgeTable, Graph, InitialGraph};
pub use invariants::{MatchingResult, Spectrum};
pub use rewards::{Comparison, Conjecture, RewardAdapter, RewardMode, Verdict};
