//! Exact perfect-matching counting for r-uniform hypergraphs, together with
//! the random processes, property evaluators, entropy decompositions and
//! tail bounds used to study when a random r-graph acquires a perfect
//! matching.
//!
//! Everything that can be decided exactly is decided exactly: matching
//! counts are arbitrary precision, process increments and weight ratios are
//! rationals, and floating point only enters when a logarithm is taken.
//!
//! Module map:
//!
//! - [`hypergraph`]: r-graphs on at most 63 vertices stored as bitmasks.
//! - [`pm`]: subset-DP matching counter, brute-force enumerator, weights.
//! - [`processes`]: deletion trace, hitting-time process, label coupling.
//! - [`properties`]: finite-tolerance versions of properties A through V.
//! - [`entropy`]: vertex entropies, Shearer, the random-ordering tables.
//! - [`concentration`]: Chernoff-type and Azuma-type bounds, MC tail checks.

pub mod concentration;
pub mod entropy;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod pm;
pub mod processes;
pub mod properties;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use hypergraph::{DegreeStats, Hypergraph, RSet};
pub use pm::{BigCount, Engine, WeightScope, WeightSpectrum};
