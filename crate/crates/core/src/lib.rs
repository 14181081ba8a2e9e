//! Exclusivity-graph analysis of hybrid causal scenarios.
//!
//! A hybrid scenario splits its parties into an A-side, constrained by local
//! causality, and a B-side, constrained only by no-signaling (more generally
//! by the exclusivity principle). Events of the scenario form an exclusivity
//! graph whose edges remember which side made the two events exclusive.
//! From that graph this crate computes the bound chain
//!
//! ```text
//! alpha  <=  alpha_hat  <=  alpha_star        (exact rationals)
//! alpha  <=  theta                             (SDP, certified bracket)
//! ```
//!
//! for weighted event inequalities, classifies inequalities as genuine or
//! non-genuine, and evaluates explicit qubit strategies against them.

pub mod error;
pub mod fixtures;
pub mod formats;
pub mod graph;
pub mod invariants;
pub mod polytope;
pub mod quantum;
pub mod rational;
pub mod scenario;
pub mod search;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{EdgeTag, ExclusivityGraph, Side};
pub use invariants::{BoundReport, Classification, WeightedInequality};
pub use rational::Rational;
pub use scenario::{Event, HybridScenario, Party};
