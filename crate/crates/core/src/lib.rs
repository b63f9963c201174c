//! Evolutionary perturbation attacks on community detection.
//!
//! The crate finds small sets of link rewirings that disrupt the community
//! structure a detector reports, at three scales: the whole network, one
//! target community, or one target node. A genetic algorithm searches over
//! variable-length rewiring sets whose fitness combines an entropy-based
//! attack effect with an exponential penalty on degree change.
//!
//! Modules:
//! - [`graph`]: simple undirected graphs, link index spaces, distances,
//!   betweenness, loaders and a planted-partition generator.
//! - [`detect`]: Louvain, greedy modularity and label propagation.
//! - [`metrics`]: confusion entropies, degree distance, attenuation, NMI,
//!   ARI and the deception score.
//! - [`attack`]: the genetic algorithm and its operators.
//! - [`baselines`]: heuristic, alternative-fitness and randomized attacks.
//! - [`experiment`]: configuration, repeated runs and report emission.

pub mod attack;
pub mod baselines;
pub mod detect;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod partition;

pub use error::{Error, Result};
pub use graph::Graph;
pub use partition::Partition;
