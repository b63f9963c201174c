//! The genetic attack: chromosome encoding, fitness, operators and the
//! generational loop.

mod chromosome;
mod config;
mod context;
mod engine;
mod operators;
mod report;

pub use chromosome::Chromosome;
pub use config::{GaConfig, NodeAttackMode};
pub use context::{
    node_attack_succeeds, AttackContext, AttackScale, Evaluation, GenePool, Objective, Target,
};
pub use engine::{run_attack, run_epa, AttackReport, Engine, GenerationStats, GenerationView};
pub use operators::{
    crossover_nonequal, initialize_population, mutate, roulette_select, selection_probabilities,
    CROSSOVER_RETRIES,
};
pub use report::{assess, AttackTarget, DetectorMetrics};
