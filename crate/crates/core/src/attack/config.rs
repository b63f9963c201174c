use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How target-node chromosomes are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeAttackMode {
    /// Only links incident to the target are added.
    #[default]
    AddOnly,
    /// Incident links are added and deleted in equal numbers.
    Rewire,
}

impl FromStr for NodeAttackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add-only" | "add_only" | "add" => Ok(NodeAttackMode::AddOnly),
            "rewire" => Ok(NodeAttackMode::Rewire),
            other => Err(Error::config(
                "node_mode",
                format!("unknown mode `{other}`"),
            )),
        }
    }
}

/// Genetic algorithm parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Attenuation factor `c` in `exp(-c d')`.
    pub c: f64,
    /// Maximum budget θ.
    pub theta: usize,
    /// Target-node success threshold ε.
    pub epsilon: f64,
    pub seed: u64,
    pub node_mode: NodeAttackMode,
    /// Start every chromosome at β = θ. Non-equal crossover then can only
    /// trade equal gene counts, so the budget stays at θ.
    pub fixed_budget: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            generations: 200,
            crossover_rate: 0.6,
            mutation_rate: 0.1,
            c: 4.0,
            theta: 10,
            epsilon: 0.5,
            seed: 0,
            node_mode: NodeAttackMode::AddOnly,
            fixed_budget: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("population", "must be at least 2"));
        }
        for (key, rate) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
            ("epsilon", self.epsilon),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::config(key, format!("must be in [0, 1], got {rate}")));
            }
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::config("c", format!("must be > 0, got {}", self.c)));
        }
        if self.theta < 1 {
            return Err(Error::config("theta", "must be at least 1"));
        }
        Ok(())
    }
}

impl fmt::Display for NodeAttackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeAttackMode::AddOnly => f.write_str("add-only"),
            NodeAttackMode::Rewire => f.write_str("rewire"),
        }
    }
}
