use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::context::{AttackContext, AttackScale, Objective, Target};
use super::operators::{crossover_nonequal, initialize_population, mutate, roulette_select};
use super::report::{assess, AttackTarget, DetectorMetrics};
use super::{Chromosome, GaConfig};
use crate::detect::Detector;
use crate::error::Result;
use crate::graph::{Graph, Perturbation};
use crate::partition::Partition;

/// Per-generation summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Best fitness seen so far.
    pub best_fitness: f64,
    pub best_budget: usize,
    pub mean_fitness: f64,
    pub mean_budget: f64,
}

/// The evaluated population of one generation, handed to observers.
pub struct GenerationView<'a> {
    pub generation: usize,
    pub population: &'a [Chromosome],
    pub fitness: &'a [f64],
    pub elite: &'a Chromosome,
    pub elite_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct AttackReport {
    pub scale: AttackScale,
    pub best: Chromosome,
    pub best_fitness: f64,
    pub perturbation: Perturbation,
    pub adversarial: Graph,
    /// Surrogate detection on the original graph.
    pub baseline: Partition,
    /// Surrogate detection on the adversarial graph.
    pub detected: Partition,
    pub degree_distance: f64,
    pub history: Vec<GenerationStats>,
    /// Target-node success δ under the surrogate.
    pub success: Option<bool>,
    /// Added links as a percentage of the target node's original degree.
    pub degree_increment_pct: Option<f64>,
    pub metrics: Vec<DetectorMetrics>,
}

impl AttackReport {
    pub fn budget(&self) -> usize {
        self.best.budget()
    }
}

/// A configured genetic search over one attack context.
pub struct Engine<'c, 'g> {
    ctx: &'c AttackContext<'g>,
    cache: HashMap<Chromosome, f64>,
    parallel: bool,
}

impl<'c, 'g> Engine<'c, 'g> {
    pub fn new(ctx: &'c AttackContext<'g>) -> Self {
        Engine {
            ctx,
            cache: HashMap::new(),
            parallel: true,
        }
    }

    /// Evaluates on the calling thread only. Results are identical either
    /// way.
    pub fn serial(mut self) -> Self {
        self.parallel = false;
        self
    }

    fn fitness_of(&mut self, population: &[Chromosome]) -> Result<Vec<f64>> {
        let mut fresh: Vec<&Chromosome> = population
            .iter()
            .filter(|c| !self.cache.contains_key(*c))
            .collect();
        fresh.sort_unstable();
        fresh.dedup();
        let ctx = self.ctx;
        let scores: Vec<Result<f64>> = if self.parallel {
            fresh
                .par_iter()
                .map(|c| ctx.evaluate(c).map(|e| e.fitness))
                .collect()
        } else {
            fresh
                .iter()
                .map(|c| ctx.evaluate(c).map(|e| e.fitness))
                .collect()
        };
        for (c, s) in fresh.into_iter().zip(scores) {
            self.cache.insert(c.clone(), s?);
        }
        Ok(population.iter().map(|c| self.cache[c]).collect())
    }

    /// Runs the generational loop and returns the best chromosome ever seen,
    /// its fitness and the per-generation history.
    pub fn run(
        mut self,
        mut observer: impl FnMut(&GenerationView<'_>),
    ) -> Result<(Chromosome, f64, Vec<GenerationStats>)> {
        let cfg = self.ctx.config().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut population = initialize_population(self.ctx, &mut rng)?;
        let mut elite: Option<(Chromosome, f64)> = None;
        let mut history = Vec::with_capacity(cfg.generations);
        let rewiring = self.ctx.rewiring();
        let generations = cfg.generations.max(1);

        for generation in 0..generations {
            let fitness = self.fitness_of(&population)?;
            for (c, &f) in population.iter().zip(&fitness) {
                let better = match &elite {
                    None => true,
                    Some((e, ef)) => f > *ef || (f == *ef && c.budget() < e.budget()),
                };
                if better {
                    elite = Some((c.clone(), f));
                }
            }
            let (best, best_fitness) = elite.clone().expect("population is non-empty");
            let count = population.len() as f64;
            history.push(GenerationStats {
                generation,
                best_fitness,
                best_budget: best.budget(),
                mean_fitness: fitness.iter().sum::<f64>() / count,
                mean_budget: population.iter().map(|c| c.budget() as f64).sum::<f64>() / count,
            });
            observer(&GenerationView {
                generation,
                population: &population,
                fitness: &fitness,
                elite: &best,
                elite_fitness: best_fitness,
            });
            if generation + 1 == generations {
                break;
            }

            let parents = roulette_select(&fitness, population.len() - 1, &mut rng);
            let mut next: Vec<Chromosome> =
                parents.iter().map(|&i| population[i].clone()).collect();
            for pair in next.chunks_mut(2) {
                if let [x, y] = pair {
                    if rng.gen_bool(cfg.crossover_rate) {
                        let (cx, cy) = crossover_nonequal(x, y, cfg.theta, rewiring, &mut rng);
                        *x = cx;
                        *y = cy;
                    }
                }
            }
            for c in next.iter_mut() {
                *c = mutate(
                    c,
                    self.ctx.add_pool(),
                    self.ctx.del_pool(),
                    cfg.mutation_rate,
                    &mut rng,
                );
            }
            next.insert(0, best);
            population = next;
        }
        let (best, best_fitness) = elite.expect("population is non-empty");
        Ok((best, best_fitness, history))
    }
}

/// Runs the attack with the entropy fitness and evaluates the result on
/// every detector.
pub fn run_epa(graph: &Graph, scale: AttackScale, config: &GaConfig) -> Result<AttackReport> {
    run_attack(graph, scale, config, Objective::Entropy, None, |_| {})
}

/// Runs a genetic attack with the given objective. `ground_truth`, when
/// present, is used for the `_gt` metrics.
pub fn run_attack(
    graph: &Graph,
    scale: AttackScale,
    config: &GaConfig,
    objective: Objective,
    ground_truth: Option<&Partition>,
    observer: impl FnMut(&GenerationView<'_>),
) -> Result<AttackReport> {
    let ctx = AttackContext::new(graph, scale, config, objective)?;
    report_for(&ctx, Engine::new(&ctx).run(observer)?, ground_truth)
}

pub(crate) fn report_for(
    ctx: &AttackContext<'_>,
    (best, best_fitness, history): (Chromosome, f64, Vec<GenerationStats>),
    ground_truth: Option<&Partition>,
) -> Result<AttackReport> {
    let eval = ctx.evaluate(&best)?;
    let target = match ctx.target() {
        Target::Global => AttackTarget::Whole,
        Target::Community { members, .. } => AttackTarget::Members(members.clone()),
        Target::Node { node, .. } => AttackTarget::Node(*node),
    };
    let cfg = ctx.config();
    let metrics = assess(
        ctx.graph(),
        &eval.adversarial,
        &target,
        &Detector::ALL,
        cfg.seed,
        ground_truth,
        cfg.epsilon,
    )?;
    let degree_increment_pct = match ctx.target() {
        Target::Node { degree, .. } => Some(100.0 * best.budget() as f64 / *degree as f64),
        _ => None,
    };
    let scale = match ctx.target() {
        Target::Global => AttackScale::Global,
        Target::Community { index, .. } => AttackScale::TargetCommunity(*index),
        Target::Node { node, .. } => AttackScale::TargetNode(*node),
    };
    Ok(AttackReport {
        scale,
        best,
        best_fitness,
        perturbation: eval.perturbation,
        adversarial: eval.adversarial,
        baseline: ctx.baseline().clone(),
        detected: eval.detected,
        degree_distance: eval.degree_distance,
        history,
        success: eval.success,
        degree_increment_pct,
        metrics,
    })
}
