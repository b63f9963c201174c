//! A resolved attack problem: the original graph, its gene spaces, the
//! scale's constraint sets and the fitness function.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Chromosome, GaConfig, NodeAttackMode};
use crate::detect::{louvain, modularity};
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_distances, apply_perturbation, edge_betweenness, Graph, LinkIndexSpace, Perturbation,
};
use crate::metrics::{
    attenuation, confusion, deception_score, degree_distance, global_entropies, target_confusion,
    target_entropies,
};
use crate::partition::Partition;

/// Attack scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackScale {
    Global,
    /// Index of a community in the surrogate's detection on the original
    /// graph.
    TargetCommunity(usize),
    TargetNode(usize),
}

impl AttackScale {
    pub fn name(&self) -> &'static str {
        match self {
            AttackScale::Global => "global",
            AttackScale::TargetCommunity(_) => "community",
            AttackScale::TargetNode(_) => "node",
        }
    }
}

/// What a chromosome's fitness measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Entropy-based attack effect times attenuation (global and
    /// target-community scales) or the success-gated degree ratio (target
    /// node).
    Entropy,
    /// Attenuated relative drop of the surrogate's modularity.
    ModularityDrop,
    /// Mean deception score over the baseline communities of two or more
    /// nodes.
    MeanDeception,
}

/// Scale-specific data resolved against the baseline detection.
#[derive(Debug, Clone)]
pub enum Target {
    Global,
    Community {
        index: usize,
        members: Vec<usize>,
        mask: Vec<bool>,
        internal_edges: usize,
    },
    Node {
        node: usize,
        degree: usize,
        home: usize,
    },
}

/// Candidate genes for one side of a chromosome, with mutation weights.
#[derive(Debug, Clone)]
pub struct GenePool {
    genes: Vec<usize>,
    weights: Vec<f64>,
    sampler: Option<WeightedIndex<f64>>,
}

impl GenePool {
    pub fn new(genes: Vec<usize>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(genes.len(), weights.len());
        let sampler = if genes.is_empty() {
            None
        } else {
            WeightedIndex::new(&weights).ok()
        };
        GenePool {
            genes,
            weights,
            sampler,
        }
    }

    pub fn genes(&self) -> &[usize] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn contains(&self, gene: usize) -> bool {
        self.genes.binary_search(&gene).is_ok()
    }

    /// Sampling probability of each gene, in pool order.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }

    /// Draws a gene with probability proportional to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        self.sampler.as_ref().map(|s| self.genes[s.sample(rng)])
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.genes.is_empty() {
            None
        } else {
            Some(self.genes[rng.gen_range(0..self.genes.len())])
        }
    }
}

/// Outcome of evaluating one chromosome.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub fitness: f64,
    pub perturbation: Perturbation,
    pub adversarial: Graph,
    pub detected: Partition,
    pub degree_distance: f64,
    /// Target-node success indicator δ.
    pub success: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct AttackContext<'g> {
    graph: &'g Graph,
    index: LinkIndexSpace,
    baseline: Partition,
    target: Target,
    add_pool: GenePool,
    del_pool: GenePool,
    config: GaConfig,
    objective: Objective,
    q_before: f64,
    deception_targets: Vec<Vec<usize>>,
}

impl<'g> AttackContext<'g> {
    /// Resolves `scale` against the surrogate detection of `graph` (Louvain
    /// seeded with `config.seed`) and precomputes the mutation weights.
    pub fn new(
        graph: &'g Graph,
        scale: AttackScale,
        config: &GaConfig,
        objective: Objective,
    ) -> Result<Self> {
        let baseline = louvain(graph, config.seed);
        Self::with_baseline(graph, scale, config, objective, baseline)
    }

    pub fn with_baseline(
        graph: &'g Graph,
        scale: AttackScale,
        config: &GaConfig,
        objective: Objective,
        baseline: Partition,
    ) -> Result<Self> {
        config.validate()?;
        if graph.edge_count() == 0 {
            return Err(Error::Infeasible("graph has no edges".into()));
        }
        if baseline.node_count() != graph.node_count() {
            return Err(Error::PartitionMismatch(
                "baseline partition does not cover the graph".into(),
            ));
        }
        let n = graph.node_count();
        let index = LinkIndexSpace::new(graph);
        let target = resolve_target(graph, scale, &baseline)?;
        let distances = all_pairs_distances(graph);
        let betweenness = edge_betweenness(graph);

        let nonedge = |u: usize, v: usize| index.nonedge_id(u, v);
        let (add_genes, del_genes): (Vec<usize>, Vec<usize>) = match &target {
            Target::Global => (
                (0..index.nonedge_space()).collect(),
                (0..graph.edge_count()).collect(),
            ),
            Target::Community { members, mask, .. } => {
                let mut adds = Vec::new();
                for &u in members {
                    for (v, &inside) in mask.iter().enumerate() {
                        if !inside {
                            if let Some(id) = nonedge(u, v) {
                                adds.push(id);
                            }
                        }
                    }
                }
                adds.sort_unstable();
                let dels = graph
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(u, v))| mask[u] && mask[v])
                    .map(|(i, _)| i)
                    .collect();
                (adds, dels)
            }
            Target::Node { node, .. } => {
                let t = *node;
                let mut adds: Vec<usize> = (0..n).filter_map(|v| nonedge(t, v)).collect();
                adds.sort_unstable();
                let dels = if config.node_mode == NodeAttackMode::Rewire {
                    let mut d: Vec<usize> = graph
                        .neighbors(t)
                        .iter()
                        .map(|&v| graph.edge_position(t, v).expect("neighbor edge"))
                        .collect();
                    d.sort_unstable();
                    d
                } else {
                    Vec::new()
                };
                (adds, dels)
            }
        };
        let add_weights = add_genes
            .iter()
            .map(|&id| {
                let (u, v) = index.nonedge_pair(id).expect("valid non-edge id");
                distances.get(u, v) as f64
            })
            .collect();
        let del_weights = del_genes.iter().map(|&id| 1.0 / betweenness[id]).collect();
        let add_pool = GenePool::new(add_genes, add_weights);
        let del_pool = GenePool::new(del_genes, del_weights);

        let ctx_q = if objective == Objective::ModularityDrop {
            modularity(graph, &baseline)?
        } else {
            0.0
        };
        let deception_targets = if objective == Objective::MeanDeception {
            baseline
                .communities()
                .into_iter()
                .filter(|c| c.len() >= 2)
                .collect()
        } else {
            Vec::new()
        };

        let ctx = AttackContext {
            graph,
            index,
            baseline,
            target,
            add_pool,
            del_pool,
            config: config.clone(),
            objective,
            q_before: ctx_q,
            deception_targets,
        };
        if ctx.max_budget() == 0 {
            return Err(Error::Infeasible(format!(
                "no admissible rewiring for {} scale (additions: {}, deletions: {})",
                scale.name(),
                ctx.add_pool.len(),
                ctx.del_pool.len()
            )));
        }
        Ok(ctx)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn index(&self) -> &LinkIndexSpace {
        &self.index
    }

    pub fn baseline(&self) -> &Partition {
        &self.baseline
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn add_pool(&self) -> &GenePool {
        &self.add_pool
    }

    pub fn del_pool(&self) -> &GenePool {
        &self.del_pool
    }

    /// Whether chromosomes carry deletion genes.
    pub fn rewiring(&self) -> bool {
        !matches!(
            (&self.target, self.config.node_mode),
            (Target::Node { .. }, NodeAttackMode::AddOnly)
        )
    }

    /// Largest budget the constraint sets admit, capped by θ.
    pub fn max_budget(&self) -> usize {
        let cap = if self.rewiring() {
            self.add_pool.len().min(self.del_pool.len())
        } else {
            self.add_pool.len()
        };
        cap.min(self.config.theta)
    }

    /// Â as a perturbation: add genes become additions, delete genes
    /// deletions.
    pub fn decode(&self, chromo: &Chromosome) -> Result<Perturbation> {
        let adds = chromo
            .add_genes()
            .iter()
            .map(|&g| {
                self.index.nonedge_pair(g).ok_or(Error::StaleGene {
                    gene: g as u64,
                    space: self.index.nonedge_space() as u64,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let dels = chromo
            .del_genes()
            .iter()
            .map(|&g| {
                self.index.edge_pair(g).ok_or(Error::StaleGene {
                    gene: g as u64,
                    space: self.index.edge_space() as u64,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Perturbation::new(adds, dels))
    }

    /// Inverse of [`decode`](Self::decode): the chromosome whose genes are
    /// the perturbation's links.
    pub fn encode(&self, pert: &Perturbation) -> Result<Chromosome> {
        let add = pert
            .additions
            .iter()
            .map(|&(u, v)| {
                self.index.nonedge_id(u, v).ok_or_else(|| {
                    Error::InvalidPerturbation(format!("({u}, {v}) is already a link"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let del = pert
            .deletions
            .iter()
            .map(|&(u, v)| {
                self.index
                    .edge_id(u, v)
                    .ok_or_else(|| Error::InvalidPerturbation(format!("({u}, {v}) is not a link")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Chromosome::new(add, del))
    }

    /// Checks every chromosome invariant: budget in `[1, θ]`, no duplicate
    /// genes, equal side lengths when rewiring, genes inside the scale's
    /// constraint sets.
    pub fn validate(&self, chromo: &Chromosome) -> Result<()> {
        let beta = chromo.budget();
        if beta < 1 || beta > self.config.theta {
            return Err(Error::InvalidArgument(format!(
                "budget {beta} outside [1, {}]",
                self.config.theta
            )));
        }
        if self.rewiring() {
            if chromo.del_genes().len() != beta {
                return Err(Error::InvalidArgument(format!(
                    "{} additions but {} deletions",
                    beta,
                    chromo.del_genes().len()
                )));
            }
        } else if !chromo.del_genes().is_empty() {
            return Err(Error::InvalidArgument(
                "add-only chromosome has deletions".into(),
            ));
        }
        for genes in [chromo.add_genes(), chromo.del_genes()] {
            if genes.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument("duplicate gene".into()));
            }
        }
        if let Some(&g) = chromo
            .add_genes()
            .iter()
            .find(|&&g| !self.add_pool.contains(g))
        {
            return Err(Error::InvalidArgument(format!(
                "addition gene {g} outside constraint set"
            )));
        }
        if let Some(&g) = chromo
            .del_genes()
            .iter()
            .find(|&&g| !self.del_pool.contains(g))
        {
            return Err(Error::InvalidArgument(format!(
                "deletion gene {g} outside constraint set"
            )));
        }
        Ok(())
    }

    /// Fitness of `chromo` with the surrogate's view of the adversarial
    /// graph.
    pub fn evaluate(&self, chromo: &Chromosome) -> Result<Evaluation> {
        let perturbation = self.decode(chromo)?;
        let adversarial = apply_perturbation(self.graph, &perturbation)?;
        let detected = louvain(&adversarial, self.config.seed);
        let d = degree_distance(&self.graph.degrees(), &adversarial.degrees())?;
        let c = self.config.c;
        let mut success = None;

        let fitness = match self.objective {
            Objective::Entropy => match &self.target {
                Target::Global => {
                    let m = confusion(&self.baseline, &detected)?;
                    let (e_r, e_c) = global_entropies(&m);
                    let psi = attenuation(d / self.graph.edge_count() as f64, c)?;
                    psi * (normalized(e_r, m.cols()) + normalized(e_c, m.rows()))
                }
                Target::Community {
                    members,
                    internal_edges,
                    ..
                } => {
                    let t = target_confusion(members, &detected)?;
                    let (e_r, e_c) = target_entropies(&t, self.graph.node_count())?;
                    let psi = attenuation(d / *internal_edges as f64, c)?;
                    psi * (e_r + normalized(e_c, detected.community_count()))
                }
                Target::Node { node, degree, home } => {
                    let ok = node_attack_succeeds(
                        &self.baseline,
                        *home,
                        &detected,
                        *node,
                        self.config.epsilon,
                    );
                    success = Some(ok);
                    if ok {
                        *degree as f64 / (*degree + chromo.budget()) as f64
                    } else {
                        0.0
                    }
                }
            },
            Objective::ModularityDrop => {
                let q_after = modularity(&adversarial, &detected)?;
                let drop = (self.q_before - q_after).max(0.0);
                let rel = if self.q_before == 0.0 {
                    drop
                } else {
                    drop / self.q_before.abs()
                };
                attenuation(d / self.graph.edge_count() as f64, c)? * rel
            }
            Objective::MeanDeception => {
                if self.deception_targets.is_empty() {
                    0.0
                } else {
                    let mut total = 0.0;
                    for members in &self.deception_targets {
                        total += deception_score(members, &detected, &adversarial)?;
                    }
                    total / self.deception_targets.len() as f64
                }
            }
        };
        Ok(Evaluation {
            fitness,
            perturbation,
            adversarial,
            detected,
            degree_distance: d,
            success,
        })
    }
}

/// Entropy divided by its upper bound `log2(k)`; zero when `k <= 1`.
fn normalized(entropy: f64, k: usize) -> f64 {
    if k <= 1 {
        0.0
    } else {
        (entropy / (k as f64).log2()).min(1.0)
    }
}

/// δ: the share of the node's new community that came from its old one is
/// below ε.
pub fn node_attack_succeeds(
    before: &Partition,
    home: usize,
    after: &Partition,
    node: usize,
    epsilon: f64,
) -> bool {
    let new = after.community_of(node);
    let mut size = 0usize;
    let mut shared = 0usize;
    for (v, &c) in after.assignment().iter().enumerate() {
        if c == new {
            size += 1;
            if before.community_of(v) == home {
                shared += 1;
            }
        }
    }
    (shared as f64 / size as f64) < epsilon
}

fn resolve_target(graph: &Graph, scale: AttackScale, baseline: &Partition) -> Result<Target> {
    match scale {
        AttackScale::Global => Ok(Target::Global),
        AttackScale::TargetCommunity(index) => {
            if index >= baseline.community_count() {
                return Err(Error::Infeasible(format!(
                    "community {index} does not exist ({} detected)",
                    baseline.community_count()
                )));
            }
            let members: Vec<usize> = (0..graph.node_count())
                .filter(|&v| baseline.community_of(v) == index)
                .collect();
            let mut mask = vec![false; graph.node_count()];
            for &v in &members {
                mask[v] = true;
            }
            let internal_edges = graph.internal_edge_count(&mask);
            if internal_edges == 0 {
                return Err(Error::Infeasible(format!(
                    "community {index} has no internal links"
                )));
            }
            Ok(Target::Community {
                index,
                members,
                mask,
                internal_edges,
            })
        }
        AttackScale::TargetNode(node) => {
            if node >= graph.node_count() {
                return Err(Error::Infeasible(format!("node {node} does not exist")));
            }
            let degree = graph.degree(node);
            if degree == 0 {
                return Err(Error::Infeasible(format!("node {node} is isolated")));
            }
            Ok(Target::Node {
                node,
                degree,
                home: baseline.community_of(node),
            })
        }
    }
}
