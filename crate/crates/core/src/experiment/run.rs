use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::targets::{select_community, select_node};
use super::{ExperimentConfig, Method, ScaleKind};
use crate::attack::{
    assess, run_attack, AttackScale, AttackTarget, DetectorMetrics, GaConfig, Objective,
};
use crate::baselines::{attack_ab, attack_ad, attack_dr, attack_dw, random_rewiring};
use crate::detect::{louvain, Detector};
use crate::error::{Error, Result};
use crate::graph::{apply_perturbation, Dataset, Graph};

/// One (repetition, detector) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub scale: String,
    pub detector: String,
    pub seed: u64,
    pub budget: Option<usize>,
    /// Against the detector's output on the original graph.
    pub nmi: Option<f64>,
    pub ari: Option<f64>,
    pub h: Option<f64>,
    pub delta: Option<bool>,
    pub degree_increment_pct: Option<f64>,
    pub walltime_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmi_gt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ari_gt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Result of one attack run, before per-detector evaluation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub adversarial: Graph,
    pub budget: usize,
    pub target: AttackTarget,
    /// Genetic fitness of the chosen chromosome, for genetic methods.
    pub fitness: Option<f64>,
    pub degree_increment_pct: Option<f64>,
}

/// Runs the configured attack once with `seed` and `budget`.
pub fn run_once(
    config: &ExperimentConfig,
    graph: &Graph,
    budget: usize,
    seed: u64,
) -> Result<RunOutcome> {
    let attack = &config.attack;
    let ga = GaConfig {
        seed,
        theta: budget,
        ..config.ga.clone()
    };
    let scale = match (attack.scale, attack.target) {
        (ScaleKind::Global, _) => AttackScale::Global,
        (ScaleKind::Community, Some(sel)) => {
            AttackScale::TargetCommunity(select_community(&louvain(graph, seed), sel)?)
        }
        (ScaleKind::Node, Some(sel)) => AttackScale::TargetNode(select_node(graph, sel)?),
        (scale, None) => {
            return Err(Error::config(
                "target",
                format!("{scale} attacks need a target"),
            ))
        }
    };
    let genetic = |objective| -> Result<RunOutcome> {
        let report = run_attack(graph, scale, &ga, objective, None, |_| {})?;
        let target = match scale {
            AttackScale::Global => AttackTarget::Whole,
            AttackScale::TargetCommunity(i) => AttackTarget::Members(
                (0..graph.node_count())
                    .filter(|&v| report.baseline.community_of(v) == i)
                    .collect(),
            ),
            AttackScale::TargetNode(t) => AttackTarget::Node(t),
        };
        Ok(RunOutcome {
            budget: report.budget(),
            fitness: Some(report.best_fitness),
            degree_increment_pct: report.degree_increment_pct,
            adversarial: report.adversarial,
            target,
        })
    };
    let fixed = |pert| -> Result<RunOutcome> {
        Ok(RunOutcome {
            adversarial: apply_perturbation(graph, &pert)?,
            budget,
            target: AttackTarget::Whole,
            fitness: None,
            degree_increment_pct: None,
        })
    };
    match attack.method {
        Method::Epa => genetic(Objective::Entropy),
        Method::Aq => genetic(Objective::ModularityDrop),
        Method::As => genetic(Objective::MeanDeception),
        Method::Ab => fixed(attack_ab(graph, budget)?),
        Method::Ad => fixed(attack_ad(graph, budget)?),
        Method::Random => fixed(random_rewiring(graph, budget, seed)?),
        Method::Dw => {
            let AttackScale::TargetCommunity(i) = scale else {
                unreachable!("validated scale")
            };
            let baseline = louvain(graph, seed);
            let members: Vec<usize> = (0..graph.node_count())
                .filter(|&v| baseline.community_of(v) == i)
                .collect();
            let pert = attack_dw(graph, &members, budget, seed)?;
            Ok(RunOutcome {
                adversarial: apply_perturbation(graph, &pert)?,
                budget,
                target: AttackTarget::Members(members),
                fitness: None,
                degree_increment_pct: None,
            })
        }
        Method::Dr => {
            let AttackScale::TargetNode(t) = scale else {
                unreachable!("validated scale")
            };
            let r = attack_dr(graph, t, Detector::Louvain, ga.epsilon, budget, seed)?;
            Ok(RunOutcome {
                budget: r.budget(),
                degree_increment_pct: Some(r.degree_increment_pct),
                adversarial: r.adversarial,
                target: AttackTarget::Node(t),
                fitness: None,
            })
        }
    }
}

/// Runs every repetition and evaluates each on every configured detector.
/// A failed repetition yields rows carrying only the error message.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let dataset = config.dataset.load()?;
    run_experiment_on(config, &dataset)
}

pub fn run_experiment_on(config: &ExperimentConfig, dataset: &Dataset) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let graph = &dataset.graph;
    let budget = config.resolve_budget(graph.edge_count());
    let name = config.dataset.display_name();
    info!(
        "{name}: n={}, m={}, method={}, scale={}, budget={budget}, repetitions={}",
        graph.node_count(),
        graph.edge_count(),
        config.attack.method,
        config.attack.scale,
        config.repetitions
    );
    let seeds: Vec<u64> = (0..config.repetitions as u64)
        .map(|r| config.base_seed + r)
        .collect();
    let per_seed: Vec<Result<Vec<ResultRow>>> = seeds
        .par_iter()
        .map(|&seed| {
            let row = |detector: Detector| ResultRow {
                dataset: name.clone(),
                method: config.attack.method.to_string(),
                scale: config.attack.scale.to_string(),
                detector: detector.to_string(),
                seed,
                budget: None,
                nmi: None,
                ari: None,
                h: None,
                delta: None,
                degree_increment_pct: None,
                walltime_s: None,
                nmi_gt: None,
                ari_gt: None,
                error: None,
            };
            let start = Instant::now();
            let outcome = match run_once(config, graph, budget, seed) {
                Ok(o) => o,
                Err(
                    e @ (Error::Infeasible(_) | Error::Config { .. } | Error::InvalidArgument(_)),
                ) => {
                    warn!("seed {seed}: {e}");
                    return Ok(config
                        .detectors
                        .iter()
                        .map(|&d| ResultRow {
                            error: Some(e.to_string()),
                            ..row(d)
                        })
                        .collect());
                }
                Err(e) => return Err(e),
            };
            let walltime = (!config.omit_walltime).then(|| start.elapsed().as_secs_f64());
            let metrics = assess(
                graph,
                &outcome.adversarial,
                &outcome.target,
                &config.detectors,
                seed,
                dataset.ground_truth.as_ref(),
                config.ga.epsilon,
            )?;
            Ok(metrics
                .into_iter()
                .map(|m: DetectorMetrics| ResultRow {
                    budget: Some(outcome.budget),
                    nmi: Some(m.nmi_det),
                    ari: Some(m.ari_det),
                    h: m.h,
                    delta: m.delta,
                    degree_increment_pct: outcome.degree_increment_pct,
                    walltime_s: walltime,
                    nmi_gt: m.nmi_gt,
                    ari_gt: m.ari_gt,
                    ..row(m.detector)
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Orders rows by (seed, detector).
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        let rank = |d: &str| d.parse::<Detector>().ok();
        (a.seed, rank(&a.detector), &a.detector).cmp(&(b.seed, rank(&b.detector), &b.detector))
    });
}
