//! Comparison attacks: greedy centrality heuristics, genetic attacks with
//! other fitness functions, and randomized baselines.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attack::{
    node_attack_succeeds, run_attack, AttackReport, AttackScale, GaConfig, Objective,
};
use crate::detect::Detector;
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_distances, apply_perturbation, edge_betweenness, ordered, pair_count, Graph,
    LinkIndexSpace, Perturbation,
};
use crate::partition::Partition;

type Pair = (usize, usize);

fn check_budget(graph: &Graph, beta: usize) -> Result<()> {
    if beta == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let nonedges = pair_count(graph.node_count()) - graph.edge_count();
    if beta > graph.edge_count() || beta > nonedges {
        return Err(Error::Infeasible(format!(
            "budget {beta} exceeds available links ({} edges, {nonedges} non-edges)",
            graph.edge_count()
        )));
    }
    Ok(())
}

/// Greedy rewiring: each step deletes the original edge maximizing
/// `delete_key` on the current graph and adds the original non-edge of
/// largest current distance. Ties go to the lowest link index.
fn greedy_rewire(
    graph: &Graph,
    beta: usize,
    delete_key: impl Fn(&Graph) -> Vec<f64>,
) -> Result<Perturbation> {
    check_budget(graph, beta)?;
    let n = graph.node_count();
    let mut current = graph.clone();
    let mut deleted: HashSet<Pair> = HashSet::new();
    let mut added: HashSet<Pair> = HashSet::new();
    for _ in 0..beta {
        let keys = delete_key(&current);
        let mut best_del: Option<(Pair, f64)> = None;
        for (&(u, v), &k) in current.edges().iter().zip(&keys) {
            if added.contains(&(u, v)) {
                continue;
            }
            if best_del.is_none_or(|(_, b)| k > b) {
                best_del = Some(((u, v), k));
            }
        }
        let distances = all_pairs_distances(&current);
        let mut best_add: Option<(Pair, u32)> = None;
        for u in 0..n {
            for v in u + 1..n {
                if current.has_edge(u, v) || deleted.contains(&(u, v)) {
                    continue;
                }
                let d = distances.get(u, v);
                if best_add.is_none_or(|(_, b)| d > b) {
                    best_add = Some(((u, v), d));
                }
            }
        }
        let (Some((del, _)), Some((add, _))) = (best_del, best_add) else {
            return Err(Error::Infeasible(
                "graph exhausted before budget was spent".into(),
            ));
        };
        deleted.insert(del);
        added.insert(add);
        current = apply_perturbation(&current, &Perturbation::new(vec![add], vec![del]))?;
    }
    Ok(Perturbation::new(
        added.into_iter().collect(),
        deleted.into_iter().collect(),
    ))
}

/// A_B: delete the highest-betweenness edge, add the farthest pair.
pub fn attack_ab(graph: &Graph, beta: usize) -> Result<Perturbation> {
    greedy_rewire(graph, beta, edge_betweenness)
}

/// A_D: delete the edge with the largest endpoint degree sum, add the
/// farthest pair.
pub fn attack_ad(graph: &Graph, beta: usize) -> Result<Perturbation> {
    greedy_rewire(graph, beta, |g| {
        g.edges()
            .iter()
            .map(|&(u, v)| (g.degree(u) + g.degree(v)) as f64)
            .collect()
    })
}

/// A_Q: the genetic attack with an attenuated relative modularity drop as
/// fitness.
pub fn attack_aq(graph: &Graph, config: &GaConfig) -> Result<AttackReport> {
    run_attack(
        graph,
        AttackScale::Global,
        config,
        Objective::ModularityDrop,
        None,
        |_| {},
    )
}

/// A_S: the genetic attack with the mean deception score over all detected
/// communities as fitness.
pub fn attack_as(graph: &Graph, config: &GaConfig) -> Result<AttackReport> {
    run_attack(
        graph,
        AttackScale::Global,
        config,
        Objective::MeanDeception,
        None,
        |_| {},
    )
}

/// Uniformly random rewiring: `beta` edges deleted and `beta` non-edges
/// added.
pub fn random_rewiring(graph: &Graph, beta: usize, seed: u64) -> Result<Perturbation> {
    check_budget(graph, beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = LinkIndexSpace::new(graph);
    let dels = sample(&mut rng, index.edge_space(), beta)
        .into_iter()
        .map(|i| graph.edges()[i])
        .collect();
    let adds = sample(&mut rng, index.nonedge_space(), beta)
        .into_iter()
        .map(|i| index.nonedge_pair(i).expect("sampled inside the space"))
        .collect();
    Ok(Perturbation::new(adds, dels))
}

/// D_w: random deletions inside the target community and random additions
/// from its members to outside nodes.
pub fn attack_dw(graph: &Graph, target: &[usize], beta: usize, seed: u64) -> Result<Perturbation> {
    if beta == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let n = graph.node_count();
    let mut mask = vec![false; n];
    for &v in target {
        if v >= n {
            return Err(Error::InvalidArgument(format!(
                "target node {v} out of range"
            )));
        }
        mask[v] = true;
    }
    let internal: Vec<Pair> = graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| mask[u] && mask[v])
        .collect();
    let mut external = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mask[u] != mask[v] && !graph.has_edge(u, v) {
                external.push((u, v));
            }
        }
    }
    if internal.len() < beta || external.len() < beta {
        return Err(Error::Infeasible(format!(
            "budget {beta} exceeds target pools ({} internal edges, {} external non-edges)",
            internal.len(),
            external.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dels = sample(&mut rng, internal.len(), beta)
        .into_iter()
        .map(|i| internal[i])
        .collect();
    let adds = sample(&mut rng, external.len(), beta)
        .into_iter()
        .map(|i| external[i])
        .collect();
    Ok(Perturbation::new(adds, dels))
}

/// Outcome of the randomized target-node baseline.
#[derive(Debug, Clone, Serialize)]
pub struct NodeBaselineReport {
    pub node: usize,
    pub additions: Vec<Pair>,
    pub success: bool,
    pub degree_increment_pct: f64,
    #[serde(skip)]
    pub adversarial: Graph,
    #[serde(skip)]
    pub detected: Partition,
}

impl NodeBaselineReport {
    pub fn budget(&self) -> usize {
        self.additions.len()
    }
}

/// D_r: links `t` to random nodes outside its community one at a time,
/// re-running `detector` after each, until δ holds or `max_budget` links
/// were added.
pub fn attack_dr(
    graph: &Graph,
    t: usize,
    detector: Detector,
    epsilon: f64,
    max_budget: usize,
    seed: u64,
) -> Result<NodeBaselineReport> {
    let n = graph.node_count();
    if t >= n {
        return Err(Error::Infeasible(format!("node {t} does not exist")));
    }
    let degree = graph.degree(t);
    if degree == 0 {
        return Err(Error::Infeasible(format!("node {t} is isolated")));
    }
    let before = detector.detect(graph, seed);
    let home = before.community_of(t);
    let mut foreign: Vec<usize> = (0..n)
        .filter(|&v| before.community_of(v) != home && !graph.has_edge(t, v))
        .collect();
    if foreign.is_empty() {
        return Err(Error::Infeasible(format!(
            "node {t} already links to every node outside its community"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    foreign.shuffle(&mut rng);

    let mut additions = Vec::new();
    let mut current = graph.clone();
    let mut detected = before.clone();
    let mut success = node_attack_succeeds(&before, home, &detected, t, epsilon);
    for v in foreign.into_iter().take(max_budget) {
        if success {
            break;
        }
        let pair = ordered(t, v);
        current = apply_perturbation(&current, &Perturbation::new(vec![pair], vec![]))?;
        additions.push(pair);
        detected = detector.detect(&current, seed);
        success = node_attack_succeeds(&before, home, &detected, t, epsilon);
    }
    Ok(NodeBaselineReport {
        node: t,
        degree_increment_pct: 100.0 * additions.len() as f64 / degree as f64,
        additions,
        success,
        adversarial: current,
        detected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::testutil::two_cliques;

    fn path4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn ab_cuts_the_middle_and_joins_the_ends() {
        let p = attack_ab(&path4(), 1).unwrap();
        assert_eq!(p.deletions, vec![(1, 2)]);
        assert_eq!(p.additions, vec![(0, 3)]);
        assert!(attack_ab(&path4(), 0).is_err());
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(attack_ab(&k4, 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn ad_prefers_hub_edges() {
        // star on 0 with leaves 1..4, pendant chain 4-5-6
        let g = Graph::from_edges(7, [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (5, 6)]).unwrap();
        let p = attack_ad(&g, 1).unwrap();
        assert_eq!(p.deletions, vec![(0, 4)]);
        assert_eq!(attack_ad(&g, 2).unwrap(), attack_ad(&g, 2).unwrap());
    }

    #[test]
    fn ad_on_bridged_triangles_removes_the_bridge() {
        let g =
            Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap();
        // only the bridge has degree sum 6
        assert_eq!(attack_ad(&g, 1).unwrap().deletions, vec![(2, 3)]);
    }

    #[test]
    fn dw_respects_the_target_pools() {
        let g = two_cliques(5);
        let target = [0, 1, 2, 3, 4];
        let p = attack_dw(&g, &target, 2, 9).unwrap();
        assert_eq!(p.deletions.len(), 2);
        assert_eq!(p.additions.len(), 2);
        assert!(p.deletions.iter().all(|&(u, v)| u < 5 && v < 5));
        assert!(p.additions.iter().all(|&(u, v)| (u < 5) != (v < 5)));
        p.validate(&g).unwrap();
        assert_eq!(p, attack_dw(&g, &target, 2, 9).unwrap());
    }

    /// Node 0 hangs off clique 1..=5 by one link; clique 6..=10 is joined
    /// to it by the bridge (5, 6).
    fn pendant_and_cliques() -> Graph {
        let mut edges = vec![(0, 1), (5, 6)];
        for base in [1, 6] {
            for u in base..base + 5 {
                for v in u + 1..base + 5 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(11, edges).unwrap()
    }

    #[test]
    fn dr_moves_a_pendant_node() {
        let g = pendant_and_cliques();
        let r = attack_dr(&g, 0, Detector::Louvain, 0.5, 5, 1).unwrap();
        assert!(r.success);
        assert!(r.budget() >= 1);
        assert_eq!(r.degree_increment_pct, 100.0 * r.budget() as f64);
        let before = Detector::Louvain.detect(&g, 1);
        assert!(node_attack_succeeds(
            &before,
            before.community_of(0),
            &r.detected,
            0,
            0.5
        ));
        let again = attack_dr(&g, 0, Detector::Louvain, 0.5, 5, 1).unwrap();
        assert_eq!(r.additions, again.additions);
    }

    #[test]
    fn dr_cannot_pull_a_clique_member_across() {
        // the full foreign clique is not enough to outweigh the home clique
        let g = two_cliques(5);
        let r = attack_dr(&g, 0, Detector::Louvain, 0.5, 5, 1).unwrap();
        assert!(!r.success);
        assert_eq!(r.budget(), 5);
    }

    #[test]
    fn dr_with_no_budget_reports_failure() {
        let g = two_cliques(5);
        let r = attack_dr(&g, 0, Detector::Louvain, 0.5, 0, 0).unwrap();
        assert!(!r.success);
        assert_eq!(r.budget(), 0);
    }

    #[test]
    fn random_rewiring_is_valid() {
        let g = two_cliques(5);
        let p = random_rewiring(&g, 3, 4).unwrap();
        p.validate(&g).unwrap();
        assert_eq!(
            apply_perturbation(&g, &p).unwrap().edge_count(),
            g.edge_count()
        );
    }
}
