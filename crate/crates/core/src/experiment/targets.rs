use log::info;

use super::TargetSelector;
use crate::error::{Error, Result};
use crate::graph::{node_betweenness, Graph};
use crate::partition::Partition;

/// Index of the community `selector` picks in `detected`. Size ranks break
/// ties by lower community index.
pub fn select_community(detected: &Partition, selector: TargetSelector) -> Result<usize> {
    match selector {
        TargetSelector::CommunityIndex(i) if i < detected.community_count() => Ok(i),
        TargetSelector::CommunityIndex(i) => Err(Error::Infeasible(format!(
            "community {i} does not exist ({} detected)",
            detected.community_count()
        ))),
        TargetSelector::CommunityBySize(rank) => {
            let sizes = detected.sizes();
            let mut order: Vec<usize> = (0..sizes.len()).collect();
            order.sort_by_key(|&c| (std::cmp::Reverse(sizes[c]), c));
            order.get(rank - 1).copied().ok_or_else(|| {
                Error::Infeasible(format!("only {} communities detected", sizes.len()))
            })
        }
        other => Err(Error::config(
            "target",
            format!("`{other}` does not select a community"),
        )),
    }
}

/// 1-based competition ranks of `scores`, highest first.
fn ranks(scores: &[f64]) -> Vec<usize> {
    scores
        .iter()
        .map(|s| 1 + scores.iter().filter(|&&o| o > *s).count())
        .collect()
}

/// Node picked by `selector`. Ranked selectors order by descending score;
/// the combined score sums the degree and betweenness ranks (smaller is
/// better). Ties go to the lower node ID.
pub fn select_node(graph: &Graph, selector: TargetSelector) -> Result<usize> {
    let n = graph.node_count();
    let degree: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64).collect();
    let (key, rank): (Vec<f64>, usize) = match selector {
        TargetSelector::Node(v) if v < n => return Ok(v),
        TargetSelector::Node(v) => {
            return Err(Error::Infeasible(format!("node {v} does not exist")))
        }
        TargetSelector::NodeByDegree(r) => (degree, r),
        TargetSelector::NodeByBetweenness(r) => (node_betweenness(graph), r),
        TargetSelector::NodeByCombined(r) => {
            let a = ranks(&degree);
            let b = ranks(&node_betweenness(graph));
            // negate so that a smaller rank sum sorts first
            (
                a.iter().zip(&b).map(|(x, y)| -((x + y) as f64)).collect(),
                r,
            )
        }
        other => {
            return Err(Error::config(
                "target",
                format!("`{other}` does not select a node"),
            ))
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[b].total_cmp(&key[a]).then(a.cmp(&b)));
    let pick = *order
        .get(rank - 1)
        .ok_or_else(|| Error::Infeasible(format!("rank {rank} exceeds {n} nodes")))?;
    let tied = order.iter().filter(|&&v| key[v] == key[pick]).count();
    if tied > 1 {
        info!("{selector}: {tied} nodes share the score of node {pick}; lower IDs rank first");
    }
    Ok(pick)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn community_size_rank() {
        let p = Partition::from_assignment(&[0, 1, 1, 1, 2, 2]);
        assert_eq!(
            select_community(&p, TargetSelector::CommunityBySize(1)).unwrap(),
            1
        );
        assert_eq!(
            select_community(&p, TargetSelector::CommunityBySize(2)).unwrap(),
            2
        );
        assert_eq!(
            select_community(&p, TargetSelector::CommunityBySize(3)).unwrap(),
            0
        );
        assert!(select_community(&p, TargetSelector::CommunityBySize(4)).is_err());
    }

    #[test]
    fn node_ranks() {
        // star centre 0 with leaves 1..3, tail 3-4
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        assert_eq!(select_node(&g, TargetSelector::NodeByDegree(1)).unwrap(), 0);
        assert_eq!(select_node(&g, TargetSelector::NodeByDegree(2)).unwrap(), 3);
        assert_eq!(
            select_node(&g, TargetSelector::NodeByBetweenness(2)).unwrap(),
            3
        );
        assert_eq!(
            select_node(&g, TargetSelector::NodeByCombined(1)).unwrap(),
            0
        );
        // leaves 1 and 2 tie; lower ID first
        assert_eq!(select_node(&g, TargetSelector::NodeByDegree(3)).unwrap(), 1);
    }
}
