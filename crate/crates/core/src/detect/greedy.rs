use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::partition::Partition;

/// Clauset–Newman–Moore agglomeration. Starting from singletons, repeatedly
/// merges the pair of communities with the largest modularity increase while
/// that increase is positive, so the result is the modularity peak. Ties go
/// to the lexicographically smallest community-ID pair.
///
/// The merge key `2m * L_ij - D_i * D_j` is `2m²` times the modularity
/// increase, where `L_ij` counts edges between the communities and `D` are
/// degree sums; integer keys make ties exact.
pub fn greedy_modularity(graph: &Graph) -> Partition {
    let n = graph.node_count();
    let two_m = 2 * graph.edge_count() as i64;
    if two_m == 0 {
        return Partition::singletons(n);
    }
    let mut links: Vec<BTreeMap<usize, i64>> = (0..n)
        .map(|u| graph.neighbors(u).iter().map(|&v| (v, 1)).collect())
        .collect();
    let mut degree: Vec<i64> = (0..n).map(|u| graph.degree(u) as i64).collect();
    let mut alive = vec![true; n];
    let mut parent: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            for (&j, &l) in links[i].range(i + 1..) {
                let key = two_m * l - degree[i] * degree[j];
                if key > 0 && best.is_none_or(|(b, _, _)| key > b) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };

        // merge j into i
        let absorbed = std::mem::take(&mut links[j]);
        for (k, l) in absorbed {
            if k == i {
                continue;
            }
            *links[i].entry(k).or_insert(0) += l;
            let back = links[k].remove(&j).expect("symmetric links");
            *links[k].entry(i).or_insert(0) += back;
        }
        links[i].remove(&j);
        degree[i] += degree[j];
        alive[j] = false;
        parent[j] = i;
    }

    let assignment: Vec<usize> = (0..n)
        .map(|mut u| {
            while parent[u] != u {
                u = parent[u];
            }
            u
        })
        .collect();
    Partition::from_assignment(&assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::modularity;
    use crate::detect::testutil::*;

    #[test]
    fn two_triangles_with_bridge() {
        assert_eq!(greedy_modularity(&two_cliques(3)), halves(3));
        assert_eq!(greedy_modularity(&two_cliques(5)), halves(5));
    }

    #[test]
    fn disjoint_edges() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            greedy_modularity(&g),
            Partition::from_assignment(&[0, 0, 1, 1])
        );
    }

    #[test]
    fn complete_graph_is_one_community() {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(4, edges).unwrap();
        // every split of K4 has Q <= 0
        let best = all_partitions(4)
            .iter()
            .map(|a| modularity(&g, &Partition::from_assignment(a)).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(best.abs() < 1e-12);
        assert_eq!(greedy_modularity(&g), Partition::single(4));
    }

    #[test]
    fn never_worse_than_singletons() {
        let g = Graph::from_edges(
            7,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 0),
                (0, 3),
            ],
        )
        .unwrap();
        let q = modularity(&g, &greedy_modularity(&g)).unwrap();
        assert!(q >= modularity(&g, &Partition::singletons(7)).unwrap());
    }
}
