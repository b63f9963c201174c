//! Community detection: Louvain (the attack surrogate), CNM-style greedy
//! agglomeration and asynchronous label propagation.

mod greedy;
mod label_prop;
mod louvain;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use greedy::greedy_modularity;
pub use label_prop::label_propagation;
pub use louvain::louvain;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Newman modularity of `partition` on `graph`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    if partition.node_count() != graph.node_count() {
        return Err(Error::PartitionMismatch(format!(
            "partition covers {} nodes, graph has {}",
            partition.node_count(),
            graph.node_count()
        )));
    }
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let k = partition.community_count();
    let mut internal = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for &(u, v) in graph.edges() {
        let (cu, cv) = (partition.community_of(u), partition.community_of(v));
        degree[cu] += 1;
        degree[cv] += 1;
        if cu == cv {
            internal[cu] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Louvain,
    Greedy,
    #[serde(alias = "label_propagation", alias = "lpa")]
    Labelprop,
}

impl Detector {
    pub const ALL: [Detector; 3] = [Detector::Louvain, Detector::Greedy, Detector::Labelprop];

    /// Runs the detector. `seed` is ignored by the deterministic greedy
    /// algorithm. Graphs without edges yield all-singleton partitions.
    pub fn detect(self, graph: &Graph, seed: u64) -> Partition {
        if graph.edge_count() == 0 {
            return Partition::singletons(graph.node_count());
        }
        match self {
            Detector::Louvain => louvain(graph, seed),
            Detector::Greedy => greedy_modularity(graph),
            Detector::Labelprop => label_propagation(graph, seed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Detector::Louvain => "louvain",
            Detector::Greedy => "greedy",
            Detector::Labelprop => "labelprop",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "louvain" | "lou" => Ok(Detector::Louvain),
            "greedy" | "gre" | "cnm" => Ok(Detector::Greedy),
            "labelprop" | "label_propagation" | "lpa" => Ok(Detector::Labelprop),
            other => Err(Error::InvalidArgument(format!(
                "unknown detector `{other}`"
            ))),
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::graph::Graph;
    use crate::partition::Partition;

    /// Two `k`-cliques on `0..k` and `k..2k` joined by the bridge `(k-1, k)`.
    pub fn two_cliques(k: usize) -> Graph {
        let mut edges = Vec::new();
        for base in [0, k] {
            for u in base..base + k {
                for v in u + 1..base + k {
                    edges.push((u, v));
                }
            }
        }
        edges.push((k - 1, k));
        Graph::from_edges(2 * k, edges).unwrap()
    }

    pub fn halves(k: usize) -> Partition {
        Partition::from_assignment(&(0..2 * k).map(|v| v / k).collect::<Vec<_>>())
    }

    /// All set partitions of `0..n` as restricted growth strings.
    pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for c in 0..=max + 1 {
                cur[i] = c;
                rec(i + 1, max.max(c), cur, out);
            }
        }
        if n == 0 {
            return vec![vec![]];
        }
        rec(1, 0, &mut cur, &mut out);
        out
    }
}
