//! Simple undirected graphs and the structural primitives the attack needs.
//!
//! A [`Graph`] is immutable: perturbations produce a new graph through
//! [`apply_perturbation`]. Edges are kept in lexicographic `(u, v)` order with
//! `u < v`; that order is also the order used by [`LinkIndexSpace`] and by the
//! per-edge tables returned from [`edge_betweenness`].

mod generate;
mod index;
mod io;
mod paths;

pub use generate::generate_planted_partition;
pub use index::{pair_count, pair_from_rank, pair_rank, LinkIndexSpace};
pub use io::{
    load_edge_list, parse_edge_list, parse_gml, write_edge_list, write_gml, Dataset, GraphFormat,
};
pub use paths::{all_pairs_distances, edge_betweenness, node_betweenness, DistanceMatrix};

use crate::error::{Error, Result};

/// Unordered node pair stored with the smaller endpoint first.
pub type Pair = (usize, usize);

#[inline]
pub fn ordered(u: usize, v: usize) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Pair>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph on nodes `0..n`. Self-loops, duplicate pairs and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Pair>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            list.push(ordered(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    /// `edges` must be sorted, deduplicated, loop-free and in range.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Pair>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        // Scanning edges lexicographically leaves every neighbor list sorted.
        for &(u, v) in &edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        Graph {
            n,
            edges,
            offsets,
            targets,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order; position is the edge's link index.
    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Position of `(u, v)` in [`Graph::edges`].
    pub fn edge_position(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&ordered(u, v)).ok()
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence((0..self.n).map(|u| self.degree(u)).collect())
    }

    /// Number of edges with both endpoints in `members` (given as a mask).
    pub fn internal_edge_count(&self, mask: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .count()
    }

    /// Connected components of the subgraph induced by `nodes`.
    pub fn induced_component_count(&self, nodes: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in nodes {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        let mut components = 0;
        for &start in nodes {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.induced_component_count(&(0..self.n).collect::<Vec<_>>()) == 1
    }
}

/// Per-node degrees of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Link additions and deletions against a base graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Perturbation {
    pub additions: Vec<Pair>,
    pub deletions: Vec<Pair>,
}

impl Perturbation {
    pub fn new(additions: Vec<Pair>, deletions: Vec<Pair>) -> Self {
        let mut additions: Vec<Pair> = additions.into_iter().map(|(u, v)| ordered(u, v)).collect();
        let mut deletions: Vec<Pair> = deletions.into_iter().map(|(u, v)| ordered(u, v)).collect();
        additions.sort_unstable();
        deletions.sort_unstable();
        Perturbation {
            additions,
            deletions,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.additions.is_empty() && self.deletions.is_empty()
    }

    /// Checks the perturbation against `graph`: additions are distinct
    /// non-edges, deletions are distinct existing edges.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let mut adds = self.additions.clone();
        adds.sort_unstable();
        if adds.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPerturbation("duplicate addition".into()));
        }
        let mut dels = self.deletions.clone();
        dels.sort_unstable();
        if dels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPerturbation("duplicate deletion".into()));
        }
        for &(u, v) in &self.additions {
            if u == v || u >= graph.n || v >= graph.n {
                return Err(Error::InvalidPerturbation(format!(
                    "addition ({u}, {v}) is not a valid node pair"
                )));
            }
            if graph.has_edge(u, v) {
                return Err(Error::InvalidPerturbation(format!(
                    "addition ({u}, {v}) is already an edge"
                )));
            }
        }
        for &(u, v) in &self.deletions {
            if !graph.has_edge(u, v) {
                return Err(Error::InvalidPerturbation(format!(
                    "deletion ({u}, {v}) is not an edge"
                )));
            }
        }
        Ok(())
    }
}

/// Returns the adversarial graph `(E ∪ E+) \ E−` on the same node set.
pub fn apply_perturbation(graph: &Graph, pert: &Perturbation) -> Result<Graph> {
    pert.validate(graph)?;
    let mut adds: Vec<Pair> = pert.additions.iter().map(|&(u, v)| ordered(u, v)).collect();
    let mut dels: Vec<Pair> = pert.deletions.iter().map(|&(u, v)| ordered(u, v)).collect();
    adds.sort_unstable();
    dels.sort_unstable();

    let mut edges = Vec::with_capacity(graph.edges.len() + adds.len() - dels.len().min(adds.len()));
    let mut di = 0;
    let mut ai = 0;
    for &e in &graph.edges {
        if di < dels.len() && dels[di] == e {
            di += 1;
            continue;
        }
        while ai < adds.len() && adds[ai] < e {
            edges.push(adds[ai]);
            ai += 1;
        }
        edges.push(e);
    }
    edges.extend_from_slice(&adds[ai..]);
    Ok(Graph::from_sorted_unchecked(graph.n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::from_edges(5, [(3, 1), (0, 4), (1, 0), (4, 3), (2, 1)]).unwrap();
        for u in 0..5 {
            let nb = g.neighbors(u);
            assert!(nb.windows(2).all(|w| w[0] < w[1]));
            for &v in nb {
                assert!(g.neighbors(v).contains(&u));
            }
        }
        assert_eq!(g.degrees().total(), 2 * g.edge_count());
    }

    #[test]
    fn empty_perturbation_is_identity() {
        let g = path3();
        assert_eq!(apply_perturbation(&g, &Perturbation::default()).unwrap(), g);
    }

    #[test]
    fn rewiring_a_path() {
        let g = path3();
        let p = Perturbation::new(vec![(0, 2)], vec![(2, 1)]);
        let h = apply_perturbation(&g, &p).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (0, 2)]);
        assert_eq!(h.edge_count(), g.edge_count());
    }

    #[test]
    fn invalid_perturbations() {
        let g = path3();
        let missing = Perturbation::new(vec![], vec![(0, 2)]);
        assert!(matches!(
            apply_perturbation(&g, &missing),
            Err(Error::InvalidPerturbation(_))
        ));
        let existing = Perturbation::new(vec![(1, 2)], vec![]);
        assert!(matches!(
            apply_perturbation(&g, &existing),
            Err(Error::InvalidPerturbation(_))
        ));
    }

    #[test]
    fn induced_components() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.induced_component_count(&[0, 1, 2]), 1);
        assert_eq!(g.induced_component_count(&[0, 2, 3, 5]), 4);
        assert_eq!(g.induced_component_count(&[0, 1, 3, 4]), 2);
        assert!(!g.is_connected());
    }
}
