use super::{ordered, Graph, Pair};

/// Number of unordered pairs on `n` nodes.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic rank of the pair `{u, v}` among all `C(n, 2)` pairs.
#[inline]
pub fn pair_rank(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = ordered(u, v);
    row_start(n, u) + (v - u - 1)
}

#[inline]
fn row_start(n: usize, u: usize) -> usize {
    u * (2 * n - u - 1) / 2
}

/// Inverse of [`pair_rank`].
pub fn pair_from_rank(n: usize, rank: usize) -> Pair {
    debug_assert!(rank < pair_count(n));
    // Largest u with row_start(u) <= rank.
    let (mut lo, mut hi) = (0usize, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if row_start(n, mid) <= rank {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = if row_start(n, hi) <= rank { hi } else { lo };
    (u, rank - row_start(n, u) + u + 1)
}

/// Two disjoint integer gene spaces over node pairs: existing edges get IDs
/// in `[0, m)` and non-edges IDs in `[0, C(n,2) - m)`, both numbered in
/// lexicographic pair order.
#[derive(Debug, Clone)]
pub struct LinkIndexSpace {
    n: usize,
    edge_ranks: Vec<usize>,
    edges: Vec<Pair>,
}

impl LinkIndexSpace {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.node_count();
        let edges = graph.edges().to_vec();
        let edge_ranks = edges.iter().map(|&(u, v)| pair_rank(n, u, v)).collect();
        LinkIndexSpace {
            n,
            edge_ranks,
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_space(&self) -> usize {
        self.edges.len()
    }

    pub fn nonedge_space(&self) -> usize {
        pair_count(self.n) - self.edges.len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        self.edges.binary_search(&ordered(u, v)).ok()
    }

    pub fn edge_pair(&self, id: usize) -> Option<Pair> {
        self.edges.get(id).copied()
    }

    pub fn nonedge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u == v || u >= self.n || v >= self.n {
            return None;
        }
        let rank = pair_rank(self.n, u, v);
        match self.edge_ranks.binary_search(&rank) {
            Ok(_) => None,
            Err(below) => Some(rank - below),
        }
    }

    pub fn nonedge_pair(&self, id: usize) -> Option<Pair> {
        if id >= self.nonedge_space() {
            return None;
        }
        // edge_ranks[i] - i counts the non-edges ranked before edge i; it is
        // non-decreasing, so the edges preceding the target form a prefix.
        let (mut lo, mut hi) = (0usize, self.edge_ranks.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.edge_ranks[mid] - mid <= id {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Some(pair_from_rank(self.n, id + lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_roundtrip() {
        for n in 2..12 {
            let mut expected = 0;
            for u in 0..n {
                for v in u + 1..n {
                    assert_eq!(pair_rank(n, u, v), expected);
                    assert_eq!(pair_from_rank(n, expected), (u, v));
                    expected += 1;
                }
            }
            assert_eq!(expected, pair_count(n));
        }
    }

    #[test]
    fn triangle_and_path() {
        let tri = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let idx = LinkIndexSpace::new(&tri);
        assert_eq!(idx.edge_id(0, 1), Some(0));
        assert_eq!(idx.edge_id(2, 0), Some(1));
        assert_eq!(idx.edge_id(1, 2), Some(2));
        assert_eq!(idx.nonedge_space(), 0);

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let idx = LinkIndexSpace::new(&path);
        assert_eq!(idx.nonedge_id(0, 2), Some(0));
        assert_eq!(idx.nonedge_pair(0), Some((0, 2)));
        assert_eq!(idx.nonedge_id(0, 1), None);
        assert_eq!(idx.nonedge_pair(1), None);
    }

    #[test]
    fn exhaustive_roundtrip_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 5, 20, 50] {
            for density in [0.0, 0.1, 0.5, 0.9, 1.0] {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen::<f64>() < density {
                            edges.push((u, v));
                        }
                    }
                }
                let g = Graph::from_edges(n, edges).unwrap();
                let idx = LinkIndexSpace::new(&g);
                let (mut e, mut ne) = (0, 0);
                for u in 0..n {
                    for v in u + 1..n {
                        if g.has_edge(u, v) {
                            assert_eq!(idx.edge_id(u, v), Some(e));
                            assert_eq!(idx.edge_pair(e), Some((u, v)));
                            assert_eq!(idx.nonedge_id(u, v), None);
                            e += 1;
                        } else {
                            assert_eq!(idx.nonedge_id(u, v), Some(ne));
                            assert_eq!(idx.nonedge_pair(ne), Some((u, v)));
                            assert_eq!(idx.edge_id(u, v), None);
                            ne += 1;
                        }
                    }
                }
                assert_eq!(e, idx.edge_space());
                assert_eq!(ne, idx.nonedge_space());
            }
        }
    }
}
