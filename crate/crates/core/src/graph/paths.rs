use std::collections::VecDeque;

use super::Graph;

/// Hop distances between all node pairs. Pairs in different components hold
/// the sentinel `n`.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.data[u * self.n + v]
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn sentinel(&self) -> u32 {
        self.n as u32
    }
}

pub fn all_pairs_distances(graph: &Graph) -> DistanceMatrix {
    let n = graph.node_count();
    let mut data = vec![n as u32; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut data[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in graph.neighbors(u) {
                if row[w] == n as u32 && w != s {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    DistanceMatrix { n, data }
}

/// Shortest-path counts from one source, in BFS order.
struct Sssp {
    order: Vec<usize>,
    sigma: Vec<f64>,
    dist: Vec<i64>,
}

impl Sssp {
    fn new(n: usize) -> Self {
        Sssp {
            order: Vec::with_capacity(n),
            sigma: vec![0.0; n],
            dist: vec![-1; n],
        }
    }

    fn run(&mut self, graph: &Graph, s: usize) {
        self.order.clear();
        self.sigma.iter_mut().for_each(|x| *x = 0.0);
        self.dist.iter_mut().for_each(|x| *x = -1);
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.order.push(s);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            for &w in graph.neighbors(u) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[u] + 1;
                    self.order.push(w);
                }
                if self.dist[w] == self.dist[u] + 1 {
                    self.sigma[w] += self.sigma[u];
                }
            }
        }
    }
}

/// Edge betweenness over unordered node pairs, endpoints included. Values
/// are indexed like [`Graph::edges`].
pub fn edge_betweenness(graph: &Graph) -> Vec<f64> {
    let n = graph.node_count();
    let mut cb = vec![0.0; graph.edge_count()];
    // Edge ID of each adjacency slot, parallel to the neighbor lists.
    let slot_ids: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            graph
                .neighbors(u)
                .iter()
                .map(|&w| graph.edge_position(u, w).expect("adjacent pair is an edge"))
                .collect()
        })
        .collect();
    let mut sp = Sssp::new(n);
    let mut delta = vec![0.0; n];
    for s in 0..n {
        sp.run(graph, s);
        for &w in &sp.order {
            delta[w] = 0.0;
        }
        for &w in sp.order.iter().rev() {
            let coeff = (1.0 + delta[w]) / sp.sigma[w];
            for (k, &v) in graph.neighbors(w).iter().enumerate() {
                if sp.dist[v] == sp.dist[w] - 1 {
                    let c = sp.sigma[v] * coeff;
                    cb[slot_ids[w][k]] += c;
                    delta[v] += c;
                }
            }
        }
    }
    // Each unordered pair was counted once from each endpoint.
    cb.iter_mut().for_each(|x| *x /= 2.0);
    cb
}

/// Node betweenness over unordered pairs, endpoints excluded.
pub fn node_betweenness(graph: &Graph) -> Vec<f64> {
    let n = graph.node_count();
    let mut cb = vec![0.0; n];
    let mut sp = Sssp::new(n);
    let mut delta = vec![0.0; n];
    for s in 0..n {
        sp.run(graph, s);
        for &w in &sp.order {
            delta[w] = 0.0;
        }
        for &w in sp.order.iter().rev() {
            let coeff = (1.0 + delta[w]) / sp.sigma[w];
            for &v in graph.neighbors(w) {
                if sp.dist[v] == sp.dist[w] - 1 {
                    delta[v] += sp.sigma[v] * coeff;
                }
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }
    cb.iter_mut().for_each(|x| *x /= 2.0);
    cb
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    /// Enumerates every shortest path between every unordered pair.
    fn brute_edge_betweenness(g: &Graph) -> Vec<f64> {
        let n = g.node_count();
        let dist = all_pairs_distances(g);
        let mut cb = vec![0.0; g.edge_count()];
        for s in 0..n {
            for t in s + 1..n {
                if dist.get(s, t) == n as u32 {
                    continue;
                }
                let mut paths: Vec<Vec<usize>> = vec![vec![s]];
                let mut done = Vec::new();
                while let Some(p) = paths.pop() {
                    let last = *p.last().unwrap();
                    if last == t {
                        done.push(p);
                        continue;
                    }
                    for &w in g.neighbors(last) {
                        if dist.get(s, w) == dist.get(s, last) + 1
                            && dist.get(w, t) + dist.get(s, w) == dist.get(s, t)
                        {
                            let mut q = p.clone();
                            q.push(w);
                            paths.push(q);
                        }
                    }
                }
                let share = 1.0 / done.len() as f64;
                for p in &done {
                    for w in p.windows(2) {
                        cb[g.edge_position(w[0], w[1]).unwrap()] += share;
                    }
                }
            }
        }
        cb
    }

    #[test]
    fn distances_on_path_and_disconnected_pairs() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let d = all_pairs_distances(&path);
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(1, 1), 0);

        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let d = all_pairs_distances(&two);
        assert_eq!(d.get(0, 3), 4);
        assert_eq!(d.get(1, 2), 4);
        assert_eq!(d.get(2, 3), 1);
    }

    #[test]
    fn distances_symmetric_and_metric() {
        let g = random_graph(15, 0.2, 3);
        let d = all_pairs_distances(&g);
        let n = 15;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d.get(i, j), d.get(j, i));
                for k in 0..n {
                    let connected = [d.get(i, j), d.get(j, k), d.get(i, k)]
                        .iter()
                        .all(|&x| x < n as u32);
                    if connected {
                        assert!(d.get(i, k) <= d.get(i, j) + d.get(j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn betweenness_small_cases() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(edge_betweenness(&path), vec![2.0, 2.0]);

        let tri = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(edge_betweenness(&tri), vec![1.0, 1.0, 1.0]);

        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(edge_betweenness(&star), vec![3.0, 3.0, 3.0]);
        assert_eq!(node_betweenness(&star), vec![3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn betweenness_matches_path_enumeration() {
        for seed in 0..10 {
            let g = random_graph(12, 0.25, seed);
            let fast = edge_betweenness(&g);
            let slow = brute_edge_betweenness(&g);
            for (a, b) in fast.iter().zip(&slow) {
                assert_relative_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn betweenness_sums_to_total_distance_when_connected() {
        let mut checked = 0;
        for seed in 0..30 {
            let g = random_graph(14, 0.3, 100 + seed);
            if !g.is_connected() {
                continue;
            }
            checked += 1;
            let d = all_pairs_distances(&g);
            let mut total = 0.0;
            for s in 0..14 {
                for t in s + 1..14 {
                    total += d.get(s, t) as f64;
                }
            }
            let sum: f64 = edge_betweenness(&g).iter().sum();
            assert_relative_eq!(sum, total, epsilon = 1e-9);
        }
        assert!(checked > 5);
    }
}
