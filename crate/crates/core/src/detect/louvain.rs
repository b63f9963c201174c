use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::partition::Partition;

/// Weighted graph used at each aggregation level. Edge weights are integer
/// multiplicities, so modularity gains compare exactly.
struct Level {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<i64>,
    /// Weight of edges collapsed inside each node.
    loops: Vec<i64>,
    /// Weighted degree, loops counted twice.
    strength: Vec<i64>,
}

impl Level {
    fn from_graph(graph: &Graph) -> Self {
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * graph.edge_count());
        offsets.push(0);
        for u in 0..n {
            targets.extend_from_slice(graph.neighbors(u));
            offsets.push(targets.len());
        }
        let weights = vec![1; targets.len()];
        let strength = (0..n).map(|u| graph.degree(u) as i64).collect();
        Level {
            offsets,
            targets,
            weights,
            loops: vec![0; n],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.loops.len()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// Local-move phase. Returns the community of every node and whether any
    /// node changed community.
    fn optimize(&self, two_m: i64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut total: Vec<i64> = self.strength.clone();
        let mut link = vec![0i64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut improved = false;
        loop {
            let mut moved = false;
            for &u in &order {
                let k = self.strength[u];
                let own = comm[u];
                for (v, w) in self.neighbors(u) {
                    if v == u {
                        continue;
                    }
                    let c = comm[v];
                    if link[c] == 0 {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                total[own] -= k;
                // gain(c) = 2m * k_in(c) - Σtot(c) * k, scaled ΔQ of joining c
                let mut best = own;
                let mut best_gain = two_m * link[own] - total[own] * k;
                for &c in &touched {
                    let gain = two_m * link[c] - total[c] * k;
                    if gain > best_gain {
                        best_gain = gain;
                        best = c;
                    }
                }
                total[best] += k;
                if best != own {
                    comm[u] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            improved = true;
        }
        (comm, improved)
    }

    /// Collapses communities into nodes. `comm` must be dense.
    fn aggregate(&self, comm: &[usize], count: usize) -> Level {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (u, &c) in comm.iter().enumerate() {
            members[c].push(u);
        }
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut loops = vec![0i64; count];
        let mut strength = vec![0i64; count];
        let mut acc = vec![0i64; count];
        let mut touched = Vec::new();
        offsets.push(0);
        for (c, nodes) in members.iter().enumerate() {
            let mut inner = 0i64;
            for &u in nodes {
                loops[c] += self.loops[u];
                strength[c] += self.strength[u];
                for (v, w) in self.neighbors(u) {
                    let d = comm[v];
                    if d == c {
                        inner += w;
                    } else {
                        if acc[d] == 0 {
                            touched.push(d);
                        }
                        acc[d] += w;
                    }
                }
            }
            // internal edges were seen from both endpoints
            loops[c] += inner / 2;
            for &d in &touched {
                targets.push(d);
                weights.push(acc[d]);
                acc[d] = 0;
            }
            touched.clear();
            offsets.push(targets.len());
        }
        Level {
            offsets,
            targets,
            weights,
            loops,
            strength,
        }
    }
}

fn densify(comm: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    for c in comm.iter_mut() {
        if map[*c] == usize::MAX {
            map[*c] = next;
            next += 1;
        }
        *c = map[*c];
    }
    next
}

/// Louvain modularity optimization. Nodes are visited in an order shuffled
/// by `seed`; a node only moves on a strictly positive gain. Returns the
/// coarsest level.
pub fn louvain(graph: &Graph, seed: u64) -> Partition {
    let n = graph.node_count();
    let two_m = 2 * graph.edge_count() as i64;
    if two_m == 0 {
        return Partition::singletons(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level::from_graph(graph);
    let mut membership: Vec<usize> = (0..n).collect();
    loop {
        let (mut comm, improved) = level.optimize(two_m, &mut rng);
        if !improved {
            break;
        }
        let count = densify(&mut comm);
        for m in membership.iter_mut() {
            *m = comm[*m];
        }
        if count == level.len() {
            break;
        }
        level = level.aggregate(&comm, count);
    }
    Partition::from_assignment(&membership)
}
