use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::partition::Partition;

const MAX_SWEEPS: usize = 100;

/// Asynchronous label propagation. Each sweep visits nodes in a seeded
/// random order; a node whose label is not among the most frequent labels of
/// its neighbors adopts one of them, chosen uniformly at random. Stops after
/// a sweep without changes or after 100 sweeps.
pub fn label_propagation(graph: &Graph, seed: u64) -> Partition {
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut counts = vec![0usize; n];
    let mut touched = Vec::new();
    let mut best = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            let nb = graph.neighbors(u);
            if nb.is_empty() {
                continue;
            }
            for &v in nb {
                let l = labels[v];
                if counts[l] == 0 {
                    touched.push(l);
                }
                counts[l] += 1;
            }
            let top = touched.iter().map(|&l| counts[l]).max().unwrap_or(0);
            best.extend(touched.iter().copied().filter(|&l| counts[l] == top));
            if !best.contains(&labels[u]) {
                labels[u] = best[rng.gen_range(0..best.len())];
                changed = true;
            }
            for &l in &touched {
                counts[l] = 0;
            }
            touched.clear();
            best.clear();
        }
        if !changed {
            break;
        }
    }
    Partition::from_assignment(&labels)
}
