use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::partition::Partition;

const MAX_ATTEMPTS: usize = 100;

/// Planted-partition graph: intra-community pairs are linked with probability
/// `p_in`, inter-community pairs with `p_out`. Draws that leave a node
/// isolated are discarded and redrawn from the same seeded stream.
pub fn generate_planted_partition(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(Graph, Partition)> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidArgument(
            "community sizes must be non-empty and positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out > p_in {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )));
    }
    let labels: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut edges = Vec::new();
        let mut degree = vec![0usize; n];
        for u in 0..n {
            for v in u + 1..n {
                let p = if labels[u] == labels[v] { p_in } else { p_out };
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
        }
        if degree.iter().all(|&d| d > 0) {
            return Ok((
                Graph::from_sorted_unchecked(n, edges),
                Partition::from_assignment(&labels),
            ));
        }
    }
    Err(Error::GeneratorExhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities_give_disjoint_cliques() {
        let (g, truth) = generate_planted_partition(&[3, 3], 1.0, 0.0, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]);
        assert_eq!(truth.assignment(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn same_seed_same_graph() {
        let a = generate_planted_partition(&[20, 20], 0.3, 0.05, 9).unwrap();
        let b = generate_planted_partition(&[20, 20], 0.3, 0.05, 9).unwrap();
        let c = generate_planted_partition(&[20, 20], 0.3, 0.05, 10).unwrap();
        assert_eq!(a.0, b.0);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn intra_edge_count_matches_binomial_expectation() {
        let sizes = [32usize; 4];
        let (g, truth) = generate_planted_partition(&sizes, 0.3, 0.02, 2024).unwrap();
        let intra = g
            .edges()
            .iter()
            .filter(|&&(u, v)| truth.community_of(u) == truth.community_of(v))
            .count() as f64;
        let trials = 4.0 * (32.0 * 31.0 / 2.0);
        let mean = trials * 0.3;
        let sd = (trials * 0.3 * 0.7f64).sqrt();
        assert!(
            (intra - mean).abs() <= 3.0 * sd,
            "intra={intra} mean={mean} sd={sd}"
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(generate_planted_partition(&[], 0.5, 0.1, 0).is_err());
        assert!(generate_planted_partition(&[4], 0.1, 0.5, 0).is_err());
        assert!(generate_planted_partition(&[4], 1.5, 0.5, 0).is_err());
        assert!(matches!(
            generate_planted_partition(&[1, 3], 1.0, 0.0, 0),
            Err(Error::GeneratorExhausted(_))
        ));
    }
}
