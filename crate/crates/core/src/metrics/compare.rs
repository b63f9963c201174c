use super::confusion;
use crate::error::Result;
use crate::partition::Partition;

/// Normalized mutual information with arithmetic-mean normalization,
/// computed in natural log.
///
/// When both partitions are a single community the result is 1; when only
/// one of them is, it is 0.
pub fn nmi(x: &Partition, y: &Partition) -> Result<f64> {
    let m = confusion(x, y)?;
    match (x.community_count() <= 1, y.community_count() <= 1) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    if x == y {
        return Ok(1.0);
    }
    let n = m.total() as f64;
    let mut terms = Vec::new();
    for i in 0..m.rows() {
        let a = m.row_sums()[i] as f64;
        for j in 0..m.cols() {
            let c = m.count(i, j);
            if c == 0 {
                continue;
            }
            let c = c as f64;
            let b = m.col_sums()[j] as f64;
            terms.push(c * (c * n / (a * b)).ln());
        }
    }
    let mutual = ordered_sum(terms);
    let h = |sums: &[usize]| -> f64 {
        ordered_sum(
            sums.iter()
                .filter(|&&s| s > 0)
                .map(|&s| s as f64 * (s as f64 / n).ln())
                .collect(),
        )
    };
    let denom = h(m.row_sums()) + h(m.col_sums());
    let value = -2.0 * mutual / denom;
    Ok(value.clamp(0.0, 1.0))
}

/// Sums in sorted order so the result does not depend on which argument
/// supplied the rows.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn choose2(k: usize) -> f64 {
    let k = k as f64;
    k * (k - 1.0) / 2.0
}

/// Adjusted Rand index (Hubert–Arabie). When the chance-corrected
/// denominator vanishes, returns 1 for identical partitions and 0 otherwise.
pub fn ari(x: &Partition, y: &Partition) -> Result<f64> {
    let m = confusion(x, y)?;
    let n = m.total();
    let index: f64 = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| choose2(m.count(i, j)))
        .sum();
    let a: f64 = m.row_sums().iter().map(|&s| choose2(s)).sum();
    let b: f64 = m.col_sums().iter().map(|&s| choose2(s)).sum();
    let pairs = choose2(n);
    let expected = if pairs > 0.0 { a * b / pairs } else { 0.0 };
    let max = 0.5 * (a + b);
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(if x == y { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn part(a: &[usize]) -> Partition {
        Partition::from_assignment(a)
    }

    /// Rand-style pair counting straight from node pairs.
    fn ari_by_pairs(x: &Partition, y: &Partition) -> f64 {
        let n = x.node_count();
        let (mut both, mut in_x, mut in_y, mut total) = (0.0, 0.0, 0.0, 0.0);
        for u in 0..n {
            for v in u + 1..n {
                let sx = x.community_of(u) == x.community_of(v);
                let sy = y.community_of(u) == y.community_of(v);
                total += 1.0;
                if sx {
                    in_x += 1.0;
                }
                if sy {
                    in_y += 1.0;
                }
                if sx && sy {
                    both += 1.0;
                }
            }
        }
        let expected = in_x * in_y / total;
        (both - expected) / (0.5 * (in_x + in_y) - expected)
    }

    #[test]
    fn nmi_examples() {
        let x = part(&[0, 0, 1, 1]);
        assert_eq!(nmi(&x, &x).unwrap(), 1.0);
        assert_relative_eq!(nmi(&x, &part(&[0, 1, 0, 1])).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(nmi(&x, &Partition::single(4)).unwrap(), 0.0);
        assert_eq!(
            nmi(&Partition::single(4), &Partition::single(4)).unwrap(),
            1.0
        );
    }

    #[test]
    fn ari_examples() {
        let x = part(&[0, 0, 1, 1]);
        let y = part(&[0, 1, 0, 1]);
        assert_eq!(ari(&x, &x).unwrap(), 1.0);
        let value = ari(&x, &y).unwrap();
        assert_relative_eq!(value, ari_by_pairs(&x, &y), epsilon = 1e-12);
        assert_relative_eq!(value, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn ari_degenerate_denominators() {
        let s = Partition::singletons(5);
        let one = Partition::single(5);
        assert_eq!(ari(&s, &s).unwrap(), 1.0);
        assert_eq!(ari(&one, &one).unwrap(), 1.0);
        assert_eq!(ari(&s, &one).unwrap(), 0.0);
    }

    #[test]
    fn ari_matches_pair_counting() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(3..30);
            let kx = rng.gen_range(1..6);
            let ky = rng.gen_range(2..6);
            let x: Vec<usize> = (0..n).map(|_| rng.gen_range(0..kx)).collect();
            let y: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ky)).collect();
            let (x, y) = (part(&x), part(&y));
            if x.community_count() < 2 || y.community_count() < 2 {
                continue;
            }
            let expected = ari_by_pairs(&x, &y);
            if expected.is_nan() {
                continue;
            }
            assert_relative_eq!(ari(&x, &y).unwrap(), expected, epsilon = 1e-9);
        }
    }

    #[test]
    fn random_partitions_have_near_zero_ari() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let trials = 1000;
        let mut sum = 0.0;
        for _ in 0..trials {
            let x: Vec<usize> = (0..100).map(|_| rng.gen_range(0..4)).collect();
            let y: Vec<usize> = (0..100).map(|_| rng.gen_range(0..4)).collect();
            sum += ari(&part(&x), &part(&y)).unwrap();
        }
        assert!((sum / trials as f64).abs() < 0.05);
    }
}
