use super::plogp;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Overlap counts between two partitions: `count(i, j)` is the number of
/// nodes in community `i` of the first partition and community `j` of the
/// second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    rows: usize,
    cols: usize,
    counts: Vec<usize>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    n: usize,
}

impl ConfusionMatrix {
    pub fn from_counts(rows: Vec<Vec<usize>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged confusion matrix".into()));
        }
        let counts: Vec<usize> = rows.into_iter().flatten().collect();
        Ok(Self::from_flat(r, c, counts))
    }

    fn from_flat(rows: usize, cols: usize, counts: Vec<usize>) -> Self {
        let mut row_sums = vec![0; rows];
        let mut col_sums = vec![0; cols];
        for i in 0..rows {
            for j in 0..cols {
                let x = counts[i * cols + j];
                row_sums[i] += x;
                col_sums[j] += x;
            }
        }
        let n = row_sums.iter().sum();
        ConfusionMatrix {
            rows,
            cols,
            counts,
            row_sums,
            col_sums,
            n,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.cols + j]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.n
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.counts
            .chunks(self.cols.max(1))
            .map(<[usize]>::to_vec)
            .collect()
    }
}

pub fn confusion(before: &Partition, after: &Partition) -> Result<ConfusionMatrix> {
    before.check_same_nodes(after)?;
    let rows = before.community_count();
    let cols = after.community_count();
    let mut counts = vec![0usize; rows * cols];
    for (&a, &b) in before.assignment().iter().zip(after.assignment()) {
        counts[a * cols + b] += 1;
    }
    Ok(ConfusionMatrix::from_flat(rows, cols, counts))
}

/// Row and column conditional entropies `(E_Mr, E_Mc)` in bits.
///
/// `E_Mr` averages, over rows weighted by row mass, the entropy of each
/// row's spread across columns, so `0 <= E_Mr <= log2(cols)`; `E_Mc` is the
/// same over columns, bounded by `log2(rows)`.
pub fn global_entropies(m: &ConfusionMatrix) -> (f64, f64) {
    let n = m.n as f64;
    if m.n == 0 {
        return (0.0, 0.0);
    }
    let mut e_r = 0.0;
    for i in 0..m.rows {
        let s = m.row_sums[i];
        if s == 0 {
            continue;
        }
        let h: f64 = (0..m.cols)
            .map(|j| plogp(m.count(i, j) as f64 / s as f64))
            .sum();
        e_r -= s as f64 / n * h;
    }
    let mut e_c = 0.0;
    for j in 0..m.cols {
        let s = m.col_sums[j];
        if s == 0 {
            continue;
        }
        let h: f64 = (0..m.rows)
            .map(|i| plogp(m.count(i, j) as f64 / s as f64))
            .sum();
        e_c -= s as f64 / n * h;
    }
    (e_r.max(0.0), e_c.max(0.0))
}

/// Per detected community: how many members come from the target community
/// (`inside`) and how many do not (`outside`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetConfusion {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

impl TargetConfusion {
    pub fn new(inside: Vec<usize>, outside: Vec<usize>) -> Result<Self> {
        if inside.len() != outside.len() {
            return Err(Error::InvalidArgument(
                "inside/outside count vectors differ in length".into(),
            ));
        }
        Ok(TargetConfusion { inside, outside })
    }

    pub fn target_size(&self) -> usize {
        self.inside.iter().sum()
    }

    pub fn community_count(&self) -> usize {
        self.inside.len()
    }

    /// Size of detected community `i` (`M_i.`).
    pub fn community_size(&self, i: usize) -> usize {
        self.inside[i] + self.outside[i]
    }
}

/// Builds the two-column confusion of a target node set against `after`.
pub fn target_confusion(target: &[usize], after: &Partition) -> Result<TargetConfusion> {
    let mut inside = vec![0usize; after.community_count()];
    let mut mask = vec![false; after.node_count()];
    for &v in target {
        if v >= mask.len() {
            return Err(Error::InvalidArgument(format!(
                "target node {v} out of range"
            )));
        }
        if !mask[v] {
            mask[v] = true;
            inside[after.community_of(v)] += 1;
        }
    }
    let outside = after
        .sizes()
        .iter()
        .zip(&inside)
        .map(|(&s, &i)| s - i)
        .collect();
    TargetConfusion::new(inside, outside)
}

/// Target-community entropies `(E_Mr, E_Mc)` in bits for a graph of `n`
/// nodes. `E_Mr` measures how mixed the detected communities holding target
/// nodes are (in `[0, 1]`); `E_Mc` how widely the target is spread across
/// detected communities (in `[0, log2(community_count)]`).
pub fn target_entropies(t: &TargetConfusion, n: usize) -> Result<(f64, f64)> {
    let size = t.target_size();
    if size == 0 {
        return Err(Error::InvalidArgument("target community is empty".into()));
    }
    let mut e_r = 0.0;
    let mut e_c = 0.0;
    for i in 0..t.community_count() {
        let s = t.community_size(i);
        if s == 0 {
            continue;
        }
        let s_f = s as f64;
        let h = plogp(t.inside[i] as f64 / s_f) + plogp(t.outside[i] as f64 / s_f);
        e_r -= s_f / n as f64 * h;
        e_c -= plogp(t.inside[i] as f64 / size as f64);
    }
    Ok((e_r.max(0.0), e_c.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn part(a: &[usize]) -> Partition {
        Partition::from_assignment(a)
    }

    #[test]
    fn confusion_examples() {
        let x = part(&[0, 0, 1, 1]);
        assert_eq!(
            confusion(&x, &x).unwrap().to_rows(),
            vec![vec![2, 0], vec![0, 2]]
        );
        let y = part(&[0, 1, 0, 1]);
        assert_eq!(
            confusion(&x, &y).unwrap().to_rows(),
            vec![vec![1, 1], vec![1, 1]]
        );
        let all = Partition::single(4);
        let singles = Partition::singletons(4);
        assert_eq!(
            confusion(&all, &singles).unwrap().to_rows(),
            vec![vec![1, 1, 1, 1]]
        );
        assert!(confusion(&x, &Partition::single(3)).is_err());
    }

    #[test]
    fn global_entropy_examples() {
        let diag = ConfusionMatrix::from_counts(vec![vec![3, 0], vec![0, 5]]).unwrap();
        assert_eq!(global_entropies(&diag), (0.0, 0.0));

        let uniform = ConfusionMatrix::from_counts(vec![vec![2; 4]; 4]).unwrap();
        let (r, c) = global_entropies(&uniform);
        assert_relative_eq!(r, 2.0, epsilon = 1e-12);
        assert_relative_eq!(c, 2.0, epsilon = 1e-12);

        let m = ConfusionMatrix::from_counts(vec![vec![2, 2], vec![0, 4]]).unwrap();
        assert_relative_eq!(global_entropies(&m).0, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn target_entropy_examples() {
        // target {0,1,2,3} intact as one detected community
        let after = part(&[0, 0, 0, 0, 1, 1, 1, 1]);
        let t = target_confusion(&[0, 1, 2, 3], &after).unwrap();
        assert_eq!(target_entropies(&t, 8).unwrap(), (0.0, 0.0));

        // four target nodes, one in each of four 2-node communities
        let after = part(&[0, 1, 2, 3, 0, 1, 2, 3]);
        let t = target_confusion(&[0, 1, 2, 3], &after).unwrap();
        let (r, c) = target_entropies(&t, 8).unwrap();
        assert_relative_eq!(r, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c, 2.0, epsilon = 1e-12);

        // target of two split into two pure singleton communities
        let after = part(&[0, 1, 2, 2]);
        let t = target_confusion(&[0, 1], &after).unwrap();
        let (r, c) = target_entropies(&t, 4).unwrap();
        assert_relative_eq!(r, 0.0, epsilon = 1e-12);
        assert_relative_eq!(c, 1.0, epsilon = 1e-12);

        let empty = TargetConfusion::new(vec![0, 0], vec![1, 2]).unwrap();
        assert!(target_entropies(&empty, 3).is_err());
    }

    #[test]
    fn target_outside_counts_complement_community_sizes() {
        let after = part(&[0, 0, 1, 1, 1, 2]);
        let t = target_confusion(&[1, 2, 5], &after).unwrap();
        for i in 0..t.community_count() {
            assert_eq!(t.outside[i], after.sizes()[i] - t.inside[i]);
        }
    }
}
