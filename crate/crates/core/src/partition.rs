use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of every node to exactly one community.
///
/// Community IDs are dense and canonical: they are numbered in order of
/// first appearance when scanning nodes `0..n`. Two partitions that group
/// nodes identically therefore compare equal regardless of the labels they
/// were built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Builds a partition from arbitrary per-node labels.
    pub fn from_labels<L: Eq + Hash + Clone>(labels: &[L]) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            count: ids.len(),
        }
    }

    pub fn from_assignment(assignment: &[usize]) -> Self {
        Self::from_labels(assignment)
    }

    /// Builds a partition over `n` nodes from explicit community member lists.
    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("community {c} is empty")));
            }
            for &v in members {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} out of range for {n} nodes"
                    )));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} assigned more than once"
                    )));
                }
                labels[v] = c;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is unassigned")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Member lists indexed by community ID; members are in ascending order.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.assignment {
            out[c] += 1;
        }
        out
    }

    pub(crate) fn check_same_nodes(&self, other: &Partition) -> Result<()> {
        if self.node_count() != other.node_count() {
            return Err(Error::PartitionMismatch(format!(
                "{} nodes vs {} nodes",
                self.node_count(),
                other.node_count()
            )));
        }
        Ok(())
    }
}
