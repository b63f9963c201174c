use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Deception score of a hidden community.
///
/// The first factor rewards keeping the community internally reachable in
/// `adversarial`; the second rewards spreading it thinly across detected
/// communities. Precision and recall are taken over the detected
/// communities that contain at least one target node.
pub fn deception_score(target: &[usize], detected: &Partition, adversarial: &Graph) -> Result<f64> {
    if detected.node_count() != adversarial.node_count() {
        return Err(Error::PartitionMismatch(format!(
            "partition covers {} nodes, graph has {}",
            detected.node_count(),
            adversarial.node_count()
        )));
    }
    let mut members: Vec<usize> = target.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() < 2 {
        return Err(Error::InvalidArgument(
            "deception score needs a community of at least two nodes".into(),
        ));
    }
    if let Some(&v) = members.iter().find(|&&v| v >= adversarial.node_count()) {
        return Err(Error::InvalidArgument(format!(
            "target node {v} out of range"
        )));
    }
    let size = members.len() as f64;
    let components = adversarial.induced_component_count(&members) as f64;
    let reach = 1.0 - (components - 1.0) / (size - 1.0);

    let mut overlap = vec![0usize; detected.community_count()];
    for &v in &members {
        overlap[detected.community_of(v)] += 1;
    }
    let sizes = detected.sizes();
    let mut precision_sum = 0.0;
    let mut hit = 0usize;
    let mut max_recall: f64 = 0.0;
    for (c, &o) in overlap.iter().enumerate() {
        if o == 0 {
            continue;
        }
        hit += 1;
        precision_sum += o as f64 / sizes[c] as f64;
        max_recall = max_recall.max(o as f64 / size);
    }
    let mean_precision = precision_sum / hit as f64;
    let spread = 0.5 * (1.0 - max_recall) + 0.5 * (1.0 - mean_precision);
    Ok((reach * spread).clamp(0.0, 1.0))
}
