use serde::Serialize;

use super::context::node_attack_succeeds;
use crate::detect::Detector;
use crate::error::Result;
use crate::graph::Graph;
use crate::metrics::{ari, deception_score, nmi};
use crate::partition::Partition;

/// What an attack was aimed at, independent of any detection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackTarget {
    Whole,
    Members(Vec<usize>),
    Node(usize),
}

/// Evaluation of one detector on an adversarial graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorMetrics {
    pub detector: Detector,
    /// Against the same detector's output on the original graph.
    pub nmi_det: f64,
    pub ari_det: f64,
    pub nmi_gt: Option<f64>,
    pub ari_gt: Option<f64>,
    /// Deception score of a target community.
    pub h: Option<f64>,
    /// Target-node success δ.
    pub delta: Option<bool>,
}

/// Runs every detector on `original` and `adversarial` and compares.
pub fn assess(
    original: &Graph,
    adversarial: &Graph,
    target: &AttackTarget,
    detectors: &[Detector],
    seed: u64,
    ground_truth: Option<&Partition>,
    epsilon: f64,
) -> Result<Vec<DetectorMetrics>> {
    detectors
        .iter()
        .map(|&detector| {
            let before = detector.detect(original, seed);
            let after = detector.detect(adversarial, seed);
            let (nmi_gt, ari_gt) = match ground_truth {
                Some(gt) => (Some(nmi(gt, &after)?), Some(ari(gt, &after)?)),
                None => (None, None),
            };
            let h = match target {
                AttackTarget::Members(members) if members.len() >= 2 => {
                    Some(deception_score(members, &after, adversarial)?)
                }
                _ => None,
            };
            let delta = match target {
                AttackTarget::Node(t) => Some(node_attack_succeeds(
                    &before,
                    before.community_of(*t),
                    &after,
                    *t,
                    epsilon,
                )),
                _ => None,
            };
            Ok(DetectorMetrics {
                detector,
                nmi_det: nmi(&before, &after)?,
                ari_det: ari(&before, &after)?,
                nmi_gt,
                ari_gt,
                h,
                delta,
            })
        })
        .collect()
}
