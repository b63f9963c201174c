//! Attack-effect scores and evaluation metrics.

mod compare;
mod confusion;
mod deception;

pub use compare::{ari, nmi};
pub use confusion::{
    confusion, global_entropies, target_confusion, target_entropies, ConfusionMatrix,
    TargetConfusion,
};
pub use deception::deception_score;

use crate::error::{Error, Result};
use crate::graph::DegreeSequence;

/// `p * log2(p)` with `0 log 0 = 0`.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Quarter of the L1 distance between two degree sequences.
pub fn degree_distance(before: &DegreeSequence, after: &DegreeSequence) -> Result<f64> {
    if before.len() != after.len() {
        return Err(Error::InvalidArgument(format!(
            "degree sequences differ in length: {} vs {}",
            before.len(),
            after.len()
        )));
    }
    let l1: usize = before
        .0
        .iter()
        .zip(&after.0)
        .map(|(&a, &b)| a.abs_diff(b))
        .sum();
    Ok(l1 as f64 / 4.0)
}

/// Exponential attenuation `exp(-c d')`.
pub fn attenuation(d_prime: f64, c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::config(
            "c",
            format!("attenuation factor must be > 0, got {c}"),
        ));
    }
    if d_prime.is_nan() || d_prime < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "normalized degree distance must be >= 0, got {d_prime}"
        )));
    }
    Ok((-c * d_prime).exp())
}
