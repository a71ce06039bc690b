use crate::error::{Error, Result};
use crate::game::{BehavioralPolicy, InfosetTable};

/// Entropy-regularized choice map: `pi(x, a) ∝ exp(y(x, a) / eps)` per infoset.
pub fn softmax_choice(scores: &InfosetTable, eps: f64) -> Result<BehavioralPolicy> {
    let mut out = scores.clone();
    softmax_into(scores, eps, &mut out)?;
    Ok(BehavioralPolicy::from_table_unchecked(out))
}

/// Writes the softmax of `scores` into `out` (same layout).
pub fn softmax_into(scores: &InfosetTable, eps: f64, out: &mut InfosetTable) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("softmax temperature must be > 0, got {eps}")));
    }
    debug_assert_eq!(scores.offsets(), out.offsets());
    for x in 0..scores.num_infosets() {
        softmax_row(scores.get(x), eps, out.get_mut(x));
    }
    Ok(())
}

pub(crate) fn softmax_row(y: &[f64], eps: f64, out: &mut [f64]) {
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &v) in out.iter_mut().zip(y) {
        *o = ((v - max) / eps).exp();
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}
