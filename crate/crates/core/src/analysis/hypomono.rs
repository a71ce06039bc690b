use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{BehavioralPolicy, GameTree};
use crate::solvers::{AdvantageMap, AdvantageWorkspace};

/// Sampled estimate of the local hypomonotonicity constant around an anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct HypomonotonicityProbe {
    pub anchor: BehavioralPolicy,
    pub samples: Vec<BehavioralPolicy>,
    /// `<pi - anchor, w(pi) - w(anchor)> / ||pi - anchor||^2` over
    /// (infoset, action) coordinates, one entry per sample.
    pub ratios: Vec<f64>,
    /// Same ratio with every coordinate weighted by the anchor's external
    /// reach of its infoset.
    pub weighted_ratios: Vec<f64>,
    pub mu_estimate: f64,
    pub weighted_mu_estimate: f64,
    /// Draws rejected because they coincided with the anchor.
    pub resampled: usize,
}

/// Infoset-level ratio between two policies; `None` when they coincide.
pub fn hypomonotonicity_ratio(tree: &GameTree, pi: &BehavioralPolicy, anchor: &BehavioralPolicy) -> Result<Option<f64>> {
    let mut ws = AdvantageWorkspace::new();
    let mut wa = AdvantageMap::zeros(tree);
    let mut wp = AdvantageMap::zeros(tree);
    ws.compute(tree, anchor, &mut wa)?;
    ws.compute(tree, pi, &mut wp)?;
    let (num, den) = inner(pi, anchor, &wp, &wa, None);
    Ok((den > 0.0).then(|| num / den))
}

fn inner(
    pi: &BehavioralPolicy,
    anchor: &BehavioralPolicy,
    wp: &AdvantageMap,
    wa: &AdvantageMap,
    weights: Option<&[f64]>,
) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    let (p, a) = (pi.values(), anchor.values());
    let (vp, va) = (wp.values.values(), wa.values.values());
    let offsets = pi.table().offsets();
    for x in 0..offsets.len() - 1 {
        let wx = weights.map_or(1.0, |reach| reach[x]);
        for s in offsets[x]..offsets[x + 1] {
            let d = p[s] - a[s];
            num += wx * d * (vp[s] - va[s]);
            den += wx * d * d;
        }
    }
    (num, den)
}

/// Draws `n_samples` policies within L-infinity distance `radius` of the
/// anchor and reports the largest ratio.
///
/// Each sample mixes a Dirichlet(1) policy `d` into the anchor,
/// `pi = (1 - t) anchor + t d`, with `t` uniform on `(0, t_max]` and `t_max`
/// chosen so that `||pi - anchor|| <= radius`. Convex mixing stays on the
/// simplex, so no projection is needed.
pub fn probe_hypomonotonicity(
    tree: &GameTree,
    anchor: &BehavioralPolicy,
    n_samples: usize,
    radius: f64,
    seed: u64,
) -> Result<HypomonotonicityProbe> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be > 0, got {radius}")));
    }
    anchor.validate(tree)?;
    if !anchor.is_strictly_positive() {
        return Err(Error::InvalidParameter("anchor policy must be strictly positive".into()));
    }
    let mut rng = crate::rng(seed);
    let mut ws = AdvantageWorkspace::new();
    let mut wa = AdvantageMap::zeros(tree);
    let mut wp = AdvantageMap::zeros(tree);
    ws.compute(tree, anchor, &mut wa)?;
    let reach = wa.external_reach.clone();

    let mut probe = HypomonotonicityProbe {
        anchor: anchor.clone(),
        samples: Vec::with_capacity(n_samples),
        ratios: Vec::with_capacity(n_samples),
        weighted_ratios: Vec::with_capacity(n_samples),
        mu_estimate: f64::NEG_INFINITY,
        weighted_mu_estimate: f64::NEG_INFINITY,
        resampled: 0,
    };
    while probe.samples.len() < n_samples {
        let d = BehavioralPolicy::random(tree, &mut rng, 0.0);
        let dist = d.max_abs_diff(anchor);
        let u: f64 = 1.0 - rng.random::<f64>();
        let t = u * if dist > radius { radius / dist } else { 1.0 };
        let mut table = anchor.table().clone();
        for (v, &dv) in table.values_mut().iter_mut().zip(d.values()) {
            *v = (1.0 - t) * *v + t * dv;
        }
        let pi = BehavioralPolicy::from_table(tree, table)?;
        ws.compute(tree, &pi, &mut wp)?;
        let (num, den) = inner(&pi, anchor, &wp, &wa, None);
        let (wnum, wden) = inner(&pi, anchor, &wp, &wa, Some(&reach));
        if den <= 0.0 {
            probe.resampled += 1;
            if probe.resampled > 1000 * n_samples {
                return Err(Error::InvalidParameter("could not draw a policy distinct from the anchor".into()));
            }
            continue;
        }
        let r = num / den;
        let wr = if wden > 0.0 { wnum / wden } else { 0.0 };
        probe.mu_estimate = probe.mu_estimate.max(r);
        probe.weighted_mu_estimate = probe.weighted_mu_estimate.max(wr);
        probe.ratios.push(r);
        probe.weighted_ratios.push(wr);
        probe.samples.push(pi);
    }
    Ok(probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::synthetic;

    #[test]
    fn zero_sum_matrix_game_is_monotone() {
        let tree = synthetic::matching_pennies().unwrap();
        let probe = probe_hypomonotonicity(&tree, &BehavioralPolicy::uniform(&tree), 200, 0.3, 7).unwrap();
        assert_eq!(probe.ratios.len(), 200);
        assert!(probe.mu_estimate <= 1e-12, "{}", probe.mu_estimate);
        for (s, _) in probe.samples.iter().zip(&probe.ratios) {
            assert!(s.max_abs_diff(&probe.anchor) <= 0.3 + 1e-12);
        }
    }

    #[test]
    fn ratio_is_symmetric_and_undefined_at_anchor() {
        let tree = synthetic::two_step(0.9).unwrap();
        let mut rng = crate::rng(1);
        let a = BehavioralPolicy::random(&tree, &mut rng, 0.1);
        let b = BehavioralPolicy::random(&tree, &mut rng, 0.1);
        let ab = hypomonotonicity_ratio(&tree, &a, &b).unwrap().unwrap();
        let ba = hypomonotonicity_ratio(&tree, &b, &a).unwrap().unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert_eq!(hypomonotonicity_ratio(&tree, &a, &a).unwrap(), None);
    }

    #[test]
    fn rejects_bad_arguments() {
        let tree = synthetic::matching_pennies().unwrap();
        let u = BehavioralPolicy::uniform(&tree);
        assert!(probe_hypomonotonicity(&tree, &u, 0, 0.1, 0).is_err());
        assert!(probe_hypomonotonicity(&tree, &u, 5, 0.0, 0).is_err());
        let pure = BehavioralPolicy::pure(&tree, &[0, 0]).unwrap();
        assert!(probe_hypomonotonicity(&tree, &pure, 5, 0.1, 0).is_err());
    }
}
