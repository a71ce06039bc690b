use super::{normalize_rows, StepInfo, Workspace};
use crate::error::Result;
use crate::game::{BehavioralPolicy, GameTree, InfosetTable};

/// Vanilla CFR with simultaneous updates for all players.
///
/// Counterfactual regrets are the external-reach weighted advantages
/// (unnormalised); the average policy accumulates own-reach weighted iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct CfrState {
    pub iteration: u64,
    pub regrets: InfosetTable,
    pub average: InfosetTable,
}

/// Positive-part regret matching; uniform when no regret is positive.
pub fn regret_matching(regrets: &[f64], out: &mut [f64]) {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    if total > 0.0 {
        for (o, r) in out.iter_mut().zip(regrets) {
            *o = r.max(0.0) / total;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

impl CfrState {
    pub fn new(tree: &GameTree) -> Self {
        Self { iteration: 0, regrets: InfosetTable::zeros(tree), average: InfosetTable::zeros(tree) }
    }

    pub fn current_policy(&self) -> BehavioralPolicy {
        let mut t = self.regrets.clone();
        for x in 0..t.num_infosets() {
            regret_matching(self.regrets.get(x), t.get_mut(x));
        }
        BehavioralPolicy::from_table_unchecked(t)
    }

    pub fn average_policy(&self) -> BehavioralPolicy {
        normalize_rows(&self.average)
    }

    /// Residual reported is `||w(sigma)||` for the regret-matching policy.
    pub fn step(&mut self, tree: &GameTree, ws: &mut Workspace) -> Result<StepInfo> {
        let sigma = self.current_policy();
        let w = ws.advantage(tree, &sigma)?;
        let residual = w.values.sup_norm();
        for x in 0..tree.num_infosets() {
            if w.is_unreached(x) {
                continue;
            }
            let reach = w.external_reach[x];
            for (r, &adv) in self.regrets.get_mut(x).iter_mut().zip(w.get(x)) {
                *r += reach * adv;
            }
            let own = w.own_reach[x];
            for (acc, &p) in self.average.get_mut(x).iter_mut().zip(sigma.get(x)) {
                *acc += own * p;
            }
        }
        self.iteration += 1;
        Ok(StepInfo { residual })
    }
}
