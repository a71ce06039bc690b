use super::{init_scores, softmax, validate_params, ScoreInit, ScoreParams, StepInfo, Workspace};
use crate::error::Result;
use crate::game::{BehavioralPolicy, GameTree, InfosetTable};

/// Exponential-decay score dynamic, forward-Euler discretised with merged
/// step `lambda`: `y <- (1 - lambda) y + lambda w(softmax(y / eps))`.
///
/// The update is a convex combination, so `||y||` never exceeds
/// `max(||y_0||, sup ||w||)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IeslState {
    pub params: ScoreParams,
    pub iteration: u64,
    pub scores: InfosetTable,
    policy: InfosetTable,
}

impl IeslState {
    pub fn new(tree: &GameTree, params: ScoreParams, init: ScoreInit) -> Result<Self> {
        Self::from_scores(params, 0, init_scores(tree, init))
    }

    pub fn from_scores(params: ScoreParams, iteration: u64, scores: InfosetTable) -> Result<Self> {
        validate_params(params, Some(1.0))?;
        let mut policy = scores.clone();
        softmax::softmax_into(&scores, params.eps, &mut policy)?;
        Ok(Self { params, iteration, scores, policy })
    }

    pub fn current_policy(&self) -> BehavioralPolicy {
        BehavioralPolicy::from_table_unchecked(self.policy.clone())
    }

    /// `||w(softmax(y)) - y||` for the current scores, without stepping.
    pub fn rest_point_residual(&self, tree: &GameTree, ws: &mut Workspace) -> Result<f64> {
        let pi = BehavioralPolicy::from_table_unchecked(self.policy.clone());
        let w = ws.advantage(tree, &pi)?;
        Ok(w.values.max_abs_diff(&self.scores))
    }

    pub fn step(&mut self, tree: &GameTree, ws: &mut Workspace) -> Result<StepInfo> {
        let ScoreParams { eps, lambda } = self.params;
        let pi = BehavioralPolicy::from_table_unchecked(std::mem::replace(
            &mut self.policy,
            InfosetTable::zeros(tree),
        ));
        let w = ws.advantage(tree, &pi)?;
        let residual = w.values.max_abs_diff(&self.scores);
        for (y, &wv) in self.scores.values_mut().iter_mut().zip(w.values.values()) {
            *y = (1.0 - lambda) * *y + lambda * wv;
        }
        self.policy = pi.into_table();
        softmax::softmax_into(&self.scores, eps, &mut self.policy)?;
        self.iteration += 1;
        Ok(StepInfo { residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{synthetic, TreeBuilder};
    use crate::solvers::advantage_map;

    /// Single-player, single-infoset game with payoffs (1, -1): at the
    /// uniform start V = 0, so w = (1, -1).
    #[test]
    fn single_update_arithmetic() {
        let mut b = TreeBuilder::new("one", 1, 1.0);
        let root = b.decision(0, "x", &["a", "b"]);
        let t1 = b.terminal(&[1.0]);
        let t2 = b.terminal(&[-1.0]);
        b.set_children(root, &[t1, t2], None);
        let tree = b.finish().unwrap();
        let mut s = IeslState::new(&tree, ScoreParams { eps: 0.1, lambda: 0.5 }, ScoreInit::Zero).unwrap();
        let mut ws = Workspace::new();
        // Uniform policy: V = 0, so w = (1, -1).
        let info = s.step(&tree, &mut ws).unwrap();
        assert_eq!(s.scores.values(), &[0.5, -0.5]);
        assert_eq!(info.residual, 1.0);
        assert_eq!(s.iteration, 1);
    }

    #[test]
    fn rest_point_is_fixed() {
        // Matching pennies: y = 0 gives the uniform policy whose w is 0.
        let tree = synthetic::matching_pennies().unwrap();
        let mut s = IeslState::new(&tree, ScoreParams { eps: 0.3, lambda: 0.2 }, ScoreInit::Zero).unwrap();
        let w = advantage_map(&tree, &s.current_policy()).unwrap();
        assert_eq!(w.values.values(), s.scores.values());
        let before = s.scores.clone();
        let info = s.step(&tree, &mut Workspace::new()).unwrap();
        assert_eq!(s.scores, before);
        assert_eq!(info.residual, 0.0);
    }

    #[test]
    fn rejects_bad_lambda() {
        let tree = synthetic::matching_pennies().unwrap();
        for lambda in [0.0, 1.5, -0.1] {
            assert!(IeslState::new(&tree, ScoreParams { eps: 0.1, lambda }, ScoreInit::Zero).is_err());
        }
        assert!(IeslState::new(&tree, ScoreParams { eps: 0.0, lambda: 0.1 }, ScoreInit::Zero).is_err());
    }
}
