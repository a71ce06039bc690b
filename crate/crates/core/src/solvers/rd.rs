use super::{init_scores, normalize_rows, softmax, validate_params, ScoreInit, ScoreParams, StepInfo, Workspace};
use crate::error::Result;
use crate::game::{BehavioralPolicy, GameTree, InfosetTable};

/// Which advantage drives the RD score update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RdWeighting {
    /// `y += lambda * w`, the same reach-normalised map IESL uses.
    Conditional,
    /// `y += lambda * r_-i(x) * w`, i.e. counterfactual advantages.
    #[default]
    Counterfactual,
}

impl RdWeighting {
    pub fn as_str(self) -> &'static str {
        match self {
            RdWeighting::Conditional => "conditional",
            RdWeighting::Counterfactual => "counterfactual",
        }
    }
}

impl std::str::FromStr for RdWeighting {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "conditional" => Ok(RdWeighting::Conditional),
            "counterfactual" => Ok(RdWeighting::Counterfactual),
            other => Err(crate::error::Error::Config(format!("unknown rd weighting `{other}`"))),
        }
    }
}

/// Replicator dynamics in score form: `y <- y + lambda w(softmax(y / eps))`.
///
/// This is IESL without the decay term. Scores are unbounded in general; the
/// reported policy is the uniform average of the per-iteration softmax
/// policies. With [`RdWeighting::Counterfactual`] each infoset's advantage is
/// scaled by its external reach before the update.
#[derive(Debug, Clone, PartialEq)]
pub struct RdState {
    pub params: ScoreParams,
    pub weighting: RdWeighting,
    pub iteration: u64,
    pub scores: InfosetTable,
    /// Sum of the instantaneous policies played so far.
    pub policy_sum: InfosetTable,
    policy: InfosetTable,
}

impl RdState {
    pub fn new(tree: &GameTree, params: ScoreParams, init: ScoreInit) -> Result<Self> {
        let scores = init_scores(tree, init);
        let sum = InfosetTable::zeros(tree);
        Self::from_parts(params, 0, scores, sum)
    }

    pub fn from_parts(
        params: ScoreParams,
        iteration: u64,
        scores: InfosetTable,
        policy_sum: InfosetTable,
    ) -> Result<Self> {
        validate_params(params, None)?;
        let mut policy = scores.clone();
        softmax::softmax_into(&scores, params.eps, &mut policy)?;
        Ok(Self { params, weighting: RdWeighting::default(), iteration, scores, policy_sum, policy })
    }

    pub fn with_weighting(mut self, weighting: RdWeighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn current_policy(&self) -> BehavioralPolicy {
        BehavioralPolicy::from_table_unchecked(self.policy.clone())
    }

    /// Uniform average of the iterates; the current policy before any step.
    pub fn average_policy(&self) -> BehavioralPolicy {
        if self.iteration == 0 {
            return self.current_policy();
        }
        normalize_rows(&self.policy_sum)
    }

    /// Residual reported is `||w||`, the velocity of the scores.
    pub fn step(&mut self, tree: &GameTree, ws: &mut Workspace) -> Result<StepInfo> {
        let ScoreParams { eps, lambda } = self.params;
        let pi = BehavioralPolicy::from_table_unchecked(std::mem::replace(
            &mut self.policy,
            InfosetTable::zeros(tree),
        ));
        let w = ws.advantage(tree, &pi)?;
        let residual = w.values.sup_norm();
        for x in 0..tree.num_infosets() {
            let step = match self.weighting {
                RdWeighting::Conditional => lambda,
                RdWeighting::Counterfactual => lambda * w.external_reach[x],
            };
            for (y, &wv) in self.scores.get_mut(x).iter_mut().zip(w.get(x)) {
                *y += step * wv;
            }
        }
        for (acc, &p) in self.policy_sum.values_mut().iter_mut().zip(pi.values()) {
            *acc += p;
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

    #[test]
    fn zero_advantage_is_rest_point() {
        let tree = synthetic::matching_pennies().unwrap();
        let mut s = RdState::new(&tree, ScoreParams { eps: 0.1, lambda: 0.1 }, ScoreInit::Zero).unwrap();
        let before = s.current_policy();
        let mut ws = Workspace::new();
        for _ in 0..5 {
            s.step(&tree, &mut ws).unwrap();
        }
        assert_eq!(s.scores.sup_norm(), 0.0);
        assert_eq!(s.current_policy(), before);
    }

    #[test]
    fn constant_advantage_grows_without_bound() {
        // With a huge temperature the policy stays uniform, so w = (1, -1).
        let mut b = TreeBuilder::new("one", 1, 1.0);
        let root = b.decision(0, "x", &["a", "b"]);
        let t1 = b.terminal(&[1.0]);
        let t2 = b.terminal(&[-1.0]);
        b.set_children(root, &[t1, t2], None);
        let tree = b.finish().unwrap();
        let params = ScoreParams { eps: 1e9, lambda: 0.1 };
        let mut rd = RdState::new(&tree, params, ScoreInit::Zero).unwrap().with_weighting(RdWeighting::Conditional);
        let mut iesl = super::super::IeslState::new(&tree, params, ScoreInit::Zero).unwrap();
        let mut ws = Workspace::new();
        for _ in 0..2000 {
            rd.step(&tree, &mut ws).unwrap();
            iesl.step(&tree, &mut ws).unwrap();
        }
        assert!((rd.scores.get(0)[0] - 200.0).abs() < 1e-3, "{:?}", rd.scores);
        assert!(iesl.scores.sup_norm() <= 1.0 + 1e-9, "{:?}", iesl.scores);
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let tree = synthetic::matching_pennies().unwrap();
        assert!(RdState::new(&tree, ScoreParams { eps: 0.1, lambda: 0.0 }, ScoreInit::Zero).is_err());
        // RD has no upper limit on the step.
        assert!(RdState::new(&tree, ScoreParams { eps: 0.1, lambda: 2.0 }, ScoreInit::Zero).is_ok());
    }
}
