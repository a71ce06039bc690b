use super::{StepInfo, Workspace};
use crate::error::Result;
use crate::game::{BehavioralPolicy, GameTree};

/// Extensive-form fictitious play.
///
/// Each iteration computes an exact best response for every player against
/// the current average profile and mixes it in at rate `1 / (k + 2)`. Mixing
/// is realization-equivalent: at each infoset the new average is the convex
/// combination of the old average and the best response, weighted by each
/// policy's own reach of that infoset.
#[derive(Debug, Clone, PartialEq)]
pub struct FpState {
    pub iteration: u64,
    average: BehavioralPolicy,
}

impl FpState {
    pub fn new(tree: &GameTree) -> Self {
        Self { iteration: 0, average: BehavioralPolicy::uniform(tree) }
    }

    pub fn from_average(iteration: u64, average: BehavioralPolicy) -> Self {
        Self { iteration, average }
    }

    pub fn average_policy(&self) -> &BehavioralPolicy {
        &self.average
    }

    pub fn mixing_rate(iteration: u64) -> f64 {
        1.0 / (iteration as f64 + 2.0)
    }

    /// Residual reported is `||w(average)||`.
    pub fn step(&mut self, tree: &GameTree, ws: &mut Workspace) -> Result<StepInfo> {
        let w = ws.advantage(tree, &self.average)?;
        let residual = w.values.sup_norm();
        let avg_reach = w.own_reach.clone();

        let mut response = self.average.clone();
        for p in 0..tree.num_players() {
            let actions = ws.evaluator.best_response_actions(tree, &self.average, p);
            for x in tree.player_infosets(p) {
                let mut row = vec![0.0; x.num_actions()];
                row[actions[x.id]] = 1.0;
                response.set_row(x.id, &row);
            }
        }
        let reach = &mut ws.advantages.reach;
        reach.compute_into(tree, &response)?;
        let alpha = Self::mixing_rate(self.iteration);
        let mut row = Vec::new();
        for x in tree.infosets() {
            let member = x.members[0];
            let old_w = (1.0 - alpha) * avg_reach[x.id];
            let new_w = alpha * reach.own(member, x.player);
            let total = old_w + new_w;
            if total <= 0.0 {
                continue;
            }
            row.clear();
            row.extend(
                self.average.get(x.id).iter().zip(response.get(x.id)).map(|(a, b)| (old_w * a + new_w * b) / total),
            );
            self.average.set_row(x.id, &row);
        }
        self.iteration += 1;
        Ok(StepInfo { residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::nashconv;
    use crate::game::synthetic;

    #[test]
    fn first_step_is_equal_mix() {
        let tree = synthetic::matching_pennies().unwrap();
        // Against a uniform opponent every action ties; best response picks
        // action 0, so the first average is (0.75, 0.25) for both players.
        let mut s = FpState::new(&tree);
        s.step(&tree, &mut Workspace::new()).unwrap();
        assert_eq!(s.average_policy().get(0), &[0.75, 0.25]);
        assert_eq!(s.average_policy().get(1), &[0.75, 0.25]);
        assert_eq!(FpState::mixing_rate(0), 0.5);
    }

    #[test]
    fn matching_pennies_nashconv_shrinks() {
        let tree = synthetic::matching_pennies().unwrap();
        let mut s = FpState::new(&tree);
        let mut ws = Workspace::new();
        let mut at10 = 0.0;
        for k in 1..=1000 {
            s.step(&tree, &mut ws).unwrap();
            if k == 10 {
                at10 = nashconv(&tree, s.average_policy()).unwrap().nashconv;
            }
        }
        let at1000 = nashconv(&tree, s.average_policy()).unwrap().nashconv;
        assert!(at1000 < at10, "{at1000} !< {at10}");
        for x in 0..2 {
            assert!((s.average_policy().get(x)[0] - 0.5).abs() < 0.05);
        }
    }
}
