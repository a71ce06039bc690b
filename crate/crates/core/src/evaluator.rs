//! Exact best responses, NashConv and the entropy deviation bound.
//!
//! Best responses use tree-form dynamic programming: one top-down pass for
//! the opponents' (and chance) reach, then one bottom-up pass per level of the
//! responder's own decision depth, deepest level first. At each level every
//! infoset picks the action maximising its reach-weighted child values, given
//! the choices already fixed below it.

use crate::error::{Error, Result};
use crate::game::{expected_values, BehavioralPolicy, ExpectedValues, GameTree, NodeId, NodeKind};

/// Best response of one player against the rest of a profile.
#[derive(Debug, Clone)]
pub struct BestResponseResult {
    pub player: usize,
    /// Chosen action per infoset of `player` (indexed by infoset id; other
    /// players' entries are unused and zero).
    pub actions: Vec<usize>,
    /// The profile with `player`'s rows replaced by the pure best response.
    pub br_policy: BehavioralPolicy,
    pub br_value: f64,
    pub baseline_value: f64,
    pub exploitability: f64,
}

#[derive(Debug, Clone)]
pub struct NashConvReport {
    pub nashconv: f64,
    pub per_player: Vec<f64>,
}

/// Deviation bound `eps * ln|A| * sum_{k<T} gamma^k` against measured exploitability.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub eps: f64,
    pub action_count: usize,
    pub horizon: usize,
    pub discount: f64,
    pub bound: f64,
    pub measured_deviation: f64,
    pub satisfied: bool,
}

/// `sum_{k=0}^{T-1} gamma^k` in closed form.
pub fn geometric_sum(gamma: f64, horizon: usize) -> f64 {
    if gamma == 1.0 {
        horizon as f64
    } else {
        (1.0 - gamma.powi(horizon as i32)) / (1.0 - gamma)
    }
}

pub fn deviation_bound(eps: f64, action_count: usize, horizon: usize, gamma: f64) -> f64 {
    if action_count <= 1 {
        return 0.0;
    }
    eps * (action_count as f64).ln() * geometric_sum(gamma, horizon)
}

/// Reusable buffers for repeated best-response evaluation on one tree.
#[derive(Debug, Default)]
pub struct Evaluator {
    weight: Vec<f64>,
    value: Vec<f64>,
    cf: Vec<f64>,
    baseline: ExpectedValues,
    response: ExpectedValues,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn best_response(
        &mut self,
        tree: &GameTree,
        policy: &BehavioralPolicy,
        player: usize,
    ) -> Result<BestResponseResult> {
        if player >= tree.num_players() {
            return Err(Error::InvalidPlayer { player, num_players: tree.num_players() });
        }
        self.baseline.compute_into(tree, policy)?;
        self.best_response_with_baseline(tree, policy, player)
    }

    fn best_response_with_baseline(
        &mut self,
        tree: &GameTree,
        policy: &BehavioralPolicy,
        player: usize,
    ) -> Result<BestResponseResult> {
        let actions = self.best_response_actions(tree, policy, player);
        let mut br = policy.clone();
        for x in tree.player_infosets(player) {
            let mut row = vec![0.0; x.num_actions()];
            row[actions[x.id]] = 1.0;
            br.set_row(x.id, &row);
        }
        self.response.compute_into(tree, &br)?;
        let br_value = self.response.utility(player);
        let baseline_value = self.baseline.utility(player);
        Ok(BestResponseResult {
            player,
            actions,
            br_policy: br,
            br_value,
            baseline_value,
            exploitability: br_value - baseline_value,
        })
    }

    pub(crate) fn best_response_actions(&mut self, tree: &GameTree, policy: &BehavioralPolicy, player: usize) -> Vec<usize> {
        let num_nodes = tree.num_nodes();
        let probs = policy.values();
        let offsets = tree.slot_offsets();
        let gamma = tree.discount();

        // Opponent/chance reach, including the discount prefix, per node.
        self.weight.clear();
        self.weight.resize(num_nodes, 0.0);
        self.weight[0] = 1.0;
        for (id, node) in tree.nodes().iter().enumerate() {
            let w = self.weight[id];
            let kids = tree.children(id as NodeId);
            match node.kind {
                NodeKind::Terminal => {}
                NodeKind::Chance => {
                    for (&c, &p) in kids.iter().zip(tree.chance_probs(id as NodeId)) {
                        self.weight[c as usize] = w * p;
                    }
                }
                NodeKind::Decision => {
                    let slot = offsets[node.infoset as usize];
                    let own = node.player as usize == player;
                    for (a, &c) in kids.iter().enumerate() {
                        let p = if own { 1.0 } else { probs[slot + a] };
                        self.weight[c as usize] = w * p * gamma;
                    }
                }
            }
        }

        let mut chosen = vec![0usize; tree.num_infosets()];
        let depth_of = |x: u32| tree.infoset(x as usize).depth;
        let horizon = tree.player_horizon(player);
        self.value.clear();
        self.value.resize(num_nodes, 0.0);
        self.cf.clear();
        self.cf.resize(tree.num_slots(), 0.0);

        for level in (0..horizon).rev() {
            for (id, node) in tree.nodes().iter().enumerate().rev() {
                let kids = tree.children(id as NodeId);
                let child_val = |c: NodeId, disc: f64, value: &[f64]| {
                    tree.reward(c, player) + disc * value[c as usize]
                };
                let v = match node.kind {
                    NodeKind::Terminal => tree.payoffs(id as NodeId)[player],
                    NodeKind::Chance => kids
                        .iter()
                        .zip(tree.chance_probs(id as NodeId))
                        .map(|(&c, &p)| p * child_val(c, 1.0, &self.value))
                        .sum(),
                    NodeKind::Decision if node.player as usize != player => {
                        let slot = offsets[node.infoset as usize];
                        kids.iter()
                            .enumerate()
                            .map(|(a, &c)| probs[slot + a] * child_val(c, gamma, &self.value))
                            .sum()
                    }
                    NodeKind::Decision => {
                        let x = node.infoset;
                        let d = depth_of(x);
                        if d > level {
                            child_val(kids[chosen[x as usize]], gamma, &self.value)
                        } else if d == level {
                            // Weight of the children is weight[h] * gamma; use weight[child].
                            let slot = offsets[x as usize];
                            for (a, &c) in kids.iter().enumerate() {
                                let wc = self.weight[c as usize];
                                self.cf[slot + a] += wc * (self.value[c as usize])
                                    + self.weight[id] * tree.reward(c, player);
                            }
                            0.0
                        } else {
                            0.0
                        }
                    }
                };
                self.value[id] = v;
            }
            for x in tree.player_infosets(player).filter(|x| x.depth == level) {
                let slot = offsets[x.id];
                let row = &self.cf[slot..slot + x.num_actions()];
                let mut best = 0;
                for (a, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = a;
                    }
                }
                chosen[x.id] = best;
            }
        }
        chosen
    }

    /// NashConv and the per-player exploitabilities of `policy`.
    pub fn nashconv(&mut self, tree: &GameTree, policy: &BehavioralPolicy) -> Result<NashConvReport> {
        self.baseline.compute_into(tree, policy)?;
        let mut per_player = Vec::with_capacity(tree.num_players());
        for p in 0..tree.num_players() {
            let br = self.best_response_with_baseline(tree, policy, p)?;
            debug_assert!(br.exploitability >= -1e-9, "negative exploitability {}", br.exploitability);
            per_player.push(br.exploitability.max(0.0));
        }
        Ok(NashConvReport { nashconv: per_player.iter().sum(), per_player })
    }

    pub fn deviation_check(
        &mut self,
        tree: &GameTree,
        policy: &BehavioralPolicy,
        eps: f64,
    ) -> Result<DeviationReport> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be >= 0, got {eps}")));
        }
        let report = self.nashconv(tree, policy)?;
        let action_count = tree.max_actions();
        let horizon = tree.max_depth();
        let discount = tree.discount();
        let bound = deviation_bound(eps, action_count, horizon, discount);
        let measured = report.per_player.iter().copied().fold(0.0, f64::max);
        Ok(DeviationReport {
            eps,
            action_count,
            horizon,
            discount,
            bound,
            measured_deviation: measured,
            satisfied: measured <= bound + 1e-9,
        })
    }
}

pub fn best_response(tree: &GameTree, policy: &BehavioralPolicy, player: usize) -> Result<BestResponseResult> {
    Evaluator::new().best_response(tree, policy, player)
}

pub fn nashconv(tree: &GameTree, policy: &BehavioralPolicy) -> Result<NashConvReport> {
    Evaluator::new().nashconv(tree, policy)
}

pub fn deviation_check(tree: &GameTree, policy: &BehavioralPolicy, eps: f64) -> Result<DeviationReport> {
    Evaluator::new().deviation_check(tree, policy, eps)
}

/// Utility of every player under `policy` (convenience over [`expected_values`]).
pub fn utilities(tree: &GameTree, policy: &BehavioralPolicy) -> Result<Vec<f64>> {
    Ok(expected_values(tree, policy)?.utilities().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{synthetic, InfosetTable};

    fn mp(tree: &GameTree, row: [f64; 2], col: [f64; 2]) -> BehavioralPolicy {
        let t = InfosetTable::from_values(tree, vec![row[0], row[1], col[0], col[1]]).unwrap();
        BehavioralPolicy::from_table(tree, t).unwrap()
    }

    #[test]
    fn matching_pennies_uniform_is_unexploitable() {
        let tree = synthetic::matching_pennies().unwrap();
        let u = BehavioralPolicy::uniform(&tree);
        let br = best_response(&tree, &u, 0).unwrap();
        assert_eq!(br.br_value, 0.0);
        assert_eq!(br.exploitability, 0.0);
        let nc = nashconv(&tree, &u).unwrap();
        assert!(nc.nashconv.abs() <= 1e-12);
    }

    #[test]
    fn matching_pennies_biased_column() {
        let tree = synthetic::matching_pennies().unwrap();
        let br = best_response(&tree, &mp(&tree, [0.5, 0.5], [0.7, 0.3]), 0).unwrap();
        assert!((br.br_value - 0.4).abs() < 1e-12);
        assert!(br.baseline_value.abs() < 1e-12);
        assert!((br.exploitability - 0.4).abs() < 1e-12);
        assert_eq!(br.actions[0], 0);
    }

    #[test]
    fn matching_pennies_nashconv_biased_row() {
        let tree = synthetic::matching_pennies().unwrap();
        let nc = nashconv(&tree, &mp(&tree, [0.6, 0.4], [0.5, 0.5])).unwrap();
        assert!(nc.per_player[0].abs() < 1e-12);
        assert!((nc.per_player[1] - 0.2).abs() < 1e-12);
        assert!((nc.nashconv - 0.2).abs() < 1e-12);
        assert_eq!(nc.nashconv, nc.per_player.iter().sum::<f64>());
    }

    #[test]
    fn invalid_player() {
        let tree = synthetic::matching_pennies().unwrap();
        let u = BehavioralPolicy::uniform(&tree);
        assert!(matches!(best_response(&tree, &u, 2), Err(Error::InvalidPlayer { .. })));
    }

    #[test]
    fn bound_formula() {
        let b = deviation_bound(0.025, 2, 2, 1.0);
        assert!((b - 0.025 * 2f64.ln() * 2.0).abs() < 1e-15);
        assert!((b - 0.034657).abs() < 1e-6);
        assert!((geometric_sum(0.9, 3) - (1.0 + 0.9 + 0.81)).abs() < 1e-12);
        assert_eq!(deviation_bound(0.0, 3, 5, 1.0), 0.0);
    }

    #[test]
    fn exact_nash_zero_eps() {
        let tree = synthetic::matching_pennies().unwrap();
        let r = deviation_check(&tree, &BehavioralPolicy::uniform(&tree), 0.0).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(r.measured_deviation.abs() < 1e-12);
        assert!(r.satisfied);
        assert!(deviation_check(&tree, &BehavioralPolicy::uniform(&tree), -1.0).is_err());
    }
}
