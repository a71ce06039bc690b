use crate::error::Result;
use crate::game::{expected_values, BehavioralPolicy, GameTree, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDifferenceReport {
    pub trials: usize,
    pub max_discrepancy: f64,
    /// `(player, lhs, rhs)` per trial.
    pub sides: Vec<(usize, f64, f64)>,
}

/// Both sides of the policy-difference identity for one player.
///
/// `lhs = V(dagger^i, pi^-i) - V(pi)` at the root, from two value passes.
/// `rhs` enumerates every root-to-leaf trajectory under `(dagger^i, pi^-i)`
/// and sums `gamma^t A_pi(h, a)` over the player's own decisions on it,
/// where `t` counts decision edges above `h`.
pub fn policy_difference_sides(
    tree: &GameTree,
    pi: &BehavioralPolicy,
    dagger: &BehavioralPolicy,
    player: usize,
) -> Result<(f64, f64)> {
    let mixed = pi.with_player_from(tree, player, dagger);
    let base = expected_values(tree, pi)?;
    let lhs = expected_values(tree, &mixed)?.utility(player) - base.utility(player);

    let gamma = tree.discount();
    let probs = mixed.values();
    let offsets = tree.slot_offsets();
    let mut rhs = 0.0;
    // (node, trajectory probability, discount at node, accumulated sum)
    let mut stack: Vec<(NodeId, f64, f64, f64)> = vec![(tree.root(), 1.0, 1.0, 0.0)];
    while let Some((h, p, disc, acc)) = stack.pop() {
        let node = tree.node(h);
        let kids = tree.children(h);
        match node.kind {
            NodeKind::Terminal => rhs += p * acc,
            NodeKind::Chance => {
                for (&c, &q) in kids.iter().zip(tree.chance_probs(h)) {
                    stack.push((c, p * q, disc, acc));
                }
            }
            NodeKind::Decision => {
                let slot = offsets[node.infoset as usize];
                let own = node.player as usize == player;
                for (a, &c) in kids.iter().enumerate() {
                    let gain = if own { disc * base.advantage(tree, h, a, player) } else { 0.0 };
                    stack.push((c, p * probs[slot + a], disc * gamma, acc + gain));
                }
            }
        }
    }
    Ok((lhs, rhs))
}

/// Random strictly positive `pi` and `dagger`, cycling through the players.
pub fn verify_lemma1(tree: &GameTree, trials: usize, seed: u64) -> Result<PolicyDifferenceReport> {
    let mut rng = crate::rng(seed);
    let mut sides = Vec::with_capacity(trials);
    let mut max_discrepancy: f64 = 0.0;
    for t in 0..trials {
        let player = t % tree.num_players();
        let pi = BehavioralPolicy::random(tree, &mut rng, 0.05);
        let dagger = BehavioralPolicy::random(tree, &mut rng, 0.05);
        let (lhs, rhs) = policy_difference_sides(tree, &pi, &dagger, player)?;
        max_discrepancy = max_discrepancy.max((lhs - rhs).abs());
        sides.push((player, lhs, rhs));
    }
    Ok(PolicyDifferenceReport { trials, max_discrepancy, sides })
}
