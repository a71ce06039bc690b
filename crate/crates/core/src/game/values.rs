//! Reach probabilities and expected values under a behavioral policy profile.

use super::{BehavioralPolicy, GameTree, NodeId, NodeKind};
use crate::error::Result;

pub(crate) const MAX_PLAYERS: usize = 8;

/// Per-node reach probabilities split by contributor.
#[derive(Debug, Clone, Default)]
pub struct ReachDecomposition {
    num_players: usize,
    /// `nodes * players`: product of each player's own action probabilities.
    own: Vec<f64>,
    /// Product of chance outcome probabilities.
    chance: Vec<f64>,
}

impl ReachDecomposition {
    pub fn own(&self, node: NodeId, player: usize) -> f64 {
        self.own[node as usize * self.num_players + player]
    }

    pub fn chance(&self, node: NodeId) -> f64 {
        self.chance[node as usize]
    }

    /// Chance times every other player's contribution.
    pub fn external(&self, node: NodeId, player: usize) -> f64 {
        let base = node as usize * self.num_players;
        let mut r = self.chance[node as usize];
        for p in 0..self.num_players {
            if p != player {
                r *= self.own[base + p];
            }
        }
        r
    }

    /// Pr(h | pi): chance times every player's contribution.
    pub fn full(&self, node: NodeId) -> f64 {
        let base = node as usize * self.num_players;
        self.own[base..base + self.num_players].iter().product::<f64>() * self.chance[node as usize]
    }

    pub fn len(&self) -> usize {
        self.chance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chance.is_empty()
    }

    /// Recomputes every component in place (reuses the buffers).
    pub fn compute_into(&mut self, tree: &GameTree, policy: &BehavioralPolicy) -> Result<()> {
        policy.table().check_domain(tree)?;
        let n = tree.num_players();
        let num_nodes = tree.num_nodes();
        self.num_players = n;
        self.own.clear();
        self.own.resize(num_nodes * n, 0.0);
        self.chance.clear();
        self.chance.resize(num_nodes, 0.0);
        self.own[..n].fill(1.0);
        self.chance[0] = 1.0;
        let probs = policy.values();
        let offsets = tree.slot_offsets();
        for (id, node) in tree.nodes().iter().enumerate() {
            let base = id * n;
            let chance = self.chance[id];
            let kids = tree.children(id as NodeId);
            match node.kind {
                NodeKind::Terminal => {}
                NodeKind::Chance => {
                    for (&c, &p) in kids.iter().zip(tree.chance_probs(id as NodeId)) {
                        let cb = c as usize * n;
                        self.own.copy_within(base..base + n, cb);
                        self.chance[c as usize] = chance * p;
                    }
                }
                NodeKind::Decision => {
                    let player = node.player as usize;
                    let slot = offsets[node.infoset as usize];
                    for (a, &c) in kids.iter().enumerate() {
                        let cb = c as usize * n;
                        self.own.copy_within(base..base + n, cb);
                        self.own[cb + player] *= probs[slot + a];
                        self.chance[c as usize] = chance;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Computes reach components of every node under `policy`.
pub fn compute_reach(tree: &GameTree, policy: &BehavioralPolicy) -> Result<ReachDecomposition> {
    let mut reach = ReachDecomposition::default();
    reach.compute_into(tree, policy)?;
    Ok(reach)
}

/// Per-node values `V^i(h)` for every player.
#[derive(Debug, Clone, Default)]
pub struct ExpectedValues {
    num_players: usize,
    discount: f64,
    values: Vec<f64>,
}

impl ExpectedValues {
    pub fn value(&self, node: NodeId, player: usize) -> f64 {
        self.values[node as usize * self.num_players + player]
    }

    /// `u^i(pi)`: the root value (expected over the initial deal).
    pub fn utility(&self, player: usize) -> f64 {
        self.values[player]
    }

    pub fn utilities(&self) -> &[f64] {
        &self.values[..self.num_players]
    }

    /// Q(h, a) = r(h, a) + gamma * V(child) at a decision node.
    pub fn q(&self, tree: &GameTree, node: NodeId, action: usize, player: usize) -> f64 {
        let c = tree.children(node)[action];
        tree.reward(c, player) + self.discount * self.value(c, player)
    }

    /// A(h, a) = Q(h, a) - V(h).
    pub fn advantage(&self, tree: &GameTree, node: NodeId, action: usize, player: usize) -> f64 {
        self.q(tree, node, action, player) - self.value(node, player)
    }

    /// Recomputes every node value bottom-up, reusing the buffer.
    pub fn compute_into(&mut self, tree: &GameTree, policy: &BehavioralPolicy) -> Result<()> {
        policy.table().check_domain(tree)?;
        let n = tree.num_players();
        assert!(n <= MAX_PLAYERS);
        self.num_players = n;
        self.discount = tree.discount();
        self.values.clear();
        self.values.resize(tree.num_nodes() * n, 0.0);
        let probs = policy.values();
        let offsets = tree.slot_offsets();
        let rewards = tree.rewards.as_deref();
        let gamma = tree.discount();
        for (id, node) in tree.nodes().iter().enumerate().rev() {
            let base = id * n;
            let mut acc = [0.0f64; MAX_PLAYERS];
            let kids = tree.children(id as NodeId);
            match node.kind {
                NodeKind::Terminal => {
                    acc[..n].copy_from_slice(tree.payoffs(id as NodeId));
                }
                NodeKind::Chance => {
                    for (&c, &p) in kids.iter().zip(tree.chance_probs(id as NodeId)) {
                        let cb = c as usize * n;
                        for i in 0..n {
                            let r = rewards.map_or(0.0, |r| r[cb + i]);
                            acc[i] += p * (r + self.values[cb + i]);
                        }
                    }
                }
                NodeKind::Decision => {
                    let slot = offsets[node.infoset as usize];
                    for (a, &c) in kids.iter().enumerate() {
                        let p = probs[slot + a];
                        let cb = c as usize * n;
                        for i in 0..n {
                            let r = rewards.map_or(0.0, |r| r[cb + i]);
                            acc[i] += p * (r + gamma * self.values[cb + i]);
                        }
                    }
                }
            }
            self.values[base..base + n].copy_from_slice(&acc[..n]);
        }
        Ok(())
    }
}

/// Single bottom-up pass computing `V^i(h)` for every node and player.
pub fn expected_values(tree: &GameTree, policy: &BehavioralPolicy) -> Result<ExpectedValues> {
    let mut ev = ExpectedValues::default();
    ev.compute_into(tree, policy)?;
    Ok(ev)
}
