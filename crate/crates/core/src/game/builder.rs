use std::collections::HashMap;

use super::{validate_tree, GameTree, InfoSet, Node, NodeId, NodeKind, NO_PARENT};
use crate::error::{Error, Result};

/// Incremental preorder construction of a [`GameTree`].
///
/// Callers add a node, recursively build its children, then attach them with
/// [`TreeBuilder::set_children`]. Decision nodes are grouped into infosets by
/// `(player, key)`.
#[derive(Debug)]
pub struct TreeBuilder {
    name: String,
    num_players: usize,
    discount: f64,
    zero_sum: bool,
    nodes: Vec<Node>,
    edges: Vec<NodeId>,
    edge_probs: Vec<f64>,
    payoffs: Vec<f64>,
    rewards: Option<Vec<f64>>,
    infosets: Vec<InfoSet>,
    infoset_index: HashMap<(usize, String), u32>,
}

impl TreeBuilder {
    pub fn new(name: impl Into<String>, num_players: usize, discount: f64) -> Self {
        Self {
            name: name.into(),
            num_players,
            discount,
            zero_sum: false,
            nodes: Vec::new(),
            edges: Vec::new(),
            edge_probs: Vec::new(),
            payoffs: Vec::new(),
            rewards: None,
            infosets: Vec::new(),
            infoset_index: HashMap::new(),
        }
    }

    /// Marks the game as zero-sum so validation checks every terminal.
    pub fn zero_sum(mut self, zero_sum: bool) -> Self {
        self.zero_sum = zero_sum;
        self
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn push(&mut self, kind: NodeKind, player: u8, infoset: u32) -> NodeId {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node { kind, player, infoset, parent: NO_PARENT, first_edge: 0, num_edges: 0 });
        self.payoffs.extend(std::iter::repeat_n(0.0, self.num_players));
        if let Some(r) = self.rewards.as_mut() {
            r.extend(std::iter::repeat_n(0.0, self.num_players));
        }
        id
    }

    pub fn chance(&mut self) -> NodeId {
        self.push(NodeKind::Chance, 0, u32::MAX)
    }

    /// Adds a decision node for `player` in the infoset identified by `key`.
    ///
    /// The first node registered under a key fixes the infoset's action labels;
    /// later members with different labels are caught by validation.
    pub fn decision(&mut self, player: usize, key: &str, actions: &[&str]) -> NodeId {
        let next = self.infosets.len() as u32;
        let infoset = *self
            .infoset_index
            .entry((player, key.to_string()))
            .or_insert(next);
        if infoset == next {
            self.infosets.push(InfoSet {
                id: next as usize,
                player,
                key: key.to_string(),
                actions: actions.iter().map(|a| a.to_string()).collect(),
                members: Vec::new(),
                depth: 0,
            });
        }
        let id = self.push(NodeKind::Decision, player as u8, infoset);
        self.infosets[infoset as usize].members.push(id);
        id
    }

    pub fn terminal(&mut self, payoffs: &[f64]) -> NodeId {
        assert_eq!(payoffs.len(), self.num_players, "one payoff per player");
        let id = self.push(NodeKind::Terminal, 0, u32::MAX);
        let start = id as usize * self.num_players;
        self.payoffs[start..start + self.num_players].copy_from_slice(payoffs);
        id
    }

    /// Sets the reward received on entering `node`.
    pub fn set_reward(&mut self, node: NodeId, reward: &[f64]) {
        assert_eq!(reward.len(), self.num_players, "one reward per player");
        let n = self.num_players;
        let rewards = self.rewards.get_or_insert_with(|| vec![0.0; self.nodes.len() * n]);
        let start = node as usize * n;
        rewards[start..start + n].copy_from_slice(reward);
    }

    /// Attaches `children` (in action/outcome order) to `node`.
    pub fn set_children(&mut self, node: NodeId, children: &[NodeId], probs: Option<&[f64]>) {
        let first = self.edges.len() as u32;
        self.edges.extend_from_slice(children);
        match probs {
            Some(p) => {
                assert_eq!(p.len(), children.len(), "one probability per chance outcome");
                self.edge_probs.extend_from_slice(p);
            }
            None => self.edge_probs.extend(std::iter::repeat_n(1.0, children.len())),
        }
        let n = &mut self.nodes[node as usize];
        n.first_edge = first;
        n.num_edges = children.len() as u32;
        for &c in children {
            // A node attached twice keeps its first parent; validation reports it.
            let child = &mut self.nodes[c as usize];
            if child.parent == NO_PARENT {
                child.parent = node;
            }
        }
    }

    /// Finishes construction and validates; any violation is an error.
    pub fn finish(self) -> Result<GameTree> {
        let tree = self.finish_unchecked();
        let violations = validate_tree(&tree);
        if let Some(first) = violations.first() {
            return Err(Error::InvalidTree(format!(
                "{}: {} violation(s), first: {}",
                tree.name,
                violations.len(),
                first
            )));
        }
        Ok(tree)
    }

    /// Finishes construction without validation (used to build broken trees
    /// for testing the validator).
    pub fn finish_unchecked(self) -> GameTree {
        let mut slot_offsets = Vec::with_capacity(self.infosets.len() + 1);
        let mut acc = 0;
        slot_offsets.push(0);
        for x in &self.infosets {
            acc += x.actions.len();
            slot_offsets.push(acc);
        }
        let mut tree = GameTree {
            name: self.name,
            num_players: self.num_players,
            discount: self.discount,
            zero_sum: self.zero_sum,
            nodes: self.nodes,
            edges: self.edges,
            edge_probs: self.edge_probs,
            payoffs: self.payoffs,
            rewards: self.rewards,
            infosets: self.infosets,
            slot_offsets,
            player_depth: vec![0; self.num_players],
        };
        assign_depths(&mut tree);
        tree
    }
}

/// Fills infoset depths (from the first member) and per-player horizons.
fn assign_depths(tree: &mut GameTree) {
    let n = tree.num_players;
    let own = own_decision_counts(tree);
    for x in tree.infosets.iter_mut() {
        if let Some(&m) = x.members.first() {
            x.depth = own[m as usize * n + x.player] as usize;
        }
    }
    let mut horizon = vec![0usize; n];
    for (id, node) in tree.nodes.iter().enumerate() {
        if node.num_edges == 0 {
            for (p, h) in horizon.iter_mut().enumerate() {
                *h = (*h).max(own[id * n + p] as usize);
            }
        }
    }
    tree.player_depth = horizon;
}

/// Per node and player: number of that player's decisions strictly above the node.
pub(crate) fn own_decision_counts(tree: &GameTree) -> Vec<u32> {
    let n = tree.num_players;
    let mut own = vec![0u32; tree.nodes.len() * n];
    for (id, node) in tree.nodes.iter().enumerate() {
        let first = node.first_edge as usize;
        for &c in &tree.edges[first..first + node.num_edges as usize] {
            let (src, dst) = (id * n, c as usize * n);
            if dst <= src {
                // Not in preorder; validation will flag the structure.
                continue;
            }
            own.copy_within(src..src + n, dst);
            if node.kind == NodeKind::Decision {
                own[dst + node.player as usize] += 1;
            }
        }
    }
    own
}
