//! Explicit finite game trees.
//!
//! Nodes live in a flat array in depth-first preorder (children are visited in
//! action order), so every child has a larger index than its parent. Forward
//! iteration is a top-down sweep and reverse iteration is a bottom-up sweep.
//! Child lists are stored in a separate flat edge array addressed by ranges.

mod builder;
pub mod dump;
pub mod kuhn;
pub mod leduc;
mod policy;
pub mod synthetic;
mod validate;
mod values;

use std::fmt;
use std::str::FromStr;

pub use builder::TreeBuilder;
pub use policy::{BehavioralPolicy, InfosetTable};
pub use validate::{validate_tree, Violation, ViolationKind};
pub use values::{compute_reach, expected_values, ExpectedValues, ReachDecomposition};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Sentinel parent index of the root.
pub const NO_PARENT: NodeId = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Chance,
    Decision,
    Terminal,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Chance => "chance",
            NodeKind::Decision => "decision",
            NodeKind::Terminal => "terminal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    /// Acting player; only meaningful for decision nodes.
    pub player: u8,
    /// Owning infoset; only meaningful for decision nodes.
    pub infoset: u32,
    pub parent: NodeId,
    pub first_edge: u32,
    pub num_edges: u32,
}

#[derive(Debug, Clone)]
pub struct InfoSet {
    pub id: usize,
    pub player: usize,
    pub key: String,
    pub actions: Vec<String>,
    pub members: Vec<NodeId>,
    /// Number of prior decisions of `player` on the path to any member.
    pub depth: usize,
}

impl InfoSet {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }
}

/// Game families with a standard rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameFamily {
    Kuhn,
    Leduc,
    MatchingPennies,
    TwoStep,
}

/// A concrete game: family plus player count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub family: GameFamily,
    pub players: usize,
}

impl GameSpec {
    pub const KUHN_2: GameSpec = GameSpec { family: GameFamily::Kuhn, players: 2 };
    pub const KUHN_3: GameSpec = GameSpec { family: GameFamily::Kuhn, players: 3 };
    pub const LEDUC_2: GameSpec = GameSpec { family: GameFamily::Leduc, players: 2 };
    pub const LEDUC_3: GameSpec = GameSpec { family: GameFamily::Leduc, players: 3 };
    pub const MATCHING_PENNIES: GameSpec =
        GameSpec { family: GameFamily::MatchingPennies, players: 2 };
    pub const TWO_STEP: GameSpec = GameSpec { family: GameFamily::TwoStep, players: 2 };

    pub const POKER: [GameSpec; 4] = [Self::KUHN_2, Self::KUHN_3, Self::LEDUC_2, Self::LEDUC_3];

    pub fn is_poker(&self) -> bool {
        matches!(self.family, GameFamily::Kuhn | GameFamily::Leduc)
    }

    pub fn is_supported(&self) -> bool {
        match self.family {
            GameFamily::Kuhn | GameFamily::Leduc => matches!(self.players, 2 | 3),
            GameFamily::MatchingPennies | GameFamily::TwoStep => self.players == 2,
        }
    }

    pub fn build(&self) -> Result<GameTree> {
        build_game(*self)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            GameFamily::Kuhn => write!(f, "kuhn-{}", self.players),
            GameFamily::Leduc => write!(f, "leduc-{}", self.players),
            GameFamily::MatchingPennies => f.write_str("matching-pennies"),
            GameFamily::TwoStep => f.write_str("two-step"),
        }
    }
}

impl FromStr for GameSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "matching-pennies" | "mp" => return Ok(Self::MATCHING_PENNIES),
            "two-step" => return Ok(Self::TWO_STEP),
            _ => {}
        }
        let (family, players) = lower
            .rsplit_once('-')
            .ok_or_else(|| Error::UnsupportedGame(s.to_string()))?;
        let players: usize = players.parse().map_err(|_| Error::UnsupportedGame(s.to_string()))?;
        let family = match family {
            "kuhn" => GameFamily::Kuhn,
            "leduc" => GameFamily::Leduc,
            _ => return Err(Error::UnsupportedGame(s.to_string())),
        };
        Ok(GameSpec { family, players })
    }
}

/// Builds and validates one of the supported games.
pub fn build_game(spec: GameSpec) -> Result<GameTree> {
    match (spec.family, spec.players) {
        (GameFamily::Kuhn, n @ (2 | 3)) => kuhn::build(kuhn::KuhnRules::standard(n)),
        (GameFamily::Leduc, n @ (2 | 3)) => leduc::build(leduc::LeducRules::standard(n)),
        (GameFamily::MatchingPennies, 2) => synthetic::matching_pennies(),
        (GameFamily::TwoStep, 2) => synthetic::two_step(0.9),
        _ => Err(Error::UnsupportedGame(format!(
            "{:?} with {} players",
            spec.family, spec.players
        ))),
    }
}

/// Node counts under the supported history-counting conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCounts {
    pub chance: usize,
    pub decision: usize,
    pub terminal: usize,
    /// Chance nodes below the root (e.g. Leduc's public card).
    pub inner_chance: usize,
}

impl NodeCounts {
    pub fn all_nodes(&self) -> usize {
        self.chance + self.decision + self.terminal
    }

    pub fn decision_terminal(&self) -> usize {
        self.decision + self.terminal
    }

    /// Every node except a root chance node: the initial deal is treated as
    /// the initial-state distribution rather than a history.
    pub fn post_deal(&self) -> usize {
        self.inner_chance + self.decision + self.terminal
    }
}

#[derive(Debug, Clone)]
pub struct GameTree {
    pub(crate) name: String,
    pub(crate) num_players: usize,
    pub(crate) discount: f64,
    pub(crate) zero_sum: bool,
    pub(crate) nodes: Vec<Node>,
    pub(crate) edges: Vec<NodeId>,
    /// Parallel to `edges`; outcome probability for chance edges, 1 otherwise.
    pub(crate) edge_probs: Vec<f64>,
    /// `nodes.len() * num_players`, zero at non-terminals.
    pub(crate) payoffs: Vec<f64>,
    /// Optional reward received on entering a node, `nodes.len() * num_players`.
    pub(crate) rewards: Option<Vec<f64>>,
    pub(crate) infosets: Vec<InfoSet>,
    /// `infosets.len() + 1` offsets into flat per-(infoset, action) tables.
    pub(crate) slot_offsets: Vec<usize>,
    pub(crate) player_depth: Vec<usize>,
}

impl GameTree {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        let n = &self.nodes[id as usize];
        &self.edges[n.first_edge as usize..(n.first_edge + n.num_edges) as usize]
    }

    /// Outcome probabilities of a chance node (all ones for other kinds).
    pub fn chance_probs(&self, id: NodeId) -> &[f64] {
        let n = &self.nodes[id as usize];
        &self.edge_probs[n.first_edge as usize..(n.first_edge + n.num_edges) as usize]
    }

    pub fn payoffs(&self, id: NodeId) -> &[f64] {
        let start = id as usize * self.num_players;
        &self.payoffs[start..start + self.num_players]
    }

    /// Reward received on entering `id`, if the game has intermediate rewards.
    pub fn reward(&self, id: NodeId, player: usize) -> f64 {
        match &self.rewards {
            Some(r) => r[id as usize * self.num_players + player],
            None => 0.0,
        }
    }

    pub fn has_rewards(&self) -> bool {
        self.rewards.is_some()
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets.len()
    }

    pub fn infoset(&self, id: usize) -> &InfoSet {
        &self.infosets[id]
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn player_infosets(&self, player: usize) -> impl Iterator<Item = &InfoSet> {
        self.infosets.iter().filter(move |x| x.player == player)
    }

    /// Total number of (infoset, action) pairs.
    pub fn num_slots(&self) -> usize {
        *self.slot_offsets.last().unwrap_or(&0)
    }

    pub fn slot_range(&self, infoset: usize) -> std::ops::Range<usize> {
        self.slot_offsets[infoset]..self.slot_offsets[infoset + 1]
    }

    pub fn slot_offsets(&self) -> &[usize] {
        &self.slot_offsets
    }

    /// Maximum number of own decisions of `player` along any root-to-leaf path.
    pub fn player_horizon(&self, player: usize) -> usize {
        self.player_depth[player]
    }

    /// Decision horizon T: the largest per-player horizon.
    pub fn max_depth(&self) -> usize {
        self.player_depth.iter().copied().max().unwrap_or(0)
    }

    /// Largest action count over all infosets.
    pub fn max_actions(&self) -> usize {
        self.infosets.iter().map(InfoSet::num_actions).max().unwrap_or(0)
    }

    /// Spread between the largest and smallest terminal payoff.
    pub fn payoff_spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (id, node) in self.nodes.iter().enumerate() {
            if node.kind == NodeKind::Terminal {
                for &p in self.payoffs(id as NodeId) {
                    lo = lo.min(p);
                    hi = hi.max(p);
                }
            }
        }
        if hi >= lo {
            hi - lo
        } else {
            0.0
        }
    }

    pub fn counts(&self) -> NodeCounts {
        let mut c = NodeCounts { chance: 0, decision: 0, terminal: 0, inner_chance: 0 };
        for (id, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Chance => {
                    c.chance += 1;
                    if id != 0 {
                        c.inner_chance += 1;
                    }
                }
                NodeKind::Decision => c.decision += 1,
                NodeKind::Terminal => c.terminal += 1,
            }
        }
        c
    }
}
