use std::collections::HashMap;
use std::fmt;

use super::{GameTree, NodeKind, NO_PARENT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Root,
    Structure,
    InfosetMembership,
    InfosetShape,
    InfosetDepth,
    PerfectRecall,
    ChanceProbabilities,
    Payoffs,
    ZeroSum,
}

/// One violated tree invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] {}", self.kind, self.message)
    }
}

/// Checks every structural invariant of `tree`. An empty list means valid.
pub fn validate_tree(tree: &GameTree) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |kind, message: String| out.push(Violation { kind, message });
    let n = tree.num_players;
    let num_nodes = tree.nodes.len();

    if num_nodes == 0 {
        push(ViolationKind::Root, "tree has no nodes".into());
        return out;
    }

    // Tree shape: one root, every other node reached exactly once as a child.
    let mut parent_count = vec![0u32; num_nodes];
    for (id, node) in tree.nodes.iter().enumerate() {
        let kids = tree.children(id as u32);
        if node.kind != NodeKind::Terminal && kids.is_empty() {
            push(ViolationKind::Structure, format!("non-terminal node {id} has no children"));
        }
        if node.kind == NodeKind::Terminal && !kids.is_empty() {
            push(ViolationKind::Structure, format!("terminal node {id} has children"));
        }
        let mut seen = kids.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            push(ViolationKind::Structure, format!("node {id} lists a child twice"));
        }
        for &c in kids {
            if (c as usize) >= num_nodes {
                push(ViolationKind::Structure, format!("node {id} has out-of-range child {c}"));
                continue;
            }
            if (c as usize) <= id {
                push(ViolationKind::Structure, format!("child {c} of node {id} precedes it"));
            }
            parent_count[c as usize] += 1;
        }
    }
    let roots: Vec<usize> = (0..num_nodes).filter(|&i| parent_count[i] == 0).collect();
    if roots != [0] {
        push(ViolationKind::Root, format!("expected node 0 as the only root, found roots {roots:?}"));
    }
    if tree.nodes[0].parent != NO_PARENT {
        push(ViolationKind::Root, "root has a parent".into());
    }
    for (id, &c) in parent_count.iter().enumerate() {
        if c > 1 {
            push(ViolationKind::Structure, format!("node {id} has {c} parents"));
        }
    }

    // Infoset membership: each decision node in exactly one infoset.
    let mut membership = vec![0u32; num_nodes];
    for x in &tree.infosets {
        for &m in &x.members {
            if (m as usize) < num_nodes {
                membership[m as usize] += 1;
            }
        }
    }
    for (id, node) in tree.nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Decision => {
                if membership[id] != 1 {
                    push(
                        ViolationKind::InfosetMembership,
                        format!("decision node {id} belongs to {} infosets", membership[id]),
                    );
                }
                let x = node.infoset as usize;
                if x >= tree.infosets.len() || !tree.infosets[x].members.contains(&(id as u32)) {
                    push(
                        ViolationKind::InfosetMembership,
                        format!("decision node {id} is not a member of its infoset {x}"),
                    );
                }
            }
            _ if membership[id] > 0 => push(
                ViolationKind::InfosetMembership,
                format!("{} node {id} is listed in an infoset", node.kind.as_str()),
            ),
            _ => {}
        }
    }

    let own = super::builder::own_decision_counts(tree);
    for x in &tree.infosets {
        if x.members.is_empty() {
            push(ViolationKind::InfosetShape, format!("infoset {} has no members", x.id));
        }
        if x.player >= n {
            push(ViolationKind::InfosetShape, format!("infoset {} has invalid player {}", x.id, x.player));
            continue;
        }
        for &m in &x.members {
            let Some(node) = tree.nodes.get(m as usize) else { continue };
            if node.kind != NodeKind::Decision || node.player as usize != x.player {
                push(
                    ViolationKind::InfosetShape,
                    format!("member {m} of infoset {} is not a decision node of player {}", x.id, x.player),
                );
            }
            if node.num_edges as usize != x.actions.len() {
                push(
                    ViolationKind::InfosetShape,
                    format!(
                        "member {m} of infoset {} has {} children but the infoset has {} actions",
                        x.id,
                        node.num_edges,
                        x.actions.len()
                    ),
                );
            }
            let d = own[m as usize * n + x.player] as usize;
            if d != x.depth {
                push(
                    ViolationKind::InfosetDepth,
                    format!("member {m} of infoset {} has depth {d}, infoset depth {}", x.id, x.depth),
                );
            }
        }
    }

    check_perfect_recall(tree, &mut out);

    for (id, node) in tree.nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Chance => {
                let probs = tree.chance_probs(id as u32);
                if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                    out.push(Violation {
                        kind: ViolationKind::ChanceProbabilities,
                        message: format!("chance node {id} has a negative or non-finite probability"),
                    });
                }
                let sum: f64 = probs.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    out.push(Violation {
                        kind: ViolationKind::ChanceProbabilities,
                        message: format!("chance node {id} probabilities sum to {sum}"),
                    });
                }
            }
            NodeKind::Terminal => {
                let pay = tree.payoffs(id as u32);
                if pay.iter().any(|p| !p.is_finite()) {
                    out.push(Violation {
                        kind: ViolationKind::Payoffs,
                        message: format!("terminal {id} has a non-finite payoff"),
                    });
                }
                let sum: f64 = pay.iter().sum();
                if tree.zero_sum && sum.abs() > 1e-12 {
                    out.push(Violation {
                        kind: ViolationKind::ZeroSum,
                        message: format!("terminal {id} payoffs sum to {sum}"),
                    });
                }
            }
            NodeKind::Decision => {}
        }
    }
    out
}

/// Every member of an infoset must share the acting player's own
/// (infoset, action) sequence from the root.
fn check_perfect_recall(tree: &GameTree, out: &mut Vec<Violation>) {
    let n = tree.num_players;
    let num_nodes = tree.nodes.len();
    // Interned own-sequence ids per node and player; 0 is the empty sequence.
    let mut seq = vec![0u32; num_nodes * n];
    let mut intern: HashMap<(u32, u32, u32), u32> = HashMap::new();
    for (id, node) in tree.nodes.iter().enumerate() {
        for (a, &c) in tree.children(id as u32).iter().enumerate() {
            let (src, dst) = (id * n, c as usize * n);
            if dst <= src || dst >= seq.len() {
                continue;
            }
            seq.copy_within(src..src + n, dst);
            if node.kind == NodeKind::Decision {
                let p = node.player as usize;
                let next = intern.len() as u32 + 1;
                let s = *intern.entry((seq[src + p], node.infoset, a as u32)).or_insert(next);
                seq[dst + p] = s;
            }
        }
    }
    for x in &tree.infosets {
        if x.player >= n {
            continue;
        }
        let mut iter = x.members.iter().filter(|&&m| (m as usize) < num_nodes);
        let Some(&first) = iter.next() else { continue };
        let expected = seq[first as usize * n + x.player];
        for &m in iter {
            if seq[m as usize * n + x.player] != expected {
                out.push(Violation {
                    kind: ViolationKind::PerfectRecall,
                    message: format!(
                        "infoset {} ({}): node {m} and node {first} have different own histories",
                        x.id, x.key
                    ),
                });
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{synthetic, TreeBuilder};

    #[test]
    fn matching_pennies_is_valid() {
        let tree = synthetic::matching_pennies().unwrap();
        assert!(validate_tree(&tree).is_empty());
    }

    #[test]
    fn node_shared_by_two_infosets() {
        let mut tree = synthetic::matching_pennies().unwrap();
        // Column node 1 also listed under the row infoset.
        tree.infosets[0].members.push(1);
        let v = validate_tree(&tree);
        let shared: Vec<_> =
            v.iter().filter(|v| v.kind == ViolationKind::InfosetMembership).collect();
        assert_eq!(shared.len(), 1, "{v:?}");
        assert!(shared[0].message.contains("node 1 "), "{}", shared[0].message);
    }

    #[test]
    fn perfect_recall_violation_detected() {
        // Player 0 acts, then acts again in a single infoset spanning both
        // of its own earlier choices: it forgets what it did.
        let mut b = TreeBuilder::new("forgetful", 2, 1.0);
        let root = b.decision(0, "first", &["l", "r"]);
        let mut kids = Vec::new();
        for _ in 0..2 {
            let x = b.decision(0, "second", &["l", "r"]);
            let t1 = b.terminal(&[1.0, -1.0]);
            let t2 = b.terminal(&[-1.0, 1.0]);
            b.set_children(x, &[t1, t2], None);
            kids.push(x);
        }
        b.set_children(root, &kids, None);
        let tree = b.finish_unchecked();
        let v = validate_tree(&tree);
        assert!(v.iter().any(|v| v.kind == ViolationKind::PerfectRecall), "{v:?}");
    }

    #[test]
    fn bad_chance_probabilities() {
        let mut b = TreeBuilder::new("chance", 1, 1.0);
        let root = b.chance();
        let t1 = b.terminal(&[0.0]);
        let t2 = b.terminal(&[1.0]);
        b.set_children(root, &[t1, t2], Some(&[0.5, 0.6]));
        let v = validate_tree(&b.finish_unchecked());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::ChanceProbabilities);
    }

    #[test]
    fn non_zero_sum_terminal_flagged_only_when_declared() {
        let build = |zs| {
            let mut b = TreeBuilder::new("zs", 2, 1.0).zero_sum(zs);
            let root = b.decision(0, "r", &["a"]);
            let t = b.terminal(&[1.0, 0.5]);
            b.set_children(root, &[t], None);
            b.finish_unchecked()
        };
        assert!(validate_tree(&build(false)).is_empty());
        let v = validate_tree(&build(true));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::ZeroSum);
    }

    #[test]
    fn mismatched_action_count() {
        let mut b = TreeBuilder::new("shape", 2, 1.0);
        let root = b.chance();
        let a = b.decision(0, "x", &["l", "r"]);
        let a1 = b.terminal(&[0.0, 0.0]);
        let a2 = b.terminal(&[0.0, 0.0]);
        b.set_children(a, &[a1, a2], None);
        let c = b.decision(0, "x", &["l", "r"]);
        let c1 = b.terminal(&[0.0, 0.0]);
        b.set_children(c, &[c1], None);
        b.set_children(root, &[a, c], Some(&[0.5, 0.5]));
        let v = validate_tree(&b.finish_unchecked());
        assert!(v.iter().any(|v| v.kind == ViolationKind::InfosetShape), "{v:?}");
    }
}
