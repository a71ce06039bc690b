//! Canonical text dump of a game tree.
//!
//! One header line, then one tab-separated line per node in id order
//! (depth-first, action order):
//!
//! ```text
//! id  kind  player  infoset  children  chance_probs  payoffs
//! ```
//!
//! Empty fields are written as `-`; lists are comma separated; floats use the
//! shortest representation that round-trips, so dumps are byte-stable.

use std::fmt::Write as _;
use std::io::{self, Write};

use super::{GameTree, NodeKind};

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    if s.is_empty() {
        s.push('-');
    }
    s
}

pub fn write_dump<W: Write>(tree: &GameTree, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "# game={} players={} discount={} nodes={} infosets={}",
        tree.name(),
        tree.num_players(),
        tree.discount(),
        tree.num_nodes(),
        tree.num_infosets()
    )?;
    for (id, node) in tree.nodes().iter().enumerate() {
        let id32 = id as u32;
        let (player, infoset) = match node.kind {
            NodeKind::Decision => (node.player.to_string(), node.infoset.to_string()),
            _ => ("-".into(), "-".into()),
        };
        let probs = match node.kind {
            NodeKind::Chance => join(tree.chance_probs(id32)),
            _ => "-".into(),
        };
        let payoffs = match node.kind {
            NodeKind::Terminal => join(tree.payoffs(id32)),
            _ => "-".into(),
        };
        write!(
            out,
            "{id}\t{}\t{player}\t{infoset}\t{}\t{probs}\t{payoffs}",
            node.kind.as_str(),
            join(tree.children(id32))
        )?;
        if tree.has_rewards() {
            write!(out, "\t{}", join((0..tree.num_players()).map(|p| tree.reward(id32, p))))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn dump_string(tree: &GameTree) -> String {
    let mut buf = Vec::new();
    write_dump(tree, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("dump is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::synthetic;

    #[test]
    fn matching_pennies_dump() {
        let tree = synthetic::matching_pennies().unwrap();
        let expected = "\
# game=matching-pennies players=2 discount=1 nodes=7 infosets=2
0\tdecision\t0\t0\t1,4\t-\t-
1\tdecision\t1\t1\t2,3\t-\t-
2\tterminal\t-\t-\t-\t-\t1,-1
3\tterminal\t-\t-\t-\t-\t-1,1
4\tdecision\t1\t1\t5,6\t-\t-
5\tterminal\t-\t-\t-\t-\t-1,1
6\tterminal\t-\t-\t-\t-\t1,-1
";
        assert_eq!(dump_string(&tree), expected);
    }
}
