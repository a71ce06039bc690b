//! Tree-size report against the reference history and infoset counts.

use std::fmt::Write as _;

use crate::error::Result;
use crate::game::{GameSpec, GameTree};

/// Reference `(histories, infosets)` for the four poker games.
pub const REFERENCE_COUNTS: [(GameSpec, usize, usize); 4] = [
    (GameSpec::KUHN_2, 54, 12),
    (GameSpec::KUHN_3, 600, 48),
    (GameSpec::LEDUC_2, 9450, 936),
    (GameSpec::LEDUC_3, 396120, 13878),
];

/// Names of the history-counting conventions, in report order.
pub const CONVENTIONS: [&str; 3] = ["all-nodes", "decision+terminal", "post-deal"];

#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub game: String,
    /// Histories under each of [`CONVENTIONS`].
    pub histories: [usize; 3],
    pub infosets: usize,
    pub expected: Option<(usize, usize)>,
    /// Conventions under which both counts match the reference.
    pub matching: Vec<&'static str>,
}

impl CountRow {
    pub fn new(game: &str, tree: &GameTree, expected: Option<(usize, usize)>) -> Self {
        let c = tree.counts();
        let histories = [c.all_nodes(), c.decision_terminal(), c.post_deal()];
        let infosets = tree.num_infosets();
        let matching = match expected {
            Some((h, i)) if i == infosets => {
                CONVENTIONS.iter().zip(histories).filter(|(_, n)| *n == h).map(|(name, _)| *name).collect()
            }
            _ => Vec::new(),
        };
        Self { game: game.to_string(), histories, infosets, expected, matching }
    }

    /// Exempt rows (no reference) always pass.
    pub fn passes(&self) -> bool {
        self.expected.is_none() || !self.matching.is_empty()
    }
}

/// Builds every poker game plus the synthetic games (reported, not gated).
pub fn verify_counts() -> Result<Vec<CountRow>> {
    let mut rows = Vec::new();
    for (spec, h, i) in REFERENCE_COUNTS {
        rows.push(CountRow::new(&spec.to_string(), &spec.build()?, Some((h, i))));
    }
    for spec in [GameSpec::MATCHING_PENNIES, GameSpec::TWO_STEP] {
        rows.push(CountRow::new(&spec.to_string(), &spec.build()?, None));
    }
    Ok(rows)
}

pub fn format_counts(rows: &[CountRow]) -> String {
    let mut s = format!(
        "{:<18}{:>12}{:>20}{:>12}{:>10}{:>18}  {}\n",
        "game", "all-nodes", "decision+terminal", "post-deal", "infosets", "reference", "status"
    );
    for r in rows {
        let reference = r.expected.map_or("-".to_string(), |(h, i)| format!("{h}/{i}"));
        let status = match (&r.expected, r.matching.is_empty()) {
            (None, _) => "exempt".to_string(),
            (Some(_), true) => "MISMATCH".to_string(),
            (Some(_), false) => format!("ok ({})", r.matching.join(", ")),
        };
        let _ = writeln!(
            s,
            "{:<18}{:>12}{:>20}{:>12}{:>10}{:>18}  {status}",
            r.game, r.histories[0], r.histories[1], r.histories[2], r.infosets, reference
        );
    }
    s
}
