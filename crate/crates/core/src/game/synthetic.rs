//! Small hand-built games for tests and sanity runs.

use super::{GameTree, TreeBuilder};
use crate::error::{Error, Result};

/// Two-player normal-form game as a two-level tree: the row player moves,
/// then the column player moves without observing the row action.
pub fn normal_form(name: &str, row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<GameTree> {
    let m = row.len();
    let k = row.first().map_or(0, Vec::len);
    if m == 0 || k == 0 || col.len() != m || row.iter().chain(col).any(|r| r.len() != k) {
        return Err(Error::UnsupportedGame(format!("{name}: payoff matrices must be non-empty and m x k")));
    }
    let zero_sum = row.iter().flatten().zip(col.iter().flatten()).all(|(a, b)| a + b == 0.0);
    let row_labels: Vec<String> = (0..m).map(|i| format!("r{i}")).collect();
    let col_labels: Vec<String> = (0..k).map(|j| format!("c{j}")).collect();
    let row_labels: Vec<&str> = row_labels.iter().map(String::as_str).collect();
    let col_labels: Vec<&str> = col_labels.iter().map(String::as_str).collect();

    let mut b = TreeBuilder::new(name, 2, 1.0).zero_sum(zero_sum);
    let root = b.decision(0, "row", &row_labels);
    let mut kids = Vec::with_capacity(m);
    for i in 0..m {
        let node = b.decision(1, "col", &col_labels);
        let terms: Vec<_> = (0..k).map(|j| b.terminal(&[row[i][j], col[i][j]])).collect();
        b.set_children(node, &terms, None);
        kids.push(node);
    }
    b.set_children(root, &kids, None);
    b.finish()
}

/// Matching pennies: the row player wins 1 on a match, loses 1 otherwise.
pub fn matching_pennies() -> Result<GameTree> {
    let row = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
    let col = vec![vec![-1.0, 1.0], vec![1.0, -1.0]];
    normal_form("matching-pennies", &row, &col)
}

/// A general-sum game with intermediate rewards and discount `gamma`.
///
/// Chance picks one of two states, which player 0 observes. Player 0 acts,
/// player 1 sees that action (but not the state) and acts, then player 0
/// acts again knowing everything so far. Each move pays a small reward.
pub fn two_step(gamma: f64) -> Result<GameTree> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!("discount {gamma} outside (0, 1]")));
    }
    // Fixed, asymmetric numbers so no advantage cancels by accident.
    let reward = |s: usize, a: usize, b: usize, c: usize| -> [f64; 2] {
        let x = (1 + s * 7 + a * 3 + b * 5 + c * 11) as f64;
        [(x * 0.37).sin(), (x * 0.53).cos() * 0.5]
    };
    let mut tb = TreeBuilder::new("two-step", 2, gamma);
    let root = tb.chance();
    let mut states = Vec::new();
    for s in 0..2 {
        let first = tb.decision(0, &format!("s{s}"), &["a0", "a1"]);
        let mut firsts = Vec::new();
        for a in 0..2 {
            let mid = tb.decision(1, &format!("{a}"), &["b0", "b1", "b2"]);
            tb.set_reward(mid, &reward(s, a, 9, 9));
            let mut mids = Vec::new();
            for bb in 0..3 {
                let last = tb.decision(0, &format!("s{s}|{a}|{bb}"), &["c0", "c1"]);
                tb.set_reward(last, &reward(s, a, bb, 9));
                let mut lasts = Vec::new();
                for c in 0..2 {
                    let r = reward(s, a, bb, c);
                    let t = tb.terminal(&[2.0 * r[1] - r[0], r[0] + r[1]]);
                    tb.set_reward(t, &r);
                    lasts.push(t);
                }
                tb.set_children(last, &lasts, None);
                mids.push(last);
            }
            tb.set_children(mid, &mids, None);
            firsts.push(mid);
        }
        tb.set_children(first, &firsts, None);
        states.push(first);
    }
    tb.set_children(root, &states, Some(&[0.4, 0.6]));
    tb.finish()
}
