//! Kuhn poker for two or more players.
//!
//! Each player antes, receives one private card from an `n + 1` card deck,
//! and acts once in seat order with pass/bet. After the first bet every
//! other player answers once (pass folds, bet calls). Highest card among the
//! remaining players takes the pot.

use super::{GameTree, NodeId, TreeBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KuhnRules {
    pub players: usize,
    pub cards: usize,
    pub ante: f64,
    pub bet: f64,
}

impl KuhnRules {
    pub fn standard(players: usize) -> Self {
        Self { players, cards: players + 1, ante: 1.0, bet: 1.0 }
    }
}

const ACTIONS: [&str; 2] = ["p", "b"];

pub fn build(rules: KuhnRules) -> Result<GameTree> {
    let n = rules.players;
    if n < 2 || rules.cards < n {
        return Err(Error::UnsupportedGame(format!("kuhn with {n} players and {} cards", rules.cards)));
    }
    let mut b = TreeBuilder::new(format!("kuhn-{n}"), n, 1.0).zero_sum(true);
    let deals = ordered_deals(rules.cards, n);
    let p = 1.0 / deals.len() as f64;
    let root = b.chance();
    let mut kids = Vec::with_capacity(deals.len());
    for deal in &deals {
        let mut history = String::new();
        kids.push(betting(&mut b, &rules, deal, &mut history, None));
    }
    b.set_children(root, &kids, Some(&vec![p; deals.len()]));
    b.finish()
}

/// All ordered assignments of distinct cards to `n` seats.
pub(crate) fn ordered_deals(cards: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(cards: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..cards {
            if !cur.contains(&c) {
                cur.push(c);
                rec(cards, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(cards, n, &mut cur, &mut out);
    out
}

fn betting(
    b: &mut TreeBuilder,
    rules: &KuhnRules,
    deal: &[usize],
    history: &mut String,
    bettor: Option<usize>,
) -> NodeId {
    let n = rules.players;
    let len = history.len();
    let to_act = match bettor {
        None if len < n => Some(len),
        None => None,
        Some(j) if len < j + n => Some(len % n),
        Some(_) => None,
    };
    let Some(player) = to_act else {
        return b.terminal(&showdown(rules, deal, history, bettor));
    };
    let key = format!("{}|{}", deal[player], history);
    let node = b.decision(player, &key, &ACTIONS);
    let mut kids = [0; 2];
    for (a, label) in ACTIONS.iter().enumerate() {
        history.push_str(label);
        let next_bettor = bettor.or(if a == 1 { Some(player) } else { None });
        kids[a] = betting(b, rules, deal, history, next_bettor);
        history.pop();
    }
    b.set_children(node, &kids, None);
    node
}

fn showdown(rules: &KuhnRules, deal: &[usize], history: &str, bettor: Option<usize>) -> Vec<f64> {
    let n = rules.players;
    let mut contrib = vec![rules.ante; n];
    let mut live = vec![bettor.is_none(); n];
    if let Some(j) = bettor {
        contrib[j] += rules.bet;
        live[j] = true;
        for (k, ch) in history.bytes().enumerate().skip(j + 1) {
            let seat = k % n;
            if ch == b'b' {
                contrib[seat] += rules.bet;
                live[seat] = true;
            }
        }
    }
    let pot: f64 = contrib.iter().sum();
    let winner = (0..n).filter(|&i| live[i]).max_by_key(|&i| deal[i]).expect("someone is live");
    (0..n).map(|i| if i == winner { pot - contrib[i] } else { -contrib[i] }).collect()
}
