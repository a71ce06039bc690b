//! Independent Kuhn poker simulator used as a test oracle.
//!
//! It never looks at the game tree: it replays the betting rules directly
//! and only uses the tree to map infoset keys to policy rows.

#![allow(dead_code)]

use std::collections::HashMap;

use iesl_core::game::{BehavioralPolicy, GameTree};

pub struct KuhnOracle {
    pub players: usize,
    pub cards: usize,
    index: HashMap<(usize, String), usize>,
}

impl KuhnOracle {
    pub fn new(tree: &GameTree) -> Self {
        let index = tree.infosets().iter().map(|x| ((x.player, x.key.clone()), x.id)).collect();
        let players = tree.num_players();
        Self { players, cards: players + 1, index }
    }

    pub fn infoset(&self, player: usize, key: &str) -> usize {
        *self.index.get(&(player, key.to_string())).unwrap_or_else(|| panic!("no infoset {player} {key}"))
    }

    pub fn deals(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..self.players {
            let mut next = Vec::new();
            for d in &out {
                for c in 0..self.cards {
                    if !d.contains(&c) {
                        let mut e = d.clone();
                        e.push(c);
                        next.push(e);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Expected payoff of every player, conditioned on one deal.
    pub fn deal_value(&self, deal: &[usize], policy: &dyn Fn(usize) -> [f64; 2]) -> Vec<f64> {
        let mut out = vec![0.0; self.players];
        self.walk(deal, &mut String::new(), None, 1.0, policy, &mut out);
        out
    }

    /// Expected payoff of every player over the uniform deal.
    pub fn value(&self, policy: &dyn Fn(usize) -> [f64; 2]) -> Vec<f64> {
        let deals = self.deals();
        let mut out = vec![0.0; self.players];
        for d in &deals {
            for (o, v) in out.iter_mut().zip(self.deal_value(d, policy)) {
                *o += v / deals.len() as f64;
            }
        }
        out
    }

    pub fn behavioral(&self, p: &BehavioralPolicy) -> impl Fn(usize) -> [f64; 2] + '_ {
        let p = p.clone();
        move |x| {
            let r = p.get(x);
            [r[0], r[1]]
        }
    }

    fn walk(
        &self,
        deal: &[usize],
        history: &mut String,
        bettor: Option<usize>,
        prob: f64,
        policy: &dyn Fn(usize) -> [f64; 2],
        out: &mut [f64],
    ) {
        let n = self.players;
        let k = history.len();
        let actor = match bettor {
            None if k < n => Some(k),
            Some(j) if k < j + n => Some(k % n),
            _ => None,
        };
        let Some(p) = actor else {
            // Showdown among players who put in the bet (or everyone if none did).
            let hist = history.as_bytes();
            let stake = |i: usize| -> f64 {
                match bettor {
                    None => 1.0,
                    Some(_) => 1.0 + hist.iter().enumerate().filter(|(t, &c)| t % n == i && c == b'b').count() as f64,
                }
            };
            let contenders: Vec<usize> = (0..n).filter(|&i| bettor.is_none() || stake(i) > 1.0).collect();
            let winner = *contenders.iter().max_by_key(|&&i| deal[i]).unwrap();
            let pot: f64 = (0..n).map(stake).sum();
            for (i, o) in out.iter_mut().enumerate().take(n) {
                let gain = if i == winner { pot } else { 0.0 };
                *o += prob * (gain - stake(i));
            }
            return;
        };
        let x = self.infoset(p, &format!("{}|{}", deal[p], history));
        let row = policy(x);
        for (a, ch) in ['p', 'b'].into_iter().enumerate() {
            if row[a] == 0.0 {
                continue;
            }
            history.push(ch);
            let next_bettor = bettor.or(if ch == 'b' { Some(k) } else { None });
            self.walk(deal, history, next_bettor, prob * row[a], policy, out);
            history.pop();
        }
    }
}

/// Best value for `player` over all pure strategies, with the player's
/// infosets split into groups that never co-occur in a deal (by private
/// card), so each group is optimised independently.
pub fn pure_strategy_best(tree: &GameTree, oracle: &KuhnOracle, policy: &BehavioralPolicy, player: usize) -> f64 {
    let deals = oracle.deals();
    let mut total = 0.0;
    for card in 0..oracle.cards {
        let group: Vec<usize> = tree
            .player_infosets(player)
            .filter(|x| x.key.split('|').next() == Some(card.to_string().as_str()))
            .map(|x| x.id)
            .collect();
        let my_deals: Vec<&Vec<usize>> = deals.iter().filter(|d| d[player] == card).collect();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << group.len()) {
            let f = |x: usize| -> [f64; 2] {
                match group.iter().position(|&g| g == x) {
                    Some(bit) if mask >> bit & 1 == 1 => [0.0, 1.0],
                    Some(_) => [1.0, 0.0],
                    None => {
                        let r = policy.get(x);
                        [r[0], r[1]]
                    }
                }
            };
            let v: f64 = my_deals.iter().map(|d| oracle.deal_value(d, &f)[player]).sum();
            best = best.max(v);
        }
        total += best / deals.len() as f64;
    }
    total
}
