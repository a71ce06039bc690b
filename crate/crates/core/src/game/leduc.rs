//! Leduc hold'em for two or more players.
//!
//! Six cards (three ranks in two suits). Every player antes one chip and gets
//! a private card; a betting round follows, one public card is dealt, and a
//! second betting round ends in a showdown. Raises are 2 chips in the first
//! round and 4 in the second, with at most two raises per round. Folding is
//! only legal when facing a bet. Pairing the public card beats any unpaired
//! hand, otherwise the higher rank wins; ties split the pot.

use super::kuhn::ordered_deals;
use super::values::MAX_PLAYERS;
use super::{GameTree, NodeId, TreeBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeducRules {
    pub players: usize,
    pub ranks: usize,
    pub suits: usize,
    pub ante: f64,
    pub raise_sizes: [f64; 2],
    pub raise_cap: usize,
}

impl LeducRules {
    pub fn standard(players: usize) -> Self {
        Self { players, ranks: 3, suits: 2, ante: 1.0, raise_sizes: [2.0, 4.0], raise_cap: 2 }
    }

    pub fn deck_size(&self) -> usize {
        self.ranks * self.suits
    }

    fn rank(&self, card: usize) -> usize {
        card / self.suits
    }
}

#[derive(Debug, Clone)]
struct Betting {
    round: usize,
    contrib: [f64; MAX_PLAYERS],
    folded: [bool; MAX_PLAYERS],
    level: f64,
    raises: usize,
    calls: usize,
    remaining: usize,
    to_act: usize,
    public: Option<usize>,
    history: String,
}

pub fn build(rules: LeducRules) -> Result<GameTree> {
    let n = rules.players;
    if !(2..=MAX_PLAYERS).contains(&n) || rules.deck_size() <= n {
        return Err(Error::UnsupportedGame(format!(
            "leduc with {n} players and {} cards",
            rules.deck_size()
        )));
    }
    let mut b = TreeBuilder::new(format!("leduc-{n}"), n, 1.0).zero_sum(true);
    let deals = ordered_deals(rules.deck_size(), n);
    let root = b.chance();
    let mut kids = Vec::with_capacity(deals.len());
    for deal in &deals {
        let state = Betting {
            round: 0,
            contrib: [rules.ante; MAX_PLAYERS],
            folded: [false; MAX_PLAYERS],
            level: rules.ante,
            raises: 0,
            calls: 0,
            remaining: n,
            to_act: 0,
            public: None,
            history: String::new(),
        };
        kids.push(decision(&mut b, &rules, deal, state));
    }
    let p = 1.0 / deals.len() as f64;
    b.set_children(root, &kids, Some(&vec![p; deals.len()]));
    b.finish()
}

fn decision(b: &mut TreeBuilder, rules: &LeducRules, deal: &[usize], s: Betting) -> NodeId {
    let player = s.to_act;
    let mut actions: Vec<&str> = Vec::with_capacity(3);
    if s.contrib[player] < s.level {
        actions.push("f");
    }
    actions.push("c");
    if s.raises < rules.raise_cap {
        actions.push("r");
    }
    let public = s.public.map_or_else(|| "-".to_string(), |c| c.to_string());
    let key = format!("{}|{}|{}", deal[player], public, s.history);
    let node = b.decision(player, &key, &actions);
    let mut kids = Vec::with_capacity(actions.len());
    for &a in &actions {
        let mut next = s.clone();
        next.history.push_str(a);
        match a {
            "f" => {
                next.folded[player] = true;
                next.remaining -= 1;
            }
            "c" => {
                next.contrib[player] = next.level;
                next.calls += 1;
            }
            _ => {
                next.level += rules.raise_sizes[s.round];
                next.contrib[player] = next.level;
                next.raises += 1;
                next.calls = 0;
            }
        }
        kids.push(after_action(b, rules, deal, next, player));
    }
    b.set_children(node, &kids, None);
    node
}

fn after_action(
    b: &mut TreeBuilder,
    rules: &LeducRules,
    deal: &[usize],
    mut s: Betting,
    actor: usize,
) -> NodeId {
    let n = rules.players;
    if s.remaining == 1 {
        return b.terminal(&payoffs(rules, deal, &s));
    }
    let round_over = (s.raises == 0 && s.calls == s.remaining)
        || (s.raises > 0 && s.calls == s.remaining - 1);
    if !round_over {
        s.to_act = next_live(&s, actor, n);
        return decision(b, rules, deal, s);
    }
    if s.round == 1 {
        return b.terminal(&payoffs(rules, deal, &s));
    }
    // Deal the public card from the cards nobody holds.
    let chance = b.chance();
    let remaining: Vec<usize> = (0..rules.deck_size()).filter(|c| !deal.contains(c)).collect();
    let mut kids = Vec::with_capacity(remaining.len());
    for &card in &remaining {
        let mut next = s.clone();
        next.round = 1;
        next.raises = 0;
        next.calls = 0;
        next.public = Some(card);
        next.history.push('/');
        next.to_act = (0..n).find(|&p| !next.folded[p]).expect("live player");
        kids.push(decision(b, rules, deal, next));
    }
    let p = 1.0 / remaining.len() as f64;
    b.set_children(chance, &kids, Some(&vec![p; remaining.len()]));
    chance
}

fn next_live(s: &Betting, actor: usize, n: usize) -> usize {
    let mut p = (actor + 1) % n;
    while s.folded[p] {
        p = (p + 1) % n;
    }
    p
}

fn payoffs(rules: &LeducRules, deal: &[usize], s: &Betting) -> Vec<f64> {
    let n = rules.players;
    let pot: f64 = s.contrib[..n].iter().sum();
    let strength = |p: usize| -> usize {
        let r = rules.rank(deal[p]);
        match s.public {
            Some(c) if rules.rank(c) == r => rules.ranks + r,
            _ => r,
        }
    };
    let live: Vec<usize> = (0..n).filter(|&p| !s.folded[p]).collect();
    let best = live.iter().map(|&p| strength(p)).max().expect("live player");
    let winners: Vec<usize> = live.iter().copied().filter(|&p| strength(p) == best).collect();
    let share = pot / winners.len() as f64;
    (0..n)
        .map(|p| if winners.contains(&p) { share - s.contrib[p] } else { -s.contrib[p] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(n: usize, contrib: &[f64], folded: &[bool], public: Option<usize>) -> Betting {
        let mut s = Betting {
            round: 1,
            contrib: [0.0; MAX_PLAYERS],
            folded: [false; MAX_PLAYERS],
            level: 0.0,
            raises: 0,
            calls: 0,
            remaining: n,
            to_act: 0,
            public,
            history: String::new(),
        };
        s.contrib[..n].copy_from_slice(contrib);
        s.folded[..n].copy_from_slice(folded);
        s
    }

    #[test]
    fn pair_beats_high_card() {
        let r = LeducRules::standard(2);
        // Seat 0 holds a rank-0 card, public card pairs it; seat 1 holds rank 2.
        let s = state(2, &[5.0, 5.0], &[false, false], Some(1));
        assert_eq!(payoffs(&r, &[0, 4], &s), vec![5.0, -5.0]);
        // No pair: higher rank wins.
        let s = state(2, &[3.0, 3.0], &[false, false], Some(2));
        assert_eq!(payoffs(&r, &[0, 4], &s), vec![-3.0, 3.0]);
    }

    #[test]
    fn tie_splits_pot() {
        let r = LeducRules::standard(3);
        // Seats 0 and 2 hold the two rank-2 cards; seat 1 folded.
        let s = state(3, &[7.0, 3.0, 7.0], &[false, true, false], Some(0));
        assert_eq!(payoffs(&r, &[4, 2, 5], &s), vec![1.5, -3.0, 1.5]);
    }

    #[test]
    fn leduc2_shape() {
        let t = build(LeducRules::standard(2)).unwrap();
        assert_eq!(t.counts().post_deal(), 9450);
        assert_eq!(t.num_infosets(), 936);
        assert_eq!(t.max_actions(), 3);
        // Ante 1 + 2 + 2 + 4 + 4 = 13 at stake per player.
        assert_eq!(t.payoff_spread(), 26.0);
    }

    #[test]
    fn raise_cap_three_breaks_counts() {
        let mut rules = LeducRules::standard(2);
        rules.raise_cap = 3;
        let t = build(rules).unwrap();
        assert_ne!(t.counts().post_deal(), 9450);
        assert_ne!(t.num_infosets(), 936);
    }
}
