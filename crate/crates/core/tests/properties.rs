use std::sync::LazyLock;

use proptest::prelude::*;

use iesl_core::analysis::{bisect_eps, hypomonotonicity_ratio, max_bisection_probes, Probe};
use iesl_core::evaluator::{best_response, nashconv};
use iesl_core::game::{
    compute_reach, expected_values, synthetic, BehavioralPolicy, GameSpec, GameTree, InfosetTable, NodeKind,
};
use iesl_core::solvers::{
    advantage_map, advantage_map_full_reach, softmax_choice, IeslState, ScoreInit, ScoreParams, Workspace,
};

static KUHN2: LazyLock<GameTree> = LazyLock::new(|| GameSpec::KUHN_2.build().unwrap());
static KUHN3: LazyLock<GameTree> = LazyLock::new(|| GameSpec::KUHN_3.build().unwrap());
static LEDUC2: LazyLock<GameTree> = LazyLock::new(|| GameSpec::LEDUC_2.build().unwrap());
static TWO_STEP: LazyLock<GameTree> = LazyLock::new(|| synthetic::two_step(0.9).unwrap());

fn game(i: usize) -> &'static GameTree {
    match i {
        0 => &KUHN2,
        1 => &KUHN3,
        2 => &LEDUC2,
        _ => &TWO_STEP,
    }
}

fn random_policy(tree: &GameTree, seed: u64, floor: f64) -> BehavioralPolicy {
    BehavioralPolicy::random(tree, &mut iesl_core::rng(seed), floor)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn softmax_rows_are_positive_distributions(
        values in prop::collection::vec(-1.0f64..1.0, 24),
        eps in 0.003f64..10.0,
    ) {
        let tree = &*KUHN2;
        let scores = InfosetTable::from_values(tree, values).unwrap();
        let pi = softmax_choice(&scores, eps).unwrap();
        for row in pi.table().iter() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(row.iter().all(|&p| p > 0.0));
        }
        // Higher score, higher probability.
        for (s, p) in scores.iter().zip(pi.table().iter()) {
            if s[0] > s[1] {
                prop_assert!(p[0] >= p[1]);
            }
        }
    }

    #[test]
    fn payoffs_conserve_probability_and_sum(g in 0usize..3, seed in any::<u64>()) {
        let tree = game(g);
        let pi = random_policy(tree, seed, 0.0);
        let reach = compute_reach(tree, &pi).unwrap();
        let values = expected_values(tree, &pi).unwrap();
        let mut mass = 0.0;
        let mut direct = vec![0.0; tree.num_players()];
        for (id, node) in tree.nodes().iter().enumerate() {
            if node.kind != NodeKind::Terminal {
                continue;
            }
            let id = id as u32;
            let pay = tree.payoffs(id);
            prop_assert!(pay.iter().sum::<f64>().abs() <= 1e-12);
            let r = reach.full(id);
            mass += r;
            for (d, &p) in direct.iter_mut().zip(pay) {
                *d += r * p;
            }
        }
        prop_assert!((mass - 1.0).abs() <= 1e-9);
        for (p, d) in direct.iter().enumerate() {
            prop_assert!((values.utility(p) - d).abs() <= 1e-9);
        }
        prop_assert!(values.utilities().iter().sum::<f64>().abs() <= 1e-9);
    }

    #[test]
    fn advantages_have_zero_policy_mean(g in 0usize..4, seed in any::<u64>()) {
        let tree = game(g);
        let pi = random_policy(tree, seed, 0.0);
        let w = advantage_map(tree, &pi).unwrap();
        for x in 0..tree.num_infosets() {
            let mean: f64 = w.get(x).iter().zip(pi.get(x)).map(|(a, p)| a * p).sum();
            prop_assert!(mean.abs() <= 1e-9, "infoset {x}: {mean}");
        }
    }

    #[test]
    fn own_reach_cancels(g in 0usize..4, seed in any::<u64>()) {
        let tree = game(g);
        let pi = random_policy(tree, seed, 0.01);
        let a = advantage_map(tree, &pi).unwrap();
        let b = advantage_map_full_reach(tree, &pi).unwrap();
        prop_assert!(a.values.max_abs_diff(&b.values) <= 1e-9);
    }

    #[test]
    fn best_response_is_not_improvable(g in 0usize..3, seed in any::<u64>()) {
        let tree = game(g);
        let pi = random_policy(tree, seed, 0.0);
        let nc = nashconv(tree, &pi).unwrap();
        prop_assert!(nc.nashconv >= 0.0);
        prop_assert_eq!(nc.nashconv, nc.per_player.iter().sum::<f64>());
        for p in 0..tree.num_players() {
            let br = best_response(tree, &pi, p).unwrap();
            prop_assert!(br.exploitability >= -1e-9);
            let again = best_response(tree, &br.br_policy, p).unwrap();
            prop_assert!(again.exploitability.abs() <= 1e-9);
        }
    }

    #[test]
    fn ratio_is_swap_symmetric(g in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
        prop_assume!(s1 != s2);
        let tree = game(g);
        let a = random_policy(tree, s1, 0.01);
        let b = random_policy(tree, s2, 0.01);
        let ab = hypomonotonicity_ratio(tree, &a, &b).unwrap().unwrap();
        let ba = hypomonotonicity_ratio(tree, &b, &a).unwrap().unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9 * (1.0 + ab.abs()));
    }

    #[test]
    fn bisection_respects_probe_bound(
        lo in 0.001f64..0.5,
        width in 0.001f64..1.0,
        precision in 0.0005f64..0.1,
        cut in 0.0f64..1.0,
    ) {
        let hi = lo + width;
        let cut = lo + cut * width;
        let r = bisect_eps(lo, hi, precision, |e| Ok(Probe::verdict(e, e > cut))).unwrap();
        prop_assert!(r.probe_count <= max_bisection_probes(lo, hi, precision) + 2);
        let (a, b) = r.interval;
        prop_assert!(a <= cut && cut < b);
        prop_assert!(b - a <= precision.max(f64::EPSILON) * (1.0 + 1e-9) || r.probe_count == 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Scores are convex combinations of the start and of advantages, so
    /// they never leave the ball that contains both.
    #[test]
    fn iesl_scores_stay_bounded(eps in 0.001f64..1.0, lambda in 0.001f64..1.0, seed in any::<u64>()) {
        let tree = &*KUHN2;
        let mut s = IeslState::new(tree, ScoreParams { eps, lambda }, ScoreInit::Random(seed)).unwrap();
        let bound = s.scores.sup_norm().max(tree.payoff_spread()) + 1e-9;
        let mut ws = Workspace::new();
        for _ in 0..10_000 {
            s.step(tree, &mut ws).unwrap();
            prop_assert!(s.scores.sup_norm() <= bound);
        }
    }
}
