//! Per game and solver defaults, found by sweeping.

use crate::game::{GameFamily, GameSpec};
use crate::solvers::SolverKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub eps: f64,
    pub lambda: f64,
    pub iterations: u64,
}

pub fn profile(game: GameSpec, solver: SolverKind) -> Profile {
    use SolverKind::*;
    let budget = default_budget(game);
    match (game.family, game.players, solver) {
        (GameFamily::Kuhn, 2, Iesl) => Profile { eps: 0.0035, lambda: 5e-5, iterations: 2_000_000 },
        (GameFamily::Kuhn, _, Rd) => Profile { eps: 0.05, lambda: 0.1, iterations: budget },
        (GameFamily::Kuhn, _, Iesl) => Profile { eps: 0.005, lambda: 5e-5, iterations: 2_000_000 },
        (GameFamily::Leduc, 2, Iesl) => Profile { eps: 0.025, lambda: 1e-4, iterations: budget },
        (GameFamily::Leduc, _, Iesl) => Profile { eps: 0.06, lambda: 3e-4, iterations: budget },
        (GameFamily::Leduc, _, Rd) => Profile { eps: 0.05, lambda: 0.01, iterations: budget },
        (_, _, Iesl | Rd) => Profile { eps: 0.05, lambda: 0.1, iterations: budget },
        (_, _, Cfr | Fp) => Profile { eps: 0.05, lambda: 0.1, iterations: budget },
    }
}

/// Iteration budgets: Kuhn 1e6, Leduc-2 4e5, Leduc-3 6e4, others 1e4.
pub fn default_budget(game: GameSpec) -> u64 {
    match (game.family, game.players) {
        (GameFamily::Kuhn, _) => 1_000_000,
        (GameFamily::Leduc, 2) => 400_000,
        (GameFamily::Leduc, _) => 60_000,
        _ => 10_000,
    }
}
