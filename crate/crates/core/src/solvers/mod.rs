//! Learning dynamics over a fixed game tree.
//!
//! Every dynamic is a step function on a [`SolverState`]. They share the
//! infoset advantage map of [`advantage`]:
//!
//! * IESL: `y <- (1 - lambda) y + lambda w(softmax(y / eps))`, evaluated on the
//!   instantaneous policy.
//! * RD: `y <- y + lambda w(softmax(y / eps))`, optionally with `w` scaled by
//!   external reach, evaluated on the uniform average of its iterates.
//! * CFR: simultaneous vanilla CFR with regret matching, evaluated on the
//!   own-reach weighted average policy.
//! * FP: extensive-form fictitious play with exact best responses and
//!   realization-equivalent mixing, evaluated on its average policy.

pub mod advantage;
pub mod cfr;
pub mod checkpoint;
pub mod fp;
pub mod iesl;
pub mod rd;
pub mod softmax;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use advantage::{advantage_map, advantage_map_full_reach, AdvantageMap, AdvantageWorkspace};
pub use cfr::{regret_matching, CfrState};
pub use fp::FpState;
pub use iesl::IeslState;
pub use rd::{RdState, RdWeighting};
pub use softmax::{softmax_choice, softmax_into};

use crate::error::{Error, Result};
use crate::evaluator::Evaluator;
use crate::game::{BehavioralPolicy, GameTree, InfosetTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Iesl,
    Cfr,
    Fp,
    Rd,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [SolverKind::Iesl, SolverKind::Cfr, SolverKind::Fp, SolverKind::Rd];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Iesl => "iesl",
            SolverKind::Cfr => "cfr",
            SolverKind::Fp => "fp",
            SolverKind::Rd => "rd",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iesl" => Ok(SolverKind::Iesl),
            "cfr" => Ok(SolverKind::Cfr),
            "fp" | "xfp" => Ok(SolverKind::Fp),
            "rd" => Ok(SolverKind::Rd),
            other => Err(Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

/// Hyperparameters shared by the score-based dynamics (ignored by CFR/FP).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreParams {
    /// Softmax temperature.
    pub eps: f64,
    /// Merged step size `eta * dt`.
    pub lambda: f64,
}

impl Default for ScoreParams {
    fn default() -> Self {
        Self { eps: 0.05, lambda: 0.1 }
    }
}

/// How to initialise score tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreInit {
    Zero,
    /// Independent uniform draws in `[-0.1, 0.1]` from the given seed.
    Random(u64),
}

/// Scratch buffers reused across steps.
#[derive(Debug, Default)]
pub struct Workspace {
    pub advantages: AdvantageWorkspace,
    pub evaluator: Evaluator,
    pub(crate) map: Option<AdvantageMap>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn advantage(&mut self, tree: &GameTree, policy: &BehavioralPolicy) -> Result<&AdvantageMap> {
        let map = self.map.get_or_insert_with(|| AdvantageMap::zeros(tree));
        if map.values.offsets() != tree.slot_offsets() {
            *map = AdvantageMap::zeros(tree);
        }
        self.advantages.compute(tree, policy, map)?;
        Ok(map)
    }
}

/// Diagnostics from one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Sup-norm of the dynamic's velocity before the update: `||w - y||` for
    /// IESL, `||w||` for the others (see each state type).
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverState {
    Iesl(IeslState),
    Cfr(CfrState),
    Fp(FpState),
    Rd(RdState),
}

impl SolverState {
    pub fn new(kind: SolverKind, tree: &GameTree, params: ScoreParams, init: ScoreInit) -> Result<Self> {
        Ok(match kind {
            SolverKind::Iesl => SolverState::Iesl(IeslState::new(tree, params, init)?),
            SolverKind::Cfr => SolverState::Cfr(CfrState::new(tree)),
            SolverKind::Fp => SolverState::Fp(FpState::new(tree)),
            SolverKind::Rd => SolverState::Rd(RdState::new(tree, params, init)?),
        })
    }

    pub fn kind(&self) -> SolverKind {
        match self {
            SolverState::Iesl(_) => SolverKind::Iesl,
            SolverState::Cfr(_) => SolverKind::Cfr,
            SolverState::Fp(_) => SolverKind::Fp,
            SolverState::Rd(_) => SolverKind::Rd,
        }
    }

    pub fn iteration(&self) -> u64 {
        match self {
            SolverState::Iesl(s) => s.iteration,
            SolverState::Cfr(s) => s.iteration,
            SolverState::Fp(s) => s.iteration,
            SolverState::Rd(s) => s.iteration,
        }
    }

    pub fn step(&mut self, tree: &GameTree, ws: &mut Workspace) -> Result<StepInfo> {
        match self {
            SolverState::Iesl(s) => s.step(tree, ws),
            SolverState::Cfr(s) => s.step(tree, ws),
            SolverState::Fp(s) => s.step(tree, ws),
            SolverState::Rd(s) => s.step(tree, ws),
        }
    }

    /// The residual the next step would report, without stepping.
    pub fn residual(&self, tree: &GameTree, ws: &mut Workspace) -> Result<f64> {
        match self {
            SolverState::Iesl(s) => s.rest_point_residual(tree, ws),
            SolverState::Fp(s) => Ok(ws.advantage(tree, s.average_policy())?.values.sup_norm()),
            _ => Ok(ws.advantage(tree, &self.current_policy())?.values.sup_norm()),
        }
    }

    /// The policy the dynamic is currently playing.
    pub fn current_policy(&self) -> BehavioralPolicy {
        match self {
            SolverState::Iesl(s) => s.current_policy(),
            SolverState::Cfr(s) => s.current_policy(),
            SolverState::Fp(s) => s.average_policy().clone(),
            SolverState::Rd(s) => s.current_policy(),
        }
    }

    /// The policy that is scored: instantaneous for IESL, average otherwise.
    pub fn evaluation_policy(&self) -> BehavioralPolicy {
        match self {
            SolverState::Iesl(s) => s.current_policy(),
            SolverState::Cfr(s) => s.average_policy(),
            SolverState::Fp(s) => s.average_policy().clone(),
            SolverState::Rd(s) => s.average_policy(),
        }
    }

    pub fn params(&self) -> Option<ScoreParams> {
        match self {
            SolverState::Iesl(s) => Some(s.params),
            SolverState::Rd(s) => Some(s.params),
            _ => None,
        }
    }
}

pub(crate) fn validate_params(params: ScoreParams, lambda_max: Option<f64>) -> Result<()> {
    if !(params.eps > 0.0) || !params.eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps must be > 0, got {}", params.eps)));
    }
    let ok = match lambda_max {
        Some(max) => params.lambda > 0.0 && params.lambda <= max,
        None => params.lambda > 0.0 && params.lambda.is_finite(),
    };
    if !ok {
        let range = if lambda_max.is_some() { "(0, 1]" } else { "(0, inf)" };
        return Err(Error::InvalidParameter(format!("lambda must be in {range}, got {}", params.lambda)));
    }
    Ok(())
}

pub(crate) fn init_scores(tree: &GameTree, init: ScoreInit) -> InfosetTable {
    let mut y = InfosetTable::zeros(tree);
    if let ScoreInit::Random(seed) = init {
        let mut rng = crate::rng(seed);
        for v in y.values_mut() {
            *v = rng.random_range(-0.1..=0.1);
        }
    }
    y
}

/// Normalises each row of an accumulator; rows with zero mass become uniform.
pub(crate) fn normalize_rows(acc: &InfosetTable) -> BehavioralPolicy {
    let mut out = acc.clone();
    for x in 0..out.num_infosets() {
        let row = out.get_mut(x);
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        } else {
            let u = 1.0 / row.len() as f64;
            row.fill(u);
        }
    }
    BehavioralPolicy::from_table_unchecked(out)
}
