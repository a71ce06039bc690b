//! Run configuration: a flat TOML file, overridable field by field.
//!
//! Canonical form (every key optional except `game`):
//!
//! ```toml
//! game = "leduc-2"
//! solver = "iesl"
//! eps = 0.025
//! lambda = 0.0001
//! iterations = 100000
//! eval_every = 200
//! init = "zero"             # or "random" (uses `seed`)
//! seed = 0
//! rd_weighting = "counterfactual"
//! window = 100
//! threshold = 0.026
//! checkpoint_every = 0      # 0: only at the end
//! out_dir = "runs/leduc-2"
//! ```

use std::path::PathBuf;

use serde::Deserialize;

use super::profiles::profile;
use crate::analysis::default_threshold;
use crate::error::{Error, Result};
use crate::game::{GameSpec, GameTree};
use crate::solvers::{RdWeighting, ScoreInit, ScoreParams, SolverKind};

/// Every field optional; used both for files and for command-line overrides.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub game: Option<String>,
    pub solver: Option<String>,
    pub eps: Option<f64>,
    pub lambda: Option<f64>,
    pub iterations: Option<u64>,
    pub eval_every: Option<u64>,
    pub init: Option<String>,
    pub seed: Option<u64>,
    pub rd_weighting: Option<String>,
    pub window: Option<usize>,
    pub threshold: Option<f64>,
    pub checkpoint_every: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `other` replace ours.
    pub fn merge(mut self, other: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(game, solver, eps, lambda, iterations, eval_every, init, seed, rd_weighting, window, threshold,
              checkpoint_every, out_dir);
        self
    }

    /// Fills defaults from the game/solver profile and validates.
    pub fn resolve(&self) -> Result<RunConfig> {
        let game: GameSpec = self
            .game
            .as_deref()
            .ok_or_else(|| Error::Config("`game` is required".into()))?
            .parse()?;
        let solver: SolverKind = self.solver.as_deref().unwrap_or("iesl").parse()?;
        let p = profile(game, solver);
        let init = match self.init.as_deref().unwrap_or("zero") {
            "zero" => InitKind::Zero,
            "random" => InitKind::Random,
            other => return Err(Error::Config(format!("unknown init `{other}` (zero|random)"))),
        };
        let cfg = RunConfig {
            game,
            solver,
            eps: self.eps.unwrap_or(p.eps),
            lambda: self.lambda.unwrap_or(p.lambda),
            iterations: self.iterations.unwrap_or(p.iterations),
            eval_every: self.eval_every.filter(|&e| e > 0),
            init,
            seed: self.seed.unwrap_or(0),
            rd_weighting: self.rd_weighting.as_deref().map(str::parse).transpose()?.unwrap_or_default(),
            window: self.window.unwrap_or(100),
            threshold: self.threshold,
            checkpoint_every: self.checkpoint_every.unwrap_or(0),
            out_dir: self.out_dir.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Zero,
    Random,
}

/// A fully resolved, validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub game: GameSpec,
    pub solver: SolverKind,
    pub eps: f64,
    pub lambda: f64,
    pub iterations: u64,
    /// `None`: every `max(1, iterations / 500)` steps.
    pub eval_every: Option<u64>,
    pub init: InitKind,
    pub seed: u64,
    pub rd_weighting: RdWeighting,
    pub window: usize,
    /// `None`: `1e-3` times the payoff spread.
    pub threshold: Option<f64>,
    pub checkpoint_every: u64,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Profile defaults for a game and solver.
    pub fn new(game: GameSpec, solver: SolverKind) -> Self {
        let raw = RawConfig { game: Some(game.to_string()), solver: Some(solver.to_string()), ..Default::default() };
        raw.resolve().expect("profile defaults are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if !self.game.is_supported() {
            return Err(Error::UnsupportedGame(self.game.to_string()));
        }
        if matches!(self.solver, SolverKind::Iesl | SolverKind::Rd) {
            if !(self.eps > 0.0 && self.eps.is_finite()) {
                return err(format!("eps must be > 0, got {}", self.eps));
            }
            let max = if self.solver == SolverKind::Iesl { 1.0 } else { f64::INFINITY };
            if !(self.lambda > 0.0 && self.lambda <= max && self.lambda.is_finite()) {
                return err(format!("lambda {} out of range for {}", self.lambda, self.solver));
            }
        }
        if self.window == 0 {
            return err("window must be >= 1".into());
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0 && t.is_finite()) {
                return err(format!("threshold must be >= 0, got {t}"));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> ScoreParams {
        ScoreParams { eps: self.eps, lambda: self.lambda }
    }

    pub fn score_init(&self) -> ScoreInit {
        match self.init {
            InitKind::Zero => ScoreInit::Zero,
            InitKind::Random => ScoreInit::Random(self.seed),
        }
    }

    pub fn eval_interval(&self) -> u64 {
        self.eval_every.unwrap_or((self.iterations / 500).max(1))
    }

    pub fn threshold_for(&self, tree: &GameTree) -> f64 {
        self.threshold.unwrap_or_else(|| default_threshold(tree))
    }

    /// File-name stem for this run's outputs.
    pub fn stem(&self) -> String {
        match self.solver {
            SolverKind::Iesl | SolverKind::Rd => format!("{}-{}-eps{}", self.game, self.solver, self.eps),
            _ => format!("{}-{}", self.game, self.solver),
        }
    }

    /// Canonical serialization; parses back to an equal config.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        s += &format!("game = \"{}\"\n", self.game);
        s += &format!("solver = \"{}\"\n", self.solver);
        s += &format!("eps = {:?}\n", self.eps);
        s += &format!("lambda = {:?}\n", self.lambda);
        s += &format!("iterations = {}\n", self.iterations);
        s += &format!("eval_every = {}\n", self.eval_every.unwrap_or(0));
        s += &format!("init = \"{}\"\n", if self.init == InitKind::Zero { "zero" } else { "random" });
        s += &format!("seed = {}\n", self.seed);
        s += &format!("rd_weighting = \"{}\"\n", self.rd_weighting.as_str());
        s += &format!("window = {}\n", self.window);
        if let Some(t) = self.threshold {
            s += &format!("threshold = {t:?}\n");
        }
        s += &format!("checkpoint_every = {}\n", self.checkpoint_every);
        if let Some(d) = &self.out_dir {
            s += &format!("out_dir = {:?}\n", d.display().to_string());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_override() {
        let raw = RawConfig::from_toml("game = \"kuhn-2\"\nsolver = \"rd\"\neps = 0.2\nthreshold = 0.5\n").unwrap();
        let cfg = raw.resolve().unwrap();
        assert_eq!(cfg.solver, SolverKind::Rd);
        assert_eq!(cfg.eps, 0.2);
        let back = RawConfig::from_toml(&cfg.to_toml()).unwrap().resolve().unwrap();
        assert_eq!(back, cfg);

        let flags = RawConfig { eps: Some(0.3), ..Default::default() };
        assert_eq!(raw.merge(flags).resolve().unwrap().eps, 0.3);
    }

    #[test]
    fn validation() {
        assert!(RawConfig::from_toml("gmae = 1").is_err());
        assert!(RawConfig::default().resolve().is_err());
        let bad = |s: &str| RawConfig::from_toml(s).unwrap().resolve().is_err();
        assert!(bad("game = \"kuhn-9\""));
        assert!(bad("game = \"kuhn-2\"\neps = 0.0"));
        assert!(bad("game = \"kuhn-2\"\nlambda = 1.5"));
        assert!(!bad("game = \"kuhn-2\"\nsolver = \"rd\"\nlambda = 1.5"));
        assert!(bad("game = \"kuhn-2\"\nwindow = 0"));
        assert!(bad("game = \"kuhn-2\"\ninit = \"ones\""));
    }

    #[test]
    fn eval_cadence() {
        let mut cfg = RunConfig::new(GameSpec::KUHN_2, SolverKind::Cfr);
        cfg.iterations = 100_000;
        assert_eq!(cfg.eval_interval(), 200);
        cfg.iterations = 10;
        assert_eq!(cfg.eval_interval(), 1);
        cfg.eval_every = Some(7);
        assert_eq!(cfg.eval_interval(), 7);
    }
}
