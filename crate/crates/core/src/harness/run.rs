//! Single-run orchestration: step, evaluate, record, checkpoint.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use super::config::RunConfig;
use super::output::{svg_chart, CsvSink, RunRecord};
use crate::analysis::{detect_convergence, iterations_to_threshold};
use crate::error::{Error, Result};
use crate::evaluator::DeviationReport;
use crate::game::GameTree;
use crate::solvers::checkpoint::Checkpoint;
use crate::solvers::{SolverKind, SolverState, Workspace};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub config: RunConfig,
    pub start_iteration: u64,
    pub final_iteration: u64,
    pub final_nashconv: f64,
    pub final_exploitability: Vec<f64>,
    pub converged: bool,
    pub window_max: f64,
    pub threshold: f64,
    /// First iteration after which the residual stayed below the threshold.
    pub iterations_to_threshold: Option<u64>,
    /// Only for IESL, at the run's temperature.
    pub deviation: Option<DeviationReport>,
    pub interrupted: bool,
    pub wall_ms: u64,
}

impl RunSummary {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        kv("game", format!("\"{}\"", self.config.game));
        kv("solver", format!("\"{}\"", self.config.solver));
        kv("start_iteration", self.start_iteration.to_string());
        kv("final_iteration", self.final_iteration.to_string());
        kv("final_nashconv", format!("{:e}", self.final_nashconv));
        let expl: Vec<String> = self.final_exploitability.iter().map(|e| format!("{e:e}")).collect();
        kv("final_exploitability", format!("[{}]", expl.join(", ")));
        kv("converged", self.converged.to_string());
        kv("window", self.config.window.to_string());
        kv("window_max_residual", format!("{:e}", self.window_max));
        kv("threshold", format!("{:e}", self.threshold));
        if let Some(k) = self.iterations_to_threshold {
            kv("iterations_to_threshold", k.to_string());
        }
        if let Some(d) = &self.deviation {
            kv("deviation_bound", format!("{:e}", d.bound));
            kv("deviation_measured", format!("{:e}", d.measured_deviation));
            kv("deviation_satisfied", d.satisfied.to_string());
            kv("deviation_horizon", d.horizon.to_string());
            kv("deviation_actions", d.action_count.to_string());
        }
        kv("interrupted", self.interrupted.to_string());
        kv("wall_ms", self.wall_ms.to_string());
        s
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<RunRecord>,
    /// Per-step residuals, one per step taken in this run.
    pub residuals: Vec<f64>,
    /// Per-step L-infinity change of the played policy.
    pub drifts: Vec<f64>,
    pub state: SolverState,
    pub summary: RunSummary,
}

pub type RecordHook<'a> = &'a mut dyn FnMut(&RunRecord) -> Result<()>;
pub type CheckpointHook<'a> = &'a mut dyn FnMut(&SolverState) -> Result<()>;

/// Callbacks invoked during a run.
#[derive(Default)]
pub struct RunHooks<'a> {
    pub stop: Option<&'a AtomicBool>,
    pub on_record: Option<RecordHook<'a>>,
    pub on_checkpoint: Option<CheckpointHook<'a>>,
}

/// Runs `cfg.iterations` steps from `initial` (or a fresh state).
///
/// Records are taken at the first iteration, at every multiple of the
/// evaluation interval and at the last iteration.
pub fn run_solver(
    tree: &GameTree,
    cfg: &RunConfig,
    initial: Option<SolverState>,
    mut hooks: RunHooks<'_>,
) -> Result<RunOutput> {
    cfg.validate()?;
    let mut state = match initial {
        Some(s) => {
            if s.kind() != cfg.solver {
                return Err(Error::Config(format!("checkpoint holds {}, config asks for {}", s.kind(), cfg.solver)));
            }
            s
        }
        None => {
            let mut s = SolverState::new(cfg.solver, tree, cfg.params(), cfg.score_init())?;
            if let SolverState::Rd(rd) = &mut s {
                rd.weighting = cfg.rd_weighting;
            }
            s
        }
    };
    let start = state.iteration();
    let end = start + cfg.iterations;
    let every = cfg.eval_interval();
    let threshold = cfg.threshold_for(tree);
    let mut ws = Workspace::new();
    let clock = Instant::now();

    let mut records = Vec::new();
    let mut residuals = Vec::with_capacity(cfg.iterations.min(1 << 24) as usize);
    let mut drifts = Vec::with_capacity(residuals.capacity());
    let mut played = state.current_policy();
    let mut last_drift = 0.0;
    let mut interrupted = false;

    let record = |records: &mut Vec<RunRecord>,
                  state: &SolverState,
                  ws: &mut Workspace,
                  drift: f64,
                  hooks: &mut RunHooks<'_>|
     -> Result<()> {
        let report = ws.evaluator.nashconv(tree, &state.evaluation_policy())?;
        let r = RunRecord {
            iteration: state.iteration(),
            nashconv: report.nashconv,
            exploitability: report.per_player,
            residual: state.residual(tree, ws)?,
            drift,
            ms: clock.elapsed().as_millis() as u64,
        };
        if let Some(f) = hooks.on_record.as_deref_mut() {
            f(&r)?;
        }
        records.push(r);
        Ok(())
    };

    record(&mut records, &state, &mut ws, 0.0, &mut hooks)?;
    while state.iteration() < end {
        if hooks.stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
            interrupted = true;
            break;
        }
        let info = state.step(tree, &mut ws)?;
        let now = state.current_policy();
        last_drift = now.max_abs_diff(&played);
        played = now;
        residuals.push(info.residual);
        drifts.push(last_drift);
        let k = state.iteration();
        if k % every == 0 || k == end {
            record(&mut records, &state, &mut ws, last_drift, &mut hooks)?;
        }
        if cfg.checkpoint_every > 0 && k % cfg.checkpoint_every == 0 {
            if let Some(f) = hooks.on_checkpoint.as_deref_mut() {
                f(&state)?;
            }
        }
    }
    if records.last().map(|r| r.iteration) != Some(state.iteration()) {
        record(&mut records, &state, &mut ws, last_drift, &mut hooks)?;
    }
    if let Some(f) = hooks.on_checkpoint.as_deref_mut() {
        f(&state)?;
    }

    let verdict = detect_convergence(&residuals, &[], cfg.window, threshold)?;
    let last = records.last().expect("at least one record");
    let deviation = match &state {
        SolverState::Iesl(s) => Some(ws.evaluator.deviation_check(tree, &s.current_policy(), s.params.eps)?),
        _ => None,
    };
    let summary = RunSummary {
        config: cfg.clone(),
        start_iteration: start,
        final_iteration: state.iteration(),
        final_nashconv: last.nashconv,
        final_exploitability: last.exploitability.clone(),
        converged: verdict.converged,
        window_max: verdict.window_max,
        threshold,
        iterations_to_threshold: iterations_to_threshold(&residuals, threshold).map(|i| start + i as u64),
        deviation,
        interrupted,
        wall_ms: clock.elapsed().as_millis() as u64,
    };
    Ok(RunOutput { records, residuals, drifts, state, summary })
}

/// Paths of the files a run writes into its output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPaths {
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub summary: PathBuf,
    pub checkpoint: PathBuf,
    pub config: PathBuf,
}

impl RunPaths {
    pub fn new(dir: &Path, stem: &str) -> Self {
        Self {
            csv: dir.join(format!("{stem}.csv")),
            svg: dir.join(format!("{stem}.svg")),
            summary: dir.join(format!("{stem}.summary.toml")),
            checkpoint: dir.join(format!("{stem}.ckpt")),
            config: dir.join(format!("{stem}.config.toml")),
        }
    }
}

/// Builds the game, runs, and writes CSV, SVG, summary, config and
/// checkpoint when `cfg.out_dir` is set.
pub fn solve(cfg: &RunConfig, resume: Option<&Path>, stop: Option<&AtomicBool>) -> Result<RunOutput> {
    let tree = cfg.game.build()?;
    let initial = match resume {
        Some(p) => Some(Checkpoint::load(&tree, p)?.state),
        None => None,
    };
    let Some(dir) = &cfg.out_dir else {
        return run_solver(&tree, cfg, initial, RunHooks { stop, ..Default::default() });
    };
    std::fs::create_dir_all(dir)?;
    let paths = RunPaths::new(dir, &cfg.stem());
    std::fs::write(&paths.config, cfg.to_toml())?;
    let mut sink = CsvSink::new(BufWriter::new(File::create(&paths.csv)?), tree.num_players())?;
    let mut on_record = |r: &RunRecord| sink.write(r);
    let seed = cfg.seed.to_string();
    let mut on_checkpoint = |s: &SolverState| {
        let mut ck = Checkpoint::new(&tree, s.clone());
        ck.meta.push(("seed".into(), seed.clone()));
        ck.save(&tree, &paths.checkpoint)
    };
    let out = run_solver(
        &tree,
        cfg,
        initial,
        RunHooks { stop, on_record: Some(&mut on_record), on_checkpoint: Some(&mut on_checkpoint) },
    )?;
    let curve: Vec<(u64, f64)> = out.records.iter().map(|r| (r.iteration, r.nashconv)).collect();
    let title = format!("{} {} NashConv", cfg.game, cfg.solver);
    std::fs::write(&paths.svg, svg_chart(&title, &[(cfg.solver.to_string(), curve)]))?;
    std::fs::write(&paths.summary, out.summary.to_text())?;
    Ok(out)
}

/// Which policy a solver is scored on.
pub fn evaluated_policy_name(kind: SolverKind) -> &'static str {
    match kind {
        SolverKind::Iesl => "instantaneous",
        _ => "average",
    }
}
