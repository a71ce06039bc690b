//! Multi-run experiments: solver comparison and temperature sweeps.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::config::RunConfig;
use super::output::svg_chart;
use super::run::{solve, RunOutput, RunSummary};
use super::worker_count;
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::solvers::SolverKind;

/// Runs independent jobs on the configured number of worker threads,
/// returning results in input order.
pub fn run_parallel<T, R, F>(jobs: Vec<T>, f: F) -> Result<Vec<R>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| jobs.into_par_iter().map(f).collect()))
}

#[derive(Debug, Clone)]
pub struct CompareCell {
    pub game: GameSpec,
    pub solver: SolverKind,
    pub result: std::result::Result<RunSummary, String>,
    pub curve: Vec<(u64, f64)>,
}

/// Runs every solver on every game. `configure` adjusts each cell's config
/// (budget, output directory, hyperparameters) before it runs.
pub fn compare<F>(games: &[GameSpec], solvers: &[SolverKind], configure: F) -> Result<Vec<CompareCell>>
where
    F: Fn(&mut RunConfig) + Sync,
{
    let jobs: Vec<(GameSpec, SolverKind)> =
        games.iter().flat_map(|&g| solvers.iter().map(move |&s| (g, s))).collect();
    let cells = run_parallel(jobs, |(game, solver)| {
        let mut cfg = RunConfig::new(game, solver);
        configure(&mut cfg);
        let result = solve(&cfg, None, None);
        let curve = result
            .as_ref()
            .map(|o| o.records.iter().map(|r| (r.iteration, r.nashconv)).collect())
            .unwrap_or_default();
        CompareCell { game, solver, result: result.map(|o| o.summary).map_err(|e| e.to_string()), curve }
    })?;
    Ok(cells)
}

/// Rows are solvers, columns are games, entries final NashConv.
pub fn format_compare(games: &[GameSpec], solvers: &[SolverKind], cells: &[CompareCell]) -> String {
    let mut s = format!("{:<8}", "solver");
    for g in games {
        let _ = write!(s, "{:>16}", g.to_string());
    }
    s.push('\n');
    for &solver in solvers {
        let _ = write!(s, "{:<8}", solver.to_string());
        for &game in games {
            let cell = cells.iter().find(|c| c.game == game && c.solver == solver);
            let text = match cell.map(|c| &c.result) {
                Some(Ok(sum)) => format!("{:.6}", sum.final_nashconv),
                Some(Err(_)) => "error".to_string(),
                None => "-".to_string(),
            };
            let _ = write!(s, "{text:>16}");
        }
        s.push('\n');
    }
    for c in cells {
        if let Err(e) = &c.result {
            let _ = writeln!(s, "{} {}: {e}", c.game, c.solver);
        }
    }
    s
}

/// One chart per game with every solver's curve.
pub fn write_compare_charts(dir: &Path, games: &[GameSpec], cells: &[CompareCell]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for &g in games {
        let series: Vec<(String, Vec<(u64, f64)>)> =
            cells.iter().filter(|c| c.game == g).map(|c| (c.solver.to_string(), c.curve.clone())).collect();
        std::fs::write(dir.join(format!("{g}-compare.svg")), svg_chart(&format!("{g} NashConv"), &series))?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub runs: Vec<(f64, RunOutput)>,
    /// Converged temperatures by increasing final NashConv.
    pub by_nashconv: Vec<f64>,
    /// Converged temperatures by increasing iterations-to-threshold.
    pub by_speed: Vec<f64>,
}

impl SweepReport {
    pub fn converged(&self, eps: f64) -> Option<bool> {
        self.runs.iter().find(|(e, _)| *e == eps).map(|(_, o)| o.summary.converged)
    }

    pub fn format(&self) -> String {
        let mut s = format!(
            "{:>10}{:>11}{:>16}{:>18}{:>16}\n",
            "eps", "converged", "final_nashconv", "iters_to_thresh", "window_max"
        );
        for (eps, o) in &self.runs {
            let sm = &o.summary;
            let itt = sm.iterations_to_threshold.map_or("-".to_string(), |k| k.to_string());
            let _ = writeln!(
                s,
                "{eps:>10}{:>11}{:>16.6}{itt:>18}{:>16.3e}",
                sm.converged, sm.final_nashconv, sm.window_max
            );
        }
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" < ");
        let _ = writeln!(s, "converged by final NashConv: {}", join(&self.by_nashconv));
        let _ = writeln!(s, "converged by iterations to threshold: {}", join(&self.by_speed));
        s
    }
}

/// One IESL run per temperature, all other settings from `base`.
pub fn sweep_eps(base: &RunConfig, eps_list: &[f64]) -> Result<SweepReport> {
    if eps_list.is_empty() {
        return Err(Error::Config("sweep needs at least one eps".into()));
    }
    let jobs: Vec<f64> = eps_list.to_vec();
    let outs = run_parallel(jobs, |eps| {
        let mut cfg = base.clone();
        cfg.solver = SolverKind::Iesl;
        cfg.eps = eps;
        solve(&cfg, None, None).map(|o| (eps, o))
    })?;
    let runs = outs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut conv: Vec<&(f64, RunOutput)> = runs.iter().filter(|(_, o)| o.summary.converged).collect();
    conv.sort_by(|a, b| a.1.summary.final_nashconv.total_cmp(&b.1.summary.final_nashconv));
    let by_nashconv = conv.iter().map(|(e, _)| *e).collect();
    conv.sort_by_key(|(_, o)| o.summary.iterations_to_threshold.unwrap_or(u64::MAX));
    let by_speed = conv.iter().map(|(e, _)| *e).collect();
    if let Some(dir) = &base.out_dir {
        let series: Vec<(String, Vec<(u64, f64)>)> = runs
            .iter()
            .map(|(e, o)| (format!("eps={e}"), o.records.iter().map(|r| (r.iteration, r.nashconv)).collect()))
            .collect();
        let title = format!("{} IESL NashConv by eps", base.game);
        std::fs::write(dir.join(format!("{}-sweep.svg", base.game)), svg_chart(&title, &series))?;
    }
    let report = SweepReport { runs, by_nashconv, by_speed };
    if let Some(dir) = &base.out_dir {
        std::fs::write(dir.join(format!("{}-sweep.verdicts", base.game)), format_verdicts(&report))?;
    }
    Ok(report)
}

/// `eps converged` lines, one per run, as recorded by a sweep.
pub fn format_verdicts(report: &SweepReport) -> String {
    report.runs.iter().map(|(e, o)| format!("{e} {}\n", o.summary.converged)).collect()
}

pub fn parse_verdicts(text: &str) -> Result<Vec<(f64, bool)>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace();
            let eps = it.next().and_then(|v| v.parse().ok());
            let conv = it.next().and_then(|v| v.parse().ok());
            match (eps, conv) {
                (Some(e), Some(c)) => Ok((e, c)),
                _ => Err(Error::Config(format!("bad verdict line `{l}`"))),
            }
        })
        .collect()
}
