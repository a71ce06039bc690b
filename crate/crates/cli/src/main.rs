use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use iesl_core::analysis::{self, bisect_eps, Probe, TuneOptions};
use iesl_core::evaluator::Evaluator;
use iesl_core::game::{BehavioralPolicy, GameSpec};
use iesl_core::harness::{self, RawConfig, RunConfig};
use iesl_core::solvers::checkpoint::Checkpoint;
use iesl_core::solvers::{ScoreInit, SolverKind};

/// Exit code for a failed verification gate.
const GATE_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "iesl", version, about = "Equilibrium dynamics for Kuhn and Leduc poker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver and write CSV, SVG, summary and checkpoint.
    Solve(SolveArgs),
    /// Run several solvers on several games and print a NashConv table.
    Compare(CompareArgs),
    /// One IESL run per temperature, with convergence verdicts.
    SweepEps(SweepArgs),
    /// Bisection search for the smallest converging temperature.
    TuneEps(TuneArgs),
    /// Check tree sizes against the reference counts.
    VerifyCounts,
    /// Sample the local hypomonotonicity ratio around a policy.
    ProbeHypomono(ProbeArgs),
    /// Check the policy-difference identity on random policies.
    VerifyLemma1(LemmaArgs),
    /// NashConv and deviation report of a checkpointed policy.
    Eval(EvalArgs),
}

#[derive(Args, Default)]
struct ConfigFlags {
    /// Flat TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    eval_every: Option<u64>,
    /// zero | random
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// conditional | counterfactual
    #[arg(long)]
    rd_weighting: Option<String>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    checkpoint_every: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl ConfigFlags {
    fn raw(&self) -> Result<RawConfig> {
        let base = match &self.config {
            Some(p) => RawConfig::from_file(p)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            game: self.game.clone(),
            solver: self.solver.clone(),
            eps: self.eps,
            lambda: self.lambda,
            iterations: self.iterations,
            eval_every: self.eval_every,
            init: self.init.clone(),
            seed: self.seed,
            rd_weighting: self.rd_weighting.clone(),
            window: self.window,
            threshold: self.threshold,
            checkpoint_every: self.checkpoint_every,
            out_dir: self.out_dir.clone(),
        };
        Ok(base.merge(flags))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    flags: ConfigFlags,
    /// Continue from a checkpoint; `--iterations` more steps are taken.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated games; may be empty.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    games: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "iesl,cfr,fp,rd")]
    solvers: Vec<String>,
    /// Same budget for every solver; profile defaults otherwise.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    eval_every: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    flags: ConfigFlags,
    #[arg(long = "eps-list", value_delimiter = ',', required = true)]
    eps_list: Vec<f64>,
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    game: Option<String>,
    #[arg(long, default_value_t = 0.02)]
    lo: f64,
    #[arg(long, default_value_t = 0.04)]
    hi: f64,
    #[arg(long, default_value_t = 0.005)]
    precision: f64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long, default_value_t = 100)]
    window: usize,
    #[arg(long)]
    threshold: Option<f64>,
    /// Use verdicts recorded by `sweep-eps` instead of running IESL.
    #[arg(long)]
    recorded: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    game: String,
    /// Checkpoint whose policy is the anchor; uniform if absent.
    #[arg(long)]
    anchor: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0.05)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    game: String,
    #[arg(long)]
    checkpoint: PathBuf,
    /// Temperature for the deviation bound; the checkpoint's if absent.
    #[arg(long)]
    eps: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Compare(a) => compare(a),
        Command::SweepEps(a) => sweep(a),
        Command::TuneEps(a) => tune(a),
        Command::VerifyCounts => verify_counts(),
        Command::ProbeHypomono(a) => probe(a),
        Command::VerifyLemma1(a) => lemma(a),
        Command::Eval(a) => eval(a),
    }
}

fn solve(a: SolveArgs) -> Result<u8> {
    let cfg = a.flags.raw()?.resolve()?;
    let stop = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&stop);
    // Best effort: a second handler registration fails harmlessly.
    let _ = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed));
    let out = harness::solve(&cfg, a.resume.as_deref(), Some(&stop))?;
    print!("{}", out.summary.to_text());
    Ok(0)
}

fn parse_games(names: &[String]) -> Result<Vec<GameSpec>> {
    names.iter().filter(|s| !s.is_empty()).map(|s| Ok(s.parse()?)).collect()
}

fn compare(a: CompareArgs) -> Result<u8> {
    let games = parse_games(&a.games)?;
    let solvers: Vec<SolverKind> = a.solvers.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let out_dir = a.out_dir.clone();
    let cells = harness::compare(&games, &solvers, |cfg: &mut RunConfig| {
        if let Some(n) = a.iterations {
            cfg.iterations = n;
        }
        cfg.eval_every = a.eval_every.or(cfg.eval_every);
        cfg.out_dir = out_dir.as_ref().map(|d| d.join(cfg.game.to_string()));
    })?;
    if let Some(dir) = &a.out_dir {
        harness::write_compare_charts(dir, &games, &cells)?;
    }
    print!("{}", harness::format_compare(&games, &solvers, &cells));
    Ok(0)
}

fn sweep(a: SweepArgs) -> Result<u8> {
    let mut raw = a.flags.raw()?;
    raw.solver = Some("iesl".into());
    let base = raw.resolve()?;
    let report = harness::sweep_eps(&base, &a.eps_list)?;
    print!("{}", report.format());
    Ok(0)
}

fn tune(a: TuneArgs) -> Result<u8> {
    let result = if let Some(path) = &a.recorded {
        let text = std::fs::read_to_string(path).with_context(|| path.display().to_string())?;
        let verdicts = harness::parse_verdicts(&text)?;
        bisect_eps(a.lo, a.hi, a.precision, |eps| {
            verdicts
                .iter()
                .find(|(e, _)| (e - eps).abs() < 1e-9)
                .map(|&(e, c)| Probe::verdict(e, c))
                .ok_or_else(|| iesl_core::Error::Config(format!("no recorded verdict for eps {eps}")))
        })?
    } else {
        let Some(game) = &a.game else { bail!("--game or --recorded is required") };
        let game: GameSpec = game.parse()?;
        let tree = game.build()?;
        let p = harness::profile(game, SolverKind::Iesl);
        let opts = TuneOptions {
            lambda: a.lambda.unwrap_or(p.lambda),
            iterations: a.iterations.unwrap_or(p.iterations),
            window: a.window,
            threshold: a.threshold,
            init: ScoreInit::Zero,
        };
        analysis::tune_eps(&tree, a.lo, a.hi, a.precision, &opts)?
    };
    for p in &result.probes {
        let nc = p.final_nashconv.map_or("-".to_string(), |v| format!("{v:.6}"));
        println!("probe eps={} converged={} nashconv={nc}", p.eps, p.converged);
    }
    println!("interval = ({}, {}]", result.interval.0, result.interval.1);
    match result.chosen {
        Some(e) => println!("chosen eps = {e}"),
        None => println!("chosen eps = none (upper endpoint did not converge)"),
    }
    println!("probes = {}", result.probe_count);
    Ok(0)
}

fn verify_counts() -> Result<u8> {
    let rows = harness::verify_counts()?;
    print!("{}", harness::format_counts(&rows));
    Ok(if rows.iter().all(|r| r.passes()) { 0 } else { GATE_FAILED })
}

fn probe(a: ProbeArgs) -> Result<u8> {
    let game: GameSpec = a.game.parse()?;
    let tree = game.build()?;
    let anchor = match &a.anchor {
        Some(p) => Checkpoint::load(&tree, p)?.state.evaluation_policy(),
        None => BehavioralPolicy::uniform(&tree),
    };
    let probe = analysis::probe_hypomonotonicity(&tree, &anchor, a.samples, a.radius, a.seed)?;
    println!("samples = {}", probe.ratios.len());
    println!("mu_estimate = {:e}", probe.mu_estimate);
    println!("reach_weighted_mu_estimate = {:e}", probe.weighted_mu_estimate);
    println!("resampled = {}", probe.resampled);
    Ok(0)
}

fn lemma(a: LemmaArgs) -> Result<u8> {
    let game: GameSpec = a.game.parse()?;
    let tree = game.build()?;
    let report = analysis::verify_lemma1(&tree, a.trials, a.seed)?;
    println!("trials = {}", report.trials);
    println!("max_discrepancy = {:e}", report.max_discrepancy);
    Ok(if report.max_discrepancy <= a.tolerance { 0 } else { GATE_FAILED })
}

fn eval(a: EvalArgs) -> Result<u8> {
    let game: GameSpec = a.game.parse()?;
    let tree = game.build()?;
    let ck = Checkpoint::load(&tree, &a.checkpoint)?;
    let policy = ck.state.evaluation_policy();
    let mut ev = Evaluator::new();
    let report = ev.nashconv(&tree, &policy)?;
    println!("solver = {}", ck.state.kind());
    println!("iteration = {}", ck.state.iteration());
    println!("nashconv = {:e}", report.nashconv);
    for (p, e) in report.per_player.iter().enumerate() {
        println!("exploitability_p{} = {e:e}", p + 1);
    }
    if let Some(eps) = a.eps.or(ck.state.params().map(|p| p.eps)) {
        let d = ev.deviation_check(&tree, &policy, eps)?;
        println!("deviation_bound = {:e}", d.bound);
        println!("deviation_satisfied = {}", d.satisfied);
    }
    Ok(0)
}
