use crate::error::{Error, Result};
use crate::evaluator::nashconv;
use crate::game::GameTree;
use crate::solvers::{IeslState, ScoreInit, ScoreParams, Workspace};

use super::convergence::{default_threshold, detect_convergence, iterations_to_threshold};

/// One evaluation of the convergence predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub eps: f64,
    pub converged: bool,
    pub final_nashconv: Option<f64>,
    pub iterations_to_threshold: Option<usize>,
}

impl Probe {
    pub fn verdict(eps: f64, converged: bool) -> Self {
        Self { eps, converged, final_nashconv: None, iterations_to_threshold: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    /// Every probe in the order it was made, endpoint checks first.
    pub probes: Vec<Probe>,
    /// Final bracket `(failing, converging]`.
    pub interval: (f64, f64),
    /// Smallest probed eps that converged, if any.
    pub chosen: Option<f64>,
    pub final_nashconv: Option<f64>,
    pub probe_count: usize,
}

impl TuneResult {
    /// Probes made after the two endpoint checks.
    pub fn bisection_probes(&self) -> &[Probe] {
        self.probes.get(2..).unwrap_or(&[])
    }
}

/// `ceil(log2((hi - lo) / precision))`, the number of halvings needed.
pub fn max_bisection_probes(lo: f64, hi: f64, precision: f64) -> usize {
    let ratio = (hi - lo) / precision;
    if ratio <= 1.0 {
        return 0;
    }
    // Guard against 0.02 / 0.005 landing a hair above 4.
    (ratio.log2() - 1e-9).ceil() as usize
}

/// Bisection on a monotone convergence predicate over `(lo, hi]`.
///
/// `hi` must converge and `lo` must not; both are checked first. If either
/// check disagrees, the endpoint verdicts are returned without bisecting.
pub fn bisect_eps<F>(lo: f64, hi: f64, precision: f64, mut predicate: F) -> Result<TuneResult>
where
    F: FnMut(f64) -> Result<Probe>,
{
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid interval ({lo}, {hi}]")));
    }
    if !(precision > 0.0) {
        return Err(Error::InvalidParameter(format!("precision must be > 0, got {precision}")));
    }
    let mut probes = Vec::new();
    let top = predicate(hi)?;
    let top_ok = top.converged;
    probes.push(top);
    let bottom = predicate(lo)?;
    let bottom_ok = bottom.converged;
    probes.push(bottom);

    let finish = |probes: Vec<Probe>, interval: (f64, f64), chosen: Option<f64>| {
        let final_nashconv = chosen.and_then(|c| probes.iter().find(|p| p.eps == c).and_then(|p| p.final_nashconv));
        TuneResult { probe_count: probes.len(), probes, interval, chosen, final_nashconv }
    };
    if !top_ok {
        return Ok(finish(probes, (hi, hi), None));
    }
    if bottom_ok {
        return Ok(finish(probes, (lo, lo + precision), Some(lo)));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..max_bisection_probes(lo, hi, precision) {
        let mid = 0.5 * (a + b);
        let p = predicate(mid)?;
        if p.converged {
            b = mid;
        } else {
            a = mid;
        }
        probes.push(p);
    }
    Ok(finish(probes, (a, b), Some(b)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneOptions {
    pub lambda: f64,
    pub iterations: u64,
    pub window: usize,
    /// Residual threshold; defaults to `1e-3` times the payoff spread.
    pub threshold: Option<f64>,
    pub init: ScoreInit,
}

impl Default for TuneOptions {
    fn default() -> Self {
        Self { lambda: 0.1, iterations: 10_000, window: 100, threshold: None, init: ScoreInit::Zero }
    }
}

/// Runs IESL at one temperature and applies the convergence detector.
pub fn iesl_probe(tree: &GameTree, eps: f64, opts: &TuneOptions) -> Result<Probe> {
    let threshold = opts.threshold.unwrap_or_else(|| default_threshold(tree));
    let mut state = IeslState::new(tree, ScoreParams { eps, lambda: opts.lambda }, opts.init)?;
    let mut ws = Workspace::new();
    let mut residuals = Vec::with_capacity(opts.iterations as usize);
    for _ in 0..opts.iterations {
        residuals.push(state.step(tree, &mut ws)?.residual);
    }
    let verdict = detect_convergence(&residuals, &[], opts.window, threshold)?;
    Ok(Probe {
        eps,
        converged: verdict.converged,
        final_nashconv: Some(nashconv(tree, &state.current_policy())?.nashconv),
        iterations_to_threshold: iterations_to_threshold(&residuals, threshold),
    })
}

/// Bisection over `(lo, hi]` with real IESL runs as the predicate.
pub fn tune_eps(tree: &GameTree, lo: f64, hi: f64, precision: f64, opts: &TuneOptions) -> Result<TuneResult> {
    bisect_eps(lo, hi, precision, |eps| iesl_probe(tree, eps, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(eps: f64) -> Result<Probe> {
        let known = [(0.04, true), (0.03, true), (0.025, true), (0.02, false)];
        let hit = known.iter().find(|(e, _)| (e - eps).abs() < 1e-12).expect("unexpected probe");
        Ok(Probe::verdict(eps, hit.1))
    }

    #[test]
    fn recorded_verdicts_select_quarter() {
        let r = bisect_eps(0.02, 0.04, 0.005, table).unwrap();
        let seq: Vec<f64> = r.bisection_probes().iter().map(|p| p.eps).collect();
        assert_eq!(seq.len(), 2);
        assert!((seq[0] - 0.03).abs() < 1e-12 && (seq[1] - 0.025).abs() < 1e-12);
        assert!((r.chosen.unwrap() - 0.025).abs() < 1e-12);
        assert_eq!(r.probe_count, 4);
    }

    #[test]
    fn unit_interval_needs_eight_halvings() {
        assert_eq!(max_bisection_probes(0.0, 1.0, 0.005), 8);
        assert_eq!(max_bisection_probes(0.02, 0.04, 0.005), 2);
        let r = bisect_eps(1e-12, 1.0, 0.005, |e| Ok(Probe::verdict(e, e > 0.3))).unwrap();
        assert_eq!(r.bisection_probes().len(), 8);
        let (a, b) = r.interval;
        assert!(a <= 0.3 && 0.3 < b && b - a <= 0.005);
    }

    #[test]
    fn degenerate_brackets() {
        let all = bisect_eps(0.02, 0.04, 0.005, |e| Ok(Probe::verdict(e, true))).unwrap();
        assert_eq!(all.probe_count, 2);
        assert_eq!(all.chosen, Some(0.02));
        let none = bisect_eps(0.02, 0.04, 0.005, |e| Ok(Probe::verdict(e, false))).unwrap();
        assert_eq!(none.probe_count, 2);
        assert_eq!(none.chosen, None);
        assert!(bisect_eps(0.04, 0.02, 0.005, table).is_err());
        assert!(bisect_eps(0.0, 0.02, 0.005, table).is_err());
    }
}
