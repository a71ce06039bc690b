use crate::error::{Error, Result};
use crate::game::GameTree;

/// Trailing-window verdict on a rest-point residual series.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceVerdict {
    pub converged: bool,
    pub residual_series: Vec<f64>,
    /// L-infinity distance between successive policies.
    pub policy_drift_series: Vec<f64>,
    pub window: usize,
    pub threshold: f64,
    /// Largest residual inside the trailing window.
    pub window_max: f64,
}

/// `1e-3` times the game's payoff spread.
pub fn default_threshold(tree: &GameTree) -> f64 {
    1e-3 * tree.payoff_spread()
}

/// Converged iff every one of the last `window` residuals is `<= threshold`.
///
/// A series shorter than the window is reported as not converged.
pub fn detect_convergence(
    residuals: &[f64],
    drifts: &[f64],
    window: usize,
    threshold: f64,
) -> Result<ConvergenceVerdict> {
    if window == 0 {
        return Err(Error::InvalidParameter("convergence window must be positive".into()));
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be >= 0, got {threshold}")));
    }
    let (converged, window_max) = if residuals.len() < window {
        (false, f64::INFINITY)
    } else {
        let m = residuals[residuals.len() - window..].iter().fold(0.0f64, |a, &r| if r.is_nan() { f64::NAN } else { a.max(r) });
        (m <= threshold, m)
    };
    Ok(ConvergenceVerdict {
        converged,
        residual_series: residuals.to_vec(),
        policy_drift_series: drifts.to_vec(),
        window,
        threshold,
        window_max,
    })
}

/// Number of steps after which the residual stays at or below `threshold`
/// for the rest of the series; `None` if the last residual is above it.
pub fn iterations_to_threshold(residuals: &[f64], threshold: f64) -> Option<usize> {
    let last_bad = residuals.iter().rposition(|&r| !(r <= threshold));
    match last_bad {
        None => Some(0),
        Some(i) if i + 1 == residuals.len() => None,
        Some(i) => Some(i + 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_converges() {
        let v = detect_convergence(&[0.0; 150], &[], 100, 1e-3).unwrap();
        assert!(v.converged);
        assert_eq!(v.window_max, 0.0);
    }

    #[test]
    fn oscillation_does_not_converge() {
        let s: Vec<f64> = (0..300).map(|k| if k % 2 == 0 { 0.1 } else { 0.5 }).collect();
        assert!(!detect_convergence(&s, &[], 100, 0.01).unwrap().converged);
    }

    #[test]
    fn short_series_and_bad_window() {
        assert!(!detect_convergence(&[0.0; 10], &[], 100, 1.0).unwrap().converged);
        assert!(detect_convergence(&[0.0; 10], &[], 0, 1.0).is_err());
        assert!(!detect_convergence(&[f64::NAN; 10], &[], 5, 1.0).unwrap().converged);
    }

    #[test]
    fn threshold_crossing() {
        assert_eq!(iterations_to_threshold(&[5.0, 2.0, 0.5, 0.1], 1.0), Some(2));
        assert_eq!(iterations_to_threshold(&[0.5, 2.0, 0.5], 1.0), Some(2));
        assert_eq!(iterations_to_threshold(&[0.5, 2.0], 1.0), None);
        assert_eq!(iterations_to_threshold(&[0.1], 1.0), Some(0));
    }
}
