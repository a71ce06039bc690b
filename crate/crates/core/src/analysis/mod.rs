//! Diagnostics: hypomonotonicity probing, convergence detection, the
//! bisection temperature tuner and the policy-difference identity check.

mod convergence;
mod hypomono;
mod policy_difference;
mod tune;

pub use convergence::{default_threshold, detect_convergence, iterations_to_threshold, ConvergenceVerdict};
pub use hypomono::{hypomonotonicity_ratio, probe_hypomonotonicity, HypomonotonicityProbe};
pub use policy_difference::{policy_difference_sides, verify_lemma1, PolicyDifferenceReport};
pub use tune::{bisect_eps, max_bisection_probes, tune_eps, Probe, TuneOptions, TuneResult};
