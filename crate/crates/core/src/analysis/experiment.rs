use serde::Serialize;

use super::bounds::{bound_kappa, bound_omega};
use super::condition::{compute_y, kappa, omega};
use super::distance::cw_distance;
use super::perturb::{zero_sum_perturb, PerturbMode};
use crate::error::Result;
use crate::precision::{reference_solution, ReferenceMode};
use crate::solvers::Problem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub epsilon: f64,
    pub epsilon_realized: f64,
    pub d_cw_observed: f64,
    pub bound_omega: Option<f64>,
    pub bound_kappa: Option<f64>,
    pub omega_applicable: bool,
    pub kappa_applicable: bool,
}

impl TrialRecord {
    /// Observed distance over the ω-bound, when the bound applies.
    pub fn ratio_omega(&self) -> Option<f64> {
        self.bound_omega.map(|b| self.d_cw_observed / b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationSummary {
    pub kappa: f64,
    pub omega: f64,
    pub trials: usize,
    pub max_ratio_omega: Option<f64>,
    pub max_ratio_kappa: Option<f64>,
    pub omega_always_applicable: bool,
    pub all_within_omega: bool,
    pub records: Vec<TrialRecord>,
}

/// Trial seed for `(epsilon index, trial)`; fixed so runs are reproducible.
pub fn trial_seed(seed: u64, eps_index: usize, trial: usize, trials: usize) -> u64 {
    seed.wrapping_add((eps_index * trials + trial) as u64)
}

/// Perturb a PageRank problem `trials` times per `ε`, compare the perturbed
/// minimal solution with the unperturbed one, and evaluate both bounds at the
/// realized `ε`. Minimal solutions come from the extended-precision reference.
pub fn perturbation_experiment(
    problem: &Problem,
    epsilons: &[f64],
    trials: usize,
    seed: u64,
    mode: PerturbMode,
) -> Result<PerturbationSummary> {
    let pr = problem.require_pagerank("perturbation_experiment")?;
    let spectral_ok = pr.gap().to_f64() > 0.0;
    let n = problem.dim();
    let m = reference_solution(problem, ReferenceMode::Minimal)?.x_f64;
    let y = compute_y(problem, &m)?;
    let k = kappa(&m, &y)?;
    let w = omega(problem, &m)?;
    let mut records = Vec::with_capacity(epsilons.len() * trials);
    for (ei, &eps) in epsilons.iter().enumerate() {
        for t in 0..trials {
            let q = zero_sum_perturb(problem, eps, trial_seed(seed, ei, t, trials), mode)?;
            let d = if q.epsilon_realized == 0.0 {
                0.0
            } else {
                let mt = reference_solution(&q.problem, ReferenceMode::Minimal)?.x_f64;
                cw_distance(&mt, &m)?.value
            };
            let (bo, bk) = if q.epsilon_realized < 1.0 {
                (
                    Some(bound_omega(q.epsilon_realized, w, n)?.with_spectral_condition(spectral_ok)),
                    Some(bound_kappa(q.epsilon_realized, k, n)?.with_spectral_condition(spectral_ok)),
                )
            } else {
                (None, None)
            };
            records.push(TrialRecord {
                trial: t,
                epsilon: eps,
                epsilon_realized: q.epsilon_realized,
                d_cw_observed: d,
                bound_omega: bo.as_ref().and_then(|b| b.bound),
                bound_kappa: bk.as_ref().and_then(|b| b.bound),
                omega_applicable: bo.is_some_and(|b| b.applicable),
                kappa_applicable: bk.is_some_and(|b| b.applicable),
            });
        }
    }
    let ratio = |f: fn(&TrialRecord) -> Option<f64>| -> Option<f64> {
        records.iter().filter_map(f).fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        })
    };
    let max_ratio_omega = ratio(|r| r.ratio_omega());
    let max_ratio_kappa = ratio(|r| r.bound_kappa.map(|b| r.d_cw_observed / b));
    let omega_always_applicable = records.iter().all(|r| r.omega_applicable);
    let all_within_omega = records
        .iter()
        .all(|r| r.bound_omega.is_some_and(|b| r.d_cw_observed <= b));
    Ok(PerturbationSummary {
        kappa: k,
        omega: w,
        trials: records.len(),
        max_ratio_omega,
        max_ratio_kappa,
        omega_always_applicable,
        all_within_omega,
        records,
    })
}
