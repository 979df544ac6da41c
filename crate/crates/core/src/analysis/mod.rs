//! Error metrics, condition quantities, componentwise perturbation bounds and
//! their empirical validation.

mod bounds;
mod condition;
mod distance;
mod experiment;
mod limiting;
mod perturb;

pub use bounds::{bound_kappa, bound_omega, gamma, BoundReport};
pub use condition::{compute_y, kappa, omega, r_triplet_minimal};
pub use distance::{cw_distance, cw_distance_matrix, cw_distance_tensor, norm_error, CwDistance};
pub use experiment::{perturbation_experiment, trial_seed, PerturbationSummary, TrialRecord};
pub use limiting::{gamma_tilde, limiting_accuracy_predictors, LimitingAccuracy, UNIT_ROUNDOFF};
pub use perturb::{zero_sum_perturb, PerturbMode, Perturbed};
