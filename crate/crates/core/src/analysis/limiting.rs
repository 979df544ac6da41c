use serde::Serialize;

use crate::error::{check_dim, Result};
use crate::linalg::inverse;
use crate::solvers::Problem;

/// Unit roundoff of binary64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// `γ̃_m = m·u / (1 - m·u)`, taking the unspecified moderate constant as 1.
pub fn gamma_tilde(m: usize) -> f64 {
    let mu = m as f64 * UNIT_ROUNDOFF;
    mu / (1.0 - mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitingAccuracy {
    /// `‖ |R⁻¹| x* ‖∞`.
    pub abs_inverse_times_x: f64,
    /// `‖R⁻¹‖∞ ‖x*‖∞`.
    pub inverse_norm_times_x: f64,
    /// `‖R‖∞ ‖R⁻¹‖∞`.
    pub cond_inf: f64,
    /// `γ̃_{n²}`.
    pub gamma_tilde: f64,
    /// `γ̃_{n²} ‖ |R⁻¹| x* ‖∞`, an estimate of the attainable error.
    pub predicted_error: f64,
}

/// Predictors of the attainable accuracy of Newton at a solution `x*`, with
/// `R = I - Bx*: - B:x*` inverted by partial-pivoting LU.
pub fn limiting_accuracy_predictors(problem: &Problem, x_star: &[f64]) -> Result<LimitingAccuracy> {
    let n = problem.dim();
    check_dim(n, x_star.len())?;
    let r = problem.b().r_matrix(x_star)?;
    let inv = inverse(&r)?;
    let abs_x = (0..n)
        .map(|i| (0..n).map(|j| inv[(i, j)].abs() * x_star[j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let x_norm = x_star.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let g = gamma_tilde(n * n);
    Ok(LimitingAccuracy {
        abs_inverse_times_x: abs_x,
        inverse_norm_times_x: inv.norm_inf() * x_norm,
        cond_inf: r.norm_inf() * inv.norm_inf(),
        gamma_tilde: g,
        predicted_error: g * abs_x,
    })
}
