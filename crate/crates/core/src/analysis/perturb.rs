use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::distance::{cw_distance, cw_distance_tensor};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::solvers::Problem;
use crate::tensor::Tensor3;

/// How the zero-sum directions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbMode {
    /// `E_ic = P_ic (R_ic - Σ_l P_lc R_lc)`: keeps the zero pattern, so the
    /// realized componentwise distance stays at most `ε`.
    #[default]
    Relative,
    /// `E = R - (1/n)11ᵀR`: fills zeros, so the componentwise distance is
    /// usually infinite.
    Additive,
}

#[derive(Debug, Clone)]
pub struct Perturbed {
    pub problem: Problem,
    /// `max(d(P̃, P), d(ṽ, v))` after clamping and renormalizing.
    pub epsilon_realized: f64,
    /// `‖1ᵀP̃₍₁₎ - 1ᵀP₍₁₎‖∞`.
    pub column_sum_deviation: f64,
    /// `|1ᵀṽ - 1ᵀv|`.
    pub v_sum_deviation: f64,
}

/// `ṽ = v + εe`, `P̃ = P + εE` with `1ᵀe = 0` and `1ᵀE₍₁₎ = 0`, then clamped at
/// zero and renormalized. `α` and `1 - 2α` are kept.
///
/// Draw order from a ChaCha8 stream seeded with `seed`: `r` (n values), then
/// the columns of `R` in unfolding order, n values each, uniform on [0, 1).
pub fn zero_sum_perturb(problem: &Problem, eps: f64, seed: u64, mode: PerturbMode) -> Result<Perturbed> {
    let pr = problem.require_pagerank("zero_sum_perturb")?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("epsilon = {eps} is not in [0, 1)")));
    }
    if eps == 0.0 {
        return Ok(Perturbed {
            problem: problem.clone(),
            epsilon_realized: 0.0,
            column_sum_deviation: 0.0,
            v_sum_deviation: 0.0,
        });
    }
    let n = problem.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let v_new = perturb_column(&pr.v, &r, eps, mode);

    let p = pr.p.unfolding();
    let mut pt = Matrix::zeros(n, n * n);
    let mut col = vec![0.0; n];
    let mut rc = vec![0.0; n];
    for c in 0..n * n {
        for i in 0..n {
            col[i] = p[(i, c)];
            rc[i] = rng.gen::<f64>();
        }
        let out = perturb_column(&col, &rc, eps, mode);
        for i in 0..n {
            pt[(i, c)] = out[i];
        }
    }
    let p_new = Tensor3::from_unfolding(&pt)?;

    let old_sums = pr.p.column_sums();
    let column_sum_deviation = p_new
        .column_sums()
        .iter()
        .zip(&old_sums)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let v_sum_deviation = (v_new.iter().sum::<f64>() - pr.v.iter().sum::<f64>()).abs();
    let epsilon_realized = cw_distance_tensor(&p_new, &pr.p)?
        .value
        .max(cw_distance(&v_new, &pr.v)?.value);
    let problem = Problem::pagerank_with_gap(v_new, p_new, pr.one_minus_two_alpha)?;
    Ok(Perturbed {
        problem,
        epsilon_realized,
        column_sum_deviation,
        v_sum_deviation,
    })
}

/// One stochastic (or zero) column: add `ε` times a zero-sum direction, clamp, renormalize.
fn perturb_column(x: &[f64], r: &[f64], eps: f64, mode: PerturbMode) -> Vec<f64> {
    let n = x.len() as f64;
    let total: f64 = x.iter().sum();
    if total == 0.0 {
        return x.to_vec();
    }
    let e: Vec<f64> = match mode {
        PerturbMode::Relative => {
            let rho: f64 = x.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() / total;
            x.iter().zip(r).map(|(a, b)| a * (b - rho)).collect()
        }
        PerturbMode::Additive => {
            let mean = r.iter().sum::<f64>() / n;
            r.iter().map(|b| b - mean).collect()
        }
    };
    let y: Vec<f64> = x.iter().zip(&e).map(|(a, b)| (a + eps * b).max(0.0)).collect();
    let s: f64 = y.iter().sum();
    y.iter().map(|v| v / s * total).collect()
}
