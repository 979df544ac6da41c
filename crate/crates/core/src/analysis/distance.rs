use std::collections::HashMap;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::tensor::Tensor3;

/// `max_i |x̃_i - x_i| / |x_i|` with `0/0 = 0` and `b/0 = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CwDistance {
    pub value: f64,
    /// Index attaining the maximum; `None` when the distance is zero.
    pub argmax: Option<usize>,
}

fn entry(xt: f64, x: f64) -> f64 {
    if x == 0.0 {
        if xt == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (xt - x).abs() / x.abs()
    }
}

fn fold(pairs: impl Iterator<Item = (usize, f64, f64)>) -> Result<CwDistance> {
    let mut best = CwDistance {
        value: 0.0,
        argmax: None,
    };
    for (i, xt, x) in pairs {
        if xt.is_nan() || x.is_nan() {
            return Err(Error::NonFinite(format!("entry {i}")));
        }
        let d = entry(xt, x);
        if d > best.value {
            best = CwDistance {
                value: d,
                argmax: Some(i),
            };
        }
    }
    Ok(best)
}

/// Componentwise distance `d(x̃, x)`; not symmetric.
pub fn cw_distance(x_tilde: &[f64], x: &[f64]) -> Result<CwDistance> {
    check_dim(x.len(), x_tilde.len())?;
    fold(x_tilde.iter().zip(x).enumerate().map(|(i, (&a, &b))| (i, a, b)))
}

/// As [`cw_distance`] over row-major entries.
pub fn cw_distance_matrix(a_tilde: &Matrix, a: &Matrix) -> Result<CwDistance> {
    check_dim(a.rows(), a_tilde.rows())?;
    check_dim(a.cols(), a_tilde.cols())?;
    cw_distance(a_tilde.as_slice(), a.as_slice())
}

/// As [`cw_distance`] over the union of both supports. `argmax` is the flat
/// index `i·n² + j + k·n` into the unfolding.
pub fn cw_distance_tensor(b_tilde: &Tensor3, b: &Tensor3) -> Result<CwDistance> {
    let n = b.dim();
    check_dim(n, b_tilde.dim())?;
    let flat = |i: usize, j: usize, k: usize| i * n * n + j + k * n;
    let mut pairs: HashMap<usize, (f64, f64)> = HashMap::new();
    for (i, j, k, v) in b_tilde.entries() {
        pairs.entry(flat(i, j, k)).or_default().0 = v;
    }
    for (i, j, k, v) in b.entries() {
        pairs.entry(flat(i, j, k)).or_default().1 = v;
    }
    let mut keys: Vec<usize> = pairs.keys().copied().collect();
    keys.sort_unstable();
    fold(keys.into_iter().map(|key| (key, pairs[&key].0, pairs[&key].1)))
}

/// `‖x̃ - x‖₂ / ‖x‖₂`.
pub fn norm_error(x_tilde: &[f64], x: &[f64]) -> Result<f64> {
    check_dim(x.len(), x_tilde.len())?;
    let num = x_tilde
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let den = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    })
}
