use crate::error::{check_dim, Error, Result};
use crate::linalg::plain_lu_solve;
use crate::mmatrix::{gth_factor, gth_solve, partial_inverse, Orientation, TripletMMatrix};
use crate::solvers::{offdiag_contraction, Problem};

/// Column triplet of `R_m` for the minimal PageRank solution `m`: the column
/// sums `1 - 2α1ᵀm` equal `|1-2α|` exactly and are taken from the problem
/// rather than from `m`.
pub fn r_triplet_minimal(problem: &Problem, m: &[f64]) -> Result<TripletMMatrix> {
    check_dim(problem.dim(), m.len())?;
    let pr = problem.require_pagerank("r_triplet_minimal")?;
    let w = pr.gap().to_f64();
    let c = offdiag_contraction(problem.b(), m)?;
    TripletMMatrix::new(c, vec![w; problem.dim()], Orientation::Col)
}

/// `y = R_m⁻¹a`. Uses GTH when `R_m` has a triplet with nonnegative column
/// sums, partial-pivoting LU otherwise. Checks `y ≥ m` and that both share a
/// zero pattern.
pub fn compute_y(problem: &Problem, m: &[f64]) -> Result<Vec<f64>> {
    let n = problem.dim();
    check_dim(n, m.len())?;
    let a = problem.a();
    let y = if problem.is_pagerank() {
        gth_solve(&gth_factor(&r_triplet_minimal(problem, m)?)?, a)?
    } else {
        let full = problem.b().contract_sum(m)?;
        let sums: Vec<f64> = (0..n)
            .map(|j| 1.0 - (0..n).map(|i| full[(i, j)]).sum::<f64>())
            .collect();
        if sums.iter().all(|&s| s >= 0.0) {
            let c = offdiag_contraction(problem.b(), m)?;
            gth_solve(&gth_factor(&TripletMMatrix::new(c, sums, Orientation::Col)?)?, a)?
        } else {
            plain_lu_solve(&problem.b().r_matrix(m)?, a)?
        }
    };
    for i in 0..n {
        if (m[i] == 0.0) != (y[i] == 0.0) {
            return Err(Error::InvalidInput(format!(
                "y and m have different zero patterns at index {i}"
            )));
        }
        if y[i] < m[i] - 1e-14 * m[i].abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "y[{i}] = {:e} < m[{i}] = {:e}",
                y[i], m[i]
            )));
        }
    }
    Ok(y)
}

fn max_ratio(num: &[f64], m: &[f64], what: &str) -> Result<f64> {
    check_dim(m.len(), num.len())?;
    let mut best: Option<f64> = None;
    for (i, (&v, &mi)) in num.iter().zip(m).enumerate() {
        if mi == 0.0 {
            if v != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{what}: zero pattern differs at index {i}"
                )));
            }
            continue;
        }
        let r = v / mi;
        best = Some(best.map_or(r, |b: f64| b.max(r)));
    }
    best.ok_or_else(|| Error::InvalidInput(format!("{what}: m is zero")))
}

/// `κ = max_{m_i≠0} y_i / m_i`.
pub fn kappa(m: &[f64], y: &[f64]) -> Result<f64> {
    max_ratio(y, m, "kappa")
}

/// `ω = max_{m_i≠0} (Sᵀm)_i / m_i` with `S` the bounded part of `(R_mᵀ)⁻¹`.
pub fn omega(problem: &Problem, m: &[f64]) -> Result<f64> {
    let t = r_triplet_minimal(problem, m)?;
    let rt = TripletMMatrix::new(t.offdiag().transpose(), t.sums().to_vec(), Orientation::Row)?;
    let pi = partial_inverse(&rt)?;
    max_ratio(&pi.s.vec_mat(m), m, "omega")
}
