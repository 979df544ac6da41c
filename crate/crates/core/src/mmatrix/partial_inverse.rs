use super::gth::null_vector_raw;
use super::{gth_factor, gth_inverse, Orientation, TripletMMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::precision::DoubleDouble;

/// `M⁻¹ = 1zᵀ + S`, where `S` stays bounded as the row sums go to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialInverse {
    pub z: Vec<f64>,
    pub s: Matrix<f64>,
}

impl PartialInverse {
    /// The rank-one part `1zᵀ`.
    pub fn r_matrix(&self) -> Matrix<f64> {
        let n = self.z.len();
        Matrix::from_fn(n, n, |_, j| self.z[j])
    }

    pub fn inverse(&self) -> Matrix<f64> {
        let n = self.z.len();
        Matrix::from_fn(n, n, |i, j| self.z[j] + self.s[(i, j)])
    }
}

/// Split `M⁻¹` for a row-oriented irreducible triplet with `w = M1 ≠ 0`.
///
/// `z_l` is the weight of spanning trees of the off-diagonal graph rooted at
/// `l`, divided by `det M`. With `t` the left null vector of `M - diag(w)`
/// scaled to `t_n = 1`, that is `t · Π_{k<n} (d'_k/d_k) / d_n`, where `d'`
/// are its elimination pivots and `d` those of `M`. Everything, including
/// `S = M⁻¹ - 1zᵀ`, is formed in double-double and rounded once.
pub fn partial_inverse(t: &TripletMMatrix<f64>) -> Result<PartialInverse> {
    if t.orientation() != Orientation::Row {
        return Err(Error::InvalidInput(
            "partial_inverse needs row sums (Row orientation)".into(),
        ));
    }
    t.check_irreducible()?;
    if t.sums().iter().all(|&s| s == 0.0) {
        return Err(Error::InvalidInput("w = 0: the matrix is singular".into()));
    }
    let n = t.dim();
    let tx = t.map(DoubleDouble::from);
    let laplacian = tx.with_sums(vec![DoubleDouble::ZERO; n])?;
    let (tv, lap_pivots) = null_vector_raw(&laplacian)?;
    let f = gth_factor(&tx)?;
    let piv = f.pivots();
    let mut scale = DoubleDouble::ONE / piv[n - 1];
    for (dl, dm) in lap_pivots.iter().zip(piv) {
        scale *= *dl / *dm;
    }
    let z: Vec<DoubleDouble> = tv.iter().map(|&v| v * scale).collect();
    let inv = gth_inverse(&f)?;
    let s = Matrix::from_fn(n, n, |i, j| (inv[(i, j)] - z[j]).to_f64());
    Ok(PartialInverse {
        z: z.iter().map(|v| v.to_f64()).collect(),
        s,
    })
}
