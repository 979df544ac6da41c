use super::{assert_nonneg, irreducibility_cut, Orientation, TripletMMatrix};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// `M = L U` from GTH elimination, stored sign-free.
///
/// `mult[(i, k)] = N_ik / d_k` (so `L_ik = -mult`) and `upper[(k, j)] = N_kj`
/// (so `U_kj = -upper`); `pivots` is the diagonal of `U`.
#[derive(Debug, Clone)]
pub struct GthFactors<T = f64> {
    mult: Matrix<T>,
    upper: Matrix<T>,
    pivots: Vec<T>,
}

impl<T: Real> GthFactors<T> {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[T] {
        &self.pivots
    }

    /// Unit lower triangular factor with nonpositive strict lower part.
    pub fn l(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                T::one()
            } else if i > j {
                -self.mult[(i, j)]
            } else {
                T::zero()
            }
        })
    }

    pub fn u(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                self.pivots[i]
            } else if j > i {
                -self.upper[(i, j)]
            } else {
                T::zero()
            }
        })
    }
}

/// Subtraction-free LU of the M-matrix described by `t`, natural order.
pub fn gth_factor<T: Real>(t: &TripletMMatrix<T>) -> Result<GthFactors<T>> {
    t.check_nonsingular_structure()?;
    let n = t.dim();
    let row = t.orientation() == Orientation::Row;
    let mut a = t.offdiag().clone();
    let mut s = t.sums().to_vec();
    let mut mult = Matrix::zeros(n, n);
    let mut upper = Matrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);

    for k in 0..n {
        let mut d = s[k];
        if row {
            for j in k + 1..n {
                d += a[(k, j)];
            }
        } else {
            for i in k + 1..n {
                d += a[(i, k)];
            }
        }
        assert_nonneg(d, "pivot", k);
        if d.is_zero() || !d.is_finite() {
            return Err(Error::SingularPivot { step: k });
        }
        pivots.push(d);
        for j in k + 1..n {
            upper[(k, j)] = a[(k, j)];
        }
        for i in k + 1..n {
            let aik = a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            let f = aik / d;
            mult[(i, k)] = f;
            for j in k + 1..n {
                if j != i {
                    let akj = a[(k, j)];
                    if !akj.is_zero() {
                        a[(i, j)] += f * akj;
                        assert_nonneg(a[(i, j)], "offdiag update", k);
                    }
                }
            }
            if row {
                let sk = s[k];
                s[i] += f * sk;
                assert_nonneg(s[i], "sum update", k);
            }
        }
        if !row && !s[k].is_zero() {
            let sk = s[k];
            for j in k + 1..n {
                let akj = a[(k, j)];
                if !akj.is_zero() {
                    s[j] += akj * sk / d;
                    assert_nonneg(s[j], "sum update", k);
                }
            }
        }
    }
    Ok(GthFactors {
        mult,
        upper,
        pivots,
    })
}

/// Forward then back substitution. With `b ≥ 0` only nonnegative terms are added.
pub fn gth_solve<T: Real>(f: &GthFactors<T>, b: &[T]) -> Result<Vec<T>> {
    let n = f.dim();
    check_dim(n, b.len())?;
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            let m = f.mult[(i, k)];
            if !m.is_zero() {
                s += m * y[k];
            }
        }
        y[i] = s;
    }
    for k in (0..n).rev() {
        let d = f.pivots[k];
        if d.is_zero() {
            return Err(Error::SingularPivot { step: k });
        }
        let mut s = y[k];
        for j in k + 1..n {
            let u = f.upper[(k, j)];
            if !u.is_zero() {
                s += u * y[j];
            }
        }
        y[k] = s / d;
    }
    Ok(y)
}

/// `M⁻¹` column by column; entrywise nonnegative for an M-matrix.
pub fn gth_inverse<T: Real>(f: &GthFactors<T>) -> Result<Matrix<T>> {
    let n = f.dim();
    let mut inv = Matrix::zeros(n, n);
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e[j] = T::one();
        let c = gth_solve(f, &e)?;
        for i in 0..n {
            inv[(i, j)] = c[i];
        }
        e[j] = T::zero();
    }
    Ok(inv)
}

/// Positive `t` spanning the null space of a singular irreducible triplet
/// (`σ = 0`): `tᵀM = 0` for `Row`, `M t = 0` for `Col`. Normalized to `Σ t = 1`.
pub fn null_vector<T: Real>(t: &TripletMMatrix<T>) -> Result<Vec<T>> {
    let (mut v, _) = null_vector_raw(t)?;
    let mut total = T::zero();
    for &x in &v {
        total += x;
    }
    for x in &mut v {
        *x /= total;
    }
    Ok(v)
}

/// Null vector scaled so its last entry is 1, plus the `n - 1` elimination
/// pivots (their product is the leading principal minor of order `n - 1`).
pub(crate) fn null_vector_raw<T: Real>(t: &TripletMMatrix<T>) -> Result<(Vec<T>, Vec<T>)> {
    if t.sums().iter().any(|s| !s.is_zero()) {
        return Err(Error::InvalidInput(
            "null_vector requires all sums to be zero".into(),
        ));
    }
    if let Some(indices) = irreducibility_cut(t.offdiag()) {
        return Err(Error::Reducible { indices });
    }
    let n = t.dim();
    let mut a = match t.orientation() {
        Orientation::Row => t.offdiag().clone(),
        Orientation::Col => t.offdiag().transpose(),
    };
    let mut mult = Matrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(1) {
        let mut d = T::zero();
        for j in k + 1..n {
            d += a[(k, j)];
        }
        assert_nonneg(d, "null-vector pivot", k);
        if d.is_zero() || !d.is_finite() {
            return Err(Error::SingularPivot { step: k });
        }
        pivots.push(d);
        for i in k + 1..n {
            let aik = a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            let f = aik / d;
            mult[(i, k)] = f;
            for j in k + 1..n {
                if j != i {
                    let akj = a[(k, j)];
                    if !akj.is_zero() {
                        a[(i, j)] += f * akj;
                        assert_nonneg(a[(i, j)], "null-vector update", k);
                    }
                }
            }
        }
    }
    let mut v = vec![T::zero(); n];
    if n > 0 {
        v[n - 1] = T::one();
    }
    for k in (0..n.saturating_sub(1)).rev() {
        let mut s = T::zero();
        for i in k + 1..n {
            let m = mult[(i, k)];
            if !m.is_zero() {
                s += v[i] * m;
            }
        }
        v[k] = s;
    }
    Ok((v, pivots))
}
