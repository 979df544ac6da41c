//! M-matrices in triplet form, GTH elimination, and the rank-one-plus-bounded
//! split of the inverse.

mod bound;
mod gth;
mod partial_inverse;
mod tree;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

pub use crate::linalg::plain_lu_solve;
pub use bound::{inverse_cw_bound_check, InverseBoundReport};
pub use gth::{gth_factor, gth_inverse, gth_solve, null_vector, GthFactors};
pub use partial_inverse::{partial_inverse, PartialInverse};
pub use tree::{
    adj_expansion, det_expansion, tree_oracle_adj, tree_oracle_det, tree_oracle_rs, Monomial,
    TreeWeights, MAX_TREE_N,
};

/// Which sums the triplet carries: `M·1 = σ` (`Row`) or `1ᵀM = σᵀ` (`Col`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Row,
    Col,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Row => Orientation::Col,
            Orientation::Col => Orientation::Row,
        }
    }
}

/// `M` stored as off-diagonal magnitudes `N = -offdiag(M) ≥ 0` and sums `σ ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripletMMatrix<T = f64> {
    offdiag: Matrix<T>,
    sums: Vec<T>,
    orientation: Orientation,
}

impl<T: Real> TripletMMatrix<T> {
    pub fn new(offdiag: Matrix<T>, sums: Vec<T>, orientation: Orientation) -> Result<Self> {
        if !offdiag.is_square() {
            return Err(Error::DimensionMismatch {
                expected: offdiag.rows(),
                got: offdiag.cols(),
            });
        }
        let n = offdiag.rows();
        check_dim(n, sums.len())?;
        for i in 0..n {
            for j in 0..n {
                let v = offdiag[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("offdiag ({i}, {j})")));
                }
                if i == j && !v.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "offdiag has nonzero diagonal entry at {i}"
                    )));
                }
                if v < T::zero() {
                    return Err(Error::NegativeEntry {
                        location: format!("offdiag ({i}, {j})"),
                        value: v.to_f64(),
                    });
                }
            }
        }
        for (i, &s) in sums.iter().enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFinite(format!("sums[{i}]")));
            }
            if s < T::zero() {
                return Err(Error::NegativeEntry {
                    location: format!("sums[{i}]"),
                    value: s.to_f64(),
                });
            }
        }
        Ok(Self {
            offdiag,
            sums,
            orientation,
        })
    }

    pub fn dim(&self) -> usize {
        self.sums.len()
    }

    pub fn offdiag(&self) -> &Matrix<T> {
        &self.offdiag
    }

    pub fn sums(&self) -> &[T] {
        &self.sums
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The same matrix's transpose: offdiag transposed, orientation flipped.
    pub fn transpose(&self) -> Self {
        Self {
            offdiag: self.offdiag.transpose(),
            sums: self.sums.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    pub fn with_sums(&self, sums: Vec<T>) -> Result<Self> {
        Self::new(self.offdiag.clone(), sums, self.orientation)
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> TripletMMatrix<U> {
        TripletMMatrix {
            offdiag: self.offdiag.map(&f),
            sums: self.sums.iter().map(|&s| f(s)).collect(),
            orientation: self.orientation,
        }
    }

    /// Diagonal entries, each formed by additions only.
    pub fn diagonal(&self) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut d = self.sums[i];
                for j in 0..n {
                    if j != i {
                        d += match self.orientation {
                            Orientation::Row => self.offdiag[(i, j)],
                            Orientation::Col => self.offdiag[(j, i)],
                        };
                    }
                }
                d
            })
            .collect()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let d = self.diagonal();
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                d[i]
            } else {
                -self.offdiag[(i, j)]
            }
        })
    }

    /// Edges `i → j` along which row-oriented elimination can pass mass.
    fn row_edge(&self, i: usize, j: usize) -> bool {
        match self.orientation {
            Orientation::Row => self.offdiag[(i, j)] > T::zero(),
            Orientation::Col => self.offdiag[(j, i)] > T::zero(),
        }
    }

    /// Every index must reach some positive sum along the orientation's edges.
    /// This is the structural condition for nonsingularity.
    pub fn check_nonsingular_structure(&self) -> Result<()> {
        let n = self.dim();
        let mut ok: Vec<bool> = self.sums.iter().map(|&s| s > T::zero()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| ok[i]).collect();
        while let Some(j) = stack.pop() {
            for i in 0..n {
                if !ok[i] && i != j && self.row_edge(i, j) {
                    ok[i] = true;
                    stack.push(i);
                }
            }
        }
        let cut: Vec<usize> = (0..n).filter(|&i| !ok[i]).collect();
        if cut.is_empty() {
            Ok(())
        } else {
            Err(Error::Reducible { indices: cut })
        }
    }

    /// Strong connectivity of the off-diagonal pattern.
    pub fn check_irreducible(&self) -> Result<()> {
        irreducibility_cut(&self.offdiag).map_or(Ok(()), |indices| Err(Error::Reducible { indices }))
    }
}

/// Indices not in the strongly connected component of node 0, if any.
pub(crate) fn irreducibility_cut<T: Real>(a: &Matrix<T>) -> Option<Vec<usize>> {
    let n = a.rows();
    if n <= 1 {
        return None;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let e = if forward { a[(u, v)] } else { a[(v, u)] };
                if !seen[v] && v != u && e > T::zero() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    let f = reach(true);
    let b = reach(false);
    let cut: Vec<usize> = (0..n).filter(|&i| !(f[i] && b[i])).collect();
    if cut.is_empty() {
        None
    } else {
        Some(cut)
    }
}

static CHECKS: AtomicUsize = AtomicUsize::new(0);

/// Whether elimination asserts that every intermediate quantity is nonnegative.
///
/// Controlled by `GTH_ASSERT_NONNEG` (`1` on, `0` off); unset means on in
/// debug builds only. Read once per process.
pub fn nonneg_assertions_enabled() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| match std::env::var("GTH_ASSERT_NONNEG").as_deref() {
        Ok("1") => true,
        Ok("0") => false,
        _ => cfg!(debug_assertions),
    })
}

/// Number of nonnegativity assertions evaluated so far in this process.
pub fn nonneg_checks_performed() -> usize {
    CHECKS.load(Ordering::Relaxed)
}

#[inline]
pub(crate) fn assert_nonneg<T: Real>(v: T, what: &str, step: usize) {
    if nonneg_assertions_enabled() {
        CHECKS.fetch_add(1, Ordering::Relaxed);
        assert!(
            v >= T::zero(),
            "GTH_ASSERT_NONNEG: {what} at step {step} is negative ({v:?})"
        );
    }
}
