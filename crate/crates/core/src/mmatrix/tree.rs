//! Brute-force spanning-forest sums for determinants, adjugates and the
//! rank-one/bounded split. Exponential; meant as an oracle for tiny `n`.
//!
//! Nodes are `0..=n`, node 0 the root. Edge `(i, j)` means `i`'s parent is
//! `j`, weight `w_ij`; for a row triplet `w_ij = N_ij` and `w_i0 = σ_i`.

use super::{Orientation, PartialInverse, TripletMMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const MAX_TREE_N: usize = 6;

/// A product of edge weights, as sorted `(child, parent)` pairs (1-based nodes).
pub type Monomial = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeWeights {
    n: usize,
    /// `n × (n+1)`: row `i-1`, column `j` holds `w_ij`.
    w: Matrix<f64>,
}

impl TreeWeights {
    pub fn new(w: Matrix<f64>) -> Result<Self> {
        let n = w.rows();
        if w.cols() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: w.cols(),
            });
        }
        if let Some(v) = w.as_slice().iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::NegativeEntry {
                location: "tree weights".into(),
                value: *v,
            });
        }
        Ok(Self { n, w })
    }

    pub fn from_triplet(t: &TripletMMatrix<f64>) -> Result<Self> {
        let t = match t.orientation() {
            Orientation::Row => t.clone(),
            Orientation::Col => t.transpose(),
        };
        let n = t.dim();
        let w = Matrix::from_fn(n, n + 1, |i, j| {
            if j == 0 {
                t.sums()[i]
            } else if j - 1 == i {
                0.0
            } else {
                t.offdiag()[(i, j - 1)]
            }
        });
        Self::new(w)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `w_ij` for child `i ∈ 1..=n`, parent `j ∈ 0..=n`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.w[(i - 1, j)]
        }
    }

    /// `M` with `M_ij = -w_ij` off the diagonal and row sums `w_i0`.
    pub fn m_matrix(&self) -> Matrix<f64> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                (0..=n).filter(|&p| p != i + 1).map(|p| self.weight(i + 1, p)).sum()
            } else {
                -self.weight(i + 1, j + 1)
            }
        })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_TREE_N {
        Err(Error::TooLarge {
            n,
            max: MAX_TREE_N,
        })
    } else {
        Ok(())
    }
}

/// Calls `f(parent)` for every forest on nodes `1..=n` in which every node
/// reaches node 0 or `root` (node `root` itself has no parent). `parent[i]`
/// is `usize::MAX` for roots. Enumeration order is fixed.
fn for_each_forest(n: usize, root: Option<usize>, mut f: impl FnMut(&[usize])) {
    let none = usize::MAX;
    let mut parent = vec![none; n + 1];
    let free: Vec<usize> = (1..=n).filter(|&i| Some(i) != root).collect();
    let choices: Vec<Vec<usize>> = free
        .iter()
        .map(|&i| (0..=n).filter(|&p| p != i).collect())
        .collect();
    let mut idx = vec![0usize; free.len()];
    loop {
        for (slot, &i) in free.iter().enumerate() {
            parent[i] = choices[slot][idx[slot]];
        }
        if is_forest(&parent, n) {
            f(&parent);
        }
        let mut s = 0;
        loop {
            if s == free.len() {
                return;
            }
            idx[s] += 1;
            if idx[s] < choices[s].len() {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
    }
}

fn is_forest(parent: &[usize], n: usize) -> bool {
    (1..=n).all(|i| root_of(parent, i, n).is_some())
}

/// Follow parents from `i`; `None` on a cycle.
fn root_of(parent: &[usize], mut i: usize, n: usize) -> Option<usize> {
    for _ in 0..=n {
        if i == 0 || parent[i] == usize::MAX {
            return Some(i);
        }
        i = parent[i];
    }
    None
}

fn product(w: &TreeWeights, parent: &[usize]) -> f64 {
    let mut p = 1.0;
    for i in 1..=w.n {
        if parent[i] != usize::MAX {
            p *= w.weight(i, parent[i]);
        }
    }
    p
}

fn monomial(parent: &[usize], n: usize) -> Monomial {
    (1..=n)
        .filter(|&i| parent[i] != usize::MAX)
        .map(|i| (i, parent[i]))
        .collect()
}

/// `det M` as the sum over spanning trees directed toward node 0.
pub fn tree_oracle_det(w: &TreeWeights) -> Result<f64> {
    check_size(w.n)?;
    let mut s = 0.0;
    for_each_forest(w.n, None, |p| s += product(w, p));
    Ok(s)
}

/// `(adj M)_kl` as the sum over two-tree forests rooted at 0 and `l` with `k`
/// in the tree of `l`.
pub fn tree_oracle_adj(w: &TreeWeights) -> Result<Matrix<f64>> {
    check_size(w.n)?;
    let n = w.n;
    let mut adj = Matrix::zeros(n, n);
    for l in 1..=n {
        for_each_forest(n, Some(l), |p| {
            let v = product(w, p);
            for k in 1..=n {
                if root_of(p, k, n) == Some(l) {
                    adj[(k - 1, l - 1)] += v;
                }
            }
        });
    }
    Ok(adj)
}

/// `M⁻¹ = 1zᵀ + S`, splitting each adjugate family by whether node 0 is isolated.
pub fn tree_oracle_rs(w: &TreeWeights) -> Result<PartialInverse> {
    let det = tree_oracle_det(w)?;
    let n = w.n;
    let mut rnum = vec![0.0; n];
    let mut snum: Matrix<f64> = Matrix::zeros(n, n);
    for l in 1..=n {
        for_each_forest(n, Some(l), |p| {
            let v = product(w, p);
            if (1..=n).all(|i| p[i] != 0) {
                rnum[l - 1] += v;
            } else {
                for k in 1..=n {
                    if root_of(p, k, n) == Some(l) {
                        snum[(k - 1, l - 1)] += v;
                    }
                }
            }
        });
    }
    Ok(PartialInverse {
        z: rnum.iter().map(|r| r / det).collect(),
        s: snum.map(|v| v / det),
    })
}

/// Symbolic terms of `det M` on the complete graph with `n` nodes.
pub fn det_expansion(n: usize) -> Result<Vec<Monomial>> {
    check_size(n)?;
    let mut out = Vec::new();
    for_each_forest(n, None, |p| out.push(monomial(p, n)));
    Ok(out)
}

/// Symbolic terms of `(adj M)_kl` (1-based `k`, `l`).
pub fn adj_expansion(n: usize, k: usize, l: usize) -> Result<Vec<Monomial>> {
    check_size(n)?;
    if k == 0 || l == 0 || k > n || l > n {
        return Err(Error::InvalidInput(format!("({k}, {l}) outside 1..={n}")));
    }
    let mut out = Vec::new();
    for_each_forest(n, Some(l), |p| {
        if root_of(p, k, n) == Some(l) {
            out.push(monomial(p, n));
        }
    });
    Ok(out)
}
