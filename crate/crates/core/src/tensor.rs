//! Sparse nonnegative order-3 tensors stored over the first-mode unfolding.
//!
//! Entry `b[i][j][k]` lives in row `i`, unfolding column `j + k*n` (0-based).

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<T = f64> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticityReport {
    pub target: f64,
    pub max_deviation: f64,
    /// `(j, k)` of the column with the largest deviation, 0-based.
    pub worst_column: Option<(usize, usize)>,
    pub passed: bool,
}

fn check_value<T: Real>(i: usize, j: usize, k: usize, v: T) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("({}, {}, {})", i + 1, j + 1, k + 1)));
    }
    if v < T::zero() {
        return Err(Error::NegativeEntry {
            location: format!("({}, {}, {})", i + 1, j + 1, k + 1),
            value: v.to_f64(),
        });
    }
    Ok(())
}

impl<T: Real> Tensor3<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            row_ptr: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Build from 0-based `(i, j, k, value)` entries in any order.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, T)]) -> Result<Self> {
        let mut keyed: Vec<(usize, usize, T)> = Vec::with_capacity(entries.len());
        for &(i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::IndexOutOfRange {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    n,
                });
            }
            check_value(i, j, k, v)?;
            keyed.push((i, j + k * n, v));
        }
        keyed.sort_by_key(|&(i, c, _)| (i, c));
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                let c = w[0].1;
                return Err(Error::DuplicateEntry {
                    i: w[0].0 + 1,
                    j: c % n + 1,
                    k: c / n + 1,
                });
            }
        }
        let mut row_ptr = vec![0; n + 1];
        for &(i, _, _) in &keyed {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n,
            row_ptr,
            cols: keyed.iter().map(|e| e.1).collect(),
            vals: keyed.iter().map(|e| e.2).collect(),
        })
    }

    /// Build from the dense `n × n²` first-mode unfolding; zeros are dropped.
    pub fn from_unfolding(u: &Matrix<T>) -> Result<Self> {
        let n = u.rows();
        check_dim(n * n, u.cols())?;
        let mut entries = Vec::new();
        for i in 0..n {
            for c in 0..n * n {
                let v = u[(i, c)];
                if !v.is_zero() {
                    entries.push((i, c % n, c / n, v));
                }
            }
        }
        Self::from_entries(n, &entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Entries as 0-based `(i, j, k, value)` in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, T)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| {
                let c = self.cols[p];
                (i, c % n, c / n, self.vals[p])
            })
        })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        let c = j + k * self.n;
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&c) {
            Ok(p) => self.vals[self.row_ptr[i] + p],
            Err(_) => T::zero(),
        }
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> Tensor3<U> {
        Tensor3 {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Every value multiplied by `s` (e.g. `αP`).
    pub fn scaled(&self, s: T) -> Self {
        self.map(|v| s * v)
    }

    pub fn unfolding(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n, self.n * self.n);
        for (i, j, k, v) in self.entries() {
            m[(i, j + k * self.n)] = v;
        }
        m
    }

    /// Sums of the `n²` unfolding columns, indexed by `j + k*n`.
    pub fn column_sums(&self) -> Vec<T> {
        let mut s = vec![T::zero(); self.n * self.n];
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s[self.cols[p]] += self.vals[p];
            }
        }
        s
    }

    /// `(Bx²)_i = Σ b_ijk x_j x_k`.
    pub fn apply_quadratic(&self, x: &[T]) -> Result<Vec<T>> {
        self.apply_bilinear(x, x)
    }

    /// `(Bxy)_i = Σ b_ijk x_j y_k`, each term evaluated as `(b·x_j)·y_k`.
    pub fn apply_bilinear(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        check_dim(self.n, x.len())?;
        check_dim(self.n, y.len())?;
        let n = self.n;
        let mut out = vec![T::zero(); n];
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = T::zero();
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let c = self.cols[p];
                s += self.vals[p] * x[c % n] * y[c / n];
            }
            *o = s;
        }
        Ok(out)
    }

    /// `(Bx:)_ij = Σ_k b_ikj x_k`, so that `(Bx:) y = Bxy`.
    pub fn contract_left(&self, x: &[T]) -> Result<Matrix<T>> {
        check_dim(self.n, x.len())?;
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, j, k, v) in self.entries() {
            m[(i, k)] += v * x[j];
        }
        Ok(m)
    }

    /// `(B:x)_ij = Σ_k b_ijk x_k`, so that `(B:x) y = Byx`.
    pub fn contract_right(&self, x: &[T]) -> Result<Matrix<T>> {
        check_dim(self.n, x.len())?;
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, j, k, v) in self.entries() {
            m[(i, j)] += v * x[k];
        }
        Ok(m)
    }

    /// `Bx: + B:x` accumulated in one pass.
    pub fn contract_sum(&self, x: &[T]) -> Result<Matrix<T>> {
        check_dim(self.n, x.len())?;
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, j, k, v) in self.entries() {
            m[(i, k)] += v * x[j];
            m[(i, j)] += v * x[k];
        }
        Ok(m)
    }

    /// `R_x = I - Bx: - B:x` as a dense matrix (with subtractions; for the baseline solvers).
    pub fn r_matrix(&self, x: &[T]) -> Result<Matrix<T>> {
        let c = self.contract_sum(x)?;
        Ok(Matrix::from_fn(self.n, self.n, |i, j| {
            let id = if i == j { T::one() } else { T::zero() };
            id - c[(i, j)]
        }))
    }

    /// Compare every unfolding column sum against `target`.
    pub fn check_stochastic(&self, target: f64, tol: f64) -> StochasticityReport {
        let sums = self.column_sums();
        let mut max_deviation = 0.0;
        let mut worst_column = None;
        for (c, s) in sums.iter().enumerate() {
            let dev = (s.to_f64() - target).abs();
            if dev > max_deviation || (dev.is_nan() && !max_deviation.is_nan()) {
                max_deviation = dev;
                worst_column = Some((c % self.n, c / self.n));
            }
        }
        StochasticityReport {
            target,
            max_deviation,
            worst_column,
            passed: max_deviation <= tol,
        }
    }
}

impl Tensor3<f64> {
    /// Parse the text format: header `n nnz`, then `i j k value` lines (1-based).
    /// Blank lines and lines starting with `#` or `%` are skipped.
    pub fn parse_text(src: &str) -> Result<Self> {
        let mut lines = src
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 2 {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n nnz`".into(),
            });
        }
        let parse_usize = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a nonnegative integer, got {s:?}"),
            })
        };
        let n = parse_usize(h[0], hline)?;
        let nnz = parse_usize(h[1], hline)?;
        if n == 0 {
            return Err(Error::Parse {
                line: hline,
                msg: "dimension must be positive".into(),
            });
        }
        let mut entries = Vec::with_capacity(nnz);
        for (line, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse {
                    line,
                    msg: "expected `i j k value`".into(),
                });
            }
            let mut idx = [0usize; 3];
            for (d, s) in idx.iter_mut().zip(&f[..3]) {
                *d = parse_usize(s, line)?;
                if *d == 0 || *d > n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("index {d} outside 1..={n}"),
                    });
                }
            }
            let v: f64 = f[3].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad value {:?}", f[3]),
            })?;
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("value {v} is not a finite nonnegative number"),
                });
            }
            entries.push((idx[0] - 1, idx[1] - 1, idx[2] - 1, v));
        }
        if entries.len() != nnz {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {nnz} entries, found {}", entries.len()),
            });
        }
        Self::from_entries(n, &entries).map_err(|e| match e {
            Error::DuplicateEntry { .. } => Error::Parse {
                line: 0,
                msg: e.to_string(),
            },
            other => other,
        })
    }

    /// Text format with shortest round-trip values.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(32 * self.nnz() + 16);
        let _ = writeln!(s, "{} {}", self.n, self.nnz());
        for (i, j, k, v) in self.entries() {
            let _ = writeln!(s, "{} {} {} {:.16e}", i + 1, j + 1, k + 1, v);
        }
        s
    }
}
