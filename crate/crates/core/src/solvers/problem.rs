use crate::error::{check_dim, Error, Result};
use crate::precision::DoubleDouble;
use crate::tensor::Tensor3;

/// Tolerance on `1ᵀv = 1`.
pub const V_SUM_TOL: f64 = 1e-14;
/// Tolerance on the unfolding column sums of `P`.
pub const P_SUM_TOL: f64 = 1e-13;

/// `x = a + Bx²`, optionally carrying the PageRank data it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    a: Vec<f64>,
    b: Tensor3,
    pagerank: Option<PageRankData>,
}

/// `a = (1-α)v`, `B = αP` with `v` and the columns of `P` stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankData {
    pub v: Vec<f64>,
    pub p: Tensor3,
    pub alpha: f64,
    /// `1 - 2α`, kept separately so callers can supply it more accurately than
    /// `α` itself allows.
    pub one_minus_two_alpha: DoubleDouble,
}

impl PageRankData {
    /// `|1 - 2α|`, the limit of the GTH sum recurrences.
    pub fn gap(&self) -> DoubleDouble {
        self.one_minus_two_alpha.abs()
    }

    /// `1 - |1 - 2α|`: the starting distance of the recurrences from their limit.
    pub fn initial_gap_excess(&self) -> DoubleDouble {
        DoubleDouble::ONE - self.gap()
    }
}

fn check_vec(name: &str, x: &[f64]) -> Result<()> {
    for (i, &v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("{name}[{i}]")));
        }
        if v < 0.0 {
            return Err(Error::NegativeEntry {
                location: format!("{name}[{i}]"),
                value: v,
            });
        }
    }
    Ok(())
}

impl Problem {
    /// A general equation `x = a + Bx²` with `a, B ≥ 0`.
    pub fn new(a: Vec<f64>, b: Tensor3) -> Result<Self> {
        check_dim(b.dim(), a.len())?;
        check_vec("a", &a)?;
        Ok(Self {
            a,
            b,
            pagerank: None,
        })
    }

    /// `x = (1-α)v + αPx²`.
    pub fn pagerank(v: Vec<f64>, p: Tensor3, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidInput(format!("alpha = {alpha} is not in (0, 1)")));
        }
        let gap = DoubleDouble::ONE - DoubleDouble::from(2.0 * alpha);
        Self::build_pagerank(v, p, alpha, gap)
    }

    /// PageRank with `1 - 2α` given directly; `α` is derived from it.
    pub fn pagerank_with_gap(v: Vec<f64>, p: Tensor3, one_minus_two_alpha: DoubleDouble) -> Result<Self> {
        let g = one_minus_two_alpha.to_f64();
        if !(g > -1.0 && g < 1.0) {
            return Err(Error::InvalidInput(format!(
                "1 - 2*alpha = {g} is not in (-1, 1)"
            )));
        }
        let alpha = ((DoubleDouble::ONE - one_minus_two_alpha) / DoubleDouble::from(2.0)).to_f64();
        Self::build_pagerank(v, p, alpha, one_minus_two_alpha)
    }

    fn build_pagerank(v: Vec<f64>, p: Tensor3, alpha: f64, gap: DoubleDouble) -> Result<Self> {
        check_dim(p.dim(), v.len())?;
        check_vec("v", &v)?;
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > V_SUM_TOL {
            return Err(Error::InvalidInput(format!("1ᵀv = {s:e}, not 1")));
        }
        let rep = p.check_stochastic(1.0, P_SUM_TOL);
        if !rep.passed {
            return Err(Error::InvalidInput(format!(
                "P is not column stochastic: deviation {:e} at column {:?}",
                rep.max_deviation, rep.worst_column
            )));
        }
        let a = v.iter().map(|&vi| (1.0 - alpha) * vi).collect();
        let b = p.scaled(alpha);
        Ok(Self {
            a,
            b,
            pagerank: Some(PageRankData {
                v,
                p,
                alpha,
                one_minus_two_alpha: gap,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &Tensor3 {
        &self.b
    }

    pub fn pagerank_data(&self) -> Option<&PageRankData> {
        self.pagerank.as_ref()
    }

    pub fn is_pagerank(&self) -> bool {
        self.pagerank.is_some()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.pagerank.as_ref().map(|p| p.alpha)
    }

    pub(crate) fn require_pagerank(&self, what: &str) -> Result<&PageRankData> {
        self.pagerank
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("{what} needs a PageRank problem")))
    }
}
