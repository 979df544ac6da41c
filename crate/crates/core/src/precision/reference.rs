use serde::Serialize;

use super::DoubleDouble;
use crate::error::{Error, Result};
use crate::scalar::norm_inf;
use crate::solvers::{
    newton_core, newton_gth_core, residual_t, Control, GthScalars, Problem, Termination,
};
use crate::tensor::Tensor3;

/// Residual target for the extended-precision iteration.
pub const REFERENCE_TOL: f64 = 1e-28;
pub const REFERENCE_MAXIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReferenceMode {
    /// Minimal solution: Newton from zero (GTH for PageRank problems).
    Minimal,
    /// Stochastic solution: Newton with LU from `v`.
    Stochastic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub mode: ReferenceMode,
    pub x: Vec<DoubleDouble>,
    pub x_f64: Vec<f64>,
    pub iterations: usize,
    /// `‖a + Bx² - x‖∞` evaluated in double-double.
    pub residual: f64,
}

impl ReferenceSolution {
    pub fn decimal_strings(&self, digits: usize) -> Vec<String> {
        self.x.iter().map(|v| v.to_decimal_string(digits)).collect()
    }
}

struct Lifted {
    a: Vec<DoubleDouble>,
    b: Tensor3<DoubleDouble>,
    v: Option<Vec<DoubleDouble>>,
    gth: Option<GthScalars<DoubleDouble>>,
}

/// Lift to double-double. For PageRank data `v` and every nonzero column of
/// `P₍₁₎` are renormalized in double-double, so the lifted problem is exactly
/// stochastic to working precision, and `α` is taken from `1 - 2α`.
fn lift(problem: &Problem) -> Result<Lifted> {
    let dd = DoubleDouble::from;
    let Some(pr) = problem.pagerank_data() else {
        return Ok(Lifted {
            a: problem.a().iter().map(|&v| dd(v)).collect(),
            b: problem.b().map(dd),
            v: None,
            gth: None,
        });
    };
    let n = problem.dim();
    let vs: DoubleDouble = pr.v.iter().map(|&v| dd(v)).sum();
    let v: Vec<DoubleDouble> = pr.v.iter().map(|&x| dd(x) / vs).collect();
    let mut colsum = vec![DoubleDouble::ZERO; n * n];
    for (_, j, k, p) in pr.p.entries() {
        colsum[j + k * n] += dd(p);
    }
    let entries: Vec<_> = pr
        .p
        .entries()
        .map(|(i, j, k, p)| (i, j, k, dd(p) / colsum[j + k * n]))
        .collect();
    let alpha = (DoubleDouble::ONE - pr.one_minus_two_alpha) / dd(2.0);
    let p = Tensor3::from_entries(n, &entries)?;
    Ok(Lifted {
        a: v.iter().map(|&x| (DoubleDouble::ONE - alpha) * x).collect(),
        b: p.map(|x| x * alpha),
        gth: Some(GthScalars::from_dd(pr, |x| x)),
        v: Some(v),
    })
}

/// High-accuracy solution in double-double arithmetic.
pub fn reference_solution(problem: &Problem, mode: ReferenceMode) -> Result<ReferenceSolution> {
    let l = lift(problem)?;
    let ctl = Control {
        tol: REFERENCE_TOL,
        maxit: REFERENCE_MAXIT,
        keep_iterates: false,
    };
    let n = problem.dim();
    let run = match (mode, &l.gth, &l.v) {
        (ReferenceMode::Minimal, Some(g), _) => newton_gth_core(&l.a, &l.b, g, &ctl)?,
        (ReferenceMode::Minimal, None, _) => {
            newton_core(&l.a, &l.b, vec![DoubleDouble::ZERO; n], &ctl)?
        }
        (ReferenceMode::Stochastic, _, Some(v)) => newton_core(&l.a, &l.b, v.clone(), &ctl)?,
        (ReferenceMode::Stochastic, _, None) => {
            return Err(Error::InvalidInput(
                "a stochastic reference needs a PageRank problem".into(),
            ))
        }
    };
    if run.termination != Termination::TolReached {
        return Err(Error::NotConverged(format!(
            "reference iteration ended with {:?} after {} steps",
            run.termination,
            run.rec.iterations()
        )));
    }
    let residual = norm_inf(&residual_t(&l.a, &l.b, &run.x)?);
    Ok(ReferenceSolution {
        mode,
        x_f64: run.x.iter().map(|v| v.to_f64()).collect(),
        iterations: run.rec.iterations(),
        x: run.x,
        residual,
    })
}
