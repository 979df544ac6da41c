//! Iterations for `x = a + Bx²`: fixed point, Newton with partial-pivoting LU,
//! Newton-GTH, block Jacobi with GTH blocks, and the block Jacobi-GTH variant.

mod fixed_point;
mod jacobi;
mod newton;
mod problem;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{cw_distance, norm_error};
use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::precision::DoubleDouble;
use crate::scalar::{norm_inf, Real};
use crate::tensor::Tensor3;

pub(crate) use fixed_point::fixed_point_core;
pub(crate) use jacobi::{block_jacobi_core, bjgv_core};
pub(crate) use newton::{newton_core, newton_gth_core};
pub use problem::{PageRankData, Problem, P_SUM_TOL, V_SUM_TOL};

/// Iterates with `‖x‖∞` above this are reported as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FixedPoint,
    Newton,
    NewtonGth,
    BlockJacobi,
    BlockJacobiGthVariant,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::FixedPoint,
        Method::Newton,
        Method::NewtonGth,
        Method::BlockJacobi,
        Method::BlockJacobiGthVariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::FixedPoint => "fixed-point",
            Method::Newton => "newton",
            Method::NewtonGth => "newton-gth",
            Method::BlockJacobi => "block-jacobi",
            Method::BlockJacobiGthVariant => "block-jacobi-gth-variant",
        }
    }

    /// Methods built on GTH elimination; they need a PageRank problem and a zero start.
    pub fn uses_gth(self) -> bool {
        matches!(
            self,
            Method::NewtonGth | Method::BlockJacobi | Method::BlockJacobiGthVariant
        )
    }

    pub fn is_block(self) -> bool {
        matches!(self, Method::BlockJacobi | Method::BlockJacobiGthVariant)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "bjgv" => return Ok(Method::BlockJacobiGthVariant),
            "fp" => return Ok(Method::FixedPoint),
            _ => {}
        }
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Zero,
    V,
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub method: Method,
    /// Threshold on `‖r‖∞`.
    pub tol: f64,
    pub maxit: usize,
    /// Partition of `0..n` for the Jacobi methods; `None` means blocks of two.
    pub block_sizes: Option<Vec<usize>>,
    pub start: Start,
    pub record_history: bool,
    /// When set, `e_cw` and `e_norm` are recorded for every iterate.
    pub reference: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: Method::NewtonGth,
            tol: 1e-15,
            maxit: 500,
            block_sizes: None,
            start: Start::Zero,
            record_history: false,
            reference: None,
        }
    }
}

impl SolverOptions {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    TolReached,
    Maxit,
    SingularPivot,
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorHistory {
    pub e_cw: Vec<f64>,
    pub e_norm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖r_k‖∞` for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub iterate_history: Option<Vec<Vec<f64>>>,
    /// `z_k` for Newton-GTH and the variant, `u_k` for block Jacobi; empty otherwise.
    pub z_history: Vec<f64>,
    pub termination: Termination,
    /// Steps in which some component decreased.
    pub decrease_steps: usize,
    pub error_history: Option<ErrorHistory>,
    /// Iterates exceeding the reference in some component (relative slack 1e-14).
    pub overshoot_steps: Option<usize>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }
}

/// `a + Bx² - x`.
pub fn residual(problem: &Problem, x: &[f64]) -> Result<Vec<f64>> {
    residual_t(problem.a(), problem.b(), x)
}

pub(crate) fn residual_t<T: Real>(a: &[T], b: &Tensor3<T>, x: &[T]) -> Result<Vec<T>> {
    check_dim(a.len(), x.len())?;
    let bx = b.apply_quadratic(x)?;
    Ok(a.iter()
        .zip(&bx)
        .zip(x)
        .map(|((&ai, &bi), &xi)| (ai + bi) - xi)
        .collect())
}

/// Iteration limits shared by the cores.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Control {
    pub tol: f64,
    pub maxit: usize,
    pub keep_iterates: bool,
}

/// `|1-2α|`, `(1-2α)²`, `1 - |1-2α|` and `2α` in the working precision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GthScalars<T> {
    pub w2: T,
    pub e0: T,
    pub two_alpha: T,
}

impl<T: Real> GthScalars<T> {
    pub fn from_dd(pr: &PageRankData, conv: impl Fn(DoubleDouble) -> T) -> Self {
        let w = pr.gap();
        Self {
            w2: conv(w * w),
            e0: conv(pr.initial_gap_excess()),
            two_alpha: conv(DoubleDouble::ONE - pr.one_minus_two_alpha),
        }
    }

    /// The sum recurrences track `e = z - |1-2α|` without cancellation;
    /// `e / 2α` bounds `1ᵀ(m - x)`.
    pub fn gap_small(&self, e: T, tol: f64) -> bool {
        (e / self.two_alpha).to_f64() <= tol
    }
}

/// Per-iteration bookkeeping.
#[derive(Debug, Clone, Default)]
pub(crate) struct Recorder {
    keep: bool,
    pub residuals: Vec<f64>,
    pub iterates: Vec<Vec<f64>>,
    pub z: Vec<f64>,
    pub decreases: usize,
}

impl Recorder {
    pub fn new<T: Real>(keep: bool, x0: &[T], r0: f64) -> Self {
        let mut rec = Self {
            keep,
            ..Self::default()
        };
        rec.residuals.push(r0);
        if keep {
            rec.iterates.push(x0.iter().map(|v| v.to_f64()).collect());
        }
        rec
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len() - 1
    }

    pub fn step<T: Real>(&mut self, x_old: &[T], x_new: &[T], r: f64) {
        if x_new.iter().zip(x_old).any(|(a, b)| a < b) {
            self.decreases += 1;
        }
        self.residuals.push(r);
        if self.keep {
            self.iterates.push(x_new.iter().map(|v| v.to_f64()).collect());
        }
    }
}

pub(crate) struct Run<T> {
    pub x: Vec<T>,
    pub rec: Recorder,
    pub termination: Termination,
}

pub(crate) fn diverged<T: Real>(x: &[T]) -> bool {
    x.iter().any(|v| !v.is_finite()) || norm_inf(x) > DIVERGENCE_LIMIT
}

/// Elimination breakdowns that end an iteration instead of failing the call.
/// Errors that end an iteration rather than the call. A negative entry means
/// an iterate left the nonnegative orthant, which only the variant can do.
pub(crate) fn is_breakdown(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularPivot { .. } | Error::Reducible { .. } | Error::NegativeEntry { .. }
    )
}

/// `offdiag(Bx: + B:x)`.
pub(crate) fn offdiag_contraction<T: Real>(b: &Tensor3<T>, x: &[T]) -> Result<Matrix<T>> {
    let mut c = b.contract_sum(x)?;
    for i in 0..c.rows() {
        c[(i, i)] = T::zero();
    }
    Ok(c)
}

/// Index ranges of a block partition; defaults to blocks of two.
pub fn block_ranges(n: usize, sizes: Option<&[usize]>) -> Result<Vec<Range<usize>>> {
    let sizes: Vec<usize> = match sizes {
        Some(s) => s.to_vec(),
        None => (0..n).step_by(2).map(|i| (n - i).min(2)).collect(),
    };
    if sizes.contains(&0) || sizes.iter().sum::<usize>() != n {
        return Err(Error::InvalidInput(format!(
            "block sizes {sizes:?} are not a partition of {n}"
        )));
    }
    let mut out = Vec::with_capacity(sizes.len());
    let mut lo = 0;
    for s in sizes {
        out.push(lo..lo + s);
        lo += s;
    }
    Ok(out)
}

fn start_vector(problem: &Problem, start: &Start) -> Result<Vec<f64>> {
    let n = problem.dim();
    match start {
        Start::Zero => Ok(vec![0.0; n]),
        Start::V => Ok(problem.require_pagerank("start = v")?.v.clone()),
        Start::Custom(x0) => {
            check_dim(n, x0.len())?;
            if x0.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("start vector".into()));
            }
            Ok(x0.clone())
        }
    }
}

/// Run the method selected in `opts`.
pub fn solve(problem: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tol = {} must be positive", opts.tol)));
    }
    if let Some(r) = &opts.reference {
        check_dim(problem.dim(), r.len())?;
    }
    let ctl = Control {
        tol: opts.tol,
        maxit: opts.maxit,
        keep_iterates: opts.record_history || opts.reference.is_some(),
    };
    let a = problem.a();
    let b = problem.b();
    let run = if opts.method.uses_gth() {
        let pr = problem.require_pagerank(opts.method.name())?;
        if opts.start != Start::Zero {
            return Err(Error::InvalidInput(format!(
                "{} only supports start = zero",
                opts.method
            )));
        }
        let g = GthScalars::from_dd(pr, |v| v.to_f64());
        match opts.method {
            Method::NewtonGth => newton_gth_core(a, b, &g, &ctl)?,
            m => {
                let blocks = block_ranges(problem.dim(), opts.block_sizes.as_deref())?;
                if m == Method::BlockJacobi {
                    block_jacobi_core(a, b, &g, &blocks, &ctl)?
                } else {
                    bjgv_core(a, b, &g, &blocks, &ctl)?
                }
            }
        }
    } else {
        let x0 = start_vector(problem, &opts.start)?;
        match opts.method {
            Method::FixedPoint => fixed_point_core(a, b, x0, &ctl)?,
            _ => newton_core(a, b, x0, &ctl)?,
        }
    };
    finish(opts, run)
}

fn finish(opts: &SolverOptions, run: Run<f64>) -> Result<SolveReport> {
    let Run {
        x,
        rec,
        termination,
    } = run;
    let (error_history, overshoot_steps) = match &opts.reference {
        Some(r) => {
            let mut e_cw = Vec::with_capacity(rec.iterates.len());
            let mut e_norm = Vec::with_capacity(rec.iterates.len());
            let mut over = 0;
            for xk in &rec.iterates {
                e_cw.push(cw_distance(xk, r)?.value);
                e_norm.push(norm_error(xk, r)?);
                if xk.iter().zip(r).any(|(&a, &m)| a > m + 1e-14 * m.abs()) {
                    over += 1;
                }
            }
            (Some(ErrorHistory { e_cw, e_norm }), Some(over))
        }
        None => (None, None),
    };
    Ok(SolveReport {
        method: opts.method,
        iterations: rec.iterations(),
        x,
        residual_history: rec.residuals,
        iterate_history: opts.record_history.then_some(rec.iterates),
        z_history: rec.z,
        termination,
        decrease_steps: rec.decreases,
        error_history,
        overshoot_steps,
    })
}

fn with_method(p: &Problem, opts: &SolverOptions, method: Method) -> Result<SolveReport> {
    solve(
        p,
        &SolverOptions {
            method,
            ..opts.clone()
        },
    )
}

pub fn fixed_point(p: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    with_method(p, opts, Method::FixedPoint)
}

pub fn newton(p: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    with_method(p, opts, Method::Newton)
}

pub fn newton_gth(p: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    with_method(p, opts, Method::NewtonGth)
}

pub fn block_jacobi(p: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    with_method(p, opts, Method::BlockJacobi)
}

pub fn block_jacobi_gth_variant(p: &Problem, opts: &SolverOptions) -> Result<SolveReport> {
    with_method(p, opts, Method::BlockJacobiGthVariant)
}

#[cfg(test)]
mod tests;
