//! Small hard-coded instances with known solutions.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::precision::DoubleDouble;
use crate::solvers::Problem;
use crate::tensor::Tensor3;

/// `v` for [`ex1`] as printed to five digits; it sums to `1 + 2.4e-6` and is
/// renormalized before use.
pub const EX1_V_RAW: [f64; 4] = [1.5462e-2, 1.4317e-12, 3.5898e-7, 9.8454e-1];

/// `v` for [`ex2`]. The last entry is `9.999e-1`; with `9.999e-4` the vector
/// is far from stochastic and the published stochastic solution is not
/// reproduced.
pub const EX2_V: [f64; 4] = [1e-4, 0.0, 0.0, 9.999e-1];

fn tensor(rows: [[f64; 16]; 4]) -> Tensor3 {
    let u = Matrix::from_rows(&rows.map(|r| r.to_vec())).expect("4 x 16");
    Tensor3::from_unfolding(&u).expect("valid tensor")
}

pub fn intro_tensor() -> Tensor3 {
    let u = Matrix::from_rows(&[vec![1.0, 0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5, 1.0]]).expect("2 x 4");
    Tensor3::from_unfolding(&u).expect("valid tensor")
}

/// Two states, `v = [1-δ, δ]`; for `α ≤ 1/2` the minimal solution is `v`.
pub fn intro(delta: f64, alpha: f64) -> Result<Problem> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta = {delta} is not in [0, 1]")));
    }
    Problem::pagerank(vec![1.0 - delta, delta], intro_tensor(), alpha)
}

pub fn ex1_tensor() -> Tensor3 {
    tensor([
        [0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 1., 0., 0., 0.5, 0., 1.],
        [0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 1., 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0., 0.],
        [1., 1., 1., 1., 1., 1., 0., 1., 1., 0., 0., 0., 0., 0.5, 1., 0.],
    ])
}

pub fn ex1_v() -> Vec<f64> {
    let s: f64 = EX1_V_RAW.iter().sum();
    EX1_V_RAW.iter().map(|v| v / s).collect()
}

pub fn ex1(alpha: f64) -> Result<Problem> {
    Problem::pagerank(ex1_v(), ex1_tensor(), alpha)
}

pub fn ex1_with_gap(one_minus_two_alpha: DoubleDouble) -> Result<Problem> {
    Problem::pagerank_with_gap(ex1_v(), ex1_tensor(), one_minus_two_alpha)
}

pub fn ex2_tensor() -> Tensor3 {
    tensor([
        [0., 0., 0., 0., 0., 0., 0.5, 0., 1., 0., 0., 0., 0., 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., 0., 1., 0., 1., 0., 0., 0.5, 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0., 1., 0., 0.5, 0.5, 1., 0.],
        [1., 1., 1., 1., 1., 1., 0., 0., 0., 0., 0., 1., 0., 0.5, 0., 1.],
    ])
}

pub fn ex2(alpha: f64) -> Result<Problem> {
    Problem::pagerank(EX2_V.to_vec(), ex2_tensor(), alpha)
}

pub fn ex2_with_gap(one_minus_two_alpha: DoubleDouble) -> Result<Problem> {
    Problem::pagerank_with_gap(EX2_V.to_vec(), ex2_tensor(), one_minus_two_alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Intro,
    Ex1,
    Ex2,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "intro" => Ok(Builtin::Intro),
            "ex1" => Ok(Builtin::Ex1),
            "ex2" => Ok(Builtin::Ex2),
            _ => Err(Error::InvalidInput(format!(
                "unknown builtin '{s}' (expected intro, ex1 or ex2)"
            ))),
        }
    }
}

/// `α` given either directly or through `1 - 2α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Alpha(f64),
    OneMinusTwoAlpha(DoubleDouble),
}

impl Builtin {
    pub fn tensor(self) -> Tensor3 {
        match self {
            Builtin::Intro => intro_tensor(),
            Builtin::Ex1 => ex1_tensor(),
            Builtin::Ex2 => ex2_tensor(),
        }
    }

    /// `delta` applies to [`Builtin::Intro`] only (default `1e-6`).
    pub fn problem(self, alpha: AlphaSpec, delta: Option<f64>) -> Result<Problem> {
        let v = match self {
            Builtin::Intro => {
                let d = delta.unwrap_or(1e-6);
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::InvalidInput(format!("delta = {d} is not in [0, 1]")));
                }
                vec![1.0 - d, d]
            }
            Builtin::Ex1 => ex1_v(),
            Builtin::Ex2 => EX2_V.to_vec(),
        };
        match alpha {
            AlphaSpec::Alpha(a) => Problem::pagerank(v, self.tensor(), a),
            AlphaSpec::OneMinusTwoAlpha(g) => Problem::pagerank_with_gap(v, self.tensor(), g),
        }
    }
}
