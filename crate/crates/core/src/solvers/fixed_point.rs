use super::{diverged, residual_t, Control, Recorder, Run, Termination};
use crate::error::Result;
use crate::scalar::{norm_inf, Real};
use crate::tensor::Tensor3;

/// `x_{k+1} = a + Bx_k²`.
pub(crate) fn fixed_point_core<T: Real>(
    a: &[T],
    b: &Tensor3<T>,
    x0: Vec<T>,
    ctl: &Control,
) -> Result<Run<T>> {
    let mut x = x0;
    let mut r = residual_t(a, b, &x)?;
    let mut rec = Recorder::new(ctl.keep_iterates, &x, norm_inf(&r));
    let termination = loop {
        if norm_inf(&r) <= ctl.tol {
            break Termination::TolReached;
        }
        if rec.iterations() >= ctl.maxit {
            break Termination::Maxit;
        }
        let bx = b.apply_quadratic(&x)?;
        let x_new: Vec<T> = a.iter().zip(&bx).map(|(&ai, &bi)| ai + bi).collect();
        r = residual_t(a, b, &x_new)?;
        rec.step(&x, &x_new, norm_inf(&r));
        x = x_new;
        if diverged(&x) {
            break Termination::Diverged;
        }
    };
    Ok(Run {
        x,
        rec,
        termination,
    })
}
