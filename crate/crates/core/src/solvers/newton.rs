use super::{
    diverged, is_breakdown, offdiag_contraction, residual_t, Control, GthScalars, Recorder, Run,
    Termination,
};
use crate::error::Result;
use crate::linalg::lu_factor;
use crate::mmatrix::{gth_factor, gth_solve, Orientation, TripletMMatrix};
use crate::scalar::{norm_inf, Real};
use crate::tensor::Tensor3;

/// Newton on `F(x) = a + Bx² - x`: solve `R_x h = F(x)` by partial-pivoting LU.
pub(crate) fn newton_core<T: Real>(
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
        let lu = match lu_factor(&b.r_matrix(&x)?) {
            Ok(lu) => lu,
            Err(e) if is_breakdown(&e) => break Termination::SingularPivot,
            Err(e) => return Err(e),
        };
        let h = lu.solve(&r);
        let x_new: Vec<T> = x.iter().zip(&h).map(|(&xi, &hi)| xi + hi).collect();
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

/// Newton from zero with `R_x` held as the column triplet
/// `(offdiag(Bx: + B:x), 1, z1)`. Only sums and products of nonnegative
/// numbers occur: `z` follows its recurrence and the residual is `Bh²`.
///
/// Stops when `‖r‖∞ ≤ tol` and the tracked gap `e = z - |1-2α|` satisfies
/// `e / 2α ≤ tol`. Near `α = 1/2` the residual is quadratic in the error, so
/// the residual test alone stops too early.
pub(crate) fn newton_gth_core<T: Real>(
    a: &[T],
    b: &Tensor3<T>,
    g: &GthScalars<T>,
    ctl: &Control,
) -> Result<Run<T>> {
    let n = a.len();
    let mut x = vec![T::zero(); n];
    let mut z = T::one();
    let mut e = g.e0;
    let mut r = a.to_vec();
    let mut rec = Recorder::new(ctl.keep_iterates, &x, norm_inf(&r));
    rec.z.push(z.to_f64());
    let termination = loop {
        if norm_inf(&r) <= ctl.tol && g.gap_small(e, ctl.tol) {
            break Termination::TolReached;
        }
        if rec.iterations() >= ctl.maxit {
            break Termination::Maxit;
        }
        let t = TripletMMatrix::new(offdiag_contraction(b, &x)?, vec![z; n], Orientation::Col)?;
        let f = match gth_factor(&t) {
            Ok(f) => f,
            Err(err) if is_breakdown(&err) => break Termination::SingularPivot,
            Err(err) => return Err(err),
        };
        let h = gth_solve(&f, &r)?;
        let x_new: Vec<T> = x.iter().zip(&h).map(|(&xi, &hi)| xi + hi).collect();
        let two_z = z + z;
        e = e * e / two_z;
        z = (g.w2 + z * z) / two_z;
        r = b.apply_quadratic(&h)?;
        rec.step(&x, &x_new, norm_inf(&r));
        rec.z.push(z.to_f64());
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
