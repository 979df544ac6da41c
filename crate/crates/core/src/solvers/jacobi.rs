use std::ops::Range;

use super::{
    diverged, is_breakdown, offdiag_contraction, residual_t, Control, GthScalars, Recorder, Run,
    Termination,
};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::mmatrix::{gth_factor, gth_solve, Orientation, TripletMMatrix};
use crate::scalar::{norm_inf, Real};
use crate::tensor::Tensor3;

/// The part of `R_x` outside the diagonal blocks, `N_x = offdiag(Bx: + B:x)`
/// restricted to entries whose row and column lie in different blocks.
struct Splitting<T> {
    c: Matrix<T>,
    block_of: Vec<usize>,
    /// `1ᵀN_x`.
    n_colsums: Vec<T>,
}

impl<T: Real> Splitting<T> {
    fn new(b: &Tensor3<T>, x: &[T], blocks: &[Range<usize>]) -> Result<Self> {
        let n = x.len();
        let c = offdiag_contraction(b, x)?;
        let mut block_of = vec![0; n];
        for (bi, r) in blocks.iter().enumerate() {
            for i in r.clone() {
                block_of[i] = bi;
            }
        }
        let mut n_colsums = vec![T::zero(); n];
        for i in 0..n {
            for (j, s) in n_colsums.iter_mut().enumerate() {
                if block_of[i] != block_of[j] {
                    *s += c[(i, j)];
                }
            }
        }
        Ok(Self {
            c,
            block_of,
            n_colsums,
        })
    }

    /// `N_x y`.
    fn apply_n(&self, y: &[T]) -> Vec<T> {
        let n = y.len();
        (0..n)
            .map(|i| {
                let mut s = T::zero();
                for (j, &yj) in y.iter().enumerate() {
                    if self.block_of[i] != self.block_of[j] {
                        s += self.c[(i, j)] * yj;
                    }
                }
                s
            })
            .collect()
    }

    /// Solve each diagonal block, a column triplet with sums `(1ᵀN)_block + shift`.
    fn solve_blocks(&self, blocks: &[Range<usize>], shift: T, rhs: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); rhs.len()];
        for r in blocks {
            let m = r.len();
            let off = Matrix::from_fn(m, m, |i, j| self.c[(r.start + i, r.start + j)]);
            let sums = r.clone().map(|j| self.n_colsums[j] + shift).collect();
            let f = gth_factor(&TripletMMatrix::new(off, sums, Orientation::Col)?)?;
            let h = gth_solve(&f, &rhs[r.clone()])?;
            out[r.clone()].copy_from_slice(&h);
        }
        Ok(out)
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut s = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

/// Block Jacobi in increment form, `y_{k+1} = y_k + M_{y_k}⁻¹F(y_k)`, with the
/// block column sums carried by `u_k = 1 - 2α1ᵀy_k` through its recurrence and
/// the residual updated as `Bh² + N_{y_k}h`.
pub(crate) fn block_jacobi_core<T: Real>(
    a: &[T],
    b: &Tensor3<T>,
    g: &GthScalars<T>,
    blocks: &[Range<usize>],
    ctl: &Control,
) -> Result<Run<T>> {
    let n = a.len();
    let mut y = vec![T::zero(); n];
    let mut u = T::one();
    let mut e = g.e0;
    let mut f = a.to_vec();
    let mut rec = Recorder::new(ctl.keep_iterates, &y, norm_inf(&f));
    rec.z.push(u.to_f64());
    let termination = loop {
        if norm_inf(&f) <= ctl.tol && g.gap_small(e, ctl.tol) {
            break Termination::TolReached;
        }
        if rec.iterations() >= ctl.maxit {
            break Termination::Maxit;
        }
        let sp = Splitting::new(b, &y, blocks)?;
        let h = match sp.solve_blocks(blocks, u, &f) {
            Ok(h) => h,
            Err(err) if is_breakdown(&err) => break Termination::SingularPivot,
            Err(err) => return Err(err),
        };
        let y_new: Vec<T> = y.iter().zip(&h).map(|(&yi, &hi)| yi + hi).collect();
        let nh = sp.apply_n(&h);
        let four_alpha_c = (g.two_alpha + g.two_alpha) * dot(&sp.n_colsums, &h);
        let two_u = u + u;
        e = (e * e + four_alpha_c) / two_u;
        u = (u * u + g.w2 + four_alpha_c) / two_u;
        let bh = b.apply_quadratic(&h)?;
        f = bh.iter().zip(&nh).map(|(&p, &q)| p + q).collect();
        rec.step(&y, &y_new, norm_inf(&f));
        rec.z.push(u.to_f64());
        y = y_new;
        if diverged(&y) {
            break Termination::Diverged;
        }
    };
    Ok(Run {
        x: y,
        rec,
        termination,
    })
}

/// Variant: `T_k w_{k+1} = N_{w_k} w_k + a - Bw_k²`, where `T_k` has the
/// diagonal blocks of `R_{w_k}` with block column sums `(1ᵀN)_block + z_k` and
/// `z_k` follows the Newton recurrence. No monotonicity guarantee.
pub(crate) fn bjgv_core<T: Real>(
    a: &[T],
    b: &Tensor3<T>,
    g: &GthScalars<T>,
    blocks: &[Range<usize>],
    ctl: &Control,
) -> Result<Run<T>> {
    let n = a.len();
    let mut w = vec![T::zero(); n];
    let mut z = T::one();
    let mut e = g.e0;
    let mut r = a.to_vec();
    let mut rec = Recorder::new(ctl.keep_iterates, &w, norm_inf(&r));
    rec.z.push(z.to_f64());
    let termination = loop {
        if norm_inf(&r) <= ctl.tol && g.gap_small(e, ctl.tol) {
            break Termination::TolReached;
        }
        if rec.iterations() >= ctl.maxit {
            break Termination::Maxit;
        }
        let sp = Splitting::new(b, &w, blocks)?;
        let bw = b.apply_quadratic(&w)?;
        let nw = sp.apply_n(&w);
        let rhs: Vec<T> = (0..n).map(|i| nw[i] + (a[i] - bw[i])).collect();
        let w_new = match sp.solve_blocks(blocks, z, &rhs) {
            Ok(v) => v,
            Err(err) if is_breakdown(&err) => break Termination::SingularPivot,
            Err(err) => return Err(err),
        };
        let two_z = z + z;
        e = e * e / two_z;
        z = (g.w2 + z * z) / two_z;
        r = residual_t(a, b, &w_new)?;
        rec.step(&w, &w_new, norm_inf(&r));
        rec.z.push(z.to_f64());
        w = w_new;
        if diverged(&w) {
            break Termination::Diverged;
        }
    };
    Ok(Run {
        x: w,
        rec,
        termination,
    })
}
