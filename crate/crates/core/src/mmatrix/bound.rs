use serde::Serialize;

use super::{gth_factor, gth_inverse, TripletMMatrix};
use crate::analysis::cw_distance;
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseBoundReport {
    pub epsilon: f64,
    pub offdiag_distance: f64,
    pub sums_distance: f64,
    /// `d(M̃⁻¹, M⁻¹)`; infinite when the perturbation changes the zero pattern.
    pub observed: f64,
    /// `(2n-1)ε`, first order.
    pub bound: f64,
    pub pattern_mismatch: bool,
    pub within_bound: bool,
}

/// Compare both GTH inverses against the first-order bound `(2n-1)ε`.
pub fn inverse_cw_bound_check(
    m: &TripletMMatrix<f64>,
    m_tilde: &TripletMMatrix<f64>,
    eps: f64,
) -> Result<InverseBoundReport> {
    let n = m.dim();
    check_dim(n, m_tilde.dim())?;
    if m.orientation() != m_tilde.orientation() {
        return Err(Error::InvalidInput("orientations differ".into()));
    }
    let off = cw_distance(m_tilde.offdiag().as_slice(), m.offdiag().as_slice())?.value;
    let sums = cw_distance(m_tilde.sums(), m.sums())?.value;
    let bound = (2 * n).saturating_sub(1) as f64 * eps;
    let pattern_mismatch = off.is_infinite() || sums.is_infinite();
    let observed = if pattern_mismatch {
        f64::INFINITY
    } else {
        let a = gth_inverse(&gth_factor(m)?)?;
        let b = gth_inverse(&gth_factor(m_tilde)?)?;
        cw_distance(b.as_slice(), a.as_slice())?.value
    };
    Ok(InverseBoundReport {
        epsilon: eps,
        offdiag_distance: off,
        sums_distance: sums,
        observed,
        bound,
        pattern_mismatch,
        within_bound: observed <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::mmatrix::Orientation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_triplet(n: usize, rng: &mut ChaCha8Rng) -> TripletMMatrix {
        let a = Matrix::from_fn(n, n, |i, j| if i != j { rng.gen_range(0.1..1.0) } else { 0.0 });
        let s = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        TripletMMatrix::new(a, s, Orientation::Row).unwrap()
    }

    #[test]
    fn identical_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_triplet(4, &mut rng);
        let r = inverse_cw_bound_check(&m, &m, 0.0).unwrap();
        assert_eq!(r.observed, 0.0);
        assert!(r.within_bound);
    }

    #[test]
    fn multiplicative_noise_three_by_three() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let eps = 1e-8;
        for _ in 0..50 {
            let m = random_triplet(3, &mut rng);
            let off = m.offdiag().map(|v| v * (1.0 + eps * rng.gen_range(-1.0..1.0)));
            let s = m.sums().iter().map(|v| v * (1.0 + eps * rng.gen_range(-1.0..1.0))).collect();
            let mt = TripletMMatrix::new(off, s, Orientation::Row).unwrap();
            let r = inverse_cw_bound_check(&m, &mt, eps).unwrap();
            assert_eq!(r.bound, 5.0 * eps);
            assert!(r.observed <= 5.0 * eps, "{r:?}");
        }
    }

    #[test]
    fn pattern_change_is_infinite() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let m = TripletMMatrix::new(a.clone(), vec![1.0, 0.0], Orientation::Row).unwrap();
        let mt = TripletMMatrix::new(a, vec![1.0, 1e-12], Orientation::Row).unwrap();
        let r = inverse_cw_bound_check(&m, &mt, 1e-8).unwrap();
        assert!(r.pattern_mismatch);
        assert!(r.observed.is_infinite());
        assert!(!r.within_bound);
    }
}
