use serde::Serialize;

use crate::error::{Error, Result};

/// `γ = (1+ε)^{n-1} / (1-ε)^n`.
pub fn gamma(eps: f64, n: usize) -> f64 {
    (1.0 + eps).powi(n as i32 - 1) / (1.0 - eps).powi(n as i32)
}

/// A componentwise bound on `d(m̃, m)`. `bound` is `None` when a validity
/// condition fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub epsilon_realized: f64,
    pub kappa: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: f64,
    pub bound: Option<f64>,
    pub observed_dcw: Option<f64>,
    pub applicable: bool,
    /// `ε + ε² < 1/(4γ²·c)` with `c` the bound-specific constant.
    pub discriminant_condition: bool,
    /// `R̃_m` is a nonsingular M-matrix, when known.
    pub spectral_condition: Option<bool>,
}

impl BoundReport {
    pub fn with_observed(mut self, d: f64) -> Self {
        self.observed_dcw = Some(d);
        self
    }

    pub fn with_spectral_condition(mut self, ok: bool) -> Self {
        self.spectral_condition = Some(ok);
        self.applicable = self.discriminant_condition && ok;
        if !self.applicable {
            self.bound = None;
        }
        self
    }

    /// `Some(observed ≤ bound)` when both are known.
    pub fn holds(&self) -> Option<bool> {
        Some(self.observed_dcw? <= self.bound?)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("epsilon = {eps} is not in [0, 1)")))
    }
}

fn report(eps: f64, n: usize, c: f64, value: f64) -> BoundReport {
    let g = gamma(eps, n);
    let ok = c <= 0.0 || eps + eps * eps < 1.0 / (4.0 * g * g * c);
    BoundReport {
        epsilon_realized: eps,
        kappa: None,
        omega: None,
        gamma: g,
        bound: ok.then_some(value),
        observed_dcw: None,
        applicable: ok,
        discriminant_condition: ok,
        spectral_condition: None,
    }
}

/// `2ε(2κ-1)γ`, valid when `ε + ε² < 1/(4γ²(2κ-1)(κ-1))`.
pub fn bound_kappa(eps: f64, kappa: f64, n: usize) -> Result<BoundReport> {
    check_eps(eps)?;
    if !(kappa >= 1.0) {
        return Err(Error::InvalidInput(format!("kappa = {kappa} < 1")));
    }
    let g = gamma(eps, n);
    let mut r = report(eps, n, (2.0 * kappa - 1.0) * (kappa - 1.0), 2.0 * eps * (2.0 * kappa - 1.0) * g);
    r.kappa = Some(kappa);
    Ok(r)
}

/// `2ωγε` for zero-sum perturbations, valid when `ε + ε² < 1/(4γ²ω²)`.
pub fn bound_omega(eps: f64, omega: f64, n: usize) -> Result<BoundReport> {
    check_eps(eps)?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!("omega = {omega} must be positive")));
    }
    let g = gamma(eps, n);
    let mut r = report(eps, n, omega * omega, 2.0 * omega * g * eps);
    r.omega = Some(omega);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_epsilon() {
        assert_eq!(gamma(0.0, 5), 1.0);
        assert_eq!(bound_kappa(0.0, 40.0, 4).unwrap().bound, Some(0.0));
        assert_eq!(bound_omega(0.0, 3.0, 4).unwrap().bound, Some(0.0));
    }

    #[test]
    fn kappa_one_reduces() {
        let eps = 1e-6;
        let r = bound_kappa(eps, 1.0, 4).unwrap();
        assert_eq!(r.bound, Some(2.0 * eps * gamma(eps, 4)));
        assert!(r.applicable);
    }

    #[test]
    fn not_applicable_when_discriminant_fails() {
        let r = bound_kappa(1e-3, 1e3, 4).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.bound, None);
        let r = bound_omega(0.1, 10.0, 4).unwrap();
        assert!(!r.applicable);
        assert!(bound_omega(1.0, 1.0, 4).is_err());
        assert!(bound_kappa(0.1, 0.5, 4).is_err());
    }

    #[test]
    fn applicability_is_monotone_in_epsilon() {
        // Decreasing ε: once applicable, it stays applicable.
        let flags: Vec<bool> = (1..60)
            .map(|k| bound_omega(10f64.powf(-(k as f64) / 6.0), 50.0, 6).unwrap().applicable)
            .collect();
        assert!(flags.windows(2).all(|w| !w[0] || w[1]));
        assert!(!flags[0] && flags[flags.len() - 1]);
    }

    #[test]
    fn spectral_flag_and_json_keys() {
        let r = bound_omega(1e-8, 2.0, 4).unwrap().with_observed(1e-9);
        assert_eq!(r.holds(), Some(true));
        let r2 = r.clone().with_spectral_condition(false);
        assert!(!r2.applicable && r2.bound.is_none());
        let v = serde_json::to_value(&r).unwrap();
        for key in ["epsilon_realized", "kappa", "omega", "gamma", "bound", "observed_dcw", "applicable"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
