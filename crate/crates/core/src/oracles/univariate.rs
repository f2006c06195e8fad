use nalgebra::DVector;
use serde::Serialize;

use crate::seq::TimeWindowSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `0 < |φ| < 1`
    Forward,
    /// `|φ| > 1`
    Backward,
    /// `|φ| = 1`
    Outward,
    /// `φ = 0`
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnivariateCase {
    pub phi: f64,
    pub regime: Regime,
}

impl UnivariateCase {
    pub fn new(phi: f64, tol_unit: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::Input("φ must be finite".into()));
        }
        let a = phi.abs();
        let regime = if a <= tol_unit {
            Regime::Degenerate
        } else if (a - 1.0).abs() <= tol_unit {
            Regime::Outward
        } else if a < 1.0 {
            Regime::Forward
        } else {
            Regime::Backward
        };
        Ok(UnivariateCase { phi, regime })
    }
}

fn pow(phi: f64, t: i64) -> f64 {
    phi.powi(t as i32)
}

/// Closed-form scalar solution with initial condition `v`.
///
/// ```text
/// forward:   x_t = φ^t v + Σ_{k≥0} φ^k ε_{t−k}
/// backward:  x_t = φ^t v − Σ_{k≥1} φ^{−k} ε_{t+k}
/// outward:   x_t = φ^t v + Σ_{s=1..t} φ^{t−s} ε_s            (t > 0)
///            x_t = φ^t v − Σ_{s=0..−t−1} φ^{t+s} ε_{−s}      (t < 0)
/// φ = 0:     x_t = ε_t
/// ```
///
/// ε is read as zero outside its window, so every sum is finite.
pub fn univariate_solution(case: &UnivariateCase, v: f64, eps: &TimeWindowSequence) -> Result<TimeWindowSequence> {
    if eps.dim() != 1 {
        return Err(Error::Input(format!("univariate oracle needs a scalar sequence, got dimension {}", eps.dim())));
    }
    let e = |t: i64| eps.at(t)[0].re;
    let (t_min, t_max) = (eps.t_min(), eps.t_max());
    let phi = case.phi;
    let value = |t: i64| -> f64 {
        match case.regime {
            Regime::Degenerate => e(t),
            Regime::Forward => {
                let mut s = pow(phi, t) * v;
                for k in 0..=(t - t_min) {
                    s += pow(phi, k) * e(t - k);
                }
                s
            }
            Regime::Backward => {
                let mut s = pow(phi, t) * v;
                for k in 1..=(t_max - t) {
                    s -= pow(phi, -k) * e(t + k);
                }
                s
            }
            Regime::Outward => {
                let mut s = pow(phi, t) * v;
                if t > 0 {
                    for j in 1..=t {
                        s += pow(phi, t - j) * e(j);
                    }
                } else if t < 0 {
                    for j in 0..=(-t - 1) {
                        s -= pow(phi, t + j) * e(-j);
                    }
                }
                s
            }
        }
    };
    TimeWindowSequence::from_real(
        t_min,
        (t_min..=t_max).map(|t| DVector::from_element(1, value(t))).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(t_min: i64, t_max: i64, at: i64) -> TimeWindowSequence {
        TimeWindowSequence::delta(t_min, t_max, at, &DVector::from_element(1, 1.0)).unwrap()
    }

    fn vals(s: &TimeWindowSequence) -> Vec<f64> {
        s.values().iter().map(|v| v[0].re).collect()
    }

    #[test]
    fn regimes() {
        assert_eq!(UnivariateCase::new(0.5, 1e-9).unwrap().regime, Regime::Forward);
        assert_eq!(UnivariateCase::new(-2.0, 1e-9).unwrap().regime, Regime::Backward);
        assert_eq!(UnivariateCase::new(-1.0, 1e-9).unwrap().regime, Regime::Outward);
        assert_eq!(UnivariateCase::new(0.0, 1e-9).unwrap().regime, Regime::Degenerate);
    }

    #[test]
    fn forward_delta() {
        let c = UnivariateCase::new(0.5, 1e-9).unwrap();
        let x = univariate_solution(&c, 0.0, &delta(-2, 3, 0)).unwrap();
        assert_eq!(vals(&x), vec![0.0, 0.0, 1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn backward_homogeneous() {
        let c = UnivariateCase::new(2.0, 1e-9).unwrap();
        let eps = TimeWindowSequence::zeros(-2, 2, 1).unwrap();
        let x = univariate_solution(&c, 1.0, &eps).unwrap();
        assert_eq!(vals(&x), vec![0.25, 0.5, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn outward_alternating() {
        let c = UnivariateCase::new(-1.0, 1e-9).unwrap();
        let x = univariate_solution(&c, 1.0, &delta(-2, 3, 1)).unwrap();
        // (−1)^t + (−1)^{t−1}·1{t ≥ 1}
        assert_eq!(vals(&x), vec![1.0, -1.0, 1.0, 0.0, 0.0, 0.0]);
    }
}
