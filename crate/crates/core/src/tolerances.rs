use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every stage of the pipeline.
///
/// `proj` and `flow` are relative: they are multiplied by a problem scale
/// (see [`Tolerances::proj_abs`] and [`Tolerances::flow_abs`]) before use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Distance from the unit circle (and from zero) that still counts as "on" it.
    pub unit: f64,
    /// Assumed relative backward perturbation of the eigenvalue solver; drives clustering.
    pub cluster: f64,
    /// Projector identities, relative to `max(1, ‖Φ‖)`.
    pub proj: f64,
    /// Nilpotency test used to determine eigenvalue indices.
    pub nilp: f64,
    /// Drazin axioms, relative to `max(1, ‖M‖^(N+1))`.
    pub drazin: f64,
    /// Largest imaginary residue that may be discarded when coercing to real.
    pub imag: f64,
    /// Recursion residuals and flow identities, relative to the problem scale.
    pub flow: f64,
    /// Tail bound for truncated evaluation of infinite sums.
    pub trunc: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit: 1e-9,
            cluster: 1e-7,
            proj: 1e-9,
            nilp: 1e-9,
            drazin: 1e-10,
            imag: 1e-9,
            flow: 1e-9,
            trunc: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn proj_abs(&self, phi_norm: f64) -> f64 {
        self.proj * phi_norm.max(1.0)
    }

    pub fn flow_abs(&self, scale: f64) -> f64 {
        self.flow * scale.max(1.0)
    }

    /// Every tolerance must be strictly positive and finite.
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("tol_unit", self.unit),
            ("tol_cluster", self.cluster),
            ("tol_proj", self.proj),
            ("tol_nilp", self.nilp),
            ("tol_drazin", self.drazin),
            ("tol_imag", self.imag),
            ("tol_flow", self.flow),
            ("tol_trunc", self.trunc),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::Input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.cluster >= 1.0 {
            return Err(crate::Error::Input("tol_cluster must be below 1".into()));
        }
        Ok(())
    }
}
