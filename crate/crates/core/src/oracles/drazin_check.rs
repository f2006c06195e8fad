use serde::Serialize;

use crate::linalg::Matrix;

/// Residuals of the three defining equations of the Drazin inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrazinAxioms {
    /// `‖DMD − D‖`
    pub dmd: f64,
    /// `‖DM − MD‖`
    pub commute: f64,
    /// `‖DM^{N+1} − M^N‖`
    pub power: f64,
    /// `max(1, ‖M‖^{N+1})`
    pub scale: f64,
}

impl DrazinAxioms {
    pub fn max_residual(&self) -> f64 {
        self.dmd.max(self.commute).max(self.power)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol * self.scale
    }
}

pub fn drazin_axiom_check(m: &Matrix, d: &Matrix) -> DrazinAxioms {
    let n = m.dim() as u32;
    let mn = m.pow(n);
    DrazinAxioms {
        dmd: d.mul(m).mul(d).dist(d),
        commute: d.mul(m).dist(&m.mul(d)),
        power: d.mul(&mn.mul(m)).dist(&mn),
        scale: m.norm().powi(n as i32 + 1).max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_guess_is_flagged() {
        let m = Matrix::from_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let r = drazin_axiom_check(&m, &m);
        assert_eq!(r.power, 0.0);
        assert_eq!(r.dmd, 1.0);
        assert!(!r.holds(1e-10));
        assert!(drazin_axiom_check(&m, &Matrix::zeros(2)).holds(1e-15));
    }
}
