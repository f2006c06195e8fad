use super::matrix::Matrix;
use super::spectral::{eig_decompose, SpectralClassification, SpectralDecomposition};
use crate::{Result, Tolerances};

/// Drazin inverse `M^D` under default tolerances.
pub fn drazin_inverse(m: &Matrix) -> Result<Matrix> {
    drazin_inverse_with(m, &Tolerances::default())
}

pub fn drazin_inverse_with(m: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let dec = eig_decompose(m, tol)?;
    let class = dec.classify();
    dec.drazin(&class)
}

/// `M^t` for `t ≥ 0`, `(M^D)^{−t}` for `t < 0`.
pub fn signed_power(m: &Matrix, t: i64) -> Result<Matrix> {
    if t >= 0 {
        return Ok(m.pow(t as u32));
    }
    Ok(drazin_inverse(m)?.pow(t.unsigned_abs() as u32))
}

/// Powers of a matrix and of its Drazin inverse, computed once.
#[derive(Debug, Clone)]
pub struct SignedPowers {
    m: Matrix,
    d: Matrix,
}

impl SignedPowers {
    pub fn new(m: Matrix, drazin: Matrix) -> Self {
        SignedPowers { m, d: drazin }
    }

    pub fn from_decomposition(dec: &SpectralDecomposition, class: &SpectralClassification) -> Result<Self> {
        Ok(SignedPowers {
            m: dec.matrix().clone(),
            d: dec.drazin(class)?,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn drazin(&self) -> &Matrix {
        &self.d
    }

    pub fn power(&self, t: i64) -> Matrix {
        if t >= 0 {
            self.m.pow(t as u32)
        } else {
            self.d.pow(t.unsigned_abs() as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[f64]) -> Matrix {
        let n = (rows.len() as f64).sqrt() as usize;
        Matrix::from_rows(n, rows).unwrap()
    }

    #[test]
    fn nonsingular_is_inverse() {
        let d = drazin_inverse(&m(&[2.0, 0.0, 0.0, -1.0])).unwrap();
        assert!(d.dist(&m(&[0.5, 0.0, 0.0, -1.0])) < 1e-15);
        assert!(d.is_real_input());
    }

    #[test]
    fn nilpotent_is_zero() {
        let d = drazin_inverse(&m(&[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(d, Matrix::zeros(2));
    }

    #[test]
    fn idempotent_is_its_own_drazin() {
        let a = m(&[1.0, 1.0, 0.0, 0.0]);
        let d = drazin_inverse(&a).unwrap();
        assert!(d.dist(&a) < 1e-14);
    }

    #[test]
    fn signed_power_examples() {
        let p = signed_power(&m(&[2.0]), -3).unwrap();
        assert!((p.entry(0, 0).re - 0.125).abs() < 1e-16);
        let p = signed_power(&m(&[0.0, 1.0, 0.0, 0.0]), -1).unwrap();
        assert_eq!(p, Matrix::zeros(2));
        assert_eq!(signed_power(&m(&[3.0, 1.0, 0.0, 2.0]), 0).unwrap(), Matrix::identity(2));
    }
}
