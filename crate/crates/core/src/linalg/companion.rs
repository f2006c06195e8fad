use nalgebra::DMatrix;

use super::matrix::Matrix;
use crate::{Error, Result};

/// Lifts `x_t = A_1 x_{t−1} + … + A_p x_{t−p} + ε_t` to a first-order system
/// on the stacked state `(x_t, …, x_{t−p+1})`.
pub fn build_companion(coefficients: &[DMatrix<f64>]) -> Result<Matrix> {
    let first = coefficients
        .first()
        .ok_or_else(|| Error::Input("companion form needs at least one coefficient".into()))?;
    let n = first.nrows();
    for (k, a) in coefficients.iter().enumerate() {
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::Input(format!(
                "coefficient {} is {}x{}, expected {n}x{n}",
                k + 1,
                a.nrows(),
                a.ncols()
            )));
        }
    }
    let p = coefficients.len();
    let mut c = DMatrix::<f64>::zeros(n * p, n * p);
    for (k, a) in coefficients.iter().enumerate() {
        c.view_mut((0, k * n), (n, n)).copy_from(a);
    }
    for k in 1..p {
        c.view_mut((k * n, (k - 1) * n), (n, n))
            .copy_from(&DMatrix::identity(n, n));
    }
    Matrix::from_real(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar2_scalar() {
        let c = build_companion(&[
            DMatrix::from_element(1, 1, 0.3),
            DMatrix::from_element(1, 1, 0.2),
        ])
        .unwrap();
        assert_eq!(c.real_part(), DMatrix::from_row_slice(2, 2, &[0.3, 0.2, 1.0, 0.0]));
    }

    #[test]
    fn p1_is_identity_map() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(build_companion(&[a.clone()]).unwrap().real_part(), a);
    }

    #[test]
    fn rejects_mismatch() {
        let r = build_companion(&[DMatrix::zeros(2, 2), DMatrix::zeros(3, 3)]);
        assert!(matches!(r, Err(Error::Input(_))));
        assert!(build_companion(&[]).is_err());
    }
}
