use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Dense square complex matrix that remembers whether it came from real data.
///
/// All arithmetic happens in complex storage. `is_real_input` is an assertion
/// layer: when set, every imaginary part is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: DMatrix<C64>,
    real: bool,
}

impl Matrix {
    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Input(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::Input("matrix must have positive dimension".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        Ok(Matrix {
            data: m.map(|v| C64::new(v, 0.0)),
            real: true,
        })
    }

    /// Builds an N×N real matrix from row-major entries.
    pub fn from_rows(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::Input(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                rows.len()
            )));
        }
        Self::from_real(&DMatrix::from_row_slice(n, n, rows))
    }

    pub fn from_complex(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Input(format!(
                "matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        Ok(Matrix { data: m, real: false })
    }

    pub(crate) fn from_parts(data: DMatrix<C64>, real: bool) -> Self {
        Matrix { data, real }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            data: DMatrix::identity(n, n),
            real: true,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            data: DMatrix::zeros(n, n),
            real: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_real_input(&self) -> bool {
        self.real
    }

    pub fn as_complex(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_complex(self) -> DMatrix<C64> {
        self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    /// Real parts of the entries. Only meaningful when `is_real_input` holds
    /// or after a successful [`Matrix::coerce_real`].
    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|v| v.re)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.im.abs()))
    }

    /// Drops imaginary parts no larger than `tol` and marks the matrix real.
    pub fn coerce_real(&self, tol: f64) -> Result<Matrix> {
        let residue = self.max_imag();
        if residue > tol {
            return Err(Error::ConjugatePairing {
                residue,
                tolerance: tol,
            });
        }
        Ok(Matrix {
            data: self.data.map(|v| C64::new(v.re, 0.0)),
            real: true,
        })
    }

    /// Frobenius norm, accumulated in column-major order.
    pub fn norm(&self) -> f64 {
        frobenius(&self.data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix {
            data: &self.data * &other.data,
            real: self.real && other.real,
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            data: &self.data + &other.data,
            real: self.real && other.real,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            data: &self.data - &other.data,
            real: self.real && other.real,
        }
    }

    pub fn scale(&self, c: C64) -> Matrix {
        Matrix {
            data: &self.data * c,
            real: self.real && c.im == 0.0,
        }
    }

    /// `M − λI`.
    pub fn shift(&self, lambda: C64) -> Matrix {
        let mut data = self.data.clone();
        for i in 0..self.dim() {
            data[(i, i)] -= lambda;
        }
        Matrix {
            data,
            real: self.real && lambda.im == 0.0,
        }
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            data: self.data.map(|v| v.conj()),
            real: self.real,
        }
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, k: u32) -> Matrix {
        let mut result = Matrix::identity(self.dim());
        result.real = self.real;
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.data * v
    }

    /// Frobenius distance `‖self − other‖`.
    pub fn dist(&self, other: &Matrix) -> f64 {
        frobenius(&(&self.data - &other.data))
    }
}

pub(crate) fn frobenius(m: &DMatrix<C64>) -> f64 {
    let mut acc = 0.0;
    for v in m.iter() {
        acc += v.norm_sqr();
    }
    acc.sqrt()
}

pub(crate) fn vec_norm(v: &DVector<C64>) -> f64 {
    let mut acc = 0.0;
    for x in v.iter() {
        acc += x.norm_sqr();
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_square_and_non_finite() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0; 6]);
        assert!(matches!(Matrix::from_real(&m), Err(Error::Input(_))));
        assert!(matches!(
            Matrix::from_rows(2, &[1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::Input(_))
        ));
        assert!(Matrix::from_rows(2, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = Matrix::from_rows(2, &[1.0, 1.0, 0.0, 0.5]).unwrap();
        let p3 = m.mul(&m).mul(&m);
        assert!(m.pow(3).dist(&p3) < 1e-15);
        assert_eq!(m.pow(0), Matrix::identity(2));
    }

    #[test]
    fn coerce_real_guards_residue() {
        let mut d = DMatrix::identity(2, 2);
        d[(0, 1)] = C64::new(0.0, 1e-3);
        let m = Matrix::from_complex(d).unwrap();
        assert!(matches!(
            m.coerce_real(1e-9),
            Err(Error::ConjugatePairing { .. })
        ));
        assert!(m.coerce_real(1e-2).unwrap().is_real_input());
    }
}
