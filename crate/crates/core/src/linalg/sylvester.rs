use nalgebra::DMatrix;

use super::matrix::{frobenius, C64};
use crate::{Error, Result};

/// Solves `A Y − Y B = C` for upper triangular `A` (m×m) and `B` (p×p) with
/// disjoint spectra, column by column with back substitution.
///
/// Returns the solution together with the relative residual
/// `‖A Y − Y B − C‖ / (‖C‖ + (‖A‖ + ‖B‖)‖Y‖)`; errors when that exceeds
/// `max_rel_residual` or a diagonal pivot vanishes.
pub fn solve_triangular_sylvester(
    a: &DMatrix<C64>,
    b: &DMatrix<C64>,
    c: &DMatrix<C64>,
    max_rel_residual: f64,
) -> Result<DMatrix<C64>> {
    let m = a.nrows();
    let p = b.nrows();
    let mut y = DMatrix::<C64>::zeros(m, p);
    let scale = frobenius(a) + frobenius(b);
    let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    for j in 0..p {
        let mut rhs: Vec<C64> = (0..m).map(|i| c[(i, j)]).collect();
        for k in 0..j {
            let bkj = b[(k, j)];
            if bkj != C64::new(0.0, 0.0) {
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r += y[(i, k)] * bkj;
                }
            }
        }
        let shift = b[(j, j)];
        for i in (0..m).rev() {
            let mut s = rhs[i];
            for k in i + 1..m {
                s -= a[(i, k)] * y[(k, j)];
            }
            let pivot = a[(i, i)] - shift;
            if pivot.norm() <= tiny {
                return Err(Error::Numeric {
                    message: format!("Sylvester pivot {i},{j} vanishes: spectra are not separated"),
                    residual: None,
                });
            }
            y[(i, j)] = s / pivot;
        }
    }
    let resid = frobenius(&(a * &y - &y * b - c));
    let denom = frobenius(c) + scale * frobenius(&y);
    let rel = if denom == 0.0 { 0.0 } else { resid / denom };
    if !(rel <= max_rel_residual) {
        return Err(Error::Numeric {
            message: format!("Sylvester residual {rel:e} above {max_rel_residual:e}"),
            residual: Some(rel),
        });
    }
    Ok(y)
}
