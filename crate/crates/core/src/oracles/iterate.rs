use nalgebra::{DMatrix, DVector};

use crate::linalg::Matrix;
use crate::seq::TimeWindowSequence;
use crate::{Error, Result};

/// Runs `x_t = Φx_{t−1} + ε_t` outward from `x_anchor = value`: forward in
/// time directly and backward through `x_{t−1} = Φ^{−1}(x_t − ε_t)`.
///
/// The inverse comes from an LU factorization, so this oracle shares no code
/// with the spectral route.
pub fn iterate_recursion(
    phi: &Matrix,
    anchor_time: i64,
    anchor_value: &DVector<f64>,
    eps: &TimeWindowSequence,
) -> Result<TimeWindowSequence> {
    let n = phi.dim();
    if !phi.is_real_input() {
        return Err(Error::Input("iteration oracle needs a real Φ".into()));
    }
    if anchor_value.len() != n || eps.dim() != n {
        return Err(Error::Input(format!("dimensions must equal {n}")));
    }
    if !eps.contains(anchor_time) {
        return Err(Error::Input(format!("anchor time {anchor_time} outside the window")));
    }
    let a = phi.real_part();
    let e = |t: i64| -> DVector<f64> { eps.at(t).map(|z| z.re) };
    let mut out: Vec<DVector<f64>> = vec![DVector::zeros(n); eps.len()];
    let idx = |t: i64| (t - eps.t_min()) as usize;
    out[idx(anchor_time)] = anchor_value.clone();
    for t in anchor_time + 1..=eps.t_max() {
        out[idx(t)] = &a * &out[idx(t - 1)] + e(t);
    }
    if anchor_time > eps.t_min() {
        let inv: DMatrix<f64> = a.clone().lu().try_inverse().ok_or_else(|| {
            Error::Precondition("backward iteration needs an invertible Φ".into())
        })?;
        for t in (eps.t_min() + 1..=anchor_time).rev() {
            out[idx(t - 1)] = &inv * (&out[idx(t)] - e(t));
        }
    }
    TimeWindowSequence::from_real(eps.t_min(), out)
}
