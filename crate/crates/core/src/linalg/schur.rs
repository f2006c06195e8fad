//! Complex Schur triangularization `A = Q T Q*` and diagonal reordering.
//!
//! Householder reduction to Hessenberg form followed by single-shift implicit
//! QR sweeps with Wilkinson shifts. Reordering swaps adjacent diagonal
//! entries with unitary plane rotations, so `Q` stays unitary throughout.

use nalgebra::DMatrix;

use super::matrix::C64;
use crate::{Error, Result};

const ITERS_PER_EIGENVALUE: usize = 40;

#[derive(Debug, Clone)]
pub struct ComplexSchur {
    /// Upper triangular factor.
    pub t: DMatrix<C64>,
    /// Unitary factor; `A = Q T Q*`.
    pub q: DMatrix<C64>,
    /// Total QR sweeps spent.
    pub sweeps: usize,
}

/// Unitary 2×2 `G` whose first column is `(x, y)/‖(x, y)‖`, so `G*(x, y) = (r, 0)`.
#[derive(Debug, Clone, Copy)]
struct Rot {
    g00: C64,
    g01: C64,
    g10: C64,
    g11: C64,
}

impl Rot {
    fn annihilating(x: C64, y: C64) -> Rot {
        let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
        if n == 0.0 {
            return Rot {
                g00: C64::new(1.0, 0.0),
                g01: C64::new(0.0, 0.0),
                g10: C64::new(0.0, 0.0),
                g11: C64::new(1.0, 0.0),
            };
        }
        let (a, b) = (x / n, y / n);
        Rot {
            g00: a,
            g01: -b.conj(),
            g10: b,
            g11: a.conj(),
        }
    }

    /// Rows `(i, j)` ← `G*` rows, over columns `cols`.
    fn left_adjoint(&self, m: &mut DMatrix<C64>, i: usize, j: usize, cols: std::ops::Range<usize>) {
        for c in cols {
            let a = m[(i, c)];
            let b = m[(j, c)];
            m[(i, c)] = self.g00.conj() * a + self.g10.conj() * b;
            m[(j, c)] = self.g01.conj() * a + self.g11.conj() * b;
        }
    }

    /// Columns `(i, j)` ← columns times `G`, over rows `rows`.
    fn right(&self, m: &mut DMatrix<C64>, i: usize, j: usize, rows: std::ops::Range<usize>) {
        for r in rows {
            let a = m[(r, i)];
            let b = m[(r, j)];
            m[(r, i)] = a * self.g00 + b * self.g10;
            m[(r, j)] = a * self.g01 + b * self.g11;
        }
    }
}

fn hessenberg(a: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = DMatrix::<C64>::identity(n, n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut alpha_sq = 0.0;
        for i in k + 1..n {
            alpha_sq += h[(i, k)].norm_sqr();
        }
        let alpha = alpha_sq.sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase·‖x‖·e1 avoids cancellation.
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // H ← (I − β v v*) H
        for c in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, i) in (k + 1..n).enumerate() {
                s += v[idx].conj() * h[(i, c)];
            }
            s *= beta;
            for (idx, i) in (k + 1..n).enumerate() {
                h[(i, c)] -= v[idx] * s;
            }
        }
        // H ← H (I − β v v*), Q ← Q (I − β v v*)
        for m in [&mut h, &mut q] {
            for r in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (idx, j) in (k + 1..n).enumerate() {
                    s += m[(r, j)] * v[idx];
                }
                s *= beta;
                for (idx, j) in (k + 1..n).enumerate() {
                    m[(r, j)] -= s * v[idx].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Eigenvalue of the trailing 2×2 block `[[a, b], [c, d]]` nearest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Computes the complex Schur form of a square matrix.
pub fn complex_schur(a: &DMatrix<C64>) -> Result<ComplexSchur> {
    let n = a.nrows();
    let (mut h, mut q) = hessenberg(a);
    let eps = f64::EPSILON;
    let mut hnorm = 0.0f64;
    for v in h.iter() {
        hnorm = hnorm.max(v.norm());
    }
    let small = f64::MIN_POSITIVE * (n as f64) / eps;

    let mut sweeps = 0usize;
    let mut ihi = n.saturating_sub(1);
    let mut its = 0usize;
    let max_its = ITERS_PER_EIGENVALUE * n.max(1);
    while ihi > 0 {
        // Locate the active unreduced block [l, ihi].
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= eps * diag || sub <= eps * hnorm || sub <= small {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        if its >= max_its {
            return Err(Error::Numeric {
                message: format!(
                    "Schur QR iteration did not converge: {its} sweeps on block [{l}, {ihi}], {sweeps} sweeps total"
                ),
                residual: Some(h[(ihi, ihi - 1)].norm()),
            });
        }
        its += 1;
        sweeps += 1;

        let mu = if its % 10 == 0 {
            // Exceptional shift to break cycles.
            h[(ihi, ihi)] + C64::new(0.75 * h[(ihi, ihi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        // Implicit single-shift sweep on rows/cols l..=ihi.
        for k in l..ihi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let g = Rot::annihilating(x, y);
            let col_start = if k == l { l } else { k - 1 };
            g.left_adjoint(&mut h, k, k + 1, col_start..n);
            let row_end = (k + 3).min(ihi + 1);
            g.right(&mut h, k, k + 1, 0..row_end);
            g.right(&mut q, k, k + 1, 0..n);
            if k > l {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
        }
    }
    // Clear anything below the diagonal left by rounding.
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(ComplexSchur { t: h, q, sweeps })
}

impl ComplexSchur {
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.t[(i, i)]).collect()
    }

    /// Swaps diagonal entries `k` and `k + 1`.
    pub fn swap_adjacent(&mut self, k: usize) {
        let n = self.dim();
        let a = self.t[(k, k)];
        let b = self.t[(k, k + 1)];
        let c = self.t[(k + 1, k + 1)];
        // Eigenvector of the 2×2 block for eigenvalue c is (b, c − a).
        let g = Rot::annihilating(b, c - a);
        g.left_adjoint(&mut self.t, k, k + 1, k..n);
        g.right(&mut self.t, k, k + 1, 0..k + 2);
        g.right(&mut self.q, k, k + 1, 0..n);
        self.t[(k + 1, k)] = C64::new(0.0, 0.0);
        self.t[(k, k)] = c;
        self.t[(k + 1, k + 1)] = a;
    }

    /// Stable reordering bringing every position with `lead[i] == true` to
    /// the front, preserving relative order within each group. Returns the
    /// number of leading positions.
    pub fn reorder_leading(&mut self, lead: &[bool]) -> usize {
        let mut flags = lead.to_vec();
        let n = flags.len();
        let mut placed = 0;
        for i in 0..n {
            if flags[i] {
                let mut k = i;
                while k > placed {
                    self.swap_adjacent(k - 1);
                    flags.swap(k - 1, k);
                    k -= 1;
                }
                placed += 1;
            }
        }
        placed
    }
}
