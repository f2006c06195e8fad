//! Vector sequences on a finite time window and the lag-operator algebra
//! acting on them.
//!
//! A [`TimeWindowSequence`] stores values for `t_min ≤ t ≤ t_max` (with
//! `t_min ≤ 0 ≤ t_max`) and reads as zero everywhere else. The cumulation and
//! residual operators only reference times between 0 and `t`, so they are
//! exact on any window containing 0; the backshift and difference operators
//! see a zero left neighbour at `t_min`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DVector;

use crate::linalg::{normalize_angle, vec_norm, Matrix, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeWindowSequence {
    t_min: i64,
    dim: usize,
    values: Vec<DVector<C64>>,
    is_real: bool,
}

/// A frequency `θ ∈ (−π, π]` together with its unit root `e^{−iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    theta: f64,
    unit_root: C64,
}

impl Frequency {
    /// The angles 0, π and ±π/2 get exact unit roots, so operators at those
    /// frequencies introduce no rounding in the phase.
    pub fn new(theta: f64) -> Self {
        let theta = normalize_angle(theta);
        let unit_root = if theta == 0.0 {
            C64::new(1.0, 0.0)
        } else if theta == PI {
            C64::new(-1.0, 0.0)
        } else if theta == FRAC_PI_2 {
            C64::new(0.0, -1.0)
        } else if theta == -FRAC_PI_2 {
            C64::new(0.0, 1.0)
        } else {
            C64::from_polar(1.0, -theta)
        };
        Frequency { theta, unit_root }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `e^{−iθ}`
    pub fn unit_root(&self) -> C64 {
        self.unit_root
    }

    /// `e^{−iθt}`
    pub fn root_pow(&self, t: i64) -> C64 {
        let exact = self.unit_root.re.fract() == 0.0 && self.unit_root.im.fract() == 0.0;
        if exact {
            let q = t.rem_euclid(4) as i32;
            self.unit_root.powi(q)
        } else {
            C64::from_polar(1.0, -self.theta * t as f64)
        }
    }

    pub fn is_real(&self) -> bool {
        self.theta == 0.0 || self.theta == PI
    }
}

fn zero_vec(dim: usize) -> DVector<C64> {
    DVector::from_element(dim, C64::new(0.0, 0.0))
}

impl TimeWindowSequence {
    pub fn zeros(t_min: i64, t_max: i64, dim: usize) -> Result<Self> {
        check_window(t_min, t_max)?;
        if dim == 0 {
            return Err(Error::Input("sequence dimension must be positive".into()));
        }
        let len = (t_max - t_min + 1) as usize;
        Ok(TimeWindowSequence {
            t_min,
            dim,
            values: vec![zero_vec(dim); len],
            is_real: true,
        })
    }

    pub fn from_complex(t_min: i64, values: Vec<DVector<C64>>) -> Result<Self> {
        let dim = values.first().map(|v| v.len()).unwrap_or(0);
        let t_max = t_min + values.len() as i64 - 1;
        check_window(t_min, t_max)?;
        if dim == 0 || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Input("sequence vectors must share a positive dimension".into()));
        }
        if values
            .iter()
            .any(|v| v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())))
        {
            return Err(Error::Input("sequence has non-finite entries".into()));
        }
        let is_real = values.iter().all(|v| v.iter().all(|z| z.im == 0.0));
        Ok(TimeWindowSequence {
            t_min,
            dim,
            values,
            is_real,
        })
    }

    pub fn from_real(t_min: i64, values: Vec<DVector<f64>>) -> Result<Self> {
        Self::from_complex(
            t_min,
            values.into_iter().map(|v| v.map(|x| C64::new(x, 0.0))).collect(),
        )
    }

    /// Builds a real sequence from row-major data: one row of `dim` values per time.
    pub fn from_real_rows(t_min: i64, dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Input(format!("every row must have {dim} values")));
        }
        Self::from_real(
            t_min,
            rows.iter().map(|r| DVector::from_column_slice(r)).collect(),
        )
    }

    pub fn from_fn(
        t_min: i64,
        t_max: i64,
        dim: usize,
        mut f: impl FnMut(i64) -> DVector<C64>,
    ) -> Result<Self> {
        check_window(t_min, t_max)?;
        let values: Vec<_> = (t_min..=t_max).map(&mut f).collect();
        if values.iter().any(|v| v.len() != dim) {
            return Err(Error::Input(format!("every value must have dimension {dim}")));
        }
        Self::from_complex(t_min, values)
    }

    /// `v` at time `at`, zero elsewhere.
    pub fn delta(t_min: i64, t_max: i64, at: i64, v: &DVector<f64>) -> Result<Self> {
        let mut s = Self::zeros(t_min, t_max, v.len())?;
        s.set(at, v.map(|x| C64::new(x, 0.0)))?;
        Ok(s)
    }

    pub fn t_min(&self) -> i64 {
        self.t_min
    }

    pub fn t_max(&self) -> i64 {
        self.t_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn times(&self) -> std::ops::RangeInclusive<i64> {
        self.t_min..=self.t_max()
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= self.t_min && t <= self.t_max()
    }

    /// Value at `t`; zero outside the window.
    pub fn at(&self, t: i64) -> DVector<C64> {
        if self.contains(t) {
            self.values[(t - self.t_min) as usize].clone()
        } else {
            zero_vec(self.dim)
        }
    }

    pub fn get(&self, t: i64) -> Option<&DVector<C64>> {
        if self.contains(t) {
            Some(&self.values[(t - self.t_min) as usize])
        } else {
            None
        }
    }

    pub fn set(&mut self, t: i64, v: DVector<C64>) -> Result<()> {
        if !self.contains(t) {
            return Err(Error::Input(format!(
                "time {t} outside window [{}, {}]",
                self.t_min,
                self.t_max()
            )));
        }
        if v.len() != self.dim {
            return Err(Error::Input(format!(
                "value has dimension {}, sequence has {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|z| z.im != 0.0) {
            self.is_real = false;
        }
        self.values[(t - self.t_min) as usize] = v;
        Ok(())
    }

    pub fn values(&self) -> &[DVector<C64>] {
        &self.values
    }

    /// Real parts of every value, one row per time.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|v| v.iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0, |a, z| a.max(z.im.abs()))
    }

    /// `max_t ‖s_t‖`
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(vec_norm(v)))
    }

    pub fn norm_at(&self, t: i64) -> f64 {
        self.get(t).map(vec_norm).unwrap_or(0.0)
    }

    /// `max_t ‖self_t − other_t‖` over the union of both windows.
    pub fn max_dist(&self, other: &TimeWindowSequence) -> f64 {
        let lo = self.t_min.min(other.t_min);
        let hi = self.t_max().max(other.t_max());
        (lo..=hi).fold(0.0, |a, t| a.max(vec_norm(&(self.at(t) - other.at(t)))))
    }

    /// Same as [`max_dist`](Self::max_dist) restricted to `t_min < t ≤ t_max`.
    pub fn max_dist_interior(&self, other: &TimeWindowSequence) -> f64 {
        (self.t_min + 1..=self.t_max())
            .fold(0.0, |a, t| a.max(vec_norm(&(self.at(t) - other.at(t)))))
    }

    /// Smallest and largest `t` with a nonzero value, if any.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz = |v: &DVector<C64>| v.iter().any(|z| z.re != 0.0 || z.im != 0.0);
        let first = self.values.iter().position(nz)?;
        let last = self.values.iter().rposition(nz)?;
        Some((self.t_min + first as i64, self.t_min + last as i64))
    }

    /// Copy of the sequence on another window (zero-extended or cropped).
    pub fn rewindow(&self, t_min: i64, t_max: i64) -> Result<Self> {
        check_window(t_min, t_max)?;
        let mut out = Self::from_fn(t_min, t_max, self.dim, |t| self.at(t))?;
        out.is_real = self.is_real;
        Ok(out)
    }

    fn same_shape(&self, other: &TimeWindowSequence) -> Result<()> {
        if self.t_min != other.t_min || self.len() != other.len() || self.dim != other.dim {
            return Err(Error::Input(format!(
                "sequence shapes differ: [{}, {}]×{} vs [{}, {}]×{}",
                self.t_min,
                self.t_max(),
                self.dim,
                other.t_min,
                other.t_max(),
                other.dim
            )));
        }
        Ok(())
    }

    fn map_values(&self, is_real: bool, f: impl Fn(i64, &DVector<C64>) -> DVector<C64>) -> Self {
        TimeWindowSequence {
            t_min: self.t_min,
            dim: self.dim,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| f(self.t_min + i as i64, v))
                .collect(),
            is_real,
        }
    }
}

fn check_window(t_min: i64, t_max: i64) -> Result<()> {
    if !(t_min <= 0 && 0 <= t_max) {
        return Err(Error::Input(format!(
            "window [{t_min}, {t_max}] must contain t = 0"
        )));
    }
    Ok(())
}

/// `(Bs)_t = s_{t−1}`
pub fn backshift(s: &TimeWindowSequence) -> TimeWindowSequence {
    s.map_values(s.is_real, |t, _| s.at(t - 1))
}

/// `(D_θ s)_t = s_t − e^{−iθ} s_{t−1}`
pub fn diff_theta(s: &TimeWindowSequence, f: Frequency) -> TimeWindowSequence {
    let l = f.unit_root();
    s.map_values(s.is_real && f.is_real(), |t, v| v - s.at(t - 1) * l)
}

/// Cumulation anchored at zero: `(C_θ s)_0 = 0`,
/// `(C_θ s)_t = Σ_{k=1..t} e^{−iθ(t−k)} s_k` for `t > 0` and
/// `(C_θ s)_t = −Σ_{k=0..−t−1} e^{−iθ(t+k)} s_{−k}` for `t < 0`.
///
/// Evaluated by the equivalent recursions `c_t = e^{−iθ}c_{t−1} + s_t`
/// (`t > 0`) and `c_{t−1} = e^{iθ}(c_t − s_t)` (`t ≤ 0`).
pub fn cum_theta(s: &TimeWindowSequence, f: Frequency) -> TimeWindowSequence {
    let l = f.unit_root();
    let li = l.conj();
    let mut out = vec![zero_vec(s.dim); s.len()];
    let idx = |t: i64| (t - s.t_min) as usize;
    let mut c = zero_vec(s.dim);
    for t in 1..=s.t_max() {
        c = &c * l + &s.values[idx(t)];
        out[idx(t)] = c.clone();
    }
    let mut c = zero_vec(s.dim);
    for t in (s.t_min + 1..=0).rev() {
        c = (&c - &s.values[idx(t)]) * li;
        out[idx(t - 1)] = c.clone();
    }
    TimeWindowSequence {
        t_min: s.t_min,
        dim: s.dim,
        values: out,
        is_real: s.is_real && f.is_real(),
    }
}

/// `(R_θ v)_t = e^{−iθt} v` on `[t_min, t_max]`.
pub fn residual_theta(
    v: &DVector<C64>,
    f: Frequency,
    t_min: i64,
    t_max: i64,
) -> Result<TimeWindowSequence> {
    let dim = v.len();
    let mut s = TimeWindowSequence::from_fn(t_min, t_max, dim, |t| v * f.root_pow(t))?;
    s.is_real = f.is_real() && v.iter().all(|z| z.im == 0.0);
    Ok(s)
}

/// `t ↦ M s_t`
pub fn apply_matrix(m: &Matrix, s: &TimeWindowSequence) -> Result<TimeWindowSequence> {
    if m.dim() != s.dim {
        return Err(Error::Input(format!(
            "matrix dimension {} does not match sequence dimension {}",
            m.dim(),
            s.dim
        )));
    }
    Ok(s.map_values(s.is_real && m.is_real_input(), |_, v| m.apply(v)))
}

pub fn add(a: &TimeWindowSequence, b: &TimeWindowSequence) -> Result<TimeWindowSequence> {
    a.same_shape(b)?;
    Ok(TimeWindowSequence {
        t_min: a.t_min,
        dim: a.dim,
        values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
        is_real: a.is_real && b.is_real,
    })
}

pub fn sub(a: &TimeWindowSequence, b: &TimeWindowSequence) -> Result<TimeWindowSequence> {
    a.same_shape(b)?;
    Ok(TimeWindowSequence {
        t_min: a.t_min,
        dim: a.dim,
        values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
        is_real: a.is_real && b.is_real,
    })
}

pub fn scale(c: C64, s: &TimeWindowSequence) -> TimeWindowSequence {
    s.map_values(s.is_real && c.im == 0.0, |_, v| v * c)
}

/// Drops imaginary parts, failing if any exceeds `tol_imag`.
pub fn real_part(s: &TimeWindowSequence, tol_imag: f64) -> Result<TimeWindowSequence> {
    let residue = s.max_imag();
    if residue > tol_imag {
        return Err(Error::ConjugatePairing {
            residue,
            tolerance: tol_imag,
        });
    }
    Ok(s.map_values(true, |_, v| v.map(|z| C64::new(z.re, 0.0))))
}
