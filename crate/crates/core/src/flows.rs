//! The six flows of a solution to `x_t = Φ x_{t−1} + ε_t`.
//!
//! Every solution splits as
//!
//! ```text
//! x = predetermined_forward + forward_eps        (P_{•→} x)
//!   + predetermined_backward + backward_eps      (P_← x)
//!   + predetermined_outward + outward_eps        (P_↔ x)
//! ```
//!
//! where the predetermined parts are fixed by the initial conditions
//! `(v_→, v_←, v_↔)` and the ε-flows by the innovations alone. When ε vanishes
//! outside a known sub-window every series here is a finite sum, so both
//! [`synthesize`] and [`recover_initial_conditions`] are exact up to rounding.

use nalgebra::DVector;
use serde::Serialize;

use crate::linalg::{
    complex_schur, eig_decompose, vec_norm, Matrix, SignedPowers, SpectralClassification,
    SpectralDecomposition, Subset, C64,
};
use crate::seq::{
    add, apply_matrix, backshift, cum_theta, real_part, residual_theta, sub, Frequency,
    TimeWindowSequence,
};
use crate::{Error, Result, Tolerances};

/// Inclusive time window `[t_min, t_max]` containing 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn new(t_min: i64, t_max: i64) -> Result<Self> {
        if !(t_min <= 0 && 0 <= t_max) {
            return Err(Error::Input(format!("window [{t_min}, {t_max}] must contain t = 0")));
        }
        Ok(Window { t_min, t_max })
    }

    pub fn of(s: &TimeWindowSequence) -> Self {
        Window {
            t_min: s.t_min(),
            t_max: s.t_max(),
        }
    }

    pub fn len(&self) -> usize {
        (self.t_max - self.t_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportMode {
    /// ε is zero outside `[s_min, s_max]`; all sums are finite and exact.
    ExactCompactSupport,
    /// ε decays; infinite sums are truncated by a geometric tail bound.
    TruncatedDecay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupportInfo {
    pub s_min: i64,
    pub s_max: i64,
    pub mode: SupportMode,
}

impl SupportInfo {
    /// Compact support read off the nonzero entries of `eps`. A zero sequence
    /// is treated as supported on `{0}`.
    pub fn compact(eps: &TimeWindowSequence) -> Self {
        let (s_min, s_max) = eps.support().unwrap_or((0, 0));
        SupportInfo {
            s_min,
            s_max,
            mode: SupportMode::ExactCompactSupport,
        }
    }

    pub fn decay(eps: &TimeWindowSequence) -> Self {
        SupportInfo {
            s_min: eps.t_min(),
            s_max: eps.t_max(),
            mode: SupportMode::TruncatedDecay,
        }
    }

    pub fn validate(&self, eps: &TimeWindowSequence) -> Result<()> {
        if self.mode == SupportMode::TruncatedDecay {
            return Ok(());
        }
        if !(eps.t_min() <= self.s_min && self.s_min <= self.s_max && self.s_max <= eps.t_max()) {
            return Err(Error::Input(format!(
                "support [{}, {}] must lie inside the window [{}, {}]",
                self.s_min,
                self.s_max,
                eps.t_min(),
                eps.t_max()
            )));
        }
        if let Some((lo, hi)) = eps.support() {
            if lo < self.s_min || hi > self.s_max {
                return Err(Error::Input(format!(
                    "ε is nonzero on [{lo}, {hi}], outside the declared support [{}, {}]",
                    self.s_min, self.s_max
                )));
            }
        }
        Ok(())
    }
}

/// Initial conditions `(v_→, v_←, v_↔)` of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditions {
    pub v_forward: DVector<f64>,
    pub v_backward: DVector<f64>,
    pub v_outward: DVector<f64>,
}

impl InitialConditions {
    pub fn zeros(n: usize) -> Self {
        InitialConditions {
            v_forward: DVector::zeros(n),
            v_backward: DVector::zeros(n),
            v_outward: DVector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.v_forward.len()
    }

    /// Largest componentwise difference between two triples.
    pub fn max_diff(&self, other: &InitialConditions) -> f64 {
        let d = |a: &DVector<f64>, b: &DVector<f64>| (a - b).amax();
        d(&self.v_forward, &other.v_forward)
            .max(d(&self.v_backward, &other.v_backward))
            .max(d(&self.v_outward, &other.v_outward))
    }
}

/// The unit-circle eigenvalue `e^{−iθ}` with its projector and index.
#[derive(Debug, Clone)]
pub struct UnitComponent {
    pub frequency: Frequency,
    pub cluster: usize,
    pub index: usize,
    /// `P_θ`
    pub projector: Matrix,
    /// `(Φ − e^{−iθ}I) P_θ`
    pub nilpotent: Matrix,
}

impl UnitComponent {
    pub fn new(phi: &Matrix, theta: f64, index: usize, projector: Matrix) -> Self {
        let frequency = Frequency::new(theta);
        let nilpotent = phi.shift(frequency.unit_root()).mul(&projector);
        UnitComponent {
            frequency,
            cluster: usize::MAX,
            index,
            projector,
            nilpotent,
        }
    }
}

/// Largest recursion residual `‖x_t − Φx_{t−1} − ε_t‖` over `t_min < t ≤ t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecursionReport {
    pub max_residual: f64,
    pub at: Option<i64>,
}

impl RecursionReport {
    pub fn check(&self, tolerance: f64) -> Result<()> {
        if self.max_residual > tolerance {
            return Err(Error::Recursion {
                t: self.at.unwrap_or(0),
                residual: self.max_residual,
                tolerance,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryReport {
    /// `n` used for `v_→ = Φ^n P_→ x_{−n}`, if that subspace is nontrivial.
    pub forward_anchor: Option<i64>,
    /// `n` used for `v_← = Φ^{−n} P_← x_n`, if that subspace is nontrivial.
    pub backward_anchor: Option<i64>,
    /// Disagreement between the anchor and the next admissible one.
    pub discrepancy: f64,
    /// False in decay mode, where the limits are only approximated.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_recursion_residual: f64,
    pub recursion_residual_at: Option<i64>,
    pub max_imag_residue: f64,
    /// Largest violation among the component and total-sum identities.
    pub max_component_residual: f64,
    pub recovery_discrepancy: f64,
    pub recovery_exact: bool,
    pub scale: f64,
    pub tol_flow_abs: f64,
}

#[derive(Debug, Clone)]
pub struct FlowDecomposition {
    pub predetermined_forward: TimeWindowSequence,
    pub forward_eps: TimeWindowSequence,
    pub predetermined_backward: TimeWindowSequence,
    pub backward_eps: TimeWindowSequence,
    pub predetermined_outward: TimeWindowSequence,
    pub outward_eps: TimeWindowSequence,
    pub initial: InitialConditions,
    pub residual_report: ResidualReport,
    pub classification: SpectralClassification,
    pub tolerances: Tolerances,
}

impl FlowDecomposition {
    /// `(name, flow)` in reporting order.
    pub fn flows(&self) -> [(&'static str, &TimeWindowSequence); 6] {
        [
            ("predetermined_forward", &self.predetermined_forward),
            ("forward_eps", &self.forward_eps),
            ("predetermined_backward", &self.predetermined_backward),
            ("backward_eps", &self.backward_eps),
            ("predetermined_outward", &self.predetermined_outward),
            ("outward_eps", &self.outward_eps),
        ]
    }

    pub fn total(&self) -> Result<TimeWindowSequence> {
        sum_flows(&self.flows().map(|(_, s)| s))
    }
}

fn sum_flows(parts: &[&TimeWindowSequence]) -> Result<TimeWindowSequence> {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = add(&acc, p)?;
    }
    Ok(acc)
}

/// `max(1, max‖x_t‖, max‖ε_t‖)·max(1, ‖Φ‖)`, the reference size for `tol_flow`.
pub fn flow_scale(phi: &Matrix, seqs: &[&TimeWindowSequence]) -> f64 {
    let s = seqs.iter().fold(1.0f64, |a, s| a.max(s.sup_norm()));
    s * phi.norm().max(1.0)
}

fn check_dim(phi: &Matrix, s: &TimeWindowSequence, what: &str) -> Result<()> {
    if s.dim() != phi.dim() {
        return Err(Error::Input(format!(
            "{what} has dimension {}, Φ is {}x{}",
            s.dim(),
            phi.dim(),
            phi.dim()
        )));
    }
    Ok(())
}

fn to_real(s: TimeWindowSequence, tol: &Tolerances) -> Result<TimeWindowSequence> {
    let guard = tol.imag * s.sup_norm().max(1.0);
    real_part(&s, guard)
}

fn complex_vec(v: &DVector<f64>) -> DVector<C64> {
    v.map(|x| C64::new(x, 0.0))
}

fn real_vec(v: &DVector<C64>, tol: &Tolerances) -> Result<DVector<f64>> {
    let residue = v.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    let guard = tol.imag * vec_norm(v).max(1.0);
    if residue > guard {
        return Err(Error::ConjugatePairing {
            residue,
            tolerance: guard,
        });
    }
    Ok(v.map(|z| z.re))
}

fn raw_spectral_radius(m: &Matrix) -> Result<f64> {
    let s = complex_schur(m.as_complex())?;
    Ok(s.eigenvalues().iter().fold(0.0, |a, z| a.max(z.norm())))
}

fn require_contraction(m: &Matrix, what: &str, tol: &Tolerances) -> Result<f64> {
    let rho = raw_spectral_radius(m)?;
    if rho >= 1.0 - tol.unit {
        return Err(Error::Classification(format!(
            "spectral radius of {what} is {rho:.6e}, not below 1"
        )));
    }
    Ok(rho)
}

/// Smallest `K` with `‖A^K‖·sup‖ε‖/(1 − ρ̂) < tol_trunc`, capped at `max_k`.
fn truncation_order(a: &Matrix, rho: f64, sup: f64, tol_trunc: f64, max_k: usize) -> usize {
    let rho_hat = rho + 0.5 * (1.0 - rho);
    let mut p = Matrix::identity(a.dim());
    for k in 0..max_k {
        if p.norm() * sup / (1.0 - rho_hat) < tol_trunc {
            return k;
        }
        p = p.mul(a);
    }
    max_k
}

fn forward_impl(
    a: &Matrix,
    rho: f64,
    p: &Matrix,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    let pe = apply_matrix(p, eps)?;
    let w = Window::of(eps);
    let mut out = TimeWindowSequence::zeros(w.t_min, w.t_max, eps.dim())?;
    match support.mode {
        SupportMode::ExactCompactSupport => {
            let mut f = DVector::from_element(eps.dim(), C64::new(0.0, 0.0));
            for t in w.t_min..=w.t_max {
                f = a.apply(&f) + pe.at(t);
                out.set(t, f.clone())?;
            }
        }
        SupportMode::TruncatedDecay => {
            let k_max = truncation_order(a, rho, eps.sup_norm(), tol.trunc, w.len());
            let mut powers = vec![Matrix::identity(a.dim())];
            for k in 1..=k_max {
                powers.push(powers[k - 1].mul(a));
            }
            for t in w.t_min..=w.t_max {
                let mut f = DVector::from_element(eps.dim(), C64::new(0.0, 0.0));
                for (k, pk) in powers.iter().enumerate() {
                    let s = t - k as i64;
                    if s < w.t_min {
                        break;
                    }
                    f += pk.apply(pe.get(s).unwrap());
                }
                out.set(t, f)?;
            }
        }
    }
    to_real(out, tol)
}

fn backward_impl(
    b: &Matrix,
    rho: f64,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    let w = Window::of(eps);
    let mut out = TimeWindowSequence::zeros(w.t_min, w.t_max, eps.dim())?;
    match support.mode {
        SupportMode::ExactCompactSupport => {
            let mut g = DVector::from_element(eps.dim(), C64::new(0.0, 0.0));
            for t in (w.t_min..w.t_max).rev() {
                g = b.apply(&(g - eps.at(t + 1)));
                out.set(t, g.clone())?;
            }
        }
        SupportMode::TruncatedDecay => {
            let k_max = truncation_order(b, rho, eps.sup_norm(), tol.trunc, w.len());
            let mut powers = vec![b.clone()];
            for k in 1..k_max {
                powers.push(powers[k - 1].mul(b));
            }
            for t in w.t_min..=w.t_max {
                let mut g = DVector::from_element(eps.dim(), C64::new(0.0, 0.0));
                for (k, pk) in powers.iter().enumerate() {
                    let s = t + k as i64 + 1;
                    if s > w.t_max {
                        break;
                    }
                    g -= pk.apply(eps.get(s).unwrap());
                }
                out.set(t, g)?;
            }
        }
    }
    to_real(out, tol)
}

/// Forward ε-flow `Σ_{k≥0} Φ^k P_{•→} ε_{t−k}`.
pub fn forward_eps_flow(
    phi: &Matrix,
    p_stable: &Matrix,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    check_dim(phi, eps, "ε")?;
    support.validate(eps)?;
    let a = phi.mul(p_stable);
    let rho = require_contraction(&a, "ΦP_{•→}", tol)?;
    forward_impl(&a, rho, p_stable, eps, support, tol)
}

/// Backward ε-flow `−Σ_{k≥1} (Φ^D)^k P_← ε_{t+k}`.
pub fn backward_eps_flow(
    phi: &Matrix,
    p_backward: &Matrix,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    check_dim(phi, eps, "ε")?;
    support.validate(eps)?;
    let d = crate::linalg::drazin_inverse_with(phi, tol)?;
    let b = d.mul(p_backward);
    let rho = require_contraction(&b, "Φ^D P_←", tol)?;
    backward_impl(&b, rho, eps, support, tol)
}

/// Outward ε-flow `Σ_θ Σ_{k=1..d_θ} (Φ − e^{−iθ}I)^{k−1} P_θ (C_θB)^{k−1} C_θ ε`.
///
/// Built iteratively from `P_θ C_θ ε` by repeated application of
/// `(Φ − e^{−iθ}I)·C_θB`. Vanishes at `t = 0`.
pub fn outward_eps_flow(
    units: &[UnitComponent],
    eps: &TimeWindowSequence,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    let w = Window::of(eps);
    let mut total = TimeWindowSequence::zeros(w.t_min, w.t_max, eps.dim())?;
    for u in units {
        let mut term = apply_matrix(&u.projector, &cum_theta(eps, u.frequency))?;
        total = add(&total, &term)?;
        for _ in 1..u.index {
            term = apply_matrix(&u.nilpotent, &cum_theta(&backshift(&term), u.frequency))?;
            total = add(&total, &term)?;
        }
    }
    to_real(total, tol)
}

fn check_membership(p: &Matrix, v: &DVector<f64>, what: &str, tol: &Tolerances, phi_norm: f64) -> Result<()> {
    let vc = complex_vec(v);
    let off = vec_norm(&(&vc - p.apply(&vc)));
    let bound = tol.proj_abs(phi_norm) * vec_norm(&vc);
    if off > bound {
        return Err(Error::Input(format!(
            "{what} is not in its spectral subspace: ‖(I − P)v‖ = {off:.3e} exceeds {bound:.3e}"
        )));
    }
    Ok(())
}

/// `t ↦ A^t v` for `t ≥ 0`, `t ↦ B^{−t} v` for `t < 0`.
fn two_sided_orbit(a: &Matrix, b: &Matrix, v: &DVector<C64>, w: Window) -> Result<TimeWindowSequence> {
    let mut out = TimeWindowSequence::zeros(w.t_min, w.t_max, v.len())?;
    let mut y = v.clone();
    out.set(0, y.clone())?;
    for t in 1..=w.t_max {
        y = a.apply(&y);
        out.set(t, y.clone())?;
    }
    let mut y = v.clone();
    for t in (w.t_min..0).rev() {
        y = b.apply(&y);
        out.set(t, y.clone())?;
    }
    Ok(out)
}

/// Predetermined forward x-flow `t ↦ Φ^t v_→` (Drazin powers for `t < 0`).
pub fn predetermined_forward(
    phi: &Matrix,
    p_forward: &Matrix,
    v_forward: &DVector<f64>,
    window: Window,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    let d = crate::linalg::drazin_inverse_with(phi, tol)?;
    predetermined_impl(phi, &d, p_forward, v_forward, window, tol, "v_forward")
}

/// Predetermined backward x-flow `t ↦ Φ^t v_←` (Drazin powers for `t < 0`).
pub fn predetermined_backward(
    phi: &Matrix,
    p_backward: &Matrix,
    v_backward: &DVector<f64>,
    window: Window,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    let d = crate::linalg::drazin_inverse_with(phi, tol)?;
    predetermined_impl(phi, &d, p_backward, v_backward, window, tol, "v_backward")
}

fn predetermined_impl(
    phi: &Matrix,
    drazin: &Matrix,
    p: &Matrix,
    v: &DVector<f64>,
    window: Window,
    tol: &Tolerances,
    what: &str,
) -> Result<TimeWindowSequence> {
    if v.len() != phi.dim() {
        return Err(Error::Input(format!("{what} has dimension {}, expected {}", v.len(), phi.dim())));
    }
    check_membership(p, v, what, tol, phi.norm())?;
    let orbit = two_sided_orbit(&phi.mul(p), &drazin.mul(p), &complex_vec(v), window)?;
    to_real(orbit, tol)
}

/// Generalized binomial coefficient `t(t−1)…(t−k+1)/k!` for integer `t`.
pub fn binomial(t: i64, k: usize) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c *= (t - j as i64) as f64 / (j + 1) as f64;
    }
    c
}

/// Predetermined outward x-flow `Σ_θ Σ_k (Φ − e^{−iθ}I)^{k−1} P_θ (C_θB)^{k−1} R_θ v_↔`.
///
/// When Θ = {0} the binomial form `Σ_k binom(t, k−1)(Φ − I)^{k−1} P_0 v` is
/// evaluated as well and must agree within `tol_flow`.
pub fn predetermined_outward(
    phi: &Matrix,
    units: &[UnitComponent],
    p_unit: &Matrix,
    v_outward: &DVector<f64>,
    window: Window,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    if v_outward.len() != phi.dim() {
        return Err(Error::Input(format!(
            "v_outward has dimension {}, expected {}",
            v_outward.len(),
            phi.dim()
        )));
    }
    check_membership(p_unit, v_outward, "v_outward", tol, phi.norm())?;
    let v = complex_vec(v_outward);
    let mut total = TimeWindowSequence::zeros(window.t_min, window.t_max, phi.dim())?;
    for u in units {
        let r = residual_theta(&u.projector.apply(&v), u.frequency, window.t_min, window.t_max)?;
        let mut term = r;
        total = add(&total, &term)?;
        for _ in 1..u.index {
            term = apply_matrix(&u.nilpotent, &cum_theta(&backshift(&term), u.frequency))?;
            total = add(&total, &term)?;
        }
    }
    let total = to_real(total, tol)?;
    if units.len() == 1 && units[0].frequency.theta() == 0.0 {
        let closed = binomial_outward(&units[0], &v, window)?;
        let gap = total.max_dist(&closed);
        let bound = tol.flow_abs(closed.sup_norm().max(vec_norm(&v)) * phi.norm().max(1.0));
        if gap > bound {
            return Err(Error::Inconsistency {
                message: "binomial and cumulation forms of the outward flow disagree".into(),
                discrepancy: gap,
            });
        }
    }
    Ok(total)
}

/// `Σ_{k=1..d_0} binom(t, k−1)(Φ − I)^{k−1} P_0 v` for the unit root at θ = 0.
pub fn binomial_outward(u: &UnitComponent, v: &DVector<C64>, window: Window) -> Result<TimeWindowSequence> {
    let mut terms = vec![u.projector.apply(v)];
    for k in 1..u.index {
        let next = u.nilpotent.apply(&terms[k - 1]);
        terms.push(next);
    }
    let out = TimeWindowSequence::from_fn(window.t_min, window.t_max, v.len(), |t| {
        let mut acc = DVector::from_element(v.len(), C64::new(0.0, 0.0));
        for (k, term) in terms.iter().enumerate() {
            acc += term * C64::new(binomial(t, k), 0.0);
        }
        acc
    })?;
    real_part(&out, f64::INFINITY)
}

/// Input to the real trigonometric form of a conjugate pair.
#[derive(Debug, Clone, Copy)]
pub enum TrigInput<'a> {
    /// Predetermined flow from `x_0`.
    Initial(&'a DVector<f64>),
    /// ε-flow from the innovations.
    Innovations(&'a TimeWindowSequence),
}

/// Outward flow of an index-one conjugate pair `{θ, −θ}` in real form:
/// `cos(θt)(P_θ + P_{−θ}) + sin(θt)·(−i)(P_θ − P_{−θ})` applied to `x_0`, or
/// the matching cumulated sums of ε.
pub fn trig_outward_pair(
    phi: &Matrix,
    theta: f64,
    p_theta: &Matrix,
    p_minus: &Matrix,
    input: TrigInput<'_>,
    window: Window,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::Precondition(format!("θ = {theta} must lie in (0, π)")));
    }
    let f = Frequency::new(theta);
    let scale = phi.norm() + 1.0;
    for (p, l) in [(p_theta, f.unit_root()), (p_minus, f.unit_root().conj())] {
        let n = phi.shift(l).mul(p).norm();
        if n > tol.nilp * scale {
            return Err(Error::Precondition(format!(
                "unit root at θ = ±{theta} has index above one (‖(Φ − λI)P‖ = {n:.3e})"
            )));
        }
    }
    let sum = p_theta.add(p_minus).real_part();
    let diff = p_theta
        .sub(p_minus)
        .scale(C64::new(0.0, -1.0))
        .real_part();
    let kernel = |t: i64| {
        let a = theta * t as f64;
        &sum * a.cos() + &diff * a.sin()
    };
    let n = phi.dim();
    let out: Vec<DVector<f64>> = match input {
        TrigInput::Initial(v) => (window.t_min..=window.t_max).map(|t| kernel(t) * v).collect(),
        TrigInput::Innovations(eps) => {
            check_dim(phi, eps, "ε")?;
            (window.t_min..=window.t_max)
                .map(|t| {
                    let mut acc = DVector::<f64>::zeros(n);
                    let re = |s: i64| eps.at(s).map(|z| z.re);
                    if t > 0 {
                        for s in 1..=t {
                            acc += kernel(t - s) * re(s);
                        }
                    } else if t < 0 {
                        for k in 0..-t {
                            acc -= kernel(t + k) * re(-k);
                        }
                    }
                    acc
                })
                .collect()
        }
    };
    TimeWindowSequence::from_real(window.t_min, out)
}

/// `max_{t_min < t ≤ t_max} ‖x_t − Φ x_{t−1} − ε_t‖`.
pub fn verify_recursion(
    phi: &Matrix,
    x: &TimeWindowSequence,
    eps: &TimeWindowSequence,
) -> Result<RecursionReport> {
    check_dim(phi, x, "x")?;
    check_dim(phi, eps, "ε")?;
    if Window::of(x) != Window::of(eps) {
        return Err(Error::Input(format!(
            "x window [{}, {}] and ε window [{}, {}] differ",
            x.t_min(),
            x.t_max(),
            eps.t_min(),
            eps.t_max()
        )));
    }
    let mut report = RecursionReport {
        max_residual: 0.0,
        at: None,
    };
    for t in x.t_min() + 1..=x.t_max() {
        let r = vec_norm(&(x.at(t) - phi.apply(&x.at(t - 1)) - eps.at(t)));
        if report.at.is_none() || r > report.max_residual {
            report = RecursionReport {
                max_residual: r,
                at: Some(t),
            };
        }
    }
    Ok(report)
}

/// Spectral data of Φ needed by every flow: classification, projectors,
/// Drazin inverse and one [`UnitComponent`] per frequency in Θ.
#[derive(Debug, Clone)]
pub struct VarModel {
    phi: Matrix,
    tol: Tolerances,
    decomposition: SpectralDecomposition,
    classification: SpectralClassification,
    powers: SignedPowers,
    /// `P_•`
    pub p_zero: Matrix,
    /// `P_→`
    pub p_forward: Matrix,
    /// `P_{•→}`
    pub p_stable: Matrix,
    /// `P_←`
    pub p_backward: Matrix,
    /// `P_↔`
    pub p_unit: Matrix,
    units: Vec<UnitComponent>,
    rho_stable: f64,
    rho_backward: f64,
}

impl VarModel {
    pub fn new(phi: &Matrix, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        if !phi.is_real_input() {
            return Err(Error::Input("Φ must be a real matrix".into()));
        }
        let decomposition = eig_decompose(phi, tol)?;
        let classification = decomposition.classify();
        let proj = |s: Subset| -> Result<Matrix> {
            Ok(decomposition.projector(&classification, s)?.matrix)
        };
        let p_zero = proj(Subset::Zero)?;
        let p_forward = proj(Subset::Forward)?;
        let p_stable = proj(Subset::Stable)?;
        let p_backward = proj(Subset::Backward)?;
        let p_unit = proj(Subset::Unit)?;
        let mut units = Vec::new();
        for f in &classification.unit_frequencies {
            let p = proj(Subset::Clusters(vec![f.cluster]))?;
            let mut u = UnitComponent::new(phi, f.theta, classification.clusters[f.cluster].index, p);
            u.cluster = f.cluster;
            units.push(u);
        }
        let powers = SignedPowers::from_decomposition(&decomposition, &classification)?;
        let rho_of = |ids: &[usize], invert: bool| {
            ids.iter().fold(0.0f64, |a, &i| {
                let r = classification.clusters[i].value.norm();
                a.max(if invert { 1.0 / r } else { r })
            })
        };
        let mut stable_ids = classification.zero_set.clone();
        stable_ids.extend(&classification.forward_set);
        let rho_stable = rho_of(&stable_ids, false);
        let rho_backward = rho_of(&classification.backward_set, true);
        Ok(VarModel {
            phi: phi.clone(),
            tol: *tol,
            decomposition,
            classification,
            powers,
            p_zero,
            p_forward,
            p_stable,
            p_backward,
            p_unit,
            units,
            rho_stable,
            rho_backward,
        })
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn classification(&self) -> &SpectralClassification {
        &self.classification
    }

    pub fn drazin(&self) -> &Matrix {
        self.powers.drazin()
    }

    /// `Φ^t`, with Drazin powers for negative `t`.
    pub fn power(&self, t: i64) -> Matrix {
        self.powers.power(t)
    }

    pub fn units(&self) -> &[UnitComponent] {
        &self.units
    }

    pub fn unit(&self, theta: f64) -> Option<&UnitComponent> {
        let f = Frequency::new(theta);
        self.units.iter().find(|u| u.frequency.theta() == f.theta())
    }

    /// Index of the zero eigenvalue, 0 if Φ is nonsingular.
    pub fn zero_index(&self) -> usize {
        self.classification
            .zero_set
            .iter()
            .map(|&i| self.classification.clusters[i].index)
            .max()
            .unwrap_or(0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.classification.zero_set.len() == self.classification.clusters.len()
    }

    fn check_eps(&self, eps: &TimeWindowSequence, support: &SupportInfo) -> Result<()> {
        check_dim(&self.phi, eps, "ε")?;
        support.validate(eps)
    }

    pub fn forward_eps_flow(&self, eps: &TimeWindowSequence, support: &SupportInfo) -> Result<TimeWindowSequence> {
        self.check_eps(eps, support)?;
        let a = self.phi.mul(&self.p_stable);
        forward_impl(&a, self.rho_stable, &self.p_stable, eps, support, &self.tol)
    }

    pub fn backward_eps_flow(&self, eps: &TimeWindowSequence, support: &SupportInfo) -> Result<TimeWindowSequence> {
        self.check_eps(eps, support)?;
        let b = self.drazin().mul(&self.p_backward);
        backward_impl(&b, self.rho_backward, eps, support, &self.tol)
    }

    pub fn outward_eps_flow(&self, eps: &TimeWindowSequence) -> Result<TimeWindowSequence> {
        check_dim(&self.phi, eps, "ε")?;
        outward_eps_flow(&self.units, eps, &self.tol)
    }

    pub fn predetermined_forward(&self, v: &DVector<f64>, window: Window) -> Result<TimeWindowSequence> {
        predetermined_impl(&self.phi, self.drazin(), &self.p_forward, v, window, &self.tol, "v_forward")
    }

    pub fn predetermined_backward(&self, v: &DVector<f64>, window: Window) -> Result<TimeWindowSequence> {
        predetermined_impl(&self.phi, self.drazin(), &self.p_backward, v, window, &self.tol, "v_backward")
    }

    pub fn predetermined_outward(&self, v: &DVector<f64>, window: Window) -> Result<TimeWindowSequence> {
        predetermined_outward(&self.phi, &self.units, &self.p_unit, v, window, &self.tol)
    }

    /// Projects an arbitrary real vector onto the three initial-condition subspaces.
    pub fn project_initial(&self, v_forward: &DVector<f64>, v_backward: &DVector<f64>, v_outward: &DVector<f64>) -> InitialConditions {
        let p = |m: &Matrix, v: &DVector<f64>| m.real_part() * v;
        InitialConditions {
            v_forward: p(&self.p_forward, v_forward),
            v_backward: p(&self.p_backward, v_backward),
            v_outward: p(&self.p_unit, v_outward),
        }
    }

    /// The six flows for given innovations and initial conditions, in reporting order.
    pub fn flows(
        &self,
        eps: &TimeWindowSequence,
        initial: &InitialConditions,
        support: &SupportInfo,
    ) -> Result<[TimeWindowSequence; 6]> {
        if initial.dim() != self.dim()
            || initial.v_backward.len() != self.dim()
            || initial.v_outward.len() != self.dim()
        {
            return Err(Error::Input(format!(
                "initial conditions must have dimension {}",
                self.dim()
            )));
        }
        let w = Window::of(eps);
        Ok([
            self.predetermined_forward(&initial.v_forward, w)?,
            self.forward_eps_flow(eps, support)?,
            self.predetermined_backward(&initial.v_backward, w)?,
            self.backward_eps_flow(eps, support)?,
            self.predetermined_outward(&initial.v_outward, w)?,
            self.outward_eps_flow(eps)?,
        ])
    }

    /// The solution with initial conditions `initial`: the sum of the six flows.
    pub fn synthesize(
        &self,
        eps: &TimeWindowSequence,
        initial: &InitialConditions,
        support: &SupportInfo,
    ) -> Result<TimeWindowSequence> {
        let f = self.flows(eps, initial, support)?;
        sum_flows(&[&f[0], &f[1], &f[2], &f[3], &f[4], &f[5]])
    }

    pub fn recover_initial_conditions(
        &self,
        x: &TimeWindowSequence,
        eps: &TimeWindowSequence,
        support: &SupportInfo,
    ) -> Result<InitialConditions> {
        Ok(self.recover_with_report(x, eps, support)?.0)
    }

    /// Initial conditions of `x` plus the anchors used.
    ///
    /// In compact mode `v_→ = Φ^n P_→ x_{−n}` for the smallest `n ≥ 0` with
    /// `−n < s_min`, re-checked at `n + 1`; `v_←` mirrors this with
    /// `n ≥ s_max`. The window must therefore reach `s_min − 2` on the left
    /// and `s_max + 1` on the right whenever the corresponding subspace is
    /// nontrivial. In decay mode the farthest anchors are used and the
    /// discrepancy is reported instead of enforced.
    pub fn recover_with_report(
        &self,
        x: &TimeWindowSequence,
        eps: &TimeWindowSequence,
        support: &SupportInfo,
    ) -> Result<(InitialConditions, RecoveryReport)> {
        check_dim(&self.phi, x, "x")?;
        self.check_eps(eps, support)?;
        if Window::of(x) != Window::of(eps) {
            return Err(Error::Input("x and ε must share a window".into()));
        }
        let exact = support.mode == SupportMode::ExactCompactSupport;
        let scale = flow_scale(&self.phi, &[x, eps]);
        let tol_abs = self.tol.flow_abs(scale);
        let n = self.dim();
        let mut discrepancy = 0.0f64;

        let a_fwd = self.phi.mul(&self.p_forward);
        let fwd_at = |k: i64| -> DVector<C64> {
            let mut y = self.p_forward.apply(&x.at(-k));
            for _ in 0..k {
                y = a_fwd.apply(&y);
            }
            y
        };
        let mut forward_anchor = None;
        let v_forward = if self.p_forward.norm() == 0.0 {
            DVector::zeros(n)
        } else {
            let (k0, k1) = if exact {
                let k0 = 0.max(1 - support.s_min);
                (k0, k0 + 1)
            } else {
                (-x.t_min(), -x.t_min() - 1)
            };
            if -k0.max(k1) < x.t_min() || k1 < 0 {
                return Err(Error::Precondition(format!(
                    "window starts at {} but forward recovery needs x at t = {} (support starts at {})",
                    x.t_min(),
                    -k0.max(k1),
                    support.s_min
                )));
            }
            let v0 = fwd_at(k0);
            let gap = vec_norm(&(&v0 - fwd_at(k1)));
            discrepancy = discrepancy.max(gap);
            if exact && gap > tol_abs {
                return Err(Error::Inconsistency {
                    message: format!("Φ^n P_→ x_(−n) differs between n = {k0} and n = {k1}"),
                    discrepancy: gap,
                });
            }
            forward_anchor = Some(k0);
            real_vec(&v0, &self.tol)?
        };

        let b_bwd = self.drazin().mul(&self.p_backward);
        let bwd_at = |k: i64| -> DVector<C64> {
            let mut y = self.p_backward.apply(&x.at(k));
            for _ in 0..k {
                y = b_bwd.apply(&y);
            }
            y
        };
        let mut backward_anchor = None;
        let v_backward = if self.p_backward.norm() == 0.0 {
            DVector::zeros(n)
        } else {
            let (k0, k1) = if exact {
                let k0 = 0.max(support.s_max);
                (k0, k0 + 1)
            } else {
                (x.t_max(), x.t_max() - 1)
            };
            if k0.max(k1) > x.t_max() || k1 < 0 {
                return Err(Error::Precondition(format!(
                    "window ends at {} but backward recovery needs x at t = {} (support ends at {})",
                    x.t_max(),
                    k0.max(k1),
                    support.s_max
                )));
            }
            let v0 = bwd_at(k0);
            let gap = vec_norm(&(&v0 - bwd_at(k1)));
            discrepancy = discrepancy.max(gap);
            if exact && gap > tol_abs {
                return Err(Error::Inconsistency {
                    message: format!("Φ^(−n) P_← x_n differs between n = {k0} and n = {k1}"),
                    discrepancy: gap,
                });
            }
            backward_anchor = Some(k0);
            real_vec(&v0, &self.tol)?
        };

        let v_outward = real_vec(&self.p_unit.apply(&x.at(0)), &self.tol)?;
        Ok((
            InitialConditions {
                v_forward,
                v_backward,
                v_outward,
            },
            RecoveryReport {
                forward_anchor,
                backward_anchor,
                discrepancy,
                exact,
            },
        ))
    }

    /// Full decomposition of a solution `x` into its six flows.
    ///
    /// Checks the recursion, recovers the initial conditions, evaluates the
    /// flows and verifies that the forward, backward and outward pairs
    /// reproduce `P_{•→}x`, `P_←x` and `P_↔x`. The identities are checked for
    /// `t ≥ t_min + max(1, d_•)`: before that the zero-eigenvalue part of `x`
    /// still depends on innovations preceding the window.
    pub fn decompose(
        &self,
        x: &TimeWindowSequence,
        eps: &TimeWindowSequence,
        support: &SupportInfo,
    ) -> Result<FlowDecomposition> {
        let scale = flow_scale(&self.phi, &[x, eps]);
        let tol_abs = self.tol.flow_abs(scale);
        let rec = verify_recursion(&self.phi, x, eps)?;
        rec.check(tol_abs)?;
        let (initial, recovery) = self.recover_with_report(x, eps, support)?;
        let [pf, fe, pb, be, po, oe] = self.flows(eps, &initial, support)?;

        let start = x.t_min() + 1.max(self.zero_index() as i64);
        let gap = |a: &TimeWindowSequence, b: &TimeWindowSequence| -> f64 {
            (start..=x.t_max()).fold(0.0, |m, t| m.max(vec_norm(&(a.at(t) - b.at(t)))))
        };
        let comps = [
            (add(&pf, &fe)?, apply_matrix(&self.p_stable, x)?, "forward"),
            (add(&pb, &be)?, apply_matrix(&self.p_backward, x)?, "backward"),
            (add(&po, &oe)?, apply_matrix(&self.p_unit, x)?, "outward"),
        ];
        let mut worst = 0.0f64;
        for (flow, target, name) in &comps {
            let g = gap(flow, target);
            worst = worst.max(g);
            if g > tol_abs {
                return Err(Error::Inconsistency {
                    message: format!("{name} flows do not reproduce the {name} component of x"),
                    discrepancy: g,
                });
            }
        }
        let total = sum_flows(&[&pf, &fe, &pb, &be, &po, &oe])?;
        let g = gap(&total, x);
        worst = worst.max(g);
        if g > tol_abs {
            return Err(Error::Inconsistency {
                message: "the six flows do not sum to x".into(),
                discrepancy: g,
            });
        }
        let max_imag = [&pf, &fe, &pb, &be, &po, &oe]
            .iter()
            .fold(0.0f64, |a, s| a.max(s.max_imag()));
        Ok(FlowDecomposition {
            predetermined_forward: pf,
            forward_eps: fe,
            predetermined_backward: pb,
            backward_eps: be,
            predetermined_outward: po,
            outward_eps: oe,
            initial,
            residual_report: ResidualReport {
                max_recursion_residual: rec.max_residual,
                recursion_residual_at: rec.at,
                max_imag_residue: max_imag,
                max_component_residual: worst,
                recovery_discrepancy: recovery.discrepancy,
                recovery_exact: recovery.exact,
                scale,
                tol_flow_abs: tol_abs,
            },
            classification: self.classification.clone(),
            tolerances: self.tol,
        })
    }
}

/// Sum of the six flows for `(Φ, ε, initial)`.
pub fn synthesize(
    phi: &Matrix,
    eps: &TimeWindowSequence,
    initial: &InitialConditions,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<TimeWindowSequence> {
    VarModel::new(phi, tol)?.synthesize(eps, initial, support)
}

pub fn recover_initial_conditions(
    phi: &Matrix,
    x: &TimeWindowSequence,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<InitialConditions> {
    VarModel::new(phi, tol)?.recover_initial_conditions(x, eps, support)
}

pub fn decompose(
    phi: &Matrix,
    x: &TimeWindowSequence,
    eps: &TimeWindowSequence,
    support: &SupportInfo,
    tol: &Tolerances,
) -> Result<FlowDecomposition> {
    VarModel::new(phi, tol)?.decompose(x, eps, support)
}

/// `x − Φ·Bx`, the innovations implied by a sequence (exact for `t > t_min`).
pub fn implied_innovations(phi: &Matrix, x: &TimeWindowSequence) -> Result<TimeWindowSequence> {
    check_dim(phi, x, "x")?;
    sub(x, &apply_matrix(phi, &backshift(x))?)
}
