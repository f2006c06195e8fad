//! Eigenvalue clustering, unit-circle classification and spectral projectors.
//!
//! Projectors are assembled from a reordered complex Schur form: the selected
//! clusters are rotated to the leading block, the coupling block is removed by
//! a triangular Sylvester solve, and `P_A = Q [[I, Y], [0, 0]] Q*`. No Jordan
//! chains are ever formed.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use super::matrix::{frobenius, Matrix, C64};
use super::schur::{complex_schur, ComplexSchur};
use super::sylvester::solve_triangular_sylvester;
use crate::{Error, Result, Tolerances};

/// Largest `|θ₁ + θ₂|` for two unit frequencies to be treated as conjugates.
const PAIR_TOL: f64 = 1e-7;

/// A group of computed eigenvalues treated as one exact eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCluster {
    pub id: usize,
    /// Multiplicity-weighted mean of the absorbed raw eigenvalues.
    #[serde(skip)]
    pub value: C64,
    pub algebraic_multiplicity: usize,
    /// Size of the largest Jordan block: nilpotency degree of `(Φ − λI)P_λ`.
    pub index: usize,
    /// Positions (on the original Schur diagonal) of the raw eigenvalues.
    pub member_ids: Vec<usize>,
}

/// Where a cluster sits relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Zero,
    Forward,
    Backward,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitFrequency {
    /// θ ∈ (−π, π] with e^{−iθ} the eigenvalue.
    pub theta: f64,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralClassification {
    pub clusters: Vec<EigenCluster>,
    pub groups: Vec<Group>,
    pub zero_set: Vec<usize>,
    pub forward_set: Vec<usize>,
    pub backward_set: Vec<usize>,
    pub unit_set: Vec<usize>,
    pub unit_frequencies: Vec<UnitFrequency>,
    pub tol_unit: f64,
    /// Closest approach of an off-circle cluster to the unit circle, `min ||λ| − 1|`.
    pub unit_margin: Option<f64>,
    /// Largest `||λ| − 1|` among clusters classified as on the circle.
    pub unit_deviation: Option<f64>,
}

impl SpectralClassification {
    pub fn frequencies(&self) -> Vec<f64> {
        self.unit_frequencies.iter().map(|f| f.theta).collect()
    }

    pub fn frequency_of(&self, cluster: usize) -> Option<f64> {
        self.unit_frequencies
            .iter()
            .find(|f| f.cluster == cluster)
            .map(|f| f.theta)
    }

    pub fn cluster_for_frequency(&self, theta: f64, tol: f64) -> Option<usize> {
        let target = normalize_angle(theta);
        self.unit_frequencies
            .iter()
            .find(|f| angle_distance(f.theta, target) <= tol)
            .map(|f| f.cluster)
    }

    /// Index `d_θ` of the unit eigenvalue at frequency θ.
    pub fn index_at(&self, theta: f64, tol: f64) -> Option<usize> {
        self.cluster_for_frequency(theta, tol)
            .map(|c| self.clusters[c].index)
    }
}

/// Spectral subset descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Subset {
    /// `{λ = 0}`
    Zero,
    /// `{0 < |λ| < 1}`
    Forward,
    /// `{|λ| < 1}`
    Stable,
    /// `{|λ| > 1}`
    Backward,
    /// `{|λ| = 1}`
    Unit,
    /// The single unit eigenvalue `e^{−iθ}`.
    Frequency(f64),
    /// An explicit set of cluster ids.
    Clusters(Vec<usize>),
}

impl Subset {
    pub fn label(&self) -> String {
        match self {
            Subset::Zero => "zero".into(),
            Subset::Forward => "forward".into(),
            Subset::Stable => "stable".into(),
            Subset::Backward => "backward".into(),
            Subset::Unit => "unit".into(),
            Subset::Frequency(t) => format!("frequency:{t}"),
            Subset::Clusters(ids) => format!("clusters:{ids:?}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralProjector {
    pub subset: Subset,
    pub cluster_ids: Vec<usize>,
    pub matrix: Matrix,
    /// Summed algebraic multiplicity of the subset.
    pub rank: usize,
}

/// Schur-based eigenstructure of a square matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    matrix: Matrix,
    schur: ComplexSchur,
    /// Cluster id of each Schur diagonal position.
    position_cluster: Vec<usize>,
    clusters: Vec<EigenCluster>,
    /// Cluster id of the complex conjugate cluster (real input only).
    conj_partner: Option<Vec<usize>>,
    tol: Tolerances,
}

pub(crate) fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

pub(crate) fn angle_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

fn cluster_raw(raw: &[C64], scale: f64, delta: f64) -> Vec<Vec<usize>> {
    let radius = |k: usize| scale * delta.powf(1.0 / k as f64);
    let mut done = Vec::new();
    let mut pending = vec![(0..raw.len()).collect::<Vec<usize>>()];
    while let Some(group) = pending.pop() {
        let r = radius(group.len());
        let parts = components(raw, &group, r);
        if parts.len() == 1 {
            done.push(group);
        } else {
            pending.extend(parts);
        }
    }
    done.sort_by_key(|g| g[0]);
    done
}

/// Connected components of `group` under the relation `|λ_i − λ_j| ≤ r`.
fn components(raw: &[C64], group: &[usize], r: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; group.len()];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for start in 0..group.len() {
        if label[start].is_some() {
            continue;
        }
        let id = parts.len();
        label[start] = Some(id);
        let mut stack = vec![start];
        let mut part = Vec::new();
        while let Some(a) = stack.pop() {
            part.push(group[a]);
            for b in 0..group.len() {
                if label[b].is_none() && (raw[group[a]] - raw[group[b]]).norm() <= r {
                    label[b] = Some(id);
                    stack.push(b);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

/// Triangularizes `m`, clusters its eigenvalues and computes each cluster's index.
///
/// A group of `k` raw eigenvalues forms a cluster when it is connected at
/// distance `‖M‖·tol_cluster^{1/k}`, the spread a `k`-fold defective
/// eigenvalue exhibits under a relative backward perturbation `tol_cluster`.
/// Because that rule is generous for large `k`, each cluster is then offered
/// the split found with the squared threshold, which is accepted when the
/// parts lie at least `‖M‖·tol_cluster` apart and every part has a spectral
/// projector of norm at most `tol_cluster^{−1/2}`. Splitting a genuinely
/// defective eigenvalue produces projectors far larger.
pub fn eig_decompose(m: &Matrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    tol.validate()?;
    let schur = complex_schur(m.as_complex())?;
    let raw = schur.eigenvalues();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let kappa = tol.cluster.powf(-0.5);
    let mut pending: Vec<(Vec<usize>, f64)> = cluster_raw(&raw, scale, tol.cluster)
        .into_iter()
        .map(|g| (g, tol.cluster))
        .collect();
    let mut groups = Vec::new();
    while let Some((g, delta)) = pending.pop() {
        if g.len() < 2 {
            groups.push(g);
            continue;
        }
        match refine(&schur, &raw, &g, scale, delta, kappa, tol.proj) {
            Some((parts, d)) => pending.extend(parts.into_iter().map(|p| (p, d))),
            None => groups.push(g),
        }
    }
    assemble(m, schur, &raw, groups, scale, tol)
}

fn refine(
    schur: &ComplexSchur,
    raw: &[C64],
    group: &[usize],
    scale: f64,
    delta: f64,
    kappa: f64,
    tol_proj: f64,
) -> Option<(Vec<Vec<usize>>, f64)> {
    let values: Vec<C64> = group.iter().map(|&i| raw[i]).collect();
    let mut d = delta;
    loop {
        d *= d;
        if d < f64::MIN_POSITIVE {
            return None;
        }
        let parts = cluster_raw(&values, scale, d);
        if parts.len() < 2 {
            continue;
        }
        let parts: Vec<Vec<usize>> = parts
            .into_iter()
            .map(|p| p.into_iter().map(|k| group[k]).collect())
            .collect();
        let mut gap = f64::INFINITY;
        for (a, pa) in parts.iter().enumerate() {
            for pb in &parts[a + 1..] {
                for &i in pa {
                    for &j in pb {
                        gap = gap.min((raw[i] - raw[j]).norm());
                    }
                }
            }
        }
        if gap < scale * delta {
            return None;
        }
        let ok = parts.iter().all(|p| {
            projector_norm(schur, p, tol_proj).is_some_and(|n| n <= kappa)
        });
        return ok.then_some((parts, d));
    }
}

/// `‖P‖_F` for the spectral projector onto the raw positions `part`.
fn projector_norm(schur: &ComplexSchur, part: &[usize], tol_proj: f64) -> Option<f64> {
    let n = schur.dim();
    let mut lead = vec![false; n];
    for &i in part {
        lead[i] = true;
    }
    let mut s = schur.clone();
    let m = s.reorder_leading(&lead);
    if m == n {
        return Some((n as f64).sqrt());
    }
    let t11 = s.t.view((0, 0), (m, m)).into_owned();
    let t12 = s.t.view((0, m), (m, n - m)).into_owned();
    let t22 = s.t.view((m, m), (n - m, n - m)).into_owned();
    let y = solve_triangular_sylvester(&t11, &t22, &t12, tol_proj).ok()?;
    Some((m as f64 + frobenius(&y).powi(2)).sqrt())
}

fn assemble(
    m: &Matrix,
    schur: ComplexSchur,
    raw: &[C64],
    mut groups: Vec<Vec<usize>>,
    scale: f64,
    tol: &Tolerances,
) -> Result<SpectralDecomposition> {
    let mean = |g: &Vec<usize>| {
        let mut s = C64::new(0.0, 0.0);
        for &i in g {
            s += raw[i];
        }
        s / g.len() as f64
    };
    groups.sort_by(|a, b| {
        let (va, vb) = (mean(a), mean(b));
        va.re
            .partial_cmp(&vb.re)
            .unwrap()
            .then(va.im.partial_cmp(&vb.im).unwrap())
            .then(a[0].cmp(&b[0]))
    });

    let mut position_cluster = vec![0usize; raw.len()];
    let mut clusters = Vec::with_capacity(groups.len());
    for (id, g) in groups.iter().enumerate() {
        for &i in g {
            position_cluster[i] = id;
        }
        clusters.push(EigenCluster {
            id,
            value: mean(g),
            algebraic_multiplicity: g.len(),
            index: 0,
            member_ids: g.clone(),
        });
    }

    let conj_partner = if m.is_real_input() {
        Some(pair_conjugates(&mut clusters, scale * tol.cluster)?)
    } else {
        None
    };

    let mut dec = SpectralDecomposition {
        matrix: m.clone(),
        schur,
        position_cluster,
        clusters,
        conj_partner,
        tol: *tol,
    };
    for id in 0..dec.clusters.len() {
        let p = dec.projector_for(&[id])?;
        dec.clusters[id].index = index_with(&dec.matrix, &dec.clusters[id], &p, tol)?;
    }
    if let Some(partner) = &dec.conj_partner {
        for (id, &p) in partner.iter().enumerate() {
            if dec.clusters[id].index != dec.clusters[p].index {
                return Err(Error::Classification(format!(
                    "conjugate clusters {id} and {p} have different indices {} and {}",
                    dec.clusters[id].index, dec.clusters[p].index
                )));
            }
        }
    }
    Ok(dec)
}

/// Matches every cluster of a real matrix with its conjugate and makes the
/// pair exactly conjugate; self-conjugate clusters become exactly real.
fn pair_conjugates(clusters: &mut [EigenCluster], tol: f64) -> Result<Vec<usize>> {
    let n = clusters.len();
    let mut partner = vec![usize::MAX; n];
    for i in 0..n {
        if partner[i] != usize::MAX {
            continue;
        }
        let vi = clusters[i].value;
        let mut best: Option<(f64, usize)> = None;
        for j in 0..n {
            if (partner[j] != usize::MAX && j != i)
                || clusters[j].algebraic_multiplicity != clusters[i].algebraic_multiplicity
            {
                continue;
            }
            let d = (vi - clusters[j].value.conj()).norm();
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            Some((d, j)) if d <= tol.max(2.0 * vi.im.abs().min(tol)) => {
                partner[i] = j;
                partner[j] = i;
                if i == j {
                    clusters[i].value = C64::new(vi.re, 0.0);
                } else {
                    let vj = clusters[j].value;
                    let upper = if vi.im >= 0.0 {
                        (vi + vj.conj()) * 0.5
                    } else {
                        (vi.conj() + vj) * 0.5
                    };
                    let (a, b) = if vi.im >= 0.0 { (i, j) } else { (j, i) };
                    clusters[a].value = upper;
                    clusters[b].value = upper.conj();
                }
            }
            _ => {
                return Err(Error::Classification(format!(
                    "eigenvalue cluster {i} ({:.6e}{:+.6e}i) of a real matrix has no conjugate partner",
                    vi.re, vi.im
                )))
            }
        }
    }
    Ok(partner)
}

/// Assigns every cluster to exactly one of the zero, forward, backward and unit sets.
pub fn classify_spectrum(clusters: &[EigenCluster], tol_unit: f64) -> SpectralClassification {
    let mut groups = Vec::with_capacity(clusters.len());
    let (mut zero_set, mut forward_set, mut backward_set, mut unit_set) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut unit_frequencies = Vec::new();
    let mut unit_margin: Option<f64> = None;
    let mut unit_deviation: Option<f64> = None;
    for c in clusters {
        let r = c.value.norm();
        let dist = (r - 1.0).abs();
        let group = if r <= tol_unit {
            Group::Zero
        } else if dist <= tol_unit {
            Group::Unit
        } else if r < 1.0 {
            Group::Forward
        } else {
            Group::Backward
        };
        match group {
            Group::Zero => zero_set.push(c.id),
            Group::Forward => forward_set.push(c.id),
            Group::Backward => backward_set.push(c.id),
            Group::Unit => {
                unit_set.push(c.id);
                let theta = if c.value.im.abs() <= tol_unit {
                    if c.value.re > 0.0 {
                        0.0
                    } else {
                        PI
                    }
                } else {
                    normalize_angle(-c.value.im.atan2(c.value.re))
                };
                unit_frequencies.push(UnitFrequency {
                    theta,
                    cluster: c.id,
                });
            }
        }
        if group == Group::Unit {
            unit_deviation = Some(unit_deviation.map_or(dist, |d: f64| d.max(dist)));
        } else {
            unit_margin = Some(unit_margin.map_or(dist, |d: f64| d.min(dist)));
        }
        groups.push(group);
    }
    // Pair conjugate frequencies so that Θ is closed under θ ↦ −θ exactly.
    let k = unit_frequencies.len();
    let mut paired = vec![false; k];
    for i in 0..k {
        let ti = unit_frequencies[i].theta;
        if paired[i] || ti == 0.0 || ti == PI {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for j in i + 1..k {
            if paired[j] {
                continue;
            }
            let d = (ti + unit_frequencies[j].theta).abs();
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        if let Some((d, j)) = best {
            if d <= PAIR_TOL.max(tol_unit) {
                paired[i] = true;
                paired[j] = true;
                let mag = (ti.abs() + unit_frequencies[j].theta.abs()) * 0.5;
                unit_frequencies[i].theta = mag * ti.signum();
                unit_frequencies[j].theta = -mag * ti.signum();
            }
        }
    }
    unit_frequencies.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());
    SpectralClassification {
        clusters: clusters.to_vec(),
        groups,
        zero_set,
        forward_set,
        backward_set,
        unit_set,
        unit_frequencies,
        tol_unit,
        unit_margin,
        unit_deviation,
    }
}

/// Smallest `k ≤ m_λ` with `‖((M − λI)P)^k‖ ≤ tol_nilp·(‖M‖ + |λ|)^k`.
pub fn eigen_index(
    m: &Matrix,
    cluster: &EigenCluster,
    p: &SpectralProjector,
    tol: &Tolerances,
) -> Result<usize> {
    index_with(m, cluster, &p.matrix, tol)
}

fn index_with(m: &Matrix, cluster: &EigenCluster, p: &Matrix, tol: &Tolerances) -> Result<usize> {
    let lambda = cluster.value;
    let base = m.shift(lambda).mul(p);
    let scale = m.norm() + lambda.norm();
    let mut power = base.clone();
    for k in 1..=cluster.algebraic_multiplicity {
        if power.norm() <= tol.nilp * scale.powi(k as i32) {
            return Ok(k);
        }
        power = power.mul(&base);
    }
    Err(Error::Classification(format!(
        "(M − λI)P is not nilpotent within multiplicity {} for λ = {:.6e}{:+.6e}i; \
         tol_cluster or tol_nilp is misconfigured",
        cluster.algebraic_multiplicity, lambda.re, lambda.im
    )))
}

impl SpectralDecomposition {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    pub fn schur(&self) -> &ComplexSchur {
        &self.schur
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn raw_eigenvalues(&self) -> Vec<C64> {
        self.schur.eigenvalues()
    }

    pub fn classify(&self) -> SpectralClassification {
        classify_spectrum(&self.clusters, self.tol.unit)
    }

    pub fn conjugate_of(&self, cluster: usize) -> Option<usize> {
        self.conj_partner.as_ref().map(|p| p[cluster])
    }

    pub fn spectral_radius(&self) -> f64 {
        self.clusters
            .iter()
            .fold(0.0, |acc, c| acc.max(c.value.norm()))
    }

    fn check_ids(&self, ids: &[usize]) -> Result<()> {
        if let Some(&bad) = ids.iter().find(|&&i| i >= self.clusters.len()) {
            return Err(Error::Input(format!(
                "subset references unknown cluster {bad} (have {})",
                self.clusters.len()
            )));
        }
        Ok(())
    }

    /// Schur form reordered so the positions in `ids` lead; returns it with the
    /// size of the leading block.
    fn reordered(&self, ids: &BTreeSet<usize>) -> (ComplexSchur, usize) {
        let mut s = self.schur.clone();
        let lead: Vec<bool> = self
            .position_cluster
            .iter()
            .map(|c| ids.contains(c))
            .collect();
        let m = s.reorder_leading(&lead);
        (s, m)
    }

    /// Orthonormal basis of the invariant subspace belonging to `ids`.
    pub fn invariant_basis(&self, ids: &[usize]) -> Result<DMatrix<C64>> {
        self.check_ids(ids)?;
        let set: BTreeSet<usize> = ids.iter().copied().collect();
        let (s, m) = self.reordered(&set);
        Ok(s.q.columns(0, m).into_owned())
    }

    /// Leading-block splitting `T11 Y − Y T22 = T12` for the reordered form.
    fn split(&self, s: &ComplexSchur, m: usize) -> Result<DMatrix<C64>> {
        let n = s.dim();
        let t11 = s.t.view((0, 0), (m, m)).into_owned();
        let t12 = s.t.view((0, m), (m, n - m)).into_owned();
        let t22 = s.t.view((m, m), (n - m, n - m)).into_owned();
        solve_triangular_sylvester(&t11, &t22, &t12, self.tol.proj)
    }

    fn is_conjugation_closed(&self, ids: &BTreeSet<usize>) -> bool {
        match &self.conj_partner {
            Some(p) => ids.iter().all(|i| ids.contains(&p[*i])),
            None => false,
        }
    }

    pub(crate) fn projector_for(&self, ids: &[usize]) -> Result<Matrix> {
        self.check_ids(ids)?;
        let n = self.matrix.dim();
        let set: BTreeSet<usize> = ids.iter().copied().collect();
        if set.is_empty() {
            return Ok(Matrix::zeros(n));
        }
        if set.len() == self.clusters.len() {
            return Ok(Matrix::identity(n));
        }
        let (s, m) = self.reordered(&set);
        let y = self.split(&s, m)?;
        let mut block = DMatrix::<C64>::zeros(n, n);
        for i in 0..m {
            block[(i, i)] = C64::new(1.0, 0.0);
        }
        block.view_mut((0, m), (m, n - m)).copy_from(&y);
        let p = &s.q * block * s.q.adjoint();
        let p = Matrix::from_parts(p, false);
        if self.is_conjugation_closed(&set) {
            p.coerce_real(self.tol.imag * p.norm().max(1.0))
        } else {
            Ok(p)
        }
    }

    pub fn resolve_subset(&self, class: &SpectralClassification, subset: &Subset) -> Result<Vec<usize>> {
        let mut ids = match subset {
            Subset::Zero => class.zero_set.clone(),
            Subset::Forward => class.forward_set.clone(),
            Subset::Stable => {
                let mut v = class.zero_set.clone();
                v.extend(&class.forward_set);
                v
            }
            Subset::Backward => class.backward_set.clone(),
            Subset::Unit => class.unit_set.clone(),
            Subset::Frequency(theta) => {
                match class.cluster_for_frequency(*theta, 1e-9f64.max(class.tol_unit)) {
                    Some(c) => vec![c],
                    None => {
                        return Err(Error::Input(format!(
                            "frequency {theta} is not in Θ = {:?}",
                            class.frequencies()
                        )))
                    }
                }
            }
            Subset::Clusters(ids) => {
                self.check_ids(ids)?;
                ids.clone()
            }
        };
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// Spectral projector for a subset of the classified spectrum.
    pub fn projector(&self, class: &SpectralClassification, subset: Subset) -> Result<SpectralProjector> {
        let ids = self.resolve_subset(class, &subset)?;
        let matrix = self.projector_for(&ids)?;
        let rank = ids
            .iter()
            .map(|&i| self.clusters[i].algebraic_multiplicity)
            .sum();
        Ok(SpectralProjector {
            subset,
            cluster_ids: ids,
            matrix,
            rank,
        })
    }

    /// Drazin inverse through the core–nilpotent split of the Schur form.
    pub fn drazin(&self, class: &SpectralClassification) -> Result<Matrix> {
        let n = self.matrix.dim();
        let core: BTreeSet<usize> = (0..self.clusters.len())
            .filter(|i| !class.zero_set.contains(i))
            .collect();
        if core.is_empty() {
            return Ok(Matrix::zeros(n));
        }
        let (s, m) = self.reordered(&core);
        let t11 = s.t.view((0, 0), (m, m)).into_owned();
        let t11_inv = invert_upper_triangular(&t11)?;
        let mut block = DMatrix::<C64>::zeros(n, n);
        block.view_mut((0, 0), (m, m)).copy_from(&t11_inv);
        if m < n {
            let y = self.split(&s, m)?;
            block
                .view_mut((0, m), (m, n - m))
                .copy_from(&(&t11_inv * y));
        }
        let d = &s.q * block * s.q.adjoint();
        let d = Matrix::from_parts(d, false);
        if self.matrix.is_real_input() {
            d.coerce_real(self.tol.imag * d.norm().max(1.0))
        } else {
            Ok(d)
        }
    }
}

fn invert_upper_triangular(t: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let m = t.nrows();
    let mut inv = DMatrix::<C64>::zeros(m, m);
    for j in 0..m {
        for i in (0..=j).rev() {
            let mut s = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            for k in i + 1..=j {
                s -= t[(i, k)] * inv[(k, j)];
            }
            let d = t[(i, i)];
            if d.norm() == 0.0 {
                return Err(Error::numeric("singular core block in Drazin split"));
            }
            inv[(i, j)] = s / d;
        }
    }
    Ok(inv)
}

/// `ρ(M)`: largest cluster modulus.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(eig_decompose(m, &Tolerances::default())?.spectral_radius())
}

/// Convenience: decomposition, classification and one projector.
pub fn spectral_projector(
    m: &Matrix,
    class: &SpectralClassification,
    subset: Subset,
    tol: &Tolerances,
) -> Result<SpectralProjector> {
    eig_decompose(m, tol)?.projector(class, subset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decompose(n: usize, rows: &[f64]) -> (SpectralDecomposition, SpectralClassification) {
        let m = Matrix::from_rows(n, rows).unwrap();
        let d = eig_decompose(&m, &Tolerances::default()).unwrap();
        let c = d.classify();
        (d, c)
    }

    fn close(a: &Matrix, rows: &[f64], tol: f64) -> bool {
        let n = a.dim();
        let b = Matrix::from_rows(n, rows).unwrap();
        a.dist(&b) <= tol
    }

    #[test]
    fn diagonal_clusters() {
        let (d, c) = decompose(2, &[0.5, 0.0, 0.0, 2.0]);
        assert_eq!(d.clusters().len(), 2);
        assert_eq!(c.forward_set.len(), 1);
        assert_eq!(c.backward_set.len(), 1);
        assert!(c.unit_frequencies.is_empty());
        let f = c.forward_set[0];
        assert!((d.clusters()[f].value - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(d.clusters()[f].algebraic_multiplicity, 1);
    }

    #[test]
    fn nilpotent_block_is_one_cluster_of_index_two() {
        let (d, c) = decompose(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(d.clusters().len(), 1);
        assert_eq!(d.clusters()[0].algebraic_multiplicity, 2);
        assert_eq!(d.clusters()[0].index, 2);
        assert_eq!(c.zero_set, vec![0]);
    }

    #[test]
    fn rotation_frequencies() {
        let (d, c) = decompose(2, &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(d.clusters().len(), 2);
        assert_eq!(c.unit_set.len(), 2);
        let f = c.frequencies();
        assert!((f[0] + PI / 2.0).abs() < 1e-15);
        assert!((f[1] - PI / 2.0).abs() < 1e-15);
        assert_eq!(f[0], -f[1]);
        // θ = π/2 ↔ eigenvalue e^{−iπ/2} = −i
        let cl = c.cluster_for_frequency(PI / 2.0, 1e-12).unwrap();
        assert!((d.clusters()[cl].value - C64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn i2_configuration() {
        // Jordan block at 1 plus a stable root.
        let (d, c) = decompose(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(c.frequencies(), vec![0.0]);
        assert_eq!(c.index_at(0.0, 1e-12), Some(2));
        assert_eq!(c.forward_set.len(), 1);
        assert_eq!(d.clusters()[c.forward_set[0]].index, 1);
    }

    #[test]
    fn projectors_of_upper_triangular_example() {
        let (d, c) = decompose(2, &[1.0, 1.0, 0.0, 0.5]);
        let unit = d.projector(&c, Subset::Unit).unwrap();
        let stable = d.projector(&c, Subset::Stable).unwrap();
        assert!(close(&unit.matrix, &[1.0, 2.0, 0.0, 0.0], 1e-13));
        assert!(close(&stable.matrix, &[0.0, -2.0, 0.0, 1.0], 1e-13));
        assert!(unit.matrix.is_real_input());
        assert_eq!(unit.rank, 1);
    }

    #[test]
    fn empty_and_full_subsets() {
        let (d, c) = decompose(2, &[0.5, 0.0, 0.0, 0.25]);
        let p = d.projector(&c, Subset::Backward).unwrap();
        assert_eq!(p.matrix, Matrix::zeros(2));
        assert_eq!(p.rank, 0);
        let p = d.projector(&c, Subset::Stable).unwrap();
        assert_eq!(p.matrix, Matrix::identity(2));
    }

    #[test]
    fn unknown_cluster_is_input_error() {
        let (d, c) = decompose(2, &[0.5, 0.0, 0.0, 2.0]);
        assert!(matches!(
            d.projector(&c, Subset::Clusters(vec![7])),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            d.projector(&c, Subset::Frequency(0.0)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn index_examples() {
        let (d, _) = decompose(2, &[1.0, 1.0, 0.0, 1.0]);
        assert_eq!(d.clusters()[0].index, 2);
        let (d, _) = decompose(2, &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(d.clusters().len(), 1);
        assert_eq!(d.clusters()[0].index, 1);
        let (d, c) = decompose(2, &[1.0, 1.0, 0.0, 0.5]);
        assert_eq!(d.clusters()[c.forward_set[0]].index, 1);
    }

    #[test]
    fn spectral_radius_examples() {
        let r = |rows: &[f64]| spectral_radius(&Matrix::from_rows(2, rows).unwrap()).unwrap();
        assert!((r(&[0.5, 0.0, 0.0, -0.25]) - 0.5).abs() < 1e-15);
        assert!((r(&[0.0, -1.0, 1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((r(&[1.0, 1.0, 0.0, 0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defective_triple_merges() {
        // V J V^{-1} with a size-3 Jordan block at 1 and a stable root 0.25.
        let v = DMatrix::from_row_slice(4, 4, &[
            1.0, 2.0, 0.0, 1.0, //
            0.0, 1.0, 1.0, 0.0, //
            1.0, 0.0, 1.0, 2.0, //
            0.0, 1.0, 0.0, 1.0,
        ]);
        let j = DMatrix::from_row_slice(4, 4, &[
            1.0, 1.0, 0.0, 0.0, //
            0.0, 1.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 0.25,
        ]);
        let phi = &v * j * v.clone().try_inverse().unwrap();
        let m = Matrix::from_real(&phi).unwrap();
        let d = eig_decompose(&m, &Tolerances::default()).unwrap();
        let c = d.classify();
        assert_eq!(d.clusters().len(), 2);
        assert_eq!(c.index_at(0.0, 1e-12), Some(3));
        assert_eq!(d.clusters()[c.unit_set[0]].algebraic_multiplicity, 3);
    }
}
