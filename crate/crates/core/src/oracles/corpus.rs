//! Seeded matrices with exactly known Jordan structure.
//!
//! Each matrix is `Φ = V J V^{−1}` with `J` in real Jordan form and `V` a
//! product of integer elementary matrices, so `V^{−1}` is exact. Spectral
//! projectors follow from the Jordan basis directly:
//! `P_A = V_c diag(1_A) V_c^{−1}` where `V_c` complexifies each rotation
//! block `[[a, −b], [b, a]]` through its eigenvectors `(1, ∓i)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Matrix, C64};
use crate::seq::TimeWindowSequence;
use crate::Result;

/// Environment variable overriding the corpus seed.
pub const SEED_ENV: &str = "ARFLOW_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

pub type CorpusRng = ChaCha8Rng;

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eig {
    Real(f64),
    /// The conjugate pair `re ± i·im`, `im > 0`.
    Pair { re: f64, im: f64 },
}

impl Eig {
    pub fn width(&self) -> usize {
        match self {
            Eig::Real(_) => 1,
            Eig::Pair { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub eig: Eig,
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Diagonal,
    Defective,
    Rotation,
    Nilpotent,
    Mixed,
}

pub const CATEGORIES: [Category; 5] = [
    Category::Diagonal,
    Category::Defective,
    Category::Rotation,
    Category::Nilpotent,
    Category::Mixed,
];

const REAL_MENU: [f64; 7] = [0.0, 0.5, -0.5, 2.0, -1.5, 1.0, -1.0];
const UNIT_REAL: [f64; 2] = [1.0, -1.0];

fn pair_menu() -> [Eig; 4] {
    [
        Eig::Pair { re: 0.0, im: 1.0 },
        Eig::Pair {
            re: (2.0 * PI / 3.0).cos(),
            im: (2.0 * PI / 3.0).sin(),
        },
        Eig::Pair { re: 0.3, im: 0.4 },
        Eig::Pair { re: 1.2, im: 0.9 },
    ]
}

fn unit_pairs() -> [Eig; 2] {
    let p = pair_menu();
    [p[0], p[1]]
}

/// Distinct eigenvalue with its multiplicity and index, as built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownEigenvalue {
    pub value: C64,
    pub multiplicity: usize,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct CorpusMatrix {
    pub id: usize,
    pub category: Category,
    pub blocks: Vec<JordanBlock>,
    pub phi: DMatrix<f64>,
    pub basis: DMatrix<f64>,
    pub basis_inv: DMatrix<f64>,
}

pub fn real_jordan(blocks: &[JordanBlock]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.size * b.eig.width()).sum();
    let mut j = DMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        match b.eig {
            Eig::Real(l) => {
                for i in 0..b.size {
                    j[(o + i, o + i)] = l;
                    if i + 1 < b.size {
                        j[(o + i, o + i + 1)] = 1.0;
                    }
                }
            }
            Eig::Pair { re, im } => {
                for i in 0..b.size {
                    let k = o + 2 * i;
                    j[(k, k)] = re;
                    j[(k, k + 1)] = -im;
                    j[(k + 1, k)] = im;
                    j[(k + 1, k + 1)] = re;
                    if i + 1 < b.size {
                        j[(k, k + 2)] = 1.0;
                        j[(k + 1, k + 3)] = 1.0;
                    }
                }
            }
        }
        o += b.size * b.eig.width();
    }
    j
}

/// `V` and `V^{−1}` built from integer shears; entries stay within `±max_entry`.
pub fn unimodular_pair(rng: &mut CorpusRng, n: usize, steps: usize, max_entry: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut v = DMatrix::<f64>::identity(n, n);
    let mut vi = DMatrix::<f64>::identity(n, n);
    if n < 2 {
        return (v, vi);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        // V ← V (I + c e_i e_jᵀ): column j += c·column i.
        let mut trial = v.clone();
        for r in 0..n {
            trial[(r, j)] += c * v[(r, i)];
        }
        if trial.amax() > max_entry {
            continue;
        }
        v = trial;
        // V⁻¹ ← (I − c e_i e_jᵀ) V⁻¹: row i −= c·row j.
        for col in 0..n {
            let d = vi[(j, col)];
            vi[(i, col)] -= c * d;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let v = DMatrix::from_fn(n, n, |r, c| v[(perm[r], c)]);
    let vi = DMatrix::from_fn(n, n, |r, c| vi[(r, perm[c])]);
    (v, vi)
}

impl CorpusMatrix {
    pub fn from_blocks(
        id: usize,
        category: Category,
        blocks: Vec<JordanBlock>,
        rng: &mut CorpusRng,
    ) -> Self {
        let j = real_jordan(&blocks);
        let n = j.nrows();
        let (basis, basis_inv) = unimodular_pair(rng, n, 2 * n, 3.0);
        let phi = &basis * j * &basis_inv;
        CorpusMatrix {
            id,
            category,
            blocks,
            phi,
            basis,
            basis_inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.nrows()
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_real(&self.phi).expect("corpus matrices are finite and square")
    }

    /// Eigenvalue attached to each column of the complexified basis.
    pub fn column_eigenvalues(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            for _ in 0..b.size {
                match b.eig {
                    Eig::Real(l) => out.push(C64::new(l, 0.0)),
                    Eig::Pair { re, im } => {
                        out.push(C64::new(re, im));
                        out.push(C64::new(re, -im));
                    }
                }
            }
        }
        out
    }

    /// `(V_c, V_c^{−1})` with every rotation block diagonalized.
    pub fn complex_basis(&self) -> (DMatrix<C64>, DMatrix<C64>) {
        let n = self.dim();
        let mut u = DMatrix::<C64>::identity(n, n);
        let mut ui = DMatrix::<C64>::identity(n, n);
        let mut o = 0;
        for b in &self.blocks {
            if let Eig::Pair { .. } = b.eig {
                for i in 0..b.size {
                    let k = o + 2 * i;
                    u[(k, k)] = C64::new(1.0, 0.0);
                    u[(k, k + 1)] = C64::new(1.0, 0.0);
                    u[(k + 1, k)] = C64::new(0.0, -1.0);
                    u[(k + 1, k + 1)] = C64::new(0.0, 1.0);
                    ui[(k, k)] = C64::new(0.5, 0.0);
                    ui[(k, k + 1)] = C64::new(0.0, 0.5);
                    ui[(k + 1, k)] = C64::new(0.5, 0.0);
                    ui[(k + 1, k + 1)] = C64::new(0.0, -0.5);
                }
            }
            o += b.size * b.eig.width();
        }
        let v = self.basis.map(|x| C64::new(x, 0.0));
        let vi = self.basis_inv.map(|x| C64::new(x, 0.0));
        (v * u, ui * vi)
    }

    /// Spectral projector onto the eigenvalues selected by `keep`, from the Jordan basis.
    pub fn oracle_projector(&self, keep: impl Fn(C64) -> bool) -> DMatrix<C64> {
        let (vc, vci) = self.complex_basis();
        let mask = self.column_eigenvalues();
        let mut scaled = vc.clone();
        for (c, l) in mask.iter().enumerate() {
            if !keep(*l) {
                scaled.column_mut(c).fill(C64::new(0.0, 0.0));
            }
        }
        scaled * vci
    }

    /// Drazin inverse from the Jordan form: nonzero blocks inverted, nilpotent blocks zeroed.
    pub fn oracle_drazin(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut jd = DMatrix::zeros(n, n);
        let mut o = 0;
        for b in &self.blocks {
            let w = b.size * b.eig.width();
            if b.eig != Eig::Real(0.0) {
                let inv = real_jordan(std::slice::from_ref(b))
                    .try_inverse()
                    .expect("a Jordan block with nonzero eigenvalue is invertible");
                jd.view_mut((o, o), (w, w)).copy_from(&inv);
            }
            o += w;
        }
        &self.basis * jd * &self.basis_inv
    }

    pub fn known_eigenvalues(&self) -> Vec<KnownEigenvalue> {
        let mut out: Vec<KnownEigenvalue> = Vec::new();
        let mut push = |value: C64, size: usize| {
            if let Some(k) = out.iter_mut().find(|k| k.value == value) {
                k.multiplicity += size;
                k.index = k.index.max(size);
            } else {
                out.push(KnownEigenvalue {
                    value,
                    multiplicity: size,
                    index: size,
                });
            }
        };
        for b in &self.blocks {
            match b.eig {
                Eig::Real(l) => push(C64::new(l, 0.0), b.size),
                Eig::Pair { re, im } => {
                    push(C64::new(re, im), b.size);
                    push(C64::new(re, -im), b.size);
                }
            }
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        self.blocks.iter().all(|b| b.eig == Eig::Real(0.0))
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.iter().all(|b| b.eig != Eig::Real(0.0))
    }
}

fn pick_size(rng: &mut CorpusRng, width: usize, remaining: usize, max: usize) -> usize {
    let cap = (remaining / width).min(max);
    rng.gen_range(1..=cap)
}

fn fill_blocks(rng: &mut CorpusRng, category: Category, n: usize) -> Vec<JordanBlock> {
    let mut blocks = Vec::new();
    let mut remaining = n;
    let pairs = pair_menu();
    while remaining > 0 {
        let use_pair = remaining >= 2 && rng.gen_bool(0.35);
        let block = match category {
            Category::Nilpotent => JordanBlock {
                eig: Eig::Real(0.0),
                size: pick_size(rng, 1, remaining, 3),
            },
            Category::Diagonal => {
                let eig = if use_pair {
                    *pairs.choose(rng).unwrap()
                } else {
                    Eig::Real(*REAL_MENU.choose(rng).unwrap())
                };
                JordanBlock { eig, size: 1 }
            }
            Category::Rotation => {
                let eig = if use_pair {
                    *unit_pairs().choose(rng).unwrap()
                } else {
                    Eig::Real(*UNIT_REAL.choose(rng).unwrap())
                };
                let size = if rng.gen_bool(0.3) {
                    pick_size(rng, eig.width(), remaining, 2)
                } else {
                    1
                };
                JordanBlock { eig, size }
            }
            Category::Defective | Category::Mixed => {
                let eig = if use_pair {
                    *pairs.choose(rng).unwrap()
                } else {
                    Eig::Real(*REAL_MENU.choose(rng).unwrap())
                };
                JordanBlock {
                    eig,
                    size: pick_size(rng, eig.width(), remaining, 3),
                }
            }
        };
        remaining -= block.size * block.eig.width();
        blocks.push(block);
    }
    if category == Category::Defective && blocks.iter().all(|b| b.size == 1) && n >= 2 {
        // Force one nontrivial Jordan block.
        let eig = Eig::Real(*REAL_MENU.choose(rng).unwrap());
        let size = n.min(3);
        let mut rest = fill_blocks(rng, Category::Diagonal, n - size);
        rest.insert(0, JordanBlock { eig, size });
        return rest;
    }
    blocks
}

/// `count` matrices cycling through every category with dimensions 1 to 8.
pub fn generate(seed: u64, count: usize) -> Vec<CorpusMatrix> {
    let mut rng = rng(seed);
    (0..count)
        .map(|id| {
            let category = CATEGORIES[id % CATEGORIES.len()];
            let lo = if category == Category::Defective { 2 } else { 1 };
            let n = rng.gen_range(lo..=8);
            let blocks = fill_blocks(&mut rng, category, n);
            CorpusMatrix::from_blocks(id, category, blocks, &mut rng)
        })
        .collect()
}

/// Matrices with a stable part of modulus in [0.3, 0.6], an explosive part
/// of modulus in [1.6, 3] and unit roots of index at most two.
pub fn growth_corpus(seed: u64, count: usize) -> Vec<CorpusMatrix> {
    let mut rng = rng(seed);
    let stable = [0.4, -0.5, 0.6, 0.3];
    let explosive = [2.0, -1.6, 2.5, 3.0];
    (0..count)
        .map(|id| {
            let mut blocks = vec![
                JordanBlock {
                    eig: Eig::Real(*stable.choose(&mut rng).unwrap()),
                    size: 1,
                },
                JordanBlock {
                    eig: Eig::Real(*explosive.choose(&mut rng).unwrap()),
                    size: 1,
                },
            ];
            match rng.gen_range(0..4) {
                0 => {}
                1 => blocks.push(JordanBlock {
                    eig: Eig::Real(1.0),
                    size: rng.gen_range(1..=2),
                }),
                2 => blocks.push(JordanBlock {
                    eig: Eig::Real(-1.0),
                    size: 1,
                }),
                _ => blocks.push(JordanBlock {
                    eig: Eig::Pair { re: 0.0, im: 1.0 },
                    size: 1,
                }),
            }
            if rng.gen_bool(0.5) {
                blocks.push(JordanBlock {
                    eig: Eig::Pair { re: 0.3, im: 0.4 },
                    size: 1,
                });
            }
            blocks.shuffle(&mut rng);
            CorpusMatrix::from_blocks(id, Category::Mixed, blocks, &mut rng)
        })
        .collect()
}

/// Standard-normal-like entries (sum of uniforms), deterministic under the seed.
pub fn random_vector(rng: &mut CorpusRng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| {
        let s: f64 = (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum();
        s * 0.8660254037844386
    })
}

/// Random innovations supported on `[s_min, s_max]` inside `[t_min, t_max]`.
pub fn random_compact_eps(
    rng: &mut CorpusRng,
    n: usize,
    t_min: i64,
    t_max: i64,
    s_min: i64,
    s_max: i64,
) -> Result<TimeWindowSequence> {
    let mut eps = TimeWindowSequence::zeros(t_min, t_max, n)?;
    for t in s_min..=s_max {
        eps.set(t, random_vector(rng, n).map(|x| C64::new(x, 0.0)))?;
    }
    Ok(eps)
}
