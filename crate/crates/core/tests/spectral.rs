mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use arflow::linalg::{
    build_companion, classify_spectrum, eig_decompose, eigen_index, spectral_projector, spectral_radius, Group,
    Matrix, SpectralClassification, SpectralDecomposition, Subset, C64,
};
use arflow::Tolerances;
use common::{corpus, real_matrix};
use nalgebra::DMatrix;

fn decompose(m: &Matrix) -> (SpectralDecomposition, SpectralClassification) {
    let d = eig_decompose(m, &Tolerances::default()).unwrap();
    let c = d.classify();
    (d, c)
}

fn near(z: C64, re: f64, im: f64) -> bool {
    (z - C64::new(re, im)).norm() < 1e-12
}

#[test]
fn diagonal_has_two_simple_clusters() {
    let (d, c) = decompose(&real_matrix(2, &[0.5, 0.0, 0.0, 2.0]));
    let cl = d.clusters();
    assert_eq!(cl.len(), 2);
    assert!(near(cl[0].value, 0.5, 0.0) && cl[0].algebraic_multiplicity == 1);
    assert!(near(cl[1].value, 2.0, 0.0) && cl[1].algebraic_multiplicity == 1);
    assert_eq!(c.forward_set, vec![0]);
    assert_eq!(c.backward_set, vec![1]);
    assert!(c.unit_frequencies.is_empty() && c.zero_set.is_empty());
}

#[test]
fn nilpotent_jordan_block_is_one_cluster_of_index_two() {
    let (d, c) = decompose(&real_matrix(2, &[0.0, 1.0, 0.0, 0.0]));
    assert_eq!(d.clusters().len(), 1);
    let z = &d.clusters()[0];
    assert_eq!((z.algebraic_multiplicity, z.index), (2, 2));
    assert!(z.value.norm() < 1e-12);
    assert_eq!(c.groups, vec![Group::Zero]);
}

#[test]
fn rotation_has_frequencies_plus_minus_half_pi() {
    let (d, c) = decompose(&real_matrix(2, &[0.0, -1.0, 1.0, 0.0]));
    assert_eq!(d.clusters().len(), 2);
    assert_eq!(c.unit_set.len(), 2);
    let mut th = c.frequencies();
    th.sort_by(f64::total_cmp);
    assert_eq!(th, vec![-FRAC_PI_2, FRAC_PI_2]);
    for f in &c.unit_frequencies {
        let lambda = d.clusters()[f.cluster].value;
        assert!((lambda - C64::from_polar(1.0, -f.theta)).norm() < 1e-12);
    }
}

#[test]
fn classify_spectrum_on_clusters() {
    let (d, _) = decompose(&real_matrix(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5]));
    let c = classify_spectrum(d.clusters(), 1e-9);
    assert_eq!(c.frequencies(), vec![0.0]);
    assert_eq!(c.index_at(0.0, 1e-12), Some(2));
    assert_eq!(c.forward_set.len(), 1);
    assert!(near(d.clusters()[c.forward_set[0]].value, 0.5, 0.0));
}

#[test]
fn diagonal_projectors() {
    let m = real_matrix(2, &[0.5, 0.0, 0.0, 2.0]);
    let (d, c) = decompose(&m);
    let ps = d.projector(&c, Subset::Stable).unwrap().matrix;
    let pb = d.projector(&c, Subset::Backward).unwrap().matrix;
    assert!(ps.dist(&real_matrix(2, &[1.0, 0.0, 0.0, 0.0])) < 1e-14);
    assert!(pb.dist(&real_matrix(2, &[0.0, 0.0, 0.0, 1.0])) < 1e-14);
}

#[test]
fn triangular_projectors_match_eigenvector_construction() {
    let m = real_matrix(2, &[1.0, 1.0, 0.0, 0.5]);
    let tol = Tolerances::default();
    let (d, c) = decompose(&m);
    let pu = spectral_projector(&m, &c, Subset::Unit, &tol).unwrap().matrix;
    let ps = d.projector(&c, Subset::Stable).unwrap().matrix;
    // Eigenvectors (1, 0) and (2, −1): V = [[1, 2], [0, −1]] is its own inverse.
    assert!(pu.dist(&real_matrix(2, &[1.0, 2.0, 0.0, 0.0])) < 1e-12);
    assert!(ps.dist(&real_matrix(2, &[0.0, -2.0, 0.0, 1.0])) < 1e-12);
    assert!(pu.mul(&pu).dist(&pu) < 1e-12);
    assert!(pu.mul(&m).dist(&m.mul(&pu)) < 1e-12);
    assert!(pu.add(&ps).dist(&Matrix::identity(2)) < 1e-12);
}

#[test]
fn eigen_index_examples() {
    let tol = Tolerances::default();
    for (rows, lambda, want) in [
        (vec![1.0, 1.0, 0.0, 1.0], 1.0, 2),
        (vec![1.0, 0.0, 0.0, 1.0], 1.0, 1),
        (vec![1.0, 1.0, 0.0, 0.5], 0.5, 1),
    ] {
        let m = real_matrix(2, &rows);
        let (d, c) = decompose(&m);
        let id = d.clusters().iter().position(|k| near(k.value, lambda, 0.0)).unwrap();
        let p = d.projector(&c, Subset::Clusters(vec![id])).unwrap();
        assert_eq!(eigen_index(&m, &d.clusters()[id], &p, &tol).unwrap(), want);
    }
}

#[test]
fn spectral_radius_examples() {
    assert!((spectral_radius(&real_matrix(2, &[0.5, 0.0, 0.0, -0.25])).unwrap() - 0.5).abs() < 1e-15);
    assert!((spectral_radius(&real_matrix(2, &[0.0, -1.0, 1.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
    assert!((spectral_radius(&real_matrix(2, &[1.0, 1.0, 0.0, 0.5])).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn companion_examples() {
    let a = DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.4]);
    assert_eq!(build_companion(&[a.clone()]).unwrap().real_part(), a);

    let c = build_companion(&[DMatrix::from_element(1, 1, 0.7), DMatrix::from_element(1, 1, -0.2)]).unwrap();
    assert_eq!(c.real_part(), DMatrix::from_row_slice(2, 2, &[0.7, -0.2, 1.0, 0.0]));

    let c = build_companion(&[DMatrix::from_element(1, 1, 0.25), DMatrix::from_element(1, 1, 0.25)]).unwrap();
    let (d, cl) = decompose(&c);
    let mut got: Vec<f64> = d.clusters().iter().map(|k| k.value.re).collect();
    got.sort_by(f64::total_cmp);
    let disc = (0.0625f64 + 1.0).sqrt();
    let want = [(0.25 - disc) / 2.0, (0.25 + disc) / 2.0];
    assert!((got[0] - want[0]).abs() < 1e-14 && (got[1] - want[1]).abs() < 1e-14);
    assert_eq!(cl.forward_set.len(), 2);
}

#[test]
fn partition_and_projector_laws_over_corpus() {
    for cm in corpus().iter().take(120) {
        let m = cm.matrix();
        let (d, c) = decompose(&m);
        let n = m.dim();
        let tol = 1e-8 * m.norm().max(1.0).powi(n as i32);
        let total: usize = d.clusters().iter().map(|k| k.algebraic_multiplicity).sum();
        assert_eq!(total, n, "#{}", cm.id);
        for k in d.clusters() {
            assert!(1 <= k.index && k.index <= k.algebraic_multiplicity);
        }
        let th = c.frequencies();
        for &t in &th {
            if t != 0.0 && t != PI {
                assert!(th.iter().any(|s| (s + t).abs() < 1e-7), "#{} Θ not closed", cm.id);
            }
        }

        let get = |s: Subset| d.projector(&c, s).unwrap();
        let (pz, pf, ps, pb, pu) =
            (get(Subset::Zero), get(Subset::Forward), get(Subset::Stable), get(Subset::Backward), get(Subset::Unit));
        for p in [&pz, &pf, &ps, &pb, &pu] {
            assert!(p.matrix.mul(&p.matrix).dist(&p.matrix) <= tol, "#{} idempotent", cm.id);
            assert!(p.matrix.mul(&m).dist(&m.mul(&p.matrix)) <= tol, "#{} commutes", cm.id);
            let trace: f64 = (0..n).map(|i| p.matrix.entry(i, i).re).sum();
            assert!((trace - p.rank as f64).abs() <= tol, "#{} rank", cm.id);
        }
        assert!(ps.matrix.add(&pb.matrix).add(&pu.matrix).dist(&Matrix::identity(n)) <= tol);
        assert!(ps.matrix.dist(&pz.matrix.add(&pf.matrix)) <= tol);
        assert!(pf.matrix.mul(&pb.matrix).norm() <= tol);
        assert!(pu.matrix.max_imag() <= tol);
        for f in &c.unit_frequencies {
            let p = get(Subset::Frequency(f.theta)).matrix;
            let q = get(Subset::Frequency(-f.theta)).matrix;
            assert!(q.dist(&p.conj()) <= tol, "#{} conjugate projectors", cm.id);
        }
    }
}
