mod common;

use arflow::linalg::{drazin_inverse, eig_decompose, signed_power, spectral_radius, Matrix, Subset};
use arflow::oracles::drazin_axiom_check;
use arflow::Tolerances;
use common::{corpus, real_matrix};

#[test]
fn nonsingular_drazin_is_inverse() {
    let d = drazin_inverse(&real_matrix(2, &[2.0, 0.0, 0.0, -1.0])).unwrap();
    assert!(d.dist(&real_matrix(2, &[0.5, 0.0, 0.0, -1.0])) < 1e-15);
}

#[test]
fn nilpotent_drazin_is_zero() {
    let d = drazin_inverse(&real_matrix(2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
    assert!(d.norm() < 1e-15);
}

#[test]
fn idempotent_is_its_own_drazin_inverse() {
    let m = real_matrix(2, &[1.0, 1.0, 0.0, 0.0]);
    let d = drazin_inverse(&m).unwrap();
    assert!(d.dist(&m) < 1e-14);
    let ax = drazin_axiom_check(&m, &m);
    assert!(ax.dmd < 1e-15 && ax.commute < 1e-15 && ax.power < 1e-15);
}

#[test]
fn signed_power_examples() {
    let p = signed_power(&real_matrix(1, &[2.0]), -3).unwrap();
    assert!((p.entry(0, 0).re - 0.125).abs() < 1e-16);
    let z = signed_power(&real_matrix(2, &[0.0, 1.0, 0.0, 0.0]), -1).unwrap();
    assert!(z.norm() < 1e-15);

    let phi = real_matrix(2, &[1.0, 1.0, 0.0, 0.5]);
    let dec = eig_decompose(&phi, &Tolerances::default()).unwrap();
    let pf = dec.projector(&dec.classify(), Subset::Forward).unwrap().matrix;
    let inv = signed_power(&phi, -1).unwrap();
    assert!(inv.mul(&phi).mul(&pf).dist(&pf) < 1e-14);
    assert!(signed_power(&phi, 3).unwrap().dist(&phi.pow(3)) < 1e-14);
}

#[test]
fn axioms_and_eigen_scaling_over_corpus() {
    for cm in corpus() {
        let m = cm.matrix();
        let n = m.dim();
        let tol = Tolerances::default();
        let dec = eig_decompose(&m, &tol).unwrap();
        let class = dec.classify();
        let d = dec.drazin(&class).unwrap();
        let ax = drazin_axiom_check(&m, &d);
        let bound = 1e-8 * ax.scale;
        assert!(ax.dmd <= bound && ax.commute <= bound && ax.power <= bound, "#{}: {ax:?}", cm.id);

        let oracle = Matrix::from_real(&cm.oracle_drazin()).unwrap();
        assert!(d.dist(&oracle) <= 1e-8 * oracle.norm().max(1.0) * m.norm().max(1.0).powi(n as i32), "#{}", cm.id);

        let pb = dec.projector(&class, Subset::Backward).unwrap().matrix;
        if pb.norm() > 0.0 {
            assert!(spectral_radius(&d.mul(&pb)).unwrap() < 1.0 - 1e-9, "#{}", cm.id);
        }
        for k in 0..dec.clusters().len() {
            let c = &dec.clusters()[k];
            if c.value.norm() < 1e-6 || c.index != 1 {
                continue;
            }
            let p = dec.projector(&class, Subset::Clusters(vec![k])).unwrap().matrix;
            let lhs = d.mul(&p);
            let rhs = p.scale(c.value.inv());
            assert!(lhs.dist(&rhs) <= 1e-8 * m.norm().max(1.0).powi(n as i32) / c.value.norm(), "#{}", cm.id);
        }
    }
}

#[test]
fn wrong_guess_is_flagged() {
    let m = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
    let ax = drazin_axiom_check(&m, &m);
    assert!((ax.dmd - 1.0).abs() < 1e-15);
    assert!(ax.power < 1e-15);
}

#[test]
fn nonsingular_inverse_passes_axioms() {
    let m = real_matrix(3, &[2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 1.0]);
    let inv = Matrix::from_real(&m.real_part().try_inverse().unwrap()).unwrap();
    let ax = drazin_axiom_check(&m, &inv);
    assert!(ax.dmd < 1e-12 && ax.commute < 1e-12 && ax.power < 1e-10 * ax.scale);
}
