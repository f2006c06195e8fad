mod common;

use arflow::oracles::corpus::{self, rng as corpus_rng};
use arflow::oracles::{
    iterate_recursion, subexponential_diagnostic, univariate_solution, Direction, Regime, UnivariateCase,
};
use arflow::{Error, InitialConditions, SupportInfo, TimeWindowSequence, Tolerances, VarModel};
use common::{c, real_matrix};
use nalgebra::DVector;

fn scalar(t_min: i64, t_max: i64, f: impl Fn(i64) -> f64) -> TimeWindowSequence {
    TimeWindowSequence::from_fn(t_min, t_max, 1, |t| DVector::from_element(1, c(f(t)))).unwrap()
}

fn close(s: &TimeWindowSequence, f: impl Fn(i64) -> f64, tol: f64) {
    for t in s.times() {
        let (got, want) = (s.at(t)[0].re, f(t));
        assert!((got - want).abs() <= tol * want.abs().max(1.0), "t = {t}: {got} vs {want}");
    }
}

#[test]
fn univariate_regimes() {
    let tol = Tolerances::default().unit;
    assert_eq!(UnivariateCase::new(0.5, tol).unwrap().regime, Regime::Forward);
    assert_eq!(UnivariateCase::new(-3.0, tol).unwrap().regime, Regime::Backward);
    assert_eq!(UnivariateCase::new(-1.0, tol).unwrap().regime, Regime::Outward);
    assert_eq!(UnivariateCase::new(0.0, tol).unwrap().regime, Regime::Degenerate);
    assert!(matches!(UnivariateCase::new(f64::NAN, tol), Err(Error::Input(_))));
}

#[test]
fn univariate_examples() {
    let tol = Tolerances::default().unit;
    let zero = scalar(-5, 5, |_| 0.0);
    let delta = |at: i64| scalar(-5, 5, move |t| if t == at { 1.0 } else { 0.0 });

    let x = univariate_solution(&UnivariateCase::new(0.5, tol).unwrap(), 1.0, &zero).unwrap();
    close(&x, |t| 0.5f64.powi(t as i32), 1e-15);

    let x = univariate_solution(&UnivariateCase::new(2.0, tol).unwrap(), 0.0, &delta(0)).unwrap();
    close(&x, |t| if t <= -1 { -(2f64.powi(t as i32)) } else { 0.0 }, 1e-15);

    let x = univariate_solution(&UnivariateCase::new(1.0, tol).unwrap(), 0.0, &delta(1)).unwrap();
    close(&x, |t| if t >= 1 { 1.0 } else { 0.0 }, 0.0);

    let e = scalar(-5, 5, |t| t as f64);
    let x = univariate_solution(&UnivariateCase::new(0.0, tol).unwrap(), 0.0, &e).unwrap();
    assert_eq!(x, e);

    let bad = TimeWindowSequence::zeros(-1, 1, 2).unwrap();
    assert!(univariate_solution(&UnivariateCase::new(0.5, tol).unwrap(), 0.0, &bad).is_err());
}

#[test]
fn iterate_examples() {
    let phi = real_matrix(1, &[0.5]);
    let zero = TimeWindowSequence::zeros(-4, 4, 1).unwrap();
    let x = iterate_recursion(&phi, 0, &DVector::from_element(1, 1.0), &zero).unwrap();
    close(&x, |t| 0.5f64.powi(t as i32), 1e-15);

    let nil = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
    let zero2 = TimeWindowSequence::zeros(-4, 4, 2).unwrap();
    let v = DVector::from_vec(vec![1.0, 1.0]);
    assert!(matches!(iterate_recursion(&nil, 0, &v, &zero2), Err(Error::Precondition(_))));
    let x = iterate_recursion(&nil, -4, &v, &zero2).unwrap();
    assert_eq!(x.at(-3)[0].re, 1.0);
    assert_eq!(x.at(-2).norm(), 0.0);
    assert!(iterate_recursion(&nil, 9, &v, &zero2).is_err());
}

#[test]
fn iteration_is_symmetric_in_the_anchor() {
    let seed = corpus::seed_from_env();
    let mut rng = corpus_rng(seed ^ 0x5e);
    let mut checked = 0;
    for cm in corpus::generate(seed, 120).into_iter().filter(|m| m.is_invertible()) {
        let n = cm.dim();
        let phi = cm.matrix();
        let eps = corpus::random_compact_eps(&mut rng, n, -6, 6, -2, 2).unwrap();
        let x = iterate_recursion(&phi, 0, &corpus::random_vector(&mut rng, n), &eps).unwrap();
        let real = |t: i64| x.at(t).map(|z| z.re);
        let from_left = iterate_recursion(&phi, -6, &real(-6), &eps).unwrap();
        let from_right = iterate_recursion(&phi, 6, &real(6), &eps).unwrap();
        let scale = x.sup_norm().max(1.0);
        assert!(from_left.max_dist(&from_right) <= 1e-8 * scale, "#{}", cm.id);
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn synthesize_agrees_with_iteration_for_invertible_matrices() {
    let seed = corpus::seed_from_env();
    let mut rng = corpus_rng(seed ^ 0x51);
    for cm in corpus::generate(seed, 120).into_iter().filter(|m| m.is_invertible()) {
        let n = cm.dim();
        let m = VarModel::new(&cm.matrix(), &Tolerances::default()).unwrap();
        let eps = corpus::random_compact_eps(&mut rng, n, -8, 8, -3, 3).unwrap();
        let a = corpus::random_vector(&mut rng, n);
        let b = corpus::random_vector(&mut rng, n);
        let o = corpus::random_vector(&mut rng, n);
        let ic = m.project_initial(&a, &b, &o);
        let x = m.synthesize(&eps, &ic, &SupportInfo::compact(&eps)).unwrap();
        let oracle = iterate_recursion(m.phi(), 0, &x.at(0).map(|z| z.re), &eps).unwrap();
        let scale = arflow::flows::flow_scale(m.phi(), &[&x, &eps]);
        assert!(x.max_dist(&oracle) <= 1e-8 * scale, "#{}", cm.id);
    }
}

#[test]
fn scalar_model_matches_closed_forms() {
    let tol = Tolerances::default();
    let mut rng = corpus_rng(77);
    for phi in [0.0, 0.3, -0.7, 0.999, 1.0, -1.0, 1.5, -4.0] {
        let case = UnivariateCase::new(phi, tol.unit).unwrap();
        let m = VarModel::new(&real_matrix(1, &[phi]), &tol).unwrap();
        let eps = corpus::random_compact_eps(&mut rng, 1, -10, 10, -3, 4).unwrap();
        let v = DVector::from_element(1, 1.25);
        let ic = m.project_initial(&v, &v, &v);
        let x = m.synthesize(&eps, &ic, &SupportInfo::compact(&eps)).unwrap();
        let closed = univariate_solution(&case, if phi == 0.0 { 0.0 } else { 1.25 }, &eps).unwrap();
        let scale = x.sup_norm().max(1.0);
        assert!(x.max_dist(&closed) <= 1e-10 * scale, "φ = {phi}");
    }
    let m = VarModel::new(&real_matrix(1, &[0.0]), &tol).unwrap();
    let ic = InitialConditions::zeros(1);
    let eps = scalar(-3, 3, |t| (t * t) as f64);
    assert_eq!(m.synthesize(&eps, &ic, &SupportInfo::compact(&eps)).unwrap().max_dist(&eps), 0.0);
}

#[test]
fn diagnostic_examples() {
    let noise = scalar(-60, 60, |t| ((t * 7919) % 13) as f64 / 13.0 - 0.5);
    let rep = subexponential_diagnostic(&noise, &[0.5, 0.9, 0.99]).unwrap();
    assert!(rep.all_subexponential());

    let blow = scalar(-30, 30, |t| 3f64.powi(t.abs() as i32));
    let rep = subexponential_diagnostic(&blow, &[0.3, 1.0 / 3.0 + 1e-12, 0.5, 0.9]).unwrap();
    let flags: Vec<bool> = rep.rows.iter().map(|r| r.future_growth && r.past_growth).collect();
    assert_eq!(flags, vec![false, true, true, true]);
    assert!(rep.flagged(Direction::Future) && rep.flagged(Direction::Past));
    assert!((rep.future_rate.unwrap() - 3f64.ln()).abs() < 1e-9);

    let one_sided = scalar(-30, 30, |t| if t > 0 { 2f64.powi(t as i32) } else { 1.0 });
    let rep = subexponential_diagnostic(&one_sided, &[0.9]).unwrap();
    assert!(rep.rows[0].future_growth && !rep.rows[0].past_growth);

    let zero = scalar(-10, 10, |_| 0.0);
    let rep = subexponential_diagnostic(&zero, &[0.5]).unwrap();
    assert!(rep.rows[0].nested_sums.iter().all(|s| *s == 0.0));
    assert!(rep.all_subexponential());
    assert_eq!(rep.future_rate, None);

    let rep = subexponential_diagnostic(&noise, &[0.5]).unwrap();
    let sums = &rep.rows[0].nested_sums;
    assert!(sums.windows(2).all(|w| w[0] <= w[1]));
    let direct: f64 = noise.times().map(|t| 0.5f64.powi(t.unsigned_abs() as i32) * noise.norm_at(t)).sum();
    assert!((rep.rows[0].weighted_sum() - direct).abs() < 1e-12);

    assert!(matches!(subexponential_diagnostic(&noise, &[]), Err(Error::Input(_))));
    assert!(matches!(subexponential_diagnostic(&noise, &[1.0]), Err(Error::Input(_))));
}
