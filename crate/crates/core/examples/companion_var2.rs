//! A VAR(2) in companion form: x_t = A₁x_{t−1} + A₂x_{t−2} + ε_t.

use arflow::linalg::build_companion;
use arflow::{SupportInfo, TimeWindowSequence, Tolerances, VarModel};
use nalgebra::{DMatrix, DVector};

fn main() -> arflow::Result<()> {
    let a1 = DMatrix::from_row_slice(2, 2, &[1.2, 0.1, 0.0, 0.5]);
    let a2 = DMatrix::from_row_slice(2, 2, &[-0.2, 0.0, 0.3, 0.0]);
    let phi = build_companion(&[a1.clone(), a2.clone()])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;
    let class = model.classification();
    for (c, g) in class.clusters.iter().zip(&class.groups) {
        println!("λ = {:+.5} {:+.5}i  {:?}", c.value.re, c.value.im, g);
    }

    // Innovations enter the first block only.
    let eps = TimeWindowSequence::from_fn(-6, 6, 4, |t| {
        let e = if t == 0 { 1.0 } else { 0.0 };
        DVector::from_vec(vec![e, 0.0, 0.0, 0.0]).map(|x| arflow::C64::new(x, 0.0))
    })?;
    let initial = model.project_initial(&DVector::zeros(4), &DVector::zeros(4), &DVector::zeros(4));
    let x = model.synthesize(&eps, &initial, &SupportInfo::compact(&eps))?;

    let mut worst: f64 = 0.0;
    for t in -4..=6 {
        let y = |s: i64| DVector::from_vec(vec![x.at(s)[0].re, x.at(s)[1].re]);
        let e = DVector::from_vec(vec![eps.at(t)[0].re, eps.at(t)[1].re]);
        worst = worst.max((y(t) - &a1 * y(t - 1) - &a2 * y(t - 2) - e).norm());
    }
    println!("VAR(2) residual on the first block: {worst:.1e}");
    for t in -6..=6 {
        println!("t = {t:>2}: y = ({:>9.5}, {:>9.5})", x.at(t)[0].re, x.at(t)[1].re);
    }
    Ok(())
}
