//! A unit root with a Jordan block of size 2: the predetermined outward flow
//! is a linear polynomial in t.

use arflow::flows::binomial_outward;
use arflow::{Matrix, Tolerances, VarModel, Window};
use nalgebra::DVector;

fn main() -> arflow::Result<()> {
    #[rustfmt::skip]
    let phi = Matrix::from_rows(3, &[
        1.0, 1.0, 0.0,
        0.0, 1.0, 0.0,
        0.0, 0.0, 0.5,
    ])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;
    let unit = model.unit(0.0).expect("θ = 0 is a frequency");
    println!("index at θ = 0: {}", unit.index);

    let v = model.project_initial(&DVector::zeros(3), &DVector::zeros(3), &DVector::from_vec(vec![2.0, 1.0, 7.0]));
    let window = Window::new(-4, 6)?;
    let flow = model.predetermined_outward(&v.v_outward, window)?;
    let closed = binomial_outward(unit, &v.v_outward.map(|x| arflow::C64::new(x, 0.0)), window)?;
    for t in -4..=6 {
        let x = flow.at(t);
        println!("t = {t:>2}: ({:>5.1}, {:>4.1}, {:>3.1})", x[0].re, x[1].re, x[2].re);
    }
    println!("max gap to the binomial form: {:.1e}", flow.max_dist(&closed));
    Ok(())
}
