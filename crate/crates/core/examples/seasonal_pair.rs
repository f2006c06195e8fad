//! A conjugate pair of unit roots e^{∓iθ}: outward flows in real
//! trigonometric form.

use std::f64::consts::PI;

use arflow::flows::{trig_outward_pair, TrigInput};
use arflow::{Matrix, SupportInfo, TimeWindowSequence, Tolerances, VarModel, Window};
use nalgebra::DVector;

fn main() -> arflow::Result<()> {
    let theta = 2.0 * PI / 3.0;
    let (c, s) = (theta.cos(), theta.sin());
    #[rustfmt::skip]
    let phi = Matrix::from_rows(3, &[
        c,  -s,  0.0,
        s,   c,  0.0,
        0.0, 0.0, 0.3,
    ])?;
    let tol = Tolerances::default();
    let model = VarModel::new(&phi, &tol)?;
    println!("Θ = {:?}", model.classification().frequencies());

    let p_plus = model.unit(theta).expect("θ is a frequency").projector.clone();
    let p_minus = model.unit(-theta).expect("−θ is a frequency").projector.clone();
    let window = Window::new(-6, 6)?;

    let x0 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
    let trig = trig_outward_pair(&phi, theta, &p_plus, &p_minus, TrigInput::Initial(&x0), window, &tol)?;
    let v = model.project_initial(&DVector::zeros(3), &DVector::zeros(3), &x0);
    let general = model.predetermined_outward(&v.v_outward, window)?;
    println!("initial: trig vs general max gap {:.1e}", trig.max_dist(&general));

    let eps = TimeWindowSequence::delta(-6, 6, 2, &DVector::from_vec(vec![0.0, 1.0, 1.0]))?;
    let trig = trig_outward_pair(&phi, theta, &p_plus, &p_minus, TrigInput::Innovations(&eps), window, &tol)?;
    let general = model.outward_eps_flow(&eps)?;
    println!("innovations: trig vs general max gap {:.1e}", trig.max_dist(&general));

    let x = model.synthesize(&eps, &v, &SupportInfo::compact(&eps))?;
    for t in window.t_min..=window.t_max {
        println!("t = {t:>2}: ({:>7.4}, {:>7.4})", x.at(t)[0].re, x.at(t)[1].re);
    }
    Ok(())
}
