//! Build a solution from initial conditions, check it against direct iteration,
//! then read the initial conditions back off the path.

use arflow::flows::verify_recursion;
use arflow::oracles::iterate_recursion;
use arflow::{Matrix, SupportInfo, TimeWindowSequence, Tolerances, VarModel};
use nalgebra::DVector;

fn main() -> arflow::Result<()> {
    #[rustfmt::skip]
    let phi = Matrix::from_rows(3, &[
        0.4, 1.0,  0.0,
        0.0, -1.8, 0.5,
        0.2, 0.0,  -1.0,
    ])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;
    let eps = TimeWindowSequence::from_fn(-10, 10, 3, |t| {
        let x = if t.abs() <= 3 { (t as f64 * 0.7).cos() } else { 0.0 };
        DVector::from_vec(vec![x, -x, 0.5 * x]).map(|v| arflow::C64::new(v, 0.0))
    })?;
    let support = SupportInfo::compact(&eps);
    let v = DVector::from_vec(vec![1.0, -2.0, 0.5]);
    let initial = model.project_initial(&v, &v, &v);
    let x = model.synthesize(&eps, &initial, &support)?;

    let rec = verify_recursion(&phi, &x, &eps)?;
    println!("largest recursion residual {:.2e} at t = {:?}", rec.max_residual, rec.at);

    let direct = iterate_recursion(&phi, 0, &x.at(0).map(|z| z.re), &eps)?;
    println!("max distance to direct iteration from x_0: {:.2e}", x.max_dist(&direct));

    let back = model.recover_initial_conditions(&x, &eps, &support)?;
    println!("v_forward  {:?}", back.v_forward.as_slice());
    println!("v_backward {:?}", back.v_backward.as_slice());
    println!("v_outward  {:?}", back.v_outward.as_slice());
    println!("max difference from the inputs: {:.2e}", back.max_diff(&initial));
    Ok(())
}
