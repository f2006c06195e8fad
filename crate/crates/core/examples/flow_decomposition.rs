//! Split a solution into its six flows and recover the initial conditions.

use arflow::{Matrix, SupportInfo, TimeWindowSequence, Tolerances, VarModel};
use nalgebra::DVector;

fn main() -> arflow::Result<()> {
    // Stable 0.6, explosive 1.5 and a unit root.
    #[rustfmt::skip]
    let phi = Matrix::from_rows(3, &[
        0.6, 0.2, 0.0,
        0.0, 1.5, 0.3,
        0.0, 0.0, 1.0,
    ])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;

    let eps = TimeWindowSequence::from_fn(-8, 8, 3, |t| {
        let on = (-2..=2).contains(&t);
        let v = if on { vec![0.3 * t as f64, 1.0, -0.5] } else { vec![0.0; 3] };
        DVector::from_vec(v).map(|x| arflow::C64::new(x, 0.0))
    })?;
    let support = SupportInfo::compact(&eps);
    let initial = model.project_initial(
        &DVector::from_vec(vec![1.0, 0.0, 0.0]),
        &DVector::from_vec(vec![0.0, 1.0, 0.0]),
        &DVector::from_vec(vec![0.0, 0.0, 1.0]),
    );
    let x = model.synthesize(&eps, &initial, &support)?;

    let dec = model.decompose(&x, &eps, &support)?;
    println!("{:>4} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}", "t", "pre_fwd", "eps_fwd", "pre_bwd", "eps_bwd", "pre_out", "eps_out");
    for t in x.times() {
        print!("{t:>4}");
        for (_, flow) in dec.flows() {
            print!(" {:>11.4}", flow.at(t).norm());
        }
        println!();
    }
    println!("recovered == used: {}", dec.initial.max_diff(&initial) < 1e-9);
    println!("{:#?}", dec.residual_report);
    Ok(())
}
