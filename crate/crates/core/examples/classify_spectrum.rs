//! Cluster the eigenvalues of Φ and sort them by position relative to the unit circle.

use arflow::{Matrix, Tolerances, VarModel};

fn main() -> arflow::Result<()> {
    // Stable 0.5, explosive 2, a rotation by a third of a turn, and a nilpotent pair.
    let s3 = 3f64.sqrt() / 2.0;
    #[rustfmt::skip]
    let phi = Matrix::from_rows(6, &[
        0.5, 0.0, 0.0,  0.0, 0.0, 0.0,
        0.0, 2.0, 0.0,  0.0, 0.0, 0.0,
        0.0, 0.0, -0.5, -s3, 0.0, 0.0,
        0.0, 0.0, s3,  -0.5, 0.0, 0.0,
        0.0, 0.0, 0.0,  0.0, 0.0, 1.0,
        0.0, 0.0, 0.0,  0.0, 0.0, 0.0,
    ])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;
    let class = model.classification();

    println!("{:>24}  {:>4} {:>5}  group", "eigenvalue", "mult", "index");
    for (c, g) in class.clusters.iter().zip(&class.groups) {
        println!(
            "{:>11.6} {:+11.6}i  {:>4} {:>5}  {:?}",
            c.value.re, c.value.im, c.algebraic_multiplicity, c.index, g
        );
    }
    println!("frequencies Θ = {:?}", class.frequencies());
    println!("closest off-circle approach = {:?}", class.unit_margin);
    println!("nilpotent: {}", model.is_nilpotent());
    Ok(())
}
