//! Spectral projectors for the zero, forward, backward and unit-circle parts.

use arflow::linalg::Subset;
use arflow::{Matrix, Tolerances, VarModel};

fn main() -> arflow::Result<()> {
    // A non-normal matrix: eigenvalues 0.5, 2, 1 (Jordan block of size 2) and 0.
    #[rustfmt::skip]
    let phi = Matrix::from_rows(5, &[
        0.5, 1.0, 0.0, 2.0, 1.0,
        0.0, 2.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 3.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
    ])?;
    let model = VarModel::new(&phi, &Tolerances::default())?;
    let dec = model.decomposition();
    let class = model.classification();

    let n = phi.dim();
    let mut sum = Matrix::zeros(n);
    for subset in [Subset::Zero, Subset::Forward, Subset::Backward, Subset::Unit] {
        let p = dec.projector(class, subset)?;
        let idempotency = p.matrix.mul(&p.matrix).dist(&p.matrix);
        let commutes = p.matrix.mul(&phi).dist(&phi.mul(&p.matrix));
        println!(
            "{:>9}: rank {}  ‖P²−P‖ = {:.1e}  ‖PΦ−ΦP‖ = {:.1e}",
            p.subset.label(),
            p.rank,
            idempotency,
            commutes
        );
        sum = sum.add(&p.matrix);
    }
    println!("‖ΣP − I‖ = {:.1e}", sum.dist(&Matrix::identity(n)));

    let p1 = dec.projector(class, Subset::Frequency(0.0))?;
    println!("P at θ = 0:\n{:.4}", p1.matrix.real_part());
    Ok(())
}
