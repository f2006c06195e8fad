//! Drazin inverse of a singular matrix and the three defining identities.

use arflow::linalg::drazin_inverse;
use arflow::oracles::drazin_axiom_check;
use arflow::Matrix;

fn main() -> arflow::Result<()> {
    // Invertible core {3, −0.5} coupled to a nilpotent block of index 2.
    #[rustfmt::skip]
    let m = Matrix::from_rows(4, &[
        3.0, 1.0,  1.0, 0.0,
        0.0, -0.5, 0.0, 2.0,
        0.0, 0.0,  0.0, 1.0,
        0.0, 0.0,  0.0, 0.0,
    ])?;
    let d = drazin_inverse(&m)?;
    println!("D =\n{:.6}", d.real_part());

    let ax = drazin_axiom_check(&m, &d);
    println!("‖DMD − D‖       = {:.2e}", ax.dmd);
    println!("‖DM − MD‖       = {:.2e}", ax.commute);
    println!("‖DM^(N+1) − M^N‖ = {:.2e}", ax.power);

    // On an invertible matrix the Drazin inverse is the ordinary inverse.
    let a = Matrix::from_rows(2, &[2.0, 1.0, 1.0, 1.0])?;
    let ai = drazin_inverse(&a)?;
    println!("‖A·D(A) − I‖ = {:.2e}", a.mul(&ai).dist(&Matrix::identity(2)));
    Ok(())
}
