//! Frequency-specific difference, cumulation and residual operators.

use arflow::seq::{cum_theta, diff_theta, residual_theta, sub};
use arflow::{Frequency, TimeWindowSequence};
use nalgebra::DVector;

fn main() -> arflow::Result<()> {
    let x = TimeWindowSequence::from_real(
        -4,
        (-4..=6).map(|t| DVector::from_vec(vec![(t as f64).sin(), 0.1 * (t * t) as f64])).collect(),
    )?;

    for theta in [0.0, std::f64::consts::PI, std::f64::consts::FRAC_PI_2] {
        let f = Frequency::new(theta);
        // D_θ C_θ = I and C_θ D_θ = I − R_θ x_0, away from the left edge.
        let dc = sub(&diff_theta(&cum_theta(&x, f), f), &x)?;
        let r = residual_theta(&x.at(0), f, x.t_min(), x.t_max())?;
        let cd = sub(&sub(&cum_theta(&diff_theta(&x, f), f), &x)?, &scale_neg(&r))?;
        println!(
            "θ = {theta:.4}: max ‖D C x − x‖ = {:.1e}, max ‖C D x − x + R x_0‖ = {:.1e}",
            sup_from(&dc, x.t_min() + 1),
            sup_from(&cd, x.t_min() + 1)
        );
    }

    // Cumulating ones k times at θ = 0 gives binomial coefficients.
    let ones = TimeWindowSequence::from_real(0, vec![DVector::from_element(1, 1.0); 8])?;
    let mut s = ones.clone();
    let f = Frequency::new(0.0);
    for _ in 0..2 {
        s = cum_theta(&arflow::seq::backshift(&s), f);
    }
    let row: Vec<f64> = s.real_rows().iter().map(|r| r[0]).collect();
    println!("(C_0 B)² 1 = {row:?}");
    Ok(())
}

fn scale_neg(s: &TimeWindowSequence) -> TimeWindowSequence {
    arflow::seq::scale(arflow::C64::new(-1.0, 0.0), s)
}

fn sup_from(s: &TimeWindowSequence, t0: i64) -> f64 {
    (t0..=s.t_max()).map(|t| s.norm_at(t)).fold(0.0, f64::max)
}
