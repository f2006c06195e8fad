//! Finite-window growth diagnostic: bounded noise against 3^|t|.

use arflow::oracles::subexponential_diagnostic;
use arflow::TimeWindowSequence;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> arflow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = TimeWindowSequence::from_real(
        -40,
        (0..81).map(|_| DVector::from_element(1, rng.gen_range(-1.0..1.0))).collect(),
    )?;
    let growing = TimeWindowSequence::from_real(
        -20,
        (-20i32..=20).map(|t| DVector::from_element(1, 3f64.powi(t.abs()))).collect(),
    )?;
    let grid = [0.2, 0.5, 0.9, 0.99];
    for (name, s) in [("bounded noise", &noise), ("3^|t|", &growing)] {
        let rep = subexponential_diagnostic(s, &grid)?;
        println!("{name}: log-slope past {:?}, future {:?}", rep.past_rate, rep.future_rate);
        for row in &rep.rows {
            println!(
                "  r = {:<4}  sums {:>10.3e}  growth past {:<5} future {}",
                row.r,
                row.weighted_sum(),
                row.past_growth,
                row.future_growth
            );
        }
    }
    Ok(())
}
