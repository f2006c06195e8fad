//! Solution sets of the vector autoregression `x_t = Φ x_{t−1} + ε_t` by
//! spectral projection.
//!
//! The spectrum of `Φ` is split into zero, stable, explosive and unit-circle
//! parts. Every solution on a finite window then decomposes into six flows:
//! a predetermined and an innovation-driven part for each of the forward,
//! backward and outward components.

mod error;
pub mod cli;
pub mod flows;
pub mod io;
pub mod linalg;
pub mod oracles;
pub mod seq;
mod tolerances;

pub use error::{Error, Result};
pub use linalg::{Matrix, C64};
pub use tolerances::Tolerances;
pub use flows::{
    FlowDecomposition, InitialConditions, SupportInfo, SupportMode, VarModel, Window,
};
pub use seq::{Frequency, TimeWindowSequence};
