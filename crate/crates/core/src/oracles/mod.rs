//! Independent reference implementations used to check the main library.

pub mod corpus;
mod diagnostic;
mod drazin_check;
mod iterate;
mod univariate;

pub use diagnostic::{subexponential_diagnostic, Direction, RadiusRow, SubexponentialReport};
pub use drazin_check::{drazin_axiom_check, DrazinAxioms};
pub use iterate::iterate_recursion;
pub use univariate::{univariate_solution, Regime, UnivariateCase};
