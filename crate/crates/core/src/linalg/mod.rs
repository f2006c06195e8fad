//! Eigenstructure of square matrices: Schur form, spectral projectors, Drazin inverse.

mod companion;
mod drazin;
mod matrix;
mod schur;
mod spectral;
mod sylvester;

pub use companion::build_companion;
pub use drazin::{drazin_inverse, drazin_inverse_with, signed_power, SignedPowers};
pub use matrix::{Matrix, C64};
pub use schur::{complex_schur, ComplexSchur};
pub use spectral::{
    classify_spectrum, eig_decompose, eigen_index, spectral_projector, spectral_radius,
    EigenCluster, Group, SpectralClassification, SpectralDecomposition, SpectralProjector,
    Subset, UnitFrequency,
};
pub use sylvester::solve_triangular_sylvester;

pub(crate) use matrix::vec_norm;
pub(crate) use spectral::normalize_angle;
