//! Dense complex matrices and their spectral machinery.

mod matrix;
mod spectral;
mod tolerances;

pub use matrix::{c, ComplexMatrix};
pub use spectral::{
    commutes, eigendecompose, is_semisimple, multiplicative_jordan, SpectralDecomposition,
};
pub(crate) use spectral::{commutator_norm, jordan_residual, semisimple_threshold};
pub use tolerances::Tolerances;
