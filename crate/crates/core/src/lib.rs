//! Computations with character varieties of finitely generated abelian
//! groups in complex reductive matrix groups.

pub mod classify;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod retraction;
pub mod sampling;
pub mod suites;
pub mod varieties;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances};
