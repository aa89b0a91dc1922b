//! Exact computations for finite-dimensional nilpotent Lie algebras and
//! superalgebras: coadjoint orbits, polarisations, induced modules realised
//! as differential operators, and the shape of graded-primitive quotients.
//!
//! All arithmetic is over exact rationals. Indices are 0-based throughout.

pub mod algebra;
pub mod coadjoint;
pub mod enveloping;
pub mod error;
pub mod io;
pub mod linalg;
pub mod polarisation;
pub mod scalar;
pub mod superalgebra;
pub mod weyl;

pub use algebra::{build_n_m, LieAlgebra, LieAlgebraBuilder, Parity, ValidationReport, Violation};
pub use coadjoint::Functional;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace, Vector};
pub use scalar::Scalar;
