//! Exact structure-constant Lie algebras with certified checks for
//! integrability, flatness, torsion, closedness and parallelism of the
//! complex, symplectic and Clifford structures built on them.

pub mod catalog;
pub mod constructions;
pub mod dsl;
pub mod lie;
pub mod linalg;
pub mod scalar;
pub mod structures;
pub mod suite;

pub use lie::{
    AlmostComplex, BilinearForm, Certificate, Connection, LieAlgebra, LinearMap, Witness,
};
pub use linalg::Matrix;
pub use scalar::{q, Field, GaussScalar, Scalar};
