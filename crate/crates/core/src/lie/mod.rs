//! Structure-constant Lie algebras, the maps that live on them, and the
//! tensor checks that certify integrability, flatness and closedness.

mod algebra;
mod certificate;
pub mod checks;
mod maps;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use algebra::{format_terms, labels, LieAlgebra};
pub(crate) use certificate::{sweep_indices, sweep_pairs, sweep_triples};
pub use certificate::{Certificate, Witness, WITNESS_CAP};
pub use checks::*;
pub use maps::{AlmostComplex, BilinearForm, Connection, FormKind, LinearMap};

#[derive(Debug, Error, Clone)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [{i},{j}] must be declared with i < j")]
    NonCanonicalPair { i: usize, j: usize },
    #[error("bracket [{i},{j}] declared twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("basis reordering is not a permutation")]
    NotAPermutation,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("J^2 != -id (column {column}: defect [{}])", defect.join(", "))]
    NotAlmostComplex { column: usize, defect: Vec<String> },
    #[error("matrix entry ({row},{col}) does not match a {kind} form")]
    FormKindMismatch {
        kind: FormKind,
        row: usize,
        col: usize,
    },
    #[error("Jacobi identity fails ({} failing triples)", .0.total_failures)]
    Jacobi(Box<Certificate>),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
