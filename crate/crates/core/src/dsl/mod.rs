//! A line-oriented language for declaring algebras, maps, connections and
//! forms, building constructions from them, and queueing checks.
//!
//! ```text
//! algebra aff1 {
//!   basis x y
//!   [x,y] = y
//! }
//! conn adconn on aff1 {
//!   x => matrix [[0, 0], [0, 1]]
//!   y => matrix [[0, 0], [-1, 0]]
//! }
//! check teo2(aff1, adconn)
//! ```
//!
//! Names must be defined before use. Statements end at a newline or `;`, and
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{CatalogEntry, Decomposition};
use crate::constructions::AssociativeAlgebra;
use crate::lie::{BilinearForm, Connection, LieAlgebra, LinearMap};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

mod emit;
pub mod lexer;
mod parser;
mod run;

pub use emit::{catalog_ident, catalog_json, catalog_workspace, emit_catalog_dsl};
pub use parser::parse;
pub use run::{run, Report, RunOptions, REPORT_SCHEMA};

/// Position of a token in the source, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownName,
    Arity,
    NonSquare,
    SizeMismatch,
    TypeMismatch,
    DuplicateName,
    DuplicateBracket,
    NonCanonicalPair,
    MissingImage,
    InvalidValue,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownName => "unknown name",
            ParseErrorKind::Arity => "wrong arity",
            ParseErrorKind::NonSquare => "non-square matrix",
            ParseErrorKind::SizeMismatch => "basis-size mismatch",
            ParseErrorKind::TypeMismatch => "type mismatch",
            ParseErrorKind::DuplicateName => "duplicate name",
            ParseErrorKind::DuplicateBracket => "duplicate bracket",
            ParseErrorKind::NonCanonicalPair => "non-canonical bracket order",
            ParseErrorKind::MissingImage => "missing image",
            ParseErrorKind::InvalidValue => "invalid value",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {kind}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Assoc,
    Endo,
    Conn,
    Form,
    Decomp,
    Map,
    Int,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Algebra => "algebra",
            Kind::Assoc => "associative algebra",
            Kind::Endo => "endomorphism",
            Kind::Conn => "connection",
            Kind::Form => "form",
            Kind::Decomp => "decomposition",
            Kind::Map => "map",
            Kind::Int => "integer",
        };
        f.write_str(s)
    }
}

/// A resolved definition.
#[derive(Clone, Debug)]
pub enum Value {
    Algebra(LieAlgebra),
    Assoc(AssociativeAlgebra),
    Endo(Matrix<Scalar>),
    Conn(Connection),
    Form(BilinearForm),
    Decomp(Decomposition),
    Map {
        map: LinearMap,
        from: String,
        to: String,
    },
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Algebra(_) => Kind::Algebra,
            Value::Assoc(_) => Kind::Assoc,
            Value::Endo(_) => Kind::Endo,
            Value::Conn(_) => Kind::Conn,
            Value::Form(_) => Kind::Form,
            Value::Decomp(_) => Kind::Decomp,
            Value::Map { .. } => Kind::Map,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String, SourceSpan),
    Int(usize, SourceSpan),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n, _) => f.write_str(n),
            Arg::Int(k, _) => write!(f, "{k}"),
        }
    }
}

/// One top-level statement, in source order.
#[derive(Clone, Debug)]
pub enum Item {
    Define {
        name: String,
        kind: Kind,
        on: Option<String>,
        to: Option<String>,
    },
    Construct {
        name: String,
        op: String,
        args: Vec<Arg>,
        span: SourceSpan,
    },
    Check {
        check: String,
        args: Vec<Arg>,
        span: SourceSpan,
    },
}

/// A definition or a construction's outcome; failed constructions keep their
/// error message for the run report.
#[derive(Clone, Debug)]
pub struct Binding {
    pub kind: Kind,
    pub value: Result<Value, String>,
    /// Algebra the value lives on, for endomorphisms, connections and forms.
    pub on: Option<String>,
}

/// Parsed program: definitions in order plus the check queue.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub items: Vec<Item>,
    pub bindings: BTreeMap<String, Binding>,
    /// Catalog entries imported by `construct X = catalog(...)`.
    pub imports: BTreeMap<String, CatalogEntry>,
    pub input_hash: String,
}

impl Workspace {
    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn algebra(&self, name: &str) -> Option<&LieAlgebra> {
        match self.bindings.get(name).map(|b| &b.value) {
            Some(Ok(Value::Algebra(a))) => Some(a),
            _ => None,
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, &[Arg])> {
        self.items.iter().filter_map(|i| match i {
            Item::Check { check, args, .. } => Some((check.as_str(), args.as_slice())),
            _ => None,
        })
    }

    /// Canonical source text; `parse(ws.to_dsl())` yields the same text back.
    pub fn to_dsl(&self) -> String {
        emit::workspace_dsl(self)
    }
}

/// Argument kinds of every check.
pub const CHECKS: &[(&str, &[Kind])] = &[
    ("jacobi", &[Kind::Algebra]),
    ("integrable", &[Kind::Algebra, Kind::Endo]),
    ("integrable_half", &[Kind::Algebra, Kind::Endo]),
    ("eigenspace", &[Kind::Algebra, Kind::Endo]),
    ("abelian_complex", &[Kind::Algebra, Kind::Endo]),
    ("complex_lie", &[Kind::Algebra, Kind::Endo]),
    ("product_structure", &[Kind::Algebra, Kind::Endo]),
    ("representation", &[Kind::Algebra, Kind::Conn]),
    ("torsion_free", &[Kind::Algebra, Kind::Conn]),
    ("closed", &[Kind::Algebra, Kind::Form]),
    ("nondegenerate", &[Kind::Form]),
    ("symplectic", &[Kind::Algebra, Kind::Form]),
    ("parallel", &[Kind::Conn, Kind::Endo]),
    ("parallel_form", &[Kind::Conn, Kind::Form]),
    ("metric", &[Kind::Algebra, Kind::Conn, Kind::Form]),
    ("subalgebra", &[Kind::Algebra, Kind::Decomp]),
    ("j_stable", &[Kind::Algebra, Kind::Endo, Kind::Decomp]),
    (
        "teo1",
        &[
            Kind::Algebra,
            Kind::Conn,
            Kind::Endo,
            Kind::Endo,
            Kind::Decomp,
        ],
    ),
    ("teo2", &[Kind::Algebra, Kind::Conn]),
    ("reconstruct", &[Kind::Algebra, Kind::Endo, Kind::Decomp]),
    ("hypercomplex", &[Kind::Algebra, Kind::Conn, Kind::Endo]),
    ("tower", &[Kind::Algebra, Kind::Conn, Kind::Int]),
    ("self_dual", &[Kind::Conn, Kind::Endo]),
    ("psi_symplectic", &[Kind::Algebra, Kind::Conn, Kind::Endo]),
    ("levi_civita", &[Kind::Algebra, Kind::Form]),
    ("pseudo_kahler", &[Kind::Algebra, Kind::Form]),
    ("holomorphic", &[Kind::Map, Kind::Endo, Kind::Endo]),
    ("associative", &[Kind::Assoc]),
];

/// Argument kinds of every construction except `catalog`, which takes a
/// catalog name and integers.
pub const CONSTRUCTS: &[(&str, &[Kind])] = &[
    ("semidirect", &[Kind::Algebra, Kind::Conn]),
    ("tangent", &[Kind::Algebra, Kind::Conn]),
    ("cotangent", &[Kind::Algebra, Kind::Conn]),
    ("central_ext", &[Kind::Algebra]),
    ("aff", &[Kind::Assoc]),
    ("tower", &[Kind::Algebra, Kind::Conn, Kind::Int]),
    ("nabla1", &[Kind::Algebra, Kind::Conn]),
    ("jplus", &[Kind::Endo, Kind::Endo]),
    ("jminus", &[Kind::Endo, Kind::Endo]),
    ("dual", &[Kind::Endo]),
    ("levi_civita", &[Kind::Algebra, Kind::Form]),
    ("ad", &[Kind::Algebra]),
];
