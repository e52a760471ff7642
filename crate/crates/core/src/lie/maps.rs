use std::fmt;

use serde::Serialize;

use crate::linalg::{sparse, Matrix, SparseVec};
use crate::scalar::{Field, Scalar};

use super::{LieAlgebra, LieError};

/// A linear map between two labeled spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap<F = Scalar> {
    pub matrix: Matrix<F>,
    pub domain: String,
    pub codomain: String,
}

impl<F: Field> LinearMap<F> {
    pub fn new(matrix: Matrix<F>, domain: impl Into<String>, codomain: impl Into<String>) -> Self {
        LinearMap {
            matrix,
            domain: domain.into(),
            codomain: codomain.into(),
        }
    }

    pub fn endo(matrix: Matrix<F>, space: impl Into<String>) -> Self {
        let s = space.into();
        Self::new(matrix, s.clone(), s)
    }

    /// Map whose column `i` is the image of the domain's basis element `i`.
    pub fn from_images(
        domain: &LieAlgebra<F>,
        codomain: &LieAlgebra<F>,
        images: &[SparseVec<F>],
    ) -> Result<Self, LieError> {
        domain.check_len(images.len())?;
        Ok(Self::new(
            Matrix::from_sparse_columns(codomain.dim(), images),
            domain.name(),
            codomain.name(),
        ))
    }

    /// Label-matching map: each domain label is sent to the codomain basis
    /// element named by `rename` (identity when `rename` returns `None`).
    pub fn by_labels(
        domain: &LieAlgebra<F>,
        codomain: &LieAlgebra<F>,
        rename: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, LieError> {
        let images = domain
            .labels()
            .iter()
            .map(|l| {
                let target = rename(l).unwrap_or_else(|| l.clone());
                codomain
                    .index_of(&target)
                    .map(sparse::unit)
                    .ok_or(LieError::UnknownLabel(target))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(domain, codomain, &images)
    }

    pub fn is_endo(&self) -> bool {
        self.matrix.is_square()
    }

    pub fn apply(&self, v: &[(usize, F)]) -> SparseVec<F> {
        self.matrix.apply_sparse(v)
    }
}

/// An endomorphism with `J^2 = -id`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlmostComplex<F = Scalar> {
    matrix: Matrix<F>,
    columns: Vec<SparseVec<F>>,
}

impl<F: Field> AlmostComplex<F> {
    pub fn new(matrix: Matrix<F>) -> Result<Self, LieError> {
        if !matrix.is_square() {
            return Err(LieError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let sq = &matrix * &matrix;
        let n = matrix.rows();
        let defect = &sq + &Matrix::identity(n);
        if let Some(c) = (0..n).find(|&c| !defect.sparse_column(c).is_empty()) {
            return Err(LieError::NotAlmostComplex {
                column: c,
                defect: defect.column(c).iter().map(ToString::to_string).collect(),
            });
        }
        let columns = matrix.sparse_columns();
        Ok(AlmostComplex { matrix, columns })
    }

    /// Builds `J` from the images of each basis element.
    pub fn from_images(images: Vec<SparseVec<F>>) -> Result<Self, LieError> {
        let n = images.len();
        Self::new(Matrix::from_sparse_columns(n, &images))
    }

    /// Builds `J` from label pairs `(a, b)` meaning `J a = b` and `J b = -a`.
    /// Every basis element must occur in exactly one pair.
    pub fn from_label_pairs(alg: &LieAlgebra<F>, pairs: &[(&str, &str)]) -> Result<Self, LieError> {
        let unit = |l: &str| {
            alg.index_of(l)
                .map(sparse::unit)
                .ok_or_else(|| LieError::UnknownLabel(l.to_string()))
        };
        let vecs = pairs
            .iter()
            .map(|(a, b)| Ok((unit(a)?, unit(b)?)))
            .collect::<Result<Vec<_>, LieError>>()?;
        Self::from_vector_pairs(alg, &vecs)
    }

    /// Builds `J` from vector pairs `(u, v)` with `J u = v`, `J v = -u`.
    /// The vectors must form a basis.
    pub fn from_vector_pairs(
        alg: &LieAlgebra<F>,
        pairs: &[(SparseVec<F>, SparseVec<F>)],
    ) -> Result<Self, LieError> {
        let n = alg.dim();
        let mut basis = Vec::with_capacity(2 * pairs.len());
        let mut images = Vec::with_capacity(2 * pairs.len());
        for (u, v) in pairs {
            basis.push(u.clone());
            images.push(v.clone());
            basis.push(v.clone());
            images.push(sparse::neg(u));
        }
        if basis.len() != n {
            return Err(LieError::DimensionMismatch {
                expected: n,
                found: basis.len(),
            });
        }
        let p = Matrix::from_sparse_columns(n, &basis);
        let q = Matrix::from_sparse_columns(n, &images);
        let inv = crate::linalg::invert(&p)?;
        Self::new(&q * &inv)
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Image of basis element `i`.
    pub fn column(&self, i: usize) -> &SparseVec<F> {
        &self.columns[i]
    }

    pub fn apply(&self, v: &[(usize, F)]) -> SparseVec<F> {
        let mut terms = Vec::new();
        for (i, c) in v {
            for (k, x) in &self.columns[*i] {
                terms.push((*k, x.mul(c)));
            }
        }
        sparse::collect(terms)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.matrix.neg()).expect("negation preserves J^2 = -id")
    }

    /// Block-diagonal `(J1 x, J2 v)`.
    pub fn block(a: &Self, b: &Self) -> Self {
        Self::new(Matrix::block_diag(&[&a.matrix, &b.matrix])).expect("blockwise J^2 = -id")
    }
}

impl<F: Field> fmt::Debug for AlmostComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlmostComplex({:?})", self.matrix)
    }
}

/// A family `(∇_{b_i})_i` of module endomorphisms indexed by the algebra's
/// basis. Serves both as a representation `ρ` and as a connection `∇`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection<F = Scalar> {
    values: Vec<Matrix<F>>,
    module_dim: usize,
}

impl<F: Field> Connection<F> {
    pub fn new(values: Vec<Matrix<F>>, module_dim: usize) -> Result<Self, LieError> {
        for m in &values {
            if m.rows() != module_dim || m.cols() != module_dim {
                return Err(LieError::DimensionMismatch {
                    expected: module_dim,
                    found: if m.rows() != module_dim {
                        m.rows()
                    } else {
                        m.cols()
                    },
                });
            }
        }
        Ok(Connection { values, module_dim })
    }

    pub fn zero(algebra_dim: usize, module_dim: usize) -> Self {
        Connection {
            values: vec![Matrix::zeros(module_dim, module_dim); algebra_dim],
            module_dim,
        }
    }

    /// The adjoint representation.
    pub fn ad(alg: &LieAlgebra<F>) -> Self {
        Connection {
            values: (0..alg.dim()).map(|i| alg.ad(i)).collect(),
            module_dim: alg.dim(),
        }
    }

    pub fn algebra_dim(&self) -> usize {
        self.values.len()
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn at(&self, i: usize) -> &Matrix<F> {
        &self.values[i]
    }

    pub fn values(&self) -> &[Matrix<F>] {
        &self.values
    }

    /// `∇_x` for a sparse vector `x`, by linearity in the subscript.
    pub fn along(&self, x: &[(usize, F)]) -> Matrix<F> {
        let mut acc = Matrix::zeros(self.module_dim, self.module_dim);
        for (i, c) in x {
            acc = &acc + &self.values[*i].scale(c);
        }
        acc
    }

    /// `∇_{b_i} y` for a sparse vector `y`.
    pub fn apply(&self, i: usize, y: &[(usize, F)]) -> SparseVec<F> {
        self.values[i].apply_sparse(y)
    }

    /// The dual connection `∇*_x = -(∇_x)^T`.
    pub fn dual(&self) -> Self {
        Connection {
            values: self.values.iter().map(|m| m.transpose().neg()).collect(),
            module_dim: self.module_dim,
        }
    }

    pub fn map_values(&self, f: impl Fn(&Matrix<F>) -> Matrix<F>) -> Result<Self, LieError> {
        let values: Vec<Matrix<F>> = self.values.iter().map(f).collect();
        let m = values.first().map_or(self.module_dim, Matrix::rows);
        Self::new(values, m)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Symmetric,
    Skew,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Symmetric => "sym",
            FormKind::Skew => "skew",
        })
    }
}

/// A bilinear form `B(x, y) = x^T M y` whose matrix matches its kind exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearForm<F = Scalar> {
    matrix: Matrix<F>,
    kind: FormKind,
}

impl<F: Field> BilinearForm<F> {
    pub fn new(matrix: Matrix<F>, kind: FormKind) -> Result<Self, LieError> {
        if !matrix.is_square() {
            return Err(LieError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let n = matrix.rows();
        for r in 0..n {
            for c in r..n {
                let (a, b) = (matrix.get(r, c), matrix.get(c, r));
                let ok = match kind {
                    FormKind::Symmetric => a == b,
                    FormKind::Skew => a.add(b).is_zero(),
                };
                if !ok {
                    return Err(LieError::FormKindMismatch {
                        kind,
                        row: r,
                        col: c,
                    });
                }
            }
        }
        Ok(BilinearForm { matrix, kind })
    }

    pub fn symmetric(matrix: Matrix<F>) -> Result<Self, LieError> {
        Self::new(matrix, FormKind::Symmetric)
    }

    pub fn skew(matrix: Matrix<F>) -> Result<Self, LieError> {
        Self::new(matrix, FormKind::Skew)
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eval(&self, x: &[(usize, F)], y: &[(usize, F)]) -> F {
        let mut acc = F::zero();
        for (i, a) in x {
            for (j, b) in y {
                let m = self.matrix.get(*i, *j);
                if !m.is_zero() {
                    acc = acc.add(&a.mul(b).mul(m));
                }
            }
        }
        acc
    }

    pub fn eval_basis(&self, i: usize, j: usize) -> &F {
        self.matrix.get(i, j)
    }
}
