//! Dense matrices, sorted sparse vectors and exact elimination.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    /// The kernel vector is rendered with the scalar field's `Display`.
    #[error("matrix is singular; kernel vector ({})", kernel.join(", "))]
    Singular { kernel: Vec<String> },
}

/// Sparse vector: `(index, value)` pairs sorted by index with no stored zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

pub mod sparse {
    use super::SparseVec;
    use crate::scalar::Field;

    pub fn from_dense<F: Field>(v: &[F]) -> SparseVec<F> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    pub fn to_dense<F: Field>(v: &[(usize, F)], dim: usize) -> Vec<F> {
        let mut out = vec![F::zero(); dim];
        for (i, x) in v {
            out[*i] = x.clone();
        }
        out
    }

    pub fn unit<F: Field>(i: usize) -> SparseVec<F> {
        vec![(i, F::one())]
    }

    pub fn get<F: Field>(v: &[(usize, F)], i: usize) -> Option<&F> {
        v.binary_search_by_key(&i, |(k, _)| *k)
            .ok()
            .map(|p| &v[p].1)
    }

    pub fn scale<F: Field>(v: &[(usize, F)], c: &F) -> SparseVec<F> {
        if c.is_zero() {
            return Vec::new();
        }
        v.iter().map(|(i, x)| (*i, x.mul(c))).collect()
    }

    pub fn neg<F: Field>(v: &[(usize, F)]) -> SparseVec<F> {
        v.iter().map(|(i, x)| (*i, x.neg())).collect()
    }

    /// `a + c * b`, merged in index order.
    pub fn axpy<F: Field>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> SparseVec<F> {
        if c.is_zero() || b.is_empty() {
            return a.to_vec();
        }
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            if q == b.len() || (p < a.len() && a[p].0 < b[q].0) {
                out.push(a[p].clone());
                p += 1;
            } else if p == a.len() || b[q].0 < a[p].0 {
                out.push((b[q].0, c.mul(&b[q].1)));
                q += 1;
            } else {
                let s = a[p].1.add(&c.mul(&b[q].1));
                if !s.is_zero() {
                    out.push((a[p].0, s));
                }
                p += 1;
                q += 1;
            }
        }
        out
    }

    pub fn add<F: Field>(a: &[(usize, F)], b: &[(usize, F)]) -> SparseVec<F> {
        axpy(a, &F::one(), b)
    }

    pub fn sub<F: Field>(a: &[(usize, F)], b: &[(usize, F)]) -> SparseVec<F> {
        axpy(a, &F::one().neg(), b)
    }

    /// Sums unsorted terms with repeated indices into canonical form.
    pub fn collect<F: Field>(mut terms: Vec<(usize, F)>) -> SparseVec<F> {
        terms.sort_by_key(|(i, _)| *i);
        let mut out: SparseVec<F> = Vec::with_capacity(terms.len());
        for (i, x) in terms {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add(&x),
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        out
    }

    pub fn dot<F: Field>(a: &[(usize, F)], b: &[(usize, F)]) -> F {
        let mut acc = F::zero();
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].0.cmp(&b[q].0) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc.add(&a[p].1.mul(&b[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }
}

/// A dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(LinalgError::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_sparse_columns(rows: usize, columns: &[SparseVec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, x) in col {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn sparse_column(&self, c: usize) -> SparseVec<F> {
        (0..self.rows)
            .filter_map(|r| {
                let x = self.get(r, c);
                (!x.is_zero()).then(|| (r, x.clone()))
            })
            .collect()
    }

    pub fn sparse_columns(&self) -> Vec<SparseVec<F>> {
        (0..self.cols).map(|c| self.sparse_column(c)).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(Field::neg)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, LinalgError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn apply(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    /// Applies the matrix to a sparse vector; cost is proportional to its support.
    pub fn apply_sparse(&self, v: &[(usize, F)]) -> SparseVec<F> {
        let mut terms = Vec::new();
        for (c, x) in v {
            for r in 0..self.rows {
                let a = self.get(r, *c);
                if !a.is_zero() {
                    terms.push((r, a.mul(x)));
                }
            }
        }
        sparse::collect(terms)
    }

    /// Row-major flattening, used for rank tests on sets of matrices.
    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn block_diag(blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, x) in self.data[r * self.cols..(r + 1) * self.cols]
                .iter()
                .enumerate()
            {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x:?}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<F: Field + Serialize> Serialize for Matrix<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}

impl<'a, F: Field> std::ops::Mul<&'a Matrix<F>> for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        self.try_mul(rhs).expect("matrix shapes do not compose")
    }
}

impl<'a, F: Field> std::ops::Add<&'a Matrix<F>> for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        self.try_add(rhs).expect("matrix shapes differ")
    }
}

impl<'a, F: Field> std::ops::Sub<&'a Matrix<F>> for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        self.try_sub(rhs).expect("matrix shapes differ")
    }
}

/// Incremental reduced row-echelon basis of a span.
///
/// Every inserted vector is reduced against the current echelon rows; each
/// row also carries its expression in terms of the inserted vectors, so
/// membership tests return coefficients in the caller's original list.
#[derive(Clone, Debug)]
pub struct SpanSolver<F> {
    dim: usize,
    inserted: usize,
    // (pivot column, echelon row with 1 at pivot, coefficients over inserted vectors)
    rows: Vec<(usize, SparseVec<F>, SparseVec<F>)>,
    // inserted index -> first kernel relation found when it was dependent
    dependencies: Vec<(usize, SparseVec<F>)>,
}

impl<F: Field> SpanSolver<F> {
    pub fn new(dim: usize) -> Self {
        SpanSolver {
            dim,
            inserted: 0,
            rows: Vec::new(),
            dependencies: Vec::new(),
        }
    }

    pub fn from_vectors(dim: usize, vectors: &[Vec<F>]) -> Result<Self, LinalgError> {
        let mut s = Self::new(dim);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn from_sparse(dim: usize, vectors: &[SparseVec<F>]) -> Self {
        let mut s = Self::new(dim);
        for v in vectors {
            s.insert_sparse(v.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Kernel relations among the inserted vectors discovered so far.
    pub fn dependencies(&self) -> &[(usize, SparseVec<F>)] {
        &self.dependencies
    }

    pub fn insert(&mut self, v: &[F]) -> Result<bool, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self.insert_sparse(sparse::from_dense(v)))
    }

    /// Inserts a vector; returns whether the rank grew.
    pub fn insert_sparse(&mut self, v: SparseVec<F>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let (residual, mut coeffs) = self.reduce(&v);
        // residual = v - sum coeffs_k * original_k  =>  coefficient of v is +1
        coeffs = sparse::neg(&coeffs);
        coeffs = sparse::add(&coeffs, &sparse::unit(idx));
        if residual.is_empty() {
            self.dependencies.push((idx, coeffs));
            return false;
        }
        let (pivot, lead) = residual[0].clone();
        let inv = lead.inv().expect("nonzero pivot");
        let row = sparse::scale(&residual, &inv);
        let row_coeffs = sparse::scale(&coeffs, &inv);
        for (_, r, c) in &mut self.rows {
            if let Some(x) = sparse::get(r, pivot).cloned() {
                let m = x.neg();
                *r = sparse::axpy(r, &m, &row);
                *c = sparse::axpy(c, &m, &row_coeffs);
            }
        }
        let pos = self.rows.partition_point(|(p, _, _)| *p < pivot);
        self.rows.insert(pos, (pivot, row, row_coeffs));
        true
    }

    /// Returns `(v - projection, coefficients over inserted vectors of the projection)`.
    fn reduce(&self, v: &[(usize, F)]) -> (SparseVec<F>, SparseVec<F>) {
        let mut residual = v.to_vec();
        let mut coeffs: SparseVec<F> = Vec::new();
        for (pivot, row, row_coeffs) in &self.rows {
            if let Some(x) = sparse::get(&residual, *pivot).cloned() {
                residual = sparse::axpy(&residual, &x.neg(), row);
                coeffs = sparse::axpy(&coeffs, &x, row_coeffs);
            }
        }
        (residual, coeffs)
    }

    pub fn contains_sparse(&self, v: &[(usize, F)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Component of `v` outside the span (zero iff `v` is in the span).
    pub fn residual_sparse(&self, v: &[(usize, F)]) -> SparseVec<F> {
        self.reduce(v).0
    }

    /// Coefficients over the inserted vectors, or `None` when outside the span.
    pub fn solve_sparse(&self, v: &[(usize, F)]) -> Option<SparseVec<F>> {
        let (residual, coeffs) = self.reduce(v);
        residual.is_empty().then_some(coeffs)
    }

    pub fn solve(&self, v: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .solve_sparse(&sparse::from_dense(v))
            .map(|c| sparse::to_dense(&c, self.inserted)))
    }
}

/// Expresses `target` in the span of `vectors`, or `None` if it lies outside.
pub fn solve_in_span<F: Field>(
    vectors: &[Vec<F>],
    target: &[F],
) -> Result<Option<Vec<F>>, LinalgError> {
    let dim = target.len();
    SpanSolver::from_vectors(dim, vectors)?.solve(target)
}

/// Rank of the span of `vectors`.
pub fn rank<F: Field>(vectors: &[Vec<F>]) -> Result<usize, LinalgError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    Ok(SpanSolver::from_vectors(first.len(), vectors)?.rank())
}

/// Basis of the kernel of `m`, each vector normalized to a leading 1.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let mut solver = SpanSolver::new(m.rows());
    for c in 0..m.cols() {
        solver.insert_sparse(m.sparse_column(c));
    }
    solver
        .dependencies()
        .iter()
        .map(|(_, rel)| normalize_leading(sparse::to_dense(rel, m.cols())))
        .collect()
}

fn normalize_leading<F: Field>(v: Vec<F>) -> Vec<F> {
    match v.iter().find(|x| !x.is_zero()).and_then(Field::inv) {
        Some(inv) => v.iter().map(|x| x.mul(&inv)).collect(),
        None => v,
    }
}

/// Exact inverse. A singular input reports a kernel vector as witness.
pub fn invert<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut solver = SpanSolver::new(n);
    for c in 0..n {
        if !solver.insert_sparse(m.sparse_column(c)) {
            let (_, rel) = solver.dependencies()[0].clone();
            let kernel = normalize_leading(sparse::to_dense(&rel, n));
            return Err(LinalgError::Singular {
                kernel: kernel.iter().map(ToString::to_string).collect(),
            });
        }
    }
    let columns: Vec<SparseVec<F>> = (0..n)
        .map(|k| solver.solve_sparse(&sparse::unit(k)).expect("full rank"))
        .collect();
    Ok(Matrix::from_sparse_columns(n, &columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Scalar};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> Matrix<Scalar> {
        Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn solve_in_span_examples() {
        let basis = vec![v(&[1, 0]), v(&[0, 1])];
        assert_eq!(
            solve_in_span(&basis, &v(&[3, 5])).unwrap(),
            Some(v(&[3, 5]))
        );
        assert_eq!(
            solve_in_span(&[v(&[1, 1])], &v(&[2, 2])).unwrap(),
            Some(v(&[2]))
        );
        assert_eq!(solve_in_span(&[v(&[1, 0])], &v(&[0, 1])).unwrap(), None);
        assert!(matches!(
            solve_in_span(&[v(&[1, 0, 0])], &v(&[0, 1])),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_with_dependent_spanning_set() {
        let vs = vec![v(&[1, 2]), v(&[2, 4]), v(&[0, 1])];
        let c = solve_in_span(&vs, &v(&[3, 7])).unwrap().unwrap();
        let recombined: Vec<Scalar> = (0..2)
            .map(|r| (0..3).fold(Scalar::from(0), |acc, k| &acc + &(&c[k] * &vs[k][r])))
            .collect();
        assert_eq!(recombined, v(&[3, 7]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), 2);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]).unwrap(), 1);
        assert_eq!(rank::<Scalar>(&[]).unwrap(), 0);
    }

    #[test]
    fn invert_examples() {
        let id = Matrix::<Scalar>::identity(3);
        assert_eq!(invert(&id).unwrap(), id);
        assert_eq!(
            invert(&m(&[&[0, -1], &[1, 0]])).unwrap(),
            m(&[&[0, 1], &[-1, 0]])
        );
        match invert(&m(&[&[1, 1], &[2, 2]])) {
            Err(LinalgError::Singular { kernel }) => assert_eq!(kernel, vec!["1", "-1"]),
            other => panic!("expected singular, got {other:?}"),
        }
        assert!(matches!(
            invert(&Matrix::<Scalar>::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel(&m(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(k.len(), 2);
        let mm = m(&[&[1, 2, 3], &[2, 4, 6]]);
        for vec in k {
            assert!(mm.apply(&vec).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn fractional_inverse() {
        let a = Matrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]).unwrap();
        let inv = invert(&a).unwrap();
        assert!((&inv * &a).is_identity());
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Matrix<Scalar>> {
        proptest::collection::vec(-3i64..4, n * n)
            .prop_map(move |xs| Matrix::from_fn(n, n, |r, c| Scalar::from(xs[r * n + c])))
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(a in small_matrix(4)) {
            if let Ok(inv) = invert(&a) {
                prop_assert!((&inv * &a).is_identity());
                prop_assert!((&a * &inv).is_identity());
            } else {
                prop_assert!(rank(&a.to_rows()).unwrap() < 4);
            }
        }

        #[test]
        fn rank_invariant_under_scaling_and_permutation(
            a in small_matrix(4),
            scale in 1i64..5,
            rot in 0usize..4,
        ) {
            let rows = a.to_rows();
            let r0 = rank(&rows).unwrap();
            let mut changed: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x * &Scalar::from(scale)).collect())
                .collect();
            changed.rotate_left(rot);
            prop_assert_eq!(rank(&changed).unwrap(), r0);
            prop_assert_eq!(rank(&a.transpose().to_rows()).unwrap(), r0);
        }
    }
}
