use std::collections::HashMap;
use std::fmt;

use crate::linalg::{sparse, Matrix, SparseVec};
use crate::scalar::{Field, Scalar};

use super::LieError;

/// A finite-dimensional Lie algebra given by structure constants in a labeled basis.
///
/// The table stores both orders of every basis pair, so `[b_j, b_i]` is a
/// lookup rather than a negation.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra<F = Scalar> {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<SparseVec<F>>,
}

impl<F: Field> LieAlgebra<F> {
    /// Builds the algebra and checks the Jacobi identity on every basis triple.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: Vec<((usize, usize), SparseVec<F>)>,
    ) -> Result<Self, LieError> {
        let alg = Self::new_deferred(name, labels, brackets)?;
        let cert = super::checks::check_jacobi(&alg);
        if !cert.pass {
            return Err(LieError::Jacobi(Box::new(cert)));
        }
        Ok(alg)
    }

    /// Like [`LieAlgebra::new`] but leaves the Jacobi check to the caller.
    pub fn new_deferred(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: Vec<((usize, usize), SparseVec<F>)>,
    ) -> Result<Self, LieError> {
        let dim = labels.len();
        let index = index_labels(&labels)?;
        let mut table = vec![Vec::new(); dim * dim];
        let mut seen = vec![false; dim * dim];
        for ((i, j), v) in brackets {
            if i >= dim || j >= dim {
                return Err(LieError::IndexOutOfRange {
                    index: i.max(j),
                    dim,
                });
            }
            if i >= j {
                return Err(LieError::NonCanonicalPair { i, j });
            }
            if seen[i * dim + j] {
                return Err(LieError::DuplicateBracket { i, j });
            }
            seen[i * dim + j] = true;
            if let Some((k, _)) = v.iter().find(|(k, _)| *k >= dim) {
                return Err(LieError::IndexOutOfRange { index: *k, dim });
            }
            let v = sparse::collect(v);
            table[j * dim + i] = sparse::neg(&v);
            table[i * dim + j] = v;
        }
        Ok(LieAlgebra {
            name: name.into(),
            labels,
            index,
            table,
        })
    }

    pub fn abelian(name: impl Into<String>, labels: Vec<String>) -> Result<Self, LieError> {
        Self::new_deferred(name, labels, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Index of a label that is known to exist.
    pub fn idx(&self, label: &str) -> usize {
        self.index_of(label)
            .unwrap_or_else(|| panic!("no basis element `{label}` in {}", self.name))
    }

    pub fn scalar_field(&self) -> &'static str {
        F::TAG
    }

    /// `[b_i, b_j]` as a sparse coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim() + j]
    }

    /// Bilinear extension of the structure constants to sparse vectors.
    pub fn bracket_sparse(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let mut terms = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let c = self.bracket_basis(*i, *j);
                if c.is_empty() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, v) in c {
                    terms.push((*k, ab.mul(v)));
                }
            }
        }
        sparse::collect(terms)
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Result<Vec<F>, LieError> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let r = self.bracket_sparse(&sparse::from_dense(x), &sparse::from_dense(y));
        Ok(sparse::to_dense(&r, self.dim()))
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), LieError> {
        if n != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }

    /// Matrix of `ad(b_i)`.
    pub fn ad(&self, i: usize) -> Matrix<F> {
        let cols: Vec<SparseVec<F>> = (0..self.dim())
            .map(|j| self.bracket_basis(i, j).clone())
            .collect();
        Matrix::from_sparse_columns(self.dim(), &cols)
    }

    /// Matrix of `ad(x)` for a sparse vector `x`.
    pub fn ad_vec(&self, x: &[(usize, F)]) -> Matrix<F> {
        let cols: Vec<SparseVec<F>> = (0..self.dim())
            .map(|j| self.bracket_sparse(x, &sparse::unit(j)))
            .collect();
        Matrix::from_sparse_columns(self.dim(), &cols)
    }

    /// Nonzero brackets `[b_i, b_j]` with `i < j`, in lexicographic order.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, &SparseVec<F>)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let v = self.bracket_basis(i, j);
                (!v.is_empty()).then_some((i, j, v))
            })
        })
    }

    /// Equal labels and structure constants, ignoring the name.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.labels == other.labels && self.table == other.table
    }

    pub fn is_abelian(&self) -> bool {
        self.structure_constants().next().is_none()
    }

    /// Same algebra with new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self, LieError> {
        self.check_len(labels.len())?;
        let index = index_labels(&labels)?;
        Ok(LieAlgebra {
            name: self.name.clone(),
            labels,
            index,
            table: self.table.clone(),
        })
    }

    /// Reorders the basis: new basis element `k` is old element `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, LieError> {
        let n = self.dim();
        self.check_len(order.len())?;
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(LieError::NotAPermutation);
            }
            inverse[old] = new;
        }
        let labels = order.iter().map(|&o| self.labels[o].clone()).collect();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = self.bracket_basis(order[a], order[b]);
                if !v.is_empty() {
                    let moved =
                        sparse::collect(v.iter().map(|(k, c)| (inverse[*k], c.clone())).collect());
                    brackets.push(((a, b), moved));
                }
            }
        }
        Self::new_deferred(self.name.clone(), labels, brackets)
    }

    /// Basis reordering that sends this algebra's labels onto `target_labels`.
    pub fn permuted_to(&self, target_labels: &[String]) -> Result<Self, LieError> {
        let order = target_labels
            .iter()
            .map(|l| {
                self.index_of(l)
                    .ok_or_else(|| LieError::UnknownLabel(l.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.permuted(&order)
    }

    /// Structure constants transported to a new basis given by the columns of `p`.
    ///
    /// New basis vector `k` is `sum_r p[r][k] b_r`; fails if `p` is singular.
    pub fn change_basis(&self, p: &Matrix<F>, labels: Vec<String>) -> Result<Self, LieError> {
        self.check_len(p.rows())?;
        let inv = crate::linalg::invert(p)?;
        let cols = p.sparse_columns();
        let n = self.dim();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = self.bracket_sparse(&cols[a], &cols[b]);
                let w = inv.apply_sparse(&v);
                if !w.is_empty() {
                    brackets.push(((a, b), w));
                }
            }
        }
        Self::new_deferred(self.name.clone(), labels, brackets)
    }

    /// Sparse vector from `(label, coefficient)` pairs.
    pub fn vector(&self, terms: &[(&str, F)]) -> Result<SparseVec<F>, LieError> {
        let mut out = Vec::new();
        for (l, c) in terms {
            let i = self
                .index_of(l)
                .ok_or_else(|| LieError::UnknownLabel(l.to_string()))?;
            out.push((i, c.clone()));
        }
        Ok(sparse::collect(out))
    }

    /// Renders a sparse vector as `c1 L1 - c2 L2`.
    pub fn format_vector(&self, v: &[(usize, F)]) -> String {
        format_terms(&self.labels, v)
    }
}

/// `L1 - 1/2 L2 + 3 L3`, or `0` for the zero vector.
pub fn format_terms<F: Field>(labels: &[String], v: &[(usize, F)]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (i, c)) in v.iter().enumerate() {
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        match (n, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push(' ');
        }
        out.push_str(&labels[*i]);
    }
    out
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>, LieError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(LieError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl<F: Field> fmt::Debug for LieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {}, {})", self.name, self.dim(), F::TAG)?;
        for (i, j, v) in self.structure_constants() {
            writeln!(
                f,
                "  [{}, {}] = {}",
                self.labels[i],
                self.labels[j],
                self.format_vector(v)
            )?;
        }
        Ok(())
    }
}

/// Owned labels from string literals.
pub fn labels<S: AsRef<str>>(xs: &[S]) -> Vec<String> {
    xs.iter().map(|s| s.as_ref().to_string()).collect()
}
