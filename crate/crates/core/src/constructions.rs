//! Builders that produce new algebras from old ones: semidirect products,
//! tangent and cotangent algebras, central extensions, complexification,
//! matrix realizations, affinization of associative algebras and
//! Inönü–Wigner contractions.

use std::time::Instant;

use thiserror::Error;

use crate::lie::{
    check_representation, check_subalgebra, independent_subset, AlmostComplex, BilinearForm,
    Certificate, Connection, LieAlgebra, LieError, Witness,
};
use crate::linalg::{sparse, Matrix, SpanSolver, SparseVec};
use crate::scalar::{Field, GaussScalar, Scalar};

#[derive(Debug, Error, Clone)]
pub enum ConstructionError {
    #[error("ρ is not a representation ({} failing pairs)", .0.total_failures)]
    NotRepresentation(Box<Certificate>),
    #[error("commutator of `{left}` and `{right}` leaves the span of the basis")]
    NotClosed { left: String, right: String },
    #[error("basis element `{0}` is linearly dependent on the earlier ones")]
    LinearlyDependent(String),
    #[error("matrices must be square and share one size")]
    MatrixShape,
    #[error("product is not associative ({} failing triples)", .0.total_failures)]
    NotAssociative(Box<Certificate>),
    #[error("split is not reductive: {0}")]
    NonReductive(String),
    #[error("module has {found} labels but ρ acts on dimension {expected}")]
    ModuleLabels { expected: usize, found: usize },
    #[error("invalid matrix list: {0}")]
    MatrixJson(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// `g ⊕_ρ V` with bracket `[(x,u),(y,v)] = ([x,y], ρ(x)v - ρ(y)u)`.
pub fn semidirect<F: Field>(
    name: impl Into<String>,
    g: &LieAlgebra<F>,
    rho: &Connection<F>,
    module_labels: Vec<String>,
) -> Result<LieAlgebra<F>, ConstructionError> {
    let cert = check_representation(g, rho);
    if !cert.pass {
        return Err(ConstructionError::NotRepresentation(Box::new(cert)));
    }
    if module_labels.len() != rho.module_dim() {
        return Err(ConstructionError::ModuleLabels {
            expected: rho.module_dim(),
            found: module_labels.len(),
        });
    }
    Ok(semidirect_unchecked(name, g, rho, module_labels)?)
}

pub(crate) fn semidirect_unchecked<F: Field>(
    name: impl Into<String>,
    g: &LieAlgebra<F>,
    rho: &Connection<F>,
    module_labels: Vec<String>,
) -> Result<LieAlgebra<F>, LieError> {
    let n = g.dim();
    let mut labels = g.labels().to_vec();
    labels.extend(module_labels);
    let mut brackets = Vec::new();
    for (i, j, v) in g.structure_constants() {
        brackets.push(((i, j), v.clone()));
    }
    for i in 0..n {
        for k in 0..rho.module_dim() {
            let col = rho.at(i).sparse_column(k);
            if !col.is_empty() {
                brackets.push((
                    (i, n + k),
                    col.into_iter().map(|(r, c)| (n + r, c)).collect(),
                ));
            }
        }
    }
    LieAlgebra::new_deferred(name, labels, brackets)
}

/// `{l}_a` for each label, or `{l}_a2`, `{l}_a3`, ... when `_a` is taken.
pub fn tangent_labels<F: Field>(g: &LieAlgebra<F>) -> Vec<String> {
    let mut suffix = "_a".to_string();
    let mut k = 1;
    while g
        .labels()
        .iter()
        .any(|l| g.index_of(&format!("{l}{suffix}")).is_some())
    {
        k += 1;
        suffix = format!("_a{k}");
    }
    g.labels().iter().map(|l| format!("{l}{suffix}")).collect()
}

pub fn dual_labels<F: Field>(g: &LieAlgebra<F>) -> Vec<String> {
    g.labels().iter().map(|l| format!("{l}_dual")).collect()
}

/// `T_∇ g`: the semidirect product of `g` with a copy of itself via `∇`.
pub fn tangent<F: Field>(
    g: &LieAlgebra<F>,
    nabla: &Connection<F>,
) -> Result<LieAlgebra<F>, ConstructionError> {
    semidirect(format!("T({})", g.name()), g, nabla, tangent_labels(g))
}

/// `T*_∇ g` via `∇*_x = -(∇_x)^T`, with `Ω((x,α),(y,β)) = α(y) - β(x)`.
pub fn cotangent<F: Field>(
    g: &LieAlgebra<F>,
    nabla: &Connection<F>,
) -> Result<(LieAlgebra<F>, BilinearForm<F>), ConstructionError> {
    let dual = nabla.dual();
    let alg = semidirect(format!("T*({})", g.name()), g, &dual, dual_labels(g))?;
    Ok((alg, canonical_omega(g.dim())))
}

/// `[[0, -I], [I, 0]]` in the (basis, dual basis) frame.
pub fn canonical_omega<F: Field>(n: usize) -> BilinearForm<F> {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, F::one().neg());
        m.set(n + i, i, F::one());
    }
    BilinearForm::skew(m).expect("skew by construction")
}

/// `K(x, y) = (y, -x)` on a doubled space of dimension `2n`.
pub fn canonical_k<F: Field>(n: usize) -> AlmostComplex<F> {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        // column i (x-part) maps to -x in the second slot
        m.set(n + i, i, F::one().neg());
        m.set(i, n + i, F::one());
    }
    AlmostComplex::new(m).expect("K^2 = -id by construction")
}

/// `ℝz ⊕ g` with `z` central and appended last.
pub fn central_extension<F: Field>(g: &LieAlgebra<F>) -> LieAlgebra<F> {
    let mut z = "z".to_string();
    while g.index_of(&z).is_some() {
        z.push('\'');
    }
    let mut labels = g.labels().to_vec();
    labels.push(z);
    let brackets = g
        .structure_constants()
        .map(|(i, j, v)| ((i, j), v.clone()))
        .collect();
    LieAlgebra::new_deferred(format!("Rz+{}", g.name()), labels, brackets)
        .expect("labels are unique")
}

pub fn complexify(l: &LieAlgebra<Scalar>) -> LieAlgebra<GaussScalar> {
    let brackets = l
        .structure_constants()
        .map(|(i, j, v)| {
            (
                (i, j),
                v.iter()
                    .map(|(k, c)| (*k, GaussScalar::from(c.clone())))
                    .collect(),
            )
        })
        .collect();
    LieAlgebra::new_deferred(format!("{}^C", l.name()), l.labels().to_vec(), brackets)
        .expect("same labels")
}

fn to_gauss(v: &[(usize, Scalar)]) -> SparseVec<GaussScalar> {
    v.iter()
        .map(|(k, c)| (*k, GaussScalar::from(c.clone())))
        .collect()
}

/// A basis of `g^{1,0}`, selected from `{b_k - i J b_k}`.
pub fn holomorphic_basis(
    l: &LieAlgebra<Scalar>,
    j: &AlmostComplex<Scalar>,
) -> Vec<SparseVec<GaussScalar>> {
    let minus_i = GaussScalar::i().neg();
    let all: Vec<SparseVec<GaussScalar>> = (0..l.dim())
        .map(|k| sparse::axpy(&sparse::unit(k), &minus_i, &to_gauss(j.column(k))))
        .collect();
    independent_subset(l.dim(), &all)
}

fn conj(v: &[(usize, GaussScalar)]) -> SparseVec<GaussScalar> {
    v.iter().map(|(k, c)| (*k, c.conj())).collect()
}

/// `g^C = g^{1,0} ⊕ g^{0,1}` together with bracket-closure certificates.
#[derive(Clone, Debug)]
pub struct EigenspaceSplit {
    pub holomorphic: Vec<SparseVec<GaussScalar>>,
    pub antiholomorphic: Vec<SparseVec<GaussScalar>>,
    pub closure: Certificate,
}

impl EigenspaceSplit {
    pub fn closed(&self) -> bool {
        self.closure.pass
    }
}

pub fn eigenspace_split(l: &LieAlgebra<Scalar>, j: &AlmostComplex<Scalar>) -> EigenspaceSplit {
    let start = Instant::now();
    let lc = complexify(l);
    let holo = holomorphic_basis(l, j);
    let anti: Vec<_> = holo.iter().map(|v| conj(v)).collect();
    let subs = vec![
        check_subalgebra("closure_1_0", &lc, &holo),
        check_subalgebra("closure_0_1", &lc, &anti),
    ];
    let closure = Certificate::composite("eigenspace_closure", l.name(), subs, start)
        .detail("holomorphic_dim", holo.len());
    EigenspaceSplit {
        holomorphic: holo,
        antiholomorphic: anti,
        closure,
    }
}

/// Matrices realizing a Lie algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRealization<F = Scalar> {
    pub mats: Vec<Matrix<F>>,
}

impl<F: Field> MatrixRealization<F> {
    /// The matrix of a sparse coefficient vector.
    pub fn element(&self, v: &[(usize, F)]) -> Matrix<F> {
        let n = self.mats.first().map_or(0, Matrix::rows);
        v.iter().fold(Matrix::zeros(n, n), |acc, (k, c)| {
            &acc + &self.mats[*k].scale(c)
        })
    }
}

fn flat<F: Field>(m: &Matrix<F>) -> SparseVec<F> {
    sparse::from_dense(m.entries())
}

fn basis_solver<F: Field>(
    labels: &[String],
    mats: &[Matrix<F>],
) -> Result<SpanSolver<F>, ConstructionError> {
    let size = mats.first().map_or(0, Matrix::rows);
    if mats.iter().any(|m| !m.is_square() || m.rows() != size) {
        return Err(ConstructionError::MatrixShape);
    }
    let mut solver = SpanSolver::new(size * size);
    for (k, m) in mats.iter().enumerate() {
        if !solver.insert_sparse(flat(m)) {
            return Err(ConstructionError::LinearlyDependent(labels[k].clone()));
        }
    }
    Ok(solver)
}

/// Structure constants read off from commutators of a linearly independent,
/// commutator-closed list of matrices.
pub fn from_matrix_basis<F: Field>(
    name: impl Into<String>,
    labels: Vec<String>,
    mats: Vec<Matrix<F>>,
) -> Result<(LieAlgebra<F>, MatrixRealization<F>), ConstructionError> {
    if labels.len() != mats.len() {
        return Err(LieError::DimensionMismatch {
            expected: mats.len(),
            found: labels.len(),
        }
        .into());
    }
    let solver = basis_solver(&labels, &mats)?;
    let n = mats.len();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = mats[i].commutator(&mats[j]).expect("same size");
            let coeffs =
                solver
                    .solve_sparse(&flat(&c))
                    .ok_or_else(|| ConstructionError::NotClosed {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                    })?;
            if !coeffs.is_empty() {
                brackets.push(((i, j), coeffs));
            }
        }
    }
    let alg = LieAlgebra::new_deferred(name, labels, brackets)?;
    Ok((alg, MatrixRealization { mats }))
}

/// Parses a JSON list of row-major matrices; entries are `"p/q"` strings or integers.
pub fn matrices_from_json(text: &str) -> Result<Vec<Matrix<Scalar>>, ConstructionError> {
    let err = |m: &str| ConstructionError::MatrixJson(m.to_string());
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| err(&e.to_string()))?;
    let list = value
        .as_array()
        .ok_or_else(|| err("expected a list of matrices"))?;
    list.iter()
        .map(|m| {
            let rows = m.as_array().ok_or_else(|| err("expected a matrix"))?;
            let rows = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| err("expected a row"))?
                        .iter()
                        .map(|x| match x {
                            serde_json::Value::String(s) => {
                                s.parse::<Scalar>().map_err(|e| err(&e.to_string()))
                            }
                            serde_json::Value::Number(n) => n
                                .as_i64()
                                .map(Scalar::from)
                                .ok_or_else(|| err("non-integer number; use a \"p/q\" string")),
                            _ => Err(err("expected a scalar")),
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Matrix::from_rows(rows).map_err(|e| err(&e.to_string()))
        })
        .collect()
}

/// A finite-dimensional associative algebra given by its product table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativeAlgebra<F = Scalar> {
    name: String,
    labels: Vec<String>,
    table: Vec<SparseVec<F>>,
}

impl<F: Field> AssociativeAlgebra<F> {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        products: Vec<((usize, usize), SparseVec<F>)>,
    ) -> Result<Self, ConstructionError> {
        let n = labels.len();
        let mut table = vec![Vec::new(); n * n];
        for ((i, j), v) in products {
            if i >= n || j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(LieError::IndexOutOfRange {
                    index: i.max(j),
                    dim: n,
                }
                .into());
            }
            table[i * n + j] = sparse::collect(v);
        }
        let a = AssociativeAlgebra {
            name: name.into(),
            labels,
            table,
        };
        let cert = a.check_associative();
        if !cert.pass {
            return Err(ConstructionError::NotAssociative(Box::new(cert)));
        }
        Ok(a)
    }

    /// Product table read off from a multiplicatively closed list of matrices.
    pub fn from_matrix_basis(
        name: impl Into<String>,
        labels: Vec<String>,
        mats: &[Matrix<F>],
    ) -> Result<Self, ConstructionError> {
        let solver = basis_solver(&labels, mats)?;
        let n = mats.len();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = &mats[i] * &mats[j];
                let coeffs =
                    solver
                        .solve_sparse(&flat(&p))
                        .ok_or_else(|| ConstructionError::NotClosed {
                            left: labels[i].clone(),
                            right: labels[j].clone(),
                        })?;
                products.push(((i, j), coeffs));
            }
        }
        Self::new(name, labels, products)
    }

    /// `M_n(ℝ)` with matrix units `e{i}{j}`.
    pub fn real_matrices(n: usize) -> Self {
        let (labels, mats) = matrix_units(n);
        Self::from_matrix_basis(format!("M{n}(R)"), labels, &mats).expect("matrix units are closed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim() + j]
    }

    pub fn product(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let mut terms = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.mul(b);
                for (k, c) in self.product_basis(*i, *j) {
                    terms.push((*k, ab.mul(c)));
                }
            }
        }
        sparse::collect(terms)
    }

    pub fn check_associative(&self) -> Certificate {
        let start = Instant::now();
        let n = self.dim();
        let mut failures = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.product(self.product_basis(i, j), &sparse::unit(k));
                    let r = self.product(&sparse::unit(i), self.product_basis(j, k));
                    let d = sparse::sub(&l, &r);
                    if !d.is_empty() {
                        failures.push(Witness::new(vec![i, j, k], &sparse::to_dense(&d, n)));
                    }
                }
            }
        }
        Certificate::from_failures("associative", self.name.clone(), failures, start)
    }

    pub fn left_mult(&self, i: usize) -> Matrix<F> {
        let cols: Vec<_> = (0..self.dim())
            .map(|j| self.product_basis(i, j).clone())
            .collect();
        Matrix::from_sparse_columns(self.dim(), &cols)
    }

    pub fn right_mult(&self, i: usize) -> Matrix<F> {
        let cols: Vec<_> = (0..self.dim())
            .map(|j| self.product_basis(j, i).clone())
            .collect();
        Matrix::from_sparse_columns(self.dim(), &cols)
    }

    /// The Lie algebra with bracket `ab - ba`.
    pub fn commutator_algebra(&self) -> LieAlgebra<F> {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = sparse::sub(self.product_basis(i, j), self.product_basis(j, i));
                if !v.is_empty() {
                    brackets.push(((i, j), v));
                }
            }
        }
        LieAlgebra::new_deferred(format!("Lie({})", self.name), self.labels.clone(), brackets)
            .expect("labels are unique")
    }

    /// Left multiplication as a flat torsion-free connection on the commutator algebra.
    pub fn left_connection(&self) -> Connection<F> {
        Connection::new(
            (0..self.dim()).map(|i| self.left_mult(i)).collect(),
            self.dim(),
        )
        .expect("square")
    }
}

/// Matrix units `e{i}{j}` of `gl(n)` in row-major order.
pub fn matrix_units<F: Field>(n: usize) -> (Vec<String>, Vec<Matrix<F>>) {
    let mut labels = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            labels.push(if n >= 10 {
                format!("e{}_{}", i + 1, j + 1)
            } else {
                format!("e{}{}", i + 1, j + 1)
            });
            let mut m = Matrix::zeros(n, n);
            m.set(i, j, F::one());
            mats.push(m);
        }
    }
    (labels, mats)
}

/// Algebra, canonical `K` and connection of an `aff(A)`.
pub type AffParts<F> = (LieAlgebra<F>, AlmostComplex<F>, Connection<F>);

/// `aff(A) = A ⊕ A` with `[(a,b),(c,d)] = (ac - ca, ad - cb)`, the canonical
/// `K(a,b) = (b,-a)`, and `∇_{(a,b)}(c,d) = (ac, ad)`.
pub fn aff_algebra<F: Field>(
    a: &AssociativeAlgebra<F>,
) -> Result<AffParts<F>, ConstructionError> {
    let g = a.commutator_algebra();
    let alg = semidirect(
        format!("aff({})", a.name()),
        &g,
        &a.left_connection(),
        tangent_labels(&g),
    )?;
    let n = a.dim();
    let zero = Matrix::zeros(2 * n, 2 * n);
    let values = (0..2 * n)
        .map(|i| {
            if i < n {
                let l = a.left_mult(i);
                Matrix::block_diag(&[&l, &l])
            } else {
                zero.clone()
            }
        })
        .collect();
    Ok((alg, canonical_k(n), Connection::new(values, 2 * n)?))
}

/// The Inönü–Wigner family `[h,h]`, `[h,m]` fixed, with the `h`- and
/// `m`-components of `[m,m]` scaled by `t^2` and `t`.
#[derive(Clone, Debug)]
pub struct ContractionFamily {
    pub base: LieAlgebra<Scalar>,
    pub h: Vec<usize>,
    pub m: Vec<usize>,
}

pub fn iw_contraction(
    base: &LieAlgebra<Scalar>,
    h: &[usize],
    m: &[usize],
) -> Result<ContractionFamily, ConstructionError> {
    let n = base.dim();
    let mut seen = vec![false; n];
    for &i in h.iter().chain(m) {
        if i >= n || seen[i] {
            return Err(ConstructionError::NonReductive(
                "index sets do not partition the basis".into(),
            ));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(ConstructionError::NonReductive(
            "index sets do not partition the basis".into(),
        ));
    }
    let in_h = |k: usize| h.contains(&k);
    for &a in h {
        for &b in h {
            if let Some((k, _)) = base.bracket_basis(a, b).iter().find(|(k, _)| !in_h(*k)) {
                return Err(ConstructionError::NonReductive(format!(
                    "[{}, {}] has a component along {}",
                    base.label(a),
                    base.label(b),
                    base.label(*k)
                )));
            }
        }
        for &b in m {
            if let Some((k, _)) = base.bracket_basis(a, b).iter().find(|(k, _)| in_h(*k)) {
                return Err(ConstructionError::NonReductive(format!(
                    "[{}, {}] has a component along {}",
                    base.label(a),
                    base.label(b),
                    base.label(*k)
                )));
            }
        }
    }
    Ok(ContractionFamily {
        base: base.clone(),
        h: h.to_vec(),
        m: m.to_vec(),
    })
}

impl ContractionFamily {
    pub fn at(&self, t: &Scalar) -> LieAlgebra<Scalar> {
        let in_m = |k: usize| self.m.contains(&k);
        let t2 = t * t;
        let brackets = self
            .base
            .structure_constants()
            .filter_map(|(i, j, v)| {
                let v = if in_m(i) && in_m(j) {
                    let scaled: SparseVec<Scalar> = v
                        .iter()
                        .map(|(k, c)| (*k, if in_m(*k) { c * t } else { c * &t2 }))
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    scaled
                } else {
                    v.clone()
                };
                (!v.is_empty()).then_some(((i, j), v))
            })
            .collect();
        LieAlgebra::new_deferred(
            format!("{}@t={t}", self.base.name()),
            self.base.labels().to_vec(),
            brackets,
        )
        .expect("same labels")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{check_jacobi, labels};
    use crate::scalar::q;

    fn s(x: i64) -> Scalar {
        Scalar::from(x)
    }

    #[test]
    fn rotation_generator_is_abelian() {
        let m = Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(-1), s(0)]]).unwrap();
        let (l, _) = from_matrix_basis("so2", labels(&["h"]), vec![m]).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(l.is_abelian());
    }

    #[test]
    fn gl2_matrix_units() {
        let (labels, mats) = matrix_units::<Scalar>(2);
        let (l, _) = from_matrix_basis("gl2", labels, mats).unwrap();
        // [e_ij, e_rs] = δ_jr e_is - δ_si e_rj
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s_ in 0..2 {
                        let mut expect = Vec::new();
                        if j == r {
                            expect.push((i * 2 + s_, s(1)));
                        }
                        if s_ == i {
                            expect.push((r * 2 + j, s(-1)));
                        }
                        let got =
                            l.bracket_sparse(&sparse::unit(i * 2 + j), &sparse::unit(r * 2 + s_));
                        assert_eq!(got, sparse::collect(expect));
                    }
                }
            }
        }
    }

    #[test]
    fn non_closed_basis_is_rejected() {
        let (labels_, mats) = matrix_units::<Scalar>(2);
        let err = from_matrix_basis(
            "x",
            vec![labels_[1].clone(), labels_[2].clone()],
            vec![mats[1].clone(), mats[2].clone()],
        )
        .unwrap_err();
        assert!(matches!(err, ConstructionError::NotClosed { .. }));
    }

    #[test]
    fn abelian_cotangent_has_standard_omega() {
        let g = LieAlgebra::<Scalar>::abelian("ab2", labels(&["a", "b"])).unwrap();
        let (t, omega) = cotangent(&g, &Connection::zero(2, 2)).unwrap();
        assert!(t.is_abelian());
        assert_eq!(t.labels()[2], "a_dual");
        assert_eq!(omega.matrix().get(0, 2), &s(-1));
        assert_eq!(omega.matrix().get(2, 0), &s(1));
    }

    #[test]
    fn central_extension_appends_z() {
        let g = LieAlgebra::<Scalar>::abelian("ab2", labels(&["a", "b"])).unwrap();
        let e = central_extension(&g);
        assert_eq!(e.labels().last().unwrap(), "z");
        assert!(e.is_abelian());
    }

    #[test]
    fn aff_of_reals_is_the_affine_line() {
        let r = AssociativeAlgebra::new("R", labels(&["one"]), vec![((0, 0), vec![(0, s(1))])])
            .unwrap();
        let (l, k, _) = aff_algebra(&r).unwrap();
        assert_eq!(l.dim(), 2);
        // [(1,0),(0,1)] = (0, 1*1 - 0) so aff(R) is not abelian
        assert_eq!(l.bracket_basis(0, 1), &vec![(1, s(1))]);
        assert_eq!(k.column(0), &vec![(1, s(-1))]);
    }

    #[test]
    fn non_associative_is_rejected() {
        // x*x = y, y*x = x breaks (xx)x = x(xx)
        let err = AssociativeAlgebra::new(
            "bad",
            labels(&["x", "y"]),
            vec![((0, 0), vec![(1, s(1))]), ((1, 0), vec![(0, s(1))])],
        )
        .unwrap_err();
        assert!(matches!(err, ConstructionError::NotAssociative(_)));
    }

    #[test]
    fn contraction_endpoints() {
        let (labels_, mats) = matrix_units::<Scalar>(2);
        let (gl2, _) = from_matrix_basis("gl2", labels_, mats).unwrap();
        // h = diagonal, m = off-diagonal: [h,m] ⊆ m
        let fam = iw_contraction(&gl2, &[0, 3], &[1, 2]).unwrap();
        assert!(fam.at(&s(1)).same_structure(&gl2));
        let t0 = fam.at(&s(0));
        assert!(t0.bracket_basis(1, 2).is_empty());
        assert!(check_jacobi(&fam.at(&q(1, 2))).pass);
        assert!(iw_contraction(&gl2, &[1], &[0, 2, 3]).is_err());
    }

    #[test]
    fn matrices_parse_from_json() {
        let ms = matrices_from_json(r#"[[["1/2", 0], [0, "-3"]]]"#).unwrap();
        assert_eq!(ms[0].get(0, 0), &q(1, 2));
        assert_eq!(ms[0].get(1, 1), &s(-3));
        assert!(matrices_from_json("[[[0.5]]]").is_err());
    }
}
