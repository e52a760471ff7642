//! Certificate-producing sweeps over basis pairs and triples.
//!
//! Every tensor involved is multilinear, so vanishing on basis tuples is
//! equivalent to vanishing identically.

use std::time::Instant;

use crate::linalg::{invert, sparse, LinalgError, Matrix, SpanSolver, SparseVec};
use crate::scalar::{Field, Scalar};

use super::{
    sweep_indices, sweep_pairs, sweep_triples, AlmostComplex, BilinearForm, Certificate,
    Connection, FormKind, LieAlgebra, LieError, Witness,
};

fn dense_defect<F: Field>(v: &[(usize, F)], dim: usize) -> Vec<F> {
    sparse::to_dense(v, dim)
}

pub fn check_jacobi<F: Field>(l: &LieAlgebra<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    let failures = sweep_triples(n, |i, j, k| {
        let (bi, bj, bk) = (sparse::unit(i), sparse::unit(j), sparse::unit(k));
        let a = l.bracket_sparse(&bi, l.bracket_basis(j, k));
        let b = l.bracket_sparse(&bj, l.bracket_basis(k, i));
        let c = l.bracket_sparse(&bk, l.bracket_basis(i, j));
        let s = sparse::add(&sparse::add(&a, &b), &c);
        (!s.is_empty()).then(|| Witness::new(vec![i, j, k], &dense_defect(&s, n)))
    });
    Certificate::from_failures("jacobi", l.name(), failures, start)
}

/// `N_J(x, y) = J[x,y] - [Jx,y] - [x,Jy] - J[Jx,Jy]` on sparse vectors.
pub fn nijenhuis_sparse<F: Field>(
    l: &LieAlgebra<F>,
    j: &AlmostComplex<F>,
    x: &[(usize, F)],
    y: &[(usize, F)],
) -> SparseVec<F> {
    let jx = j.apply(x);
    let jy = j.apply(y);
    let t1 = j.apply(&l.bracket_sparse(x, y));
    let t2 = l.bracket_sparse(&jx, y);
    let t3 = l.bracket_sparse(x, &jy);
    let t4 = j.apply(&l.bracket_sparse(&jx, &jy));
    sparse::sub(&sparse::sub(&sparse::sub(&t1, &t2), &t3), &t4)
}

pub fn nijenhuis<F: Field>(
    l: &LieAlgebra<F>,
    j: &AlmostComplex<F>,
    x: &[F],
    y: &[F],
) -> Result<Vec<F>, LieError> {
    l.check_len(x.len())?;
    l.check_len(y.len())?;
    l.check_len(j.dim())?;
    let r = nijenhuis_sparse(l, j, &sparse::from_dense(x), &sparse::from_dense(y));
    Ok(sparse::to_dense(&r, l.dim()))
}

fn dimension_precondition(
    check: &str,
    target: &str,
    expected: usize,
    found: usize,
    start: Instant,
) -> Certificate {
    Certificate::precondition_failure(
        check,
        target,
        format!("dimension mismatch: expected {expected}, found {found}"),
        None,
        start,
    )
}

/// Full sweep of `N_J` over all basis pairs.
pub fn check_integrable<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplex<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if j.dim() != n {
        return dimension_precondition("integrable", l.name(), n, j.dim(), start);
    }
    let failures = sweep_pairs(n, |a, b| {
        let v = nijenhuis_sparse(l, j, &sparse::unit(a), &sparse::unit(b));
        (!v.is_empty()).then(|| Witness::new(vec![a, b], &dense_defect(&v, n)))
    });
    Certificate::from_failures("integrable", l.name(), failures, start)
        .detail("mode", "full")
        .detail("pairs", n * n.saturating_sub(1) / 2)
}

/// Integrability from a half-basis `u_1..u_k` with `{u, Ju}` a basis.
///
/// Since `N_J(Jx, y) = -J N_J(x, y)`, vanishing on pairs `(u_a, u_b)` is
/// enough. With `cross_check` the full sweep also runs and any disagreement
/// turns the certificate red.
pub fn check_integrable_split<F: Field>(
    l: &LieAlgebra<F>,
    j: &AlmostComplex<F>,
    split: &[SparseVec<F>],
    cross_check: bool,
) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if j.dim() != n {
        return dimension_precondition("integrable", l.name(), n, j.dim(), start);
    }
    let mut solver = SpanSolver::new(n);
    for u in split {
        solver.insert_sparse(u.clone());
        solver.insert_sparse(j.apply(u));
    }
    if 2 * split.len() != n || solver.rank() != n {
        return Certificate::precondition_failure(
            "integrable",
            l.name(),
            format!(
                "half-basis and its J-image span rank {} of {n}",
                solver.rank()
            ),
            None,
            start,
        );
    }
    let mut failures = sweep_pairs(split.len(), |a, b| {
        let v = nijenhuis_sparse(l, j, &split[a], &split[b]);
        (!v.is_empty()).then(|| Witness::new(vec![a, b], &dense_defect(&v, n)))
    });
    let half_pass = failures.is_empty();
    let mut subs = Vec::new();
    if cross_check {
        let full = check_integrable(l, j).with_check("integrable_full_sweep");
        if full.pass != half_pass {
            failures.push(Witness::message(
                Vec::new(),
                "half-basis verdict disagrees with full sweep",
            ));
        }
        subs.push(full);
    }
    let mut cert = Certificate::from_failures("integrable", l.name(), failures, start)
        .detail("mode", "half-basis")
        .detail("pairs", split.len() * split.len().saturating_sub(1) / 2);
    if cross_check {
        cert.set_detail("agrees_with_full_sweep", subs[0].pass == half_pass);
    }
    cert.subchecks = subs;
    cert
}

/// The canonical half-basis for a `J` given by label pairs: the first member of
/// each pair `(u, Ju)` found greedily in basis order.
pub fn half_basis<F: Field>(j: &AlmostComplex<F>) -> Vec<SparseVec<F>> {
    let n = j.dim();
    let mut solver = SpanSolver::new(n);
    let mut out = Vec::new();
    for i in 0..n {
        let u = sparse::unit(i);
        if solver.contains_sparse(&u) {
            continue;
        }
        solver.insert_sparse(u.clone());
        solver.insert_sparse(j.apply(&u));
        out.push(u);
    }
    out
}

/// Integrability of a raw endomorphism; `J^2 != -id` is a precondition failure.
pub fn check_integrable_endo<F: Field>(l: &LieAlgebra<F>, m: &Matrix<F>) -> Certificate {
    let start = Instant::now();
    match AlmostComplex::new(m.clone()) {
        Ok(j) => check_integrable(l, &j),
        Err(LieError::NotAlmostComplex { column, defect }) => Certificate::precondition_failure(
            "integrable",
            l.name(),
            "J^2 != -id",
            Some(Witness {
                indices: vec![column],
                defect,
            }),
            start,
        ),
        Err(e) => {
            Certificate::precondition_failure("integrable", l.name(), e.to_string(), None, start)
        }
    }
}

/// Bi-invariance: `ad(b_i) J = J ad(b_i)` for every basis element.
pub fn check_complex_lie<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplex<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if j.dim() != n {
        return dimension_precondition("complex_lie", l.name(), n, j.dim(), start);
    }
    let failures = sweep_indices(n, |i| {
        let bi = sparse::unit(i);
        (0..n)
            .filter_map(|k| {
                let lhs = l.bracket_sparse(&bi, j.column(k));
                let rhs = j.apply(l.bracket_basis(i, k));
                let d = sparse::sub(&lhs, &rhs);
                (!d.is_empty()).then(|| Witness::new(vec![i, k], &dense_defect(&d, n)))
            })
            .collect()
    });
    Certificate::from_failures("complex_lie", l.name(), failures, start)
}

/// Abelian complex structure: the `i`-eigenspace of `J` in the
/// complexification brackets to zero.
pub fn check_abelian_complex(l: &LieAlgebra<Scalar>, j: &AlmostComplex<Scalar>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if j.dim() != n {
        return dimension_precondition("abelian_complex", l.name(), n, j.dim(), start);
    }
    let lc = crate::constructions::complexify(l);
    let holo = crate::constructions::holomorphic_basis(l, j);
    let failures = sweep_pairs(holo.len(), |a, b| {
        let v = lc.bracket_sparse(&holo[a], &holo[b]);
        (!v.is_empty()).then(|| Witness::new(vec![a, b], &dense_defect(&v, n)))
    });
    Certificate::from_failures("abelian_complex", l.name(), failures, start)
        .detail("holomorphic_dim", holo.len())
}

/// `ρ([b_i,b_j]) = [ρ(b_i), ρ(b_j)]` for all `i < j`; the flatness test for connections.
pub fn check_representation<F: Field>(l: &LieAlgebra<F>, rho: &Connection<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if rho.algebra_dim() != n {
        return dimension_precondition("representation", l.name(), n, rho.algebra_dim(), start);
    }
    let failures = sweep_pairs(n, |i, j| {
        let lhs = rho.along(l.bracket_basis(i, j));
        let rhs = rho.at(i).commutator(rho.at(j)).expect("square module maps");
        let d = &lhs - &rhs;
        (!d.is_zero()).then(|| Witness::new(vec![i, j], d.entries()))
    });
    Certificate::from_failures("representation", l.name(), failures, start)
        .detail("module_dim", rho.module_dim())
}

/// `∇_{b_i} b_j - ∇_{b_j} b_i - [b_i, b_j]`.
pub fn torsion<F: Field>(
    l: &LieAlgebra<F>,
    nabla: &Connection<F>,
    i: usize,
    j: usize,
) -> SparseVec<F> {
    let a = nabla.at(i).sparse_column(j);
    let b = nabla.at(j).sparse_column(i);
    sparse::sub(&sparse::sub(&a, &b), l.bracket_basis(i, j))
}

fn connection_on_algebra<F: Field>(
    check: &str,
    l: &LieAlgebra<F>,
    nabla: &Connection<F>,
    start: Instant,
) -> Option<Certificate> {
    let n = l.dim();
    if nabla.algebra_dim() != n || nabla.module_dim() != n {
        return Some(dimension_precondition(
            check,
            l.name(),
            n,
            nabla.module_dim(),
            start,
        ));
    }
    None
}

pub fn check_torsion_free<F: Field>(l: &LieAlgebra<F>, nabla: &Connection<F>) -> Certificate {
    let start = Instant::now();
    if let Some(c) = connection_on_algebra("torsion_free", l, nabla, start) {
        return c;
    }
    let n = l.dim();
    let failures = sweep_pairs(n, |i, j| {
        let t = torsion(l, nabla, i, j);
        (!t.is_empty()).then(|| Witness::new(vec![i, j], &dense_defect(&t, n)))
    });
    Certificate::from_failures("torsion_free", l.name(), failures, start)
}

/// `dω(x,y,z) = ω(x,[y,z]) + ω(y,[z,x]) + ω(z,[x,y])`.
pub fn d_omega<F: Field>(
    l: &LieAlgebra<F>,
    omega: &BilinearForm<F>,
    i: usize,
    j: usize,
    k: usize,
) -> F {
    let (bi, bj, bk) = (sparse::unit(i), sparse::unit(j), sparse::unit(k));
    omega
        .eval(&bi, l.bracket_basis(j, k))
        .add(&omega.eval(&bj, l.bracket_basis(k, i)))
        .add(&omega.eval(&bk, l.bracket_basis(i, j)))
}

pub fn check_closed<F: Field>(l: &LieAlgebra<F>, omega: &BilinearForm<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if omega.dim() != n {
        return dimension_precondition("closed", l.name(), n, omega.dim(), start);
    }
    if omega.kind() != FormKind::Skew {
        return Certificate::precondition_failure(
            "closed",
            l.name(),
            "form is not skew",
            None,
            start,
        );
    }
    let failures = sweep_triples(n, |i, j, k| {
        let v = d_omega(l, omega, i, j, k);
        (!v.is_zero()).then(|| Witness::new(vec![i, j, k], &[v]))
    });
    Certificate::from_failures("closed", l.name(), failures, start)
}

/// Invertibility of a form's matrix, with a kernel vector as witness.
pub fn check_nondegenerate<F: Field>(target: &str, omega: &BilinearForm<F>) -> Certificate {
    let start = Instant::now();
    let failures = match invert(omega.matrix()) {
        Ok(_) => Vec::new(),
        Err(LinalgError::Singular { kernel }) => vec![Witness {
            indices: Vec::new(),
            defect: kernel,
        }],
        Err(e) => vec![Witness::message(Vec::new(), e.to_string())],
    };
    Certificate::from_failures("nondegenerate", target, failures, start)
}

pub fn check_symplectic<F: Field>(l: &LieAlgebra<F>, omega: &BilinearForm<F>) -> Certificate {
    let start = Instant::now();
    let subs = vec![check_closed(l, omega), check_nondegenerate(l.name(), omega)];
    Certificate::composite("symplectic", l.name(), subs, start)
}

/// `∇_{b_i} T = T ∇_{b_i}` for all `i`.
pub fn check_parallel_endo<F: Field>(
    target: &str,
    nabla: &Connection<F>,
    t: &Matrix<F>,
) -> Certificate {
    let start = Instant::now();
    let m = nabla.module_dim();
    if t.rows() != m || t.cols() != m {
        return dimension_precondition("parallel", target, m, t.rows(), start);
    }
    let failures = sweep_indices(nabla.algebra_dim(), |i| {
        let d = nabla.at(i).commutator(t).expect("square module maps");
        if d.is_zero() {
            Vec::new()
        } else {
            vec![Witness::new(vec![i], d.entries())]
        }
    });
    Certificate::from_failures("parallel", target, failures, start)
}

/// `ω(∇_{b_i} y, z) + ω(y, ∇_{b_i} z) = 0` on all basis triples.
pub fn check_parallel_form<F: Field>(
    target: &str,
    nabla: &Connection<F>,
    omega: &BilinearForm<F>,
) -> Certificate {
    let start = Instant::now();
    let m = nabla.module_dim();
    if omega.dim() != m {
        return dimension_precondition("parallel", target, m, omega.dim(), start);
    }
    let w = omega.matrix();
    let failures = sweep_indices(nabla.algebra_dim(), |i| {
        let a = nabla.at(i);
        let d = &(&a.transpose() * w) + &(w * a);
        let mut out = Vec::new();
        for r in 0..m {
            for c in 0..m {
                let v = d.get(r, c);
                if !v.is_zero() {
                    out.push(Witness::new(vec![i, r, c], std::slice::from_ref(v)));
                }
            }
        }
        out
    });
    Certificate::from_failures("parallel", target, failures, start)
}

/// Metric compatibility plus torsion-freeness plus flatness, each a subcheck.
pub fn check_metric<F: Field>(
    l: &LieAlgebra<F>,
    nabla: &Connection<F>,
    b: &BilinearForm<F>,
) -> Certificate {
    let start = Instant::now();
    if b.kind() != FormKind::Symmetric {
        return Certificate::precondition_failure(
            "metric",
            l.name(),
            "form is not symmetric",
            None,
            start,
        );
    }
    if let Err(LinalgError::Singular { kernel }) = invert(b.matrix()) {
        return Certificate::precondition_failure(
            "metric",
            l.name(),
            "form is degenerate",
            Some(Witness {
                indices: Vec::new(),
                defect: kernel,
            }),
            start,
        );
    }
    let subs = vec![
        check_parallel_form(l.name(), nabla, b).with_check("metric_compatible"),
        check_torsion_free(l, nabla),
        check_representation(l, nabla).with_check("flat"),
    ];
    Certificate::composite("metric", l.name(), subs, start)
}

/// Vectors among `vs` that raise the rank, in order.
pub fn independent_subset<F: Field>(dim: usize, vs: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let mut solver = SpanSolver::new(dim);
    vs.iter()
        .filter(|v| solver.insert_sparse((*v).clone()))
        .cloned()
        .collect()
}

/// Closure of a span under the bracket, as a certificate over basis pairs.
pub fn check_subalgebra<F: Field>(
    check: &str,
    l: &LieAlgebra<F>,
    basis: &[SparseVec<F>],
) -> Certificate {
    let start = Instant::now();
    let solver = SpanSolver::from_sparse(l.dim(), basis);
    let failures = sweep_pairs(basis.len(), |a, b| {
        let r = solver.residual_sparse(&l.bracket_sparse(&basis[a], &basis[b]));
        (!r.is_empty()).then(|| Witness::new(vec![a, b], &dense_defect(&r, l.dim())))
    });
    Certificate::from_failures(check, l.name(), failures, start)
}

/// Whether `[L, span] ⊆ span`.
pub fn is_ideal<F: Field>(l: &LieAlgebra<F>, basis: &[SparseVec<F>]) -> bool {
    let solver = SpanSolver::from_sparse(l.dim(), basis);
    (0..l.dim()).all(|k| {
        let bk = sparse::unit(k);
        basis
            .iter()
            .all(|v| solver.contains_sparse(&l.bracket_sparse(&bk, v)))
    })
}

pub fn is_abelian_span<F: Field>(l: &LieAlgebra<F>, basis: &[SparseVec<F>]) -> bool {
    basis.iter().enumerate().all(|(a, u)| {
        basis[a + 1..]
            .iter()
            .all(|v| l.bracket_sparse(u, v).is_empty())
    })
}

/// Product structure `E` (`E^2 = id`): both eigenspaces must be subalgebras.
pub fn check_product_structure<F: Field>(l: &LieAlgebra<F>, e: &Matrix<F>) -> Certificate {
    let start = Instant::now();
    let n = l.dim();
    if e.rows() != n || !e.is_square() {
        return dimension_precondition("product_structure", l.name(), n, e.rows(), start);
    }
    let id = Matrix::identity(n);
    let sq = e * e;
    if sq != id {
        let d = &sq - &id;
        return Certificate::precondition_failure(
            "product_structure",
            l.name(),
            "E^2 != id",
            Some(Witness::new(Vec::new(), d.entries())),
            start,
        );
    }
    let plus = independent_subset(n, &(e + &id).sparse_columns());
    let minus = independent_subset(n, &(e - &id).sparse_columns());
    let subs = vec![
        check_subalgebra("plus_subalgebra", l, &plus),
        check_subalgebra("minus_subalgebra", l, &minus),
    ];
    Certificate::composite("product_structure", l.name(), subs, start)
        .detail("plus_dim", plus.len())
        .detail("minus_dim", minus.len())
        .detail("plus_ideal", is_ideal(l, &plus))
        .detail("minus_ideal", is_ideal(l, &minus))
        .detail("minus_abelian", is_abelian_span(l, &minus))
        .detail("degenerate", plus.is_empty() || minus.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::labels;
    use crate::scalar::q;

    fn s(x: i64) -> Scalar {
        Scalar::from(x)
    }

    fn table(ab: SparseVec<Scalar>) -> LieAlgebra {
        LieAlgebra::new_deferred(
            "t",
            labels(&["a", "b", "c"]),
            vec![
                ((0, 1), ab),
                ((0, 2), vec![(1, s(1))]),
                ((1, 2), vec![(0, s(1))]),
            ],
        )
        .unwrap()
    }

    fn aff1() -> LieAlgebra {
        LieAlgebra::new("aff1", labels(&["x", "y"]), vec![((0, 1), vec![(1, s(1))])]).unwrap()
    }

    #[test]
    fn jacobi_witness_on_broken_table() {
        // every 3-dim table with [b,c]~a, [c,a]~b, [a,b]~c satisfies Jacobi,
        // whatever the signs
        assert!(check_jacobi(&table(vec![(2, s(1))])).pass);
        assert!(check_jacobi(&table(vec![(2, s(-1))])).pass);
        // [c,[a,b]] = [c,a] = -b survives
        let cert = check_jacobi(&table(vec![(0, s(1))]));
        assert!(!cert.pass);
        assert_eq!(cert.witnesses[0].indices, vec![0, 1, 2]);
        assert_eq!(cert.witnesses[0].defect, vec!["0", "-1", "0"]);
    }

    #[test]
    fn abelian_is_everything() {
        let l = LieAlgebra::<Scalar>::abelian("ab4", labels(&["a", "b", "c", "d"])).unwrap();
        let j = AlmostComplex::from_label_pairs(&l, &[("a", "c"), ("b", "d")]).unwrap();
        assert!(check_integrable(&l, &j).pass);
        assert!(check_complex_lie(&l, &j).pass);
        assert!(check_abelian_complex(&l, &j).pass);
        assert!(check_representation(&l, &Connection::ad(&l)).pass);
    }

    #[test]
    fn left_symmetric_on_aff1_is_torsion_free() {
        let l = aff1();
        let mut nx = Matrix::zeros(2, 2);
        nx.set(1, 1, s(1));
        let nabla = Connection::new(vec![nx, Matrix::zeros(2, 2)], 2).unwrap();
        assert!(check_torsion_free(&l, &nabla).pass);
        assert!(check_representation(&l, &nabla).pass);
        let ad = Connection::ad(&l);
        let t = torsion(&l, &ad, 0, 1);
        assert_eq!(t, vec![(1, s(1))]);
        assert!(!check_torsion_free(&l, &ad).pass);
        let b = BilinearForm::symmetric(Matrix::identity(2)).unwrap();
        let cert = check_metric(&l, &nabla, &b);
        assert!(!cert.pass);
        assert!(!cert.subcheck("metric_compatible").unwrap().pass);
        assert!(cert.subcheck("torsion_free").unwrap().pass);
    }

    #[test]
    fn perturbed_ad_is_not_a_representation() {
        let l = aff1();
        let mut vals: Vec<Matrix<Scalar>> = (0..2).map(|i| l.ad(i)).collect();
        vals[0].set(0, 0, s(1));
        let rho = Connection::new(vals, 2).unwrap();
        let cert = check_representation(&l, &rho);
        assert!(!cert.pass);
        assert_eq!(cert.witnesses[0].indices, vec![0, 1]);
    }

    #[test]
    fn non_square_root_is_a_precondition_failure() {
        let l = aff1();
        let cert = check_integrable_endo(&l, &Matrix::identity(2));
        assert!(!cert.pass);
        assert_eq!(cert.precondition.as_deref(), Some("J^2 != -id"));
    }

    #[test]
    fn symplectic_on_abelian_and_degenerate_kernel() {
        let l = LieAlgebra::<Scalar>::abelian("ab2", labels(&["a", "b"])).unwrap();
        let w = BilinearForm::skew(
            Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(-1), s(0)]]).unwrap(),
        )
        .unwrap();
        assert!(check_symplectic(&l, &w).pass);
        let zero = BilinearForm::skew(Matrix::zeros(2, 2)).unwrap();
        let cert = check_symplectic(&l, &zero);
        assert!(!cert.pass);
        assert!(cert.subcheck("closed").unwrap().pass);
        assert_eq!(
            cert.subcheck("nondegenerate").unwrap().witnesses[0].defect,
            vec!["1", "0"]
        );
    }

    #[test]
    fn form_kind_is_enforced() {
        let m = Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(1), s(0)]]).unwrap();
        assert!(BilinearForm::skew(m.clone()).is_err());
        assert!(BilinearForm::symmetric(m).is_ok());
        let half = Matrix::from_rows(vec![vec![q(1, 2), s(0)], vec![s(0), s(1)]]).unwrap();
        assert!(BilinearForm::symmetric(half).is_ok());
    }

    #[test]
    fn identity_product_structure_is_degenerate() {
        let l = aff1();
        let cert = check_product_structure(&l, &Matrix::identity(2));
        assert!(cert.pass);
        assert_eq!(cert.details["degenerate"], true);
        assert_eq!(cert.details["plus_dim"], 2);
        let bad = check_product_structure(&l, &Matrix::zeros(2, 2));
        assert!(bad.precondition.is_some());
    }
}
