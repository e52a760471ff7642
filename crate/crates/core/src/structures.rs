//! Assemblies of complex, hypercomplex, Clifford and symplectic structures on
//! semidirect and tangent algebras, each with a certificate.

use std::time::Instant;

use thiserror::Error;

use crate::catalog::Decomposition;
use crate::constructions::{canonical_k, semidirect, tangent, tangent_labels, ConstructionError};
use crate::lie::{
    check_closed, check_integrable, check_nondegenerate, check_parallel_endo, check_parallel_form,
    check_representation, check_subalgebra, check_symplectic, check_torsion_free, is_abelian_span,
    is_ideal, AlmostComplex, BilinearForm, Certificate, Connection, LieAlgebra, LieError,
    LinearMap, Witness,
};
use crate::linalg::{invert, sparse, LinalgError, Matrix, SpanSolver, SparseVec};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone)]
pub enum StructureError {
    #[error("precondition `{}` failed on {}", .0.check, .0.target)]
    Precondition(Box<Certificate>),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn require(cert: Certificate) -> Result<Certificate, StructureError> {
    if cert.pass {
        Ok(cert)
    } else {
        Err(StructureError::Precondition(Box::new(cert)))
    }
}

fn matrix_failure(indices: Vec<usize>, m: &Matrix<Scalar>) -> Option<Witness> {
    (!m.is_zero()).then(|| Witness::new(indices, m.entries()))
}

/// `J_±(x, v) = (Jx, ±Iv)`.
pub fn jplus(j: &AlmostComplex, i: &AlmostComplex, plus: bool) -> AlmostComplex {
    if plus {
        AlmostComplex::block(j, i)
    } else {
        AlmostComplex::block(j, &i.neg())
    }
}

/// `J` on `g*` given by `(Jα)(x) = -α(Jx)`, i.e. the matrix `-J^T`.
pub fn dual_structure(j: &AlmostComplex) -> AlmostComplex {
    AlmostComplex::new(j.matrix().transpose().neg()).expect("(-J^T)^2 = (J^2)^T = -id")
}

/// Checks the hypotheses under which `J_+` on `g ⊕_ρ V` is integrable:
/// `ρ(x) I = I ρ(x)` on `g_0` and `ρ(Jx) I = ρ(x)` on `g_1`.
///
/// Also records the identity `[I, ρ(x)] = [I, ρ(Jx)] I` on both parts and
/// whether `g_1 = 0`, in which case `J_-` is integrable as well.
pub fn check_teo1(
    g: &LieAlgebra,
    rho: &Connection,
    j: &AlmostComplex,
    i: &AlmostComplex,
    split: &Decomposition,
) -> Certificate {
    let start = Instant::now();
    let n = g.dim();
    let target = g.name();
    if j.dim() != n || rho.algebra_dim() != n || i.dim() != rho.module_dim() {
        return Certificate::precondition_failure(
            "teo1",
            target,
            "dimension mismatch",
            None,
            start,
        );
    }
    let stable = split.check_stable(target, n, j);
    if !stable.pass {
        let mut cert =
            Certificate::precondition_failure("teo1", target, "split is not J-stable", None, start);
        cert.subchecks.push(stable);
        return cert;
    }
    let im = i.matrix();
    let t0 = Instant::now();
    let cond_i: Vec<Witness> = split
        .part0
        .iter()
        .enumerate()
        .filter_map(|(k, x)| {
            let r = rho.along(x);
            matrix_failure(vec![k], &(&(&r * im) - &(im * &r)))
        })
        .collect();
    let cond_i = Certificate::from_failures("condition_i", target, cond_i, t0);
    let t1 = Instant::now();
    let mut cond_ii = Vec::new();
    for (k, x) in split.part1.iter().enumerate() {
        let d = &(&rho.along(&j.apply(x)) * im) - &rho.along(x);
        for v in 0..d.cols() {
            let col = d.sparse_column(v);
            if !col.is_empty() {
                cond_ii.push(Witness::new(vec![k, v], &sparse::to_dense(&col, d.rows())));
            }
        }
    }
    let cond_ii = Certificate::from_failures("condition_ii", target, cond_ii, t1);
    let identity_holds = split.part0.iter().chain(&split.part1).all(|x| {
        let r = rho.along(x);
        let rj = rho.along(&j.apply(x));
        let lhs = &(im * &r) - &(&r * im);
        let rhs = &(&(im * &rj) - &(&rj * im)) * im;
        lhs == rhs
    });
    let subs = vec![
        stable,
        check_representation(g, rho),
        check_integrable(g, j),
        cond_i,
        cond_ii,
    ];
    let g1_zero = split.part1.is_empty();
    let mut cert = Certificate::composite("teo1", target, subs, start);
    cert.set_detail("proof_identity", identity_holds);
    cert.set_detail("g1_zero", g1_zero);
    cert.set_detail("j_minus_licensed", g1_zero && cert.pass);
    cert
}

/// The canonical `K(x, y) = (y, -x)` on a tangent algebra.
pub fn canonical_k_for(t: &LieAlgebra) -> Result<AlmostComplex, StructureError> {
    if t.dim() % 2 != 0 {
        return Err(StructureError::Dimension {
            expected: t.dim() + 1,
            found: t.dim(),
        });
    }
    Ok(canonical_k(t.dim() / 2))
}

/// Integrability of `K` on `T_∇ g` against torsion-freeness of `∇`, computed
/// independently; passes iff the two verdicts agree.
pub fn teo2_verify(g: &LieAlgebra, nabla: &Connection) -> Certificate {
    let start = Instant::now();
    let flat = check_representation(g, nabla).with_check("flat");
    if !flat.pass {
        let mut cert = Certificate::precondition_failure(
            "teo2",
            g.name(),
            "connection is not flat",
            None,
            start,
        );
        cert.subchecks.push(flat);
        return cert;
    }
    let t = match tangent(g, nabla) {
        Ok(t) => t,
        Err(e) => {
            return Certificate::precondition_failure("teo2", g.name(), e.to_string(), None, start)
        }
    };
    let k = canonical_k(g.dim());
    let integ = check_integrable(&t, &k).with_check("k_integrable");
    let tf = check_torsion_free(g, nabla);
    let agree = integ.pass == tf.pass;
    let failures = if agree {
        Vec::new()
    } else {
        vec![Witness::message(
            Vec::new(),
            "integrability of K and torsion-freeness disagree",
        )]
    };
    let mut cert = Certificate::from_failures("teo2", g.name(), failures, start)
        .detail("k_integrable", integ.pass)
        .detail("torsion_free", tf.pass);
    cert.subchecks = vec![flat, integ, tf];
    cert
}

/// Output of [`reconstruct_from_cps`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub g: Option<LieAlgebra>,
    pub nabla: Option<Connection>,
    pub certificate: Certificate,
}

/// The subalgebra on the basis vectors `part`, when closed.
fn sub_on_indices(u: &LieAlgebra, part: &[usize]) -> Option<LieAlgebra> {
    let pos = |k: usize| part.iter().position(|&p| p == k);
    let mut brackets = Vec::new();
    for (a, &i) in part.iter().enumerate() {
        for (b, &j) in part.iter().enumerate().skip(a + 1) {
            let mut v = Vec::new();
            for (k, c) in u.bracket_basis(i, j) {
                v.push((pos(*k)?, c.clone()));
            }
            if !v.is_empty() {
                brackets.push(((a, b), sparse::collect(v)));
            }
        }
    }
    let labels = part.iter().map(|&i| u.label(i).to_string()).collect();
    LieAlgebra::new_deferred(format!("{}|g", u.name()), labels, brackets).ok()
}

/// Recovers `∇_x = -K ∘ ad(x) ∘ K` on the subalgebra `g` spanned by `part`,
/// and certifies it flat, torsion-free, with `Kg` an abelian ideal and
/// `u ≅ T_∇ g` in the frame `(b_i, -K b_i)`.
pub fn reconstruct_from_cps(u: &LieAlgebra, k: &AlmostComplex, part: &[usize]) -> Reconstruction {
    let start = Instant::now();
    let n = u.dim();
    let target = u.name().to_string();
    let fail = |subs: Vec<Certificate>| Reconstruction {
        g: None,
        nabla: None,
        certificate: Certificate::composite("reconstruct", target.clone(), subs, start),
    };
    if k.dim() != n || 2 * part.len() != n || part.iter().any(|&i| i >= n) {
        return Reconstruction {
            g: None,
            nabla: None,
            certificate: Certificate::precondition_failure(
                "reconstruct",
                &target,
                "dimension mismatch",
                None,
                start,
            ),
        };
    }
    let g_basis: Vec<SparseVec<Scalar>> = part.iter().map(|&i| sparse::unit(i)).collect();
    let kg: Vec<SparseVec<Scalar>> = part.iter().map(|&i| k.column(i).clone()).collect();
    let sub = check_subalgebra("g_subalgebra", u, &g_basis);
    let t = Instant::now();
    let ideal = {
        let solver = SpanSolver::from_sparse(n, &kg);
        let mut failures = Vec::new();
        for x in 0..n {
            for (a, v) in kg.iter().enumerate() {
                let r = solver.residual_sparse(&u.bracket_sparse(&sparse::unit(x), v));
                if !r.is_empty() {
                    failures.push(Witness::new(vec![x, a], &sparse::to_dense(&r, n)));
                }
            }
        }
        Certificate::from_failures("kg_ideal", &target, failures, t)
    };
    let integ = check_integrable(u, k).with_check("k_integrable");
    let mut spans = SpanSolver::from_sparse(n, &g_basis);
    let complementary = kg.iter().all(|v| spans.insert_sparse(v.clone()));
    if !(sub.pass && ideal.pass && integ.pass && complementary) {
        let mut subs = vec![sub, ideal, integ];
        if !complementary {
            subs.push(Certificate::from_failures(
                "complementary",
                &target,
                vec![Witness::message(Vec::new(), "g and Kg do not span")],
                Instant::now(),
            ));
        }
        return fail(subs);
    }
    let g = sub_on_indices(u, part).expect("closure certified");
    let m = part.len();
    let pos = |kk: usize| part.iter().position(|&p| p == kk);
    let mut values = Vec::with_capacity(m);
    let mut outside = Vec::new();
    for (a, &i) in part.iter().enumerate() {
        let mut cols = Vec::with_capacity(m);
        for (b, &j) in part.iter().enumerate() {
            let w = sparse::neg(&k.apply(&u.bracket_sparse(&sparse::unit(i), k.column(j))));
            let mut col = Vec::new();
            for (kk, c) in w {
                match pos(kk) {
                    Some(p) => col.push((p, c)),
                    None => outside.push(Witness::message(
                        vec![a, b],
                        format!("component along {}", u.label(kk)),
                    )),
                }
            }
            cols.push(col);
        }
        values.push(Matrix::from_sparse_columns(m, &cols));
    }
    let nabla = Connection::new(values, m).expect("square");
    let range = Certificate::from_failures("nabla_in_g", &target, outside, Instant::now());
    let flat = check_representation(&g, &nabla).with_check("flat");
    let tf = check_torsion_free(&g, &nabla);
    let t = Instant::now();
    let abelian = Certificate::from_failures(
        "kg_abelian",
        &target,
        if is_abelian_span(u, &kg) {
            Vec::new()
        } else {
            vec![Witness::message(Vec::new(), "Kg is not abelian")]
        },
        t,
    );
    let t = Instant::now();
    let iso = {
        let mut frame = g_basis.clone();
        frame.extend(kg.iter().map(|v| sparse::neg(v)));
        let p = Matrix::from_sparse_columns(n, &frame);
        let mut labels = g.labels().to_vec();
        labels.extend(tangent_labels(&g));
        let failures = match (u.change_basis(&p, labels), tangent(&g, &nabla)) {
            (Ok(adapted), Ok(tg)) => {
                let mut out = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        let d = sparse::sub(adapted.bracket_basis(a, b), tg.bracket_basis(a, b));
                        if !d.is_empty() {
                            out.push(Witness::new(vec![a, b], &sparse::to_dense(&d, n)));
                        }
                    }
                }
                out
            }
            (Err(e), _) => vec![Witness::message(Vec::new(), e.to_string())],
            (_, Err(e)) => vec![Witness::message(Vec::new(), e.to_string())],
        };
        Certificate::from_failures("isomorphic_to_tangent", &target, failures, t)
    };
    let subs = vec![sub, ideal, integ, range, flat, tf, abelian, iso];
    let certificate = Certificate::composite("reconstruct", target.clone(), subs, start);
    Reconstruction {
        g: Some(g),
        nabla: Some(nabla),
        certificate,
    }
}

fn require_affine(g: &LieAlgebra, nabla: &Connection) -> Result<(), StructureError> {
    if nabla.algebra_dim() != g.dim() || nabla.module_dim() != g.dim() {
        return Err(StructureError::Dimension {
            expected: g.dim(),
            found: nabla.module_dim(),
        });
    }
    require(check_representation(g, nabla).with_check("flat"))?;
    require(check_torsion_free(g, nabla))?;
    Ok(())
}

/// `∇¹_{(x,y)}(z,w) = (∇_x z, ∇_x w)` on `T_∇ g`.
pub fn nabla1(g: &LieAlgebra, nabla: &Connection) -> Result<Connection, StructureError> {
    require_affine(g, nabla)?;
    Ok(nabla1_unchecked(nabla))
}

fn nabla1_unchecked(nabla: &Connection) -> Connection {
    let n = nabla.algebra_dim();
    let zero = Matrix::zeros(2 * n, 2 * n);
    let values = (0..2 * n)
        .map(|i| {
            if i < n {
                Matrix::block_diag(&[nabla.at(i), nabla.at(i)])
            } else {
                zero.clone()
            }
        })
        .collect();
    Connection::new(values, 2 * n).expect("square blocks")
}

/// Anticommuting complex structures on one space.
#[derive(Clone, Debug)]
pub struct CliffordFamily {
    pub maps: Vec<AlmostComplex>,
    pub generated_rank: usize,
}

impl CliffordFamily {
    pub fn new(maps: Vec<AlmostComplex>) -> Self {
        let generated_rank = generated_rank(&maps);
        CliffordFamily {
            maps,
            generated_rank,
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `J_a J_b + J_b J_a = -2 δ_ab id` on all pairs.
    pub fn check_anticommute(&self, target: &str) -> Certificate {
        let start = Instant::now();
        let mut failures = Vec::new();
        for (a, ja) in self.maps.iter().enumerate() {
            for (b, jb) in self.maps.iter().enumerate().skip(a + 1) {
                let s = &(ja.matrix() * jb.matrix()) + &(jb.matrix() * ja.matrix());
                if let Some(w) = matrix_failure(vec![a, b], &s) {
                    failures.push(w);
                }
            }
        }
        Certificate::from_failures("anticommute", target, failures, start)
    }

    /// Anticommutation, integrability and `∇`-parallelism of every member, and
    /// `generated_rank = 2^m`.
    pub fn certify(&self, alg: &LieAlgebra, nabla: &Connection) -> Certificate {
        let start = Instant::now();
        let mut subs = vec![self.check_anticommute(alg.name())];
        for (k, j) in self.maps.iter().enumerate() {
            subs.push(check_integrable(alg, j).with_check(format!("integrable_{k}")));
        }
        for (k, j) in self.maps.iter().enumerate() {
            subs.push(
                check_parallel_endo(alg.name(), nabla, j.matrix())
                    .with_check(format!("parallel_{k}")),
            );
        }
        let expected = 1usize << self.maps.len();
        let t = Instant::now();
        let rank_failures = if self.generated_rank == expected {
            Vec::new()
        } else {
            vec![Witness::message(
                Vec::new(),
                format!("generated rank {} != {expected}", self.generated_rank),
            )]
        };
        subs.push(
            Certificate::from_failures("generated_rank", alg.name(), rank_failures, t)
                .detail("rank", self.generated_rank),
        );
        Certificate::composite("clifford", alg.name(), subs, start)
            .detail("generated_rank", self.generated_rank)
    }
}

/// Dimension of the associative algebra generated by `id` and the maps,
/// computed by closing the span under left multiplication.
pub fn generated_rank(maps: &[AlmostComplex]) -> usize {
    let Some(first) = maps.first() else {
        return 1;
    };
    let n = first.dim();
    let mut solver = SpanSolver::new(n * n);
    let mut basis = vec![Matrix::<Scalar>::identity(n)];
    solver.insert_sparse(sparse::from_dense(&basis[0].flatten()));
    let mut k = 0;
    while k < basis.len() {
        for j in maps {
            let p = j.matrix() * &basis[k];
            if solver.insert_sparse(sparse::from_dense(&p.flatten())) {
                basis.push(p);
            }
        }
        k += 1;
    }
    solver.rank()
}

/// One level of the tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub algebra: LieAlgebra,
    pub nabla: Connection,
}

#[derive(Clone, Debug)]
pub struct Tower {
    /// Level 0 is the base `(g, ∇)`.
    pub levels: Vec<TowerLevel>,
    pub family: CliffordFamily,
}

impl Tower {
    pub fn top(&self) -> &TowerLevel {
        self.levels.last().expect("at least the base level")
    }

    pub fn certify(&self) -> Certificate {
        let top = self.top();
        self.family
            .certify(&top.algebra, &top.nabla)
            .with_check("tower")
    }
}

/// Iterates `T_∇` `m` times. Earlier structures extend to the next level as
/// `(J, -J)` and each level contributes its canonical `K`.
pub fn tower(g: &LieAlgebra, nabla: &Connection, m: usize) -> Result<Tower, StructureError> {
    require_affine(g, nabla)?;
    let mut levels = vec![TowerLevel {
        algebra: g.clone(),
        nabla: nabla.clone(),
    }];
    let mut maps: Vec<AlmostComplex> = Vec::new();
    for level in 1..=m {
        let cur = levels.last().expect("non-empty");
        let t = if level == 1 {
            tangent(&cur.algebra, &cur.nabla)?
        } else {
            let labels = cur
                .algebra
                .labels()
                .iter()
                .map(|l| format!("{l}_a{level}"))
                .collect();
            semidirect(
                format!("T^{level}({})", g.name()),
                &cur.algebra,
                &cur.nabla,
                labels,
            )?
        };
        let next_nabla = nabla1_unchecked(&cur.nabla);
        maps = maps
            .iter()
            .map(|j| AlmostComplex::block(j, &j.neg()))
            .collect();
        maps.push(canonical_k(cur.algebra.dim()));
        levels.push(TowerLevel {
            algebra: t,
            nabla: next_nabla,
        });
    }
    Ok(Tower {
        levels,
        family: CliffordFamily::new(maps),
    })
}

/// The pair `{J_-, K}` on `T_∇ g` from a `∇`-parallel complex structure `J`,
/// with the checks that identify `∇¹` as the Obata connection.
pub fn hypercomplex_from(
    g: &LieAlgebra,
    nabla: &Connection,
    j: &AlmostComplex,
) -> Result<(CliffordFamily, Certificate), StructureError> {
    let start = Instant::now();
    require_affine(g, nabla)?;
    if j.dim() != g.dim() {
        return Err(StructureError::Dimension {
            expected: g.dim(),
            found: j.dim(),
        });
    }
    require(check_integrable(g, j).with_check("j_integrable"))?;
    require(check_parallel_endo(g.name(), nabla, j.matrix()).with_check("j_parallel"))?;
    let t = tangent(g, nabla)?;
    let n1 = nabla1_unchecked(nabla);
    let jm = AlmostComplex::block(j, &j.neg());
    let k = canonical_k(g.dim());
    let family = CliffordFamily::new(vec![jm.clone(), k.clone()]);
    let obata = Certificate::composite(
        "obata",
        t.name(),
        vec![
            check_torsion_free(&t, &n1),
            check_representation(&t, &n1).with_check("flat"),
        ],
        Instant::now(),
    );
    let subs = vec![
        family.check_anticommute(t.name()),
        check_integrable(&t, &jm).with_check("integrable_j_minus"),
        check_integrable(&t, &k).with_check("integrable_k"),
        check_parallel_endo(t.name(), &n1, jm.matrix()).with_check("parallel_j_minus"),
        check_parallel_endo(t.name(), &n1, k.matrix()).with_check("parallel_k"),
        obata,
    ];
    let cert = Certificate::composite("hypercomplex", t.name(), subs, start);
    Ok((family, cert))
}

/// `ψ ∘ ∇_{b_i} = ∇*_{b_i} ∘ ψ` with `∇* = -∇^T`.
pub fn check_self_dual(target: &str, nabla: &Connection, psi: &LinearMap) -> Certificate {
    let start = Instant::now();
    let p = &psi.matrix;
    if let Err(LinalgError::Singular { kernel }) = invert(p) {
        return Certificate::precondition_failure(
            "self_dual",
            target,
            "psi is not invertible",
            Some(Witness {
                indices: Vec::new(),
                defect: kernel,
            }),
            start,
        );
    }
    if !p.is_square() || p.rows() != nabla.module_dim() {
        return Certificate::precondition_failure(
            "self_dual",
            target,
            "dimension mismatch",
            None,
            start,
        );
    }
    let failures = (0..nabla.algebra_dim())
        .filter_map(|i| {
            let a = nabla.at(i);
            matrix_failure(vec![i], &(&(p * a) + &(&a.transpose() * p)))
        })
        .collect();
    Certificate::from_failures("self_dual", target, failures, start)
}

/// `ω((x,y),(x',y')) = ψ(y)(x') - ψ(y')(x)`, i.e. `[[0, -Ψ], [Ψ^T, 0]]`.
pub fn omega_from_psi(psi: &LinearMap) -> Result<BilinearForm, StructureError> {
    let p = &psi.matrix;
    if !p.is_square() {
        return Err(StructureError::Dimension {
            expected: p.rows(),
            found: p.cols(),
        });
    }
    if let Err(LinalgError::Singular { .. }) = invert(p) {
        return Err(StructureError::Invalid("psi is not invertible".into()));
    }
    let n = p.rows();
    let mut w = Matrix::zeros(2 * n, 2 * n);
    w.place(0, n, &p.neg());
    w.place(n, 0, &p.transpose());
    Ok(BilinearForm::skew(w)?)
}

/// Self-duality and torsion-freeness, next to symplecticity and
/// `∇¹`-parallelism of `ω` on `T_∇ g`.
pub fn psi_symplectic_verify(g: &LieAlgebra, nabla: &Connection, psi: &LinearMap) -> Certificate {
    let start = Instant::now();
    let omega = match omega_from_psi(psi) {
        Ok(o) => o,
        Err(e) => {
            return Certificate::precondition_failure(
                "psi_symplectic",
                g.name(),
                e.to_string(),
                None,
                start,
            )
        }
    };
    let t = match tangent(g, nabla) {
        Ok(t) => t,
        Err(e) => {
            return Certificate::precondition_failure(
                "psi_symplectic",
                g.name(),
                e.to_string(),
                None,
                start,
            )
        }
    };
    let n1 = nabla1_unchecked(nabla);
    let subs = vec![
        check_self_dual(g.name(), nabla, psi),
        check_torsion_free(g, nabla),
        check_symplectic(&t, &omega),
        check_parallel_form(t.name(), &n1, &omega),
    ];
    Certificate::composite("psi_symplectic", g.name(), subs, start)
}

/// The torsion-free `B`-compatible connection from the Koszul formula
/// `2B(∇_x y, z) = B([x,y],z) - B([y,z],x) + B([z,x],y)`.
pub fn levi_civita(g: &LieAlgebra, b: &BilinearForm) -> Result<Connection, StructureError> {
    let n = g.dim();
    if b.dim() != n {
        return Err(StructureError::Dimension {
            expected: n,
            found: b.dim(),
        });
    }
    if b.kind() != crate::lie::FormKind::Symmetric {
        return Err(StructureError::Invalid("form is not symmetric".into()));
    }
    let binv =
        invert(b.matrix()).map_err(|_| StructureError::Invalid("form is degenerate".into()))?;
    let half = Scalar::from(1) / Scalar::from(2);
    let bb = |v: &SparseVec<Scalar>, k: usize| b.eval(v, &sparse::unit(k));
    let mut values = Vec::with_capacity(n);
    for x in 0..n {
        let mut cols = Vec::with_capacity(n);
        for y in 0..n {
            let rhs: Vec<Scalar> = (0..n)
                .map(|z| {
                    let t1 = bb(g.bracket_basis(x, y), z);
                    let t2 = bb(g.bracket_basis(y, z), x);
                    let t3 = bb(g.bracket_basis(z, x), y);
                    &(&(&t1 - &t2) + &t3) * &half
                })
                .collect();
            cols.push(binv.apply(&rhs).expect("dimension n"));
        }
        values.push(Matrix::from_columns(n, &cols).expect("n columns of length n"));
    }
    Ok(Connection::new(values, n)?)
}

/// Pseudo-Kähler data on `T_∇ g` for a flat metric `B`: `K`, `ω` from the
/// musical map `x ↦ B(x, ·)`, and the metric `G` with `G(K·,·) = ω`.
#[derive(Clone, Debug)]
pub struct PseudoKahler {
    pub tangent: LieAlgebra,
    pub nabla: Connection,
    pub nabla1: Connection,
    pub k: AlmostComplex,
    pub omega: BilinearForm,
    pub metric: BilinearForm,
}

pub fn pseudo_kahler(g: &LieAlgebra, b: &BilinearForm) -> Result<PseudoKahler, StructureError> {
    let nabla = levi_civita(g, b)?;
    require(crate::lie::check_metric(g, &nabla, b))?;
    let t = tangent(g, &nabla)?;
    let psi = LinearMap::endo(b.matrix().clone(), g.name());
    let omega = omega_from_psi(&psi)?;
    let k = canonical_k(g.dim());
    let metric = BilinearForm::symmetric(Matrix::block_diag(&[b.matrix(), b.matrix()]))?;
    Ok(PseudoKahler {
        tangent: t,
        nabla1: nabla1_unchecked(&nabla),
        nabla,
        k,
        omega,
        metric,
    })
}

/// Passes iff `G(K·,·) = ω`, `G` is `K`-invariant, `ω` is symplectic, and
/// `ω`, `K` are `∇¹`-parallel. A non-flat Levi-Civita connection is a
/// precondition failure.
pub fn pseudo_kahler_verify(g: &LieAlgebra, b: &BilinearForm) -> Certificate {
    let start = Instant::now();
    let pk = match pseudo_kahler(g, b) {
        Ok(pk) => pk,
        Err(StructureError::Precondition(c)) => {
            let mut cert = Certificate::precondition_failure(
                "pseudo_kahler",
                g.name(),
                "Levi-Civita connection is not a flat metric connection",
                None,
                start,
            );
            cert.subchecks.push(*c);
            return cert;
        }
        Err(e) => {
            return Certificate::precondition_failure(
                "pseudo_kahler",
                g.name(),
                e.to_string(),
                None,
                start,
            )
        }
    };
    let target = pk.tangent.name().to_string();
    let km = pk.k.matrix();
    let gm = pk.metric.matrix();
    let t = Instant::now();
    let gk = &km.transpose() * gm;
    let omega_eq = Certificate::from_failures(
        "omega_equals_gk",
        &target,
        matrix_failure(Vec::new(), &(&gk - pk.omega.matrix()))
            .into_iter()
            .collect(),
        t,
    );
    let t = Instant::now();
    let compat = Certificate::from_failures(
        "k_orthogonal",
        &target,
        matrix_failure(Vec::new(), &(&(&(&km.transpose() * gm) * km) - gm))
            .into_iter()
            .collect(),
        t,
    );
    let psi = LinearMap::endo(b.matrix().clone(), g.name());
    let subs = vec![
        check_self_dual(g.name(), &pk.nabla, &psi),
        omega_eq,
        compat,
        check_closed(&pk.tangent, &pk.omega),
        check_nondegenerate(&target, &pk.omega),
        check_parallel_form(&target, &pk.nabla1, &pk.omega).with_check("parallel_omega"),
        check_parallel_endo(&target, &pk.nabla1, km).with_check("parallel_k"),
        check_parallel_form(&target, &pk.nabla1, &pk.metric).with_check("parallel_metric"),
    ];
    Certificate::composite("pseudo_kahler", target, subs, start)
}

/// `ι` a Lie homomorphism with `ι J_dom = J_cod ι`.
pub fn check_holomorphic(
    dom: &LieAlgebra,
    cod: &LieAlgebra,
    iota: &LinearMap,
    j_dom: &AlmostComplex,
    j_cod: &AlmostComplex,
) -> Certificate {
    let start = Instant::now();
    let target = format!("{} -> {}", dom.name(), cod.name());
    let p = &iota.matrix;
    if p.rows() != cod.dim()
        || p.cols() != dom.dim()
        || j_dom.dim() != dom.dim()
        || j_cod.dim() != cod.dim()
    {
        return Certificate::precondition_failure(
            "holomorphic",
            &target,
            "dimension mismatch",
            None,
            start,
        );
    }
    let cols = p.sparse_columns();
    if SpanSolver::from_sparse(cod.dim(), &cols).rank() != dom.dim() {
        return Certificate::precondition_failure(
            "holomorphic",
            &target,
            "map is not injective",
            None,
            start,
        );
    }
    let t = Instant::now();
    let mut hom = Vec::new();
    for i in 0..dom.dim() {
        for j in i + 1..dom.dim() {
            let d = sparse::sub(
                &p.apply_sparse(dom.bracket_basis(i, j)),
                &cod.bracket_sparse(&cols[i], &cols[j]),
            );
            if !d.is_empty() {
                hom.push(Witness::new(vec![i, j], &sparse::to_dense(&d, cod.dim())));
            }
        }
    }
    let hom = Certificate::from_failures("homomorphism", &target, hom, t);
    let t = Instant::now();
    let inter: Vec<Witness> = (0..dom.dim())
        .filter_map(|i| {
            let d = sparse::sub(&p.apply_sparse(j_dom.column(i)), &j_cod.apply(&cols[i]));
            (!d.is_empty()).then(|| Witness::new(vec![i], &sparse::to_dense(&d, cod.dim())))
        })
        .collect();
    let inter = Certificate::from_failures("intertwines_j", &target, inter, t);
    Certificate::composite("holomorphic", target, vec![hom, inter], start)
}

/// Candidate metrics at the second tower level for a flat metric `B`.
///
/// For each candidate `G²` and each unit `J ∈ {J_1, J_2, J_1 J_2}` of the
/// `Cl_2` family on `T²`, checks `J`-invariance of `G²`, closedness of
/// `G²(J·,·)` and `∇²`-parallelism. No general formula is assumed.
pub fn metric_lift_candidates(
    g: &LieAlgebra,
    b: &BilinearForm,
) -> Result<Vec<Certificate>, StructureError> {
    let start = Instant::now();
    let nabla = levi_civita(g, b)?;
    require(crate::lie::check_metric(g, &nabla, b))?;
    let tw = tower(g, &nabla, 2)?;
    let top = tw.top();
    let (j1, j2) = (&tw.family.maps[0], &tw.family.maps[1]);
    let j3 = AlmostComplex::new(j1.matrix() * j2.matrix())?;
    let g1 = Matrix::block_diag(&[b.matrix(), b.matrix()]);
    let neg = g1.neg();
    let candidates = [
        ("diag", Matrix::block_diag(&[&g1, &g1])),
        ("alternating", Matrix::block_diag(&[&g1, &neg])),
    ];
    let mut out = Vec::new();
    for (name, gm) in candidates {
        let metric = BilinearForm::symmetric(gm.clone())?;
        let mut subs = Vec::new();
        for (label, j) in [("J1", j1), ("J2", j2), ("J1J2", &j3)] {
            let jm = j.matrix();
            let t = Instant::now();
            let inv = Certificate::from_failures(
                "j_orthogonal",
                top.algebra.name(),
                matrix_failure(Vec::new(), &(&(&(&jm.transpose() * &gm) * jm) - &gm))
                    .into_iter()
                    .collect(),
                t,
            );
            let w = &jm.transpose() * &gm;
            let omega = BilinearForm::skew(w).ok();
            let mut inner = vec![inv];
            match omega {
                Some(o) => {
                    inner.push(check_closed(&top.algebra, &o));
                    inner.push(check_parallel_form(top.algebra.name(), &top.nabla, &o));
                }
                None => inner.push(Certificate::from_failures(
                    "omega_skew",
                    top.algebra.name(),
                    vec![Witness::message(Vec::new(), "G(J.,.) is not skew")],
                    Instant::now(),
                )),
            }
            inner.push(
                check_parallel_form(top.algebra.name(), &top.nabla, &metric)
                    .with_check("parallel_metric"),
            );
            subs.push(Certificate::composite(
                label,
                top.algebra.name(),
                inner,
                Instant::now(),
            ));
        }
        out.push(
            Certificate::composite("metric_lift", top.algebra.name(), subs, start)
                .detail("candidate", name),
        );
    }
    Ok(out)
}

/// `K(g)` spans an ideal; exposed for diagnostics.
pub fn k_image_is_ideal(u: &LieAlgebra, k: &AlmostComplex, part: &[usize]) -> bool {
    let kg: Vec<SparseVec<Scalar>> = part.iter().map(|&i| k.column(i).clone()).collect();
    is_ideal(u, &kg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::constructions::{aff_algebra, AssociativeAlgebra};

    fn q(x: i64) -> Scalar {
        Scalar::from(x)
    }

    #[test]
    fn teo2_on_aff_r() {
        let e = catalog::aff_r();
        let good = teo2_verify(&e.algebra, &e.connections["lsa"]);
        assert!(good.pass);
        assert_eq!(good.details["k_integrable"], true);
        let bad = teo2_verify(&e.algebra, &e.connections["ad"]);
        assert!(bad.pass);
        assert_eq!(bad.details["k_integrable"], false);
        assert_eq!(bad.details["torsion_free"], false);
    }

    #[test]
    fn teo1_euclid4_and_swap() {
        let e = catalog::euclid(4).unwrap();
        let d = e.teo1.as_ref().unwrap();
        let c = check_teo1(&d.g, &d.rho, &d.j, &d.i, &d.split);
        assert!(c.pass, "{c:?}");
        assert_eq!(c.details["proof_identity"], true);
        let swapped = check_teo1(&d.g, &d.rho, &d.j, &d.i, &d.split.swapped());
        assert!(!swapped.pass);
        assert!(swapped.precondition.is_none());
    }

    #[test]
    fn reconstruct_round_trip_aff_r() {
        let e = catalog::aff_r();
        let nabla = &e.connections["lsa"];
        let t = tangent(&e.algebra, nabla).unwrap();
        let k = canonical_k(2);
        let r = reconstruct_from_cps(&t, &k, &[0, 1]);
        assert!(r.certificate.pass, "{:?}", r.certificate);
        assert_eq!(r.nabla.as_ref().unwrap(), nabla);
    }

    #[test]
    fn reconstruct_aff_m2_is_left_mult() {
        let a = AssociativeAlgebra::real_matrices(2);
        let (u, k, _) = aff_algebra(&a).unwrap();
        let r = reconstruct_from_cps(&u, &k, &[0, 1, 2, 3]);
        assert!(r.certificate.pass, "{:?}", r.certificate);
        assert_eq!(r.nabla.unwrap(), a.left_connection());
    }

    #[test]
    fn reconstruct_rejects_non_ideal() {
        // in T_ad of aff(R) with K swapped to act on the wrong halves
        let e = catalog::aff_r();
        let t = tangent(&e.algebra, &e.connections["lsa"]).unwrap();
        let k = canonical_k(2);
        let r = reconstruct_from_cps(&t, &k, &[2, 3]);
        assert!(!r.certificate.pass);
        assert!(r.nabla.is_none());
    }

    #[test]
    fn generated_rank_of_k_alone() {
        assert_eq!(generated_rank(&[canonical_k(1)]), 2);
        assert_eq!(generated_rank(&[]), 1);
    }

    #[test]
    fn tower_on_abelian_plane() {
        let g = LieAlgebra::abelian("R2", crate::lie::labels(&["x", "y"])).unwrap();
        let tw = tower(&g, &Connection::zero(2, 2), 3).unwrap();
        assert_eq!(tw.top().algebra.dim(), 16);
        assert_eq!(tw.family.generated_rank, 8);
        assert!(tw.certify().pass);
    }

    #[test]
    fn hypercomplex_gl2() {
        let e = catalog::gl(2).unwrap();
        let (fam, cert) =
            hypercomplex_from(&e.algebra, &e.connections["left_mult"], e.j()).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert_eq!(fam.generated_rank, 4);
    }

    #[test]
    fn hypercomplex_rejects_non_parallel() {
        let e = catalog::gl(2).unwrap();
        let j =
            AlmostComplex::from_label_pairs(&e.algebra, &[("e11", "e21"), ("e12", "e22")]).unwrap();
        assert!(hypercomplex_from(&e.algebra, &e.connections["left_mult"], &j).is_err());
    }

    #[test]
    fn self_dual_cases() {
        let e = catalog::aff_r();
        let id = LinearMap::endo(Matrix::identity(2), "aff(R)");
        assert!(!check_self_dual("aff(R)", &e.connections["lsa"], &id).pass);
        let z = Connection::zero(2, 2);
        assert!(check_self_dual("R2", &z, &id).pass);
        let sing = LinearMap::endo(Matrix::zeros(2, 2), "R2");
        assert!(check_self_dual("R2", &z, &sing).has_precondition_failure());
    }

    #[test]
    fn omega_from_identity_is_standard() {
        let id = LinearMap::endo(Matrix::identity(3), "R3");
        let w = omega_from_psi(&id).unwrap();
        assert_eq!(w, crate::constructions::canonical_omega(3));
    }

    #[test]
    fn levi_civita_cases() {
        let ab = LieAlgebra::abelian("R2", crate::lie::labels(&["x", "y"])).unwrap();
        let b = BilinearForm::symmetric(
            Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]]).unwrap(),
        )
        .unwrap();
        assert_eq!(levi_civita(&ab, &b).unwrap(), Connection::zero(2, 2));
        let e2 = catalog::e2();
        let nabla = levi_civita(&e2.algebra, &e2.forms["B"]).unwrap();
        assert!(crate::lie::check_metric(&e2.algebra, &nabla, &e2.forms["B"]).pass);
        let so3 = catalog::so(3).unwrap();
        let b3 = BilinearForm::symmetric(Matrix::identity(3)).unwrap();
        let n3 = levi_civita(&so3.algebra, &b3).unwrap();
        assert!(check_torsion_free(&so3.algebra, &n3).pass);
        assert!(!check_representation(&so3.algebra, &n3).pass);
    }

    #[test]
    fn pseudo_kahler_cases() {
        let e2 = catalog::e2();
        let c = pseudo_kahler_verify(&e2.algebra, &e2.forms["B"]);
        assert!(c.pass, "{c:?}");
        let aff = catalog::aff_r();
        let b = BilinearForm::symmetric(Matrix::identity(2)).unwrap();
        assert!(pseudo_kahler_verify(&aff.algebra, &b).has_precondition_failure());
    }

    #[test]
    fn holomorphic_identity() {
        let e = catalog::euclid(3).unwrap();
        let id = LinearMap::endo(Matrix::identity(6), "e(3)");
        assert!(check_holomorphic(&e.algebra, &e.algebra, &id, e.j(), e.j()).pass);
    }
}
