//! Named algebras with their complex structures, decompositions and
//! holomorphic inclusions.
//!
//! Every bracket comes from a matrix realization; nothing is hand-entered.
//! Basis order: rotations `f_ij` by `(i, j)`, then boosts, then
//! translations, then `z`.

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::constructions::{
    aff_algebra, central_extension, from_matrix_basis, semidirect, AssociativeAlgebra,
    ConstructionError, MatrixRealization,
};
use crate::lie::{
    check_subalgebra, AlmostComplex, BilinearForm, Certificate, Connection, LieAlgebra, LieError,
    LinearMap, Witness,
};
use crate::linalg::{sparse, Matrix, SpanSolver, SparseVec};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("`{name}` expects {expected} parameter(s)")]
    Arity { name: String, expected: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A split `g = g_0 ⊕ g_1` given by spanning vectors of each part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub part0: Vec<SparseVec<Scalar>>,
    pub part1: Vec<SparseVec<Scalar>>,
}

impl Decomposition {
    pub fn swapped(&self) -> Self {
        Decomposition {
            part0: self.part1.clone(),
            part1: self.part0.clone(),
        }
    }

    /// Each part maps into itself under `J`, and together they are a direct
    /// sum spanning the whole space.
    pub fn check_stable(&self, target: &str, dim: usize, j: &AlmostComplex) -> Certificate {
        let start = Instant::now();
        let mut failures = Vec::new();
        for (p, part) in [&self.part0, &self.part1].into_iter().enumerate() {
            let solver = SpanSolver::from_sparse(dim, part);
            if solver.rank() != part.len() {
                failures.push(Witness::message(vec![p], "part vectors are dependent"));
            }
            for (k, v) in part.iter().enumerate() {
                let r = solver.residual_sparse(&j.apply(v));
                if !r.is_empty() {
                    failures.push(Witness::new(vec![p, k], &sparse::to_dense(&r, dim)));
                }
            }
        }
        let all: Vec<_> = self.part0.iter().chain(&self.part1).cloned().collect();
        let rank = SpanSolver::from_sparse(dim, &all).rank();
        if rank != dim || all.len() != dim {
            failures.push(Witness::message(
                Vec::new(),
                format!("parts span rank {rank} of {dim}"),
            ));
        }
        Certificate::from_failures("j_stable_split", target, failures, start)
    }
}

/// Input data for the compatibility conditions of `J_±` on `g ⊕_ρ V`.
#[derive(Clone, Debug)]
pub struct Teo1Data {
    pub g: LieAlgebra,
    pub rho: Connection,
    pub j: AlmostComplex,
    pub i: AlmostComplex,
    pub split: Decomposition,
    pub module_labels: Vec<String>,
}

impl Teo1Data {
    /// `g ⊕_ρ V`.
    pub fn semidirect(&self) -> Result<LieAlgebra, ConstructionError> {
        semidirect(
            format!("{}+V", self.g.name()),
            &self.g,
            &self.rho,
            self.module_labels.clone(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    pub realization: Option<MatrixRealization>,
    pub complex: BTreeMap<String, AlmostComplex>,
    pub connections: BTreeMap<String, Connection>,
    pub forms: BTreeMap<String, BilinearForm>,
    pub decompositions: BTreeMap<String, Decomposition>,
    /// Linear maps out of this entry, keyed by name.
    pub maps: BTreeMap<String, LinearMap>,
    pub teo1: Option<Teo1Data>,
    /// The algebra without the central `z`, when one was added.
    pub unextended: Option<LieAlgebra>,
}

impl CatalogEntry {
    fn new(algebra: LieAlgebra, realization: Option<MatrixRealization>) -> Self {
        CatalogEntry {
            name: algebra.name().to_string(),
            algebra,
            realization,
            complex: BTreeMap::new(),
            connections: BTreeMap::new(),
            forms: BTreeMap::new(),
            decompositions: BTreeMap::new(),
            maps: BTreeMap::new(),
            teo1: None,
            unextended: None,
        }
    }

    /// The entry's main complex structure `J`.
    pub fn j(&self) -> &AlmostComplex {
        &self.complex["J"]
    }

    /// The algebra without the central summand (or the algebra itself).
    pub fn projection(&self) -> &LieAlgebra {
        self.unextended.as_ref().unwrap_or(&self.algebra)
    }
}

fn s(x: i64) -> Scalar {
    Scalar::from(x)
}

fn unit_matrix(size: usize, i: usize, j: usize) -> Matrix<Scalar> {
    let mut m = Matrix::zeros(size, size);
    m.set(i - 1, j - 1, s(1));
    m
}

fn pair_label(prefix: char, i: usize, j: usize) -> String {
    if i >= 10 || j >= 10 {
        format!("{prefix}{i}_{j}")
    } else {
        format!("{prefix}{i}{j}")
    }
}

/// Label of `f_ij` inside `so(n)`: `h`/`h{i}` on the Cartan pairs `(2i-1, 2i)`.
pub fn rot_label(n: usize, i: usize, j: usize) -> String {
    if i % 2 == 1 && j == i + 1 {
        if n <= 3 {
            "h".to_string()
        } else {
            format!("h{}", i.div_ceil(2))
        }
    } else {
        pair_label('f', i, j)
    }
}

pub fn boost_label(i: usize, j: usize) -> String {
    pair_label('s', i, j)
}

/// Labeled matrix list assembled in the normative order.
struct Basis {
    size: usize,
    labels: Vec<String>,
    mats: Vec<Matrix<Scalar>>,
}

impl Basis {
    fn new(size: usize) -> Self {
        Basis {
            size,
            labels: Vec::new(),
            mats: Vec::new(),
        }
    }

    fn push(&mut self, label: String, m: Matrix<Scalar>) {
        self.labels.push(label);
        self.mats.push(m);
    }

    /// `f_ij = e_ij - e_ji` for `1 <= i < j <= n`.
    fn rotations(&mut self, n: usize) {
        for i in 1..=n {
            for j in i + 1..=n {
                let m = &unit_matrix(self.size, i, j) - &unit_matrix(self.size, j, i);
                self.push(rot_label(n, i, j), m);
            }
        }
    }

    /// `s_{i,p+1} = e_{i,p+1} + e_{p+1,i}`.
    fn boosts(&mut self, p: usize) {
        for i in 1..=p {
            let m = &unit_matrix(self.size, i, p + 1) + &unit_matrix(self.size, p + 1, i);
            self.push(boost_label(i, p + 1), m);
        }
    }

    /// `e_l = e_{l,col}` for `l` in `1..=count`.
    fn translations(&mut self, count: usize, col: usize) {
        for l in 1..=count {
            self.push(format!("e{l}"), unit_matrix(self.size, l, col));
        }
    }

    fn build(self, name: &str) -> (LieAlgebra, MatrixRealization) {
        from_matrix_basis(name, self.labels, self.mats).expect("catalog realizations are closed")
    }
}

fn with_j(mut entry: CatalogEntry, pairs: &[(String, String)]) -> CatalogEntry {
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let j =
        AlmostComplex::from_label_pairs(&entry.algebra, &refs).expect("catalog J squares to -1");
    entry.complex.insert("J".into(), j);
    entry
}

/// `so(n)` from `n x n` skew matrices.
pub fn so(n: usize) -> Result<CatalogEntry, CatalogError> {
    if n < 2 {
        return Err(CatalogError::Range(format!("so(n) needs n >= 2, got {n}")));
    }
    let mut b = Basis::new(n);
    b.rotations(n);
    let (alg, real) = b.build(&format!("so({n})"));
    let mut entry = CatalogEntry::new(alg, Some(real.clone()));
    let rho = Connection::new(real.mats.clone(), n)?;
    entry.connections.insert("standard".into(), rho);
    if n.is_multiple_of(4) || n % 4 == 1 {
        let pairs = reg_j_pairs(n).0;
        entry = with_j(entry, &pairs);
    }
    Ok(entry)
}

/// Pairs `(x, Jx)` of the regular structure on `so(n)`: `Jh_i = h_{i+1}` for
/// odd `i`, `Jf_{2j-1,l} = f_{2j,l}` for `2j < l`. Returns the unpaired `h`
/// when the rank is odd.
pub fn reg_j_pairs(n: usize) -> (Vec<(String, String)>, Option<String>) {
    let rank = n / 2;
    let mut pairs = Vec::new();
    let mut i = 1;
    while i < rank {
        pairs.push((
            rot_label(n, 2 * i - 1, 2 * i),
            rot_label(n, 2 * i + 1, 2 * i + 2),
        ));
        i += 2;
    }
    let leftover = (rank % 2 == 1).then(|| rot_label(n, 2 * rank - 1, 2 * rank));
    for j in 1..=n / 2 {
        for l in 2 * j + 1..=n {
            pairs.push((rot_label(n, 2 * j - 1, l), rot_label(n, 2 * j, l)));
        }
    }
    (pairs, leftover)
}

fn i_pairs(count: usize) -> Vec<(String, String)> {
    (1..=count / 2)
        .map(|i| (format!("e{}", 2 * i - 1), format!("e{}", 2 * i)))
        .collect()
}

/// `so(p,1)` preserving `diag(1,…,1,-1)`.
pub fn so_p1(p: usize) -> Result<CatalogEntry, CatalogError> {
    if p < 2 {
        return Err(CatalogError::Range(format!(
            "so(p,1) needs p >= 2, got {p}"
        )));
    }
    let mut b = Basis::new(p + 1);
    b.rotations(p);
    b.boosts(p);
    let (alg, real) = b.build(&format!("so({p},1)"));
    let mut entry = CatalogEntry::new(alg, Some(real.clone()));
    entry
        .connections
        .insert("standard".into(), Connection::new(real.mats, p + 1)?);
    if p == 3 {
        let frame = contraction_frame();
        entry
            .maps
            .insert("contraction_frame".into(), frame.frame.clone());
        entry.complex.insert("J".into(), frame.j_so31.clone());
    }
    Ok(entry)
}

/// `gl(n, ℝ)` on matrix units, with the left-multiplication connection and,
/// for even `n`, `R_I`.
pub fn gl(n: usize) -> Result<CatalogEntry, CatalogError> {
    if n < 1 {
        return Err(CatalogError::Range("gl(n) needs n >= 1".into()));
    }
    let a = AssociativeAlgebra::real_matrices(n);
    let (labels, mats) = crate::constructions::matrix_units(n);
    let (alg, real) = from_matrix_basis(format!("gl({n})"), labels, mats)?;
    let mut entry = CatalogEntry::new(alg, Some(real));
    entry
        .connections
        .insert("left_mult".into(), a.left_connection());
    entry
        .connections
        .insert("ad".into(), Connection::ad(&entry.algebra));
    if n.is_multiple_of(2) {
        entry.complex.insert("J".into(), r_i_structure(n / 2)?);
    }
    Ok(entry)
}

/// The fixed `I` on `ℝ^{2n}` with `I e_{2i-1} = e_{2i}`.
pub fn standard_i(n: usize) -> Matrix<Scalar> {
    let mut m = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(2 * i + 1, 2 * i, s(1));
        m.set(2 * i, 2 * i + 1, s(-1));
    }
    m
}

fn right_mult_structure(n: usize, i: &Matrix<Scalar>) -> Result<AlmostComplex, CatalogError> {
    let size = 2 * n;
    let (_, mats) = crate::constructions::matrix_units::<Scalar>(size);
    let images: Vec<SparseVec<Scalar>> = mats
        .iter()
        .map(|u| sparse::from_dense((u * i).entries()))
        .collect();
    Ok(AlmostComplex::from_images(images)?)
}

/// `R_I(u) = u ∘ I` on `gl(2n)`.
pub fn r_i_structure(n: usize) -> Result<AlmostComplex, CatalogError> {
    if n < 1 {
        return Err(CatalogError::Range("R_I needs n >= 1".into()));
    }
    right_mult_structure(n, &standard_i(n))
}

/// `aff(ℝ^n) = gl(n) ⊕ ℝ^n` on `(n+1) x (n+1)` affine matrices.
pub fn aff_rn(n: usize) -> Result<CatalogEntry, CatalogError> {
    if n < 1 {
        return Err(CatalogError::Range("aff(R^n) needs n >= 1".into()));
    }
    let mut b = Basis::new(n + 1);
    let (labels, _) = crate::constructions::matrix_units::<Scalar>(n);
    for (k, l) in labels.into_iter().enumerate() {
        b.push(l, unit_matrix(n + 1, k / n + 1, k % n + 1));
    }
    b.translations(n, n + 1);
    let (alg, real) = b.build(&format!("aff(R^{n})"));
    let mut entry = CatalogEntry::new(alg, Some(real));
    if n.is_multiple_of(2) {
        entry.complex.insert("J".into(), aff_j_plus(n / 2)?);
        let gl = gl(n)?;
        let mut rho = Vec::new();
        for m in gl.realization.as_ref().expect("realized").mats.iter() {
            rho.push(m.clone());
        }
        entry.teo1 = Some(Teo1Data {
            rho: Connection::new(rho, n)?,
            j: r_i_neg(n / 2)?,
            i: AlmostComplex::new(standard_i(n / 2))?,
            split: Decomposition {
                part0: Vec::new(),
                part1: (0..gl.algebra.dim()).map(sparse::unit).collect(),
            },
            module_labels: (1..=n).map(|l| format!("e{l}")).collect(),
            g: gl.algebra,
        });
    }
    Ok(entry)
}

fn r_i_neg(n: usize) -> Result<AlmostComplex, CatalogError> {
    right_mult_structure(n, &standard_i(n).neg())
}

/// `J_+ = (R_{-I}, I)` on `aff(ℝ^{2n})`.
pub fn aff_j_plus(n: usize) -> Result<AlmostComplex, CatalogError> {
    let j = r_i_neg(n)?;
    let i = AlmostComplex::new(standard_i(n))?;
    Ok(AlmostComplex::block(&j, &i))
}

/// Complex `2x2` matrix `a + ib` as the real `4x4` block `[[a, -b], [b, a]]`.
fn complex_block(re: &Matrix<Scalar>, im: &Matrix<Scalar>) -> Matrix<Scalar> {
    let n = re.rows();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.place(0, 0, re);
    m.place(n, n, re);
    m.place(0, n, &im.neg());
    m.place(n, 0, im);
    m
}

/// `sl(2,ℂ)` as a real 6-dim algebra on `{H, iH, X+, iX+, X-, iX-}` with
/// `X+ = e12`, `X- = -e21`; carries `J` (`JH = iH`, `JX± = ±iX±`) and the
/// multiplication-by-`i` map `Ji`.
pub fn sl2c_real() -> CatalogEntry {
    let z = Matrix::<Scalar>::zeros(2, 2);
    let h = Matrix::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(-1)]]).expect("2x2");
    let xp = unit_matrix(2, 1, 2);
    let xm = unit_matrix(2, 2, 1).neg();
    let mut b = Basis::new(4);
    for (name, m) in [("H", &h), ("Xp", &xp), ("Xm", &xm)] {
        b.push(name.to_string(), complex_block(m, &z));
        b.push(format!("i{name}"), complex_block(&z, m));
    }
    let (alg, real) = b.build("sl(2,C)");
    let mut entry = CatalogEntry::new(alg, Some(real));
    let j = AlmostComplex::from_label_pairs(
        &entry.algebra,
        &[("H", "iH"), ("Xp", "iXp"), ("iXm", "Xm")],
    )
    .expect("J^2 = -1");
    let ji = AlmostComplex::from_label_pairs(
        &entry.algebra,
        &[("H", "iH"), ("Xp", "iXp"), ("Xm", "iXm")],
    )
    .expect("J^2 = -1");
    entry.complex.insert("J".into(), j);
    entry.complex.insert("Ji".into(), ji);
    entry
}

/// The Galilean algebra on `5x5` matrices: `so(3)`, velocity boosts `e1..e3`
/// (column 4), translations `e1'..e3'` (column 5) and time `e4'` (entry (4,5)).
pub fn galilean() -> CatalogEntry {
    let mut b = Basis::new(5);
    b.rotations(3);
    b.translations(3, 4);
    for l in 1..=3 {
        b.push(format!("e{l}'"), unit_matrix(5, l, 5));
    }
    b.push("e4'".into(), unit_matrix(5, 4, 5));
    let (alg, real) = b.build("G(3,1)");
    let entry = CatalogEntry::new(alg, Some(real));
    let pairs: Vec<(String, String)> = [
        ("h", "e3'"),
        ("e1'", "e2'"),
        ("e1", "e2"),
        ("f13", "f23"),
        ("e3", "e4'"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let mut entry = with_j(entry, &pairs);
    let e3 = euclid(3).expect("e(3)");
    let iota = LinearMap::by_labels(&e3.algebra, &entry.algebra, |l| {
        l.strip_prefix('e').map(|_| format!("{l}'"))
    })
    .expect("labels exist");
    entry.maps.insert("from_e3".into(), iota);
    entry
}

fn euclid_basis(n: usize) -> (LieAlgebra, MatrixRealization) {
    let mut b = Basis::new(n + 1);
    b.rotations(n);
    b.translations(n, n + 1);
    b.build(&format!("e({n})"))
}

/// `ℝ^s ⊕ e(n)` with the complex structure of the Euclidean theorem.
pub fn euclid(n: usize) -> Result<CatalogEntry, CatalogError> {
    if n < 3 {
        return Err(CatalogError::Range(format!(
            "euclid(n) needs n >= 3, got {n}"
        )));
    }
    Ok(euclid_any(n))
}

/// Same as [`euclid`] but also allows `n = 2` (`ℝz ⊕ e(2)`), the bottom of
/// the `k = 0` chain.
pub(crate) fn euclid_any(n: usize) -> CatalogEntry {
    let (base, real) = euclid_basis(n);
    let (reg, leftover) = reg_j_pairs(n);
    let mut pairs = reg;
    let (algebra, unextended) = match n % 4 {
        0 => {
            pairs.extend(i_pairs(n));
            (base, None)
        }
        1 => {
            pairs.extend(i_pairs(n - 1));
            pairs.push((format!("e{n}"), "z".into()));
            (
                central_extension(&base).with_name(format!("Rz+e({n})")),
                Some(base),
            )
        }
        2 => {
            pairs.extend(i_pairs(n));
            pairs.push((leftover.clone().expect("odd rank"), "z".into()));
            (
                central_extension(&base).with_name(format!("Rz+e({n})")),
                Some(base),
            )
        }
        _ => {
            pairs.extend(i_pairs(n - 1));
            pairs.push((leftover.clone().expect("odd rank"), format!("e{n}")));
            (base, None)
        }
    };
    let mut entry = with_j(CatalogEntry::new(algebra, Some(real)), &pairs);
    entry.unextended = unextended;
    if n.is_multiple_of(4) || n % 4 == 2 {
        let data = euclid_teo1(n);
        entry
            .decompositions
            .insert("g0g1".into(), data.split.clone());
        entry.teo1 = Some(data);
    }
    entry
}

/// `u^±_{jl} = f_{2j-1,2l-1} ± f_{2j,2l}`, `v^±_{jl} = f_{2j-1,2l} ± f_{2j,2l-1}`.
fn root_vectors(
    g: &LieAlgebra,
    n: usize,
    j: usize,
    l: usize,
    sign: i64,
) -> (SparseVec<Scalar>, SparseVec<Scalar>) {
    let f = |a: usize, b: usize| g.idx(&rot_label(n, a, b));
    let u = sparse::collect(vec![
        (f(2 * j - 1, 2 * l - 1), s(1)),
        (f(2 * j, 2 * l), s(sign)),
    ]);
    let v = sparse::collect(vec![
        (f(2 * j - 1, 2 * l), s(1)),
        (f(2 * j, 2 * l - 1), s(sign)),
    ]);
    (u, v)
}

fn euclid_teo1(n: usize) -> Teo1Data {
    let so_n = so(n).expect("n >= 2");
    let rank = n / 2;
    let (g, rho_mats) = if n % 4 == 2 {
        let g = central_extension(&so_n.algebra).with_name(format!("so({n})+Rz"));
        let mut mats = so_n.realization.as_ref().expect("realized").mats.clone();
        mats.push(Matrix::zeros(n, n));
        (g, mats)
    } else {
        (
            so_n.algebra.clone(),
            so_n.realization.as_ref().expect("realized").mats.clone(),
        )
    };
    let (mut pairs, leftover) = reg_j_pairs(n);
    if let Some(h) = leftover {
        pairs.push((h, "z".into()));
    }
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let j = AlmostComplex::from_label_pairs(&g, &refs).expect("J^2 = -1");
    let mut part0: Vec<SparseVec<Scalar>> = (1..=rank)
        .map(|i| sparse::unit(g.idx(&rot_label(n, 2 * i - 1, 2 * i))))
        .collect();
    let mut part1 = Vec::new();
    for jj in 1..=rank {
        for l in jj + 1..=rank {
            let (u_plus, _) = root_vectors(&g, n, jj, l, 1);
            let (u_minus, v_minus) = root_vectors(&g, n, jj, l, -1);
            let (_, v_plus) = root_vectors(&g, n, jj, l, 1);
            part0.push(u_plus);
            part0.push(v_minus);
            part1.push(u_minus);
            part1.push(v_plus);
        }
    }
    if n % 4 == 2 {
        part0.push(sparse::unit(g.idx("z")));
    }
    Teo1Data {
        rho: Connection::new(rho_mats, n).expect("square"),
        j,
        i: AlmostComplex::new(standard_i(n / 2)).expect("I^2 = -1"),
        split: Decomposition { part0, part1 },
        module_labels: (1..=n).map(|l| format!("e{l}")).collect(),
        g,
    }
}

/// `e(4k+2, 1) = so(4k+2, 1) ⊕ ℝ^{4k+3}` on affine matrices.
pub fn poincare(k: usize) -> Result<CatalogEntry, CatalogError> {
    let p = 4 * k + 2;
    let mut b = Basis::new(p + 2);
    b.rotations(p);
    b.boosts(p);
    b.translations(p + 1, p + 2);
    let (alg, real) = b.build(&format!("e({p},1)"));
    let (mut pairs, leftover) = reg_j_pairs(p);
    pairs.push((leftover.expect("odd rank"), format!("e{}", p + 1)));
    for i in 1..=p / 2 {
        pairs.push((boost_label(2 * i - 1, p + 1), boost_label(2 * i, p + 1)));
    }
    pairs.extend(i_pairs(p));
    let mut entry = with_j(CatalogEntry::new(alg, Some(real)), &pairs);
    let g = &entry.algebra;
    let rank = p / 2;
    let mut part0: Vec<SparseVec<Scalar>> = (1..=rank)
        .map(|i| sparse::unit(g.idx(&rot_label(p, 2 * i - 1, 2 * i))))
        .collect();
    let mut part1 = Vec::new();
    for jj in 1..=rank {
        for l in jj + 1..=rank {
            let (u_plus, v_plus) = root_vectors(g, p, jj, l, 1);
            let (u_minus, v_minus) = root_vectors(g, p, jj, l, -1);
            part0.push(u_plus);
            part0.push(v_minus);
            part1.push(u_minus);
            part1.push(v_plus);
        }
    }
    part0.push(sparse::unit(g.idx(&format!("e{}", p + 1))));
    for i in 1..=p {
        part1.push(sparse::unit(g.idx(&boost_label(i, p + 1))));
    }
    entry
        .decompositions
        .insert("g0g1".into(), Decomposition { part0, part1 });
    let source = euclid_any(p);
    let iota = LinearMap::by_labels(&source.algebra, &entry.algebra, |l| {
        (l == "z").then(|| format!("e{}", p + 1))
    })?;
    entry.maps.insert("from_euclid".into(), iota);
    Ok(entry)
}

/// The coordinates of the decomposition `so(4k+2,1) ⊕ ℝe_{4k+3}` live inside
/// `e(4k+2,1)`; this returns the indices of that subspace.
pub fn poincare_g_indices(entry: &CatalogEntry, k: usize) -> Vec<usize> {
    let p = 4 * k + 2;
    entry
        .algebra
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('e') || **l == format!("e{}", p + 1))
        .map(|(i, _)| i)
        .collect()
}

/// One holomorphic inclusion in a chain.
#[derive(Clone, Debug)]
pub struct Inclusion {
    pub name: String,
    pub domain: CatalogEntry,
    pub codomain: CatalogEntry,
    pub map: LinearMap,
}

/// `e(4k) ↪ ℝz⊕e(4k+1) ↪ ℝz⊕e(4k+2) ↪ e(4k+3)`, each central `z` sent to the
/// next translation generator.
pub fn inclusion_chain(k: usize) -> Result<Vec<Inclusion>, CatalogError> {
    if k < 1 {
        return Err(CatalogError::Range("inclusion_chain needs k >= 1".into()));
    }
    let entries: Vec<CatalogEntry> = (0..4).map(|r| euclid_any(4 * k + r)).collect();
    let mut out = Vec::new();
    for r in 0..3 {
        let (dom, cod) = (&entries[r], &entries[r + 1]);
        let next = format!("e{}", 4 * k + r + 1);
        let map = LinearMap::by_labels(&dom.algebra, &cod.algebra, |l| {
            (l == "z").then(|| next.clone())
        })?;
        out.push(Inclusion {
            name: format!("{} -> {}", dom.name, cod.name),
            domain: dom.clone(),
            codomain: cod.clone(),
            map,
        });
    }
    Ok(out)
}

/// `ℝz⊕e(4k+2) ↪ e(4k+2,1)` with `z ↦ e_{4k+3}`.
pub fn poincare_embedding(k: usize) -> Result<Inclusion, CatalogError> {
    let cod = poincare(k)?;
    let dom = euclid_any(4 * k + 2);
    Ok(Inclusion {
        name: format!("{} -> {}", dom.name, cod.name),
        map: cod.maps["from_euclid"].clone(),
        domain: dom,
        codomain: cod,
    })
}

/// `e(3) ↪ G(3,1)` with `e_l ↦ e_l'`.
pub fn galilean_embedding() -> Inclusion {
    let cod = galilean();
    Inclusion {
        name: "e(3) -> G(3,1)".into(),
        map: cod.maps["from_e3"].clone(),
        domain: euclid_any(3),
        codomain: cod,
    }
}

/// The basis identification `sl(2,ℂ)_ℝ → so(3,1)` used to transport `J`
/// along the contraction to `e(3)`.
#[derive(Clone, Debug)]
pub struct ContractionFrame {
    pub frame: LinearMap,
    pub j_sl: AlmostComplex,
    /// `J` carried to `so(3,1)` by the frame.
    pub j_so31: AlmostComplex,
    /// Boost `s_{l4}` becomes translation `e_l` at `t = 0`.
    pub label_map: Vec<(String, String)>,
}

/// Frame `H ↦ 2 s34`, `iH ↦ -2 h`, `X± ↦ -f13 ± s14`, `iX+ ↦ -f23 + s24`,
/// `iX- ↦ f23 + s24` (spinor map composed with conjugation).
pub fn contraction_frame() -> ContractionFrame {
    let sl = sl2c_real();
    let mut b = Basis::new(4);
    b.rotations(3);
    b.boosts(3);
    let (so31, _) = b.build("so(3,1)");
    let v = |terms: &[(&str, i64)]| -> SparseVec<Scalar> {
        sparse::collect(terms.iter().map(|(l, c)| (so31.idx(l), s(*c))).collect())
    };
    let images = vec![
        v(&[("s34", 2)]),
        v(&[("h", -2)]),
        v(&[("f13", -1), ("s14", 1)]),
        v(&[("f23", -1), ("s24", 1)]),
        v(&[("f13", -1), ("s14", -1)]),
        v(&[("f23", 1), ("s24", 1)]),
    ];
    let frame = LinearMap::from_images(&sl.algebra, &so31, &images).expect("6 images");
    let inv = crate::linalg::invert(&frame.matrix).expect("frame is invertible");
    let j_sl = sl.complex["J"].clone();
    let j_so31 =
        AlmostComplex::new(&(&frame.matrix * j_sl.matrix()) * &inv).expect("conjugate of J");
    let label_map = (1..=3)
        .map(|l| (format!("s{l}4"), format!("e{l}")))
        .collect();
    ContractionFrame {
        frame,
        j_sl,
        j_so31,
        label_map,
    }
}

/// `aff(ℝ) = span{x, y}`, `[x, y] = y`, with the left-symmetric connection
/// (`∇_x y = y`, all else zero), `ad`, and the negated right multiplication.
pub fn aff_r() -> CatalogEntry {
    let mut b = Basis::new(2);
    b.push("x".into(), unit_matrix(2, 1, 1));
    b.push("y".into(), unit_matrix(2, 1, 2));
    let (alg, real) = b.build("aff(R)");
    let mut entry = CatalogEntry::new(alg, Some(real));
    let mut nx = Matrix::zeros(2, 2);
    nx.set(1, 1, s(1));
    let lsa = Connection::new(vec![nx, Matrix::zeros(2, 2)], 2).expect("2x2");
    entry.connections.insert("lsa".into(), lsa);
    entry
        .connections
        .insert("ad".into(), Connection::ad(&entry.algebra));
    entry
}

/// `e(2)` with `[h, e1] = -e2`, `[h, e2] = e1` and the standard inner product.
pub fn e2() -> CatalogEntry {
    let (alg, real) = euclid_basis(2);
    let mut entry = CatalogEntry::new(alg, Some(real));
    entry.forms.insert(
        "B".into(),
        BilinearForm::symmetric(Matrix::identity(3)).expect("symmetric"),
    );
    entry
}

/// `ℝz ⊕ (so(3) ⊕_ρ ℂ³)` with `ρ(A) = A ⊗ id_2`, `I` = multiplication by `i`,
/// `Jf13 = f23`, `Jh = z`; the stored split has `g_1 = 0`.
pub fn cor_sam() -> Result<CatalogEntry, CatalogError> {
    let so3 = so(3)?;
    let g = central_extension(&so3.algebra).with_name("so(3)+Rz");
    let id2 = Matrix::<Scalar>::identity(2);
    let mut rho: Vec<Matrix<Scalar>> = so3
        .realization
        .as_ref()
        .expect("realized")
        .mats
        .iter()
        .map(|a| kron(a, &id2))
        .collect();
    rho.push(Matrix::zeros(6, 6));
    let module_labels: Vec<String> = (1..=3)
        .flat_map(|l| [format!("e{l}"), format!("ie{l}")])
        .collect();
    let j = AlmostComplex::from_label_pairs(&g, &[("f13", "f23"), ("h", "z")])?;
    let i = AlmostComplex::new(standard_i(3))?;
    let data = Teo1Data {
        rho: Connection::new(rho, 6)?,
        j,
        i,
        split: Decomposition {
            part0: (0..g.dim()).map(sparse::unit).collect(),
            part1: Vec::new(),
        },
        module_labels,
        g,
    };
    let alg = data.semidirect()?.with_name("Rz+(so(3)+C3)");
    let mut entry = CatalogEntry::new(alg, None);
    let jp = AlmostComplex::block(&data.j, &data.i);
    let jm = AlmostComplex::block(&data.j, &data.i.neg());
    entry.complex.insert("J".into(), jp.clone());
    entry.complex.insert("J_plus".into(), jp);
    entry.complex.insert("J_minus".into(), jm);
    entry
        .decompositions
        .insert("g0g1".into(), data.split.clone());
    entry.teo1 = Some(data);
    Ok(entry)
}

/// `ℂ` as a real associative algebra on `one, i` with `i·i = -one`.
pub fn complex_numbers() -> AssociativeAlgebra {
    let one = sparse::unit(0);
    let i = sparse::unit(1);
    AssociativeAlgebra::new(
        "C",
        vec!["one".into(), "i".into()],
        vec![
            ((0, 0), one.clone()),
            ((0, 1), i.clone()),
            ((1, 0), i),
            ((1, 1), sparse::neg(&one)),
        ],
    )
    .expect("associative")
}

/// `aff(ℂ) = gl(1,ℂ) ⊕ ℂ` with `∇_{(x,v)}(y,u) = (xy, xu)`, the canonical
/// `K`, and `J = (-i·) ⊕ (i·)`.
pub fn aff_c1() -> Result<CatalogEntry, CatalogError> {
    let c = complex_numbers();
    let (alg, k, nabla) = aff_algebra(&c)?;
    let mut entry = CatalogEntry::new(alg.with_name("aff(C)"), None);
    let li = c.left_mult(1);
    let j = AlmostComplex::new(Matrix::block_diag(&[&li.neg(), &li]))?;
    entry.complex.insert("J".into(), j);
    entry.complex.insert("K".into(), k);
    entry.connections.insert("nabla".into(), nabla);
    Ok(entry)
}

/// Kronecker product `a ⊗ b`.
pub fn kron<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, c| {
        a.get(r / b.rows(), c / b.cols())
            .mul(b.get(r % b.rows(), c % b.cols()))
    })
}

/// `g_0` of a stored split, checked for bracket closure.
pub fn check_part0_subalgebra(data: &Teo1Data) -> Certificate {
    check_subalgebra("g0_subalgebra", &data.g, &data.split.part0)
}

/// Names accepted by [`lookup`], with their parameter counts.
pub const NAMES: &[(&str, usize)] = &[
    ("so", 1),
    ("so_p1", 1),
    ("gl", 1),
    ("aff_rn", 1),
    ("sl2c", 0),
    ("galilean", 0),
    ("euclid", 1),
    ("poincare", 1),
    ("aff_r", 0),
    ("e2", 0),
    ("cor_sam", 0),
    ("aff_c1", 0),
];

/// One or more parameter choices per catalog name, small enough for sweeps.
pub const SAMPLES: &[(&str, &[usize])] = &[
    ("so", &[3]),
    ("so", &[4]),
    ("so", &[5]),
    ("so_p1", &[2]),
    ("so_p1", &[3]),
    ("gl", &[2]),
    ("gl", &[3]),
    ("aff_rn", &[2]),
    ("sl2c", &[]),
    ("galilean", &[]),
    ("euclid", &[3]),
    ("euclid", &[4]),
    ("euclid", &[5]),
    ("euclid", &[6]),
    ("poincare", &[0]),
    ("poincare", &[1]),
    ("aff_r", &[]),
    ("e2", &[]),
    ("cor_sam", &[]),
    ("aff_c1", &[]),
];

/// Resolves a catalog name and its integer parameters.
pub fn lookup(name: &str, params: &[usize]) -> Result<CatalogEntry, CatalogError> {
    let expected = NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| *a)
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
    if params.len() != expected {
        return Err(CatalogError::Arity {
            name: name.to_string(),
            expected,
        });
    }
    let p = params.first().copied().unwrap_or(0);
    match name {
        "so" => so(p),
        "so_p1" => so_p1(p),
        "gl" => gl(p),
        "aff_rn" => aff_rn(p),
        "sl2c" => Ok(sl2c_real()),
        "galilean" => Ok(galilean()),
        "euclid" => euclid(p),
        "poincare" => poincare(p),
        "aff_r" => Ok(aff_r()),
        "e2" => Ok(e2()),
        "cor_sam" => cor_sam(),
        "aff_c1" => aff_c1(),
        _ => unreachable!("checked against NAMES"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{check_integrable, check_jacobi};

    #[test]
    fn so3_labels() {
        let e = so(3).unwrap();
        assert_eq!(e.algebra.labels(), &["h", "f13", "f23"]);
        let e = so(4).unwrap();
        assert_eq!(
            e.algebra.labels(),
            &["h1", "f13", "f14", "f23", "f24", "h2"]
        );
        let e = so(10).unwrap();
        assert!(e.algebra.index_of("f1_10").is_some());
    }

    #[test]
    fn so21_has_boosts() {
        let e = so_p1(2).unwrap();
        assert_eq!(e.algebra.labels(), &["h", "s13", "s23"]);
    }

    #[test]
    fn e3_matches_reference_assignment() {
        let e = euclid(3).unwrap();
        let a = &e.algebra;
        assert_eq!(a.labels(), &["h", "f13", "f23", "e1", "e2", "e3"]);
        let j = e.j();
        assert_eq!(j.column(a.idx("h")), &vec![(a.idx("e3"), s(1))]);
        assert_eq!(j.column(a.idx("f13")), &vec![(a.idx("f23"), s(1))]);
        assert_eq!(j.column(a.idx("e1")), &vec![(a.idx("e2"), s(1))]);
        assert_eq!(j.column(a.idx("e3")), &vec![(a.idx("h"), s(-1))]);
    }

    #[test]
    fn euclid_bracket_from_realization() {
        // [f_{i,4k+1}, e_{4k+1}] = e_i with k = 1
        let e = euclid(5).unwrap();
        let a = &e.algebra;
        for i in 1..=4 {
            let f = a.idx(&rot_label(5, i, 5));
            assert_eq!(
                a.bracket_basis(f, a.idx("e5")),
                &vec![(a.idx(&format!("e{i}")), s(1))]
            );
        }
        assert_eq!(a.dim(), 1 + 10 + 5);
    }

    #[test]
    fn catalog_js_are_complex_and_jacobi_holds() {
        for n in 3..=8 {
            let e = euclid(n).unwrap();
            assert!(check_jacobi(&e.algebra).pass, "e({n})");
            assert!(check_integrable(&e.algebra, e.j()).pass, "e({n})");
        }
        for e in [
            sl2c_real(),
            galilean(),
            poincare(0).unwrap(),
            aff_rn(2).unwrap(),
            gl(2).unwrap(),
        ] {
            assert!(check_jacobi(&e.algebra).pass, "{}", e.name);
        }
    }

    #[test]
    fn poincare0_matches_reference() {
        let e = poincare(0).unwrap();
        let a = &e.algebra;
        assert_eq!(a.labels(), &["h", "s13", "s23", "e1", "e2", "e3"]);
        assert_eq!(e.j().column(a.idx("s13")), &vec![(a.idx("s23"), s(1))]);
        assert_eq!(e.j().column(a.idx("h")), &vec![(a.idx("e3"), s(1))]);
        let split = &e.decompositions["g0g1"];
        assert!(split.part1.contains(&sparse::unit(a.idx("s13"))));
        assert!(split.part1.contains(&sparse::unit(a.idx("s23"))));
    }

    #[test]
    fn sl2c_relations() {
        let e = sl2c_real();
        let a = &e.algebra;
        let (h, xp, xm) = (a.idx("H"), a.idx("Xp"), a.idx("Xm"));
        assert_eq!(a.bracket_basis(h, xp), &vec![(xp, s(2))]);
        assert_eq!(a.bracket_basis(h, xm), &vec![(xm, s(-2))]);
        assert_eq!(a.bracket_basis(xp, xm), &vec![(h, s(-1))]);
    }

    #[test]
    fn contraction_frame_is_an_isomorphism() {
        let f = contraction_frame();
        let sl = sl2c_real();
        let so31 = so_p1(3).unwrap();
        let p = &f.frame.matrix;
        for i in 0..6 {
            for j in 0..6 {
                let lhs = p.apply_sparse(sl.algebra.bracket_basis(i, j));
                let rhs = so31
                    .algebra
                    .bracket_sparse(&p.sparse_column(i), &p.sparse_column(j));
                assert_eq!(lhs, rhs, "({i},{j})");
            }
        }
        let a = &so31.algebra;
        let j = &f.j_so31;
        assert_eq!(j.column(a.idx("h")), &vec![(a.idx("s34"), s(1))]);
        assert_eq!(j.column(a.idx("f13")), &vec![(a.idx("f23"), s(1))]);
        assert_eq!(j.column(a.idx("s14")), &vec![(a.idx("s24"), s(1))]);
    }

    #[test]
    fn kron_shape() {
        let a = Matrix::<Scalar>::identity(2);
        assert_eq!(kron(&a, &Matrix::identity(3)), Matrix::identity(6));
    }

    #[test]
    fn lookup_errors() {
        assert!(matches!(lookup("nope", &[]), Err(CatalogError::Unknown(_))));
        assert!(matches!(lookup("so", &[]), Err(CatalogError::Arity { .. })));
        assert!(matches!(
            lookup("euclid", &[2]),
            Err(CatalogError::Range(_))
        ));
    }

    #[test]
    fn aff_c1_is_hypercomplex_base() {
        let e = aff_c1().unwrap();
        assert_eq!(e.algebra.dim(), 4);
        assert!(check_integrable(&e.algebra, e.j()).pass);
        let (_, cert) =
            crate::structures::hypercomplex_from(&e.algebra, &e.connections["nabla"], e.j())
                .unwrap();
        assert!(cert.pass, "{cert:?}");
    }
}
