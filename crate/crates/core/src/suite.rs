//! The acceptance suite: twelve fixed criteria, each a bundle of
//! certificates that must all pass.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{self, CatalogEntry, SAMPLES};
use crate::constructions::{canonical_k, cotangent, eigenspace_split, iw_contraction, tangent};
use crate::dsl::{catalog_ident, emit_catalog_dsl, parse};
use crate::lie::{
    check_closed, check_integrable, check_integrable_split, check_representation,
    check_torsion_free, half_basis, AlmostComplex, BilinearForm, Certificate, Connection,
    LieAlgebra, LinearMap, Witness,
};
use crate::scalar::q;
use crate::structures::{
    check_holomorphic, check_self_dual, check_teo1, dual_structure, generated_rank,
    hypercomplex_from, jplus, levi_civita, pseudo_kahler_verify, reconstruct_from_cps, teo2_verify,
    tower,
};

pub const CRITERIA: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub certificates: Vec<Certificate>,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    /// `PASS 3 title (n certificates, t ms)`, plus the failing checks.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} {:>2} {} ({} certificates, {} ms)",
            self.id,
            self.title,
            self.certificates.len(),
            self.elapsed_ms
        );
        for c in self.certificates.iter().filter(|c| !c.pass) {
            s.push_str(&format!("\n       failed: {} on {}", c.check, c.target));
        }
        s
    }
}

const TITLES: [&str; CRITERIA] = [
    "low-dimensional complex structures and e(3) -> G(3,1)",
    "Euclidean family e(3)..e(11), split conditions, inclusion chain",
    "Poincare e(2,1), e(6,1) and their embeddings",
    "contraction so(3,1) -> e(3) keeps J integrable",
    "J_+ on aff(R^2n) and J_+/J_- on Rz+(so(3)+C^3)",
    "J_+ on the adjoint tangent and cotangent of e(3)",
    "K integrable iff torsion-free; reconstruction",
    "hypercomplex structures from parallel J",
    "Clifford towers",
    "closedness dichotomy on aff(R) cotangents",
    "flat metric on e(2): Levi-Civita and pseudo-Kahler lift",
    "infrastructure: half-basis, eigenspaces, DSL round-trip, e(23) timing",
];

pub fn title(id: usize) -> &'static str {
    TITLES[id - 1]
}

/// Runs criterion `id` (1-based).
pub fn criterion(id: usize) -> CriterionResult {
    let start = Instant::now();
    let certificates = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        _ => panic!("criterion {id} out of range 1..={CRITERIA}"),
    };
    CriterionResult {
        id,
        title: title(id),
        pass: !certificates.is_empty() && certificates.iter().all(|c| c.pass),
        certificates,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA).map(criterion).collect()
}

/// A certificate for a plain assertion.
fn assert_cert(check: &str, target: &str, ok: bool, msg: impl Into<String>) -> Certificate {
    let failures = if ok {
        Vec::new()
    } else {
        vec![Witness::message(Vec::new(), msg)]
    };
    Certificate::from_failures(check, target, failures, Instant::now())
}

fn negated(c: Certificate, check: &str) -> Certificate {
    let ok = !c.pass && c.precondition.is_none();
    let msg = format!("{} unexpectedly passed", c.check);
    let mut out = assert_cert(check, &c.target, ok, msg);
    out.subchecks.push(c);
    out
}

fn timed(
    check: &str,
    target: &str,
    limit: Duration,
    f: impl FnOnce() -> Certificate,
) -> Certificate {
    let start = Instant::now();
    let inner = f();
    let took = start.elapsed();
    let ok = inner.pass && took < limit;
    let msg = format!(
        "took {} ms, limit {} ms",
        took.as_millis(),
        limit.as_millis()
    );
    let mut c = assert_cert(check, target, ok, msg)
        .detail("elapsed_ms", took.as_millis() as u64)
        .detail("limit_ms", limit.as_millis() as u64);
    c.subchecks.push(inner);
    c
}

fn entry(name: &str, params: &[usize]) -> CatalogEntry {
    catalog::lookup(name, params).unwrap_or_else(|e| panic!("catalog {name}{params:?}: {e}"))
}

fn integrable(e: &CatalogEntry) -> Certificate {
    check_integrable(&e.algebra, e.j())
}

fn inclusion(inc: &catalog::Inclusion) -> Certificate {
    check_holomorphic(
        &inc.domain.algebra,
        &inc.codomain.algebra,
        &inc.map,
        inc.domain.j(),
        inc.codomain.j(),
    )
}

fn teo1(e: &CatalogEntry) -> Certificate {
    match &e.teo1 {
        Some(d) => check_teo1(&d.g, &d.rho, &d.j, &d.i, &d.split),
        None => assert_cert("teo1", &e.name, false, "no stored split"),
    }
}

fn c1() -> Vec<Certificate> {
    let mut out: Vec<Certificate> = [
        entry("euclid", &[3]),
        entry("poincare", &[0]),
        entry("galilean", &[]),
        entry("sl2c", &[]),
    ]
    .iter()
    .map(integrable)
    .collect();
    out.push(inclusion(&catalog::galilean_embedding()));
    out
}

fn c2() -> Vec<Certificate> {
    let mut out = Vec::new();
    for n in 3..=11 {
        let e = entry("euclid", &[n]);
        if n == 11 {
            out.push(timed(
                "timing_e11",
                &e.name,
                Duration::from_secs(30),
                || integrable(&e),
            ));
        } else {
            out.push(integrable(&e));
        }
        if n % 4 == 0 || n % 4 == 2 {
            out.push(teo1(&e));
        }
    }
    for inc in catalog::inclusion_chain(1).expect("k = 1") {
        out.push(inclusion(&inc));
    }
    out
}

fn c3() -> Vec<Certificate> {
    let mut out = Vec::new();
    for k in 0..=1 {
        out.push(integrable(&entry("poincare", &[k])));
        out.push(inclusion(&catalog::poincare_embedding(k).expect("k <= 1")));
    }
    out
}

fn c4() -> Vec<Certificate> {
    let so31 = entry("so_p1", &[3]);
    let a = &so31.algebra;
    let frame = catalog::contraction_frame();
    let h: Vec<usize> = (0..a.dim())
        .filter(|&i| !a.label(i).starts_with('s'))
        .collect();
    let m: Vec<usize> = (0..a.dim())
        .filter(|&i| a.label(i).starts_with('s'))
        .collect();
    let fam = match iw_contraction(a, &h, &m) {
        Ok(f) => f,
        Err(e) => {
            return vec![assert_cert(
                "iw_contraction",
                a.name(),
                false,
                e.to_string(),
            )]
        }
    };
    let mut out: Vec<Certificate> = [q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)]
        .iter()
        .map(|t| check_integrable(&fam.at(t), &frame.j_so31).detail("t", t.to_string()))
        .collect();
    let e3 = entry("euclid", &[3]);
    let labels: Vec<String> = a
        .labels()
        .iter()
        .map(|l| {
            frame
                .label_map
                .iter()
                .find(|(from, _)| from == l)
                .map_or_else(|| l.clone(), |(_, to)| to.clone())
        })
        .collect();
    let limit = fam
        .at(&q(0, 1))
        .relabeled(labels.clone())
        .and_then(|l| l.permuted_to(e3.algebra.labels()));
    let same = limit.as_ref().is_ok_and(|l| l.same_structure(&e3.algebra));
    out.push(assert_cert(
        "contraction_limit",
        "e(3)",
        same,
        "t = 0 algebra differs from e(3)",
    ));
    let order: Vec<usize> = e3
        .algebra
        .labels()
        .iter()
        .map(|l| labels.iter().position(|x| x == l).expect("label"))
        .collect();
    let j0 = frame.j_so31.matrix().submatrix(&order, &order);
    out.push(assert_cert(
        "contraction_limit_j",
        "e(3)",
        &j0 == e3.j().matrix(),
        "transported J differs from the e(3) structure",
    ));
    out
}

fn c5() -> Vec<Certificate> {
    let mut out = Vec::new();
    for n in 1..=2 {
        let e = entry("aff_rn", &[2 * n]);
        let j = catalog::aff_j_plus(n).expect("n >= 1");
        out.push(check_integrable(&e.algebra, &j).detail("n", n));
    }
    let cs = entry("cor_sam", &[]);
    out.push(check_integrable(&cs.algebra, &cs.complex["J_plus"]).with_check("integrable_j_plus"));
    out.push(
        check_integrable(&cs.algebra, &cs.complex["J_minus"]).with_check("integrable_j_minus"),
    );
    out.push(teo1(&cs));
    out
}

fn c6() -> Vec<Certificate> {
    let e = entry("euclid", &[3]);
    let g = &e.algebra;
    let j = e.j();
    let ad = Connection::ad(g);
    let mut out = Vec::new();
    match tangent(g, &ad) {
        Ok(t) => out
            .push(check_integrable(&t, &jplus(j, j, true)).with_check("integrable_tangent_j_plus")),
        Err(err) => out.push(assert_cert("tangent", g.name(), false, err.to_string())),
    }
    match cotangent(g, &ad) {
        Ok((t, _)) => out.push(
            check_integrable(&t, &jplus(j, &dual_structure(j), true))
                .with_check("integrable_cotangent_j_plus"),
        ),
        Err(err) => out.push(assert_cert("cotangent", g.name(), false, err.to_string())),
    }
    out
}

/// `(g, ∇, expected verdict of both sides)`.
pub fn teo2_corpus() -> Vec<(String, LieAlgebra, Connection, bool)> {
    let aff = entry("aff_r", &[]);
    let gl2 = entry("gl", &[2]);
    let ab = LieAlgebra::abelian("R2", vec!["x".into(), "y".into()]).expect("labels");
    vec![
        (
            "aff(R), left-symmetric".into(),
            aff.algebra.clone(),
            aff.connections["lsa"].clone(),
            true,
        ),
        (
            "aff(R), ad".into(),
            aff.algebra.clone(),
            aff.connections["ad"].clone(),
            false,
        ),
        ("R^2, zero".into(), ab.clone(), Connection::zero(2, 2), true),
        (
            "gl(2), left multiplication".into(),
            gl2.algebra.clone(),
            gl2.connections["left_mult"].clone(),
            true,
        ),
    ]
}

fn c7() -> Vec<Certificate> {
    let mut out = Vec::new();
    for (label, g, nabla, expected) in teo2_corpus() {
        let c = teo2_verify(&g, &nabla);
        let sides = c.details.get("k_integrable").and_then(|v| v.as_bool()) == Some(expected)
            && c.details.get("torsion_free").and_then(|v| v.as_bool()) == Some(expected);
        out.push(assert_cert(
            "teo2_expected_sides",
            &label,
            sides,
            format!("sides differ from {expected}"),
        ));
        out.push(c.with_target(label.clone()));
        if expected {
            out.push(round_trip(&label, &g, &nabla));
        }
    }
    out
}

/// `reconstruct_from_cps ∘ tangent` recovers `(g, ∇)` exactly.
pub fn round_trip(label: &str, g: &LieAlgebra, nabla: &Connection) -> Certificate {
    let start = Instant::now();
    let t = match tangent(g, nabla) {
        Ok(t) => t,
        Err(e) => return assert_cert("round_trip", label, false, e.to_string()),
    };
    let part: Vec<usize> = (0..g.dim()).collect();
    let r = reconstruct_from_cps(&t, &canonical_k(g.dim()), &part);
    let same_g =
        r.g.as_ref()
            .is_some_and(|h| h.structure_constants().eq(g.structure_constants()));
    let same_nabla = r.nabla.as_ref() == Some(nabla);
    let kg_abelian = r.certificate.subcheck("kg_abelian").is_some_and(|c| c.pass);
    let subs = vec![
        r.certificate,
        assert_cert("same_algebra", label, same_g, "recovered brackets differ"),
        assert_cert(
            "same_connection",
            label,
            same_nabla,
            "recovered connection differs",
        ),
        assert_cert(
            "kg_abelian_reported",
            label,
            kg_abelian,
            "missing kg_abelian",
        ),
    ];
    Certificate::composite("round_trip", label, subs, start)
}

fn c8() -> Vec<Certificate> {
    let mut out = Vec::new();
    let gl2 = entry("gl", &[2]);
    let affc = entry("aff_c1", &[]);
    for (e, nabla) in [(&gl2, "left_mult"), (&affc, "nabla")] {
        match hypercomplex_from(&e.algebra, &e.connections[nabla], e.j()) {
            Ok((_, c)) => {
                let has = ["parallel_j_minus", "parallel_k", "obata"]
                    .iter()
                    .all(|s| c.subcheck(s).is_some());
                out.push(assert_cert(
                    "obata_reported",
                    &e.name,
                    has,
                    "missing parallelism or Obata subchecks",
                ));
                out.push(c);
            }
            Err(err) => out.push(assert_cert("hypercomplex", &e.name, false, err.to_string())),
        }
    }
    out
}

fn c9() -> Vec<Certificate> {
    let mut out = Vec::new();
    let gl2 = entry("gl", &[2]);
    let ab = LieAlgebra::abelian("R2", vec!["x".into(), "y".into()]).expect("labels");
    for (g, nabla, m, dim, rank) in [
        (&gl2.algebra, gl2.connections["left_mult"].clone(), 3, 32, 8),
        (&ab, Connection::zero(2, 2), 4, 32, 16),
    ] {
        match tower(g, &nabla, m) {
            Ok(tw) => {
                let top = tw.top();
                let target = top.algebra.name().to_string();
                out.push(assert_cert(
                    "tower_dim",
                    &target,
                    top.algebra.dim() == dim,
                    format!("dimension {} != {dim}", top.algebra.dim()),
                ));
                let r = generated_rank(&tw.family.maps);
                out.push(
                    assert_cert(
                        "generated_rank",
                        &target,
                        r == rank,
                        format!("rank {r} != {rank}"),
                    )
                    .detail("rank", r),
                );
                out.push(tw.certify());
            }
            Err(e) => out.push(assert_cert("tower", g.name(), false, e.to_string())),
        }
    }
    out
}

fn c10() -> Vec<Certificate> {
    let aff = entry("aff_r", &[]);
    let mut out = Vec::new();
    for (key, closed) in [("lsa", true), ("ad", false)] {
        match cotangent(&aff.algebra, &aff.connections[key]) {
            Ok((t, omega)) => {
                let c = check_closed(&t, &omega).detail("connection", key);
                if closed {
                    out.push(c);
                } else {
                    let triple = c.witnesses.first().is_some_and(|w| w.indices.len() == 3);
                    out.push(assert_cert(
                        "witness_triple",
                        t.name(),
                        triple,
                        "no dΩ witness triple",
                    ));
                    out.push(negated(c, "not_closed"));
                }
            }
            Err(e) => out.push(assert_cert(
                "cotangent",
                aff.algebra.name(),
                false,
                e.to_string(),
            )),
        }
    }
    out
}

fn c11() -> Vec<Certificate> {
    let e = entry("e2", &[]);
    let g = &e.algebra;
    let b: &BilinearForm = &e.forms["B"];
    let mut out = Vec::new();
    match levi_civita(g, b) {
        Ok(nabla) => {
            out.push(check_representation(g, &nabla).with_check("flat"));
            out.push(check_torsion_free(g, &nabla));
            let psi = LinearMap::endo(b.matrix().clone(), g.name());
            out.push(check_self_dual(g.name(), &nabla, &psi));
        }
        Err(err) => out.push(assert_cert("levi_civita", g.name(), false, err.to_string())),
    }
    out.push(pseudo_kahler_verify(g, b));
    out
}

/// Every `(algebra, J)` pair the suite touches, including the non-integrable
/// `K` on `T_ad aff(ℝ)`.
pub fn suite_members() -> Vec<(String, LieAlgebra, AlmostComplex)> {
    let mut out = Vec::new();
    let mut add = |e: &CatalogEntry, key: &str| {
        out.push((
            format!("{} {key}", e.name),
            e.algebra.clone(),
            e.complex[key].clone(),
        ));
    };
    for (name, params) in [
        ("euclid", &[3][..]),
        ("euclid", &[4]),
        ("euclid", &[5]),
        ("euclid", &[6]),
        ("euclid", &[7]),
        ("poincare", &[0]),
        ("poincare", &[1]),
        ("galilean", &[]),
        ("sl2c", &[]),
        ("aff_rn", &[2]),
        ("gl", &[2]),
        ("aff_c1", &[]),
    ] {
        add(&entry(name, params), "J");
    }
    let cs = entry("cor_sam", &[]);
    add(&cs, "J_plus");
    add(&cs, "J_minus");
    for (label, g, nabla, _) in teo2_corpus() {
        if let Ok(t) = tangent(&g, &nabla) {
            out.push((format!("T({label}) K"), t, canonical_k(g.dim())));
        }
    }
    let so31 = entry("so_p1", &[3]);
    out.push((
        "so(3,1) J".into(),
        so31.algebra.clone(),
        catalog::contraction_frame().j_so31,
    ));
    out
}

fn c12() -> Vec<Certificate> {
    let mut out = Vec::new();
    let mut negatives = 0;
    for (label, g, j) in suite_members() {
        let full = check_integrable(&g, &j);
        if !full.pass {
            negatives += 1;
        }
        let split = check_integrable_split(&g, &j, &half_basis(&j), true);
        let agree = split
            .details
            .get("agrees_with_full_sweep")
            .and_then(|v| v.as_bool())
            == Some(true);
        out.push(
            assert_cert(
                "half_basis_agrees",
                &label,
                agree,
                "half-basis verdict disagrees",
            )
            .detail("verdict", full.pass),
        );
        let eig = eigenspace_split(&g, &j);
        out.push(assert_cert(
            "eigenspace_agrees",
            &label,
            eig.closed() == full.pass,
            format!("eigenspace closure {} vs N_J {}", eig.closed(), full.pass),
        ));
    }
    out.push(
        assert_cert(
            "negative_controls",
            "suite",
            negatives > 0,
            "no non-integrable member",
        )
        .detail("count", negatives),
    );
    for (name, params) in SAMPLES {
        let ident = catalog_ident(name, params);
        let e = entry(name, params);
        let text = emit_catalog_dsl(&e, &ident);
        let ok = match parse(&text) {
            Ok(ws) => {
                ws.to_dsl() == text
                    && ws
                        .algebra(&ident)
                        .is_some_and(|a| a.same_structure(&e.algebra))
            }
            Err(_) => false,
        };
        out.push(assert_cert(
            "dsl_round_trip",
            &ident,
            ok,
            "re-emitted text differs",
        ));
    }
    let e23 = entry("euclid", &[23]);
    out.push(
        timed("timing_e23", &e23.name, Duration::from_secs(60), || {
            integrable(&e23)
        })
        .detail("dim", e23.algebra.dim()),
    );
    out
}
