use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{Arg, Binding, Item, Kind, Value, Workspace};
use crate::catalog::Decomposition;
use crate::constructions::{
    aff_algebra, central_extension, cotangent, eigenspace_split, semidirect, tangent,
};
use crate::lie::{
    check_abelian_complex, check_closed, check_complex_lie, check_integrable_endo,
    check_integrable_split, check_jacobi, check_metric, check_nondegenerate, check_parallel_endo,
    check_parallel_form, check_product_structure, check_representation, check_subalgebra,
    check_symplectic, check_torsion_free, half_basis, AlmostComplex, BilinearForm, Certificate,
    Connection, LieAlgebra, LinearMap, Witness,
};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::structures::{
    check_holomorphic, check_self_dual, check_teo1, dual_structure, hypercomplex_from, jplus,
    levi_civita, nabla1, pseudo_kahler_verify, psi_symplectic_verify, reconstruct_from_cps,
    teo2_verify, tower,
};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads for independent checks; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub input_hash: String,
    pub certificates: Vec<Certificate>,
    pub all_pass: bool,
}

impl Report {
    pub fn new(input_hash: String, certificates: Vec<Certificate>) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            tool: "lieforge".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input_hash,
            all_pass: certificates.iter().all(|c| c.pass),
            certificates,
        }
    }

    /// 0 when every check passes, 2 when any precondition failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self
            .certificates
            .iter()
            .any(Certificate::has_precondition_failure)
        {
            2
        } else if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with all timing fields zeroed.
    pub fn to_json_stable(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.certificates {
            c.strip_timing();
        }
        r.to_json()
    }

    pub fn emit_json(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }

    /// One line per certificate, with the first witness of failures.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.certificates {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {} {}", c.check, c.target));
            if let Some(p) = &c.precondition {
                out.push_str(&format!(" (precondition: {p})"));
            }
            if let Some(w) = first_witness(c) {
                out.push_str(&format!(
                    " witness {:?} defect [{}]",
                    w.indices,
                    w.defect.join(", ")
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn first_witness(c: &Certificate) -> Option<&Witness> {
    if c.pass {
        return None;
    }
    c.witnesses.first()
}

/// Executes the check queue in order. Constructions that failed while
/// parsing appear as failing certificates at their position.
pub fn run(ws: &Workspace, opts: &RunOptions) -> Report {
    let jobs: Vec<&Item> = ws
        .items
        .iter()
        .filter(|i| match i {
            Item::Check { .. } => true,
            Item::Construct { name, .. } => {
                matches!(ws.bindings.get(name), Some(Binding { value: Err(_), .. }))
            }
            Item::Define { .. } => false,
        })
        .collect();
    let eval = |item: &&Item| match item {
        Item::Check { check, args, .. } => run_check(ws, check, args),
        Item::Construct { name, op, .. } => {
            let msg = match &ws.bindings[name].value {
                Err(e) => e.clone(),
                Ok(_) => String::new(),
            };
            Certificate::precondition_failure(
                format!("construct_{op}"),
                name,
                msg,
                None,
                Instant::now(),
            )
        }
        Item::Define { .. } => unreachable!("filtered"),
    };
    let certificates = match opts.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| jobs.par_iter().map(eval).collect()),
            Err(_) => jobs.iter().map(eval).collect(),
        },
        None => jobs.par_iter().map(eval).collect(),
    };
    Report::new(ws.input_hash.clone(), certificates)
}

fn value<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a Value, String> {
    match arg {
        Arg::Name(n, _) => match ws.bindings.get(n) {
            Some(Binding { value: Ok(v), .. }) => Ok(v),
            Some(Binding { value: Err(e), .. }) => Err(format!("`{n}` is unavailable: {e}")),
            None => Err(format!("`{n}` is not defined")),
        },
        Arg::Int(..) => Err("expected a name".into()),
    }
}

fn name(arg: &Arg) -> String {
    arg.to_string()
}

fn int(arg: &Arg) -> Result<usize, String> {
    match arg {
        Arg::Int(k, _) => Ok(*k),
        Arg::Name(n, _) => Err(format!("expected an integer, found `{n}`")),
    }
}

fn alg<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a LieAlgebra, String> {
    match value(ws, arg)? {
        Value::Algebra(a) => Ok(a),
        v => Err(format!("`{arg}` is a {}", v.kind())),
    }
}

fn endo<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a Matrix<Scalar>, String> {
    match value(ws, arg)? {
        Value::Endo(m) => Ok(m),
        v => Err(format!("`{arg}` is a {}", v.kind())),
    }
}

fn complex(ws: &Workspace, arg: &Arg) -> Result<AlmostComplex, String> {
    AlmostComplex::new(endo(ws, arg)?.clone()).map_err(|e| format!("`{arg}`: {e}"))
}

fn conn<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a Connection, String> {
    match value(ws, arg)? {
        Value::Conn(c) => Ok(c),
        v => Err(format!("`{arg}` is a {}", v.kind())),
    }
}

fn form<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a BilinearForm, String> {
    match value(ws, arg)? {
        Value::Form(f) => Ok(f),
        v => Err(format!("`{arg}` is a {}", v.kind())),
    }
}

fn decomp<'a>(ws: &'a Workspace, arg: &Arg) -> Result<&'a Decomposition, String> {
    match value(ws, arg)? {
        Value::Decomp(d) => Ok(d),
        v => Err(format!("`{arg}` is a {}", v.kind())),
    }
}

fn check_dim(what: &Arg, found: usize, expected: usize) -> Result<(), String> {
    if found == expected {
        Ok(())
    } else {
        Err(format!(
            "`{what}` has dimension {found}, expected {expected}"
        ))
    }
}

fn run_check(ws: &Workspace, check: &str, args: &[Arg]) -> Certificate {
    let start = Instant::now();
    let target = args
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    match eval_check(ws, check, args) {
        Ok(c) => c,
        Err(msg) => Certificate::precondition_failure(check, target, msg, None, start),
    }
}

fn eval_check(ws: &Workspace, check: &str, a: &[Arg]) -> Result<Certificate, String> {
    Ok(match check {
        "jacobi" => check_jacobi(alg(ws, &a[0])?),
        "integrable" => {
            let g = alg(ws, &a[0])?;
            let m = endo(ws, &a[1])?;
            check_dim(&a[1], m.rows(), g.dim())?;
            check_integrable_endo(g, m)
        }
        "integrable_half" => {
            let g = alg(ws, &a[0])?;
            let j = complex(ws, &a[1])?;
            check_dim(&a[1], j.dim(), g.dim())?;
            check_integrable_split(g, &j, &half_basis(&j), true)
        }
        "eigenspace" => {
            let g = alg(ws, &a[0])?;
            let j = complex(ws, &a[1])?;
            check_dim(&a[1], j.dim(), g.dim())?;
            eigenspace_split(g, &j).closure
        }
        "abelian_complex" => check_abelian_complex(alg(ws, &a[0])?, &complex(ws, &a[1])?),
        "complex_lie" => check_complex_lie(alg(ws, &a[0])?, &complex(ws, &a[1])?),
        "product_structure" => check_product_structure(alg(ws, &a[0])?, endo(ws, &a[1])?),
        "representation" => check_representation(alg(ws, &a[0])?, conn(ws, &a[1])?),
        "torsion_free" => {
            let g = alg(ws, &a[0])?;
            let c = conn(ws, &a[1])?;
            check_dim(&a[1], c.module_dim(), g.dim())?;
            check_torsion_free(g, c)
        }
        "closed" => check_closed(alg(ws, &a[0])?, form(ws, &a[1])?),
        "nondegenerate" => check_nondegenerate(&name(&a[0]), form(ws, &a[0])?),
        "symplectic" => check_symplectic(alg(ws, &a[0])?, form(ws, &a[1])?),
        "parallel" => check_parallel_endo(&name(&a[0]), conn(ws, &a[0])?, endo(ws, &a[1])?),
        "parallel_form" => check_parallel_form(&name(&a[0]), conn(ws, &a[0])?, form(ws, &a[1])?),
        "metric" => check_metric(alg(ws, &a[0])?, conn(ws, &a[1])?, form(ws, &a[2])?),
        "subalgebra" => {
            let g = alg(ws, &a[0])?;
            let d = decomp(ws, &a[1])?;
            let c0 = check_subalgebra("part0_subalgebra", g, &d.part0);
            let c1 = check_subalgebra("part1_subalgebra", g, &d.part1);
            Certificate::composite("subalgebra", g.name(), vec![c0, c1], Instant::now())
        }
        "j_stable" => {
            let g = alg(ws, &a[0])?;
            decomp(ws, &a[2])?.check_stable(g.name(), g.dim(), &complex(ws, &a[1])?)
        }
        "teo1" => check_teo1(
            alg(ws, &a[0])?,
            conn(ws, &a[1])?,
            &complex(ws, &a[2])?,
            &complex(ws, &a[3])?,
            decomp(ws, &a[4])?,
        ),
        "teo2" => teo2_verify(alg(ws, &a[0])?, conn(ws, &a[1])?),
        "reconstruct" => {
            let u = alg(ws, &a[0])?;
            let k = complex(ws, &a[1])?;
            let d = decomp(ws, &a[2])?;
            let mut part = Vec::new();
            for v in &d.part0 {
                match v.as_slice() {
                    [(i, c)] if *c == Scalar::from(1) => part.push(*i),
                    _ => return Err(format!("`{}` part0 must list basis elements", a[2])),
                }
            }
            reconstruct_from_cps(u, &k, &part).certificate
        }
        "hypercomplex" => {
            let g = alg(ws, &a[0])?;
            match hypercomplex_from(g, conn(ws, &a[1])?, &complex(ws, &a[2])?) {
                Ok((_, c)) => c,
                Err(e) => return Err(e.to_string()),
            }
        }
        "tower" => {
            let g = alg(ws, &a[0])?;
            let tw = tower(g, conn(ws, &a[1])?, int(&a[2])?).map_err(|e| e.to_string())?;
            let dims: Vec<usize> = tw.levels.iter().map(|l| l.algebra.dim()).collect();
            tw.certify().detail("dims", dims)
        }
        "self_dual" => {
            let psi = LinearMap::endo(endo(ws, &a[1])?.clone(), name(&a[0]));
            check_self_dual(&name(&a[0]), conn(ws, &a[0])?, &psi)
        }
        "psi_symplectic" => {
            let psi = LinearMap::endo(endo(ws, &a[2])?.clone(), name(&a[0]));
            psi_symplectic_verify(alg(ws, &a[0])?, conn(ws, &a[1])?, &psi)
        }
        "levi_civita" => {
            let g = alg(ws, &a[0])?;
            let b = form(ws, &a[1])?;
            let nabla = levi_civita(g, b).map_err(|e| e.to_string())?;
            check_metric(g, &nabla, b).with_check("levi_civita")
        }
        "pseudo_kahler" => pseudo_kahler_verify(alg(ws, &a[0])?, form(ws, &a[1])?),
        "holomorphic" => {
            let Value::Map { map, from, to } = value(ws, &a[0])? else {
                return Err(format!("`{}` is not a map", a[0]));
            };
            let dom = ws
                .algebra(from)
                .ok_or_else(|| format!("`{from}` is unavailable"))?;
            let cod = ws
                .algebra(to)
                .ok_or_else(|| format!("`{to}` is unavailable"))?;
            check_holomorphic(dom, cod, map, &complex(ws, &a[1])?, &complex(ws, &a[2])?)
        }
        "associative" => match value(ws, &a[0])? {
            Value::Assoc(p) => p.check_associative(),
            v => return Err(format!("`{}` is a {}", a[0], v.kind())),
        },
        _ => return Err(format!("unknown check `{check}`")),
    })
}

/// Outputs of `construct NAME = op(args)`: the bindings it introduces, each
/// holding either the value or the reason it could not be built.
pub(crate) fn construct(
    ws: &Workspace,
    name: &str,
    op: &str,
    args: &[Arg],
) -> Vec<(String, Binding)> {
    let kinds: Vec<(String, Kind)> = match op {
        "tangent" => vec![
            (name.into(), Kind::Algebra),
            (format!("{name}.K"), Kind::Endo),
        ],
        "cotangent" => vec![
            (name.into(), Kind::Algebra),
            (format!("{name}.omega"), Kind::Form),
        ],
        "aff" => vec![
            (name.into(), Kind::Algebra),
            (format!("{name}.K"), Kind::Endo),
            (format!("{name}.nabla"), Kind::Conn),
        ],
        "tower" => {
            let m = args.get(2).and_then(|a| int(a).ok()).unwrap_or(0);
            let mut v = vec![
                (name.into(), Kind::Algebra),
                (format!("{name}.nabla"), Kind::Conn),
            ];
            v.extend((1..=m).map(|k| (format!("{name}.J{k}"), Kind::Endo)));
            v
        }
        "semidirect" | "central_ext" => vec![(name.into(), Kind::Algebra)],
        "nabla1" | "levi_civita" | "ad" => vec![(name.into(), Kind::Conn)],
        _ => vec![(name.into(), Kind::Endo)],
    };
    let base = match op {
        "nabla1" | "levi_civita" | "ad" => args.first().map(ToString::to_string),
        "jplus" | "jminus" | "dual" => args
            .first()
            .and_then(|a| ws.bindings.get(&a.to_string()))
            .and_then(|b| b.on.clone()),
        _ => None,
    };
    let on = |n: &str| {
        if n == name {
            base.clone()
        } else {
            Some(name.to_string())
        }
    };
    let values = build(ws, name, op, args);
    kinds
        .into_iter()
        .enumerate()
        .map(|(k, (n, kind))| {
            let value = match &values {
                Ok(vs) => Ok(vs[k].clone()),
                Err(e) => Err(e.clone()),
            };
            let on = on(&n);
            (n, Binding { kind, value, on })
        })
        .collect()
}

fn build(ws: &Workspace, name: &str, op: &str, a: &[Arg]) -> Result<Vec<Value>, String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    Ok(match op {
        "semidirect" => {
            let g = alg(ws, &a[0])?;
            let rho = conn(ws, &a[1])?;
            let labels = (1..=rho.module_dim()).map(|k| format!("v{k}")).collect();
            let s = semidirect(name, g, rho, labels).map_err(|x| e(&x))?;
            vec![Value::Algebra(s)]
        }
        "tangent" => {
            let g = alg(ws, &a[0])?;
            let c = conn(ws, &a[1])?;
            check_dim(&a[1], c.module_dim(), g.dim())?;
            let t = tangent(g, c).map_err(|x| e(&x))?.with_name(name);
            let k = crate::constructions::canonical_k::<Scalar>(g.dim());
            vec![Value::Algebra(t), Value::Endo(k.matrix().clone())]
        }
        "cotangent" => {
            let g = alg(ws, &a[0])?;
            let c = conn(ws, &a[1])?;
            check_dim(&a[1], c.module_dim(), g.dim())?;
            let (t, w) = cotangent(g, c).map_err(|x| e(&x))?;
            vec![Value::Algebra(t.with_name(name)), Value::Form(w)]
        }
        "central_ext" => vec![Value::Algebra(
            central_extension(alg(ws, &a[0])?).with_name(name),
        )],
        "aff" => {
            let p = match value(ws, &a[0])? {
                Value::Assoc(p) => p,
                v => return Err(format!("`{}` is a {}", a[0], v.kind())),
            };
            let (g, k, nabla) = aff_algebra(p).map_err(|x| e(&x))?;
            vec![
                Value::Algebra(g.with_name(name)),
                Value::Endo(k.matrix().clone()),
                Value::Conn(nabla),
            ]
        }
        "tower" => {
            let g = alg(ws, &a[0])?;
            let tw = tower(g, conn(ws, &a[1])?, int(&a[2])?).map_err(|x| e(&x))?;
            let top = tw.top();
            let mut v = vec![
                Value::Algebra(top.algebra.clone().with_name(name)),
                Value::Conn(top.nabla.clone()),
            ];
            v.extend(
                tw.family
                    .maps
                    .iter()
                    .map(|j| Value::Endo(j.matrix().clone())),
            );
            v
        }
        "nabla1" => vec![Value::Conn(
            nabla1(alg(ws, &a[0])?, conn(ws, &a[1])?).map_err(|x| e(&x))?,
        )],
        "jplus" | "jminus" => {
            let j = complex(ws, &a[0])?;
            let i = complex(ws, &a[1])?;
            vec![Value::Endo(jplus(&j, &i, op == "jplus").matrix().clone())]
        }
        "dual" => vec![Value::Endo(
            dual_structure(&complex(ws, &a[0])?).matrix().clone(),
        )],
        "levi_civita" => vec![Value::Conn(
            levi_civita(alg(ws, &a[0])?, form(ws, &a[1])?).map_err(|x| e(&x))?,
        )],
        "ad" => vec![Value::Conn(Connection::ad(alg(ws, &a[0])?))],
        _ => return Err(format!("unknown construction `{op}`")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::dsl::{emit_catalog_dsl, parse};
    use crate::lie::nijenhuis_sparse;
    use crate::linalg::sparse;

    const AFF1: &str = "algebra aff1 {\n  basis x y\n  [x,y] = y\n}\n\
                        conn adconn on aff1 {\n  x => matrix [[0, 0], [0, 1]]\n  y => matrix [[0, 0], [-1, 0]]\n}\n";

    fn run_text(text: &str) -> Report {
        run(&parse(text).unwrap(), &RunOptions::default())
    }

    #[test]
    fn euclid3_integrable() {
        let e = catalog::euclid(3).unwrap();
        let text = emit_catalog_dsl(&e, "e3") + "check integrable(e3_J)\n";
        let r = run_text(&text);
        assert_eq!(r.certificates.len(), 1);
        assert!(r.all_pass);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn teo2_on_ad_has_both_sides_false() {
        let r = run_text(&format!("{AFF1}check teo2(aff1, adconn)"));
        let c = &r.certificates[0];
        assert!(c.pass);
        assert_eq!(c.details["k_integrable"], false);
        assert_eq!(c.details["torsion_free"], false);
    }

    #[test]
    fn empty_queue() {
        let r = run_text("algebra a { basis x }");
        assert!(r.certificates.is_empty());
        assert_eq!(r.exit_code(), 0);
        assert!(r.to_json().contains("\"schema\": 1"));
    }

    #[test]
    fn failing_witness_matches_recomputation() {
        let text = "algebra g {\n  basis a b c d\n  [a,b] = c\n  [a,c] = d\n}\n\
                    endo J on g {\n  a -> b\n  b -> -a\n  c -> d\n  d -> -c\n}\n\
                    check integrable(g, J)\n";
        let ws = parse(text).unwrap();
        let r = run(&ws, &RunOptions::default());
        assert_eq!(r.exit_code(), 1);
        let c = &r.certificates[0];
        assert!(!c.pass);
        let w = &c.witnesses[0];
        let g = ws.algebra("g").unwrap();
        let Some(Binding {
            value: Ok(Value::Endo(m)),
            ..
        }) = ws.get("J")
        else {
            panic!()
        };
        let j = AlmostComplex::new(m.clone()).unwrap();
        let n = nijenhuis_sparse(
            g,
            &j,
            &sparse::unit(w.indices[0]),
            &sparse::unit(w.indices[1]),
        );
        let dense = sparse::to_dense(&n, 4);
        assert_eq!(
            w.defect,
            dense.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
    }

    #[test]
    fn failed_construction_is_a_precondition_certificate() {
        let bad = "conn bad on aff1 {\n  y => matrix [[1, 0], [0, 0]]\n}\n";
        let r = run_text(&format!(
            "{AFF1}{bad}construct t = tangent(aff1, bad)\ncheck jacobi(t)"
        ));
        assert_eq!(r.certificates.len(), 2);
        assert!(r
            .certificates
            .iter()
            .all(|c| !c.pass && c.precondition.is_some()));
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn output_is_deterministic_across_thread_counts() {
        let e = catalog::euclid(4).unwrap();
        let text = emit_catalog_dsl(&e, "e4")
            + "check integrable(e4_J)\ncheck jacobi(e4)\ncheck integrable_half(e4, e4_J)\n";
        let ws = parse(&text).unwrap();
        let a = run(&ws, &RunOptions { threads: Some(1) }).to_json_stable();
        let b = run(&ws, &RunOptions { threads: Some(4) }).to_json_stable();
        assert_eq!(a, b);
    }

    #[test]
    fn text_report_lines() {
        let r = run_text(&format!(
            "{AFF1}check teo2(aff1, adconn)\ncheck torsion_free(aff1, adconn)"
        ));
        let t = r.to_text();
        assert!(t.starts_with("PASS teo2"));
        assert!(t.lines().nth(1).unwrap().starts_with("FAIL torsion_free"));
        assert!(t.contains("witness"));
    }
}
