use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};

use super::{Binding, Item, Value, Workspace};
use crate::catalog::{CatalogEntry, Decomposition};
use crate::constructions::AssociativeAlgebra;
use crate::lie::{format_terms, BilinearForm, Connection, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

fn matrix(m: &Matrix<Scalar>) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    format!("matrix [{}]", rows.join(", "))
}

fn algebra(out: &mut String, name: &str, a: &LieAlgebra) {
    let _ = writeln!(out, "algebra {name} {{");
    let _ = writeln!(out, "  basis {}", a.labels().join(" "));
    for (i, j, v) in a.structure_constants() {
        let _ = writeln!(
            out,
            "  [{},{}] = {}",
            a.label(i),
            a.label(j),
            a.format_vector(v)
        );
    }
    out.push_str("}\n");
}

fn assoc(out: &mut String, name: &str, a: &AssociativeAlgebra) {
    let _ = writeln!(out, "assoc {name} {{");
    let _ = writeln!(out, "  basis {}", a.labels().join(" "));
    let labels = a.labels();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let v = a.product_basis(i, j);
            if !v.is_empty() {
                let _ = writeln!(
                    out,
                    "  {}*{} = {}",
                    labels[i],
                    labels[j],
                    format_terms(labels, v)
                );
            }
        }
    }
    out.push_str("}\n");
}

fn endo(out: &mut String, name: &str, on: &str, labels: &[String], m: &Matrix<Scalar>) {
    let _ = writeln!(out, "endo {name} on {on} {{");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {l} -> {}",
            format_terms(labels, &m.sparse_column(i))
        );
    }
    out.push_str("}\n");
}

fn conn(
    out: &mut String,
    name: &str,
    on: &str,
    to: Option<&str>,
    labels: &[String],
    c: &Connection,
) {
    let _ = write!(out, "conn {name} on {on}");
    if let Some(t) = to {
        let _ = write!(out, " to {t}");
    }
    out.push_str(" {\n");
    let all_zero = c.values().iter().all(Matrix::is_zero);
    for (i, l) in labels.iter().enumerate() {
        let m = c.at(i);
        // an all-zero connection on a module of another size still needs one
        // matrix to fix the size
        let pin = all_zero && i == 0 && to.is_none() && c.module_dim() != labels.len();
        if !m.is_zero() || pin {
            let _ = writeln!(out, "  {l} => {}", matrix(m));
        }
    }
    out.push_str("}\n");
}

fn form(out: &mut String, name: &str, on: &str, f: &BilinearForm) {
    let _ = writeln!(
        out,
        "form {name} on {on} {} {}",
        f.kind(),
        matrix(f.matrix())
    );
}

fn decomp(out: &mut String, name: &str, on: &str, labels: &[String], d: &Decomposition) {
    let _ = writeln!(out, "decomp {name} on {on} {{");
    for (part, vs) in [("part0", &d.part0), ("part1", &d.part1)] {
        let items: Vec<String> = vs.iter().map(|v| format_terms(labels, v)).collect();
        if items.is_empty() {
            let _ = writeln!(out, "  {part}:");
        } else {
            let _ = writeln!(out, "  {part}: {}", items.join(", "));
        }
    }
    out.push_str("}\n");
}

fn labels_of(ws: &Workspace, name: &str) -> Vec<String> {
    match ws.get(name).map(|b| &b.value) {
        Some(Ok(Value::Algebra(a))) => a.labels().to_vec(),
        Some(Ok(Value::Assoc(a))) => a.labels().to_vec(),
        _ => Vec::new(),
    }
}

/// Canonical text for a parsed workspace.
pub(crate) fn workspace_dsl(ws: &Workspace) -> String {
    let mut out = String::new();
    for item in &ws.items {
        match item {
            Item::Define { name, on, to, .. } => {
                let Some(Binding { value: Ok(v), .. }) = ws.get(name) else {
                    continue;
                };
                let base = on.as_deref().unwrap_or_default();
                let labels = labels_of(ws, base);
                match v {
                    Value::Algebra(a) => algebra(&mut out, name, a),
                    Value::Assoc(a) => assoc(&mut out, name, a),
                    Value::Endo(m) => endo(&mut out, name, base, &labels, m),
                    Value::Conn(c) => conn(&mut out, name, base, to.as_deref(), &labels, c),
                    Value::Form(f) => form(&mut out, name, base, f),
                    Value::Decomp(d) => decomp(&mut out, name, base, &labels, d),
                    Value::Map { map, from, to } => {
                        let cod = labels_of(ws, to);
                        let _ = writeln!(out, "map {name} from {from} to {to} {{");
                        for (i, l) in labels_of(ws, from).iter().enumerate() {
                            let _ = writeln!(
                                out,
                                "  {l} -> {}",
                                format_terms(&cod, &map.matrix.sparse_column(i))
                            );
                        }
                        out.push_str("}\n");
                    }
                }
            }
            Item::Construct { name, op, args, .. } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "construct {name} = {op}({})", args.join(", "));
            }
            Item::Check { check, args, .. } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "check {check}({})", args.join(", "));
            }
        }
    }
    out
}

/// `euclid_3` for `euclid(3)`.
pub fn catalog_ident(name: &str, params: &[usize]) -> String {
    let mut s = name.to_string();
    for p in params {
        let _ = write!(s, "_{p}");
    }
    s
}

fn key_ident(key: &str) -> String {
    key.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// A catalog entry as a standalone workspace: the algebra under `ident` and
/// each structure under `{ident}_{key}`.
pub fn catalog_workspace(entry: &CatalogEntry, ident: &str) -> Workspace {
    let mut ws = Workspace::default();
    let push = |ws: &mut Workspace, name: String, value: Value, on: Option<String>| {
        ws.items.push(Item::Define {
            name: name.clone(),
            kind: value.kind(),
            on: on.clone(),
            to: None,
        });
        ws.bindings.insert(
            name,
            Binding {
                kind: value.kind(),
                value: Ok(value),
                on,
            },
        );
    };
    let base = Some(ident.to_string());
    push(
        &mut ws,
        ident.to_string(),
        Value::Algebra(entry.algebra.clone().with_name(ident)),
        None,
    );
    for (k, j) in &entry.complex {
        push(
            &mut ws,
            format!("{ident}_{}", key_ident(k)),
            Value::Endo(j.matrix().clone()),
            base.clone(),
        );
    }
    for (k, c) in &entry.connections {
        push(
            &mut ws,
            format!("{ident}_{}", key_ident(k)),
            Value::Conn(c.clone()),
            base.clone(),
        );
    }
    for (k, f) in &entry.forms {
        push(
            &mut ws,
            format!("{ident}_{}", key_ident(k)),
            Value::Form(f.clone()),
            base.clone(),
        );
    }
    for (k, d) in &entry.decompositions {
        push(
            &mut ws,
            format!("{ident}_{}", key_ident(k)),
            Value::Decomp(d.clone()),
            base.clone(),
        );
    }
    ws
}

pub fn emit_catalog_dsl(entry: &CatalogEntry, ident: &str) -> String {
    workspace_dsl(&catalog_workspace(entry, ident))
}

fn matrix_json(m: &Matrix<Scalar>) -> Json {
    Json::Array(
        m.to_rows()
            .iter()
            .map(|r| Json::Array(r.iter().map(|x| Json::String(x.to_string())).collect()))
            .collect(),
    )
}

/// Labels, nonzero structure constants and attached structures.
pub fn catalog_json(entry: &CatalogEntry) -> Json {
    let a = &entry.algebra;
    let brackets: Vec<Json> = a
        .structure_constants()
        .map(|(i, j, v)| {
            let terms: Map<String, Json> = v
                .iter()
                .map(|(k, c)| (a.label(*k).to_string(), Json::String(c.to_string())))
                .collect();
            json!({ "pair": [a.label(i), a.label(j)], "value": terms })
        })
        .collect();
    let complex: Map<String, Json> = entry
        .complex
        .iter()
        .map(|(k, j)| (k.clone(), matrix_json(j.matrix())))
        .collect();
    let connections: Map<String, Json> = entry
        .connections
        .iter()
        .map(|(k, c)| {
            (
                k.clone(),
                Json::Array(c.values().iter().map(matrix_json).collect()),
            )
        })
        .collect();
    let forms: Map<String, Json> = entry
        .forms
        .iter()
        .map(|(k, f)| {
            (
                k.clone(),
                json!({ "kind": f.kind().to_string(), "matrix": matrix_json(f.matrix()) }),
            )
        })
        .collect();
    json!({
        "name": entry.name,
        "dim": a.dim(),
        "labels": a.labels(),
        "brackets": brackets,
        "complex": complex,
        "connections": connections,
        "forms": forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, SAMPLES};
    use crate::dsl::parse;

    #[test]
    fn catalog_round_trip_is_byte_stable() {
        for (name, params) in SAMPLES {
            let entry = lookup(name, params).unwrap();
            let ident = catalog_ident(name, params);
            let text = emit_catalog_dsl(&entry, &ident);
            let ws = parse(&text).unwrap_or_else(|e| panic!("{ident}: {e}\n{text}"));
            assert!(
                ws.algebra(&ident).unwrap().same_structure(&entry.algebra),
                "{ident}"
            );
            assert_eq!(ws.to_dsl(), text, "{ident}");
        }
    }

    #[test]
    fn workspace_round_trip_keeps_statements() {
        let text = "algebra g {\n  basis x y\n  [x,y] = y\n}\n\
                    conn c on g {\n  x => matrix [[0, 0], [0, 1]]\n}\n\
                    construct t = tangent(g, c)\n\
                    check integrable(t, t.K)\n";
        let ws = parse(text).unwrap();
        assert_eq!(ws.to_dsl(), text);
    }

    #[test]
    fn zero_connection_on_other_module_keeps_size() {
        let text = "algebra g {\n  basis x\n}\nconn r on g {\n  x => matrix [[0, 0], [0, 0]]\n}\n";
        let ws = parse(text).unwrap();
        assert_eq!(ws.to_dsl(), text);
    }

    #[test]
    fn json_lists_brackets() {
        let v = catalog_json(&lookup("aff_r", &[]).unwrap());
        assert_eq!(v["brackets"][0]["pair"], json!(["x", "y"]));
        assert_eq!(v["brackets"][0]["value"]["y"], json!("1"));
    }
}
