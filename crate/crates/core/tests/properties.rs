//! Invariants over random almost-abelian algebras `ℝe0 ⋉_A ℝ^{n-1}` with
//! random conjugates of the standard `J`.

use proptest::prelude::*;

use lieforge::constructions::eigenspace_split;
use lieforge::dsl::{parse, Binding, Value};
use lieforge::lie::{
    check_integrable, check_integrable_split, check_jacobi, half_basis, nijenhuis_sparse,
    AlmostComplex, Connection, LieAlgebra,
};
use lieforge::linalg::{invert, sparse, Matrix};
use lieforge::scalar::Scalar;
use lieforge::structures::{generated_rank, teo2_verify, tower};

#[derive(Debug, Clone)]
struct Case {
    n: usize,
    a: Vec<i64>,
    p: Vec<i64>,
}

fn case() -> impl Strategy<Value = Case> {
    prop_oneof![Just(4usize), Just(6usize)].prop_flat_map(|n| {
        let m = n - 1;
        (
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], m * m),
            proptest::collection::vec(-2i64..=2, n * n),
        )
            .prop_map(move |(a, p)| Case { n, a, p })
    })
}

impl Case {
    fn labels(&self) -> Vec<String> {
        (0..self.n).map(|i| format!("e{i}")).collect()
    }

    fn a(&self, r: usize, c: usize) -> i64 {
        self.a[r * (self.n - 1) + c]
    }

    /// `[e0, e_i] = Σ_j A_{ji} e_j` on `e1..e_{n-1}`.
    fn source(&self) -> String {
        let labels = self.labels();
        let mut s = format!("algebra g {{\n  basis {}\n", labels.join(" "));
        for i in 1..self.n {
            let terms: Vec<String> = (1..self.n)
                .filter(|&j| self.a(j - 1, i - 1) != 0)
                .map(|j| format!("{} e{j}", self.a(j - 1, i - 1)))
                .collect();
            if !terms.is_empty() {
                s.push_str(&format!(
                    "  [e0,e{i}] = {}\n",
                    terms.join(" + ").replace("+ -", "- ")
                ));
            }
        }
        s.push_str("}\n");
        let j = self.j();
        let rows: Vec<String> = j
            .matrix()
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
        s.push_str(&format!("endo J on g matrix [{}]\n", rows.join(", ")));
        s
    }

    /// `P J0 P^{-1}` with `P` unit upper triangular, so always invertible.
    fn j(&self) -> AlmostComplex {
        let n = self.n;
        let p = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Equal => Scalar::from(1),
            std::cmp::Ordering::Less => Scalar::from(self.p[r * n + c]),
            std::cmp::Ordering::Greater => Scalar::from(0),
        });
        let mut j0 = Matrix::zeros(n, n);
        for k in 0..n / 2 {
            j0.set(2 * k + 1, 2 * k, Scalar::from(1));
            j0.set(2 * k, 2 * k + 1, Scalar::from(-1));
        }
        let inv = invert(&p).unwrap();
        AlmostComplex::new(&(&p * &j0) * &inv).unwrap()
    }

    fn is_abelian(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
}

fn build(c: &Case) -> (LieAlgebra, AlmostComplex) {
    let ws = parse(&c.source()).unwrap();
    let g = ws.algebra("g").unwrap().clone();
    let Some(Binding {
        value: Ok(Value::Endo(m)),
        ..
    }) = ws.get("J")
    else {
        panic!("J missing")
    };
    (g, AlmostComplex::new(m.clone()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn almost_abelian_satisfies_jacobi(c in case()) {
        let (g, _) = build(&c);
        prop_assert!(check_jacobi(&g).pass);
    }

    #[test]
    fn half_basis_agrees_with_full_sweep(c in case()) {
        let (g, j) = build(&c);
        let split = check_integrable_split(&g, &j, &half_basis(&j), true);
        prop_assert_eq!(split.details["agrees_with_full_sweep"].as_bool(), Some(true));
        prop_assert_eq!(split.pass, check_integrable(&g, &j).pass);
    }

    #[test]
    fn eigenspace_closure_matches_nijenhuis(c in case()) {
        let (g, j) = build(&c);
        prop_assert_eq!(eigenspace_split(&g, &j).closed(), check_integrable(&g, &j).pass);
    }

    #[test]
    fn witnesses_recompute(c in case()) {
        let (g, j) = build(&c);
        let cert = check_integrable(&g, &j);
        for w in &cert.witnesses {
            let v = nijenhuis_sparse(&g, &j, &sparse::unit(w.indices[0]), &sparse::unit(w.indices[1]));
            let dense: Vec<String> = sparse::to_dense(&v, g.dim()).iter().map(ToString::to_string).collect();
            prop_assert_eq!(&w.defect, &dense);
        }
    }

    #[test]
    fn dsl_round_trip(c in case()) {
        let ws = parse(&c.source()).unwrap();
        let text = ws.to_dsl();
        let again = parse(&text).unwrap();
        prop_assert_eq!(again.to_dsl(), text);
        prop_assert!(again.algebra("g").unwrap().same_structure(ws.algebra("g").unwrap()));
    }

    #[test]
    fn zero_connection_teo2(c in case()) {
        let (g, _) = build(&c);
        let cert = teo2_verify(&g, &Connection::zero(g.dim(), g.dim()));
        prop_assert!(cert.pass);
        prop_assert_eq!(cert.details["torsion_free"].as_bool(), Some(c.is_abelian()));
    }

    #[test]
    fn abelian_towers_reach_full_clifford_rank(k in 1usize..=3, m in 1usize..=3) {
        let labels = (0..k).map(|i| format!("x{i}")).collect();
        let g = LieAlgebra::abelian("R", labels).unwrap();
        let tw = tower(&g, &Connection::zero(k, k), m).unwrap();
        prop_assert_eq!(tw.top().algebra.dim(), k << m);
        prop_assert_eq!(generated_rank(&tw.family.maps), 1 << m);
        prop_assert!(tw.certify().pass);
    }
}
