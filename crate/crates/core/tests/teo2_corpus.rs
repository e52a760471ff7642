//! `K` on `T_∇ g` is integrable exactly when `∇` is torsion-free, over a
//! corpus of flat connections; torsion-free entries also reconstruct.

use lieforge::catalog::{self, lookup};
use lieforge::constructions::{aff_algebra, AssociativeAlgebra};
use lieforge::lie::{check_representation, check_torsion_free, Connection, LieAlgebra};
use lieforge::linalg::{sparse, Matrix};
use lieforge::scalar::Scalar;
use lieforge::structures::{levi_civita, nabla1, teo2_verify};
use lieforge::suite::{round_trip, teo2_corpus};

fn upper_triangular_2x2() -> AssociativeAlgebra {
    // a = e11, b = e12, c = e22
    let u = sparse::unit::<Scalar>;
    AssociativeAlgebra::new(
        "t2",
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            ((0, 0), u(0)),
            ((0, 1), u(1)),
            ((1, 2), u(1)),
            ((2, 2), u(2)),
        ],
    )
    .unwrap()
}

fn corpus() -> Vec<(String, LieAlgebra, Connection)> {
    let mut out: Vec<_> = teo2_corpus()
        .into_iter()
        .map(|(l, g, c, _)| (l, g, c))
        .collect();
    let gl2 = lookup("gl", &[2]).unwrap();
    let gl3 = lookup("gl", &[3]).unwrap();
    out.push((
        "gl(2), ad".into(),
        gl2.algebra.clone(),
        gl2.connections["ad"].clone(),
    ));
    out.push((
        "gl(3), left multiplication".into(),
        gl3.algebra.clone(),
        gl3.connections["left_mult"].clone(),
    ));
    out.push((
        "gl(3), ad".into(),
        gl3.algebra.clone(),
        gl3.connections["ad"].clone(),
    ));
    let n1 = nabla1(&gl2.algebra, &gl2.connections["left_mult"]).unwrap();
    let t = lieforge::constructions::tangent(&gl2.algebra, &gl2.connections["left_mult"]).unwrap();
    out.push(("T gl(2), nabla1".into(), t.clone(), n1));
    out.push(("T gl(2), ad".into(), t.clone(), Connection::ad(&t)));
    let affc = catalog::aff_c1().unwrap();
    out.push((
        "aff(C), nabla".into(),
        affc.algebra.clone(),
        affc.connections["nabla"].clone(),
    ));
    let (g, _, nabla) = aff_algebra(&upper_triangular_2x2()).unwrap();
    out.push(("aff(t2), nabla".into(), g.clone(), nabla));
    out.push(("aff(t2), ad".into(), g.clone(), Connection::ad(&g)));
    let e2 = lookup("e2", &[]).unwrap();
    let lc = levi_civita(&e2.algebra, &e2.forms["B"]).unwrap();
    out.push(("e(2), Levi-Civita".into(), e2.algebra.clone(), lc));
    let so3 = lookup("so", &[3]).unwrap();
    out.push((
        "so(3), ad".into(),
        so3.algebra.clone(),
        Connection::ad(&so3.algebra),
    ));
    let r3 = LieAlgebra::abelian("R3", vec!["x".into(), "y".into(), "z".into()]).unwrap();
    let mut m = Matrix::zeros(3, 3);
    m.set(2, 0, Scalar::from(1));
    let nil = Connection::new(vec![m, Matrix::zeros(3, 3), Matrix::zeros(3, 3)], 3).unwrap();
    out.push(("R^3, nabla_x x = z".into(), r3, nil));
    out
}

#[test]
fn corpus_is_large_and_flat() {
    let c = corpus();
    assert!(c.len() >= 10);
    for (label, g, nabla) in &c {
        assert!(check_representation(g, nabla).pass, "{label} is not flat");
    }
}

#[test]
fn both_sides_agree_on_every_entry() {
    let mut seen = [0usize; 2];
    for (label, g, nabla) in corpus() {
        let c = teo2_verify(&g, &nabla);
        assert!(c.pass, "{label}: {c:?}");
        let tf = check_torsion_free(&g, &nabla).pass;
        assert_eq!(c.details["torsion_free"], tf, "{label}");
        assert_eq!(c.details["k_integrable"], tf, "{label}");
        seen[tf as usize] += 1;
    }
    assert!(
        seen[0] >= 3 && seen[1] >= 3,
        "corpus lacks one side: {seen:?}"
    );
}

#[test]
fn torsion_free_entries_reconstruct() {
    for (label, g, nabla) in corpus() {
        if check_torsion_free(&g, &nabla).pass {
            let c = round_trip(&label, &g, &nabla);
            assert!(c.pass, "{label}: {c:?}");
        }
    }
}
