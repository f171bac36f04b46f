use cablefloer_core::grading::Grading;
use cablefloer_core::typed::{
    cable_cfd, cable_gradings, cfdd_identity, check_structure_relation, derive_gradings, extend_hat_to_minus,
    extension_candidates, rectangle_cfd, solid_torus_cfd, solid_torus_gradings, DGrading, TypeDModule,
};
use cablefloer_core::{Mode, Monomial, TorusAlgebra};

fn arrows(m: &TypeDModule) -> Vec<(String, String, String)> {
    m.arrow_strings().into_iter().collect()
}

#[test]
fn solid_torus_arrows() {
    let m = solid_torus_cfd();
    let want = vec![("x".into(), "x".into(), "r23".into()), ("x".into(), "x".into(), "r41".into())];
    assert_eq!(arrows(&m), want);
}

#[test]
fn cable_two_instantiation() {
    let m = cable_cfd(2).unwrap();
    let names: Vec<&str> = m.generators.iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["x", "b1", "c1"]);
    let want: Vec<(String, String, String)> = [
        ("b1", "c1", "i1"),
        ("b1", "x", "r4"),
        ("c1", "b1", "r2341"),
        ("c1", "x", "r412"),
        ("x", "b1", "r123"),
        ("x", "c1", "r3"),
        ("x", "x", "r12"),
    ]
    .iter()
    .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
    .collect();
    assert_eq!(arrows(&m), want);
    assert!(cable_cfd(1).is_err());
}

#[test]
fn structure_relations_hold() {
    let alg = TorusAlgebra::new(Mode::Plain);
    let mut modules = vec![solid_torus_cfd(), rectangle_cfd()];
    modules.extend((2..=4).map(|p| cable_cfd(p).unwrap()));
    for m in &modules {
        let r = check_structure_relation(&alg, m, 8, 8);
        assert!(r.passed(), "{:?}", r.failures);
    }
}

#[test]
fn dropping_a_rho4_arrow_breaks_the_relation() {
    let alg = TorusAlgebra::new(Mode::Plain);
    let mut m = solid_torus_cfd();
    let loop41 = *m.arrows.iter().find(|a| a.coeff == "r41".parse::<Monomial>().unwrap()).unwrap();
    m.arrows.remove(&loop41);
    let r = check_structure_relation(&alg, &m, 8, 8);
    assert_eq!(r.failures.len(), 1);
    assert!(r.failures[0].1.contains("r2341"));
}

#[test]
fn gradings_are_coherent() {
    let sets = [
        (solid_torus_cfd(), solid_torus_gradings()),
        (cable_cfd(3).unwrap(), cable_gradings(3)),
        (rectangle_cfd(), derive_gradings(&rectangle_cfd()).unwrap()),
    ];
    for (m, g) in &sets {
        assert!(m.arrows.iter().all(|a| g.arrow_compatible(a)));
    }
    assert_eq!(cable_gradings(4).indeterminacy, Grading::halves(1, 2, 0));
}

#[test]
fn derived_rectangle_gradings_match_hat_derivation() {
    let full = derive_gradings(&rectangle_cfd()).unwrap();
    let hat = derive_gradings(&rectangle_cfd().hat()).unwrap();
    assert_eq!(full.gradings, hat.gradings);
}

#[test]
fn solid_torus_extension_is_unique() {
    let alg = TorusAlgebra::new(Mode::Plain);
    let m = solid_torus_cfd();
    let e = extend_hat_to_minus(&alg, &m.hat(), &solid_torus_gradings(), 8, 8).unwrap();
    assert_eq!(e.solutions, vec![m]);
    assert_eq!(e.length_cap, 6);
}

#[test]
fn extensions_contain_the_datasets() {
    let alg = TorusAlgebra::new(Mode::Plain);
    let r = rectangle_cfd();
    let e = extend_hat_to_minus(&alg, &r.hat(), &derive_gradings(&r).unwrap(), 8, 8).unwrap();
    assert!(e.solutions.contains(&r));
    for p in 2..=3 {
        let m = cable_cfd(p).unwrap();
        let e = extend_hat_to_minus(&alg, &m.hat(), &cable_gradings(p), 8, 8).unwrap();
        assert!(e.solutions.contains(&m));
        assert_eq!(e.solutions.len(), 1 << (p - 1));
    }
}

#[test]
fn candidates_respect_caps() {
    let m = cable_cfd(3).unwrap();
    let (cands, cap) = extension_candidates(&m.hat(), &cable_gradings(3), 2);
    assert_eq!(cap, 7);
    for a in &cands {
        assert!(a.coeff.u <= 2 && a.coeff.basic.len() <= cap);
        let has_four = a.coeff.basic.chord().map_or(false, |c| c.contains_four());
        assert!(has_four || a.coeff.u > 0);
    }
}

#[test]
fn json_round_trips() {
    let m = rectangle_cfd();
    assert_eq!(TypeDModule::from_json(&m.to_json()).unwrap(), m);
    let g = derive_gradings(&m).unwrap();
    assert_eq!(DGrading::from_json(&g.to_json(&m), &m).unwrap(), g);
    let bad = r#"{"generators":[{"name":"x","idem":0}],"arrows":[{"from":"x","to":"x","u":0,"chord":[1,1]}]}"#;
    assert!(TypeDModule::from_json(bad).is_err());
}

#[test]
fn schema_example_parses() {
    let text = r#"{"generators":[{"name":"x1","idem":0},{"name":"y1","idem":1}],
        "arrows":[{"from":"x1","to":"y1","u":0,"chord":[3,1]}]}"#;
    let m = TypeDModule::from_json(text).unwrap();
    assert_eq!(arrows(&m), vec![("x1".into(), "y1".into(), "r3".into())]);
    assert!(m.to_dot().contains("label=\"r3\""));
}

#[test]
fn dualizing_bimodule_data() {
    let d = cfdd_identity();
    assert_eq!(d.len(), 2);
    assert_eq!(d.iter().map(|(_, t)| t.len()).sum::<usize>(), 8);
}
