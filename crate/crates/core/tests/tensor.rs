use cablefloer_core::cfa::{Bounds, Closure, Gen, Lookup, Pattern};
use cablefloer_core::tensor::{box_tensor, cable_rectangle_figure, verify_d_squared, ChainComplex};
use cablefloer_core::typed::{rectangle_cfd, solid_torus_cfd, TypeDModule};
use cablefloer_core::{ComputeError, Idempotent};

const GOLDEN: &str = include_str!("data/cable2_rectangle.json");

fn closure(pattern: Pattern, max_n: usize, max_uv: u32) -> Closure {
    let bounds = Bounds { max_uv, max_w: max_uv, max_len: max_n + 2 * max_uv as usize };
    Closure::generate(pattern, bounds).unwrap()
}

#[test]
fn golden_p2_matches_recomputation() {
    let golden = ChainComplex::from_json(GOLDEN).unwrap();
    let c = box_tensor(&closure(Pattern::Cable(2), 8, 8), &rectangle_cfd(), 8, 8).unwrap();
    assert_eq!(c, golden);
    assert_eq!(c.to_json_pretty() + "\n", GOLDEN);
    let higher = box_tensor(&closure(Pattern::Cable(2), 10, 10), &rectangle_cfd(), 10, 10).unwrap();
    assert_eq!(higher.restricted(8), golden);
}

#[test]
fn figure_arrows_for_p2() {
    let c = ChainComplex::from_json(GOLDEN).unwrap();
    let terms = c.named_terms();
    for t in [
        ("x|x1", "x|x2", 2, 0),
        ("x|x1", "b1|y2", 1, 0),
        ("x|x1", "c1|y4", 0, 0),
        ("b1|y2", "x|x3", 0, 1),
        ("c1|y4", "x|x3", 1, 1),
        ("b1|y1", "b1|y3", 0, 2),
        ("c1|y1", "c1|y3", 0, 2),
    ] {
        assert!(terms.contains(&(t.0.into(), t.1.into(), t.2, t.3)), "{t:?}");
    }
    assert_eq!(c, cable_rectangle_figure(2).unwrap());
}

#[test]
fn cutoff_stability_small() {
    for p in 2..=3 {
        for cut in [2u32, 4, 6] {
            let low = box_tensor(&closure(Pattern::Cable(p), 6, cut), &rectangle_cfd(), 6, cut).unwrap();
            let high = box_tensor(&closure(Pattern::Cable(p), 6, cut + 2), &rectangle_cfd(), 6, cut + 2).unwrap();
            assert_eq!(high.restricted(cut), low, "p = {p}, cutoff {cut}");
            assert!(verify_d_squared(&low, cut).passed());
        }
    }
}

#[test]
fn solid_torus_pairing_squares_to_zero() {
    let c = box_tensor(&closure(Pattern::SolidTorus, 6, 2), &solid_torus_cfd(), 6, 2).unwrap();
    assert_eq!(c.generators, vec!["a|x".to_string()]);
    assert!(verify_d_squared(&c, 2).passed());
}

#[test]
fn mismatched_idempotents_give_empty_complex() {
    let d = TypeDModule::new(&[("z", Idempotent::I0)], &[]).unwrap();
    let c = box_tensor(&closure(Pattern::SolidTorus, 2, 2), &d, 2, 2).unwrap();
    assert_eq!(c.to_json(), r#"{"generators":[],"differential":[]}"#);
}

#[test]
fn insufficient_closure_is_reported() {
    let small = Closure::generate(Pattern::Cable(2), Bounds { max_uv: 4, max_w: 1, max_len: 6 }).unwrap();
    let err = box_tensor(&small, &rectangle_cfd(), 8, 4).unwrap_err();
    assert!(matches!(err, ComputeError::InsufficientClosure(_)));
}

#[test]
fn inadmissible_chord_runs_have_no_operations() {
    for p in 2..=3 {
        let c = closure(Pattern::Cable(p), 6, 6);
        for &x in c.generators() {
            for run in ["r3,r2,r1,r4", "r1,r4,r3,r2"] {
                let seq = cablefloer_core::algebra::parse_chord_list(run).unwrap();
                if seq[0].left_idempotent() != x.idempotent() {
                    continue;
                }
                for w in 0..=2 {
                    assert_eq!(c.query(x, &seq, w), Lookup::Known(Vec::new()), "{x} {run} w={w}");
                }
            }
        }
        assert!(c.generators().contains(&Gen::X));
    }
}

#[test]
fn dot_export_lists_every_term() {
    let c = cable_rectangle_figure(3).unwrap();
    let dot = c.to_dot();
    assert_eq!(dot.matches(" -> ").count(), c.differential.len());
    assert!(dot.contains("\"x|x1\" -> \"x|x2\" [label=\"U^3\"]"));
}
