use cablefloer_core::algebra::parse_chord_list;
use cablefloer_core::cfa::{move2, move3, Bounds, Closure, ModuleOp, Pattern};
use cablefloer_core::grading::{iota2, BigGrading, Enhanced, GroupElement, Grading};
use cablefloer_core::tiling::{enumerate_patterns, LabeledPattern, PlanarMap};
use cablefloer_core::{Chord, Element, Idempotent, Mode, Monomial};
use once_cell::sync::Lazy;
use proptest::prelude::*;

fn chord() -> impl Strategy<Value = Chord> {
    (1u8..=4, 1u32..=9).prop_map(|(s, l)| Chord::new(s, l).unwrap())
}

fn monomial() -> impl Strategy<Value = Monomial> {
    let basic = prop_oneof![
        chord().prop_map(Monomial::from),
        any::<bool>().prop_map(|b| Monomial::from(if b { Idempotent::I1 } else { Idempotent::I0 })),
    ];
    (0u32..4, 0u32..4, basic).prop_map(|(u, v, m)| m.shifted(u, v))
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(monomial(), 0..5).prop_map(|ms| {
        let mut e = Element::zero();
        for m in ms {
            e.toggle(m);
        }
        e
    })
}

/// Random words in the generators and their inverses.
fn word<G: GroupElement + 'static>(gens: Vec<G>) -> impl Strategy<Value = G> {
    let k = gens.len();
    prop::collection::vec((0..k, any::<bool>()), 0..8).prop_map(move |letters| {
        letters.into_iter().fold(G::identity(), |acc, (i, inv)| {
            acc.mul(if inv { gens[i].inv() } else { gens[i] })
        })
    })
}

fn small_gradings() -> Vec<Grading> {
    let mut g = vec![Grading::lambda(), Grading::u()];
    g.extend((1..=4).map(|i| Grading::chord(Chord::rho(i))));
    g
}

fn big_gradings() -> Vec<BigGrading> {
    let mut g = vec![BigGrading::lambda(), BigGrading::lambda_w(), BigGrading::u()];
    g.extend((1..=4).map(BigGrading::rho));
    g
}

fn enhanced_gradings() -> Vec<Enhanced> {
    let mut g: Vec<Enhanced> = big_gradings().into_iter().map(Enhanced::lift).collect();
    g.extend([Enhanced::u(), Enhanced::v()]);
    g
}

fn axioms<G: GroupElement>(a: G, b: G, c: G, lambda: G) {
    assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
    assert_eq!(a.mul(G::identity()), a);
    assert_eq!(G::identity().mul(a), a);
    assert_eq!(a.mul(a.inv()), G::identity());
    assert_eq!(a.inv().mul(a), G::identity());
    assert_eq!(a.mul(lambda), lambda.mul(a));
}

proptest! {
    #[test]
    fn small_grading_group_axioms(a in word(small_gradings()), b in word(small_gradings()), c in word(small_gradings())) {
        axioms(a, b, c, Grading::lambda());
        prop_assert!(a.is_member());
    }

    #[test]
    fn big_grading_group_axioms(a in word(big_gradings()), b in word(big_gradings()), c in word(big_gradings())) {
        axioms(a, b, c, BigGrading::lambda());
    }

    #[test]
    fn enhanced_group_axioms(a in word(enhanced_gradings()), b in word(enhanced_gradings()), c in word(enhanced_gradings())) {
        axioms(a, b, c, Enhanced::lift(BigGrading::lambda()));
    }

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn multiplication_distributes(a in element(), b in element(), c in element()) {
        let mut sum = b.clone();
        sum.add_assign_element(&c);
        let mut split = a.multiply(&b);
        split.add_assign_element(&a.multiply(&c));
        prop_assert_eq!(a.multiply(&sum), split);
    }

    #[test]
    fn element_text_round_trip(e in element()) {
        prop_assert_eq!(e.to_string().parse::<Element>().unwrap(), e);
    }

    #[test]
    fn chord_text_round_trip(c in chord()) {
        prop_assert_eq!(c.to_string().parse::<Chord>().unwrap(), c);
    }

    #[test]
    fn grading_text_round_trip(g in word(small_gradings())) {
        prop_assert_eq!(g.to_string().parse::<Grading>().unwrap(), g);
    }
}

static CLOSURE: Lazy<Closure> = Lazy::new(|| {
    Closure::generate(Pattern::Cable(2), Bounds { max_uv: 4, max_w: 3, max_len: 12 }).unwrap()
});

fn closure_op() -> impl Strategy<Value = ModuleOp> {
    let ops: Vec<ModuleOp> = CLOSURE.operations().cloned().collect();
    prop::sample::select(ops)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Move (2) lowers the doubled Maslov part of the chord grading by 6, and
    /// move (3) raises it by 2.
    #[test]
    fn moves_shift_iota(op in closure_op()) {
        let before = iota2(&op.chords).unwrap();
        for i in 1..op.chords.len() {
            if let Ok(next) = move2(&op, i, Mode::Plain) {
                prop_assert_eq!(iota2(&next.chords).unwrap(), before - 6, "{} at {}", op, i);
            }
        }
        for i in 2..op.chords.len() {
            if let Ok(next) = move3(&op, i) {
                prop_assert_eq!(iota2(&next.chords).unwrap(), before + 2, "{} at {}", op, i);
            }
        }
    }
}

static PATTERNS: Lazy<Vec<LabeledPattern>> = Lazy::new(|| {
    [
        "r4,r3,r2,r1",
        "r34,r3,r2,r1",
        "r412,r1,r4,r3",
        "r1,r4,r34,r3,r2,r12",
        "r4,r3,r23,r2,r1,r41",
        "r412,r12,r1,r4,r34,r3",
    ]
        .iter()
        .flat_map(|s| enumerate_patterns(&parse_chord_list(s).unwrap()))
        .collect()
});

/// Rebuild `p` with vertices renumbered by `perm_v`, edges renumbered by
/// `perm_e`, and edge `e` reversed when `flip[e]` is set.
fn relabel(p: &LabeledPattern, perm_v: &[usize], perm_e: &[usize], flip: &[bool]) -> LabeledPattern {
    let map = p.map();
    let dart = |d: usize| 2 * perm_e[d / 2] + ((d % 2) ^ usize::from(flip[d / 2]));
    let mut edges = vec![(0, 0); map.edge_count()];
    for e in 0..map.edge_count() {
        let (a, b) = (perm_v[map.tail(2 * e)], perm_v[map.head(2 * e)]);
        edges[perm_e[e]] = if flip[e] { (b, a) } else { (a, b) };
    }
    let mut rotation = vec![Vec::new(); map.vertex_count()];
    for v in 0..map.vertex_count() {
        rotation[perm_v[v]] = map.rotation(v).iter().map(|&d| dart(d)).collect();
    }
    let boundary = map.boundary().iter().map(|&v| perm_v[v]).collect();
    let mut labels = vec![None; map.dart_count()];
    for d in 0..map.dart_count() {
        labels[dart(d)] = p.corner_label(d);
    }
    let rebuilt = PlanarMap::new(map.vertex_count(), &edges, rotation, boundary).unwrap();
    LabeledPattern::new(rebuilt, labels, p.kind())
}

fn renumbered_pattern() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>, Vec<bool>)> {
    assert!(!PATTERNS.is_empty());
    (0..PATTERNS.len()).prop_flat_map(|i| {
        let (nv, ne) = (PATTERNS[i].map().vertex_count(), PATTERNS[i].map().edge_count());
        (
            Just(i),
            Just((0..nv).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..ne).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), ne),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_numbering((i, perm_v, perm_e, flip) in renumbered_pattern()) {
        let p = &PATTERNS[i];
        let q = relabel(p, &perm_v, &perm_e, &flip);
        prop_assert_eq!(q.canonical_form(), p.canonical_form());
        prop_assert_eq!(q.chord_sequence().unwrap(), p.chord_sequence().unwrap());
        prop_assert_eq!(q.output().unwrap(), p.output().unwrap());
    }
}

#[test]
fn property_inputs_are_not_vacuous() {
    let mut fired = (0, 0);
    for op in CLOSURE.operations() {
        fired.0 += (1..op.chords.len()).filter(|&i| move2(op, i, Mode::Plain).is_ok()).count();
        fired.1 += (2..op.chords.len()).filter(|&i| move3(op, i).is_ok()).count();
    }
    assert!(fired.0 > 0 && fired.1 > 0, "{fired:?}");
    assert!(PATTERNS.len() == 6, "{}", PATTERNS.len());
}
