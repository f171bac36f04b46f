//! Weighted type D modules over the torus algebra: datasets, the structure
//! relation, and grading-constrained extension of hat models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Basic, Chord, Idempotent, Monomial};
use crate::error::{ComputeError, ParseError};
use crate::grading::{same_coset, GroupElement, Grading, Side};
use crate::torus::TorusAlgebra;

/// A generator with its idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DGen {
    pub name: String,
    pub idem: Idempotent,
}

/// A differential arrow `from -> coefficient (x) to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub coeff: Monomial,
}

/// A type D module given by generators and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDModule {
    pub generators: Vec<DGen>,
    pub arrows: BTreeSet<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct GenRecord {
    name: String,
    idem: u8,
}

#[derive(Serialize, Deserialize)]
struct ArrowRecord {
    from: String,
    to: String,
    u: u32,
    chord: Option<Chord>,
}

#[derive(Serialize, Deserialize)]
struct ModuleRecord {
    generators: Vec<GenRecord>,
    arrows: Vec<ArrowRecord>,
}

impl TypeDModule {
    /// Build from `(name, idempotent)` pairs and `(from, to, coefficient)`
    /// triples, checking idempotent compatibility.
    pub fn new(gens: &[(&str, Idempotent)], arrows: &[(&str, &str, Monomial)]) -> Result<TypeDModule, ComputeError> {
        let generators: Vec<DGen> = gens.iter().map(|(n, i)| DGen { name: n.to_string(), idem: *i }).collect();
        let mut m = TypeDModule { generators, arrows: BTreeSet::new() };
        for (f, t, c) in arrows {
            let (from, to) = (m.index(f)?, m.index(t)?);
            m.add_arrow(Arrow { from, to, coeff: *c })?;
        }
        Ok(m)
    }

    pub fn index(&self, name: &str) -> Result<usize, ComputeError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ComputeError::Invalid(format!("unknown generator {name}")))
    }

    pub fn add_arrow(&mut self, a: Arrow) -> Result<(), ComputeError> {
        let (f, t) = (&self.generators[a.from], &self.generators[a.to]);
        if a.coeff.basic.left_idempotent() != f.idem || a.coeff.basic.right_idempotent() != t.idem {
            return Err(ComputeError::Invalid(format!(
                "arrow {} -> {} with coefficient {} has mismatched idempotents",
                f.name, t.name, a.coeff
            )));
        }
        self.arrows.insert(a);
        Ok(())
    }

    /// Arrows as readable `(from, to, coefficient)` strings, sorted.
    pub fn arrow_strings(&self) -> BTreeSet<(String, String, String)> {
        self.arrows
            .iter()
            .map(|a| {
                (self.generators[a.from].name.clone(), self.generators[a.to].name.clone(), a.coeff.to_string())
            })
            .collect()
    }

    /// The hat truncation: arrows without U and without the label 4.
    pub fn hat(&self) -> TypeDModule {
        let arrows = self
            .arrows
            .iter()
            .filter(|a| a.coeff.u == 0 && a.coeff.basic.chord().map_or(true, |c| !c.contains_four()))
            .copied()
            .collect();
        TypeDModule { generators: self.generators.clone(), arrows }
    }

    pub fn to_json(&self) -> String {
        let rec = ModuleRecord {
            generators: self
                .generators
                .iter()
                .map(|g| GenRecord { name: g.name.clone(), idem: g.idem.index() })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowRecord {
                    from: self.generators[a.from].name.clone(),
                    to: self.generators[a.to].name.clone(),
                    u: a.coeff.u,
                    chord: a.coeff.basic.chord(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<TypeDModule, ComputeError> {
        let rec: ModuleRecord = serde_json::from_str(text).map_err(|e| ComputeError::Invalid(e.to_string()))?;
        let mut generators = Vec::new();
        for g in rec.generators {
            let idem = Idempotent::from_index(g.idem)
                .ok_or_else(|| ComputeError::Invalid(format!("bad idempotent {}", g.idem)))?;
            generators.push(DGen { name: g.name, idem });
        }
        let mut m = TypeDModule { generators, arrows: BTreeSet::new() };
        for a in rec.arrows {
            let (from, to) = (m.index(&a.from)?, m.index(&a.to)?);
            let basic = match a.chord {
                Some(c) => Basic::Chord(c),
                None => Basic::Idem(m.generators[from].idem),
            };
            m.add_arrow(Arrow { from, to, coeff: Monomial::new(a.u, 0, basic) })?;
        }
        Ok(m)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph typed {\n");
        for g in &self.generators {
            let _ = writeln!(s, "  \"{}\" [label=\"{} ({})\"];", g.name, g.name, g.idem);
        }
        for a in &self.arrows {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.generators[a.from].name, self.generators[a.to].name, a.coeff
            );
        }
        s.push_str("}\n");
        s
    }
}

fn mono(s: &str) -> Monomial {
    s.parse().expect("built-in monomial")
}

/// CFD of the 0-framed solid torus: one generator with loops r23 and r41.
pub fn solid_torus_cfd() -> TypeDModule {
    TypeDModule::new(&[("x", Idempotent::I1)], &[("x", "x", mono("r23")), ("x", "x", mono("r41"))])
        .expect("dataset")
}

/// CFD of the (p,1)-cable. The unlabelled arrows `b_i -> c_i` of the figure
/// are read as idempotent coefficients.
pub fn cable_cfd(p: u16) -> Result<TypeDModule, ComputeError> {
    if p < 2 {
        return Err(ComputeError::Invalid(format!("cable parameter {p} < 2")));
    }
    let top = p - 1;
    let mut gens = vec![("x".to_string(), Idempotent::I0)];
    for i in 1..p {
        gens.push((format!("b{i}"), Idempotent::I1));
        gens.push((format!("c{i}"), Idempotent::I1));
    }
    let mut arrows = vec![
        ("x".to_string(), "x".to_string(), "r12"),
        ("x".into(), format!("c{top}"), "r3"),
        ("x".into(), format!("b{top}"), "r123"),
        (format!("b{top}"), "x".into(), "r4"),
        (format!("c{top}"), "x".into(), "r412"),
        ("c1".into(), "b1".into(), "r2341"),
    ];
    for i in 1..p {
        arrows.push((format!("b{i}"), format!("c{i}"), "i1"));
    }
    for i in 1..top {
        arrows.push((format!("c{}", i + 1), format!("c{i}"), "r23"));
        arrows.push((format!("b{}", i + 1), format!("b{i}"), "r23"));
        arrows.push((format!("c{i}"), format!("c{}", i + 1), "r41"));
        arrows.push((format!("b{i}"), format!("b{}", i + 1), "r41"));
    }
    let gens: Vec<(&str, Idempotent)> = gens.iter().map(|(n, i)| (n.as_str(), *i)).collect();
    let arrows: Vec<(&str, &str, Monomial)> =
        arrows.iter().map(|(f, t, c)| (f.as_str(), t.as_str(), mono(c))).collect();
    TypeDModule::new(&gens, &arrows)
}

/// The type D structure of the 1x1 rectangle.
pub fn rectangle_cfd() -> TypeDModule {
    use Idempotent::*;
    let gens = [
        ("x1", I0),
        ("x2", I0),
        ("x3", I0),
        ("x4", I0),
        ("y1", I1),
        ("y2", I1),
        ("y3", I1),
        ("y4", I1),
    ];
    let arrows = [
        ("x1", "y1", "r3"),
        ("y1", "x1", "r412"),
        ("y1", "x2", "r2"),
        ("x2", "y1", "r341"),
        ("x2", "y2", "r1"),
        ("y2", "x2", "r234"),
        ("x3", "y2", "r123"),
        ("y2", "x3", "r4"),
        ("x4", "y3", "r3"),
        ("y3", "x4", "r412"),
        ("y3", "x3", "r2"),
        ("x3", "y3", "r341"),
        ("x1", "y4", "r1"),
        ("y4", "x1", "r234"),
        ("x4", "y4", "r123"),
        ("y4", "x4", "r4"),
    ];
    let arrows: Vec<_> = arrows.iter().map(|(f, t, c)| (*f, *t, mono(c))).collect();
    TypeDModule::new(&gens, &arrows).expect("dataset")
}

/// The dualizing type DD bimodule, kept as data: each generator's
/// differential as a list of (left chord, right chord, target).
pub fn cfdd_identity() -> Vec<(&'static str, Vec<(&'static str, &'static str, &'static str)>)> {
    vec![
        (
            "i0(x)i0",
            vec![
                ("r1", "r3", "i1(x)i1"),
                ("r3", "r1", "i1(x)i1"),
                ("r123", "r123", "i1(x)i1"),
                ("r341", "r341", "i1(x)i1"),
            ],
        ),
        (
            "i1(x)i1",
            vec![
                ("r2", "r2", "i0(x)i0"),
                ("r4", "r4", "i0(x)i0"),
                ("r234", "r412", "i0(x)i0"),
                ("r412", "r234", "i0(x)i0"),
            ],
        ),
    ]
}

/// Names of the built-in datasets.
pub const DATASETS: [&str; 4] = ["solid-torus", "cable", "rectangle", "cfdd-id"];

/// Look up a type D dataset by name; `cable-P` selects the cable parameter.
pub fn dataset(name: &str) -> Result<TypeDModule, ComputeError> {
    match name {
        "solid-torus" => Ok(solid_torus_cfd()),
        "rectangle" => Ok(rectangle_cfd()),
        n if n.starts_with("cable-") => {
            let p = n[6..].parse::<u16>().map_err(|_| ComputeError::Invalid(format!("bad dataset name {n}")))?;
            cable_cfd(p)
        }
        n => Err(ComputeError::Invalid(format!("unknown type D dataset {n}"))),
    }
}

/// Gradings of the generators of a type D module and the indeterminacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGrading {
    pub gradings: Vec<Grading>,
    pub indeterminacy: Grading,
}

#[derive(Serialize, Deserialize)]
struct DGradingRecord {
    indeterminacy: String,
    gradings: BTreeMap<String, String>,
}

impl FromStr for Grading {
    type Err = ParseError;

    /// Parse `(m; a, b)` with half-integers written as `p/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| ParseError::new(s, "expected (m; a, b)"))?;
        let (m, rest) = body.split_once(';').ok_or_else(|| ParseError::new(s, "missing ';'"))?;
        let (a, b) = rest.split_once(',').ok_or_else(|| ParseError::new(s, "missing ','"))?;
        let half = |t: &str| -> Result<i64, ParseError> {
            let t = t.trim();
            match t.split_once('/') {
                Some((n, "2")) => n.trim().parse::<i64>().map_err(|_| ParseError::new(s, "bad number")),
                Some(_) => Err(ParseError::new(s, "only halves are allowed")),
                None => t.parse::<i64>().map(|x| 2 * x).map_err(|_| ParseError::new(s, "bad number")),
            }
        };
        Grading::new(half(m)?, half(a)?, half(b)?).ok_or_else(|| ParseError::new(s, "not an element of G"))
    }
}

impl DGrading {
    pub fn to_json(&self, module: &TypeDModule) -> String {
        let rec = DGradingRecord {
            indeterminacy: self.indeterminacy.to_string(),
            gradings: module
                .generators
                .iter()
                .zip(&self.gradings)
                .map(|(g, x)| (g.name.clone(), x.to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("serializable")
    }

    pub fn from_json(text: &str, module: &TypeDModule) -> Result<DGrading, ComputeError> {
        let rec: DGradingRecord = serde_json::from_str(text).map_err(|e| ComputeError::Invalid(e.to_string()))?;
        let parse = |t: &str| t.parse::<Grading>().map_err(|e| ComputeError::Invalid(e.to_string()));
        let indeterminacy = parse(&rec.indeterminacy)?;
        let mut gradings = Vec::new();
        for g in &module.generators {
            let t = rec
                .gradings
                .get(&g.name)
                .ok_or_else(|| ComputeError::Invalid(format!("no grading for {}", g.name)))?;
            gradings.push(parse(t)?);
        }
        Ok(DGrading { gradings, indeterminacy })
    }

    /// `gr(a) gr(to) = lambda^-1 gr(from)` modulo the indeterminacy.
    pub fn arrow_compatible(&self, a: &Arrow) -> bool {
        let lhs = crate::grading::gr(a.coeff, Grading::identity()).mul(self.gradings[a.to]);
        let rhs = Grading::lambda().inv().mul(self.gradings[a.from]);
        same_coset(lhs, rhs, self.indeterminacy, Side::Left)
    }
}

/// Gradings of the solid torus dataset.
pub fn solid_torus_gradings() -> DGrading {
    DGrading { gradings: vec![Grading::identity()], indeterminacy: Grading::halves(1, 0, 2) }
}

/// Gradings of the cable dataset: `gr(x) = e`,
/// `gr(b_{p-i}) = (1/2; 1/2, 1/2 - i)`, `gr(c_{p-i}) = (-1/2; 1/2, 1/2 - i)`.
pub fn cable_gradings(p: u16) -> DGrading {
    let mut gradings = vec![Grading::identity()];
    for k in 1..p as i64 {
        let i = p as i64 - k;
        gradings.push(Grading::halves(1, 1, 1 - 2 * i));
        gradings.push(Grading::halves(-1, 1, 1 - 2 * i));
    }
    DGrading { gradings, indeterminacy: Grading::halves(1, 2, 0) }
}

/// Derive gradings by propagating `gr(to) = gr(a)^-1 lambda^-1 gr(from)`
/// along the arrows from generator 0, and read the indeterminacy off the
/// cycles (trivial if every cycle is graded trivially). Fails if the module
/// is disconnected or the cycles do not lie in one cyclic subgroup.
pub fn derive_gradings(module: &TypeDModule) -> Result<DGrading, ComputeError> {
    let n = module.generators.len();
    let mut gr: Vec<Option<Grading>> = vec![None; n];
    gr[0] = Some(Grading::identity());
    let coeff = |a: &Arrow| crate::grading::gr(a.coeff, Grading::identity());
    let mut changed = true;
    while changed {
        changed = false;
        for a in &module.arrows {
            match (gr[a.from], gr[a.to]) {
                (Some(f), None) => {
                    gr[a.to] = Some(coeff(a).inv().mul(Grading::lambda().inv()).mul(f));
                    changed = true;
                }
                (None, Some(t)) => {
                    gr[a.from] = Some(Grading::lambda().mul(coeff(a)).mul(t));
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let gradings: Vec<Grading> = gr
        .into_iter()
        .map(|g| g.ok_or_else(|| ComputeError::Invalid("module is not connected".into())))
        .collect::<Result<_, _>>()?;
    let mut h: Option<Grading> = None;
    for a in &module.arrows {
        let g1 = coeff(a).mul(gradings[a.to]);
        let g2 = Grading::lambda().inv().mul(gradings[a.from]);
        let d = g2.inv().mul(g1);
        if d == Grading::identity() {
            continue;
        }
        match h {
            None => h = Some(d),
            Some(g) => {
                if crate::grading::log_in_cyclic(d, g).is_none() {
                    if crate::grading::log_in_cyclic(g, d).is_some() {
                        h = Some(d);
                    } else {
                        return Err(ComputeError::Invalid("cycles are not in one cyclic subgroup".into()));
                    }
                }
            }
        }
    }
    Ok(DGrading { gradings, indeterminacy: h.unwrap_or_else(Grading::identity) })
}

/// Surviving terms of the structure relation, per generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub failures: Vec<(String, String)>,
    pub chains: usize,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Terms of the structure relation starting at one generator, each term
/// keyed by (target, output monomial) and tagged with the set of arrows
/// marked in `marks` that the chain used.
fn relation_terms(
    alg: &TorusAlgebra,
    module: &TypeDModule,
    arrows_from: &[Vec<(Arrow, u128)>],
    start: usize,
    max_n: usize,
    cutoff: u32,
) -> (BTreeMap<(usize, Monomial), BTreeSet<u128>>, usize) {
    let mut terms: BTreeMap<(usize, Monomial), BTreeSet<u128>> = BTreeMap::new();
    let toggle = |key: (usize, Monomial), mask: u128, terms: &mut BTreeMap<_, BTreeSet<u128>>| {
        let set = terms.entry(key).or_default();
        if !set.remove(&mask) {
            set.insert(mask);
        }
    };
    let idem = module.generators[start].idem;
    for c in Chord::full_orbits() {
        if c.left_idempotent() == idem {
            toggle((start, Monomial::basic(c)), 0, &mut terms);
        }
    }
    let mut chains = 0;
    let mut stack: Vec<(usize, Vec<Monomial>, u128, u32)> = vec![(start, Vec::new(), 0, 0)];
    while let Some((at, seq, mask, upow)) = stack.pop() {
        if seq.len() >= 2 {
            chains += 1;
            for m in alg.mu_all_weights(&seq).terms() {
                if m.u <= cutoff {
                    toggle((at, *m), mask, &mut terms);
                }
            }
        }
        if seq.len() >= max_n {
            continue;
        }
        let has_idem = seq.iter().any(|m| m.basic.chord().is_none());
        if has_idem && seq.len() >= 2 {
            continue;
        }
        if seq.len() >= 2 {
            let (a, b) = (seq[seq.len() - 2].basic, seq[seq.len() - 1].basic);
            if a.multiply(b).is_some() {
                continue;
            }
        }
        for (arrow, bit) in &arrows_from[at] {
            let u = upow + arrow.coeff.u;
            if u > cutoff {
                continue;
            }
            if arrow.coeff.basic.chord().is_none() && seq.len() >= 2 {
                continue;
            }
            let mut next = seq.clone();
            next.push(arrow.coeff);
            stack.push((arrow.to, next, mask | bit, u));
        }
    }
    terms.retain(|_, masks| !masks.is_empty());
    (terms, chains)
}

fn adjacency(module: &TypeDModule, marked: &[Arrow]) -> Vec<Vec<(Arrow, u128)>> {
    let mut out = vec![Vec::new(); module.generators.len()];
    for a in &module.arrows {
        out[a.from].push((*a, 0));
    }
    for (k, a) in marked.iter().enumerate() {
        out[a.from].push((*a, 1u128 << k));
    }
    out
}

/// Check `sum (mu^w_n (x) I) delta^n = 0` through chains of at most `max_n`
/// arrows, discarding terms with U-power above `cutoff`.
pub fn check_structure_relation(
    alg: &TorusAlgebra,
    module: &TypeDModule,
    max_n: usize,
    cutoff: u32,
) -> RelationReport {
    let adj = adjacency(module, &[]);
    let results: Vec<_> = (0..module.generators.len())
        .into_par_iter()
        .map(|x| relation_terms(alg, module, &adj, x, max_n, cutoff))
        .collect();
    let mut report = RelationReport::default();
    for (x, (terms, chains)) in results.into_iter().enumerate() {
        report.chains += chains;
        if !terms.is_empty() {
            let parts: Vec<String> = terms
                .keys()
                .map(|(y, m)| format!("{m} (x) {}", module.generators[*y].name))
                .collect();
            report.failures.push((module.generators[x].name.clone(), parts.join(" + ")));
        }
    }
    report
}

/// Outcome of an extension search.
#[derive(Clone, Debug)]
pub struct Extension {
    pub candidates: Vec<Arrow>,
    pub solutions: Vec<TypeDModule>,
    /// Largest chord length admitted for candidates.
    pub length_cap: u32,
    /// Largest U-power admitted for candidates.
    pub u_cap: u32,
}

/// Range of indeterminacy powers scanned when solving for candidate gradings.
const POWER_SCAN: i64 = 16;

/// Arrows that could be added to `hat`: coefficients `U^n a` with `a`
/// containing the label 4 or `n > 0`, whose grading is compatible.
pub fn extension_candidates(hat: &TypeDModule, gradings: &DGrading, u_cap: u32) -> (Vec<Arrow>, u32) {
    let longest = hat.arrows.iter().map(|a| a.coeff.basic.len()).max().unwrap_or(0);
    let length_cap = longest + 4;
    let mut out = BTreeSet::new();
    let n = hat.generators.len();
    for from in 0..n {
        for to in 0..n {
            let (fi, ti) = (hat.generators[from].idem, hat.generators[to].idem);
            let mut bases: Vec<Basic> = Vec::new();
            if fi == ti {
                bases.push(Basic::Idem(fi));
            }
            for len in 1..=length_cap {
                for start in 1..=4 {
                    let c = Chord::new(start, len).expect("chord");
                    if c.left_idempotent() == fi && c.right_idempotent() == ti {
                        bases.push(Basic::Chord(c));
                    }
                }
            }
            for basic in bases {
                for u in 0..=u_cap {
                    let coeff = Monomial::new(u, 0, basic);
                    let has_four = basic.chord().map_or(false, |c| c.contains_four());
                    if u == 0 && !has_four {
                        continue;
                    }
                    let a = Arrow { from, to, coeff };
                    if hat.arrows.contains(&a) {
                        continue;
                    }
                    let lhs = crate::grading::gr(coeff, Grading::identity()).mul(gradings.gradings[to]);
                    let rhs = Grading::lambda().inv().mul(gradings.gradings[from]);
                    let d = rhs.inv().mul(lhs);
                    if let Some(l) = crate::grading::log_in_cyclic(d, gradings.indeterminacy) {
                        if l.abs() <= POWER_SCAN {
                            out.insert(a);
                        }
                    }
                }
            }
        }
    }
    (out.into_iter().collect(), length_cap)
}

/// All sets of candidate arrows whose addition to `hat` satisfies the
/// structure relation at `(max_n, cutoff)`.
pub fn extend_hat_to_minus(
    alg: &TorusAlgebra,
    hat: &TypeDModule,
    gradings: &DGrading,
    max_n: usize,
    cutoff: u32,
) -> Result<Extension, ComputeError> {
    let u_cap = cutoff;
    let (candidates, length_cap) = extension_candidates(hat, gradings, u_cap);
    if candidates.len() > 128 {
        return Err(ComputeError::Invalid(format!(
            "{} candidate arrows exceed the search capacity of 128",
            candidates.len()
        )));
    }
    let adj = adjacency(hat, &candidates);
    let per_gen: Vec<_> = (0..hat.generators.len())
        .into_par_iter()
        .map(|x| relation_terms(alg, hat, &adj, x, max_n, cutoff).0)
        .collect();
    // each surviving key gives a GF(2) polynomial in the candidate variables
    let mut polys: Vec<Vec<u128>> = Vec::new();
    for terms in per_gen {
        for (_, masks) in terms {
            polys.push(masks.into_iter().collect());
        }
    }
    let top = |p: &Vec<u128>| p.iter().map(|m| 128 - m.leading_zeros() as usize).max().unwrap_or(0);
    let k = candidates.len();
    let mut by_top: Vec<Vec<Vec<u128>>> = vec![Vec::new(); k + 1];
    for p in polys {
        let t = top(&p);
        by_top[t].push(p);
    }
    if by_top[0].iter().any(|p| !p.is_empty()) {
        return Ok(Extension { candidates, solutions: Vec::new(), length_cap, u_cap });
    }
    let eval = |p: &Vec<u128>, chosen: u128| p.iter().filter(|m| *m & chosen == **m).count() % 2 == 0;
    let mut found = Vec::new();
    let mut stack = vec![(0usize, 0u128)];
    while let Some((i, chosen)) = stack.pop() {
        if i == k {
            found.push(chosen);
            continue;
        }
        for bit in [0u128, 1u128 << i] {
            let next = chosen | bit;
            if by_top[i + 1].iter().all(|p| eval(p, next)) {
                stack.push((i + 1, next));
            }
        }
    }
    found.sort();
    let solutions = found
        .into_iter()
        .map(|chosen| {
            let mut m = hat.clone();
            for (b, a) in candidates.iter().enumerate() {
                if chosen >> b & 1 == 1 {
                    m.arrows.insert(*a);
                }
            }
            m
        })
        .collect();
    Ok(Extension { candidates, solutions, length_cap, u_cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_text_round_trip() {
        let g = Grading::halves(-3, -1, 1);
        assert_eq!(g.to_string().parse::<Grading>().unwrap(), g);
        assert!("(0; 1/2, 1/2)".parse::<Grading>().is_err());
    }

    #[test]
    fn dataset_shapes() {
        assert_eq!(rectangle_cfd().arrows.len(), 16);
        assert_eq!(rectangle_cfd().hat().arrows.len(), 8);
        assert_eq!(cable_cfd(2).unwrap().generators.len(), 3);
        assert_eq!(solid_torus_cfd().hat().arrows.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let m = cable_cfd(3).unwrap();
        assert_eq!(TypeDModule::from_json(&m.to_json()).unwrap(), m);
    }
}
