//! Box tensor products of a weighted type A closure with a type D module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Chord;
use crate::cfa::{Closure, Gen, Lookup};
use crate::error::ComputeError;
use crate::typed::TypeDModule;

/// A free chain complex over `F2[U, V]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainComplex {
    /// Generator names, sorted.
    pub generators: Vec<String>,
    /// Differential terms `(from, to, u, v)` as indices into `generators`.
    pub differential: BTreeSet<(usize, usize, u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    from: String,
    to: String,
    u: u32,
    v: u32,
}

#[derive(Serialize, Deserialize)]
struct ComplexRecord {
    generators: Vec<String>,
    differential: Vec<TermRecord>,
}

/// Name of the generator `x (x) y` of a tensor product.
pub fn pair_name(x: Gen, y: &str) -> String {
    format!("{x}|{y}")
}

impl ChainComplex {
    /// Build from named terms; generator names are sorted.
    pub fn from_terms(
        generators: impl IntoIterator<Item = String>,
        terms: impl IntoIterator<Item = (String, String, u32, u32)>,
    ) -> Result<ChainComplex, ComputeError> {
        let generators: BTreeSet<String> = generators.into_iter().collect();
        let generators: Vec<String> = generators.into_iter().collect();
        let index = |n: &str| {
            generators
                .binary_search_by(|g| g.as_str().cmp(n))
                .map_err(|_| ComputeError::Invalid(format!("unknown generator {n}")))
        };
        let mut differential = BTreeSet::new();
        for (f, t, u, v) in terms {
            let key = (index(&f)?, index(&t)?, u, v);
            if !differential.remove(&key) {
                differential.insert(key);
            }
        }
        Ok(ChainComplex { generators, differential })
    }

    /// The differential as named terms `(from, to, u, v)`, sorted by name.
    pub fn named_terms(&self) -> BTreeSet<(String, String, u32, u32)> {
        self.differential
            .iter()
            .map(|&(f, t, u, v)| (self.generators[f].clone(), self.generators[t].clone(), u, v))
            .collect()
    }

    /// The terms with `u + v <= max_uv`.
    pub fn restricted(&self, max_uv: u32) -> ChainComplex {
        ChainComplex {
            generators: self.generators.clone(),
            differential: self.differential.iter().filter(|t| t.2 + t.3 <= max_uv).copied().collect(),
        }
    }

    fn record(&self) -> ComplexRecord {
        let differential = self
            .named_terms()
            .into_iter()
            .map(|(from, to, u, v)| TermRecord { from, to, u, v })
            .collect();
        ComplexRecord { generators: self.generators.clone(), differential }
    }

    /// Compact JSON with generators sorted and terms sorted by (from, to, u, v).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ChainComplex, ComputeError> {
        let rec: ComplexRecord = serde_json::from_str(text).map_err(|e| ComputeError::Invalid(e.to_string()))?;
        ChainComplex::from_terms(rec.generators, rec.differential.into_iter().map(|t| (t.from, t.to, t.u, t.v)))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph complex {\n");
        for g in &self.generators {
            let _ = writeln!(s, "  \"{g}\";");
        }
        for (f, t, u, v) in self.named_terms() {
            let label = crate::format_term(u, v, "1");
            let label = label.strip_suffix("*1").unwrap_or(&label);
            let _ = writeln!(s, "  \"{f}\" -> \"{t}\" [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Surviving terms of `d o d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareReport {
    pub failures: Vec<(String, String, u32, u32)>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `d^2 = 0`, discarding compositions of total power above `max_uv`.
pub fn verify_d_squared(c: &ChainComplex, max_uv: u32) -> SquareReport {
    let mut out: BTreeMap<usize, Vec<(usize, u32, u32)>> = BTreeMap::new();
    for &(f, t, u, v) in &c.differential {
        out.entry(f).or_default().push((t, u, v));
    }
    let mut report = SquareReport::default();
    for (&f, first) in &out {
        let mut sum: BTreeSet<(usize, u32, u32)> = BTreeSet::new();
        for &(m, u1, v1) in first {
            for &(t, u2, v2) in out.get(&m).map(Vec::as_slice).unwrap_or(&[]) {
                let key = (t, u1 + u2, v1 + v2);
                if key.1 + key.2 > max_uv {
                    continue;
                }
                if !sum.remove(&key) {
                    sum.insert(key);
                }
            }
        }
        for (t, u, v) in sum {
            report.failures.push((c.generators[f].clone(), c.generators[t].clone(), u, v));
        }
    }
    report
}

/// The box tensor product `closure (x) d` through type D chains of at most
/// `max_n` arrows, keeping terms of total power at most `max_uv`.
///
/// A type D coefficient `U^k` contributes `(UV)^k`. Weight-`w` operations
/// are summed for `w <= max_w` of the closure; the closure must answer every
/// query this needs.
pub fn box_tensor(closure: &Closure, d: &TypeDModule, max_n: usize, max_uv: u32) -> Result<ChainComplex, ComputeError> {
    let bounds = closure.bounds();
    if bounds.max_uv < max_uv || bounds.max_w < max_uv || bounds.max_len < max_n + 2 * bounds.max_w as usize {
        return Err(ComputeError::InsufficientClosure(format!(
            "box tensor at (maxN {max_n}, maxUV {max_uv}) needs closure bounds maxUV >= {max_uv}, \
             maxW >= {max_uv}, maxLen >= maxN + 2 maxW; got ({}, {}, {})",
            bounds.max_uv, bounds.max_w, bounds.max_len
        )));
    }
    let mut pairs: Vec<(Gen, usize)> = Vec::new();
    for &x in closure.generators() {
        for (j, y) in d.generators.iter().enumerate() {
            if x.idempotent() == y.idem {
                pairs.push((x, j));
            }
        }
    }
    let mut out_arrows = vec![Vec::new(); d.generators.len()];
    for a in &d.arrows {
        out_arrows[a.from].push(*a);
    }
    let name = |x: Gen, j: usize| pair_name(x, &d.generators[j].name);
    let per_pair: Result<Vec<Vec<(String, String, u32, u32)>>, ComputeError> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let mut terms: BTreeMap<(Gen, usize, u32, u32), bool> = BTreeMap::new();
            let mut toggle = |key: (Gen, usize, u32, u32)| {
                let e = terms.entry(key).or_insert(false);
                *e = !*e;
            };
            // idempotent arrows act only through the strict unit
            for a in &out_arrows[y] {
                if a.coeff.basic.chord().is_none() && 2 * a.coeff.u <= max_uv {
                    toggle((x, a.to, a.coeff.u, a.coeff.u));
                }
            }
            let mut stack: Vec<(usize, Vec<Chord>, u32)> = vec![(y, Vec::new(), 0)];
            while let Some((at, chords, k)) = stack.pop() {
                for w in 0..=bounds.max_w {
                    match closure.query(x, &chords, w) {
                        Lookup::Known(outs) => {
                            for (u, v, g) in outs {
                                if u + v + 2 * k <= max_uv {
                                    toggle((g, at, u + k, v + k));
                                }
                            }
                        }
                        Lookup::Unknown => {
                            return Err(ComputeError::InsufficientClosure(format!(
                                "m^{w}({x}, {}) is outside the closure bounds",
                                chords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
                            )))
                        }
                    }
                }
                if chords.len() == max_n {
                    continue;
                }
                for a in &out_arrows[at] {
                    let Some(c) = a.coeff.basic.chord() else { continue };
                    let k2 = k + a.coeff.u;
                    if 2 * k2 > max_uv {
                        continue;
                    }
                    let mut next = chords.clone();
                    next.push(c);
                    if closure.has_prefix(x, &next) {
                        stack.push((a.to, next, k2));
                    }
                }
            }
            Ok(terms
                .into_iter()
                .filter(|(_, on)| *on)
                .map(|((g, j, u, v), _)| (name(x, y), name(g, j), u, v))
                .collect())
        })
        .collect();
    let generators = pairs.iter().map(|&(x, j)| name(x, j));
    ChainComplex::from_terms(generators, per_pair?.into_iter().flatten())
}

/// The summand figure of `CFA-(C_p) (x) rectangle`, transcribed as named
/// terms. Generators are every idempotent-matched pair.
pub fn cable_rectangle_figure(p: u16) -> Result<ChainComplex, ComputeError> {
    if p < 2 {
        return Err(ComputeError::Invalid(format!("cable parameter {p} < 2")));
    }
    let p = p as u32;
    let q = p - 1;
    let mut terms: Vec<(String, String, u32, u32)> = Vec::new();
    let mut t = |f: String, to: String, u: u32, v: u32| terms.push((f, to, u, v));
    // the summand through b1, c1 and y1, y3
    t("b1|y1".into(), "c1|y1".into(), 1, 0);
    t("b1|y3".into(), "c1|y3".into(), 1, 0);
    t("b1|y1".into(), "b1|y3".into(), 0, p);
    t("c1|y1".into(), "c1|y3".into(), 0, p);
    // the summand through x
    t("x|x1".into(), "x|x2".into(), p, 0);
    t("x|x1".into(), format!("b{q}|y2"), 1, 0);
    t("x|x1".into(), format!("c{q}|y4"), 0, 0);
    t("x|x2".into(), format!("c{q}|y2"), 0, 0);
    t(format!("b{q}|y2"), format!("c{q}|y2"), q, 0);
    t(format!("b{q}|y2"), "x|x3".into(), 0, 1);
    t("x|x4".into(), "x|x3".into(), p, 0);
    t(format!("c{q}|y4"), "x|x3".into(), 1, 1);
    t(format!("b{q}|y4"), format!("c{q}|y4"), q, 0);
    t(format!("b{q}|y4"), "x|x4".into(), 0, 1);
    // the summands for k = 1..p-2
    for k in 1..q {
        let j = k + 1;
        t(format!("b{k}|y4"), format!("b{j}|y3"), 0, 1);
        t(format!("b{k}|y4"), format!("c{k}|y4"), k, 0);
        t(format!("b{j}|y3"), format!("c{j}|y3"), j, 0);
        t(format!("c{k}|y4"), format!("c{j}|y3"), 1, 1);
        t(format!("b{j}|y1"), format!("c{k}|y4"), 0, p - k - 1);
        t(format!("b{j}|y1"), format!("b{k}|y2"), 1, 0);
        t(format!("b{k}|y2"), format!("c{j}|y3"), 0, p - k);
        t(format!("b{j}|y1"), format!("c{j}|y1"), j, 0);
        t(format!("b{k}|y2"), format!("c{k}|y2"), k, 0);
        t(format!("c{j}|y1"), format!("c{k}|y2"), 0, 0);
    }
    let mut gens = vec!["x|x1", "x|x2", "x|x3", "x|x4"].into_iter().map(String::from).collect::<Vec<_>>();
    for i in 1..p {
        for y in 1..=4 {
            gens.push(format!("b{i}|y{y}"));
            gens.push(format!("c{i}|y{y}"));
        }
    }
    ChainComplex::from_terms(gens, terms)
}
