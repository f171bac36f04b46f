//! Bounded exhaustive checks of the weighted A-infinity relations.

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{composable, Chord, Element, Monomial};
use crate::cfa::{Closure, Gen, Lookup};
use crate::error::ComputeError;
use crate::torus::TorusAlgebra;

/// Result of one relation instance that failed to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub source: Option<Gen>,
    pub inputs: Vec<Chord>,
    pub weight: u32,
    pub surviving: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inputs: Vec<String> = self.inputs.iter().map(|c| c.to_string()).collect();
        match &self.source {
            Some(g) => write!(f, "{g};{};w={}: {}", inputs.join(","), self.weight, self.surviving),
            None => write!(f, "{};w={}: {}", inputs.join(","), self.weight, self.surviving),
        }
    }
}

/// Summary of an exhaustive verification run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(results: Vec<Option<Failure>>) -> Report {
        let instances = results.len();
        let failures = results.into_iter().flatten().collect();
        Report { instances, failures }
    }
}

/// Every composable chord sequence with `1 <= n <= max_n` chords of total
/// length at most `max_sum`, in lexicographic order.
pub fn chord_sequences(max_n: usize, max_sum: u32) -> Vec<Vec<Chord>> {
    fn rec(max_n: usize, budget: u32, cur: &mut Vec<Chord>, out: &mut Vec<Vec<Chord>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_n {
            return;
        }
        for len in 1..=budget {
            for start in 1..=4 {
                let c = Chord::new(start, len).expect("valid chord");
                if let Some(last) = cur.last() {
                    if last.right_idempotent() != c.left_idempotent() {
                        continue;
                    }
                }
                cur.push(c);
                rec(max_n, budget - len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(max_n, max_sum, &mut Vec::new(), &mut out);
    out
}

/// The left-hand side of the algebra relation on chord inputs at weight `w`,
/// truncated at `cutoff`.
pub fn algebra_relation(alg: &TorusAlgebra, inputs: &[Chord], w: u32, cutoff: u32) -> Element {
    let n = inputs.len();
    let mono: Vec<Monomial> = inputs.iter().map(|&c| Monomial::basic(c)).collect();
    let mut total = Element::zero();
    for i in 0..=n {
        for j in 0..=n - i {
            if j == 1 {
                continue;
            }
            for w2 in 0..=w {
                let inner = alg.mu_monomials(w2, &mono[i..i + j]);
                if inner.is_zero() {
                    continue;
                }
                let w1 = w - w2;
                for m in inner.terms() {
                    let mut outer: Vec<Monomial> = Vec::with_capacity(n - j + 1);
                    outer.extend_from_slice(&mono[..i]);
                    outer.push(*m);
                    outer.extend_from_slice(&mono[i + j..]);
                    total.add_assign_element(&alg.mu_monomials(w1, &outer));
                }
            }
        }
    }
    total.truncated(cutoff, alg.enriched())
}

/// Algebra relations for all chord sequences with at most `max_n` inputs,
/// total length at most `max_sum`, weights up to `max_w`, plus the empty
/// input list.
pub fn verify_algebra(alg: &TorusAlgebra, max_n: usize, max_sum: u32, max_w: u32, cutoff: u32) -> Report {
    let mut cases: Vec<(Vec<Chord>, u32)> = Vec::new();
    for w in 0..=max_w {
        cases.push((Vec::new(), w));
    }
    for seq in chord_sequences(max_n, max_sum) {
        for w in 0..=max_w {
            cases.push((seq.clone(), w));
        }
    }
    let results: Vec<Option<Failure>> = cases
        .par_iter()
        .map(|(seq, w)| {
            let rel = algebra_relation(alg, seq, *w, cutoff);
            (!rel.is_zero()).then(|| Failure {
                source: None,
                inputs: seq.clone(),
                weight: *w,
                surviving: rel.to_string(),
            })
        })
        .collect();
    Report::collect(results)
}

/// A module-valued sum: F2-combination of `U^u V^v gen`.
pub type ModuleElement = std::collections::BTreeSet<(u32, u32, Gen)>;

fn toggle(sum: &mut ModuleElement, t: (u32, u32, Gen)) {
    if !sum.remove(&t) {
        sum.insert(t);
    }
}

fn render(sum: &ModuleElement) -> String {
    let parts: Vec<String> = sum.iter().map(|(u, v, g)| crate::format_term(*u, *v, g)).collect();
    parts.join(" + ")
}

/// `m^w(x, inputs)` with inputs given as monomials, through strict unitality
/// for idempotent inputs.
fn module_op(
    closure: &Closure,
    x: Gen,
    inputs: &[Monomial],
    w: u32,
) -> Result<Vec<(u32, u32, Gen)>, ComputeError> {
    let (du, dv) = inputs.iter().fold((0, 0), |(u, v), m| (u + m.u, v + m.v));
    if inputs.iter().any(|m| m.basic.chord().is_none()) {
        if inputs.len() == 1 && w == 0 {
            let i = inputs[0].basic.left_idempotent();
            return Ok(if i == x.idempotent() { vec![(du, dv, x)] } else { Vec::new() });
        }
        return Ok(Vec::new());
    }
    let chords: Vec<Chord> = inputs.iter().map(|m| m.basic.chord().expect("chord")).collect();
    match closure.query(x, &chords, w) {
        Lookup::Known(outs) => Ok(outs.into_iter().map(|(u, v, g)| (u + du, v + dv, g)).collect()),
        Lookup::Unknown => Err(ComputeError::InsufficientClosure(format!(
            "m^{w}({x}, {}) is outside the closure bounds",
            chords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        ))),
    }
}

/// The left-hand side of the module relation at `(x, inputs, w)`, truncated
/// at total power `cutoff`.
pub fn module_relation(
    alg: &TorusAlgebra,
    closure: &Closure,
    x: Gen,
    inputs: &[Chord],
    w: u32,
    cutoff: u32,
) -> Result<ModuleElement, ComputeError> {
    let n = inputs.len();
    let mono: Vec<Monomial> = inputs.iter().map(|&c| Monomial::basic(c)).collect();
    let mut sum = ModuleElement::new();
    let within = |u: u32, v: u32| u + v <= cutoff;
    // algebra operations inserted into the inputs
    for i in 0..=n {
        for j in 0..=n - i {
            if j == 1 {
                continue;
            }
            for w2 in 0..=w {
                let inner = alg.mu_monomials(w2, &mono[i..i + j]);
                for m in inner.terms() {
                    if !within(m.u, m.v) {
                        continue;
                    }
                    let mut outer = Vec::with_capacity(n - j + 1);
                    outer.extend_from_slice(&mono[..i]);
                    outer.push(*m);
                    outer.extend_from_slice(&mono[i + j..]);
                    for t in module_op(closure, x, &outer, w - w2)? {
                        if within(t.0, t.1) {
                            toggle(&mut sum, t);
                        }
                    }
                }
            }
        }
    }
    // compositions of two module operations
    for i in 0..=n {
        for w2 in 0..=w {
            for (u, v, y) in module_op(closure, x, &mono[..i], w2)? {
                if !within(u, v) {
                    continue;
                }
                for (u2, v2, z) in module_op(closure, y, &mono[i..], w - w2)? {
                    if within(u + u2, v + v2) {
                        toggle(&mut sum, (u + u2, v + v2, z));
                    }
                }
            }
        }
    }
    Ok(sum)
}

/// Module relations for all generators and chord sequences within bounds.
pub fn verify_module(
    alg: &TorusAlgebra,
    closure: &Closure,
    max_n: usize,
    max_sum: u32,
    max_w: u32,
    cutoff: u32,
) -> Result<Report, ComputeError> {
    let mut cases: Vec<(Gen, Vec<Chord>, u32)> = Vec::new();
    let seqs = chord_sequences(max_n, max_sum);
    for &x in closure.generators() {
        for w in 0..=max_w {
            cases.push((x, Vec::new(), w));
            for seq in &seqs {
                if seq[0].left_idempotent() == x.idempotent() && composable(seq) {
                    cases.push((x, seq.clone(), w));
                }
            }
        }
    }
    let results: Result<Vec<Option<Failure>>, ComputeError> = cases
        .par_iter()
        .map(|(x, seq, w)| {
            let rel = module_relation(alg, closure, *x, seq, *w, cutoff)?;
            Ok((!rel.is_empty()).then(|| Failure {
                source: Some(*x),
                inputs: seq.clone(),
                weight: *w,
                surviving: render(&rel),
            }))
        })
        .collect();
    Ok(Report::collect(results?))
}
