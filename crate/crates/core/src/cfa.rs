//! Weighted type A modules of the solid torus and the (p,1)-cable: base
//! operations, the three moves, closures and queries.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Chord, Idempotent};
use crate::error::{ComputeError, MoveError, ParseError};
use crate::torus::Mode;

/// A module generator: `a` for the solid torus, `x`, `b_i`, `c_i` for cables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    X,
    B(u16),
    C(u16),
}

impl Gen {
    pub fn idempotent(self) -> Idempotent {
        match self {
            Gen::X => Idempotent::I0,
            Gen::A | Gen::B(_) | Gen::C(_) => Idempotent::I1,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::A => write!(f, "a"),
            Gen::X => write!(f, "x"),
            Gen::B(i) => write!(f, "b{i}"),
            Gen::C(i) => write!(f, "c{i}"),
        }
    }
}

impl FromStr for Gen {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let index = |rest: &str| {
            rest.parse::<u16>()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| ParseError::new(s, "expected a positive generator index"))
        };
        match s.trim() {
            "a" => Ok(Gen::A),
            "x" => Ok(Gen::X),
            t if t.starts_with('b') => Ok(Gen::B(index(&t[1..])?)),
            t if t.starts_with('c') => Ok(Gen::C(index(&t[1..])?)),
            _ => Err(ParseError::new(s, "unknown generator")),
        }
    }
}

impl Serialize for Gen {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gen {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One nonzero operation `m^w(src, chords) = U^u V^v dst`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleOp {
    pub src: Gen,
    pub chords: Vec<Chord>,
    pub w: u32,
    pub u: u32,
    pub v: u32,
    pub dst: Gen,
}

impl ModuleOp {
    pub fn new(src: Gen, chords: &[Chord], w: u32, u: u32, v: u32, dst: Gen) -> ModuleOp {
        ModuleOp { src, chords: chords.to_vec(), w, u, v, dst }
    }

    pub fn power(&self) -> u32 {
        self.u + self.v
    }

    /// Idempotents of the source, the chords and the target agree.
    pub fn is_compatible(&self) -> bool {
        let mut idem = self.src.idempotent();
        for c in &self.chords {
            if c.left_idempotent() != idem {
                return false;
            }
            idem = c.right_idempotent();
        }
        idem == self.dst.idempotent()
    }
}

impl fmt::Display for ModuleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m^{}({}", self.w, self.src)?;
        for c in &self.chords {
            write!(f, ",{c}")?;
        }
        write!(f, ") = {}", crate::format_term(self.u, self.v, self.dst))
    }
}

/// Move (1): glue two operations along a chord junction with nonzero product.
pub fn move1(a: &ModuleOp, b: &ModuleOp) -> Result<ModuleOp, MoveError> {
    if a.dst != b.src {
        return Err(MoveError::GeneratorMismatch);
    }
    let (Some(last), Some(first)) = (a.chords.last(), b.chords.first()) else {
        return Err(MoveError::EmptySequence);
    };
    let joined = last.then(*first).ok_or(MoveError::ZeroJunction)?;
    let mut chords = a.chords[..a.chords.len() - 1].to_vec();
    chords.push(joined);
    chords.extend_from_slice(&b.chords[1..]);
    Ok(ModuleOp { src: a.src, chords, w: a.w + b.w, u: a.u + b.u, v: a.v + b.v, dst: b.dst })
}

/// Move (2) at the 1-based position `i`: insert a copy of the torus between
/// `a_i` and `a_{i+1}`.
pub fn move2(op: &ModuleOp, i: usize, mode: Mode) -> Result<ModuleOp, MoveError> {
    let n = op.chords.len();
    if i < 1 || i >= n {
        return Err(MoveError::Position(i));
    }
    let (a, b) = (op.chords[i - 1], op.chords[i]);
    if a.then(b).is_some() {
        return Err(MoveError::NonzeroJunction);
    }
    let j = a.last_label();
    let back = Chord::new(crate::algebra::prev_label(j), 1).expect("label");
    let back2 = Chord::new(crate::algebra::prev_label(back.start()), 1).expect("label");
    let tail = back2.then(b).ok_or(MoveError::ZeroJunction)?;
    let mut chords = op.chords[..i - 1].to_vec();
    chords.extend([a.extend_back(), Chord::rho(j), back, tail]);
    chords.extend_from_slice(&op.chords[i + 1..]);
    let dv = u32::from(mode == Mode::Enriched);
    Ok(ModuleOp { chords, u: op.u + 1, v: op.v + dv, ..op.clone() })
}

/// Move (3) at the 1-based position `i`: remove a length-4 chord and merge its
/// neighbours.
pub fn move3(op: &ModuleOp, i: usize) -> Result<ModuleOp, MoveError> {
    let n = op.chords.len();
    if i <= 1 || i >= n {
        return Err(MoveError::Position(i));
    }
    let c = op.chords[i - 1];
    if c.len() != 4 {
        return Err(MoveError::NotFullOrbit(c.len()));
    }
    let merged = op.chords[i - 2].then(op.chords[i]).ok_or(MoveError::ZeroJunction)?;
    let mut chords = op.chords[..i - 2].to_vec();
    chords.push(merged);
    chords.extend_from_slice(&op.chords[i + 1..]);
    Ok(ModuleOp { chords, w: op.w + 1, ..op.clone() })
}

/// Which module: the 0-framed solid torus or the (p,1)-cable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    SolidTorus,
    Cable(u16),
}

impl Pattern {
    pub fn mode(self) -> Mode {
        match self {
            Pattern::SolidTorus => Mode::Plain,
            Pattern::Cable(_) => Mode::Enriched,
        }
    }

    pub fn generators(self) -> Vec<Gen> {
        match self {
            Pattern::SolidTorus => vec![Gen::A],
            Pattern::Cable(p) => {
                let mut g = vec![Gen::X];
                g.extend((1..p).map(Gen::B));
                g.extend((1..p).map(Gen::C));
                g
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Pattern::SolidTorus => "solid-torus".into(),
            Pattern::Cable(p) => format!("cable-{p}"),
        }
    }
}

fn chords(s: &str) -> Vec<Chord> {
    crate::algebra::parse_chord_list(s).expect("built-in chord list")
}

/// The base operations from which every operation arises by moves.
pub fn base_operations(pattern: Pattern) -> Result<Vec<ModuleOp>, ComputeError> {
    let op = |src, s: &str, u, v, dst| ModuleOp::new(src, &chords(s), 0, u, v, dst);
    match pattern {
        Pattern::SolidTorus => Ok(vec![op(Gen::A, "r2,r1", 0, 0, Gen::A), op(Gen::A, "r4,r3", 1, 0, Gen::A)]),
        Pattern::Cable(p) if p < 2 => Err(ComputeError::Invalid(format!("cable parameter {p} < 2"))),
        Pattern::Cable(p) => {
            let pu = p as u32;
            let top = p - 1;
            let mut ops = vec![
                op(Gen::X, "r1", 0, 0, Gen::C(top)),
                op(Gen::C(top), "r4,r3,r2", 1, 1, Gen::X),
                op(Gen::X, "r3,r2", pu, 0, Gen::X),
                op(Gen::X, "r3,r2,r1", 1, 0, Gen::B(top)),
                op(Gen::B(top), "r4", 0, 1, Gen::X),
            ];
            for i in 1..p {
                ops.push(op(Gen::B(i), "", i as u32, 0, Gen::C(i)));
            }
            for i in 1..p - 1 {
                ops.push(op(Gen::C(i + 1), "r2,r1", 0, 0, Gen::C(i)));
                ops.push(op(Gen::C(i), "r4,r3", 1, 1, Gen::C(i + 1)));
                ops.push(op(Gen::B(i + 1), "r2,r1", 1, 0, Gen::B(i)));
                ops.push(op(Gen::B(i), "r4,r3", 0, 1, Gen::B(i + 1)));
            }
            ops.push(op(Gen::C(1), "r2,r1,r4,r3", 0, 1, Gen::B(1)));
            Ok(ops)
        }
    }
}

/// Pruning bounds of a closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_uv: u32,
    pub max_w: u32,
    pub max_len: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_uv: 8, max_w: 3, max_len: 12 }
    }
}

impl Bounds {
    fn admits(&self, op: &ModuleOp) -> bool {
        op.power() <= self.max_uv && op.w <= self.max_w && op.chords.len() <= self.max_len
    }
}

/// Outcome of a closure lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    /// Every output with total power at most the closure's `max_uv`.
    Known(Vec<(u32, u32, Gen)>),
    /// The query lies outside the region the closure determines exactly.
    Unknown,
}

type OpKey = (Gen, Vec<Chord>, u32);

/// All operations reachable from the base set by moves within bounds.
#[derive(Clone, Debug)]
pub struct Closure {
    pattern: Pattern,
    bounds: Bounds,
    generators: Vec<Gen>,
    ops: BTreeSet<ModuleOp>,
    index: HashMap<OpKey, Vec<(u32, u32, Gen)>>,
    prefixes: HashSet<(Gen, Vec<Chord>)>,
}

impl Closure {
    fn from_ops(pattern: Pattern, bounds: Bounds, ops: BTreeSet<ModuleOp>) -> Closure {
        let mut index: HashMap<OpKey, Vec<(u32, u32, Gen)>> = HashMap::new();
        let mut prefixes = HashSet::new();
        for op in &ops {
            index.entry((op.src, op.chords.clone(), op.w)).or_default().push((op.u, op.v, op.dst));
            for k in 0..=op.chords.len() {
                prefixes.insert((op.src, op.chords[..k].to_vec()));
            }
        }
        for outs in index.values_mut() {
            outs.sort();
        }
        Closure { pattern, bounds, generators: pattern.generators(), ops, index, prefixes }
    }

    /// Breadth-first closure of an explicit base set.
    pub fn generate_from(pattern: Pattern, base: &[ModuleOp], bounds: Bounds) -> Closure {
        let mode = pattern.mode();
        let mut ops: BTreeSet<ModuleOp> = BTreeSet::new();
        let mut by_src: HashMap<Gen, Vec<ModuleOp>> = HashMap::new();
        let mut by_dst: HashMap<Gen, Vec<ModuleOp>> = HashMap::new();
        let mut queue: VecDeque<ModuleOp> = VecDeque::new();
        let push = |op: ModuleOp, ops: &mut BTreeSet<ModuleOp>, queue: &mut VecDeque<ModuleOp>| {
            if bounds.admits(&op) && ops.insert(op.clone()) {
                queue.push_back(op);
            }
        };
        for op in base {
            push(op.clone(), &mut ops, &mut queue);
        }
        while let Some(op) = queue.pop_front() {
            let mut found = Vec::new();
            for i in 1..op.chords.len() {
                if let Ok(o) = move2(&op, i, mode) {
                    found.push(o);
                }
                if let Ok(o) = move3(&op, i) {
                    found.push(o);
                }
            }
            if !op.chords.is_empty() {
                for other in by_src.get(&op.dst).into_iter().flatten() {
                    if let Ok(o) = move1(&op, other) {
                        found.push(o);
                    }
                }
                for other in by_dst.get(&op.src).into_iter().flatten() {
                    if let Ok(o) = move1(other, &op) {
                        found.push(o);
                    }
                }
                if op.src == op.dst {
                    if let Ok(o) = move1(&op, &op) {
                        found.push(o);
                    }
                }
                by_src.entry(op.src).or_default().push(op.clone());
                by_dst.entry(op.dst).or_default().push(op.clone());
            }
            for o in found {
                push(o, &mut ops, &mut queue);
            }
        }
        Closure::from_ops(pattern, bounds, ops)
    }

    /// Closure of the built-in base operations.
    pub fn generate(pattern: Pattern, bounds: Bounds) -> Result<Closure, ComputeError> {
        Ok(Closure::generate_from(pattern, &base_operations(pattern)?, bounds))
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn operations(&self) -> impl Iterator<Item = &ModuleOp> {
        self.ops.iter()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn contains(&self, op: &ModuleOp) -> bool {
        self.ops.contains(op)
    }

    /// Whether a query is determined exactly by the closure. The quantities
    /// `len + 2w` and `u + v` never decrease along a move, so every ancestor
    /// of such an operation survives the pruning.
    pub fn covers(&self, len: usize, w: u32) -> bool {
        w <= self.bounds.max_w && len + 2 * w as usize <= self.bounds.max_len
    }

    /// Outputs of `m^w(x, seq)` with total power at most `max_uv`.
    pub fn query(&self, x: Gen, seq: &[Chord], w: u32) -> Lookup {
        if !self.covers(seq.len(), w) {
            return Lookup::Unknown;
        }
        Lookup::Known(self.index.get(&(x, seq.to_vec(), w)).cloned().unwrap_or_default())
    }

    /// Whether some operation from `x` starts with the chords of `seq`.
    pub fn has_prefix(&self, x: Gen, seq: &[Chord]) -> bool {
        self.prefixes.contains(&(x, seq.to_vec()))
    }

    /// The operations with `v = 0`.
    pub fn hat_part(&self) -> BTreeSet<ModuleOp> {
        self.ops.iter().filter(|o| o.v == 0).cloned().collect()
    }

    pub fn to_document(&self) -> ClosureDocument {
        let (kind, p) = match self.pattern {
            Pattern::SolidTorus => ("solid-torus".to_string(), None),
            Pattern::Cable(p) => ("cable".to_string(), Some(p)),
        };
        ClosureDocument { pattern: kind, p, bounds: self.bounds, operations: self.ops.iter().cloned().collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }

    pub fn from_document(doc: ClosureDocument) -> Result<Closure, ComputeError> {
        let pattern = match (doc.pattern.as_str(), doc.p) {
            ("solid-torus", _) => Pattern::SolidTorus,
            ("cable", Some(p)) if p >= 2 => Pattern::Cable(p),
            (other, p) => return Err(ComputeError::Invalid(format!("unknown pattern {other} (p = {p:?})"))),
        };
        Ok(Closure::from_ops(pattern, doc.bounds, doc.operations.into_iter().collect()))
    }

    pub fn from_json(text: &str) -> Result<Closure, ComputeError> {
        let doc: ClosureDocument =
            serde_json::from_str(text).map_err(|e| ComputeError::Invalid(e.to_string()))?;
        Closure::from_document(doc)
    }
}

/// Serialized form of a closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureDocument {
    pub pattern: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u16>,
    pub bounds: Bounds,
    pub operations: Vec<ModuleOp>,
}
