//! The grading groups `G'`, `G` and `G' x Z`, algebra gradings, and cosets of
//! cyclic subgroups.
//!
//! All half-integer components are stored doubled, so arithmetic is exact
//! integer arithmetic.

use std::fmt;

use crate::algebra::{Basic, Chord, Monomial};
use crate::cfa::{Gen, ModuleOp};
use crate::error::ComputeError;

/// Operations shared by the three grading groups.
pub trait GroupElement: Copy + Eq + fmt::Debug + fmt::Display {
    fn identity() -> Self;
    fn mul(self, other: Self) -> Self;
    fn inv(self) -> Self;
    /// Doubled components other than the Maslov component.
    fn spinc(self) -> Vec<i64>;

    fn pow(self, k: i64) -> Self {
        let (base, n) = if k < 0 { (self.inv(), -k) } else { (self, k) };
        let mut out = Self::identity();
        for _ in 0..n {
            out = out.mul(base);
        }
        out
    }

    fn product(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().fold(Self::identity(), Self::mul)
    }
}

fn write_half(f: &mut fmt::Formatter<'_>, x2: i64) -> fmt::Result {
    if x2 % 2 == 0 {
        write!(f, "{}", x2 / 2)
    } else {
        write!(f, "{x2}/2")
    }
}

/// An element `(m; a, b, c, d)` of the big grading group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BigGrading {
    /// Twice the Maslov component.
    pub m2: i64,
    pub s: [i64; 4],
}

impl BigGrading {
    pub fn new(m2: i64, s: [i64; 4]) -> BigGrading {
        BigGrading { m2, s }
    }

    pub fn maslov2(self) -> i64 {
        self.m2
    }

    /// `lambda = (1; 0, 0, 0, 0)`.
    pub fn lambda() -> BigGrading {
        BigGrading::new(2, [0; 4])
    }

    /// `lambda_w = (1; 1, 1, 1, 1)`.
    pub fn lambda_w() -> BigGrading {
        BigGrading::new(2, [1; 4])
    }

    /// `gr'(U) = (-1; 1, 1, 1, 1)`.
    pub fn u() -> BigGrading {
        BigGrading::new(-2, [1; 4])
    }

    pub fn rho(i: u8) -> BigGrading {
        let mut s = [0; 4];
        s[(i - 1) as usize] = 1;
        BigGrading::new(-1, s)
    }

    pub fn chord(c: Chord) -> BigGrading {
        BigGrading::product(c.labels().map(BigGrading::rho))
    }
}

impl GroupElement for BigGrading {
    fn identity() -> Self {
        BigGrading::new(0, [0; 4])
    }

    fn mul(self, o: Self) -> Self {
        let (a, b) = (self.s, o.s);
        let det = |i: usize, j: usize| a[i] * b[j] - a[j] * b[i];
        let m2 = self.m2 + o.m2 + det(0, 1) + det(1, 2) + det(2, 3) + det(3, 0);
        BigGrading::new(m2, [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }

    fn inv(self) -> Self {
        BigGrading::new(-self.m2, self.s.map(|x| -x))
    }

    fn spinc(self) -> Vec<i64> {
        self.s.iter().map(|x| 2 * x).collect()
    }
}

impl fmt::Display for BigGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_half(f, self.m2)?;
        let [a, b, c, d] = self.s;
        write!(f, "; {a}, {b}, {c}, {d})")
    }
}

/// An element `(m; a, b)` of the intermediate grading group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    pub m2: i64,
    pub a2: i64,
    pub b2: i64,
}

impl Grading {
    /// Build from doubled components; `None` outside the group.
    pub fn new(m2: i64, a2: i64, b2: i64) -> Option<Grading> {
        let g = Grading { m2, a2, b2 };
        g.is_member().then_some(g)
    }

    /// Build from components given in halves, panicking outside the group.
    pub fn halves(m2: i64, a2: i64, b2: i64) -> Grading {
        Grading::new(m2, a2, b2).expect("element of G")
    }

    /// Membership: `a + b` integral and the Maslov parity condition.
    pub fn is_member(self) -> bool {
        if (self.a2 + self.b2).rem_euclid(2) != 0 {
            return false;
        }
        let t = (self.a2 + 1) * ((self.a2 + self.b2) / 2 + 1) + 1;
        (self.m2 + t).rem_euclid(2) == 0
    }

    pub fn maslov2(self) -> i64 {
        self.m2
    }

    /// `lambda = (1; 0, 0)`.
    pub fn lambda() -> Grading {
        Grading { m2: 2, a2: 0, b2: 0 }
    }

    /// `gr(U) = (-2; 0, 0)`.
    pub fn u() -> Grading {
        Grading { m2: -4, a2: 0, b2: 0 }
    }

    /// Tabulated gradings of chords of length 1 to 3.
    fn short_chord(c: Chord) -> Grading {
        let (m2, a2, b2) = match (c.start(), c.len()) {
            (1, 1) => (-1, 1, -1),
            (2, 1) => (-1, 1, 1),
            (3, 1) => (-1, -1, 1),
            (4, 1) => (-3, -1, -1),
            (1, 2) => (-1, 2, 0),
            (2, 2) => (-1, 0, 2),
            (3, 2) => (-3, -2, 0),
            (4, 2) => (-3, 0, -2),
            (1, 3) => (-1, 1, 1),
            (2, 3) => (-3, -1, 1),
            (3, 3) => (-3, -1, -1),
            (4, 3) => (-3, 1, -1),
            _ => unreachable!("short chords have length 1 to 3"),
        };
        Grading { m2, a2, b2 }
    }

    /// The grading of a chord by factorization: the leading `4k` labels
    /// contribute `(-2k; 0, 0)` and the remaining labels are tabulated.
    pub fn chord(c: Chord) -> Grading {
        let k = (c.len() / 4) as i64;
        let tail = match c.len() % 4 {
            0 => Grading::identity(),
            r => Grading::short_chord(Chord::new(c.label(c.len() - r), r).expect("chord")),
        };
        Grading { m2: tail.m2 - 4 * k, ..tail }
    }
}

impl GroupElement for Grading {
    fn identity() -> Self {
        Grading { m2: 0, a2: 0, b2: 0 }
    }

    fn mul(self, o: Self) -> Self {
        let det2 = self.a2 * o.b2 - self.b2 * o.a2;
        debug_assert!(det2 % 2 == 0, "products stay inside G");
        Grading { m2: self.m2 + o.m2 + det2 / 2, a2: self.a2 + o.a2, b2: self.b2 + o.b2 }
    }

    fn inv(self) -> Self {
        Grading { m2: -self.m2, a2: -self.a2, b2: -self.b2 }
    }

    fn spinc(self) -> Vec<i64> {
        vec![self.a2, self.b2]
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_half(f, self.m2)?;
        write!(f, "; ")?;
        write_half(f, self.a2)?;
        write!(f, ", ")?;
        write_half(f, self.b2)?;
        write!(f, ")")
    }
}

/// An element of `G' x Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Enhanced {
    pub big: BigGrading,
    pub n: i64,
}

impl Enhanced {
    pub fn new(big: BigGrading, n: i64) -> Enhanced {
        Enhanced { big, n }
    }

    pub fn lift(big: BigGrading) -> Enhanced {
        Enhanced { big, n: 0 }
    }

    /// `U` is `(e, 1)`.
    pub fn u() -> Enhanced {
        Enhanced::new(BigGrading::identity(), 1)
    }

    /// `V` is `(gr'(U), -1)`: it carries the old U grading and counts
    /// against the extra component.
    pub fn v() -> Enhanced {
        Enhanced::new(BigGrading::u(), -1)
    }
}

impl GroupElement for Enhanced {
    fn identity() -> Self {
        Enhanced::lift(BigGrading::identity())
    }

    fn mul(self, o: Self) -> Self {
        Enhanced::new(self.big.mul(o.big), self.n + o.n)
    }

    fn inv(self) -> Self {
        Enhanced::new(self.big.inv(), -self.n)
    }

    fn spinc(self) -> Vec<i64> {
        let mut s = self.big.spinc();
        s.push(self.n);
        s
    }
}

impl fmt::Display for Enhanced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.big, self.n)
    }
}

/// Grading of a monomial in `G'`, with `U` graded by `gr'(U)` and `V`
/// by `v_grading`.
pub fn gr_prime(m: Monomial, u_grading: BigGrading, v_grading: BigGrading) -> BigGrading {
    let basic = match m.basic {
        Basic::Idem(_) => BigGrading::identity(),
        Basic::Chord(c) => BigGrading::chord(c),
    };
    u_grading.pow(m.u as i64).mul(v_grading.pow(m.v as i64)).mul(basic)
}

/// Grading of a monomial in `G`, with `U` graded `(-2; 0, 0)` and `V` by
/// `v_grading`.
pub fn gr(m: Monomial, v_grading: Grading) -> Grading {
    let basic = match m.basic {
        Basic::Idem(_) => Grading::identity(),
        Basic::Chord(c) => Grading::chord(c),
    };
    Grading::u().pow(m.u as i64).mul(v_grading.pow(m.v as i64)).mul(basic)
}

/// The Maslov component of `gr'(a_1) ... gr'(a_m)`, doubled.
pub fn iota2(seq: &[Chord]) -> Result<i64, ComputeError> {
    if !crate::algebra::composable(seq) {
        return Err(ComputeError::Invalid("chord sequence is not composable".into()));
    }
    Ok(BigGrading::product(seq.iter().map(|&c| BigGrading::chord(c))).m2)
}

/// The integer `l` with `d = h^l`, if any.
pub fn log_in_cyclic<G: GroupElement>(d: G, h: G) -> Option<i64> {
    let (ds, hs) = (d.spinc(), h.spinc());
    let mut l = None;
    for (x, y) in ds.iter().zip(&hs) {
        if *y == 0 {
            if *x != 0 {
                return None;
            }
            continue;
        }
        if x % y != 0 {
            return None;
        }
        match l {
            None => l = Some(x / y),
            Some(prev) if prev != x / y => return None,
            _ => {}
        }
    }
    let l = match l {
        Some(l) => l,
        None => return (d == G::identity()).then_some(0),
    };
    (h.pow(l) == d).then_some(l)
}

/// Which side the subgroup acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Right grading sets of type A modules: cosets `<h> g`.
    Right,
    /// Left grading sets of type D modules: cosets `g <h>`.
    Left,
}

/// Coset of the cyclic subgroup generated by `generator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coset<G: GroupElement> {
    pub representative: G,
    pub generator: G,
    pub side: Side,
}

impl<G: GroupElement> Coset<G> {
    pub fn new(representative: G, generator: G, side: Side) -> Self {
        Coset { representative, generator, side }
    }

    /// Equality of cosets; errors when the subgroups or sides differ.
    pub fn equals(&self, other: &Coset<G>) -> Result<bool, ComputeError> {
        if self.generator != other.generator || self.side != other.side {
            return Err(ComputeError::Invalid("cosets of different subgroups".into()));
        }
        Ok(same_coset(self.representative, other.representative, self.generator, self.side))
    }
}

/// Whether `g1` and `g2` lie in the same coset of `<h>`.
pub fn same_coset<G: GroupElement>(g1: G, g2: G, h: G, side: Side) -> bool {
    let d = match side {
        Side::Right => g1.mul(g2.inv()),
        Side::Left => g2.inv().mul(g1),
    };
    log_in_cyclic(d, h).is_some()
}

/// A grading of a type A module: generator gradings, the grading of the
/// variables, and the indeterminacy generator.
#[derive(Clone, Debug)]
pub struct ModuleGrading<G: GroupElement> {
    pub generators: Vec<(Gen, G)>,
    pub indeterminacy: G,
    pub u: G,
    pub v: G,
    pub lambda: G,
    pub lambda_w: G,
    pub chord: fn(Chord) -> G,
}

impl<G: GroupElement> ModuleGrading<G> {
    pub fn of(&self, g: Gen) -> Option<G> {
        self.generators.iter().find(|(h, _)| *h == g).map(|(_, x)| *x)
    }

    /// Both sides of the grading relation for one operation.
    pub fn sides(&self, op: &ModuleOp) -> Option<(G, G)> {
        let n = op.chords.len() as i64;
        let lhs = self.of(op.dst)?.mul(self.u.pow(op.u as i64)).mul(self.v.pow(op.v as i64));
        let rhs = self
            .of(op.src)?
            .mul(self.lambda.pow(n - 1))
            .mul(self.lambda_w.pow(op.w as i64))
            .mul(G::product(op.chords.iter().map(|&c| (self.chord)(c))));
        Some((lhs, rhs))
    }

    /// `gr(U^u V^v y) = gr(x) lambda^(n-1) lambda_w^w gr(a_1) ... gr(a_n)` as cosets.
    pub fn compatible(&self, op: &ModuleOp) -> bool {
        match self.sides(op) {
            Some((l, r)) => same_coset(l, r, self.indeterminacy, Side::Right),
            None => false,
        }
    }
}

fn g_chord(c: Chord) -> Grading {
    Grading::chord(c)
}

fn big_chord(c: Chord) -> BigGrading {
    BigGrading::chord(c)
}

fn enhanced_chord(c: Chord) -> Enhanced {
    Enhanced::lift(BigGrading::chord(c))
}

/// The solid torus module graded by `G`, with `gr(a) = e`.
pub fn solid_torus_grading() -> ModuleGrading<Grading> {
    ModuleGrading {
        generators: vec![(Gen::A, Grading::identity())],
        indeterminacy: Grading::lambda().mul(g_chord(Chord::rho(2))).mul(g_chord(Chord::rho(1))),
        u: Grading::u(),
        v: Grading::identity(),
        lambda: Grading::lambda(),
        lambda_w: Grading::identity(),
        chord: g_chord,
    }
}

/// The solid torus module graded by `G'`.
pub fn solid_torus_big_grading() -> ModuleGrading<BigGrading> {
    ModuleGrading {
        generators: vec![(Gen::A, BigGrading::identity())],
        indeterminacy: BigGrading::lambda().mul(BigGrading::rho(2)).mul(BigGrading::rho(1)),
        u: BigGrading::u(),
        v: BigGrading::identity(),
        lambda: BigGrading::lambda(),
        lambda_w: BigGrading::lambda_w(),
        chord: big_chord,
    }
}

/// Tabulated gradings of the cable generators in `G`:
/// `gr(b_{p-i}) = (1/2; i - 1/2, -1/2)` and `gr(c_{p-i}) = (-1/2; i - 1/2, -1/2)`.
pub fn cable_grading(p: u16) -> ModuleGrading<Grading> {
    let mut generators = vec![(Gen::X, Grading::identity())];
    for i in 1..p as i64 {
        let k = p - i as u16;
        generators.push((Gen::B(k), Grading::halves(1, 2 * i - 1, -1)));
        generators.push((Gen::C(k), Grading::halves(-1, 2 * i - 1, -1)));
    }
    ModuleGrading {
        generators,
        indeterminacy: Grading::halves(-1, 0, 2),
        u: Grading::identity(),
        v: Grading::u(),
        lambda: Grading::lambda(),
        lambda_w: Grading::identity(),
        chord: g_chord,
    }
}

/// Generator gradings of the cable built from the closed formulas
/// `b_i = lambda^(p-i) U^i rho_1 (rho_2 rho_1)^(p-i-1)` and
/// `c_i = lambda^(p-i-1) rho_1 (rho_2 rho_1)^(p-i-1)` in any grading group.
pub fn cable_formula<G: GroupElement>(p: u16, lambda: G, u: G, chord: fn(Chord) -> G) -> Vec<(Gen, G)> {
    let (r1, r2) = (chord(Chord::rho(1)), chord(Chord::rho(2)));
    let mut out = vec![(Gen::X, G::identity())];
    for i in 1..p {
        let e = (p - i) as i64;
        let tail = r1.mul(r2.mul(r1).pow(e - 1));
        out.push((Gen::B(i), lambda.pow(e).mul(u.pow(i as i64)).mul(tail)));
        out.push((Gen::C(i), lambda.pow(e - 1).mul(tail)));
    }
    out
}

/// The cable module graded by `G' x Z` via the closed formulas. The
/// indeterminacy is generated by `lambda U^(-p) rho_3 rho_2`, the grading
/// carried by the operation `m(x, rho_3, rho_2) = U^p x`.
pub fn cable_enhanced_grading(p: u16) -> ModuleGrading<Enhanced> {
    let lambda = Enhanced::lift(BigGrading::lambda());
    let indeterminacy = lambda
        .mul(Enhanced::u().pow(-(p as i64)))
        .mul(enhanced_chord(Chord::rho(3)))
        .mul(enhanced_chord(Chord::rho(2)));
    ModuleGrading {
        generators: cable_formula(p, lambda, Enhanced::u(), enhanced_chord),
        indeterminacy,
        u: Enhanced::u(),
        v: Enhanced::v(),
        lambda,
        lambda_w: Enhanced::lift(BigGrading::lambda_w()),
        chord: enhanced_chord,
    }
}
