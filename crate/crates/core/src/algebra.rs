//! Basic elements of the weighted torus algebra: idempotents, Reeb chords,
//! monomials over F2[U,V] and finite sums of monomials.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// One of the two idempotents of the torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Idempotent {
    I0,
    I1,
}

impl Idempotent {
    pub fn index(self) -> u8 {
        match self {
            Idempotent::I0 => 0,
            Idempotent::I1 => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Idempotent::I0),
            1 => Some(Idempotent::I1),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Idempotent::I0 => Idempotent::I1,
            Idempotent::I1 => Idempotent::I0,
        }
    }
}

impl fmt::Display for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i{}", self.index())
    }
}

/// Label following `l` in the cyclic order 1, 2, 3, 4, 1, ...
pub fn next_label(l: u8) -> u8 {
    l % 4 + 1
}

/// Label preceding `l` in the cyclic order.
pub fn prev_label(l: u8) -> u8 {
    (l + 2) % 4 + 1
}

/// Reduce any integer to a label in 1..=4.
pub fn label_mod(x: i64) -> u8 {
    match x.rem_euclid(4) as u8 {
        0 => 4,
        r => r,
    }
}

/// A Reeb chord `rho_{s, s+1, ..., s+len-1}` with labels read mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    start: u8,
    len: u32,
}

impl Chord {
    pub fn new(start: u8, len: u32) -> Option<Chord> {
        if (1..=4).contains(&start) && len >= 1 {
            Some(Chord { start, len })
        } else {
            None
        }
    }

    /// The length-one chord `rho_i`.
    pub fn rho(i: u8) -> Chord {
        Chord::new(i, 1).expect("label must lie in 1..=4")
    }

    pub fn start(self) -> u8 {
        self.start
    }

    pub fn len(self) -> u32 {
        self.len
    }

    /// The `k`-th label (0-based).
    pub fn label(self, k: u32) -> u8 {
        ((self.start as u32 - 1 + k) % 4 + 1) as u8
    }

    pub fn last_label(self) -> u8 {
        self.label(self.len - 1)
    }

    pub fn labels(self) -> impl Iterator<Item = u8> {
        (0..self.len).map(move |k| self.label(k))
    }

    pub fn left_idempotent(self) -> Idempotent {
        if self.start % 2 == 1 {
            Idempotent::I0
        } else {
            Idempotent::I1
        }
    }

    pub fn right_idempotent(self) -> Idempotent {
        if self.last_label() % 2 == 1 {
            Idempotent::I1
        } else {
            Idempotent::I0
        }
    }

    /// Concatenation product; `None` when the product vanishes.
    pub fn then(self, other: Chord) -> Option<Chord> {
        if other.start == next_label(self.last_label()) {
            Some(Chord { start: self.start, len: self.len + other.len })
        } else {
            None
        }
    }

    /// Split off the first `t` labels: `(first t labels, remainder)`.
    pub fn split_front(self, t: u32) -> Option<(Chord, Chord)> {
        if t == 0 || t >= self.len {
            return None;
        }
        Some((
            Chord { start: self.start, len: t },
            Chord { start: self.label(t), len: self.len - t },
        ))
    }

    /// Split off the last `t` labels: `(remainder, last t labels)`.
    pub fn split_back(self, t: u32) -> Option<(Chord, Chord)> {
        if t == 0 || t >= self.len {
            return None;
        }
        self.split_front(self.len - t)
    }

    /// Chord obtained by appending one label at the end.
    pub fn extend_back(self) -> Chord {
        Chord { start: self.start, len: self.len + 1 }
    }

    /// Chord obtained by prepending one label at the front.
    pub fn extend_front(self) -> Chord {
        Chord { start: prev_label(self.start), len: self.len + 1 }
    }

    /// True when some label of the chord is 4, i.e. the chord is not in the
    /// hat torus algebra.
    pub fn contains_four(self) -> bool {
        self.len >= 4 || self.labels().any(|l| l == 4)
    }

    /// The four length-4 chords.
    pub fn full_orbits() -> [Chord; 4] {
        [1, 2, 3, 4].map(|s| Chord { start: s, len: 4 })
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r")?;
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Chord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let digits = s
            .strip_prefix('r')
            .ok_or_else(|| ParseError::new(s, "chord must start with 'r'"))?;
        let labels: Vec<u8> = digits
            .chars()
            .map(|c| match c {
                '1'..='4' => Ok(c as u8 - b'0'),
                _ => Err(ParseError::new(s, "chord labels must be digits 1-4")),
            })
            .collect::<Result<_, _>>()?;
        if labels.is_empty() {
            return Err(ParseError::new(s, "chord needs at least one label"));
        }
        for w in labels.windows(2) {
            if w[1] != next_label(w[0]) {
                return Err(ParseError::new(s, "chord labels must be cyclically consecutive"));
            }
        }
        Ok(Chord { start: labels[0], len: labels.len() as u32 })
    }
}

impl Serialize for Chord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.start, self.len).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Chord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (start, len) = <(u8, u32)>::deserialize(deserializer)?;
        Chord::new(start, len)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid chord [{start},{len}]")))
    }
}

/// A basis element of the non-U part of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basic {
    Idem(Idempotent),
    Chord(Chord),
}

impl Basic {
    pub fn left_idempotent(self) -> Idempotent {
        match self {
            Basic::Idem(i) => i,
            Basic::Chord(c) => c.left_idempotent(),
        }
    }

    pub fn right_idempotent(self) -> Idempotent {
        match self {
            Basic::Idem(i) => i,
            Basic::Chord(c) => c.right_idempotent(),
        }
    }

    pub fn chord(self) -> Option<Chord> {
        match self {
            Basic::Chord(c) => Some(c),
            Basic::Idem(_) => None,
        }
    }

    pub fn len(self) -> u32 {
        match self {
            Basic::Idem(_) => 0,
            Basic::Chord(c) => c.len(),
        }
    }

    /// The mu_2^0 product of two basic elements.
    pub fn multiply(self, other: Basic) -> Option<Basic> {
        match (self, other) {
            (Basic::Idem(a), Basic::Idem(b)) => (a == b).then_some(Basic::Idem(a)),
            (Basic::Idem(a), Basic::Chord(c)) => (c.left_idempotent() == a).then_some(other),
            (Basic::Chord(c), Basic::Idem(b)) => (c.right_idempotent() == b).then_some(self),
            (Basic::Chord(a), Basic::Chord(b)) => a.then(b).map(Basic::Chord),
        }
    }
}

impl From<Chord> for Basic {
    fn from(c: Chord) -> Self {
        Basic::Chord(c)
    }
}

impl From<Idempotent> for Basic {
    fn from(i: Idempotent) -> Self {
        Basic::Idem(i)
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Idem(i) => write!(f, "{i}"),
            Basic::Chord(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for Basic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "i0" => Ok(Basic::Idem(Idempotent::I0)),
            "i1" => Ok(Basic::Idem(Idempotent::I1)),
            t => t.parse().map(Basic::Chord),
        }
    }
}

/// `U^u V^v` times a basic element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
    pub basic: Basic,
}

impl Monomial {
    pub fn new(u: u32, v: u32, basic: impl Into<Basic>) -> Self {
        Monomial { u, v, basic: basic.into() }
    }

    pub fn basic(basic: impl Into<Basic>) -> Self {
        Monomial::new(0, 0, basic)
    }

    pub fn shifted(self, du: u32, dv: u32) -> Self {
        Monomial { u: self.u + du, v: self.v + dv, basic: self.basic }
    }

    pub fn multiply(self, other: Monomial) -> Option<Monomial> {
        self.basic
            .multiply(other.basic)
            .map(|b| Monomial { u: self.u + other.u, v: self.v + other.v, basic: b })
    }
}

impl From<Basic> for Monomial {
    fn from(b: Basic) -> Self {
        Monomial::basic(b)
    }
}

impl From<Chord> for Monomial {
    fn from(c: Chord) -> Self {
        Monomial::basic(c)
    }
}

impl From<Idempotent> for Monomial {
    fn from(i: Idempotent) -> Self {
        Monomial::basic(i)
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, k: u32) -> fmt::Result {
    match k {
        0 => Ok(()),
        1 => write!(f, "{var}*"),
        _ => write!(f, "{var}^{k}*"),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power(f, "U", self.u)?;
        write_power(f, "V", self.v)?;
        write!(f, "{}", self.basic)
    }
}

impl FromStr for Monomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut u, mut v, mut basic) = (0u32, 0u32, None);
        for factor in s.trim().split('*') {
            let factor = factor.trim();
            let (var, exp) = match factor.split_once('^') {
                Some((var, exp)) => {
                    let e = exp
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| ParseError::new(s, "bad exponent"))?;
                    (var.trim(), e)
                }
                None => (factor, 1),
            };
            match var {
                "U" => u += exp,
                "V" => v += exp,
                _ if factor.contains('^') => {
                    return Err(ParseError::new(s, "only U and V take exponents"))
                }
                _ => {
                    if basic.is_some() {
                        return Err(ParseError::new(s, "more than one basic factor"));
                    }
                    basic = Some(factor.parse::<Basic>()?);
                }
            }
        }
        let basic = basic.ok_or_else(|| ParseError::new(s, "missing idempotent or chord"))?;
        Ok(Monomial { u, v, basic })
    }
}

/// A finite F2-linear combination of monomials (presence means coefficient 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Add one monomial, cancelling an existing copy.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign_element(&mut self, other: &Element) {
        for m in &other.terms {
            self.toggle(*m);
        }
    }

    pub fn shifted(&self, du: u32, dv: u32) -> Element {
        self.terms.iter().map(|m| m.shifted(du, dv)).collect()
    }

    /// Drop monomials whose filtration level exceeds `cutoff`.
    pub fn truncated(&self, cutoff: u32, enriched: bool) -> Element {
        self.terms
            .iter()
            .filter(|m| if enriched { m.u + m.v <= cutoff } else { m.u <= cutoff })
            .copied()
            .collect()
    }

    pub fn multiply(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for a in &self.terms {
            for b in &other.terms {
                if let Some(p) = a.multiply(*b) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    /// Evaluation map V = 1.
    pub fn set_v_one(&self) -> Element {
        self.terms.iter().map(|m| Monomial { v: 0, ..*m }).collect()
    }

    /// Evaluation map U = 1.
    pub fn set_u_one(&self) -> Element {
        self.terms.iter().map(|m| Monomial { u: 0, ..*m }).collect()
    }

    /// The unit `i0 + i1`.
    pub fn one() -> Element {
        [Idempotent::I0, Idempotent::I1].into_iter().map(Monomial::from).collect()
    }
}

impl FromIterator<Monomial> for Element {
    fn from_iter<T: IntoIterator<Item = Monomial>>(iter: T) -> Self {
        let mut e = Element::zero();
        for m in iter {
            e.toggle(m);
        }
        e
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        std::iter::once(m).collect()
    }
}

impl From<Chord> for Element {
    fn from(c: Chord) -> Self {
        Monomial::from(c).into()
    }
}

impl From<Basic> for Element {
    fn from(b: Basic) -> Self {
        Monomial::from(b).into()
    }
}

impl Add for Element {
    type Output = Element;

    fn add(mut self, rhs: Element) -> Element {
        self.add_assign_element(&rhs);
        self
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign_element(rhs);
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Element {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Element::zero());
        }
        s.split('+').map(|t| t.parse::<Monomial>()).collect()
    }
}

/// Parse a comma-separated list of chords, e.g. `r4,r3,r2,r123`.
pub fn parse_chord_list(s: &str) -> Result<Vec<Chord>, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse()).collect()
}

/// True when consecutive chords have matching idempotents.
pub fn composable(seq: &[Chord]) -> bool {
    seq.windows(2).all(|w| w[0].right_idempotent() == w[1].left_idempotent())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_wrap() {
        let c: Chord = "r4123".parse().unwrap();
        assert_eq!(c.start(), 4);
        assert_eq!(c.len(), 4);
        assert_eq!(c.labels().collect::<Vec<_>>(), vec![4, 1, 2, 3]);
        assert_eq!(c.to_string(), "r4123");
    }

    #[test]
    fn idempotents_of_single_chords() {
        use Idempotent::*;
        let expect = [(1, I0, I1), (2, I1, I0), (3, I0, I1), (4, I1, I0)];
        for (i, l, r) in expect {
            assert_eq!(Chord::rho(i).left_idempotent(), l);
            assert_eq!(Chord::rho(i).right_idempotent(), r);
        }
    }

    #[test]
    fn rejects_non_consecutive_labels() {
        assert!("r13".parse::<Chord>().is_err());
        assert!("r".parse::<Chord>().is_err());
        assert!("r15".parse::<Chord>().is_err());
    }

    #[test]
    fn splitting() {
        let c: Chord = "r123".parse().unwrap();
        let (a, b) = c.split_front(1).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("r1".into(), "r23".into()));
        let (a, b) = c.split_back(2).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("r1".into(), "r23".into()));
        assert!(c.split_back(3).is_none());
        assert!(c.split_front(0).is_none());
    }

    #[test]
    fn element_text_round_trip() {
        for s in ["i0", "r123", "U^2*V*r41", "U*r23 + U^4*i1", "0"] {
            let e: Element = s.parse().unwrap();
            let printed = e.to_string();
            let again: Element = printed.parse().unwrap();
            assert_eq!(e, again, "{s}");
        }
        assert_eq!("U^2*V*r41".parse::<Element>().unwrap().to_string(), "U^2*V*r41");
    }

    #[test]
    fn characteristic_two() {
        let a: Element = "r1 + r1".parse().unwrap();
        assert!(a.is_zero());
    }
}
