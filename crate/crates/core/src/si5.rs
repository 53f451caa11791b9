//! Unions of open integer intervals and integer points on the circle ℝ/5ℤ.
//!
//! A set is stored as a membership mask over ten atoms: the five open unit
//! intervals `(k, k+1)` and the five integer points `k`. Every set the flow
//! engine needs is a union of atoms, so all operations are exact table
//! lookups.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

/// Modulus of the circle group.
pub const MODULUS: i64 = 5;

/// One of the ten building blocks of a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// The open arc `(k, k+1)`.
    Interval(u8),
    /// The single value `k`.
    Point(u8),
}

impl Atom {
    /// All atoms in canonical order: `U0..U4` then `P0..P4`.
    pub const ALL: [Atom; 10] = [
        Atom::Interval(0),
        Atom::Interval(1),
        Atom::Interval(2),
        Atom::Interval(3),
        Atom::Interval(4),
        Atom::Point(0),
        Atom::Point(1),
        Atom::Point(2),
        Atom::Point(3),
        Atom::Point(4),
    ];

    pub fn index(self) -> u8 {
        match self {
            Atom::Interval(k) | Atom::Point(k) => k,
        }
    }

    fn bit(self) -> u16 {
        match self {
            Atom::Interval(k) => 1 << k,
            Atom::Point(k) => 1 << (5 + k),
        }
    }

    pub fn negate(self) -> Atom {
        match self {
            Atom::Interval(k) => Atom::Interval((4 + 5 - k) % 5),
            Atom::Point(k) => Atom::Point((5 - k) % 5),
        }
    }

    /// Atom-level Minkowski sum.
    fn sum(self, other: Atom) -> AtomSet {
        let m = |k: u8| k % 5;
        match (self, other) {
            (Atom::Interval(i), Atom::Interval(j)) => AtomSet::from_atoms([
                Atom::Interval(m(i + j)),
                Atom::Point(m(i + j + 1)),
                Atom::Interval(m(i + j + 1)),
            ]),
            (Atom::Interval(i), Atom::Point(j)) | (Atom::Point(j), Atom::Interval(i)) => {
                AtomSet::from_atoms([Atom::Interval(m(i + j))])
            }
            (Atom::Point(i), Atom::Point(j)) => AtomSet::from_atoms([Atom::Point(m(i + j))]),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Interval(k) => write!(f, "({},{})", k, (k + 1) % 5),
            Atom::Point(k) => write!(f, "{{{k}}}"),
        }
    }
}

/// An exact element of ℝ/5ℤ, kept reduced into `[0, 5)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mod5(Ratio<i64>);

impl Mod5 {
    pub fn new(value: Ratio<i64>) -> Self {
        let five = Ratio::from_integer(MODULUS);
        let q = (value / five).floor();
        Mod5(value - q * five)
    }

    pub fn from_fraction(numer: i64, denom: i64) -> Self {
        Self::new(Ratio::new(numer, denom))
    }

    pub fn from_int(value: i64) -> Self {
        Self::new(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Mod5(Ratio::zero())
    }

    pub fn value(self) -> Ratio<i64> {
        self.0
    }

    /// The unique atom containing this value.
    pub fn atom(self) -> Atom {
        let floor = self.0.floor().to_integer() as u8;
        if self.0.is_integer() {
            Atom::Point(floor)
        } else {
            Atom::Interval(floor)
        }
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }
}

impl Add for Mod5 {
    type Output = Mod5;
    fn add(self, rhs: Mod5) -> Mod5 {
        Mod5::new(self.0 + rhs.0)
    }
}

impl Sub for Mod5 {
    type Output = Mod5;
    fn sub(self, rhs: Mod5) -> Mod5 {
        Mod5::new(self.0 - rhs.0)
    }
}

impl Neg for Mod5 {
    type Output = Mod5;
    fn neg(self) -> Mod5 {
        Mod5::new(-self.0)
    }
}

impl fmt::Display for Mod5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Mod5 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: i64 = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Mod5::from_fraction(n, d))
    }
}

/// A maximal component of a set, or a point that no interval absorbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    /// The whole circle.
    Full,
    /// Open clockwise arc from `start` to `end`; `start == end` is the
    /// circle punctured at `start`.
    Arc {
        start: u8,
        end: u8,
    },
    Point(u8),
}

impl Piece {
    /// Arc length in unit intervals (5 for a punctured circle, 0 for a point).
    pub fn len(self) -> u8 {
        match self {
            Piece::Full => 5,
            Piece::Arc { start, end } => match (end + 5 - start) % 5 {
                0 => 5,
                l => l,
            },
            Piece::Point(_) => 0,
        }
    }

    fn position(self) -> u8 {
        match self {
            Piece::Full => 0,
            Piece::Arc { start, .. } => 2 * start + 1,
            Piece::Point(k) => 2 * k,
        }
    }

    pub fn atoms(self) -> AtomSet {
        match self {
            Piece::Full => AtomSet::FULL,
            Piece::Point(k) => AtomSet::from_atoms([Atom::Point(k)]),
            Piece::Arc { start, .. } => {
                let mut set = AtomSet::EMPTY;
                for j in 0..self.len() {
                    set.insert(Atom::Interval((start + j) % 5));
                    if j > 0 {
                        set.insert(Atom::Point((start + j) % 5));
                    }
                }
                set
            }
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Full => f.write_str("full"),
            Piece::Arc { start, end } => write!(f, "({start},{end})"),
            Piece::Point(k) => write!(f, "{{{k}}}"),
        }
    }
}

/// Any subset of the ten atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AtomSet(u16);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);
    pub const FULL: AtomSet = AtomSet(0x3ff);

    pub fn from_mask(mask: u16) -> Self {
        AtomSet(mask & 0x3ff)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn from_atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let mut set = AtomSet::EMPTY;
        for atom in atoms {
            set.insert(atom);
        }
        set
    }

    pub fn insert(&mut self, atom: Atom) {
        self.0 |= atom.bit();
    }

    pub fn remove(&mut self, atom: Atom) {
        self.0 &= !atom.bit();
    }

    pub fn has(self, atom: Atom) -> bool {
        self.0 & atom.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn atoms(self) -> impl Iterator<Item = Atom> {
        Atom::ALL.into_iter().filter(move |a| self.has(*a))
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn contains(self, x: Mod5) -> bool {
        self.has(x.atom())
    }

    /// Number of unit intervals in the set.
    pub fn measure(self) -> u32 {
        (self.0 & 0x1f).count_ones()
    }

    pub fn is_symmetric(self) -> bool {
        self.negate() == self
    }

    /// Every point is flanked by both adjacent unit intervals, which is
    /// exactly the condition for being a union of open integer intervals.
    pub fn is_valid_union(self) -> bool {
        (0..5u8).all(|k| {
            !self.has(Atom::Point(k))
                || (self.has(Atom::Interval((k + 4) % 5)) && self.has(Atom::Interval(k)))
        })
    }

    pub fn negate(self) -> AtomSet {
        AtomSet::from_atoms(self.atoms().map(Atom::negate))
    }

    pub fn intersect(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 & other.0)
    }

    pub fn complement(self) -> AtomSet {
        AtomSet(!self.0 & 0x3ff)
    }

    pub fn union(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 | other.0)
    }

    pub fn minkowski_sum(self, other: AtomSet) -> AtomSet {
        let mut out = AtomSet::EMPTY;
        for a in self.atoms() {
            for b in other.atoms() {
                out = out.union(a.sum(b));
            }
        }
        out
    }

    /// Decomposition into maximal arcs plus points not absorbed by any arc,
    /// ordered by position on the circle.
    pub fn pieces(self) -> Vec<Piece> {
        if self == AtomSet::FULL {
            return vec![Piece::Full];
        }
        // Cyclic order P0 U0 P1 U1 ... P4 U4; position 2k is P_k, 2k+1 is U_k.
        let covered = |pos: u8| {
            let pos = pos % 10;
            if pos % 2 == 0 {
                self.has(Atom::Point(pos / 2))
            } else {
                self.has(Atom::Interval(pos / 2))
            }
        };
        let gap = (0..10u8).find(|&p| !covered(p)).expect("set is not full");
        let mut pieces = Vec::new();
        let mut pos = gap + 1;
        while pos <= gap + 10 {
            if !covered(pos) {
                pos += 1;
                continue;
            }
            let mut start = pos;
            let mut end = pos;
            while end < gap + 10 && covered(end + 1) {
                end += 1;
            }
            pos = end + 1;
            if start % 2 == 0 {
                pieces.push(Piece::Point((start % 10) / 2));
                start += 1;
            }
            if start > end {
                continue;
            }
            if end % 2 == 0 {
                pieces.push(Piece::Point((end % 10) / 2));
                end -= 1;
            }
            let a = (start % 10) / 2;
            let b = ((end % 10) / 2 + 1) % 5;
            pieces.push(Piece::Arc { start: a, end: b });
        }
        pieces.sort_by_key(|p| p.position());
        pieces
    }

    /// The maximal arcs of a valid set (the full circle is a single item).
    pub fn maximal_intervals(self) -> Vec<Piece> {
        self.pieces()
            .into_iter()
            .filter(|p| !matches!(p, Piece::Point(_)))
            .collect()
    }

    pub fn canonical_string(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self.pieces().iter().map(Piece::to_string).collect();
        f.write_str(&parts.join("u"))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AtomSet({self})")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseSetError {
    #[error("at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0} is not a union of open integer intervals")]
    NotAUnion(String),
    #[error("{0} is not symmetric")]
    NotSymmetric(String),
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseSetError {
    ParseSetError::Syntax {
        pos,
        msg: msg.into(),
    }
}

impl FromStr for AtomSet {
    type Err = ParseSetError;

    /// Parses `term ("u" term)*` with `term := "(a,b)" | "{k}" | "empty" | "full"`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let digit = |pos: &mut usize| -> Result<u8, ParseSetError> {
            match bytes.get(*pos) {
                Some(c @ b'0'..=b'4') => {
                    *pos += 1;
                    Ok(c - b'0')
                }
                _ => Err(syntax(*pos, "expected a digit 0..4")),
            }
        };
        let expect = |pos: &mut usize, c: u8| -> Result<(), ParseSetError> {
            if bytes.get(*pos) == Some(&c) {
                *pos += 1;
                Ok(())
            } else {
                Err(syntax(*pos, format!("expected {:?}", c as char)))
            }
        };

        let mut set = AtomSet::EMPTY;
        loop {
            skip_ws(&mut pos);
            let rest = &text[pos..];
            if rest.starts_with("empty") {
                pos += 5;
            } else if rest.starts_with("full") {
                pos += 4;
                set = AtomSet::FULL;
            } else if rest.starts_with('(') {
                pos += 1;
                let a = digit(&mut pos)?;
                expect(&mut pos, b',')?;
                let b = digit(&mut pos)?;
                expect(&mut pos, b')')?;
                set = set.union(Piece::Arc { start: a, end: b }.atoms());
            } else if rest.starts_with('{') {
                pos += 1;
                let k = digit(&mut pos)?;
                expect(&mut pos, b'}')?;
                set.insert(Atom::Point(k));
            } else {
                return Err(syntax(pos, "expected a term"));
            }
            skip_ws(&mut pos);
            if pos == bytes.len() {
                return Ok(set);
            }
            expect(&mut pos, b'u')?;
        }
    }
}

/// A valid, symmetric atom set: an element of the family SI₅.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Si5Set(AtomSet);

impl Si5Set {
    pub const EMPTY: Si5Set = Si5Set(AtomSet::EMPTY);
    pub const FULL: Si5Set = Si5Set(AtomSet::FULL);

    pub fn new(set: AtomSet) -> Result<Self, ParseSetError> {
        if !set.is_valid_union() {
            Err(ParseSetError::NotAUnion(set.to_string()))
        } else if !set.is_symmetric() {
            Err(ParseSetError::NotSymmetric(set.to_string()))
        } else {
            Ok(Si5Set(set))
        }
    }

    pub fn atoms(self) -> AtomSet {
        self.0
    }

    pub fn measure(self) -> u32 {
        self.0.measure()
    }

    pub fn contains(self, x: Mod5) -> bool {
        self.0.contains(x)
    }

    pub fn is_subset(self, other: Si5Set) -> bool {
        self.0.is_subset(other.0)
    }

    pub fn intersect(self, other: Si5Set) -> Si5Set {
        Si5Set(self.0.intersect(other.0))
    }

    pub fn minkowski_sum(self, other: Si5Set) -> Si5Set {
        Si5Set(self.0.minkowski_sum(other.0))
    }

    pub fn negate(self) -> Si5Set {
        self
    }

    pub fn maximal_intervals(self) -> Vec<Piece> {
        self.0.maximal_intervals()
    }

    pub fn canonical_string(self) -> String {
        self.0.to_string()
    }

    /// `(1,4)`, the capacity of an ordinary edge.
    pub fn standard() -> Si5Set {
        named("(1,4)")
    }
}

/// Parses a set literal known to be valid; panics otherwise.
pub fn named(text: &str) -> Si5Set {
    text.parse()
        .unwrap_or_else(|e| panic!("bad set literal {text:?}: {e}"))
}

impl FromStr for Si5Set {
    type Err = ParseSetError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Si5Set::new(text.parse()?)
    }
}

impl From<Si5Set> for AtomSet {
    fn from(s: Si5Set) -> AtomSet {
        s.0
    }
}

impl fmt::Display for Si5Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Si5Set {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Si5Set({})", self.0)
    }
}

/// All 21 elements of SI₅ in ascending mask order.
pub fn enumerate_si5() -> Vec<Si5Set> {
    (0u16..1024)
        .map(AtomSet::from_mask)
        .filter(|s| s.is_valid_union() && s.is_symmetric())
        .map(Si5Set)
        .collect()
}

/// Orders values by their representative in `[0, 5)`.
impl PartialOrd for Mod5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mod5 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}
