//! Dimension-generic model of colour classes, edges, transversals and
//! octahedra, with canonical encodings and combinatorial generators.
//!
//! A colourful hypergraph on `d + 1` colour classes of `d + 1` points each has
//! edges picking exactly one point per colour. Edges are written as strings of
//! `d + 1` digits (one index per colour, colour 0 first) and transversals as
//! strings of `d` digits with `*` marking the omitted colour, so the base
//! 0-transversal is `*00...0`.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};

/// Largest supported dimension. d = 2 and 3 are the test oracles; the search
/// targets d = 4; 5 and 6 stay tractable for table work.
pub const MAX_DIMENSION: usize = 6;

/// Maximum number of colours (= MAX_DIMENSION + 1).
pub const MAX_COLOURS: usize = MAX_DIMENSION + 1;

/// Problem dimensions: `d + 1` colours with `d + 1` points per colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    d: u8,
}

impl Shape {
    pub fn new(d: usize) -> Result<Self> {
        if (1..=MAX_DIMENSION).contains(&d) {
            Ok(Shape { d: d as u8 })
        } else {
            Err(Error::InvalidDimension(d))
        }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d as usize
    }

    #[inline]
    pub fn colours(&self) -> usize {
        self.d as usize + 1
    }

    #[inline]
    pub fn points_per_colour(&self) -> usize {
        self.d as usize + 1
    }

    /// Total number of points, `(d + 1)^2`.
    pub fn point_count(&self) -> usize {
        self.colours() * self.points_per_colour()
    }

    /// Size of the full edge space, `(d + 1)^(d + 1)`.
    pub fn edge_space(&self) -> usize {
        self.colours().pow(self.colours() as u32)
    }

    /// Number of transversals omitting a fixed colour, `(d + 1)^d`.
    pub fn transversals_per_colour(&self) -> usize {
        self.colours().pow(self.d as u32)
    }

    /// Octahedra per colour: unordered pairs of disjoint transversals,
    /// `(d + 1)^d * d^d / 2`.
    pub fn octahedra_per_colour(&self) -> usize {
        self.transversals_per_colour() * self.d().pow(self.d as u32) / 2
    }
}

/// A single point, identified by colour class and index within the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub colour: u8,
    pub index: u8,
}

impl PointRef {
    pub fn new(shape: Shape, colour: usize, index: usize) -> Result<Self> {
        let n = shape.colours() as u64;
        if colour as u64 >= n {
            return Err(Error::OutOfRange {
                what: "colour",
                value: colour as u64,
                bound: n,
            });
        }
        if index as u64 >= n {
            return Err(Error::OutOfRange {
                what: "point index",
                value: index as u64,
                bound: n,
            });
        }
        Ok(PointRef {
            colour: colour as u8,
            index: index as u8,
        })
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(colour {}, index {})", self.colour, self.index)
    }
}

/// A colourful edge: one point index per colour, colour 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    digits: ArrayVec<u8, MAX_COLOURS>,
}

impl Edge {
    /// Builds an edge from per-colour indices, validating length and range.
    pub fn new(shape: Shape, digits: &[u8]) -> Result<Self> {
        if digits.len() != shape.colours() {
            return Err(Error::OutOfRange {
                what: "edge digit count",
                value: digits.len() as u64,
                bound: shape.colours() as u64 + 1,
            });
        }
        for &x in digits {
            if x as usize >= shape.points_per_colour() {
                return Err(Error::OutOfRange {
                    what: "edge digit",
                    value: x as u64,
                    bound: shape.points_per_colour() as u64,
                });
            }
        }
        Ok(Edge {
            digits: digits.iter().copied().collect(),
        })
    }

    /// Decodes a canonical integer code back into an edge.
    pub fn from_code(shape: Shape, code: u32) -> Result<Self> {
        if code as usize >= shape.edge_space() {
            return Err(Error::OutOfRange {
                what: "edge code",
                value: code as u64,
                bound: shape.edge_space() as u64,
            });
        }
        let base = shape.colours() as u32;
        let mut digits = ArrayVec::new();
        let mut rest = code;
        for _ in 0..shape.colours() {
            digits.push((rest % base) as u8);
            rest /= base;
        }
        digits.reverse();
        Ok(Edge { digits })
    }

    /// Canonical integer code: the digit string read as a base-(d+1) numeral
    /// with the colour-0 digit most significant, so codes sort exactly like
    /// edges in lexicographic order.
    pub fn code(&self) -> u32 {
        let base = self.digits.len() as u32;
        self.digits
            .iter()
            .fold(0u32, |acc, &x| acc * base + x as u32)
    }

    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    #[inline]
    pub fn colours(&self) -> usize {
        self.digits.len()
    }

    fn shape(&self) -> Shape {
        Shape {
            d: (self.digits.len() - 1) as u8,
        }
    }

    /// Number of zero coordinates, `z(e)`.
    pub fn zeros(&self) -> usize {
        self.digits.iter().filter(|&&x| x == 0).count()
    }

    /// All edges at Hamming distance exactly 1, in lexicographic order.
    /// There are `(d + 1) * d` of them.
    pub fn adjacent_edges(&self) -> Vec<Edge> {
        let n = self.digits.len() as u8;
        let mut out = Vec::with_capacity(self.digits.len() * (self.digits.len() - 1));
        let mut scratch = self.clone();
        for pos in 0..self.digits.len() {
            let orig = self.digits[pos];
            for v in 0..n {
                if v != orig {
                    scratch.digits[pos] = v;
                    out.push(scratch.clone());
                }
            }
            scratch.digits[pos] = orig;
        }
        out.sort();
        out
    }

    /// The points this edge uses.
    pub fn points(&self) -> impl Iterator<Item = PointRef> + '_ {
        self.digits.iter().enumerate().map(|(i, &x)| PointRef {
            colour: i as u8,
            index: x,
        })
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.digits {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Encodes an edge as its canonical integer code.
pub fn encode_edge(edge: &Edge) -> u32 {
    edge.code()
}

/// Decodes a canonical integer code; rejects out-of-range codes.
pub fn decode_edge(shape: Shape, code: u32) -> Result<Edge> {
    Edge::from_code(shape, code)
}

/// A transversal omitting one colour: exactly one point index per remaining
/// colour, stored in increasing colour order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transversal {
    omitted: u8,
    choice: ArrayVec<u8, MAX_DIMENSION>,
}

impl Transversal {
    pub fn new(shape: Shape, omitted: usize, choice: &[u8]) -> Result<Self> {
        let n = shape.colours() as u64;
        if omitted as u64 >= n {
            return Err(Error::OutOfRange {
                what: "omitted colour",
                value: omitted as u64,
                bound: n,
            });
        }
        if choice.len() != shape.d() {
            return Err(Error::OutOfRange {
                what: "transversal digit count",
                value: choice.len() as u64,
                bound: shape.d() as u64 + 1,
            });
        }
        for &x in choice {
            if x as u64 >= n {
                return Err(Error::OutOfRange {
                    what: "transversal digit",
                    value: x as u64,
                    bound: n,
                });
            }
        }
        Ok(Transversal {
            omitted: omitted as u8,
            choice: choice.iter().copied().collect(),
        })
    }

    /// The base transversal `*00...0` for the given omitted colour.
    pub fn base(shape: Shape, omitted: usize) -> Result<Self> {
        Transversal::new(shape, omitted, &vec![0u8; shape.d()])
    }

    #[inline]
    pub fn omitted_colour(&self) -> usize {
        self.omitted as usize
    }

    #[inline]
    pub fn choice(&self) -> &[u8] {
        &self.choice
    }

    /// Colour of the k-th slot (colours run over all but the omitted one).
    #[inline]
    pub fn colour_of_slot(&self, slot: usize) -> usize {
        if slot < self.omitted as usize {
            slot
        } else {
            slot + 1
        }
    }

    /// Point index chosen for `colour`; `None` for the omitted colour.
    pub fn index_for_colour(&self, colour: usize) -> Option<u8> {
        use std::cmp::Ordering::*;
        match colour.cmp(&(self.omitted as usize)) {
            Less => Some(self.choice[colour]),
            Equal => None,
            Greater => Some(self.choice[colour - 1]),
        }
    }

    /// True when the two transversals share no point (they must omit the same
    /// colour and differ in every slot).
    pub fn disjoint_from(&self, other: &Transversal) -> bool {
        self.omitted == other.omitted
            && self
                .choice
                .iter()
                .zip(&other.choice)
                .all(|(a, b)| a != b)
    }

    /// The points of this transversal.
    pub fn points(&self) -> impl Iterator<Item = PointRef> + '_ {
        self.choice.iter().enumerate().map(|(slot, &x)| PointRef {
            colour: self.colour_of_slot(slot) as u8,
            index: x,
        })
    }
}

impl fmt::Display for Transversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for colour in 0..=self.choice.len() {
            match self.index_for_colour(colour) {
                None => write!(f, "*")?,
                Some(x) => write!(f, "{x}")?,
            }
        }
        Ok(())
    }
}

/// An unordered pair of disjoint transversals omitting the same colour,
/// stored with `first < second` lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Octahedron {
    first: Transversal,
    second: Transversal,
}

impl Octahedron {
    pub fn new(a: Transversal, b: Transversal) -> Result<Self> {
        if !a.disjoint_from(&b) {
            return Err(Error::Degenerate {
                points: format!("transversals {a} and {b} are not disjoint"),
            });
        }
        if a < b {
            Ok(Octahedron { first: a, second: b })
        } else {
            Ok(Octahedron { first: b, second: a })
        }
    }

    #[inline]
    pub fn omitted_colour(&self) -> usize {
        self.first.omitted_colour()
    }

    #[inline]
    pub fn first(&self) -> &Transversal {
        &self.first
    }

    #[inline]
    pub fn second(&self) -> &Transversal {
        &self.second
    }

    /// The pair of point indices of `colour` used by this octahedron.
    pub fn indices_for_colour(&self, colour: usize) -> Option<(u8, u8)> {
        Some((
            self.first.index_for_colour(colour)?,
            self.second.index_for_colour(colour)?,
        ))
    }
}

impl fmt::Display for Octahedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Iterates every transversal omitting `colour`, in lexicographic order of
/// the choice string.
pub fn all_transversals(shape: Shape, colour: usize) -> impl Iterator<Item = Transversal> {
    let d = shape.d();
    let n = shape.colours() as u8;
    Odometer::new(vec![n; d]).map(move |choice| Transversal {
        omitted: colour as u8,
        choice: choice.iter().copied().collect(),
    })
}

/// Octahedra pairing `base` with every disjoint transversal of the same
/// omitted colour, in lexicographic order of the second transversal.
/// Yields exactly `d^d` octahedra.
pub fn octahedra_with_base(base: &Transversal) -> impl Iterator<Item = Octahedron> {
    let base = base.clone();
    let n = base.choice.len() as u8 + 1;
    let radices: Vec<u8> = vec![n - 1; base.choice.len()];
    Odometer::new(radices).map(move |counter| {
        // slot value skips the base's digit in that slot
        let mut choice = ArrayVec::new();
        for (slot, &c) in counter.iter().enumerate() {
            let mut v = c;
            if v >= base.choice[slot] {
                v += 1;
            }
            choice.push(v);
        }
        let other = Transversal {
            omitted: base.omitted,
            choice,
        };
        Octahedron::new(base.clone(), other).expect("constructed disjoint")
    })
}

/// Every unordered pair of disjoint transversals omitting `colour`, exactly
/// once, in lexicographic order of (first, second). Yields
/// `(d + 1)^d * d^d / 2` octahedra.
pub fn all_octahedra(shape: Shape, colour: usize) -> impl Iterator<Item = Octahedron> {
    // Disjoint transversals differ in every slot, so the pair order is
    // decided by slot 0 alone: second > first iff second[0] > first[0].
    all_transversals(shape, colour).flat_map(move |first| {
        let n = shape.colours() as u8;
        let d = shape.d();
        let head = first.choice[0];
        let tails: Vec<u8> = vec![n - 1; d - 1];
        let first2 = first.clone();
        ((head + 1)..n).flat_map(move |h| {
            let first3 = first2.clone();
            Odometer::new(tails.clone()).filter_map(move |counter| {
                let mut choice = ArrayVec::new();
                choice.push(h);
                for (k, &c) in counter.iter().enumerate() {
                    let mut v = c;
                    if v >= first3.choice[k + 1] {
                        v += 1;
                    }
                    choice.push(v);
                }
                let other = Transversal {
                    omitted: first3.omitted,
                    choice,
                };
                Octahedron::new(first3.clone(), other).ok()
            })
        })
    })
}

/// Mixed-radix counter, least significant digit last, lexicographic order.
struct Odometer {
    radices: Vec<u8>,
    next: Option<Vec<u8>>,
}

impl Odometer {
    fn new(radices: Vec<u8>) -> Self {
        let next = if radices.iter().all(|&r| r > 0) {
            Some(vec![0; radices.len()])
        } else {
            None
        };
        Odometer { radices, next }
    }
}

impl Iterator for Odometer {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        let current = self.next.clone()?;
        let mut bumped = current.clone();
        let mut pos = bumped.len();
        loop {
            if pos == 0 {
                self.next = None;
                break;
            }
            pos -= 1;
            bumped[pos] += 1;
            if bumped[pos] < self.radices[pos] {
                self.next = Some(bumped);
                break;
            }
            bumped[pos] = 0;
        }
        Some(current)
    }
}

/// A colourful hypergraph: a set of edges over the `(d+1)^(d+1)` code space
/// plus per-point incidence counts. Multi-edges are forbidden.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeSet {
    shape: Shape,
    bits: Vec<u64>,
    len: u32,
    /// incidence[colour * (d+1) + index] = number of edges using the point
    incidence: Vec<u32>,
}

impl EdgeSet {
    pub fn new(shape: Shape) -> Self {
        let words = shape.edge_space().div_ceil(64);
        EdgeSet {
            shape,
            bits: vec![0; words],
            len: 0,
            incidence: vec![0; shape.point_count()],
        }
    }

    pub fn from_edges<'a, I: IntoIterator<Item = &'a Edge>>(shape: Shape, edges: I) -> Self {
        let mut set = EdgeSet::new(shape);
        for e in edges {
            set.insert(e);
        }
        set
    }

    /// The full edge space: every possible edge present.
    pub fn complete(shape: Shape) -> Self {
        let mut set = EdgeSet::new(shape);
        for code in 0..shape.edge_space() as u32 {
            set.insert_code(code);
        }
        set
    }

    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains_code(&self, code: u32) -> bool {
        let w = (code / 64) as usize;
        let b = code % 64;
        self.bits[w] >> b & 1 == 1
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        self.contains_code(edge.code())
    }

    /// Inserts an edge; returns false if it was already present.
    pub fn insert(&mut self, edge: &Edge) -> bool {
        debug_assert_eq!(edge.colours(), self.shape.colours());
        let code = edge.code();
        if self.contains_code(code) {
            return false;
        }
        self.set_bit(code);
        self.len += 1;
        for p in edge.points() {
            let slot = self.point_slot(p);
            self.incidence[slot] += 1;
        }
        true
    }

    /// Inserts by code; returns false if already present.
    pub fn insert_code(&mut self, code: u32) -> bool {
        let edge = Edge::from_code(self.shape, code).expect("code in range");
        self.insert(&edge)
    }

    /// Removes an edge; returns false if it was absent.
    pub fn remove(&mut self, edge: &Edge) -> bool {
        debug_assert_eq!(edge.colours(), self.shape.colours());
        let code = edge.code();
        if !self.contains_code(code) {
            return false;
        }
        self.clear_bit(code);
        self.len -= 1;
        for p in edge.points() {
            let slot = self.point_slot(p);
            self.incidence[slot] -= 1;
        }
        true
    }

    fn set_bit(&mut self, code: u32) {
        self.bits[(code / 64) as usize] |= 1u64 << (code % 64);
    }

    fn clear_bit(&mut self, code: u32) {
        self.bits[(code / 64) as usize] &= !(1u64 << (code % 64));
    }

    #[inline]
    fn point_slot(&self, p: PointRef) -> usize {
        p.colour as usize * self.shape.points_per_colour() + p.index as usize
    }

    /// Number of edges using the given point.
    pub fn incidence(&self, p: PointRef) -> u32 {
        self.incidence[self.point_slot(p)]
    }

    /// Edges in lexicographic (= code) order.
    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.iter_codes()
            .map(move |code| Edge::from_code(self.shape, code).expect("stored code valid"))
    }

    pub fn iter_codes(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros();
                    word &= word - 1;
                    Some(w as u32 * 64 + b)
                }
            })
        })
    }

    /// Recomputes incidence counts from scratch and checks them against the
    /// maintained counters. Test and audit hook.
    pub fn recount_consistent(&self) -> bool {
        let mut fresh = vec![0u32; self.shape.point_count()];
        for e in self.iter() {
            for p in e.points() {
                fresh[self.point_slot(p)] += 1;
            }
        }
        fresh == self.incidence && self.iter_codes().count() == self.len as usize
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeSet(d={}, {{", self.shape.d())?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}})")
    }
}

/// Parses the line-oriented edge-list format: a mandatory `d=<n>` header,
/// then one edge per line as `d + 1` space-separated indices. Lines starting
/// with `#` are comments; blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<EdgeSet> {
    let mut shape: Option<Shape> = None;
    let mut set: Option<EdgeSet> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match shape {
            None => {
                let d = parse_header(line, line_no)?;
                let s = Shape::new(d).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
                shape = Some(s);
                set = Some(EdgeSet::new(s));
            }
            Some(s) => {
                let digits = parse_digit_line(line, line_no, s.colours())?;
                let edge = Edge::new(s, &digits).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
                if !set.as_mut().unwrap().insert(&edge) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("duplicate edge {edge}"),
                    });
                }
            }
        }
    }
    set.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing mandatory header line \"d=<n>\"".into(),
    })
}

fn parse_header(line: &str, line_no: usize) -> Result<usize> {
    let rest = line.strip_prefix("d=").ok_or_else(|| Error::Parse {
        line: line_no,
        msg: format!("expected header \"d=<n>\", found {line:?}"),
    })?;
    usize::from_str(rest.trim()).map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("invalid dimension {rest:?}"),
    })
}

fn parse_digit_line(line: &str, line_no: usize, expected: usize) -> Result<Vec<u8>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("expected {expected} indices, found {}", fields.len()),
        });
    }
    fields
        .iter()
        .map(|f| {
            u8::from_str(f).map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid index {f:?}"),
            })
        })
        .collect()
}

/// Canonical edge-list text: header then edges in lexicographic order.
pub fn format_edge_list(set: &EdgeSet) -> String {
    let mut out = format!("d={}\n", set.shape().d());
    for e in set.iter() {
        let digits: Vec<String> = e.digits().iter().map(|x| x.to_string()).collect();
        out.push_str(&digits.join(" "));
        out.push('\n');
    }
    out
}
