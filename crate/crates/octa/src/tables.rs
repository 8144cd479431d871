//! The large and small parity tables relative to the base transversal
//! `*00...0`, and the score they induce.
//!
//! The large table has `d^d` rows, one per second 0-transversal
//! `u` in `{1..d}^d` (lexicographic), and `d + 1` columns, one per colour-0
//! point. Entry `(u, c)` is the parity of the number of edges `e` with
//! `e_0 = c` and `e_j` in `{0, u_j}` for every `j >= 1`. Treating column 0 as
//! correct, the score counts entries in columns `1..d` that disagree with
//! column 0; it is 0 for every octahedral system and `d^(d+1)` for the
//! singleton `{00...0}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeSet, Shape, Transversal};

/// Score of a hypergraph relative to the base transversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Score(pub u64);

impl Score {
    /// The maximum attainable score, `d^(d+1)`.
    pub fn max_for(shape: Shape) -> Score {
        Score((shape.d() as u64).pow(shape.colours() as u32))
    }
}

/// Direction of an incremental table update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaSense {
    Add,
    Remove,
}

/// The `d^d x (d+1)` parity table for octahedra containing `*00...0`,
/// with its score kept incrementally.
#[derive(Clone, PartialEq, Eq)]
pub struct LargeTable {
    shape: Shape,
    /// One bitmask per row; bit `c` is the parity entry in column `c`.
    rows: Vec<u8>,
    score: u64,
}

impl LargeTable {
    /// Builds the table from scratch by accumulating every edge.
    pub fn build(set: &EdgeSet) -> LargeTable {
        let shape = set.shape();
        let mut table = LargeTable::empty(shape);
        for e in set.iter() {
            table.toggle_edge(&e);
        }
        table
    }

    /// The all-zero table of the empty hypergraph.
    pub fn empty(shape: Shape) -> LargeTable {
        let rows = vec![0u8; shape.d().pow(shape.d() as u32)];
        LargeTable {
            shape,
            rows,
            score: 0,
        }
    }

    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Row index for a second transversal `u` with digits in `1..=d`,
    /// lexicographic with `u_1` most significant.
    pub fn row_index(&self, u: &[u8]) -> usize {
        let d = self.shape.d();
        debug_assert_eq!(u.len(), d);
        u.iter().fold(0usize, |acc, &x| {
            debug_assert!((1..=d as u8).contains(&x));
            acc * d + (x as usize - 1)
        })
    }

    /// The second transversal `u` for a row index.
    pub fn row_transversal(&self, mut row: usize) -> Transversal {
        let d = self.shape.d();
        let mut u = vec![0u8; d];
        for slot in (0..d).rev() {
            u[slot] = (row % d) as u8 + 1;
            row /= d;
        }
        Transversal::new(self.shape, 0, &u).expect("digits in range")
    }

    /// Parity entry in the given row and colour-0 column.
    #[inline]
    pub fn entry(&self, row: usize, column: usize) -> u8 {
        self.rows[row] >> column & 1
    }

    /// Raw row bitmask (bit `c` = column `c`).
    #[inline]
    pub fn row_bits(&self, row: usize) -> u8 {
        self.rows[row]
    }

    /// Number of entries in columns `1..d` of this row that disagree with
    /// column 0.
    #[inline]
    fn row_mismatches(&self, row: usize) -> u64 {
        let bits = self.rows[row];
        let d = self.shape.d() as u32;
        let rest = (bits >> 1) & ((1u8 << d) - 1);
        if bits & 1 == 0 {
            rest.count_ones() as u64
        } else {
            (d - rest.count_ones()) as u64
        }
    }

    #[inline]
    pub fn score(&self) -> Score {
        Score(self.score)
    }

    /// True when every row is constant (all zeros or all ones), which is
    /// equivalent to score 0.
    pub fn rows_constant(&self) -> bool {
        self.score == 0
    }

    /// First row (in row order) whose bits are not constant, if any.
    pub fn first_non_constant_row(&self) -> Option<usize> {
        let full = (1u8 << self.shape.colours()) - 1;
        self.rows.iter().position(|&bits| bits != 0 && bits != full)
    }

    /// Flips the parity entries affected by adding or removing `edge`,
    /// updating the score. Addition and removal flip the same entries.
    ///
    /// When `e_0 = c != 0` the flipped entries all lie in column `c`; their
    /// count is `d^z(e)`. When `e_0 = 0` the flips happen in column 0 of
    /// `d^(z(e)-1)` rows, re-grading the other entries of those rows.
    pub fn toggle_edge(&mut self, edge: &Edge) {
        let d = self.shape.d();
        let digits = edge.digits();
        let column = digits[0] as usize;

        // Affected rows: u_j fixed to e_j where e_j != 0, free over 1..=d
        // where e_j = 0 (slots j >= 1).
        let mut free: Vec<usize> = Vec::new();
        let mut base_row = 0usize;
        let mut stride = 1usize;
        for slot in (0..d).rev() {
            let digit = digits[slot + 1];
            if digit == 0 {
                free.push(stride);
            } else {
                base_row += stride * (digit as usize - 1);
            }
            stride *= d;
        }

        let mask = 1u8 << column;
        let count = d.pow(free.len() as u32);
        for k in 0..count {
            let mut row = base_row;
            let mut rest = k;
            for &step in &free {
                row += step * (rest % d);
                rest /= d;
            }
            let before = self.row_mismatches(row);
            self.rows[row] ^= mask;
            let after = self.row_mismatches(row);
            self.score = self.score + after - before;
        }
    }

    /// Rebuild-and-compare audit for the incremental path.
    pub fn consistent_with(&self, set: &EdgeSet) -> bool {
        let fresh = LargeTable::build(set);
        fresh.rows == self.rows && fresh.score == self.score
    }

    /// The small-table restriction: rows for `u = (i, i, ..., i)`,
    /// `i = 1..=d`.
    pub fn small_table(&self) -> SmallTable {
        let d = self.shape.d();
        let rows = (1..=d)
            .map(|i| {
                let u = vec![i as u8; d];
                self.rows[self.row_index(&u)]
            })
            .collect();
        SmallTable {
            shape: self.shape,
            rows,
        }
    }
}

impl fmt::Debug for LargeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LargeTable(d={}, rows={}, score={})",
            self.shape.d(),
            self.rows.len(),
            self.score
        )
    }
}

/// Builds the large table of a hypergraph.
pub fn build_large_table(set: &EdgeSet) -> LargeTable {
    LargeTable::build(set)
}

/// Score of a hypergraph relative to the base transversal `*00...0`.
pub fn score(set: &EdgeSet) -> Score {
    LargeTable::build(set).score()
}

/// The `d x (d+1)` restriction of the large table to the rows generated by
/// the transversals `*11...1`, ..., `*dd...d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallTable {
    shape: Shape,
    /// rows[i - 1] is the bitmask of the row for `*ii...i`.
    rows: Vec<u8>,
}

impl SmallTable {
    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Entry for row `i` (1-based, the transversal `*ii...i`) and colour-0
    /// column `c`.
    #[inline]
    pub fn entry(&self, row: usize, column: usize) -> u8 {
        debug_assert!((1..=self.shape.d()).contains(&row));
        self.rows[row - 1] >> column & 1
    }

    /// Entries whose parity differs from the designated target: rows in
    /// `designated_odd` must be all ones, the remaining rows all zeros.
    /// Row-major order (row 1..d, then column 0..d).
    pub fn mismatches(&self, designated_odd: &RowSelection) -> Vec<(usize, usize)> {
        debug_assert_eq!(designated_odd.d as usize, self.shape.d());
        let mut out = Vec::new();
        for row in 1..=self.shape.d() {
            let want = designated_odd.contains(row) as u8;
            for column in 0..self.shape.colours() {
                if self.entry(row, column) != want {
                    out.push((row, column));
                }
            }
        }
        out
    }

    /// First mismatching entry in row-major order.
    pub fn first_mismatch(&self, designated_odd: &RowSelection) -> Option<(usize, usize)> {
        for row in 1..=self.shape.d() {
            let want = designated_odd.contains(row) as u8;
            for column in 0..self.shape.colours() {
                if self.entry(row, column) != want {
                    return Some((row, column));
                }
            }
        }
        None
    }

    /// Rows whose bits are all ones (odd parity).
    pub fn odd_rows(&self) -> RowSelection {
        let d = self.shape.d();
        let full = (1u8 << self.shape.colours()) - 1;
        let mut sel = RowSelection::empty(self.shape);
        for row in 1..=d {
            if self.rows[row - 1] == full {
                sel.insert(row);
            }
        }
        sel
    }

    /// True when every row is constant and matches the designation exactly.
    pub fn matches(&self, designated_odd: &RowSelection) -> bool {
        self.first_mismatch(designated_odd).is_none()
    }
}

/// A subset of the small-table rows `1..=d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowSelection {
    d: u8,
    mask: u8,
}

impl RowSelection {
    pub fn empty(shape: Shape) -> Self {
        RowSelection {
            d: shape.d() as u8,
            mask: 0,
        }
    }

    /// Rows `1..=count`, the canonical choice of `count` designated rows.
    pub fn first_rows(shape: Shape, count: usize) -> Self {
        debug_assert!(count <= shape.d());
        let mut sel = RowSelection::empty(shape);
        for row in 1..=count {
            sel.insert(row);
        }
        sel
    }

    pub fn all_rows(shape: Shape) -> Self {
        RowSelection::first_rows(shape, shape.d())
    }

    pub fn insert(&mut self, row: usize) {
        debug_assert!((1..=self.d as usize).contains(&row));
        self.mask |= 1 << (row - 1);
    }

    #[inline]
    pub fn contains(&self, row: usize) -> bool {
        self.mask >> (row - 1) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.d as usize).filter(|&r| self.contains(r))
    }
}

impl fmt::Debug for RowSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.rows()).finish()
    }
}

/// Builds the small table directly from the definition, without going
/// through the large table.
pub fn build_small_table(set: &EdgeSet) -> SmallTable {
    let shape = set.shape();
    let d = shape.d();
    let mut rows = vec![0u8; d];
    for e in set.iter() {
        let digits = e.digits();
        // Edge e affects row i iff e_j in {0, i} for all j >= 1: edges
        // x00...0 affect every row, otherwise all nonzero digits must agree.
        let mut value: Option<u8> = None;
        let mut uniform = true;
        for &x in &digits[1..] {
            if x != 0 {
                match value {
                    None => value = Some(x),
                    Some(v) if v == x => {}
                    Some(_) => {
                        uniform = false;
                        break;
                    }
                }
            }
        }
        if !uniform {
            continue;
        }
        let mask = 1u8 << digits[0];
        match value {
            None => {
                for row in rows.iter_mut() {
                    *row ^= mask;
                }
            }
            Some(i) => rows[i as usize - 1] ^= mask,
        }
    }
    SmallTable { shape, rows }
}

/// An edge set paired with its incrementally maintained large table. The
/// two structures stay consistent; deltas inconsistent with the current
/// membership are rejected.
#[derive(Clone)]
pub struct TrackedSystem {
    edges: EdgeSet,
    table: LargeTable,
}

impl TrackedSystem {
    pub fn new(edges: EdgeSet) -> Self {
        let table = LargeTable::build(&edges);
        TrackedSystem { edges, table }
    }

    pub fn empty(shape: Shape) -> Self {
        TrackedSystem {
            edges: EdgeSet::new(shape),
            table: LargeTable::empty(shape),
        }
    }

    #[inline]
    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    #[inline]
    pub fn table(&self) -> &LargeTable {
        &self.table
    }

    #[inline]
    pub fn score(&self) -> Score {
        self.table.score()
    }

    pub fn small_table(&self) -> SmallTable {
        self.table.small_table()
    }

    /// Applies an edge delta, keeping the table in sync.
    pub fn apply(&mut self, edge: &Edge, sense: DeltaSense) -> Result<()> {
        let present = self.edges.contains(edge);
        match sense {
            DeltaSense::Add if present => {
                return Err(Error::InconsistentDelta {
                    edge: edge.to_string(),
                    present: true,
                })
            }
            DeltaSense::Remove if !present => {
                return Err(Error::InconsistentDelta {
                    edge: edge.to_string(),
                    present: false,
                })
            }
            DeltaSense::Add => {
                self.edges.insert(edge);
            }
            DeltaSense::Remove => {
                self.edges.remove(edge);
            }
        }
        self.table.toggle_edge(edge);
        Ok(())
    }

    pub fn add(&mut self, edge: &Edge) -> Result<()> {
        self.apply(edge, DeltaSense::Add)
    }

    pub fn remove(&mut self, edge: &Edge) -> Result<()> {
        self.apply(edge, DeltaSense::Remove)
    }

    pub fn into_edges(self) -> EdgeSet {
        self.edges
    }
}

/// Applies an edge delta against a set/table pair; the incremental
/// counterpart of [`build_large_table`].
pub fn apply_edge_delta(system: &mut TrackedSystem, edge: &Edge, sense: DeltaSense) -> Result<()> {
    system.apply(edge, sense)
}

/// Fixed text layout for the small table: a header line of column labels,
/// then one line per row `*ii...i`.
pub fn format_small_table(table: &SmallTable) -> String {
    let d = table.shape().d();
    let label_width = d + 1;
    let mut out = String::new();
    out.push_str(&" ".repeat(label_width));
    for c in 0..=d {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    for row in 1..=d {
        let mut label = String::from("*");
        for _ in 0..d {
            label.push_str(&row.to_string());
        }
        out.push_str(&format!("{label:<label_width$}"));
        for c in 0..=d {
            out.push_str(&format!(" {}", table.entry(row, c)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, EdgeSet, Shape};

    fn shape(d: usize) -> Shape {
        Shape::new(d).unwrap()
    }

    fn edge(d: usize, digits: &[u8]) -> Edge {
        Edge::new(shape(d), digits).unwrap()
    }

    fn set_of(d: usize, edges: &[&[u8]]) -> EdgeSet {
        let s = shape(d);
        let owned: Vec<Edge> = edges.iter().map(|digs| Edge::new(s, digs).unwrap()).collect();
        EdgeSet::from_edges(s, &owned)
    }

    /// Definitional oracle: entry (u, c) as a direct count over the edge
    /// list, independent of the incremental implementation.
    fn entry_brute(set: &EdgeSet, u: &[u8], c: usize) -> u8 {
        let count = set
            .iter()
            .filter(|e| {
                let digits = e.digits();
                digits[0] as usize == c
                    && digits[1..].iter().zip(u).all(|(&x, &uj)| x == 0 || x == uj)
            })
            .count();
        (count % 2) as u8
    }

    fn table_matches_brute(set: &EdgeSet) -> bool {
        let t = LargeTable::build(set);
        let d = set.shape().d();
        for row in 0..t.row_count() {
            let u: Vec<u8> = t.row_transversal(row).choice().to_vec();
            assert_eq!(t.row_index(&u), row);
            for c in 0..=d {
                if t.entry(row, c) != entry_brute(set, &u, c) {
                    return false;
                }
            }
        }
        true
    }

    /// Score oracle straight from the definition.
    fn score_brute(set: &EdgeSet) -> u64 {
        let t = LargeTable::build(set);
        let d = set.shape().d();
        let mut total = 0;
        for row in 0..t.row_count() {
            let u: Vec<u8> = t.row_transversal(row).choice().to_vec();
            for c in 1..=d {
                if entry_brute(set, &u, c) != entry_brute(set, &u, 0) {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn empty_table_is_zero() {
        let set = EdgeSet::new(shape(2));
        let t = LargeTable::build(&set);
        assert_eq!(t.score(), Score(0));
        assert!(t.rows_constant());
        assert!((0..t.row_count()).all(|r| t.row_bits(r) == 0));
    }

    #[test]
    fn singleton_scores_maximum() {
        // {00...0} scores d^(d+1): 8, 81, 1024 for d = 2, 3, 4.
        for (d, want) in [(2usize, 8u64), (3, 81), (4, 1024)] {
            let set = set_of(d, &[&vec![0u8; d + 1]]);
            let t = LargeTable::build(&set);
            assert_eq!(t.score(), Score(want));
            assert_eq!(Score::max_for(shape(d)), Score(want));
            // every row is (1, 0, ..., 0)
            for r in 0..t.row_count() {
                assert_eq!(t.row_bits(r), 1);
            }
        }
    }

    #[test]
    fn complete_hypergraph_scores_zero() {
        let set = EdgeSet::complete(shape(2));
        let t = LargeTable::build(&set);
        // each entry counts 2^2 = 4 edges, parity 0
        assert!((0..t.row_count()).all(|r| t.row_bits(r) == 0));
        assert_eq!(t.score(), Score(0));
        assert_eq!(score_brute(&set), 0);
    }

    #[test]
    fn table_matches_definitional_count() {
        let sets = [
            set_of(2, &[]),
            set_of(2, &[&[0, 0, 0]]),
            set_of(2, &[&[0, 0, 0], &[1, 1, 0], &[2, 1, 2]]),
            set_of(3, &[&[0, 0, 0, 0], &[1, 2, 3, 0], &[2, 2, 2, 2]]),
        ];
        for set in &sets {
            assert!(table_matches_brute(set));
            assert_eq!(LargeTable::build(set).score().0, score_brute(set));
        }
    }

    #[test]
    fn delta_flip_counts_follow_zero_structure() {
        // Adding 31000 flips entries only in column 3, exactly
        // d^z = 4^3 = 64 of them.
        let base = set_of(4, &[&[0, 0, 0, 0, 0], &[1, 0, 0, 0, 0]]);
        let before = LargeTable::build(&base);
        let mut after = before.clone();
        after.toggle_edge(&edge(4, &[3, 1, 0, 0, 0]));

        let mut flipped = Vec::new();
        for r in 0..before.row_count() {
            let diff = before.row_bits(r) ^ after.row_bits(r);
            if diff != 0 {
                flipped.push((r, diff));
            }
        }
        assert_eq!(flipped.len(), 64);
        assert!(flipped.iter().all(|&(_, diff)| diff == 1 << 3));

        // and the rebuilt table agrees bit for bit
        let mut set = base.clone();
        set.insert(&edge(4, &[3, 1, 0, 0, 0]));
        assert_eq!(after, LargeTable::build(&set));
    }

    #[test]
    fn delta_zero_colour0_flips_column_zero() {
        // e_0 = 0: d^(z-1) column-0 entries flip.
        let base = set_of(4, &[&[1, 2, 3, 4, 1]]);
        let e = edge(4, &[0, 2, 0, 0, 1]); // z = 3 -> 4^2 = 16 rows
        let before = LargeTable::build(&base);
        let mut after = before.clone();
        after.toggle_edge(&e);
        let flipped: Vec<u8> = (0..before.row_count())
            .filter_map(|r| {
                let diff = before.row_bits(r) ^ after.row_bits(r);
                (diff != 0).then_some(diff)
            })
            .collect();
        assert_eq!(flipped.len(), 16);
        assert!(flipped.iter().all(|&diff| diff == 1));
    }

    #[test]
    fn add_then_remove_restores_table() {
        let mut sys = TrackedSystem::new(set_of(2, &[&[0, 0, 0], &[1, 2, 1]]));
        let original = sys.table().clone();
        let e = edge(2, &[2, 1, 0]);
        sys.add(&e).unwrap();
        sys.remove(&e).unwrap();
        assert_eq!(*sys.table(), original);
    }

    #[test]
    fn inconsistent_deltas_are_rejected() {
        let mut sys = TrackedSystem::new(set_of(2, &[&[0, 0, 0]]));
        let e = edge(2, &[0, 0, 0]);
        assert!(matches!(
            sys.add(&e),
            Err(Error::InconsistentDelta { present: true, .. })
        ));
        let absent = edge(2, &[1, 1, 1]);
        assert!(matches!(
            sys.remove(&absent),
            Err(Error::InconsistentDelta { present: false, .. })
        ));
    }

    #[test]
    fn lemma1_score_delta_bound_d2() {
        // |score(H +/- e) - score(H)| <= d^z(e) with the singleton plus 111.
        let set = set_of(2, &[&[0, 0, 0]]);
        let before = score(&set).0 as i64;
        let mut with = set.clone();
        with.insert(&edge(2, &[1, 1, 1]));
        let after = score(&with).0 as i64;
        assert!((after - before).abs() <= 1); // d^0 = 1
    }

    #[test]
    fn small_table_rows_match_large_table() {
        let sets = [
            set_of(2, &[&[0, 0, 0], &[1, 1, 0], &[2, 2, 2]]),
            set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]),
            set_of(3, &[&[3, 1, 1, 1], &[0, 2, 0, 2]]),
        ];
        for set in &sets {
            let via_large = LargeTable::build(set).small_table();
            let direct = build_small_table(set);
            assert_eq!(via_large, direct);
        }
    }

    #[test]
    fn small_table_of_initial_l3_is_table_1() {
        // d=4, H = {00000, 10000, 20000}: every row (1,1,1,0,0).
        let set = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        let t = build_small_table(&set);
        for row in 1..=4 {
            for c in 0..=4 {
                assert_eq!(t.entry(row, c), (c <= 2) as u8, "row {row} col {c}");
            }
        }
    }

    #[test]
    fn small_table_single_entry_effect() {
        // adding 31111 flips only row 1, column 3
        let base = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        let mut with = base.clone();
        with.insert(&edge(4, &[3, 1, 1, 1, 1]));
        let before = build_small_table(&base);
        let after = build_small_table(&with);
        for row in 1..=4 {
            for c in 0..=4 {
                let want = if (row, c) == (1, 3) {
                    before.entry(row, c) ^ 1
                } else {
                    before.entry(row, c)
                };
                assert_eq!(after.entry(row, c), want, "row {row} col {c}");
            }
        }
    }

    #[test]
    fn mismatches_for_table1_b4() {
        let set = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        let t = build_small_table(&set);
        let all = RowSelection::all_rows(shape(4));
        let got = t.mismatches(&all);
        let want: Vec<(usize, usize)> = (1..=4).flat_map(|r| [(r, 3), (r, 4)]).collect();
        assert_eq!(got, want);
        assert_eq!(t.first_mismatch(&all), Some((1, 3)));
    }

    #[test]
    fn mismatches_for_table1_b3() {
        // rows {1,2,3} designated odd, row 4 even: 6 + 3 = 9 mismatches
        let set = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        let t = build_small_table(&set);
        let sel = RowSelection::first_rows(shape(4), 3);
        let got = t.mismatches(&sel);
        let mut want: Vec<(usize, usize)> = (1..=3).flat_map(|r| [(r, 3), (r, 4)]).collect();
        want.extend([(4, 0), (4, 1), (4, 2)]);
        assert_eq!(got.len(), 9);
        assert_eq!(got, want);
    }

    #[test]
    fn complete_table_has_no_mismatches_with_empty_designation() {
        let set = EdgeSet::complete(shape(2));
        let t = build_small_table(&set);
        assert!(t.matches(&RowSelection::empty(shape(2))));
        assert_eq!(t.odd_rows().len(), 0);
    }

    #[test]
    fn incremental_equals_rebuild_random_walk() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        for d in 2..=4usize {
            let s = shape(d);
            let mut rng = ChaCha8Rng::seed_from_u64(7 + d as u64);
            let mut sys = TrackedSystem::empty(s);
            let steps = if d == 4 { 300 } else { 1000 };
            for _ in 0..steps {
                let code = rng.random_range(0..s.edge_space() as u32);
                let e = Edge::from_code(s, code).unwrap();
                if sys.edges().contains(&e) {
                    sys.remove(&e).unwrap();
                } else {
                    sys.add(&e).unwrap();
                }
            }
            assert!(sys.table().consistent_with(sys.edges()));
            assert_eq!(sys.score().0, score_brute(sys.edges()));
        }
    }

    #[test]
    fn format_small_table_layout() {
        let set = set_of(2, &[&[0, 0, 0]]);
        let t = build_small_table(&set);
        let text = format_small_table(&t);
        assert_eq!(text, "    0 1 2\n*11 1 0 0\n*22 1 0 0\n");
    }

    #[test]
    fn row_transversals_enumerate_in_lex_order() {
        let t = LargeTable::empty(shape(2));
        let listed: Vec<String> = (0..t.row_count())
            .map(|r| t.row_transversal(r).to_string())
            .collect();
        assert_eq!(listed, vec!["*11", "*12", "*21", "*22"]);
        // row order agrees with the disjoint-partner enumeration order
        let base = crate::model::Transversal::base(shape(2), 0).unwrap();
        let from_gen: Vec<String> = crate::model::octahedra_with_base(&base)
            .map(|o| o.second().to_string())
            .collect();
        assert_eq!(listed, from_gen);
    }
}
