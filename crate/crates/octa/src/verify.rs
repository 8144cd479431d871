//! Property verification: isolated vertices (Property 1), the octahedron
//! parity property (Property 2), isolated edges, and brute-force minimum
//! oracles for small dimensions.

use crate::error::{Error, Result};
use crate::model::{
    all_octahedra, Edge, EdgeSet, Octahedron, PointRef, Shape, Transversal,
};
use crate::symmetry::{base_fixing_group, is_canonical};
use crate::tables::{LargeTable, TrackedSystem};

/// Apex-indexed parities of one octahedron: `parities[s]` is the parity of
/// the number of edges using points of the octahedron together with point
/// `s` of the omitted colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityProfile {
    pub octahedron: Octahedron,
    pub parities: Vec<u8>,
}

impl ParityProfile {
    /// Property 2 holds for this octahedron iff the profile is constant.
    pub fn is_constant(&self) -> bool {
        self.parities.iter().all(|&p| p == self.parities[0])
    }
}

/// First point (colour-major, then index) contained in no edge, if any.
pub fn has_isolated_vertex(set: &EdgeSet) -> Option<PointRef> {
    let shape = set.shape();
    for colour in 0..shape.colours() {
        for index in 0..shape.points_per_colour() {
            let p = PointRef {
                colour: colour as u8,
                index: index as u8,
            };
            if set.incidence(p) == 0 {
                return Some(p);
            }
        }
    }
    None
}

/// Parity profile of one octahedron: each apex parity is counted over the
/// `2^d` transversal combinations within the octahedron.
pub fn octahedron_parity(set: &EdgeSet, octahedron: &Octahedron) -> ParityProfile {
    let shape = set.shape();
    let omitted = octahedron.omitted_colour();
    let pairs: Vec<(usize, u8, u8)> = (0..shape.colours())
        .filter(|&c| c != omitted)
        .map(|c| {
            let (a, b) = octahedron.indices_for_colour(c).expect("non-omitted");
            (c, a, b)
        })
        .collect();

    let combos = 1usize << shape.d();
    let mut digits = vec![0u8; shape.colours()];
    let mut parities = vec![0u8; shape.points_per_colour()];
    for (apex, parity) in parities.iter_mut().enumerate() {
        digits[omitted] = apex as u8;
        let mut count = 0usize;
        for pick in 0..combos {
            for (slot, &(c, a, b)) in pairs.iter().enumerate() {
                digits[c] = if pick >> slot & 1 == 0 { a } else { b };
            }
            let e = Edge::new(shape, &digits).expect("digits in range");
            if set.contains(&e) {
                count += 1;
            }
        }
        *parity = (count % 2) as u8;
    }
    ParityProfile {
        octahedron: octahedron.clone(),
        parities,
    }
}

/// Outcome of the Property 2 decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OctahedralVerdict {
    Yes,
    /// The lexicographically first violating octahedron
    /// (colour, then transversal pair order).
    CounterExample(Octahedron),
}

impl OctahedralVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, OctahedralVerdict::Yes)
    }
}

/// Decides Property 2: every octahedron of every colour must have a constant
/// parity profile. The colour-0 octahedra containing `*00...0` are checked
/// first through the large table; they are also the lexicographically first
/// octahedra, so a table hit is already the canonical counterexample.
pub fn is_octahedral_system(set: &EdgeSet) -> OctahedralVerdict {
    let shape = set.shape();
    let table = LargeTable::build(set);
    if let Some(row) = table.first_non_constant_row() {
        let base = Transversal::base(shape, 0).expect("base valid");
        let second = table.row_transversal(row);
        let oct = Octahedron::new(base, second).expect("disjoint from base");
        return OctahedralVerdict::CounterExample(oct);
    }
    let base_count = shape.d().pow(shape.d() as u32);
    for colour in 0..shape.colours() {
        let skip = if colour == 0 { base_count } else { 0 };
        for oct in all_octahedra(shape, colour).skip(skip) {
            if !octahedron_parity(set, &oct).is_constant() {
                return OctahedralVerdict::CounterExample(oct);
            }
        }
    }
    OctahedralVerdict::Yes
}

/// Edges with no other edge at Hamming distance 1, in lexicographic order.
pub fn isolated_edges(set: &EdgeSet) -> Vec<Edge> {
    set.iter()
        .filter(|e| e.adjacent_edges().iter().all(|a| !set.contains(a)))
        .collect()
}

/// Result of the exhaustive minimum search.
#[derive(Clone, Debug)]
pub enum OracleOutcome {
    /// Minimum size of an octahedral system without isolated vertex within
    /// the budget, with a witness.
    Found { size: usize, witness: EdgeSet },
    /// No such system with at most `max_edges` edges.
    NoneWithin { max_edges: usize },
}

/// Exhaustively finds the minimum number of edges of an octahedral system
/// without isolated vertex, over all hypergraphs with at most `max_edges`
/// edges. Enumeration walks subsets in increasing size with canonical-form
/// pruning under the base-fixing label group; every witness is re-verified
/// without symmetry assumptions.
///
/// Feasible for d <= 2 at full exhaustiveness and for d = 3 with
/// `max_edges <= 6`; anything larger is rejected.
pub fn brute_force_min_size(shape: Shape, max_edges: usize) -> Result<OracleOutcome> {
    match shape.d() {
        1 | 2 => {}
        3 if max_edges <= 6 => {}
        3 => {
            return Err(Error::InfeasibleOracle {
                d: 3,
                max_edges,
                msg: "d=3 exhaustive search is limited to max_edges <= 6".into(),
            })
        }
        d => {
            return Err(Error::InfeasibleOracle {
                d,
                max_edges,
                msg: "exhaustive search is limited to d <= 3".into(),
            })
        }
    }

    let group = base_fixing_group(shape);
    let tables: Vec<Vec<u32>> = group.iter().map(|g| g.code_table()).collect();
    let cap = max_edges.min(shape.edge_space());
    for size in 1..=cap {
        let mut search = OracleSearch::new(shape, size, &tables);
        if let Some(witness) = search.run() {
            assert!(
                is_octahedral_system(&witness).is_yes()
                    && has_isolated_vertex(&witness).is_none(),
                "oracle witness failed independent re-verification"
            );
            return Ok(OracleOutcome::Found { size, witness });
        }
    }
    Ok(OracleOutcome::NoneWithin { max_edges })
}

/// Depth-first enumeration of canonical edge sets of one exact size.
struct OracleSearch<'a> {
    shape: Shape,
    size: usize,
    tables: &'a [Vec<u32>],
    sys: TrackedSystem,
    codes: Vec<u32>,
    /// d^z(e) per code: the Lemma 1 bound on the score change of one edge.
    zero_power: Vec<u64>,
    /// sums_from[i][r] = sum of the r largest zero powers among codes >= i.
    sums_from: Vec<Vec<u64>>,
    /// per point slot, the largest code among edges covering the point
    max_code_covering: Vec<u32>,
    /// isolated-edge reasoning applies only to systems of at most d^2 edges
    use_isolated: bool,
}

impl<'a> OracleSearch<'a> {
    fn new(shape: Shape, size: usize, tables: &'a [Vec<u32>]) -> Self {
        let space = shape.edge_space();
        let d = shape.d() as u64;
        let zero_power: Vec<u64> = (0..space as u32)
            .map(|c| {
                let e = Edge::from_code(shape, c).expect("in range");
                d.pow(e.zeros() as u32)
            })
            .collect();

        let mut sums_from = Vec::with_capacity(space + 1);
        for i in 0..=space {
            let mut tail: Vec<u64> = zero_power[i..].to_vec();
            tail.sort_unstable_by(|a, b| b.cmp(a));
            tail.truncate(size);
            let mut sums = vec![0u64; tail.len() + 1];
            for (k, v) in tail.iter().enumerate() {
                sums[k + 1] = sums[k] + v;
            }
            sums_from.push(sums);
        }

        let n = shape.points_per_colour();
        let mut max_code_covering = vec![0u32; shape.point_count()];
        for (slot, entry) in max_code_covering.iter_mut().enumerate() {
            let colour = slot / n;
            let index = slot % n;
            let mut digits = vec![(n - 1) as u8; shape.colours()];
            digits[colour] = index as u8;
            *entry = Edge::new(shape, &digits).expect("in range").code();
        }

        OracleSearch {
            shape,
            size,
            tables,
            sys: TrackedSystem::empty(shape),
            codes: Vec::with_capacity(size),
            zero_power,
            sums_from,
            max_code_covering,
            use_isolated: size <= shape.d() * shape.d(),
        }
    }

    fn run(&mut self) -> Option<EdgeSet> {
        self.dfs()
    }

    fn uncovered_exceeds(&self, remaining: usize) -> bool {
        let shape = self.shape;
        let n = shape.points_per_colour();
        for colour in 0..shape.colours() {
            let mut uncovered = 0usize;
            for index in 0..n {
                let p = PointRef {
                    colour: colour as u8,
                    index: index as u8,
                };
                if self.sys.edges().incidence(p) == 0 {
                    uncovered += 1;
                }
            }
            if uncovered > remaining {
                return true;
            }
        }
        false
    }

    fn has_unfixable_gap(&self, last: u32) -> bool {
        let shape = self.shape;
        let n = shape.points_per_colour();
        for colour in 0..shape.colours() {
            for index in 0..n {
                let p = PointRef {
                    colour: colour as u8,
                    index: index as u8,
                };
                let slot = colour * n + index;
                if self.sys.edges().incidence(p) == 0 && self.max_code_covering[slot] <= last {
                    return true;
                }
            }
        }
        false
    }

    fn has_unfixable_isolated_edge(&self, last: u32) -> bool {
        let set = self.sys.edges();
        for e in set.iter() {
            let neighbours = e.adjacent_edges();
            if neighbours.iter().any(|a| set.contains(a)) {
                continue;
            }
            // isolated: a repair edge must still be available above `last`
            if neighbours.iter().all(|a| a.code() <= last) {
                return true;
            }
        }
        false
    }

    fn dfs(&mut self) -> Option<EdgeSet> {
        let m = self.codes.len();
        if m == self.size {
            if self.sys.score().0 == 0
                && has_isolated_vertex(self.sys.edges()).is_none()
                && is_octahedral_system(self.sys.edges()).is_yes()
            {
                return Some(self.sys.edges().clone());
            }
            return None;
        }

        let remaining = self.size - m;
        if self.uncovered_exceeds(remaining) {
            return None;
        }
        let start = match self.codes.last() {
            Some(&last) => {
                if self.has_unfixable_gap(last) {
                    return None;
                }
                if self.use_isolated && self.has_unfixable_isolated_edge(last) {
                    return None;
                }
                // the score must still be reducible to zero (Lemma 1 bound)
                let budget = &self.sums_from[last as usize + 1];
                let reach = budget[remaining.min(budget.len() - 1)];
                if self.sys.score().0 > reach {
                    return None;
                }
                last + 1
            }
            None => 0,
        };

        for code in start..self.shape.edge_space() as u32 {
            let edge = Edge::from_code(self.shape, code).expect("in range");
            self.sys.add(&edge).expect("fresh code");
            self.codes.push(code);
            let keep = is_canonical(&self.codes, self.tables);
            if keep {
                if let Some(found) = self.dfs() {
                    return Some(found);
                }
            }
            self.codes.pop();
            self.sys.remove(&edge).expect("present");
        }
        None
    }
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

    #[test]
    fn isolated_vertex_witnesses() {
        assert_eq!(
            has_isolated_vertex(&EdgeSet::new(shape(2))),
            Some(PointRef { colour: 0, index: 0 })
        );
        assert_eq!(has_isolated_vertex(&EdgeSet::complete(shape(2))), None);
        let set = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0], &[2, 0, 0, 0, 0]]);
        assert_eq!(
            has_isolated_vertex(&set),
            Some(PointRef { colour: 0, index: 3 })
        );
    }

    fn octa(d: usize, colour: usize, a: &[u8], b: &[u8]) -> Octahedron {
        let s = shape(d);
        Octahedron::new(
            Transversal::new(s, colour, a).unwrap(),
            Transversal::new(s, colour, b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parity_profiles() {
        let s = shape(2);
        let oct = octa(2, 0, &[0, 0], &[1, 1]);

        let empty = EdgeSet::new(s);
        assert_eq!(octahedron_parity(&empty, &oct).parities, vec![0, 0, 0]);

        let single = set_of(2, &[&[0, 0, 0]]);
        let profile = octahedron_parity(&single, &oct);
        assert_eq!(profile.parities, vec![1, 0, 0]);
        assert!(!profile.is_constant());

        // complete hypergraph: every apex sees 2^2 = 4 edges
        let complete = EdgeSet::complete(s);
        let profile = octahedron_parity(&complete, &oct);
        assert_eq!(profile.parities, vec![0, 0, 0]);
        assert!(profile.is_constant());
    }

    #[test]
    fn octahedral_system_verdicts() {
        // vacuously octahedral (fails Property 1 separately)
        assert!(is_octahedral_system(&EdgeSet::new(shape(2))).is_yes());
        assert!(is_octahedral_system(&EdgeSet::complete(shape(2))).is_yes());
        assert!(is_octahedral_system(&EdgeSet::complete(shape(3))).is_yes());

        let single = set_of(2, &[&[0, 0, 0]]);
        match is_octahedral_system(&single) {
            OctahedralVerdict::CounterExample(oct) => {
                assert_eq!(oct.to_string(), "(*00, *11)");
            }
            OctahedralVerdict::Yes => panic!("singleton is not octahedral"),
        }
    }

    #[test]
    fn counterexample_is_lexicographically_first() {
        // brute scan in canonical order must agree with the fast path
        let sets = [
            set_of(2, &[&[0, 0, 0]]),
            set_of(2, &[&[1, 2, 0], &[2, 0, 1]]),
            set_of(2, &[&[0, 1, 1], &[1, 1, 2], &[2, 2, 0], &[0, 0, 2]]),
        ];
        for set in &sets {
            let brute = (0..3).find_map(|colour| {
                all_octahedra(shape(2), colour)
                    .find(|o| !octahedron_parity(set, o).is_constant())
            });
            match (is_octahedral_system(set), brute) {
                (OctahedralVerdict::Yes, None) => {}
                (OctahedralVerdict::CounterExample(got), Some(want)) => {
                    assert_eq!(got, want)
                }
                (got, want) => panic!("verdict {got:?} vs brute {want:?}"),
            }
        }
    }

    #[test]
    fn table_rows_agree_with_base_octahedra_profiles() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let s = shape(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = Transversal::base(s, 0).unwrap();
        for _ in 0..50 {
            let mut set = EdgeSet::new(s);
            for code in 0..27u32 {
                if rng.random_bool(0.3) {
                    set.insert_code(code);
                }
            }
            let table = LargeTable::build(&set);
            let rows_ok = table.first_non_constant_row().is_none();
            let profiles_ok = crate::model::octahedra_with_base(&base)
                .all(|o| octahedron_parity(&set, &o).is_constant());
            assert_eq!(rows_ok, profiles_ok);
        }
    }

    #[test]
    fn isolated_edge_detection() {
        let single = set_of(4, &[&[0; 5]]);
        assert_eq!(isolated_edges(&single), vec![edge(4, &[0; 5])]);

        let pair = set_of(4, &[&[0; 5], &[1, 0, 0, 0, 0]]);
        assert!(isolated_edges(&pair).is_empty());

        let far = set_of(2, &[&[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(
            isolated_edges(&far),
            vec![edge(2, &[0, 0, 0]), edge(2, &[1, 1, 1])]
        );
    }

    #[test]
    fn deleting_an_octahedron_edge_flips_one_parity() {
        let s = shape(2);
        let oct = octa(2, 0, &[0, 0], &[1, 1]);
        let mut set = EdgeSet::complete(s);
        let before = octahedron_parity(&set, &oct);
        assert!(before.is_constant());
        set.remove(&edge(2, &[0, 0, 0]));
        let after = octahedron_parity(&set, &oct);
        let flips: Vec<usize> = (0..3)
            .filter(|&i| before.parities[i] != after.parities[i])
            .collect();
        assert_eq!(flips, vec![0]);
    }

    #[test]
    fn oracle_d1_minimum_is_two() {
        match brute_force_min_size(shape(1), 4).unwrap() {
            OracleOutcome::Found { size, witness } => {
                assert_eq!(size, 2);
                assert!(is_octahedral_system(&witness).is_yes());
                assert!(has_isolated_vertex(&witness).is_none());
            }
            other => panic!("expected minimum 2, got {other:?}"),
        }
    }

    #[test]
    fn oracle_d2_single_edge_impossible() {
        assert!(matches!(
            brute_force_min_size(shape(2), 1).unwrap(),
            OracleOutcome::NoneWithin { max_edges: 1 }
        ));
    }

    #[test]
    fn oracle_rejects_infeasible_budgets() {
        assert!(brute_force_min_size(shape(3), 7).is_err());
        assert!(brute_force_min_size(shape(4), 2).is_err());
    }
}
