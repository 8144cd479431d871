//! The label symmetry group used for canonical-form pruning: permutations of
//! the colour classes combined with independent permutations of the nonzero
//! point labels within each colour. Label 0 stays fixed in every colour, so
//! the whole group stabilizes the base transversal `*00...0`.

use crate::model::{Edge, Shape, MAX_COLOURS};

/// One group element: a colour permutation plus one label permutation per
/// colour (each fixing label 0).
#[derive(Clone, Debug)]
pub struct LabelPerm {
    shape: Shape,
    /// colour i maps to colour_map[i]
    colour_map: [u8; MAX_COLOURS],
    /// label x of colour i maps to label_maps[i][x]; label_maps[i][0] = 0
    label_maps: [[u8; MAX_COLOURS]; MAX_COLOURS],
}

impl LabelPerm {
    pub fn identity(shape: Shape) -> Self {
        let mut colour_map = [0u8; MAX_COLOURS];
        let mut label_maps = [[0u8; MAX_COLOURS]; MAX_COLOURS];
        for i in 0..shape.colours() {
            colour_map[i] = i as u8;
            for x in 0..shape.points_per_colour() {
                label_maps[i][x] = x as u8;
            }
        }
        LabelPerm {
            shape,
            colour_map,
            label_maps,
        }
    }

    /// Image of an edge: digit `e_i` of colour `i` becomes digit
    /// `label_maps[i][e_i]` of colour `colour_map[i]`.
    pub fn apply_edge(&self, edge: &Edge) -> Edge {
        let mut digits = [0u8; MAX_COLOURS];
        for (i, &x) in edge.digits().iter().enumerate() {
            digits[self.colour_map[i] as usize] = self.label_maps[i][x as usize];
        }
        Edge::new(self.shape, &digits[..edge.colours()]).expect("permutation preserves range")
    }

    /// Image of an edge code, via a decode/map/encode round trip.
    pub fn apply_code(&self, code: u32) -> u32 {
        let edge = Edge::from_code(self.shape, code).expect("code in range");
        self.apply_edge(&edge).code()
    }

    /// Precomputed code-to-code table for fast orbit scans.
    pub fn code_table(&self) -> Vec<u32> {
        (0..self.shape.edge_space() as u32)
            .map(|c| self.apply_code(c))
            .collect()
    }
}

/// Every element of the base-fixing group: `(d+1)! * (d!)^(d+1)` elements.
/// Small for the oracle dimensions: 2 at d=1, 48 at d=2, 31104 at d=3.
pub fn base_fixing_group(shape: Shape) -> Vec<LabelPerm> {
    let n = shape.colours();
    let colour_perms = permutations(n);
    // label permutations fix 0 and permute 1..=d
    let nonzero_perms: Vec<Vec<u8>> = permutations(n - 1)
        .into_iter()
        .map(|p| {
            let mut full = vec![0u8; n];
            for (k, &v) in p.iter().enumerate() {
                full[k + 1] = v + 1;
            }
            full
        })
        .collect();

    let mut group = Vec::new();
    let mut label_choice = vec![0usize; n];
    loop {
        for cp in &colour_perms {
            let mut elem = LabelPerm::identity(shape);
            for i in 0..n {
                elem.colour_map[i] = cp[i];
                let lm = &nonzero_perms[label_choice[i]];
                for x in 0..n {
                    elem.label_maps[i][x] = lm[x];
                }
            }
            group.push(elem);
        }
        // odometer over label permutation choices
        let mut pos = n;
        loop {
            if pos == 0 {
                return group;
            }
            pos -= 1;
            label_choice[pos] += 1;
            if label_choice[pos] < nonzero_perms.len() {
                break;
            }
            label_choice[pos] = 0;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut items: Vec<u8> = (0..n as u8).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Is the sorted code set `codes` lexicographically minimal in its orbit?
/// `tables` holds one precomputed code table per group element.
pub fn is_canonical(codes: &[u32], tables: &[Vec<u32>]) -> bool {
    let mut mapped: Vec<u32> = Vec::with_capacity(codes.len());
    for table in tables {
        mapped.clear();
        mapped.extend(codes.iter().map(|&c| table[c as usize]));
        mapped.sort_unstable();
        if mapped.as_slice() < codes {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Shape;

    fn shape(d: usize) -> Shape {
        Shape::new(d).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(base_fixing_group(shape(1)).len(), 2);
        assert_eq!(base_fixing_group(shape(2)).len(), 48);
    }

    #[test]
    fn group_elements_are_distinct_bijections() {
        let s = shape(2);
        let group = base_fixing_group(s);
        let mut seen = std::collections::HashSet::new();
        for g in &group {
            let table = g.code_table();
            let mut sorted = table.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..27).collect::<Vec<u32>>(), "not a bijection");
            assert!(seen.insert(table), "duplicate group element");
        }
    }

    #[test]
    fn group_fixes_zero_edge_and_zero_counts() {
        // label 0 is fixed in every colour, so the all-zeros edge is fixed
        // and z(e) is invariant under the whole group
        let s = shape(2);
        let zero = Edge::new(s, &[0, 0, 0]).unwrap();
        for g in base_fixing_group(s) {
            assert_eq!(g.apply_edge(&zero), zero);
            for code in 0..27u32 {
                let e = Edge::from_code(s, code).unwrap();
                assert_eq!(g.apply_edge(&e).zeros(), e.zeros());
            }
        }
    }

    #[test]
    fn canonicity_finds_orbit_minimum() {
        let s = shape(2);
        let group = base_fixing_group(s);
        let tables: Vec<Vec<u32>> = group.iter().map(|g| g.code_table()).collect();
        // the orbit of {100} under colour/label moves contains {010}-style
        // sets; only the lex-min member is canonical
        let e = Edge::new(s, &[2, 1, 0]).unwrap();
        let codes = vec![e.code()];
        assert!(!is_canonical(&codes, &tables));

        let mut orbit_min = u32::MAX;
        for t in &tables {
            orbit_min = orbit_min.min(t[e.code() as usize]);
        }
        assert!(is_canonical(&[orbit_min], &tables));
    }
}
