//! Exact rational geometry: colourful point configurations, origin
//! containment, and the bridge from configurations to hypergraphs.
//!
//! Every predicate runs over exact rationals; there is no floating-point
//! path. A configuration is `(d+1)` colour classes of `(d+1)` points in
//! `R^d`. Its hypergraph keeps the edges whose colourful simplex contains
//! the origin; for configurations with the origin interior to every colour
//! hull these are exactly the octahedral systems without isolated vertex
//! realized by geometry.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeSet, Shape};

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Point {
    coords: Vec<BigRational>,
}

impl Point {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Point { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Point {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: vec![BigRational::zero(); dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Sign of the orientation determinant of `d + 1` points in `R^d`: the
/// determinant of the `(d+1) x (d+1)` matrix whose rows are the homogenized
/// coordinates `[1, x_1, ..., x_d]`, computed exactly.
pub fn orientation(points: &[Point]) -> i8 {
    let n = points.len();
    debug_assert!(points.iter().all(|p| p.dim() + 1 == n));
    let mut m: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(n);
            row.push(BigRational::one());
            row.extend(p.coords.iter().cloned());
            row
        })
        .collect();
    determinant_sign(&mut m)
}

/// Sign of a square rational matrix determinant via Gaussian elimination
/// with exact pivots.
fn determinant_sign(m: &mut [Vec<BigRational>]) -> i8 {
    let n = m.len();
    let mut sign = 1i8;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return 0;
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        if m[col][col].is_negative() {
            sign = -sign;
        }
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    sign
}

/// Position of the origin relative to a closed simplex on `d + 1` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Outside,
    Degenerate,
}

/// Tests whether the origin lies inside the simplex spanned by `d + 1`
/// points: every vertex replaced by the origin must preserve the simplex
/// orientation. Any zero determinant reports a degeneracy.
pub fn simplex_contains_origin(points: &[Point]) -> Containment {
    let reference = orientation(points);
    if reference == 0 {
        return Containment::Degenerate;
    }
    let mut probe = points.to_vec();
    let origin = Point::origin(points.len() - 1);
    for i in 0..points.len() {
        probe[i] = origin.clone();
        let sign = orientation(&probe);
        probe[i] = points[i].clone();
        if sign == 0 {
            return Containment::Degenerate;
        }
        if sign != reference {
            return Containment::Outside;
        }
    }
    Containment::Inside
}

/// Strict interior test for one colour class; degeneracy is rejected as a
/// general-position violation.
pub fn origin_in_interior(colour_class: &[Point]) -> Result<bool> {
    match simplex_contains_origin(colour_class) {
        Containment::Inside => Ok(true),
        Containment::Outside => Ok(false),
        Containment::Degenerate => Err(Error::Degenerate {
            points: format!("{colour_class:?}"),
        }),
    }
}

/// A colourful configuration: `(d+1)` classes of `(d+1)` points each.
#[derive(Clone, Debug)]
pub struct Configuration {
    shape: Shape,
    classes: Vec<Vec<Point>>,
}

impl Configuration {
    pub fn new(shape: Shape, classes: Vec<Vec<Point>>) -> Result<Self> {
        let n = shape.points_per_colour();
        if classes.len() != shape.colours()
            || classes
                .iter()
                .any(|cl| cl.len() != n || cl.iter().any(|p| p.dim() != shape.d()))
        {
            return Err(Error::Degenerate {
                points: "configuration must have (d+1) classes of (d+1) points in R^d".into(),
            });
        }
        Ok(Configuration { shape, classes })
    }

    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    #[inline]
    pub fn classes(&self) -> &[Vec<Point>] {
        &self.classes
    }

    pub fn point(&self, colour: usize, index: usize) -> &Point {
        &self.classes[colour][index]
    }

    /// All points plus the origin, for general-position scans.
    fn points_with_origin(&self) -> Vec<Point> {
        let mut all: Vec<Point> = self.classes.iter().flatten().cloned().collect();
        all.push(Point::origin(self.shape.d()));
        all
    }

    /// Checks general position: every `(d+1)`-subset of the points together
    /// with the origin spans affinely. Returns the offending subset on
    /// failure.
    pub fn check_general_position(&self) -> Result<()> {
        let all = self.points_with_origin();
        let k = self.shape.colours();
        let mut chosen = vec![0usize; k];
        subsets(all.len(), k, &mut chosen, &mut |subset| {
            let pts: Vec<Point> = subset.iter().map(|&i| all[i].clone()).collect();
            if orientation(&pts) == 0 {
                return Err(Error::Degenerate {
                    points: format!("{pts:?}"),
                });
            }
            Ok(())
        })
    }

    /// Core validity: the origin interior to every colour hull.
    pub fn check_core_validity(&self) -> Result<bool> {
        for class in &self.classes {
            if !origin_in_interior(class)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Full validity: general position plus core validity.
    pub fn validate(&self) -> Result<()> {
        self.check_general_position()?;
        if !self.check_core_validity()? {
            return Err(Error::Degenerate {
                points: "origin is not interior to every colour hull".into(),
            });
        }
        Ok(())
    }
}

fn subsets<F>(n: usize, k: usize, chosen: &mut [usize], f: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    fn rec<F>(n: usize, k: usize, start: usize, depth: usize, chosen: &mut [usize], f: &mut F) -> Result<()>
    where
        F: FnMut(&[usize]) -> Result<()>,
    {
        if depth == k {
            return f(chosen);
        }
        for i in start..=(n - (k - depth)) {
            chosen[depth] = i;
            rec(n, k, i + 1, depth + 1, chosen, f)?;
        }
        Ok(())
    }
    rec(n, k, 0, 0, chosen, f)
}

/// The hypergraph of a configuration: edge `e` is present iff the colourful
/// simplex on points `classes[i][e_i]` contains the origin. Degeneracies are
/// rejected, naming the offending simplex.
pub fn configuration_hypergraph(config: &Configuration) -> Result<EdgeSet> {
    let shape = config.shape();
    let mut set = EdgeSet::new(shape);
    let mut pts: Vec<Point> = Vec::with_capacity(shape.colours());
    for code in 0..shape.edge_space() as u32 {
        let edge = Edge::from_code(shape, code).expect("in range");
        pts.clear();
        for (colour, &index) in edge.digits().iter().enumerate() {
            pts.push(config.point(colour, index as usize).clone());
        }
        match simplex_contains_origin(&pts) {
            Containment::Inside => {
                set.insert(&edge);
            }
            Containment::Outside => {}
            Containment::Degenerate => {
                return Err(Error::Degenerate {
                    points: format!("colourful simplex of edge {edge}: {pts:?}"),
                })
            }
        }
    }
    Ok(set)
}

/// Number of colourful simplices containing the origin.
pub fn simplicial_depth_count(config: &Configuration) -> Result<usize> {
    Ok(configuration_hypergraph(config)?.len())
}

const LATTICE_RADIUS: i64 = 64;
const CLASS_ATTEMPTS: u64 = 100_000;
const CONFIG_ATTEMPTS: u64 = 64;

/// Samples a deterministic valid configuration: each class is
/// rejection-sampled from scaled lattice points near the unit sphere until
/// the origin is interior to its hull, then the whole configuration is
/// re-drawn until global general position holds.
pub fn random_configuration(shape: Shape, seed: u64) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CONFIG_ATTEMPTS {
        let mut classes = Vec::with_capacity(shape.colours());
        for _ in 0..shape.colours() {
            classes.push(sample_class(shape, &mut rng, seed)?);
        }
        let config = Configuration::new(shape, classes)?;
        if config.check_general_position().is_ok() {
            debug_assert!(config.check_core_validity()?);
            return Ok(config);
        }
    }
    Err(Error::RejectionBudget {
        seed,
        attempts: CONFIG_ATTEMPTS,
    })
}

fn sample_class(shape: Shape, rng: &mut ChaCha8Rng, seed: u64) -> Result<Vec<Point>> {
    for _ in 0..CLASS_ATTEMPTS {
        let class: Vec<Point> = (0..shape.points_per_colour())
            .map(|_| sample_point(shape.d(), rng))
            .collect();
        match simplex_contains_origin(&class) {
            Containment::Inside => return Ok(class),
            _ => continue,
        }
    }
    Err(Error::RejectionBudget {
        seed,
        attempts: CLASS_ATTEMPTS,
    })
}

/// One rational point on the annulus 1 <= |p| <= 2: an integer lattice
/// vector v with R/2 <= |v| <= R, inverted to p = R * v / |v|^2.
fn sample_point(dim: usize, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let v: Vec<i64> = (0..dim)
            .map(|_| rng.random_range(-LATTICE_RADIUS..=LATTICE_RADIUS))
            .collect();
        let norm2: i64 = v.iter().map(|&x| x * x).sum();
        if norm2 < LATTICE_RADIUS * LATTICE_RADIUS / 4 || norm2 > LATTICE_RADIUS * LATTICE_RADIUS {
            continue;
        }
        let denom = BigInt::from(norm2);
        let coords = v
            .into_iter()
            .map(|x| BigRational::new(BigInt::from(x * LATTICE_RADIUS), denom.clone()))
            .collect();
        return Point::new(coords);
    }
}

/// Builds the clustered configuration realizing the complete hypergraph:
/// colour `i` sits in a small ball around vertex `v_i` of a simplex whose
/// centroid is the origin (`v_0 = -(1,...,1)`, `v_i = e_i` scaled). The
/// cluster radius starts at 1/(10(d+1)) of the circumradius proxy and the
/// construction is re-validated by counting rather than trusted: it must
/// produce all `(d+1)^(d+1)` edges.
pub fn clustered_configuration(shape: Shape, seed: u64) -> Result<Configuration> {
    let d = shape.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radius = BigRational::new(BigInt::one(), BigInt::from(10 * (d as i64 + 1)));
    let scale = BigRational::from_integer(BigInt::from(4));

    for _ in 0..16 {
        let mut classes = Vec::with_capacity(shape.colours());
        for colour in 0..shape.colours() {
            let mut class = Vec::with_capacity(shape.points_per_colour());
            for _ in 0..shape.points_per_colour() {
                let mut coords = Vec::with_capacity(d);
                for axis in 0..d {
                    let centre = if colour == 0 {
                        -BigRational::one()
                    } else if colour - 1 == axis {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    };
                    let jitter = BigRational::new(
                        BigInt::from(rng.random_range(-128i64..=128)),
                        BigInt::from(128),
                    );
                    coords.push((centre + &radius * jitter) * &scale);
                }
                class.push(Point::new(coords));
            }
            classes.push(class);
        }
        let config = Configuration::new(shape, classes)?;
        if config.check_general_position().is_ok() {
            let count = simplicial_depth_count(&config)?;
            if count == shape.edge_space() {
                return Ok(config);
            }
        }
        radius /= BigRational::from_integer(BigInt::from(2));
    }
    Err(Error::RejectionBudget { seed, attempts: 16 })
}

/// Parses the configuration file format: header `d=<n>`, then `(d+1)` blocks
/// of `(d+1)` lines of `d` rationals `p/q` (or plain integers). Lines
/// starting with `#` are comments.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let mut shape: Option<Shape> = None;
    let mut points: Vec<Point> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match shape {
            None => {
                let rest = line.strip_prefix("d=").ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected header \"d=<n>\", found {line:?}"),
                })?;
                let d = usize::from_str(rest.trim()).map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid dimension {rest:?}"),
                })?;
                shape = Some(Shape::new(d).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?);
            }
            Some(s) => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != s.d() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected {} rationals, found {}", s.d(), fields.len()),
                    });
                }
                let coords = fields
                    .iter()
                    .map(|f| parse_rational(f, line_no))
                    .collect::<Result<Vec<BigRational>>>()?;
                points.push(Point::new(coords));
            }
        }
    }
    let shape = shape.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing mandatory header line \"d=<n>\"".into(),
    })?;
    let expected = shape.point_count();
    if points.len() != expected {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {expected} points, found {}", points.len()),
        });
    }
    let n = shape.points_per_colour();
    let classes: Vec<Vec<Point>> = points.chunks(n).map(|c| c.to_vec()).collect();
    Configuration::new(shape, classes)
}

fn parse_rational(field: &str, line_no: usize) -> Result<BigRational> {
    let bad = |_| Error::Parse {
        line: line_no,
        msg: format!("invalid rational {field:?}"),
    };
    match field.split_once('/') {
        Some((p, q)) => {
            let num = BigInt::from_str(p).map_err(bad)?;
            let den = BigInt::from_str(q).map_err(bad)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("zero denominator in {field:?}"),
                });
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(field).map_err(bad)?)),
    }
}

/// Canonical configuration text: header, then one line per point in colour
/// order, each coordinate as a reduced `p/q`.
pub fn format_configuration(config: &Configuration) -> String {
    let mut out = format!("d={}\n", config.shape().d());
    for class in config.classes() {
        for p in class {
            let fields: Vec<String> = p
                .coords()
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{has_isolated_vertex, is_octahedral_system};

    fn shape(d: usize) -> Shape {
        Shape::new(d).unwrap()
    }

    fn pt(coords: &[i64]) -> Point {
        Point::from_integers(coords)
    }

    #[test]
    fn orientation_basics() {
        // unit triangle is nondegenerate; swapping points negates the sign
        let a = [pt(&[1, 0]), pt(&[0, 1]), pt(&[0, 0])];
        let s = orientation(&a);
        assert_ne!(s, 0);
        let b = [pt(&[0, 1]), pt(&[1, 0]), pt(&[0, 0])];
        assert_eq!(orientation(&b), -s);
        // repeated point is degenerate
        let c = [pt(&[1, 0]), pt(&[1, 0]), pt(&[0, 0])];
        assert_eq!(orientation(&c), 0);
    }

    #[test]
    fn orientation_follows_permutation_sign() {
        let pts = [pt(&[3, 1]), pt(&[-2, 4]), pt(&[1, -5])];
        let base = orientation(&pts);
        assert_ne!(base, 0);
        // a 3-cycle is even
        let cycled = [pts[2].clone(), pts[0].clone(), pts[1].clone()];
        assert_eq!(orientation(&cycled), base);
    }

    #[test]
    fn containment_cases() {
        let inside = [pt(&[2, 0]), pt(&[-1, 1]), pt(&[-1, -1])];
        assert_eq!(simplex_contains_origin(&inside), Containment::Inside);

        let outside = [pt(&[1, 0]), pt(&[2, 0]), pt(&[1, 1])];
        assert_eq!(simplex_contains_origin(&outside), Containment::Outside);

        let degenerate = [pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])];
        assert_eq!(simplex_contains_origin(&degenerate), Containment::Degenerate);
    }

    #[test]
    fn interior_tests() {
        assert!(origin_in_interior(&[pt(&[2, 0]), pt(&[-1, 1]), pt(&[-1, -1])]).unwrap());
        assert!(!origin_in_interior(&[pt(&[12, 0]), pt(&[9, 1]), pt(&[9, -1])]).unwrap());
        assert!(origin_in_interior(&[pt(&[-1]), pt(&[2])]).unwrap());
        assert!(origin_in_interior(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).is_err());
    }

    #[test]
    fn random_configurations_are_valid_and_deterministic() {
        let s = shape(2);
        let a = random_configuration(s, 42).unwrap();
        let b = random_configuration(s, 42).unwrap();
        assert_eq!(format_configuration(&a), format_configuration(&b));
        a.validate().unwrap();
        let c = random_configuration(s, 43).unwrap();
        assert_ne!(format_configuration(&a), format_configuration(&c));
    }

    #[test]
    fn configuration_hypergraphs_are_octahedral_systems() {
        for d in 1..=2 {
            let s = shape(d);
            for seed in 0..5 {
                let config = random_configuration(s, seed).unwrap();
                let set = configuration_hypergraph(&config).unwrap();
                assert!(is_octahedral_system(&set).is_yes(), "d={d} seed={seed}");
                assert_eq!(has_isolated_vertex(&set), None, "d={d} seed={seed}");
                if d == 2 {
                    assert!(set.len() >= 5, "d=2 count below mu(2)");
                }
            }
        }
    }

    #[test]
    fn d3_counts_are_even_and_at_least_ten() {
        let s = shape(3);
        for seed in 0..3 {
            let config = random_configuration(s, seed).unwrap();
            let count = simplicial_depth_count(&config).unwrap();
            assert!(count >= 10, "seed={seed} count={count}");
            assert_eq!(count % 2, 0, "seed={seed} count={count}");
        }
    }

    #[test]
    fn clustered_configuration_realizes_complete_hypergraph() {
        let s = shape(2);
        let config = clustered_configuration(s, 7).unwrap();
        let set = configuration_hypergraph(&config).unwrap();
        assert_eq!(set.len(), s.edge_space());
        assert!(is_octahedral_system(&set).is_yes());
    }

    #[test]
    fn configuration_file_round_trip() {
        let s = shape(2);
        let config = random_configuration(s, 9).unwrap();
        let text = format_configuration(&config);
        let back = parse_configuration(&text).unwrap();
        assert_eq!(format_configuration(&back), text);
        assert_eq!(
            configuration_hypergraph(&back).unwrap(),
            configuration_hypergraph(&config).unwrap()
        );
    }

    #[test]
    fn configuration_parser_diagnostics() {
        assert!(matches!(
            parse_configuration("1/2 1/3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_configuration("d=2\n1/2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_configuration("d=2\n1/0 2/1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        // wrong point count
        assert!(parse_configuration("d=2\n1/2 1/3\n").is_err());
    }

    #[test]
    fn mu1_lower_bound_seen_geometrically() {
        let s = shape(1);
        for seed in 0..10 {
            let config = random_configuration(s, seed).unwrap();
            let count = simplicial_depth_count(&config).unwrap();
            assert!(count >= 2, "mu(1) = 2 violated at seed {seed}");
        }
    }
}
