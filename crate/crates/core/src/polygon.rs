//! Convex integer polygons: construction, cardinal extrema, point location,
//! splitting predicates, lattice freeness, Pick counts and affine images.
//!
//! Everything here is exact. Chords of a polygon cut by a line are compared
//! as rationals in `i128`; no floating point is involved.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{gcd, orient, Mat2, Point, Ratio};
use crate::lattice::{AffineMap, Lattice2};

/// A strictly convex integer polygon with nonempty interior.
///
/// Vertices run counterclockwise starting from the lexicographically
/// smallest one, so two polygons are equal iff their vertex lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct LatticePolygon {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<Point>,
}

impl TryFrom<PolygonRepr> for LatticePolygon {
    type Error = Error;
    fn try_from(r: PolygonRepr) -> Result<Self> {
        LatticePolygon::from_points(&r.vertices)
    }
}

impl From<LatticePolygon> for PolygonRepr {
    fn from(p: LatticePolygon) -> Self {
        PolygonRepr { vertices: p.vertices }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::Degenerate("segment endpoints coincide".into()));
        }
        Ok(Segment { a, b })
    }

    /// Panicking constructor for literal segments.
    pub fn of(a: (i64, i64), b: (i64, i64)) -> Self {
        Segment::new(a.into(), b.into()).expect("distinct endpoints")
    }

    pub fn line(&self) -> Line {
        Line::through(self.a, self.b)
    }

    pub fn map(&self, m: &AffineMap) -> Segment {
        Segment { a: m.apply(self.a), b: m.apply(self.b) }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// The line `a·x1 + b·x2 = c` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Line {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Line {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::Degenerate("line with zero normal".into()));
        }
        Ok(Line { a, b, c })
    }

    /// `x1 = c`.
    pub fn vertical(c: i64) -> Self {
        Line { a: 1, b: 0, c }
    }

    /// `x2 = c`.
    pub fn horizontal(c: i64) -> Self {
        Line { a: 0, b: 1, c }
    }

    pub fn through(p: Point, q: Point) -> Self {
        let d = q - p;
        Line { a: -d.y, b: d.x, c: -d.y * p.x + d.x * p.y }
    }

    pub fn eval(&self, p: Point) -> i64 {
        self.a * p.x + self.b * p.y - self.c
    }
}

/// Twice the area together with exact interior and boundary lattice counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PickCounts {
    pub twice_area: i64,
    pub interior: i64,
    pub boundary: i64,
}

impl PickCounts {
    pub fn pick_identity_holds(&self) -> bool {
        2 * self.interior + self.boundary - 2 == self.twice_area
    }
}

/// The twelve cardinal extrema of a polygon and the four flags recording
/// whether the extreme horizontal/vertical supporting lines carry an edge.
///
/// `m1`, `m2`, `m3`, `m4` refer to the south, east, north and west sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalProfile {
    pub north: i64,
    pub south: i64,
    pub west: i64,
    pub east: i64,
    pub north_lo: i64,
    pub north_hi: i64,
    pub south_lo: i64,
    pub south_hi: i64,
    pub west_lo: i64,
    pub west_hi: i64,
    pub east_lo: i64,
    pub east_hi: i64,
    pub m1: u8,
    pub m2: u8,
    pub m3: u8,
    pub m4: u8,
}

impl CardinalProfile {
    pub fn flag_sum(&self) -> usize {
        (self.m1 + self.m2 + self.m3 + self.m4) as usize
    }
}

/// Closed bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BBox {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl LatticePolygon {
    /// Convex hull of `points` in canonical vertex order.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        if let Some(bad) = points.iter().find(|p| !p.in_range()) {
            return Err(Error::CoordinateOverflow(*bad));
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Degenerate(format!("{} distinct points", pts.len())));
        }
        // Monotone chain; strict turns drop collinear points.
        let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
        for &p in pts.iter() {
            while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        let lower_len = hull.len() + 1;
        for &p in pts.iter().rev().skip(1) {
            while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        if hull.len() < 3 {
            return Err(Error::Degenerate("points are collinear".into()));
        }
        // The chain starts at the lexicographic minimum and runs counterclockwise.
        Ok(LatticePolygon { vertices: hull })
    }

    /// Validates a vertex list that is claimed to be strictly convex and
    /// counterclockwise (in any rotation).
    pub fn from_ccw(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!("{} vertices", vertices.len())));
        }
        if let Some(bad) = vertices.iter().find(|p| !p.in_range()) {
            return Err(Error::CoordinateOverflow(*bad));
        }
        let k = vertices.len();
        for i in 0..k {
            if orient(vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]) <= 0 {
                return Err(Error::NotConvex);
            }
        }
        let poly = Self::canonical_rotation(vertices);
        // Local left turns alone admit multiply wound stars.
        if Self::twice_area_of(&poly.vertices) <= 0 || !poly.is_simple_fan() {
            return Err(Error::NotConvex);
        }
        Ok(poly)
    }

    /// Trusted constructor for vertex lists produced by the enumerator,
    /// which are already canonical.
    pub(crate) fn from_canonical_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(LatticePolygon::from_ccw(vertices.clone()).map(|p| p.vertices == vertices).unwrap_or(false));
        LatticePolygon { vertices }
    }

    fn canonical_rotation(mut vertices: Vec<Point>) -> Self {
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(start);
        LatticePolygon { vertices }
    }

    fn is_simple_fan(&self) -> bool {
        let v0 = self.vertices[0];
        self.vertices[1..].windows(2).all(|w| orient(v0, w[0], w[1]) > 0)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    pub fn bbox(&self) -> BBox {
        let mut b = BBox { x_min: i64::MAX, x_max: i64::MIN, y_min: i64::MAX, y_max: i64::MIN };
        for p in &self.vertices {
            b.x_min = b.x_min.min(p.x);
            b.x_max = b.x_max.max(p.x);
            b.y_min = b.y_min.min(p.y);
            b.y_max = b.y_max.max(p.y);
        }
        b
    }

    fn twice_area_of(vertices: &[Point]) -> i64 {
        let k = vertices.len();
        (0..k).map(|i| vertices[i].cross(vertices[(i + 1) % k])).sum()
    }

    pub fn twice_area(&self) -> i64 {
        Self::twice_area_of(&self.vertices)
    }

    pub fn cardinal_profile(&self) -> CardinalProfile {
        let b = self.bbox();
        let on = |pred: &dyn Fn(&Point) -> bool, key: &dyn Fn(&Point) -> i64| {
            let vals: Vec<i64> = self.vertices.iter().filter(|p| pred(p)).map(key).collect();
            (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
        };
        let (north_lo, north_hi) = on(&|p| p.y == b.y_max, &|p| p.x);
        let (south_lo, south_hi) = on(&|p| p.y == b.y_min, &|p| p.x);
        let (west_lo, west_hi) = on(&|p| p.x == b.x_min, &|p| p.y);
        let (east_lo, east_hi) = on(&|p| p.x == b.x_max, &|p| p.y);
        CardinalProfile {
            north: b.y_max,
            south: b.y_min,
            west: b.x_min,
            east: b.x_max,
            north_lo,
            north_hi,
            south_lo,
            south_hi,
            west_lo,
            west_hi,
            east_lo,
            east_hi,
            m1: (south_lo != south_hi) as u8,
            m2: (east_lo != east_hi) as u8,
            m3: (north_lo != north_hi) as u8,
            m4: (west_lo != west_hi) as u8,
        }
    }

    pub fn contains_point(&self, p: Point) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orient(a, b, p) {
                o if o < 0 => return Location::Outside,
                0 => on_edge = true,
                _ => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Range of the parameter `d·(x − a)` over the chord cut by the line
    /// through `a` with direction `d`, provided that line splits the polygon.
    fn chord_range(&self, a: Point, d: Point) -> Option<(Ratio, Ratio)> {
        let k = self.vertices.len();
        let side: Vec<i128> = self.vertices.iter().map(|&v| d.cross(v - a) as i128).collect();
        if !(side.iter().any(|&s| s < 0) && side.iter().any(|&s| s > 0)) {
            return None;
        }
        let param: Vec<i128> = self.vertices.iter().map(|&v| d.dot(v - a) as i128).collect();
        let mut lo: Option<Ratio> = None;
        let mut hi: Option<Ratio> = None;
        let mut push = |r: Ratio| {
            lo = Some(lo.map_or(r, |l| l.min(r)));
            hi = Some(hi.map_or(r, |h| h.max(r)));
        };
        for i in 0..k {
            let j = (i + 1) % k;
            let (fi, fj) = (side[i], side[j]);
            if fi == 0 {
                push(Ratio::int(param[i]));
            } else if (fi < 0) != (fj < 0) && fj != 0 {
                push(Ratio::new(fj * param[i] - fi * param[j], fj - fi));
            }
        }
        Some((lo?, hi?))
    }

    /// Whether the line `a·x1 + b·x2 = c` leaves interior points of the
    /// polygon strictly on both sides.
    pub fn splits_by_line(&self, line: &Line) -> bool {
        let mut neg = false;
        let mut pos = false;
        for &v in &self.vertices {
            let s = line.eval(v);
            neg |= s < 0;
            pos |= s > 0;
        }
        neg && pos
    }

    /// Whether the segment splits the polygon: its line splits the polygon
    /// and the whole chord lies inside the closed segment.
    pub fn splits_by_segment(&self, s: &Segment) -> bool {
        let d = s.b - s.a;
        match self.chord_range(s.a, d) {
            Some((lo, hi)) => lo >= Ratio::int(0) && hi <= Ratio::int(d.dot(d) as i128),
            None => false,
        }
    }

    /// Whether the ray `{o + λ·dir : λ ≥ 0}` splits the polygon.
    pub fn splits_by_ray(&self, origin: Point, dir: Point) -> bool {
        match self.chord_range(origin, dir) {
            Some((lo, _)) => lo >= Ratio::int(0),
            None => false,
        }
    }

    /// Whether the polygon has a point on the line.
    pub fn meets_line(&self, line: &Line) -> bool {
        let mut neg = false;
        let mut pos = false;
        for &v in &self.vertices {
            match line.eval(v) {
                0 => return true,
                s if s < 0 => neg = true,
                _ => pos = true,
            }
        }
        neg && pos
    }

    /// No point of `l` lies in the closed polygon.
    pub fn is_free_of(&self, l: &Lattice2) -> bool {
        let b = self.bbox();
        l.points_in_box(b.x_min, b.x_max, b.y_min, b.y_max)
            .all(|p| self.contains_point(p) == Location::Outside)
    }

    /// Shoelace area with interior/boundary counts from a direct scan.
    pub fn area2_and_pick(&self) -> PickCounts {
        let b = self.bbox();
        let (mut interior, mut boundary) = (0, 0);
        for x in b.x_min..=b.x_max {
            for y in b.y_min..=b.y_max {
                match self.contains_point(Point::new(x, y)) {
                    Location::Interior => interior += 1,
                    Location::Boundary => boundary += 1,
                    Location::Outside => {}
                }
            }
        }
        PickCounts { twice_area: self.twice_area(), interior, boundary }
    }

    /// Every edge vector is primitive.
    pub fn is_minimal(&self) -> bool {
        self.edges().all(|(a, b)| {
            let d = b - a;
            gcd(d.x, d.y) == 1
        })
    }

    pub fn transform(&self, m: &AffineMap) -> LatticePolygon {
        self.map_points(|p| m.apply(p), m.linear.det() < 0)
    }

    /// Image under a linear map given as a matrix (determinant ±1 or not).
    pub fn transform_linear(&self, m: &Mat2) -> LatticePolygon {
        assert!(m.det() != 0, "singular map");
        self.map_points(|p| m.apply(p), m.det() < 0)
    }

    pub fn translate(&self, t: Point) -> LatticePolygon {
        self.map_points(|p| p + t, false)
    }

    fn map_points(&self, f: impl Fn(Point) -> Point, reverses: bool) -> LatticePolygon {
        let mut v: Vec<Point> = self.vertices.iter().map(|&p| f(p)).collect();
        assert!(v.iter().all(|p| p.in_range()), "image leaves the coordinate range");
        if reverses {
            v.reverse();
        }
        Self::canonical_rotation(v)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(i64, i64)]) -> LatticePolygon {
        let v: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
        LatticePolygon::from_points(&v).unwrap()
    }

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn hull_examples() {
        assert_eq!(poly(&[(0, 0), (1, 0), (0, 1)]).vertices(), &pts(&[(0, 0), (1, 0), (0, 1)])[..]);
        assert_eq!(
            poly(&[(0, 0), (2, 0), (1, 0), (0, 2)]).vertices(),
            &pts(&[(0, 0), (2, 0), (0, 2)])[..]
        );
        assert_eq!(
            poly(&[(0, 1), (1, 0), (2, 1), (1, 2), (1, 1)]).vertices(),
            &pts(&[(0, 1), (1, 0), (2, 1), (1, 2)])[..]
        );
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(LatticePolygon::from_points(&pts(&[(0, 0), (1, 1)])), Err(Error::Degenerate(_))));
        assert!(matches!(
            LatticePolygon::from_points(&pts(&[(0, 0), (1, 1), (3, 3)])),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(LatticePolygon::from_points(&pts(&[(0, 0), (0, 0), (0, 0)])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ccw_validation() {
        assert!(LatticePolygon::from_ccw(pts(&[(1, 0), (0, 1), (0, 0)])).is_ok());
        assert_eq!(LatticePolygon::from_ccw(pts(&[(0, 0), (0, 1), (1, 0)])), Err(Error::NotConvex));
        // A pentagram turns left everywhere but winds twice.
        let star = pts(&[(0, 0), (4, 0), (1, 3), (2, -2), (3, 3)]);
        assert!(LatticePolygon::from_ccw(star).is_err());
    }

    #[test]
    fn cardinal_examples() {
        let sq = poly(&[(1, 1), (2, 1), (2, 2), (1, 2)]);
        let c = sq.cardinal_profile();
        assert_eq!((c.north, c.south, c.west, c.east), (2, 1, 1, 2));
        assert_eq!((c.m1, c.m2, c.m3, c.m4), (1, 1, 1, 1));

        let c = poly(&[(0, 0), (2, 1), (1, 2)]).cardinal_profile();
        assert_eq!((c.north, c.north_lo, c.north_hi, c.m3), (2, 1, 1, 0));
        assert_eq!((c.south, c.south_lo, c.south_hi, c.m1), (0, 0, 0, 0));
        assert_eq!((c.m2, c.m4), (0, 0));

        let c = poly(&[(0, 0), (3, 0), (0, 3)]).cardinal_profile();
        assert_eq!((c.south_lo, c.south_hi), (0, 3));
        assert_eq!((c.m1, c.m2, c.m3, c.m4), (1, 0, 0, 1));
    }

    #[test]
    fn point_location() {
        let sq = poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(sq.contains_point(Point::new(1, 1)), Location::Interior);
        assert_eq!(sq.contains_point(Point::new(0, 1)), Location::Boundary);
        assert_eq!(sq.contains_point(Point::new(3, 3)), Location::Outside);
    }

    #[test]
    fn segment_splitting() {
        let t = poly(&[(-2, -1), (-1, 2), (1, 1)]);
        assert!(t.splits_by_segment(&Segment::of((0, 0), (-3, 0))));
        assert!(t.splits_by_segment(&Segment::of((0, 0), (0, 3))));
        // chord of x2 = 0 is [−5/3, −1/2]
        assert!(!t.splits_by_segment(&Segment::of((0, 0), (-1, 0))));
        assert!(t.splits_by_segment(&Segment::of((-2, 0), (0, 0))));
        assert!(!t.splits_by_segment(&Segment::of((-1, 0), (0, 0))));
        let right = poly(&[(1, -1), (3, -1), (2, 2)]);
        assert!(!right.splits_by_segment(&Segment::of((0, 0), (-3, 0))));
    }

    #[test]
    fn line_splitting() {
        let sq = poly(&[(1, 1), (2, 1), (2, 2), (1, 2)]);
        assert!(!sq.splits_by_line(&Line::vertical(3)));
        let wide = poly(&[(1, 1), (4, 1), (4, 2), (1, 2)]);
        assert!(wide.splits_by_line(&Line::vertical(3)));
        let t = poly(&[(0, 0), (2, 1), (1, 2)]);
        assert!(t.splits_by_line(&Line::new(1, -1, 0).unwrap()));
        // touching is not splitting
        assert!(!sq.splits_by_line(&Line::vertical(2)));
        assert!(sq.meets_line(&Line::vertical(2)));
    }

    #[test]
    fn freeness() {
        let q = poly(&[(0, 1), (1, 0), (2, 1), (1, 2)]);
        assert!(q.is_free_of(&Lattice2::scaled(2)));
        assert!(!q.is_free_of(&Lattice2::integer()));
        let with_origin = poly(&[(-1, -1), (2, 0), (0, 3)]);
        for n in 1..6 {
            assert!(!with_origin.is_free_of(&Lattice2::scaled(n)));
        }
        let t = poly(&[(-2, -1), (-1, 2), (1, 1)]);
        assert!(t.is_free_of(&Lattice2::scaled(3)));
        // boundary hit counts as a lattice point
        let touching = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert!(!touching.is_free_of(&Lattice2::scaled(7)));
    }

    #[test]
    fn pick_examples() {
        let c = poly(&[(0, 0), (1, 0), (0, 1)]).area2_and_pick();
        assert_eq!((c.twice_area, c.interior, c.boundary), (1, 0, 3));
        let c = poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]).area2_and_pick();
        assert_eq!((c.twice_area, c.interior, c.boundary), (8, 1, 8));
        let c = poly(&[(0, 0), (6, 0), (0, 2)]).area2_and_pick();
        assert_eq!(c.twice_area, 12);
        assert!(c.pick_identity_holds());
    }

    #[test]
    fn minimality_filter() {
        assert!(poly(&[(0, 0), (1, 0), (0, 1)]).is_minimal());
        assert!(!poly(&[(0, 0), (2, 0), (0, 1)]).is_minimal());
        assert!(poly(&[(0, 1), (1, 0), (2, 1), (1, 2)]).is_minimal());
    }

    #[test]
    fn transforms() {
        let t = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(t.transform(&AffineMap::IDENTITY), t);
        let refl = AffineMap::new(Mat2::new(0, -1, -1, 0), Point::ORIGIN).unwrap();
        assert_eq!(t.transform(&refl), poly(&[(0, 0), (0, -1), (-1, 0)]));
        let phi = AffineMap::new(Mat2::new(-1, 1, 0, 1), Point::new(3, 0)).unwrap();
        let img = poly(&[(1, 1), (2, 1), (2, 2)]).transform(&phi);
        assert_eq!(img, poly(&[(3, 1), (2, 1), (3, 2)]));
    }

    #[test]
    fn json_accepts_any_order() {
        let p: LatticePolygon = serde_json::from_str(r#"{"vertices":[[-2,-4],[-2,1],[1,3]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"vertices":[[-2,-4],[1,3],[-2,1]]}"#);
    }
}
