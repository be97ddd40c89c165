//! Slopes: convex monotone broken lines measured in a signed axis basis,
//! the four maximal slopes of a polygon, frames that split a slope, and the
//! witness inequalities bounding the number of edges.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ceil_div, gcd, Point};
use crate::lattice::{Lattice2, SignedAxis};
use crate::polygon::{LatticePolygon, Location};

/// An ordered pair of perpendicular signed axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BasisRepr", into = "BasisRepr")]
pub struct SignedBasis {
    f1: SignedAxis,
    f2: SignedAxis,
}

#[derive(Serialize, Deserialize)]
struct BasisRepr {
    f1: SignedAxis,
    f2: SignedAxis,
}

impl TryFrom<BasisRepr> for SignedBasis {
    type Error = Error;
    fn try_from(r: BasisRepr) -> Result<Self> {
        SignedBasis::new(r.f1, r.f2)
    }
}

impl From<SignedBasis> for BasisRepr {
    fn from(b: SignedBasis) -> Self {
        BasisRepr { f1: b.f1, f2: b.f2 }
    }
}

impl SignedBasis {
    pub fn new(f1: SignedAxis, f2: SignedAxis) -> Result<Self> {
        if !f1.is_perpendicular(f2) {
            return Err(Error::InvalidBasis(format!("{f1} and {f2} are not perpendicular")));
        }
        Ok(SignedBasis { f1, f2 })
    }

    /// Panicking constructor for literal bases.
    pub fn of(f1: SignedAxis, f2: SignedAxis) -> Self {
        SignedBasis::new(f1, f2).expect("perpendicular axes")
    }

    /// All eight signed axis bases.
    pub fn all() -> Vec<SignedBasis> {
        let mut out = Vec::with_capacity(8);
        for f1 in SignedAxis::ALL {
            for f2 in SignedAxis::ALL {
                if let Ok(b) = SignedBasis::new(f1, f2) {
                    out.push(b);
                }
            }
        }
        out
    }

    pub fn f1(&self) -> SignedAxis {
        self.f1
    }

    pub fn f2(&self) -> SignedAxis {
        self.f2
    }

    pub fn swapped(&self) -> SignedBasis {
        SignedBasis { f1: self.f2, f2: self.f1 }
    }

    /// Coordinates of a vector in this basis.
    pub fn coords(&self, p: Point) -> Point {
        Point::new(p.dot(self.f1.vector()), p.dot(self.f2.vector()))
    }

    /// The vector with coordinates `c` in this basis.
    pub fn from_coords(&self, c: Point) -> Point {
        c.x * self.f1.vector() + c.y * self.f2.vector()
    }

    /// `det[f1 f2]`, either 1 or −1.
    pub fn orientation(&self) -> i64 {
        self.f1.vector().cross(self.f2.vector())
    }
}

impl fmt::Display for SignedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

/// A validated slope. A single vertex is a valid slope with no edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SlopeRepr", into = "SlopeRepr")]
pub struct Slope {
    basis: SignedBasis,
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct SlopeRepr {
    basis: SignedBasis,
    vertices: Vec<Point>,
}

impl TryFrom<SlopeRepr> for Slope {
    type Error = Error;
    fn try_from(r: SlopeRepr) -> Result<Self> {
        validate_slope(r.basis, &r.vertices)
    }
}

impl From<Slope> for SlopeRepr {
    fn from(s: Slope) -> Self {
        SlopeRepr { basis: s.basis, vertices: s.vertices }
    }
}

impl Slope {
    pub fn basis(&self) -> SignedBasis {
        self.basis
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    /// The same point set read as a slope for the swapped basis.
    pub fn swapped(&self) -> Slope {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Slope { basis: self.basis.swapped(), vertices }
    }
}

/// An integer point together with a signed axis basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Point,
    pub basis: SignedBasis,
}

impl Frame {
    pub fn new(origin: Point, basis: SignedBasis) -> Self {
        Frame { origin, basis }
    }

    pub fn coords(&self, p: Point) -> Point {
        self.basis.coords(p - self.origin)
    }

    pub fn swapped(&self) -> Frame {
        Frame { origin: self.origin, basis: self.basis.swapped() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalSlopes {
    pub q1: Slope,
    pub q2: Slope,
    pub q3: Slope,
    pub q4: Slope,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
    pub m1: u8,
    pub m2: u8,
    pub m3: u8,
    pub m4: u8,
}

impl MaximalSlopes {
    /// `Q_k` for `k` in 1..=4.
    pub fn get(&self, k: usize) -> &Slope {
        match k {
            1 => &self.q1,
            2 => &self.q2,
            3 => &self.q3,
            4 => &self.q4,
            _ => panic!("maximal slopes are numbered 1 to 4"),
        }
    }

    pub fn edge_total(&self) -> usize {
        self.n1 + self.n2 + self.n3 + self.n4
    }

    pub fn flag_total(&self) -> usize {
        (self.m1 + self.m2 + self.m3 + self.m4) as usize
    }
}

pub fn validate_slope(basis: SignedBasis, vertices: &[Point]) -> Result<Slope> {
    if vertices.is_empty() {
        return Err(Error::Precondition("a slope needs at least one vertex".into()));
    }
    if let Some(bad) = vertices.iter().find(|p| !p.in_range()) {
        return Err(Error::CoordinateOverflow(*bad));
    }
    let diffs: Vec<Point> = vertices.windows(2).map(|w| basis.coords(w[1] - w[0])).collect();
    for (i, a) in diffs.iter().enumerate() {
        if !(a.x > 0 && a.y < 0) {
            return Err(Error::Monotonicity { index: i });
        }
    }
    for (i, w) in diffs.windows(2).enumerate() {
        if w[0].cross(w[1]) <= 0 {
            return Err(Error::Convexity { index: i });
        }
    }
    Ok(Slope { basis, vertices: vertices.to_vec() })
}

fn basis_of(f1: SignedAxis, f2: SignedAxis) -> SignedBasis {
    SignedBasis::of(f1, f2)
}

pub fn maximal_slopes(p: &LatticePolygon) -> MaximalSlopes {
    use SignedAxis::*;
    let c = p.cardinal_profile();
    let v = p.vertices();
    let k = v.len();
    let index_of = |q: Point| v.iter().position(|&x| x == q).expect("cardinal extremum is a vertex");
    // Counterclockwise walk from `from` to `to`, both inclusive.
    let walk = |from: Point, to: Point| {
        let (mut i, j) = (index_of(from), index_of(to));
        let mut out = vec![v[i]];
        while i != j {
            i = (i + 1) % k;
            out.push(v[i]);
        }
        out
    };
    let make = |basis: SignedBasis, from: Point, to: Point| {
        validate_slope(basis, &walk(from, to)).expect("boundary arc between extrema is a slope")
    };
    let q4 = make(basis_of(PosE1, PosE2), Point::new(c.west, c.west_lo), Point::new(c.south_lo, c.south));
    let q1 = make(basis_of(PosE2, NegE1), Point::new(c.south_hi, c.south), Point::new(c.east, c.east_lo));
    let q2 = make(basis_of(NegE1, NegE2), Point::new(c.east, c.east_hi), Point::new(c.north_hi, c.north));
    let q3 = make(basis_of(NegE2, PosE1), Point::new(c.north_lo, c.north), Point::new(c.west, c.west_hi));
    MaximalSlopes {
        n1: q1.edge_count(),
        n2: q2.edge_count(),
        n3: q3.edge_count(),
        n4: q4.edge_count(),
        q1,
        q2,
        q3,
        q4,
        m1: c.m1,
        m2: c.m2,
        m3: c.m3,
        m4: c.m4,
    }
}

fn check_frame_basis(f: &Frame, q: &Slope) -> Result<()> {
    if q.basis == f.basis || q.basis == f.basis.swapped() {
        Ok(())
    } else {
        Err(Error::BasisMismatch)
    }
}

/// Frame coordinates of the slope's vertices, ordered from the endpoint
/// with `v1 < 0, v2 > 0` to the endpoint with `w1 > 0, w2 < 0`; `None`
/// when the endpoints are not placed that way.
fn oriented_chain(f: &Frame, q: &Slope) -> Option<Vec<Point>> {
    let mut c: Vec<Point> = q.vertices.iter().map(|&p| f.coords(p)).collect();
    let (a, b) = (c[0], *c.last().unwrap());
    let is_v = |p: Point| p.x < 0 && p.y > 0;
    let is_w = |p: Point| p.x > 0 && p.y < 0;
    if is_v(a) && is_w(b) {
        Some(c)
    } else if is_w(a) && is_v(b) {
        c.reverse();
        Some(c)
    } else {
        None
    }
}

/// Whether a chain running from the `(−,+)` to the `(+,−)` quadrant has a
/// point with both coordinates positive. Along such a chain the first
/// coordinate increases and the second decreases, so this is decided by the
/// sign of the second coordinate where the first one vanishes.
fn passes_positive_quadrant(chain: &[Point]) -> bool {
    for w in chain.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p.x == 0 {
            return p.y > 0;
        }
        if p.x < 0 && q.x > 0 {
            // second coordinate at the crossing, times q.x − p.x > 0
            return p.y * (q.x - p.x) - p.x * (q.y - p.y) > 0;
        }
    }
    false
}

pub fn frame_splits(f: &Frame, q: &Slope) -> Result<bool> {
    check_frame_basis(f, q)?;
    if q.edge_count() == 0 {
        return Ok(false);
    }
    Ok(oriented_chain(f, q).is_some_and(|c| passes_positive_quadrant(&c)))
}

fn is_flat(d: Point) -> bool {
    d.y.abs() <= d.x.abs()
}

pub fn forms_small_angle(f: &Frame, q: &Slope) -> Result<bool> {
    if !frame_splits(f, q)? {
        return Err(Error::Precondition("the frame does not split the slope".into()));
    }
    let chain = oriented_chain(f, q).expect("split implies oriented endpoints");
    // The chain crosses the second coordinate zero exactly once, with the
    // first coordinate positive there; endpoints are never on that ray.
    for i in 1..chain.len() - 1 {
        if chain[i].y == 0 {
            return Ok(is_flat(chain[i] - chain[i - 1]) || is_flat(chain[i + 1] - chain[i]));
        }
    }
    for w in chain.windows(2) {
        if w[0].y > 0 && w[1].y < 0 {
            return Ok(is_flat(w[1] - w[0]));
        }
    }
    Err(Error::Invariant("split slope never meets the first ray".into()))
}

fn lattice_contains_differences(l: &Lattice2, vertices: &[Point]) -> bool {
    vertices.iter().all(|&p| l.contains(p - vertices[0]))
}

/// Least `s` for the edge-count bound of a single slope.
///
/// With `vertex_lattice` whose small f1-step exceeds 1, `s = 0` is required
/// to work. With `shear = (a, m)` the vertices must lie in a translate of
/// the lattice spanned by `f1 − a·f2` and `m·f2`, and the quadratic
/// condition is replaced by its sharper shear form.
pub fn check_slp_witness(q: &Slope, vertex_lattice: Option<&Lattice2>, shear: Option<(i64, i64)>) -> Result<i64> {
    let basis = q.basis;
    let b = basis.coords(q.end() - q.start());
    let n = q.edge_count() as i64;
    let (b1, b2) = (b.x.abs(), b.y.abs());

    if let Some(l) = vertex_lattice {
        if !lattice_contains_differences(l, &q.vertices) {
            return Err(Error::Precondition("slope vertices are not in one coset of the lattice".into()));
        }
        if l.small_step(basis.f1) > 1 && 2 * n > b1 {
            return Err(Error::NoWitness(format!("slope-witness-coarse-step: 2N = {} > |b1| = {b1}", 2 * n)));
        }
    }
    if let Some((a, m)) = shear {
        if !(1 <= a && a <= m) {
            return Err(Error::Precondition(format!("shear parameters need 1 <= a <= m, got a={a} m={m}")));
        }
        let c0 = basis.coords(q.start());
        let on_lattice = q.vertices.iter().all(|&p| {
            let c = basis.coords(p) - c0;
            (c.y + a * c.x).rem_euclid(m) == 0
        });
        if !on_lattice {
            return Err(Error::Precondition("slope vertices are not in the shear lattice".into()));
        }
    }
    for s in 0..=n {
        let quadratic = match shear {
            Some((a, m)) => 2 * b2 >= (2 * a + (s - 1) * m) * s,
            None => 2 * b2 >= s * (s + 1),
        };
        if 2 * n <= b1 + s && quadratic {
            return Ok(s);
        }
    }
    let name = if shear.is_some() { "slope-witness-shear" } else { "slope-witness" };
    Err(Error::NoWitness(format!("{name}: no s in [0, {n}] for b = ({}, {})", b.x, b.y)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub s: i64,
    pub t: i64,
    pub small_angle: bool,
    /// Whether the vertices generate a proper sublattice of Z².
    pub proper_sublattice: bool,
    pub v: Point,
    pub w: Point,
    pub edges: usize,
}

/// Whether the integer points `vertices` all lie in a proper sublattice of
/// Z²: the gcd of all 2×2 minors is the index of the lattice they generate
/// (0 when they span less than rank 2).
pub fn generates_proper_sublattice(vertices: &[Point]) -> bool {
    let mut g = 0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            g = gcd(g, vertices[i].cross(vertices[j]));
        }
    }
    g != 1
}

/// Finds `(s, t)` for a split slope, smallest `s` first and then smallest
/// `t`, and checks the derived edge bounds.
pub fn check_th36_witness(f: &Frame, q: &Slope) -> Result<SplitWitness> {
    if !frame_splits(f, q)? {
        return Err(Error::Precondition("the frame does not split the slope".into()));
    }
    let small_angle = forms_small_angle(f, q)?;
    let chain = oriented_chain(f, q).expect("split implies oriented endpoints");
    let (v, w) = (chain[0], *chain.last().unwrap());
    let n2 = 2 * q.edge_count() as i64;
    let top = v.y + w.x;
    // −⌈−w2/2⌉ + 1
    let angle_gain = ceil_div(-w.y, 2) - 1;

    let proper = generates_proper_sublattice(&q.vertices);
    if n2 > top {
        return Err(Error::NoWitness(format!("split-bound: 2N = {n2} > v2 + w1 = {top}")));
    }
    if small_angle && n2 > top - angle_gain {
        return Err(Error::NoWitness(format!(
            "split-bound-small-angle: 2N = {n2} > v2 + w1 - ceil(-w2/2) + 1 = {}",
            top - angle_gain
        )));
    }
    if proper && n2 > top - 1 {
        return Err(Error::NoWitness(format!("split-bound-sublattice: 2N = {n2} > v2 + w1 - 1 = {}", top - 1)));
    }

    let mut found_plain = false;
    for s in 0..=v.y.min(top) {
        for t in s..=top {
            // doubled form of the strict inequality
            let c = -2 * v.x < 2 * t * s - (s * s - s) + 2 * (v.y - s) * (t + 1);
            let d = n2 <= top - t + s;
            if !(c && d) {
                continue;
            }
            found_plain = true;
            if !small_angle || n2 <= top - t + s - angle_gain {
                return Ok(SplitWitness { s, t, small_angle, proper_sublattice: proper, v, w, edges: q.edge_count() });
            }
        }
    }
    let name = if found_plain { "split-witness-small-angle" } else { "split-witness" };
    Err(Error::NoWitness(format!("{name}: no (s, t) with 0 <= s <= t <= {top}")))
}

/// The index `k` of the maximal slope split by `f`, for a frame whose
/// origin lies outside `p` and whose two rays both split `p`.
pub fn frame_splits_polygon_slope(f: &Frame, p: &LatticePolygon) -> Result<usize> {
    use SignedAxis::*;
    if p.contains_point(f.origin) != Location::Outside {
        return Err(Error::Precondition("frame origin lies in the polygon".into()));
    }
    let (f1, f2) = (f.basis.f1, f.basis.f2);
    if !p.splits_by_ray(f.origin, f1.vector()) || !p.splits_by_ray(f.origin, f2.vector()) {
        return Err(Error::Precondition("both frame rays must split the polygon".into()));
    }
    let k = match (f1, f2) {
        (NegE1, PosE2) | (PosE2, NegE1) => 1,
        (NegE2, NegE1) | (NegE1, NegE2) => 2,
        (PosE1, NegE2) | (NegE2, PosE1) => 3,
        (PosE2, PosE1) | (PosE1, PosE2) => 4,
        _ => unreachable!("perpendicular axes"),
    };
    let slopes = maximal_slopes(p);
    if !frame_splits(f, slopes.get(k))? {
        return Err(Error::Invariant(format!("frame {} does not split Q{k}", f.basis)));
    }
    Ok(k)
}

/// A serializable record of a failed slope check, for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeFailure {
    pub slope: Slope,
    pub frame: Option<Frame>,
    pub violated: String,
}

impl SlopeFailure {
    pub fn from_error(slope: &Slope, frame: Option<&Frame>, err: &Error) -> Self {
        let violated = match err {
            Error::NoWitness(msg) => msg.split(':').next().unwrap_or("unknown").to_string(),
            other => other.to_string(),
        };
        SlopeFailure { slope: slope.clone(), frame: frame.copied(), violated }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SignedAxis::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn poly(v: &[(i64, i64)]) -> LatticePolygon {
        LatticePolygon::from_points(&pts(v)).unwrap()
    }

    fn std_basis() -> SignedBasis {
        SignedBasis::of(PosE1, PosE2)
    }

    #[test]
    fn validation_examples() {
        assert!(validate_slope(std_basis(), &pts(&[(0, 3), (1, 1), (3, 0)])).is_ok());
        assert!(validate_slope(std_basis(), &pts(&[(5, 5)])).is_ok());
        assert_eq!(
            validate_slope(std_basis(), &pts(&[(0, 0), (1, 1)])),
            Err(Error::Monotonicity { index: 0 })
        );
        assert_eq!(
            validate_slope(std_basis(), &pts(&[(0, 3), (2, 2), (3, 0)])),
            Err(Error::Convexity { index: 0 })
        );
        assert!(SignedBasis::new(PosE1, NegE1).is_err());
    }

    #[test]
    fn swapped_basis_reads_reversed_chain() {
        let s = validate_slope(std_basis(), &pts(&[(0, 3), (1, 1), (3, 0)])).unwrap();
        let sw = s.swapped();
        assert!(validate_slope(sw.basis(), sw.vertices()).is_ok());
        // the unreversed chain is not a slope for the swapped basis
        assert!(validate_slope(std_basis().swapped(), s.vertices()).is_err());
    }

    #[test]
    fn maximal_slope_examples() {
        let m = maximal_slopes(&poly(&[(1, 1), (2, 1), (2, 2), (1, 2)]));
        assert_eq!((m.n1, m.n2, m.n3, m.n4), (0, 0, 0, 0));
        assert_eq!((m.m1, m.m2, m.m3, m.m4), (1, 1, 1, 1));

        let m = maximal_slopes(&poly(&[(0, 0), (2, 1), (1, 2)]));
        assert_eq!((m.n1, m.n2, m.n3, m.n4), (1, 1, 1, 0));
        assert_eq!(m.flag_total(), 0);

        let m = maximal_slopes(&poly(&[(0, 0), (3, 0), (0, 3)]));
        assert_eq!((m.n1, m.n2, m.n3, m.n4), (0, 1, 0, 0));
        assert_eq!((m.m1, m.m2, m.m3, m.m4), (1, 0, 0, 1));
        assert_eq!(m.edge_total() + m.flag_total(), 3);
    }

    #[test]
    fn frame_split_examples() {
        let b = SignedBasis::of(PosE2, NegE1);
        let q = validate_slope(b, &pts(&[(2, -1), (4, 2)])).unwrap();
        // frame coordinates of the endpoints: (−1, 1) and (2, −1)
        let f = Frame::new(Point::new(3, 0), b);
        assert_eq!(f.coords(q.start()), Point::new(-1, 1));
        assert_eq!(f.coords(q.end()), Point::new(2, -1));
        // crossing of the f2 ray at second coordinate 1 − 2/3 > 0
        assert!(frame_splits(&f, &q).unwrap());

        let q = validate_slope(std_basis(), &pts(&[(1, 3), (4, 0)])).unwrap();
        assert!(!frame_splits(&Frame::new(Point::new(0, 0), std_basis()), &q).unwrap());

        let single = validate_slope(std_basis(), &pts(&[(0, 0)])).unwrap();
        assert!(!frame_splits(&Frame::new(Point::new(1, -1), std_basis()), &single).unwrap());

        // the edge passes through the frame origin: no positive point
        let q = validate_slope(std_basis(), &pts(&[(-1, 1), (1, -1)])).unwrap();
        assert!(!frame_splits(&Frame::new(Point::ORIGIN, std_basis()), &q).unwrap());

        let other = Frame::new(Point::ORIGIN, SignedBasis::of(NegE1, PosE2));
        assert_eq!(frame_splits(&other, &q), Err(Error::BasisMismatch));
    }

    #[test]
    fn small_angle_examples() {
        let o = Frame::new(Point::ORIGIN, std_basis());
        // symmetric 45° crossing
        let q = validate_slope(std_basis(), &pts(&[(-1, 3), (3, -1)])).unwrap();
        assert!(frame_splits(&o, &q).unwrap());
        assert!(forms_small_angle(&o, &q).unwrap());
        // steep edge (1, −3) at the crossing
        let q = validate_slope(std_basis(), &pts(&[(-1, 5), (0, 1), (1, -2)])).unwrap();
        assert!(frame_splits(&o, &q).unwrap());
        assert!(!forms_small_angle(&o, &q).unwrap());
        // crossing at a vertex: the flatter outgoing edge decides
        let q = validate_slope(std_basis(), &pts(&[(-1, 5), (1, 0), (4, -1)])).unwrap();
        assert!(forms_small_angle(&o, &q).unwrap());
        let not_split = validate_slope(std_basis(), &pts(&[(1, 3), (4, 0)])).unwrap();
        assert!(matches!(forms_small_angle(&o, &not_split), Err(Error::Precondition(_))));
    }

    #[test]
    fn slp_examples() {
        let single = validate_slope(std_basis(), &pts(&[(0, 0)])).unwrap();
        assert_eq!(check_slp_witness(&single, None, None), Ok(0));
        let q = validate_slope(std_basis(), &pts(&[(0, 3), (1, 1), (3, 0)])).unwrap();
        assert_eq!(check_slp_witness(&q, None, None), Ok(1));
        // same slope inside Z × Z, no coarse step: s = 0 fails, s = 1 is least
        assert_eq!(check_slp_witness(&q, Some(&Lattice2::integer()), None), Ok(1));
        let coarse = validate_slope(std_basis(), &pts(&[(0, 6), (2, 2), (6, 0)])).unwrap();
        let l = Lattice2::rectangular(2, 2);
        assert_eq!(check_slp_witness(&coarse, Some(&l), None), Ok(0));
        assert!(matches!(check_slp_witness(&q, Some(&l), None), Err(Error::Precondition(_))));
    }

    #[test]
    fn slp_shear_form() {
        // vertices in the lattice spanned by (1, −1), (0, 3): a = 1, m = 3
        let q = validate_slope(std_basis(), &pts(&[(0, 5), (1, 1), (3, 2 - 3)])).unwrap();
        let s = check_slp_witness(&q, None, Some((1, 3))).unwrap();
        let plain = check_slp_witness(&q, None, None).unwrap();
        assert!(s >= plain);
        assert!(matches!(check_slp_witness(&q, None, Some((2, 3))), Err(Error::Precondition(_))));
        assert!(matches!(check_slp_witness(&q, None, Some((4, 3))), Err(Error::Precondition(_))));
    }

    #[test]
    fn th36_example() {
        let o = Frame::new(Point::ORIGIN, std_basis());
        let q = validate_slope(std_basis(), &pts(&[(-1, 2), (2, -1)])).unwrap();
        let w = check_th36_witness(&o, &q).unwrap();
        assert_eq!((w.s, w.t), (0, 0));
        let q = validate_slope(std_basis(), &pts(&[(-1, 1), (1, -1)])).unwrap();
        assert!(matches!(check_th36_witness(&o, &q), Err(Error::Precondition(_))));
    }

    #[test]
    fn polygon_slope_table() {
        // a diamond around (4, 4), frames near its corners outside it
        let p = poly(&[(4, 0), (8, 4), (4, 8), (0, 4)]);
        let cases = [
            ((1, 1), PosE1, PosE2, 4),
            ((1, 1), PosE2, PosE1, 4),
            ((7, 7), NegE1, NegE2, 2),
            ((7, 7), NegE2, NegE1, 2),
            ((7, 1), PosE2, NegE1, 1),
            ((7, 1), NegE1, PosE2, 1),
            ((1, 7), PosE1, NegE2, 3),
            ((1, 7), NegE2, PosE1, 3),
        ];
        for ((x, y), f1, f2, k) in cases {
            let f = Frame::new(Point::new(x, y), SignedBasis::of(f1, f2));
            assert_eq!(frame_splits_polygon_slope(&f, &p), Ok(k), "{f1} {f2}");
        }
        let inside = Frame::new(Point::new(4, 4), std_basis());
        assert!(matches!(frame_splits_polygon_slope(&inside, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn proper_sublattice_detection() {
        assert!(generates_proper_sublattice(&pts(&[(2, 0), (0, 2), (2, 2)])));
        assert!(!generates_proper_sublattice(&pts(&[(1, 0), (0, 1)])));
        assert!(generates_proper_sublattice(&pts(&[(1, 1), (2, 2)])));
        assert!(!generates_proper_sublattice(&pts(&[(2, 1), (3, 2)])));
    }

    #[test]
    fn json_round_trip() {
        let q = validate_slope(SignedBasis::of(NegE2, PosE1), &pts(&[(0, 0), (-2, -1), (-3, -3)])).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains(r#""basis":{"f1":"-e2","f2":"e1"}"#));
        let back: Slope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let bad = r#"{"basis":{"f1":"e1","f2":"e2"},"vertices":[[0,0],[1,1]]}"#;
        assert!(serde_json::from_str::<Slope>(bad).is_err());
    }
}
