//! Full-rank sublattices of Z², their canonical bases and invariant
//! factors, steps along the coordinate axes, and (affine) unimodular maps.
//!
//! A [`Lattice2`] always stores its basis in lower-triangular Hermite normal
//! form: the generator columns are `(a, b)` and `(0, c)` with `a, c > 0` and
//! `0 ≤ b < c`. Two lattices are equal iff these three numbers agree.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ceil_div, ext_gcd, floor_div, gcd, Mat2, Point, COORD_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct Lattice2 {
    basis: Mat2,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    basis: Mat2,
}

impl TryFrom<LatticeRepr> for Lattice2 {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        Lattice2::new(r.basis)
    }
}

impl From<Lattice2> for LatticeRepr {
    fn from(l: Lattice2) -> Self {
        LatticeRepr { basis: l.basis }
    }
}

/// Invariant factor sequence `(δ, n)`: `δ | n` and `δ·n = det Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantFactors {
    pub delta: i64,
    pub n: i64,
}

impl InvariantFactors {
    pub fn new(delta: i64, n: i64) -> Result<Self> {
        if delta <= 0 || n <= 0 || n % delta != 0 {
            return Err(Error::Precondition(format!(
                "invalid invariant factors ({delta}, {n}): need 0 < δ | n"
            )));
        }
        Ok(InvariantFactors { delta, n })
    }

    pub fn det(&self) -> i64 {
        self.delta * self.n
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.delta, self.n)
    }
}

/// One of the four signed standard basis vectors ±e1, ±e2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignedAxis {
    #[serde(rename = "e1")]
    PosE1,
    #[serde(rename = "-e1")]
    NegE1,
    #[serde(rename = "e2")]
    PosE2,
    #[serde(rename = "-e2")]
    NegE2,
}

impl SignedAxis {
    pub const ALL: [SignedAxis; 4] =
        [SignedAxis::PosE1, SignedAxis::NegE1, SignedAxis::PosE2, SignedAxis::NegE2];

    pub fn vector(self) -> Point {
        match self {
            SignedAxis::PosE1 => Point::new(1, 0),
            SignedAxis::NegE1 => Point::new(-1, 0),
            SignedAxis::PosE2 => Point::new(0, 1),
            SignedAxis::NegE2 => Point::new(0, -1),
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, SignedAxis::PosE1 | SignedAxis::NegE1)
    }

    pub fn is_perpendicular(self, other: SignedAxis) -> bool {
        self.is_horizontal() != other.is_horizontal()
    }

    pub fn neg(self) -> SignedAxis {
        match self {
            SignedAxis::PosE1 => SignedAxis::NegE1,
            SignedAxis::NegE1 => SignedAxis::PosE1,
            SignedAxis::PosE2 => SignedAxis::NegE2,
            SignedAxis::NegE2 => SignedAxis::PosE2,
        }
    }
}

impl fmt::Display for SignedAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignedAxis::PosE1 => "e1",
            SignedAxis::NegE1 => "-e1",
            SignedAxis::PosE2 => "e2",
            SignedAxis::NegE2 => "-e2",
        })
    }
}

/// Small and large steps of a lattice along `direction`, taken with respect
/// to the axis basis `(direction, companion)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepProfile {
    pub small_step: i64,
    pub large_step: i64,
    pub direction: SignedAxis,
    pub companion: SignedAxis,
    /// Large step along the companion axis; `small_step * companion_large_step = det`.
    pub companion_large_step: i64,
}

impl Lattice2 {
    /// Canonicalizes an arbitrary basis (generators are the columns).
    pub fn new(basis: Mat2) -> Result<Self> {
        hnf_canonicalize(basis)
    }

    /// The lattice spanned by the columns `(a, b)` and `(0, c)`, which must
    /// already be in canonical form.
    fn from_hnf(a: i64, b: i64, c: i64) -> Self {
        debug_assert!(a > 0 && c > 0 && (0..c).contains(&b));
        Lattice2 { basis: Mat2::new(a, 0, b, c) }
    }

    pub fn integer() -> Self {
        Lattice2::from_hnf(1, 0, 1)
    }

    /// nZ².
    pub fn scaled(n: i64) -> Self {
        assert!(n > 0, "scale must be positive");
        Lattice2::from_hnf(n, 0, n)
    }

    /// δZ × nZ.
    pub fn rectangular(delta: i64, n: i64) -> Self {
        assert!(delta > 0 && n > 0, "steps must be positive");
        Lattice2::from_hnf(delta, 0, n)
    }

    /// Every sublattice of Z² with the given invariant factors, in a fixed
    /// order (by first diagonal entry, then off-diagonal entry).
    pub fn all_with_factors(f: InvariantFactors) -> Vec<Lattice2> {
        let det = f.det();
        let mut out = Vec::new();
        for a in 1..=det {
            if det % a != 0 {
                continue;
            }
            let c = det / a;
            for b in 0..c {
                if gcd(gcd(a, b), c) == f.delta {
                    out.push(Lattice2::from_hnf(a, b, c));
                }
            }
        }
        out
    }

    pub fn basis(&self) -> Mat2 {
        self.basis
    }

    /// Always true: the stored basis is the Hermite normal form.
    pub fn is_canonical(&self) -> bool {
        true
    }

    fn hnf(&self) -> (i64, i64, i64) {
        (self.basis.rows[0][0], self.basis.rows[1][0], self.basis.rows[1][1])
    }

    pub fn det(&self) -> i64 {
        let (a, _, c) = self.hnf();
        a * c
    }

    pub fn invariant_factors(&self) -> InvariantFactors {
        let (a, b, c) = self.hnf();
        let delta = gcd(gcd(a, b), c);
        InvariantFactors { delta, n: a * c / delta }
    }

    pub fn is_proper(&self) -> bool {
        self.det() > 1
    }

    pub fn contains(&self, p: Point) -> bool {
        let (a, b, c) = self.hnf();
        if p.x % a != 0 {
            return false;
        }
        let i = p.x / a;
        (p.y - i * b) % c == 0
    }

    /// Whether `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Lattice2) -> bool {
        self.contains(other.basis.column(0)) && self.contains(other.basis.column(1))
    }

    /// Representative of `p + Λ` in the fundamental domain `[0, a) × [0, c)`.
    pub fn reduce(&self, p: Point) -> Point {
        let (a, b, c) = self.hnf();
        let i = floor_div(p.x, a);
        let y = p.y - i * b;
        Point::new(p.x - i * a, y.rem_euclid(c))
    }

    /// Fundamental-domain extents `(a, c)`: every residue class has exactly
    /// one representative in `[0, a) × [0, c)`.
    pub fn fundamental_domain(&self) -> (i64, i64) {
        let (a, _, c) = self.hnf();
        (a, c)
    }

    /// Lattice points in the closed box, in increasing `(x, y)` order.
    pub fn points_in_box(&self, x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> LatticeBoxIter {
        let (a, _, _) = self.hnf();
        LatticeBoxIter {
            lattice: *self,
            i: ceil_div(x_min, a),
            i_end: floor_div(x_max, a),
            j: 0,
            j_end: -1,
            started: false,
            y_min,
            y_max,
        }
    }

    /// Gcd of the coordinates of lattice points along `axis`.
    pub fn small_step(&self, axis: SignedAxis) -> i64 {
        let (a, b, c) = self.hnf();
        if axis.is_horizontal() {
            a
        } else {
            gcd(b, c)
        }
    }

    /// Positive generator of `{u : u·axis ∈ Λ}`.
    pub fn large_step(&self, axis: SignedAxis) -> i64 {
        let (a, b, c) = self.hnf();
        if axis.is_horizontal() {
            a * c / gcd(b, c)
        } else {
            c
        }
    }

    pub fn step_profile(&self, direction: SignedAxis, companion: SignedAxis) -> Result<StepProfile> {
        if !direction.is_perpendicular(companion) {
            return Err(Error::InvalidBasis(format!(
                "{direction} and {companion} are not perpendicular"
            )));
        }
        Ok(StepProfile {
            small_step: self.small_step(direction),
            large_step: self.large_step(direction),
            direction,
            companion,
            companion_large_step: self.large_step(companion),
        })
    }

    /// The unique `r ∈ {0, …, det−1}` such that `(e1 + r·e2, det·e2)` is a
    /// basis; requires the small e1-step to be 1.
    pub fn shear_residue(&self) -> Result<i64> {
        let (a, b, _) = self.hnf();
        if a != 1 {
            return Err(Error::Precondition(format!(
                "small e1-step is {a}, shear residue needs 1"
            )));
        }
        Ok(b)
    }

    /// Unimodular `U` with `U·Λ = δZ × nZ`, together with `(δ, n)`.
    pub fn snf_transform(&self) -> (UnimodularMap, InvariantFactors) {
        let mut m = self.basis;
        let mut u = Mat2::IDENTITY;
        loop {
            // Clear the off-diagonal entries with extended-gcd row/column steps.
            while m.rows[1][0] != 0 || m.rows[0][1] != 0 {
                if m.rows[1][0] != 0 {
                    let (p, q) = (m.rows[0][0], m.rows[1][0]);
                    let (g, s, t) = ext_gcd(p, q);
                    let r = Mat2::new(s, t, -q / g, p / g);
                    m = r * m;
                    u = r * u;
                }
                if m.rows[0][1] != 0 {
                    let (p, q) = (m.rows[0][0], m.rows[0][1]);
                    let (g, s, t) = ext_gcd(p, q);
                    m = m * Mat2::new(s, -q / g, t, p / g);
                }
            }
            let (d1, d2) = (m.rows[0][0], m.rows[1][1]);
            if d2 % d1 == 0 {
                break;
            }
            // Fold row 2 into row 1; the next pass shrinks the (1,1) entry.
            let r = Mat2::new(1, 1, 0, 1);
            m = r * m;
            u = r * u;
        }
        for row in 0..2 {
            if m.rows[row][row] < 0 {
                let r = if row == 0 { Mat2::new(-1, 0, 0, 1) } else { Mat2::new(1, 0, 0, -1) };
                m = r * m;
                u = r * u;
            }
        }
        let factors = InvariantFactors { delta: m.rows[0][0], n: m.rows[1][1] };
        debug_assert_eq!(factors, self.invariant_factors());
        let map = UnimodularMap::new(u).expect("product of unimodular steps");
        debug_assert_eq!(
            map.apply_lattice(self),
            Lattice2::rectangular(factors.delta, factors.n)
        );
        (map, factors)
    }

    /// Image of the lattice under the linear part of `m`. The image of the
    /// point set under `m` is this lattice shifted by `m.shift`.
    pub fn apply_affine(&self, m: &AffineMap) -> Lattice2 {
        m.linear.apply_lattice(self)
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.hnf();
        write!(f, "⟨({a}, {b}), (0, {c})⟩")
    }
}

pub struct LatticeBoxIter {
    lattice: Lattice2,
    i: i64,
    i_end: i64,
    j: i64,
    j_end: i64,
    started: bool,
    y_min: i64,
    y_max: i64,
}

impl Iterator for LatticeBoxIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let (a, b, c) = self.lattice.hnf();
        loop {
            if self.started && self.j <= self.j_end {
                let p = Point::new(self.i * a, self.i * b + self.j * c);
                self.j += 1;
                return Some(p);
            }
            if self.started {
                self.i += 1;
            }
            if self.i > self.i_end {
                return None;
            }
            self.started = true;
            let base = self.i * b;
            self.j = ceil_div(self.y_min - base, c);
            self.j_end = floor_div(self.y_max - base, c);
        }
    }
}

/// Canonical lower-triangular Hermite normal form of the lattice spanned by
/// the columns of `basis`.
pub fn hnf_canonicalize(basis: Mat2) -> Result<Lattice2> {
    if basis.det() == 0 {
        return Err(Error::SingularBasis);
    }
    if basis.max_abs_entry() > COORD_LIMIT {
        return Err(Error::CoordinateOverflow(basis.column(0)));
    }
    let (p, q) = (basis.column(0), basis.column(1));
    // Column operation putting gcd(p.x, q.x) in the first row of column 1.
    let (g, s, t) = ext_gcd(p.x, q.x);
    let col1 = s * p + t * q;
    let col2 = (-q.x / g) * p + (p.x / g) * q;
    debug_assert_eq!(col2.x, 0);
    let a = col1.x;
    let c = col2.y.abs();
    let b = col1.y.rem_euclid(c);
    Ok(Lattice2::from_hnf(a, b, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Mat2", into = "Mat2")]
pub struct UnimodularMap {
    matrix: Mat2,
}

impl TryFrom<Mat2> for UnimodularMap {
    type Error = Error;
    fn try_from(m: Mat2) -> Result<Self> {
        UnimodularMap::new(m)
    }
}

impl From<UnimodularMap> for Mat2 {
    fn from(u: UnimodularMap) -> Self {
        u.matrix
    }
}

impl UnimodularMap {
    pub const IDENTITY: UnimodularMap = UnimodularMap { matrix: Mat2::IDENTITY };

    pub fn new(matrix: Mat2) -> Result<Self> {
        match matrix.det() {
            1 | -1 => Ok(UnimodularMap { matrix }),
            d => Err(Error::NotUnimodular(d)),
        }
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn det(&self) -> i64 {
        self.matrix.det()
    }

    pub fn apply(&self, p: Point) -> Point {
        self.matrix.apply(p)
    }

    pub fn compose(&self, inner: &UnimodularMap) -> UnimodularMap {
        UnimodularMap { matrix: self.matrix * inner.matrix }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let adj = self.matrix.adjugate();
        let d = self.det();
        UnimodularMap { matrix: Mat2::new(adj.rows[0][0] * d, adj.rows[0][1] * d, adj.rows[1][0] * d, adj.rows[1][1] * d) }
    }

    pub fn apply_lattice(&self, l: &Lattice2) -> Lattice2 {
        Lattice2::new(self.matrix * l.basis).expect("unimodular image of a lattice is full rank")
    }
}

/// `x ↦ A·x + b` with `A` unimodular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(rename = "matrix")]
    pub linear: UnimodularMap,
    pub shift: Point,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { linear: UnimodularMap::IDENTITY, shift: Point::ORIGIN };

    pub fn new(linear: Mat2, shift: Point) -> Result<Self> {
        Ok(AffineMap { linear: UnimodularMap::new(linear)?, shift })
    }

    pub fn linear(linear: UnimodularMap) -> Self {
        AffineMap { linear, shift: Point::ORIGIN }
    }

    pub fn translation(shift: Point) -> Self {
        AffineMap { linear: UnimodularMap::IDENTITY, shift }
    }

    pub fn apply(&self, p: Point) -> Point {
        self.linear.apply(p) + self.shift
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.compose(&inner.linear),
            shift: self.linear.apply(inner.shift) + self.shift,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse();
        AffineMap { linear: inv, shift: -inv.apply(self.shift) }
    }

    /// Whether the map sends `l` onto itself (linear part fixes `l`, shift in `l`).
    pub fn is_automorphism_of(&self, l: &Lattice2) -> bool {
        self.linear.apply_lattice(l) == *l && l.contains(self.shift)
    }
}
