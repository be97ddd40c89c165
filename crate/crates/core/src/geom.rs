//! Integer points, 2×2 integer matrices and the small amount of exact
//! arithmetic the rest of the crate is built on.
//!
//! All coordinates are `i64`. Every constructor that accepts external
//! coordinates checks them against [`COORD_LIMIT`]; with that bound every
//! 2×2 determinant of point differences fits comfortably in `i64`, and the
//! rational chord comparisons in [`crate::polygon`] are done in `i128`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Largest admissible absolute coordinate (2^24).
///
/// Differences are below 2^25, cross products below 2^51, and the chord
/// numerators below 2^104 in `i128`.
pub const COORD_LIMIT: i64 = 1 << 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// z-component of the cross product `self × other`.
    #[inline]
    pub fn cross(self, other: Point) -> i64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn dot(self, other: Point) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn in_range(self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }
}

impl From<[i64; 2]> for Point {
    fn from([x, y]: [i64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [i64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for i64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

/// Orientation of `c` relative to the directed line `a → b`:
/// positive when `c` is to the left.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> i64 {
    (b - a).cross(c - a)
}

/// A 2×2 integer matrix stored row-major; serialized as `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Mat2 {
    pub rows: [[i64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1, 0, 0, 1);

    pub const fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        Mat2 { rows: [[a11, a12], [a21, a22]] }
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub fn from_columns(c1: Point, c2: Point) -> Self {
        Mat2::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn column(&self, j: usize) -> Point {
        Point::new(self.rows[0][j], self.rows[1][j])
    }

    pub fn det(&self) -> i64 {
        self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.rows[0][0] * p.x + self.rows[0][1] * p.y,
            self.rows[1][0] * p.x + self.rows[1][1] * p.y,
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.rows[0][0], self.rows[1][0], self.rows[0][1], self.rows[1][1])
    }

    /// Adjugate; equals the inverse times the determinant.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.rows[1][1], -self.rows[0][1], -self.rows[1][0], self.rows[0][0])
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.rows.iter().flatten().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.rows[0][0], self.rows[0][1], self.rows[1][0], self.rows[1][1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.rows;
        let b = &o.rows;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl From<[[i64; 2]; 2]> for Mat2 {
    fn from(rows: [[i64; 2]; 2]) -> Self {
        Mat2 { rows }
    }
}

impl From<Mat2> for [[i64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        m.rows
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, u, v)` with `u·a + v·b = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// An exact rational `num / den` with `den > 0`, used only for comparisons.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            Ratio { num: -num, den: -den }
        } else {
            Ratio { num, den }
        }
    }

    pub fn int(v: i128) -> Self {
        Ratio { num: v, den: 1 }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}
