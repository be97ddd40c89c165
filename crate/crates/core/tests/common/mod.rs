//! Independent oracles shared by the integration suites.

#![allow(dead_code)]

use latgon::{LatticePolygon, Mat2, Point};

/// Every set of at least three grid points of `[lo, hi]²` in strictly
/// convex position, as polygons. Subsets are grown in lexicographic order
/// and abandoned as soon as they stop being in convex position, which no
/// superset can repair.
pub fn convex_position_sets(lo: i64, hi: i64) -> Vec<LatticePolygon> {
    let pts: Vec<Point> = (lo..=hi).flat_map(|x| (lo..=hi).map(move |y| Point::new(x, y))).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    grow(&pts, 0, &mut chosen, &mut out);
    out
}

fn in_convex_position(set: &[Point]) -> Option<LatticePolygon> {
    if set.len() < 3 {
        return None;
    }
    LatticePolygon::from_points(set).ok().filter(|p| p.len() == set.len())
}

fn grow(pts: &[Point], from: usize, chosen: &mut Vec<Point>, out: &mut Vec<LatticePolygon>) {
    for i in from..pts.len() {
        chosen.push(pts[i]);
        let keep = if chosen.len() < 3 {
            true
        } else {
            match in_convex_position(chosen) {
                Some(p) => {
                    out.push(p);
                    true
                }
                None => false,
            }
        };
        if keep {
            grow(pts, i + 1, chosen, out);
        }
        chosen.pop();
    }
}

/// Invariant factors from first principles: `n` is the exponent of Z²/Λ,
/// the least m with mZ² ⊆ Λ (membership by Cramer's rule), and δ = det/n.
pub fn snf_oracle(m: Mat2) -> (i64, i64) {
    let det = m.det();
    let [[a, b], [c, d]] = m.rows;
    // x ∈ Λ iff adj(M)·x ≡ 0 (mod det)
    let member = |x: i64, y: i64| (d * x - b * y) % det == 0 && (-c * x + a * y) % det == 0;
    let n = (1..=det.abs()).find(|&k| member(k, 0) && member(0, k)).expect("det·Z² lies in every lattice");
    (det.abs() / n, n)
}

/// Edge counts by direction quadrant (right-up, left-up, left-down,
/// right-down) and the number of axis-parallel edges.
pub fn edge_quadrants(p: &LatticePolygon) -> ([usize; 4], usize) {
    let mut q = [0; 4];
    let mut axis = 0;
    for (a, b) in p.edges() {
        let d = b - a;
        match (d.x.signum(), d.y.signum()) {
            (1, 1) => q[0] += 1,
            (-1, 1) => q[1] += 1,
            (-1, -1) => q[2] += 1,
            (1, -1) => q[3] += 1,
            _ => axis += 1,
        }
    }
    (q, axis)
}

/// Boundary lattice points counted edge by edge.
pub fn boundary_points(p: &LatticePolygon) -> i64 {
    p.edges().map(|(a, b)| gcd((b - a).x, (b - a).y)).sum()
}

/// Twice the area by the shoelace formula.
pub fn twice_area(p: &LatticePolygon) -> i64 {
    p.edges().map(|(a, b)| a.x * b.y - a.y * b.x).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
