//! Seeded random instance generators for the property suites and the
//! `slope-check` fuzzing command.
//!
//! All generators take a caller-owned RNG; [`rng`] builds the crate's
//! standard one (ChaCha8 seeded from a `u64`) so runs replay exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Mat2, Point};
use crate::lattice::{Lattice2, UnimodularMap};
use crate::polygon::{LatticePolygon, Segment};
use crate::slope::{frame_splits, validate_slope, Frame, SignedBasis, Slope};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge vectors in basis coordinates (positive first, negative second
/// coordinate), pairwise non-parallel, sorted so consecutive determinants
/// are positive.
fn random_edge_vectors<R: Rng>(rng: &mut R, count: usize, max_step: i64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 20 * count + 20 {
        attempts += 1;
        let d = Point::new(rng.gen_range(1..=max_step), -rng.gen_range(1..=max_step));
        if out.iter().all(|e| e.cross(d) != 0) {
            out.push(d);
        }
    }
    // steepest first: a precedes b iff det[a, b] > 0
    out.sort_by(|a, b| 0.cmp(&a.cross(*b)));
    out
}

/// A random slope with at most `max_edges` edges whose vertices lie in
/// `[0, bound]²`.
pub fn random_slope<R: Rng>(rng: &mut R, basis: SignedBasis, max_edges: usize, bound: i64) -> Slope {
    loop {
        let k = rng.gen_range(0..=max_edges);
        let edges = random_edge_vectors(rng, k, (bound / 3).max(1));
        let mut chain = vec![Point::ORIGIN];
        for e in &edges {
            let last = *chain.last().unwrap();
            chain.push(last + basis.from_coords(*e));
        }
        let (x_min, x_max) = (chain.iter().map(|p| p.x).min().unwrap(), chain.iter().map(|p| p.x).max().unwrap());
        let (y_min, y_max) = (chain.iter().map(|p| p.y).min().unwrap(), chain.iter().map(|p| p.y).max().unwrap());
        if x_max - x_min > bound || y_max - y_min > bound {
            continue;
        }
        let shift = Point::new(
            rng.gen_range(0..=bound - (x_max - x_min)) - x_min,
            rng.gen_range(0..=bound - (y_max - y_min)) - y_min,
        );
        let vertices: Vec<Point> = chain.iter().map(|&p| p + shift).collect();
        return validate_slope(basis, &vertices).expect("generated chain is a slope");
    }
}

/// A frame and a slope it splits. The slope is stored either for the frame
/// basis or for the swapped one.
pub fn random_split_configuration<R: Rng>(rng: &mut R, max_edges: usize, max_step: i64) -> (Frame, Slope) {
    let bases = SignedBasis::all();
    loop {
        let basis = *bases.choose(rng).unwrap();
        let origin = Point::new(rng.gen_range(-10..=10), rng.gen_range(-10..=10));
        let frame = Frame::new(origin, basis);
        let k = rng.gen_range(1..=max_edges);
        let edges = random_edge_vectors(rng, k, max_step);
        let start = Point::new(-rng.gen_range(1..=2 * max_step), rng.gen_range(1..=3 * max_step));
        let mut coords = vec![start];
        for e in &edges {
            coords.push(*coords.last().unwrap() + *e);
        }
        let vertices: Vec<Point> = coords.iter().map(|&c| origin + basis.from_coords(c)).collect();
        let slope = validate_slope(basis, &vertices).expect("generated chain is a slope");
        let slope = if rng.gen_bool(0.5) { slope.swapped() } else { slope };
        if frame_splits(&frame, &slope).unwrap_or(false) {
            return (frame, slope);
        }
    }
}

/// A lattice with a random basis whose entries lie in `[-max_entry, max_entry]`.
pub fn random_lattice<R: Rng>(rng: &mut R, max_entry: i64) -> Lattice2 {
    loop {
        let mut e = || rng.gen_range(-max_entry..=max_entry);
        let m = Mat2::new(e(), e(), e(), e());
        if let Ok(l) = Lattice2::new(m) {
            return l;
        }
    }
}

/// Product of `words` random elementary shears and signed permutations.
pub fn random_unimodular<R: Rng>(rng: &mut R, words: usize) -> UnimodularMap {
    let mut m = Mat2::IDENTITY;
    for _ in 0..words {
        let a = rng.gen_range(-2..=2);
        let g = match rng.gen_range(0..4) {
            0 => Mat2::new(1, a, 0, 1),
            1 => Mat2::new(1, 0, a, 1),
            2 => Mat2::new(0, 1, 1, 0),
            _ => Mat2::new(if rng.gen_bool(0.5) { -1 } else { 1 }, 0, 0, if rng.gen_bool(0.5) { -1 } else { 1 }),
        };
        m = g * m;
    }
    UnimodularMap::new(m).expect("product of unimodular generators")
}

/// Hull of a few random points of `lattice` (or of Z²) in the box
/// `[lo, hi]²`; retries until the hull has interior.
pub fn random_polygon<R: Rng>(rng: &mut R, lo: i64, hi: i64, lattice: Option<&Lattice2>) -> LatticePolygon {
    let pool: Vec<Point> = match lattice {
        Some(l) => l.points_in_box(lo, hi, lo, hi).collect(),
        None => (lo..=hi).flat_map(|x| (lo..=hi).map(move |y| Point::new(x, y))).collect(),
    };
    assert!(pool.len() >= 3, "box holds too few lattice points");
    loop {
        let k = rng.gen_range(3..=8);
        let pts: Vec<Point> = (0..k).map(|_| *pool.choose(rng).unwrap()).collect();
        if let Ok(p) = LatticePolygon::from_points(&pts) {
            return p;
        }
    }
}

/// A random nZ²-free polygon split by both `[0, (−n, 0)]` and `[0, (0, n)]`,
/// the input shape of the lift. Rejection sampled from hulls of points near
/// the origin.
pub fn random_lift_instance<R: Rng>(rng: &mut R, n: i64) -> LatticePolygon {
    let west = Segment::of((0, 0), (-n, 0));
    let north = Segment::of((0, 0), (0, n));
    let lattice = Lattice2::scaled(n);
    loop {
        let k = rng.gen_range(3..=7);
        let pts: Vec<Point> = (0..k)
            .map(|_| Point::new(rng.gen_range(-2 * n..=n), rng.gen_range(-3 * n..=2 * n)))
            .collect();
        let Ok(p) = LatticePolygon::from_points(&pts) else { continue };
        if p.splits_by_segment(&west) && p.splits_by_segment(&north) && p.is_free_of(&lattice) {
            return p;
        }
    }
}
