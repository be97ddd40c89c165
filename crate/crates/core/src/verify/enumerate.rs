use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{orient, Point};
use crate::lattice::Lattice2;
use crate::polygon::LatticePolygon;

use super::{SearchRegion, DEFAULT_BUDGET};

/// What to enumerate. Polygons are produced in canonical form; each one
/// appears exactly once (once per `avoid`-translation class when
/// normalizing).
#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub region: SearchRegion,
    pub min_vertices: usize,
    pub max_vertices: Option<usize>,
    /// Only polygons whose closure misses this lattice.
    pub avoid: Option<Lattice2>,
    /// Only polygons whose vertices lie in this lattice.
    pub vertex_lattice: Option<Lattice2>,
    /// Relax `vertex_lattice` to a translate of it: vertex differences
    /// must lie in the lattice.
    pub vertex_cosets: bool,
    /// Enumerate one representative per translation class modulo `avoid`
    /// among the polygons having a translate inside the region. Requires
    /// `avoid`, and `avoid ⊆ vertex_lattice` if both are given.
    pub normalize: bool,
    /// Node budget for the whole run.
    pub budget: u64,
}

impl EnumerationConfig {
    pub fn new(region: SearchRegion) -> Self {
        EnumerationConfig {
            region,
            min_vertices: 3,
            max_vertices: None,
            avoid: None,
            vertex_lattice: None,
            vertex_cosets: false,
            normalize: false,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn avoiding(mut self, l: Lattice2) -> Self {
        self.avoid = Some(l);
        self
    }

    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        self
    }

    pub fn with_vertex_lattice(mut self, l: Lattice2) -> Self {
        self.vertex_lattice = Some(l);
        self
    }

    pub fn with_vertex_coset_lattice(mut self, l: Lattice2) -> Self {
        self.vertex_lattice = Some(l);
        self.vertex_cosets = true;
        self
    }

    pub fn vertices(mut self, min: usize, max: Option<usize>) -> Self {
        self.min_vertices = min;
        self.max_vertices = max;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.normalize {
            let avoid = self
                .avoid
                .ok_or_else(|| Error::Precondition("normalization needs a lattice to avoid".into()))?;
            if let Some(g) = &self.vertex_lattice {
                if !g.contains_lattice(&avoid) {
                    return Err(Error::Precondition(
                        "normalization needs the avoided lattice inside the vertex lattice".into(),
                    ));
                }
            }
        }
        if let Some(max) = self.max_vertices {
            if max < self.min_vertices {
                return Err(Error::Precondition("max_vertices below min_vertices".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub nodes_explored: u64,
    pub polygons: u64,
    pub partitions: usize,
    /// False if the node budget ran out; the accumulated results then
    /// cover only part of the search space.
    pub exhaustive: bool,
}

/// Runs the enumeration, one partition per anchor (lexicographically
/// smallest vertex), in parallel. `visit` may stop its partition early by
/// returning `ControlFlow::Break`. Accumulators come back in anchor order,
/// so results do not depend on scheduling.
pub fn enumerate_fold<A, I, F>(cfg: &EnumerationConfig, init: I, visit: F) -> Result<(Vec<A>, EnumerationStats)>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &LatticePolygon) -> ControlFlow<()> + Sync,
{
    cfg.validate()?;
    let anchors = anchors(cfg);
    let results: Vec<(A, Partition)> = anchors
        .par_iter()
        .map(|&v0| {
            let mut acc = init();
            let mut part = Partition::new(cfg, v0);
            part.run(&mut acc, &visit);
            (acc, part)
        })
        .collect();
    let mut stats = EnumerationStats { partitions: results.len(), exhaustive: true, ..Default::default() };
    let mut out = Vec::with_capacity(results.len());
    for (acc, part) in results {
        stats.nodes_explored += part.nodes;
        stats.polygons += part.polygons;
        stats.exhaustive &= !part.aborted;
        out.push(acc);
    }
    if stats.nodes_explored > cfg.budget {
        stats.exhaustive = false;
    }
    Ok((out, stats))
}

/// Every convex lattice polygon with vertices in `region` and at least
/// `min_vertices` vertices, in canonical form. With `avoid`, only polygons
/// free of that lattice, one per translation class modulo it.
pub fn enumerate_convex_polygons(
    region: SearchRegion,
    min_vertices: usize,
    avoid: Option<Lattice2>,
) -> Result<Vec<LatticePolygon>> {
    let mut cfg = EnumerationConfig::new(region).vertices(min_vertices.max(3), None);
    if let Some(l) = avoid {
        cfg = cfg.avoiding(l).normalized();
    }
    let (parts, stats) = enumerate_fold(&cfg, Vec::new, |acc, p| {
        acc.push(p.clone());
        ControlFlow::Continue(())
    })?;
    if !stats.exhaustive {
        return Err(Error::BudgetExceeded { budget: cfg.budget, nodes: stats.nodes_explored });
    }
    Ok(parts.into_iter().flatten().collect())
}

/// Whether `p` may be a vertex of a polygon anchored at `v0`.
fn admissible(cfg: &EnumerationConfig, v0: Point, p: Point) -> bool {
    let base = if cfg.vertex_cosets { v0 } else { Point::ORIGIN };
    cfg.vertex_lattice.map_or(true, |g| g.contains(p - base)) && cfg.avoid.map_or(true, |l| !l.contains(p))
}

fn anchors(cfg: &EnumerationConfig) -> Vec<Point> {
    let r = &cfg.region;
    let mut out: Vec<Point> = match (cfg.normalize, cfg.avoid) {
        (true, Some(l)) => {
            let (a, c) = l.fundamental_domain();
            (0..a).flat_map(|x| (0..c).map(move |y| Point::new(x, y))).collect()
        }
        _ => r.points().collect(),
    };
    out.retain(|&p| admissible(cfg, p, p));
    out.sort();
    out
}

struct Partition<'a> {
    cfg: &'a EnumerationConfig,
    v0: Point,
    candidates: Vec<Point>,
    chain: Vec<Point>,
    nodes: u64,
    polygons: u64,
    aborted: bool,
    stopped: bool,
}

impl<'a> Partition<'a> {
    fn new(cfg: &'a EnumerationConfig, v0: Point) -> Self {
        let r = &cfg.region;
        let (x_lo, x_hi, y_lo, y_hi) = if cfg.normalize {
            (v0.x, v0.x + r.width(), v0.y - r.height(), v0.y + r.height())
        } else {
            (v0.x, r.x_max, r.y_min, r.y_max)
        };
        let mut candidates: Vec<Point> = (x_lo..=x_hi)
            .flat_map(|x| (y_lo..=y_hi).map(move |y| Point::new(x, y)))
            .filter(|&p| p > v0 && admissible(cfg, v0, p))
            .collect();
        if cfg.normalize {
            candidates.retain(|&p| fits(cfg, &Bounds::of(v0).with(p)));
        }
        Partition { cfg, v0, candidates, chain: vec![v0], nodes: 0, polygons: 0, aborted: false, stopped: false }
    }

    fn run<A, F>(&mut self, acc: &mut A, visit: &F)
    where
        F: Fn(&mut A, &LatticePolygon) -> ControlFlow<()>,
    {
        let b = Bounds::of(self.v0);
        self.extend(acc, visit, b);
    }

    fn extend<A, F>(&mut self, acc: &mut A, visit: &F, bounds: Bounds)
    where
        F: Fn(&mut A, &LatticePolygon) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.nodes > self.cfg.budget {
            self.aborted = true;
            return;
        }
        let k = self.chain.len();
        if k >= 3 && k >= self.cfg.min_vertices {
            self.polygons += 1;
            let p = LatticePolygon::from_canonical_unchecked(self.chain.clone());
            if visit(acc, &p).is_break() {
                self.stopped = true;
                return;
            }
        }
        if self.cfg.max_vertices.is_some_and(|m| k >= m) {
            return;
        }
        let v0 = self.v0;
        let last = self.chain[k - 1];
        let prev = if k >= 2 { Some(self.chain[k - 2]) } else { None };
        for i in 0..self.candidates.len() {
            let p = self.candidates[i];
            if let Some(prev) = prev {
                if orient(prev, last, p) <= 0 || orient(v0, last, p) <= 0 {
                    continue;
                }
            }
            let nb = bounds.with(p);
            if self.cfg.normalize && !fits(self.cfg, &nb) {
                continue;
            }
            if let Some(l) = &self.cfg.avoid {
                let free = match prev {
                    None => segment_free(l, v0, p),
                    Some(_) => triangle_free(l, v0, last, p),
                };
                if !free {
                    continue;
                }
            }
            self.chain.push(p);
            self.extend(acc, visit, nb);
            self.chain.pop();
            if self.aborted || self.stopped {
                return;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Bounds {
    x_min: i64,
    x_max: i64,
    y_min: i64,
    y_max: i64,
}

impl Bounds {
    fn of(p: Point) -> Self {
        Bounds { x_min: p.x, x_max: p.x, y_min: p.y, y_max: p.y }
    }

    fn with(&self, p: Point) -> Self {
        Bounds {
            x_min: self.x_min.min(p.x),
            x_max: self.x_max.max(p.x),
            y_min: self.y_min.min(p.y),
            y_max: self.y_max.max(p.y),
        }
    }
}

/// Some translate of the box by the avoided lattice lies in the region.
/// Monotone in the box, so it can prune.
fn fits(cfg: &EnumerationConfig, b: &Bounds) -> bool {
    let r = &cfg.region;
    let l = cfg.avoid.expect("normalization requires a lattice");
    let (tx_lo, tx_hi) = (r.x_min - b.x_min, r.x_max - b.x_max);
    let (ty_lo, ty_hi) = (r.y_min - b.y_min, r.y_max - b.y_max);
    tx_lo <= tx_hi && ty_lo <= ty_hi && l.points_in_box(tx_lo, tx_hi, ty_lo, ty_hi).next().is_some()
}

fn segment_free(l: &Lattice2, a: Point, b: Point) -> bool {
    l.points_in_box(a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
        .all(|q| orient(a, b, q) != 0)
}

/// The closed triangle `abc` (counterclockwise) misses `l`.
fn triangle_free(l: &Lattice2, a: Point, b: Point, c: Point) -> bool {
    let x_min = a.x.min(b.x).min(c.x);
    let x_max = a.x.max(b.x).max(c.x);
    let y_min = a.y.min(b.y).min(c.y);
    let y_max = a.y.max(b.y).max(c.y);
    l.points_in_box(x_min, x_max, y_min, y_max)
        .all(|q| orient(a, b, q) < 0 || orient(b, c, q) < 0 || orient(c, a, q) < 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(cfg: &EnumerationConfig) -> u64 {
        enumerate_fold(cfg, || (), |_, _| ControlFlow::Continue(())).unwrap().1.polygons
    }

    #[test]
    fn small_grids() {
        // triangles of the unit square: 4, plus the square itself
        assert_eq!(count(&EnumerationConfig::new(SearchRegion::square(0, 1).unwrap())), 5);
        let five = EnumerationConfig::new(SearchRegion::square(0, 1).unwrap()).vertices(5, None);
        assert_eq!(count(&five), 0);
    }

    #[test]
    fn free_quadrilateral_is_listed() {
        let all = enumerate_convex_polygons(SearchRegion::square(0, 4).unwrap(), 4, Some(Lattice2::scaled(2))).unwrap();
        let q = LatticePolygon::from_points(&[(0, 1), (1, 0), (2, 1), (1, 2)].map(Point::from)).unwrap();
        assert!(all.contains(&q));
        assert!(all.iter().all(|p| p.is_free_of(&Lattice2::scaled(2)) && p.len() >= 4));
        // nothing larger than a quadrilateral avoids 2Z²
        assert!(all.iter().all(|p| p.len() == 4));
    }

    #[test]
    fn budget_marks_run_partial() {
        let cfg = EnumerationConfig::new(SearchRegion::square(0, 3).unwrap()).budget(50);
        let (_, stats) = enumerate_fold(&cfg, || (), |_, _| ControlFlow::Continue(())).unwrap();
        assert!(!stats.exhaustive);
        assert!(enumerate_convex_polygons(SearchRegion::square(0, 1).unwrap(), 3, None).is_ok());
    }

    #[test]
    fn deterministic_statistics() {
        let cfg = EnumerationConfig::new(SearchRegion::square(-2, 4).unwrap()).avoiding(Lattice2::scaled(2)).normalized();
        let run = || enumerate_fold(&cfg, Vec::new, |acc, p| {
            acc.push(p.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a, b);
        assert_eq!(sa, sb);
    }
}
