//! Exhaustive enumeration of convex lattice polygons over bounded regions
//! and the checkers built on it: vertex bounds, the lattice-point bound,
//! sharpness witnesses and the reduction corpus.

mod bounds;
mod enumerate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::typeclass::Tag;

pub use bounds::{
    check_main_theorem, check_vertex_bound, check_vertex_bound_cosets, critical_vertex_count, find_sharpness_witness, residue_classes_hit,
    verify_reduction_corpus, BoundReport, CorpusFailure, CorpusReport,
};
pub use enumerate::{enumerate_convex_polygons, enumerate_fold, EnumerationConfig, EnumerationStats};

/// Default node budget for a single campaign.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A closed box of integer points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchRegion {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl SearchRegion {
    pub fn new(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Result<Self> {
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::Precondition(format!(
                "region {x_min},{x_max},{y_min},{y_max} has zero width or height"
            )));
        }
        let r = SearchRegion { x_min, x_max, y_min, y_max };
        if ![r.x_min, r.x_max, r.y_min, r.y_max].iter().all(|&c| Point::new(c, 0).in_range()) {
            return Err(Error::CoordinateOverflow(Point::new(x_min, y_min)));
        }
        Ok(r)
    }

    /// `[lo, hi]²`.
    pub fn square(lo: i64, hi: i64) -> Result<Self> {
        SearchRegion::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> i64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> i64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: Point) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (self.x_min..=self.x_max).flat_map(move |x| (self.y_min..=self.y_max).map(move |y| Point::new(x, y)))
    }

    /// Named regions. `square-n<k>` is `[−k, 2k]²`; `type-<tag>-n<k>` is the
    /// box a polygon of that type is confined to (after the usual
    /// normalization), widened by k where the type leaves a side open.
    pub fn preset(name: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown preset {name:?}"));
        let parse_n = |s: &str| -> Result<i64> {
            let n: i64 = s.strip_prefix('n').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
            if n < 2 {
                return Err(bad());
            }
            Ok(n)
        };
        if let Some(rest) = name.strip_prefix("square-") {
            let n = parse_n(rest)?;
            return SearchRegion::square(-n, 2 * n);
        }
        let rest = name.strip_prefix("type-").ok_or_else(bad)?;
        let (tag, n) = rest.rsplit_once('-').ok_or_else(bad)?;
        let n = parse_n(n)?;
        let tag = Tag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(tag))
            .ok_or_else(bad)?;
        SearchRegion::for_type(tag, n)
    }

    pub fn for_type(tag: Tag, n: i64) -> Result<Self> {
        match tag {
            // a vertical slab 0 ≤ x1 ≤ n; horizontal slabs are its transposes
            Tag::I => SearchRegion::new(0, n, -n, 2 * n),
            Tag::II => SearchRegion::square(-n, 2 * n),
            // x1 ≥ 0; the part beyond x1 = n sits on the lines x2 = 1, …, n − 1
            Tag::III => SearchRegion::new(0, 3 * n, -2 * n, 3 * n),
            Tag::IV => SearchRegion::new(-n + 1, 2 * n - 1, -2 * n, 3 * n),
            Tag::V => SearchRegion::new(-n, 2 * n, -2 * n, n),
            Tag::VI => SearchRegion::new(-n, n, -2 * n, 3 * n),
            Tag::Va => SearchRegion::square(0, 2 * n),
        }
    }
}

impl fmt::Display for SearchRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

impl FromStr for SearchRegion {
    type Err = Error;

    /// `xmin,xmax,ymin,ymax`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Vec<i64> = parts
            .iter()
            .map(|p| p.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Precondition(format!("region {s:?}: {e}")))?;
        match nums[..] {
            [a, b, c, d] => SearchRegion::new(a, b, c, d),
            _ => Err(Error::Precondition(format!("region {s:?} needs four comma-separated integers"))),
        }
    }
}
