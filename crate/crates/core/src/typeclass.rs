//! The six splitting types of nZ²-free polygons (plus the triangle type
//! Va), the lift, the reductions of types IV, V and VI, and a bounded
//! automorphism search that brings a polygon into one of the types.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ceil_div, floor_div, Mat2, Point};
use crate::lattice::{AffineMap, Lattice2, UnimodularMap};
use crate::polygon::{LatticePolygon, Line, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    Va,
}

impl Tag {
    pub const ALL: [Tag; 7] = [Tag::I, Tag::II, Tag::III, Tag::IV, Tag::V, Tag::VI, Tag::Va];

    pub fn name(self) -> &'static str {
        match self {
            Tag::I => "I",
            Tag::II => "II",
            Tag::III => "III",
            Tag::IV => "IV",
            Tag::V => "V",
            Tag::VI => "VI",
            Tag::Va => "Va",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonType {
    pub tag: Tag,
    pub n: i64,
}

impl fmt::Display for PolygonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.tag, self.n)
    }
}

fn seg(n: i64, a: (i64, i64), b: (i64, i64)) -> Segment {
    Segment::of((a.0 * n, a.1 * n), (b.0 * n, b.1 * n))
}

/// The segments that must split a polygon of the given type, followed by
/// the lines that must not split it and the lines it must avoid entirely.
/// Used for drawing as well as for the predicates.
pub struct TypeFigure {
    pub splitting: Vec<Segment>,
    pub non_splitting: Vec<Line>,
    pub disjoint: Vec<Line>,
}

pub fn type_figure(tag: Tag, n: i64) -> TypeFigure {
    let (splitting, non_splitting, disjoint) = match tag {
        Tag::I | Tag::Va => (vec![], vec![], vec![]),
        Tag::II => (
            vec![seg(n, (0, 0), (1, 0)), seg(n, (1, 0), (1, 1)), seg(n, (0, 1), (1, 1)), seg(n, (0, 0), (0, 1))],
            vec![],
            vec![],
        ),
        Tag::III => (
            vec![seg(n, (0, 0), (1, 0)), seg(n, (1, 0), (1, 1)), seg(n, (1, 1), (0, 1))],
            vec![Line::vertical(0)],
            vec![],
        ),
        Tag::IV => (
            vec![seg(n, (0, 0), (0, 1)), seg(n, (0, 0), (1, 0)), seg(n, (1, 0), (1, 1)), seg(n, (1, 1), (2, 1))],
            vec![],
            vec![Line::vertical(-n), Line::vertical(2 * n)],
        ),
        Tag::V => (
            vec![seg(n, (0, 0), (-1, 0)), seg(n, (0, 0), (0, 1))],
            vec![Line::vertical(-n), Line::horizontal(n)],
            vec![],
        ),
        Tag::VI => (
            vec![seg(n, (0, 0), (-1, 0)), seg(n, (0, 0), (0, 1)), seg(n, (0, 1), (1, 1))],
            vec![Line::vertical(-n), Line::vertical(n)],
            vec![],
        ),
    };
    TypeFigure { splitting, non_splitting, disjoint }
}

/// Whether `p` lies in a slab `jn ≤ x1 ≤ (j+1)n` or `jn ≤ x2 ≤ (j+1)n`.
fn in_slab(p: &LatticePolygon, n: i64) -> bool {
    let b = p.bbox();
    let fits = |lo: i64, hi: i64| hi <= (floor_div(lo, n) + 1) * n;
    fits(b.x_min, b.x_max) || fits(b.y_min, b.y_max)
}

fn in_triangle(p: &LatticePolygon, n: i64) -> bool {
    p.vertices().iter().all(|v| v.x >= 0 && v.y >= 0 && v.x + v.y <= 2 * n)
}

/// The split conditions of `tag` without the freeness requirement.
fn shape_matches(p: &LatticePolygon, n: i64, tag: Tag) -> bool {
    match tag {
        Tag::I => in_slab(p, n),
        Tag::Va => in_triangle(p, n),
        _ => {
            let fig = type_figure(tag, n);
            fig.splitting.iter().all(|s| p.splits_by_segment(s))
                && fig.non_splitting.iter().all(|l| !p.splits_by_line(l))
                && fig.disjoint.iter().all(|l| !p.meets_line(l))
        }
    }
}

pub fn type_predicate(p: &LatticePolygon, n: i64, tag: Tag) -> bool {
    n >= 2 && p.is_free_of(&Lattice2::scaled(n)) && shape_matches(p, n, tag)
}

fn shear_a(a: i64) -> AffineMap {
    AffineMap::new(Mat2::new(1, 0, -a, 1), Point::ORIGIN).expect("shear is unimodular")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftResult {
    pub a0: i64,
    pub lifted: LatticePolygon,
}

impl LiftResult {
    pub fn map(&self) -> AffineMap {
        shear_a(self.a0)
    }
}

/// Largest shear count tried by the lift before giving up.
const LIFT_GUARD: i64 = 1 << 22;

pub fn lift(p: &LatticePolygon, n: i64) -> Result<LiftResult> {
    let west = seg(n, (0, 0), (-1, 0));
    let north = seg(n, (0, 0), (0, 1));
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    if !p.splits_by_segment(&west) || !p.splits_by_segment(&north) {
        return Err(Error::Precondition("lift needs [0,(-n,0)] and [0,(0,n)] to split the polygon".into()));
    }
    if !p.is_free_of(&Lattice2::scaled(n)) {
        return Err(Error::Precondition("polygon contains a point of nZ²".into()));
    }
    let mut a0 = 0;
    while p.transform(&shear_a(a0 + 1)).splits_by_segment(&west) {
        a0 += 1;
        if a0 > LIFT_GUARD {
            return Err(Error::Invariant("lift shear search did not terminate".into()));
        }
    }
    let lifted = p.transform(&shear_a(a0));
    let fail = |what: &str| Err(Error::Invariant(format!("lift of {p}: {what}")));
    if !lifted.splits_by_segment(&north) {
        return fail("[0,(0,n)] no longer splits");
    }
    if lifted.splits_by_segment(&seg(n, (0, 0), (-1, -1))) {
        return fail("[0,(-n,-n)] splits");
    }
    let diag = seg(n, (0, 1), (1, 2));
    if !p.splits_by_segment(&diag) && lifted.splits_by_segment(&diag) {
        return fail("[(0,n),(n,2n)] starts splitting");
    }
    let (s0, s1) = (p.bbox().y_min, lifted.bbox().y_min);
    if s1 < s0 || ((s1 == s0) != (a0 == 0)) {
        return fail("south extremum is not monotone");
    }
    Ok(LiftResult { a0, lifted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepLabel {
    Lift,
    Reflect,
    Translate,
    Psi,
    Psi1,
    Psi2,
    Phi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub label: StepLabel,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<i64>,
    pub matrix: UnimodularMap,
    pub shift: Point,
    /// The polygon after this step.
    pub polygon: LatticePolygon,
}

impl TraceStep {
    pub fn map(&self) -> AffineMap {
        AffineMap { linear: self.matrix, shift: self.shift }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub input: LatticePolygon,
    pub steps: Vec<TraceStep>,
    pub output: LatticePolygon,
    pub result: PolygonType,
}

impl ReductionTrace {
    /// The composite map, first step applied first.
    pub fn map(&self) -> AffineMap {
        self.steps.iter().fold(AffineMap::IDENTITY, |acc, s| s.map().compose(&acc))
    }

    /// Replays every step, checking that each is an automorphism of nZ²,
    /// that the recorded polygons are reproduced, and that the output has
    /// the claimed type, vertex count and freeness.
    pub fn verify(&self) -> Result<()> {
        let n = self.result.n;
        let lattice = Lattice2::scaled(n);
        let mut current = self.input.clone();
        for (i, s) in self.steps.iter().enumerate() {
            if !s.map().is_automorphism_of(&lattice) {
                return Err(Error::Invariant(format!("step {i} is not an automorphism of nZ²")));
            }
            current = current.transform(&s.map());
            if current != s.polygon {
                return Err(Error::Invariant(format!("step {i} does not reproduce its polygon")));
            }
        }
        if current != self.output || self.input.transform(&self.map()) != self.output {
            return Err(Error::Invariant("steps do not compose to the output".into()));
        }
        if self.output.len() != self.input.len() || !self.output.is_free_of(&lattice) {
            return Err(Error::Invariant("output lost vertices or freeness".into()));
        }
        if !type_predicate(&self.output, n, self.result.tag) {
            return Err(Error::Invariant(format!("output is not of type {}", self.result)));
        }
        Ok(())
    }
}

struct TraceBuilder {
    input: LatticePolygon,
    current: LatticePolygon,
    steps: Vec<TraceStep>,
}

impl TraceBuilder {
    fn new(p: &LatticePolygon) -> Self {
        TraceBuilder { input: p.clone(), current: p.clone(), steps: Vec::new() }
    }

    fn push(&mut self, label: StepLabel, a: Option<i64>, m: AffineMap) -> &LatticePolygon {
        self.current = self.current.transform(&m);
        self.steps.push(TraceStep { label, a, matrix: m.linear, shift: m.shift, polygon: self.current.clone() });
        &self.current
    }

    fn lift(&mut self, n: i64) -> Result<i64> {
        let r = lift(&self.current, n)?;
        self.push(StepLabel::Lift, Some(r.a0), r.map());
        Ok(r.a0)
    }

    fn finish(self, tag: Tag, n: i64) -> Result<ReductionTrace> {
        let trace = ReductionTrace {
            input: self.input,
            output: self.current,
            steps: self.steps,
            result: PolygonType { tag, n },
        };
        trace.verify()?;
        Ok(trace)
    }
}

fn affine(m: [i64; 4], shift: (i64, i64)) -> AffineMap {
    AffineMap::new(Mat2::new(m[0], m[1], m[2], m[3]), shift.into()).expect("unimodular literal")
}

fn translation_t(n: i64) -> AffineMap {
    AffineMap::translation(Point::new(n, 0))
}

fn check_pre(p: &LatticePolygon, n: i64, tag: Tag) -> Result<()> {
    if !type_predicate(p, n, tag) {
        return Err(Error::Precondition(format!("polygon {p} is not of type {tag}_{n}")));
    }
    Ok(())
}

/// Upper bound on rounds of the type V iteration; each round that does not
/// stop raises the (negative) south extremum of one of two sequences.
const TYPE_V_GUARD: usize = 1 << 20;

pub fn reduce_type_v(p: &LatticePolygon, n: i64) -> Result<ReductionTrace> {
    check_pre(p, n, Tag::V)?;
    let reflect = affine([0, -1, -1, 0], (0, 0));
    let mut b = TraceBuilder::new(p);
    let mut last_south = i64::MIN;
    for _ in 0..TYPE_V_GUARD {
        let south = b.current.bbox().y_min;
        if south >= 0 || south < last_south {
            return Err(Error::Invariant(format!("south extremum {south} broke monotonicity")));
        }
        last_south = south;

        let mut fixed = true;
        for _half in 0..2 {
            let a0 = b.lift(n)?;
            fixed &= a0 == 0;
            if type_predicate(&b.current.translate(Point::new(n, 0)), n, Tag::III) {
                b.push(StepLabel::Translate, None, translation_t(n));
                return b.finish(Tag::III, n);
            }
            if !type_predicate(&b.current, n, Tag::V) {
                return Err(Error::Invariant("lift is neither type V nor translates to type III".into()));
            }
            b.push(StepLabel::Reflect, None, reflect);
        }
        if fixed {
            // both lifts were trivial, so the polygon lies in the triangle
            // (−n,−n), (−n,n), (n,n)
            b.push(StepLabel::Psi, None, affine([1, 0, 0, -1], (n, n)));
            return b.finish(Tag::Va, n);
        }
    }
    Err(Error::Invariant("type V iteration exceeded its guard".into()))
}

pub fn reduce_type_vi(p: &LatticePolygon, n: i64) -> Result<ReductionTrace> {
    check_pre(p, n, Tag::VI)?;
    let mut b = TraceBuilder::new(p);

    // Returns a finished tag when the current lift is type V or
    // translates to type III.
    fn settle(b: &mut TraceBuilder, n: i64) -> Option<Tag> {
        if !b.current.splits_by_line(&Line::horizontal(n)) {
            return Some(Tag::V);
        }
        if b.current.splits_by_segment(&seg(n, (-1, 1), (0, 1))) {
            b.push(StepLabel::Translate, None, translation_t(n));
            return Some(Tag::III);
        }
        None
    }

    b.lift(n)?;
    let bb = b.current.bbox();
    if bb.x_min < -n || bb.x_max > n {
        return Err(Error::Invariant("lift left the slab -n <= x1 <= n".into()));
    }
    if let Some(tag) = settle(&mut b, n) {
        return b.finish(tag, n);
    }
    b.push(StepLabel::Phi, None, affine([-1, 0, 0, -1], (0, n)));
    b.lift(n)?;
    if let Some(tag) = settle(&mut b, n) {
        return b.finish(tag, n);
    }
    let m = b.current.clone();
    let anti = m.splits_by_line(&Line::new(1, -1, -n)?);
    let diag = m.splits_by_line(&Line::new(1, -1, 0)?);
    let anti_seg = m.splits_by_segment(&seg(n, (-1, 0), (0, 1)));
    let diag_seg = m.splits_by_segment(&seg(n, (0, 0), (1, 1)));
    let psi1 = affine([-1, 1, 0, 1], (0, 0));
    let psi2 = affine([1, -1, 0, 1], (n, 0));
    let (label, map, tag) = if !anti && !diag {
        (StepLabel::Psi1, psi1, Tag::I)
    } else if anti_seg && diag_seg {
        (StepLabel::Psi1, psi1, Tag::II)
    } else if anti_seg && !diag {
        (StepLabel::Psi1, psi1, Tag::III)
    } else if diag_seg && !anti {
        (StepLabel::Psi2, psi2, Tag::III)
    } else {
        return Err(Error::Invariant("type VI case analysis is not exhaustive here".into()));
    };
    b.push(label, None, map);
    b.finish(tag, n)
}

pub fn reduce_type_iv(p: &LatticePolygon, n: i64) -> Result<ReductionTrace> {
    check_pre(p, n, Tag::IV)?;
    let b = TraceBuilder::new(p);
    if p.splits_by_segment(&seg(n, (0, -1), (1, 0))) {
        return b.finish(Tag::IV, n);
    }
    let tag = if p.splits_by_segment(&seg(n, (1, 0), (2, 1))) { Tag::II } else { Tag::III };
    let mut b = b;
    b.push(StepLabel::Phi, None, affine([-1, 1, 0, 1], (n, 0)));
    b.finish(tag, n)
}

/// Default entry bound for [`classify`].
pub const DEFAULT_SEARCH_BOUND: i64 = 6;

fn generators(bound: i64) -> Vec<Mat2> {
    let mut g = Vec::new();
    for a in (1..=bound).flat_map(|a| [a, -a]) {
        g.push(Mat2::new(1, a, 0, 1));
        g.push(Mat2::new(1, 0, a, 1));
    }
    for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        g.push(Mat2::new(s1, 0, 0, s2));
        g.push(Mat2::new(0, s1, s2, 0));
    }
    g
}

/// Translations in nZ² that bring the polygon's bounding box into contact
/// with `[−n, 2n]²`, nearest first.
fn candidate_shifts(p: &LatticePolygon, n: i64) -> Vec<Point> {
    let b = p.bbox();
    let range = |lo: i64, hi: i64| ceil_div(-n - hi, n)..=floor_div(2 * n - lo, n);
    let mut out: Vec<Point> = Vec::new();
    for i in range(b.x_min, b.x_max) {
        for j in range(b.y_min, b.y_max) {
            out.push(Point::new(i * n, j * n));
        }
    }
    out.sort_by_key(|t| (t.x.abs() + t.y.abs(), t.x, t.y));
    out
}

/// Breadth-first search over unimodular matrices with entries bounded by
/// `search_bound`, combined with nZ² translations, for an automorphism of
/// nZ² that maps `p` onto a polygon of one of the seven types.
pub fn classify(p: &LatticePolygon, n: i64, search_bound: i64) -> Result<(AffineMap, PolygonType)> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    if !p.is_free_of(&Lattice2::scaled(n)) {
        return Err(Error::Precondition("polygon contains a point of nZ²".into()));
    }
    let gens = generators(search_bound.max(1));
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut queue: VecDeque<Mat2> = VecDeque::new();
    seen.insert(Mat2::IDENTITY);
    queue.push_back(Mat2::IDENTITY);
    while let Some(m) = queue.pop_front() {
        let q = p.transform_linear(&m);
        if shape_matches(&q, n, Tag::I) {
            return Ok((affine(m.entries(), (0, 0)), PolygonType { tag: Tag::I, n }));
        }
        for t in candidate_shifts(&q, n) {
            let moved = q.translate(t);
            for tag in [Tag::II, Tag::III, Tag::IV, Tag::V, Tag::VI, Tag::Va] {
                if shape_matches(&moved, n, tag) {
                    let map = affine(m.entries(), (t.x, t.y));
                    debug_assert!(type_predicate(&p.transform(&map), n, tag));
                    return Ok((map, PolygonType { tag, n }));
                }
            }
        }
        for g in &gens {
            let next = *g * m;
            if next.max_abs_entry() <= search_bound && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Err(Error::SearchExhausted { bound: search_bound })
}
