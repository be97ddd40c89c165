use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ceil_div, floor_div, Point};
use crate::lattice::{InvariantFactors, Lattice2};
use crate::polygon::{LatticePolygon, Location};
use crate::typeclass::{
    classify, reduce_type_iv, reduce_type_v, reduce_type_vi, type_predicate, ReductionTrace, Tag, DEFAULT_SEARCH_BOUND,
};

use super::enumerate::{enumerate_fold, EnumerationConfig};
use super::SearchRegion;

/// Counterexamples kept per lattice; the count beyond this is still
/// reflected in `max_vertices_found`.
const MAX_COUNTEREXAMPLES: usize = 32;

/// ν(δ, n) = 2n + 2·min(δ, 3) − 3: polygons with this many vertices always
/// contain a point of any (δ, n)-lattice.
pub fn critical_vertex_count(delta: i64, n: i64) -> i64 {
    2 * n + 2 * delta.min(3) - 3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub n: i64,
    pub delta: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tag: Option<Tag>,
    pub region: SearchRegion,
    /// Largest vertex count the checked claim allows.
    pub bound: usize,
    pub max_vertices_found: usize,
    /// A polygon attaining `max_vertices_found`.
    pub witness: Option<LatticePolygon>,
    pub counterexamples: Vec<LatticePolygon>,
    pub lattices_checked: Vec<Lattice2>,
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub polygons_examined: u64,
}

impl BoundReport {
    pub fn upheld(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// 0 when the claim held over a complete search, 2 on a counterexample,
    /// 3 when the budget ran out first.
    pub fn exit_code(&self) -> i32 {
        if !self.upheld() {
            2
        } else if !self.exhaustive {
            3
        } else {
            0
        }
    }
}

#[derive(Default)]
struct Tally {
    max: usize,
    witness: Option<LatticePolygon>,
    counterexamples: Vec<LatticePolygon>,
}

impl Tally {
    fn record(&mut self, p: &LatticePolygon, bound: usize) {
        if p.len() > self.max {
            self.max = p.len();
            self.witness = Some(p.clone());
        }
        if p.len() > bound && self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(p.clone());
        }
    }

    /// Merges partition tallies in order; the first partition attaining the
    /// maximum supplies the witness.
    fn merge(parts: Vec<Tally>) -> Tally {
        let mut out = Tally::default();
        for t in parts {
            if t.max > out.max {
                out.max = t.max;
                out.witness = t.witness;
            }
            for c in t.counterexamples {
                if out.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    out.counterexamples.push(c);
                }
            }
        }
        out
    }
}

/// Translate of `p` by a point of `l` that lies inside `region`, if any.
fn place_in_region(p: &LatticePolygon, l: &Lattice2, region: &SearchRegion) -> Option<LatticePolygon> {
    let b = p.bbox();
    let t = l
        .points_in_box(region.x_min - b.x_min, region.x_max - b.x_max, region.y_min - b.y_min, region.y_max - b.y_max)
        .min_by_key(|t| (t.x.abs() + t.y.abs(), t.x, t.y))?;
    Some(p.translate(t))
}

/// Independent re-check of a reported polygon: canonical strictly convex
/// vertex list, freeness, vertex lattice, type.
fn reverify(
    p: &LatticePolygon,
    avoid: &Lattice2,
    vertex_lattice: Option<(&Lattice2, bool)>,
    typed: Option<(Tag, i64)>,
) -> Result<()> {
    let rebuilt = LatticePolygon::from_points(p.vertices())?;
    if &rebuilt != p || rebuilt.len() != p.len() {
        return Err(Error::Invariant(format!("{p} is not a canonical convex polygon")));
    }
    let b = p.bbox();
    if avoid
        .points_in_box(b.x_min, b.x_max, b.y_min, b.y_max)
        .any(|q| p.contains_point(q) != Location::Outside)
    {
        return Err(Error::Invariant(format!("{p} contains a point of {avoid}")));
    }
    if let Some((g, cosets)) = vertex_lattice {
        let base = if cosets { p.vertices()[0] } else { Point::ORIGIN };
        if !p.vertices().iter().all(|&v| g.contains(v - base)) {
            return Err(Error::Invariant(format!("{p} has a vertex outside {g}")));
        }
    }
    if let Some((tag, n)) = typed {
        if !type_predicate(p, n, tag) {
            return Err(Error::Invariant(format!("{p} is not of type {tag}_{n}")));
        }
    }
    Ok(())
}

/// Searches `region` for an nZ²-free polygon (of the given type, with
/// vertices in a lattice of the given invariant factors) having more
/// vertices than the applicable bound: 2n + 2 in general, 2n for vertices
/// in a (1, n/2)-lattice, 2n − 2 for vertices in a (1, n)-lattice.
///
/// Every lattice with the given factors is tested. Untyped searches are
/// normalized modulo nZ²; typed ones are not, since types are not
/// translation invariant.
pub fn check_vertex_bound(
    n: i64,
    tag: Option<Tag>,
    vertex_lattice: Option<InvariantFactors>,
    region: SearchRegion,
    budget: u64,
) -> Result<BoundReport> {
    vertex_bound(n, tag, vertex_lattice, false, region, budget)
}

/// Like [`check_vertex_bound`], but the vertices only need to lie in a
/// translate of the vertex lattice (their differences lie in it).
pub fn check_vertex_bound_cosets(
    n: i64,
    tag: Option<Tag>,
    vertex_lattice: InvariantFactors,
    region: SearchRegion,
    budget: u64,
) -> Result<BoundReport> {
    vertex_bound(n, tag, Some(vertex_lattice), true, region, budget)
}

fn vertex_bound(
    n: i64,
    tag: Option<Tag>,
    vertex_lattice: Option<InvariantFactors>,
    cosets: bool,
    region: SearchRegion,
    budget: u64,
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    let (bound, bound_name) = match vertex_lattice {
        None => (2 * n + 2, "vertex-bound-2n+2"),
        Some(f) if f.delta == 1 && 2 * f.n == n && n >= 4 => (2 * n, "vertex-bound-2n"),
        Some(f) if f.delta == 1 && f.n == n && n >= 3 => (2 * n - 2, "vertex-bound-2n-2"),
        Some(f) => {
            return Err(Error::Precondition(format!(
                "vertex lattice factors {f} must be (1, n/2) with n even or (1, n), with n ≥ 3"
            )))
        }
    };
    let bound = bound as usize;
    let avoid = Lattice2::scaled(n);
    let lattices: Vec<Option<Lattice2>> = match vertex_lattice {
        None => vec![None],
        Some(f) => Lattice2::all_with_factors(f).into_iter().map(Some).collect(),
    };
    let mut report = BoundReport {
        bound_name: if cosets { format!("{bound_name}-cosets") } else { bound_name.into() },
        n,
        delta: 1,
        tag,
        region,
        bound,
        max_vertices_found: 0,
        witness: None,
        counterexamples: Vec::new(),
        lattices_checked: lattices.iter().flatten().copied().collect(),
        exhaustive: true,
        nodes_explored: 0,
        polygons_examined: 0,
    };
    for g in &lattices {
        let mut cfg = EnumerationConfig::new(region).avoiding(avoid).budget(budget.saturating_sub(report.nodes_explored));
        match g {
            Some(g) if cosets => cfg = cfg.with_vertex_coset_lattice(*g),
            Some(g) => cfg = cfg.with_vertex_lattice(*g),
            None => {}
        }
        if tag.is_none() {
            cfg = cfg.normalized();
        }
        let (parts, stats) = enumerate_fold(&cfg, Tally::default, |acc, p| {
            if tag.map_or(true, |t| type_predicate(p, n, t)) {
                acc.record(p, bound);
            }
            ControlFlow::Continue(())
        })?;
        let tally = Tally::merge(parts);
        report.nodes_explored += stats.nodes_explored;
        report.polygons_examined += stats.polygons;
        report.exhaustive &= stats.exhaustive;
        for c in &tally.counterexamples {
            reverify(c, &avoid, g.as_ref().map(|g| (g, cosets)), tag.map(|t| (t, n)))?;
        }
        if tally.max > report.max_vertices_found {
            report.max_vertices_found = tally.max;
            report.witness = tally.witness.map(|w| {
                if cfg.normalize {
                    place_in_region(&w, &avoid, &region).expect("normalized polygons fit the region")
                } else {
                    w
                }
            });
        }
        report.counterexamples.extend(tally.counterexamples);
        if !report.exhaustive {
            break;
        }
    }
    Ok(report)
}

fn check_factors(delta: i64, n: i64) -> Result<InvariantFactors> {
    let f = InvariantFactors::new(delta, n)?;
    if f.det() < 2 {
        return Err(Error::Precondition("the lattice must be a proper sublattice".into()));
    }
    Ok(f)
}

/// Checks that every convex lattice polygon with ν(δ, n) vertices (having a
/// translate in `region`) meets every (δ, n)-lattice. The search runs over
/// polygons free of the lattice, so a report with no counterexamples also
/// gives the largest free polygon found.
pub fn check_main_theorem(delta: i64, n: i64, region: SearchRegion, budget: u64) -> Result<BoundReport> {
    let f = check_factors(delta, n)?;
    let nu = critical_vertex_count(delta, n) as usize;
    let lattices = Lattice2::all_with_factors(f);
    let mut report = BoundReport {
        bound_name: format!("lattice-point-bound-{nu}"),
        n,
        delta,
        tag: None,
        region,
        bound: nu - 1,
        max_vertices_found: 0,
        witness: None,
        counterexamples: Vec::new(),
        lattices_checked: lattices.clone(),
        exhaustive: true,
        nodes_explored: 0,
        polygons_examined: 0,
    };
    for l in &lattices {
        // a free polygon with more than ν vertices has a free ν-gon inside
        let cfg = EnumerationConfig::new(region)
            .avoiding(*l)
            .normalized()
            .vertices(3, Some(nu))
            .budget(budget.saturating_sub(report.nodes_explored));
        let (parts, stats) = enumerate_fold(&cfg, Tally::default, |acc, p| {
            acc.record(p, nu - 1);
            ControlFlow::Continue(())
        })?;
        let tally = Tally::merge(parts);
        report.nodes_explored += stats.nodes_explored;
        report.polygons_examined += stats.polygons;
        report.exhaustive &= stats.exhaustive;
        for c in &tally.counterexamples {
            reverify(c, l, None, None)?;
        }
        if tally.max > report.max_vertices_found {
            report.max_vertices_found = tally.max;
            report.witness = tally.witness.and_then(|w| place_in_region(&w, l, &region));
        }
        report.counterexamples.extend(tally.counterexamples);
        if !report.exhaustive {
            break;
        }
    }
    Ok(report)
}

/// A polygon with ν(δ, n) − 1 vertices free of δZ × nZ, placed inside
/// `region`. `Ok(None)` when no such polygon exists in the region, which
/// includes the case ν − 1 < 3.
pub fn find_sharpness_witness(delta: i64, n: i64, region: SearchRegion, budget: u64) -> Result<Option<LatticePolygon>> {
    check_factors(delta, n)?;
    let k = critical_vertex_count(delta, n) - 1;
    if k < 3 {
        return Ok(None);
    }
    let k = k as usize;
    let l = Lattice2::rectangular(delta, n);
    let cfg = EnumerationConfig::new(region).avoiding(l).normalized().vertices(k, Some(k)).budget(budget);
    let (parts, stats) = enumerate_fold(&cfg, || None, |acc, p| {
        *acc = Some(p.clone());
        ControlFlow::Break(())
    })?;
    match parts.into_iter().flatten().next() {
        Some(w) => {
            let w = place_in_region(&w, &l, &region).expect("normalized polygons fit the region");
            reverify(&w, &l, None, None)?;
            Ok(Some(w))
        }
        None if stats.exhaustive => Ok(None),
        None => Err(Error::BudgetExceeded { budget, nodes: stats.nodes_explored }),
    }
}

/// Number of residue classes of Z² modulo mZ² met by the closed polygon.
/// A polygon with more than 2m + 2 vertices meets all m² of them, since
/// each class is a translate of mZ².
pub fn residue_classes_hit(p: &LatticePolygon, m: i64) -> usize {
    assert!(m > 0, "modulus must be positive");
    let b = p.bbox();
    let mut classes: HashSet<(i64, i64)> = HashSet::new();
    for x in b.x_min..=b.x_max {
        for y in b.y_min..=b.y_max {
            if p.contains_point(Point::new(x, y)) != Location::Outside {
                classes.insert((x.rem_euclid(m), y.rem_euclid(m)));
            }
        }
    }
    classes.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFailure {
    pub polygon: LatticePolygon,
    /// `classify`, or the tag whose reduction failed.
    pub stage: String,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<ReductionTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub n: i64,
    pub region: SearchRegion,
    pub search_bound: i64,
    /// Polygons enumerated (one per nZ²-translation class).
    pub polygons: u64,
    /// How many polygons `classify` assigned to each type.
    pub classified: BTreeMap<Tag, u64>,
    /// Reductions run, by input type.
    pub reductions: BTreeMap<Tag, u64>,
    /// Reduction results, by output type.
    pub reduction_outputs: BTreeMap<Tag, u64>,
    pub failures: Vec<CorpusFailure>,
    pub exhaustive: bool,
    pub nodes_explored: u64,
}

impl CorpusReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty() && self.exhaustive
    }
}

#[derive(Default)]
struct CorpusTally {
    classified: BTreeMap<Tag, u64>,
    reductions: BTreeMap<Tag, u64>,
    outputs: BTreeMap<Tag, u64>,
    failures: Vec<CorpusFailure>,
}

impl CorpusTally {
    fn reduce(&mut self, q: &LatticePolygon, n: i64, tag: Tag) {
        let (result, allowed): (Result<ReductionTrace>, &[Tag]) = match tag {
            Tag::V => (reduce_type_v(q, n), &[Tag::III, Tag::Va]),
            Tag::VI => (reduce_type_vi(q, n), &[Tag::I, Tag::II, Tag::III, Tag::V]),
            Tag::IV => (reduce_type_iv(q, n), &[Tag::II, Tag::III, Tag::IV]),
            _ => return,
        };
        *self.reductions.entry(tag).or_default() += 1;
        let failure = |error: String, trace: Option<ReductionTrace>| CorpusFailure {
            polygon: q.clone(),
            stage: tag.name().into(),
            error,
            trace,
        };
        match result {
            Err(e) => self.failures.push(failure(e.to_string(), None)),
            Ok(trace) => {
                let out = trace.result.tag;
                let check = trace.verify().and_then(|_| {
                    if !allowed.contains(&out) {
                        return Err(Error::Invariant(format!("type {tag} reduced to type {out}")));
                    }
                    if trace.input != *q || trace.output.len() != q.len() {
                        return Err(Error::Invariant("trace does not start at the input".into()));
                    }
                    Ok(())
                });
                match check {
                    Ok(()) => *self.outputs.entry(out).or_default() += 1,
                    Err(e) => self.failures.push(failure(e.to_string(), Some(trace))),
                }
            }
        }
    }
}

/// nZ² translates of `p` whose bounding box meets `[−n, 2n]²`.
fn nearby_translates(p: &LatticePolygon, n: i64) -> impl Iterator<Item = LatticePolygon> + '_ {
    let b = p.bbox();
    let range = move |lo: i64, hi: i64| ceil_div(-n - hi, n)..=floor_div(2 * n - lo, n);
    range(b.x_min, b.x_max).flat_map(move |i| range(b.y_min, b.y_max).map(move |j| p.translate(Point::new(i * n, j * n))))
}

/// Classifies every nZ²-free polygon of the region (up to nZ²
/// translation) and runs the reductions of types IV, V and VI on the
/// classified images and on every nearby translate that has one of those
/// types. Outputs are re-checked against their claimed types.
pub fn verify_reduction_corpus(n: i64, region: SearchRegion, budget: u64) -> Result<CorpusReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
    }
    let cfg = EnumerationConfig::new(region).avoiding(Lattice2::scaled(n)).normalized().budget(budget);
    let (parts, stats) = enumerate_fold(&cfg, CorpusTally::default, |acc, p| {
        match classify(p, n, DEFAULT_SEARCH_BOUND) {
            Err(e) => acc.failures.push(CorpusFailure {
                polygon: p.clone(),
                stage: "classify".into(),
                error: e.to_string(),
                trace: None,
            }),
            Ok((map, ty)) => {
                *acc.classified.entry(ty.tag).or_default() += 1;
                acc.reduce(&p.transform(&map), n, ty.tag);
            }
        }
        for q in nearby_translates(p, n) {
            for tag in [Tag::IV, Tag::V, Tag::VI] {
                if type_predicate(&q, n, tag) {
                    acc.reduce(&q, n, tag);
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    let mut report = CorpusReport {
        n,
        region,
        search_bound: DEFAULT_SEARCH_BOUND,
        polygons: stats.polygons,
        classified: BTreeMap::new(),
        reductions: BTreeMap::new(),
        reduction_outputs: BTreeMap::new(),
        failures: Vec::new(),
        exhaustive: stats.exhaustive,
        nodes_explored: stats.nodes_explored,
    };
    for t in parts {
        for (k, v) in t.classified {
            *report.classified.entry(k).or_default() += v;
        }
        for (k, v) in t.reductions {
            *report.reductions.entry(k).or_default() += v;
        }
        for (k, v) in t.outputs {
            *report.reduction_outputs.entry(k).or_default() += v;
        }
        report.failures.extend(t.failures);
    }
    Ok(report)
}
