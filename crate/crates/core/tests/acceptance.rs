//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::Rng;

use latgon::sample::{random_lift_instance, random_slope, random_split_configuration, rng};
use latgon::slope::{check_slp_witness, check_th36_witness, generates_proper_sublattice, maximal_slopes, Frame, SignedBasis, Slope};
use latgon::typeclass::{
    classify, lift, reduce_type_v, reduce_type_vi, type_predicate, ReductionTrace, Tag, DEFAULT_SEARCH_BOUND,
};
use latgon::verify::{
    check_main_theorem, check_vertex_bound, check_vertex_bound_cosets, enumerate_fold, find_sharpness_witness,
    verify_reduction_corpus, EnumerationConfig, SearchRegion, DEFAULT_BUDGET,
};
use latgon::{InvariantFactors, Lattice2, LatticePolygon, Mat2, Point, Segment};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Freeness by scanning every integer point of the bounding box.
fn free_by_scan(p: &LatticePolygon, l: &Lattice2) -> bool {
    let b = p.bbox();
    (b.x_min..=b.x_max).all(|x| {
        (b.y_min..=b.y_max).all(|y| {
            let q = Point::new(x, y);
            !l.contains(q) || p.edges().any(|(a, c)| (c - a).cross(q - a) < 0)
        })
    })
}

fn region(s: &str) -> SearchRegion {
    s.parse().expect("valid region literal")
}

fn criterion_1() -> Outcome {
    let mut r = rng(0);
    let mut tested = 0;
    while tested < 500 {
        let mut e = || r.gen_range(-20..=20);
        let m = Mat2::new(e(), e(), e(), e());
        if m.det() == 0 {
            continue;
        }
        let f = Lattice2::new(m).map_err(|e| e.to_string())?.invariant_factors();
        let oracle = common::snf_oracle(m);
        check((f.delta, f.n) == oracle, || format!("{m:?}: got ({}, {}), oracle {oracle:?}", f.delta, f.n))?;
        tested += 1;
    }
    Ok(format!("invariant factors agree with the exponent oracle on {tested} matrices"))
}

fn criterion_2() -> Outcome {
    let r = region("0,6,0,6");
    let report = check_main_theorem(2, 2, r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(report.exhaustive, || "normalized search ran out of budget".into())?;
    check(report.upheld(), || format!("counterexample {}", report.counterexamples[0]))?;
    // every pentagon of the box, without pruning or normalization
    let cfg = EnumerationConfig::new(r).vertices(5, Some(5));
    let l = Lattice2::scaled(2);
    let (parts, stats) = enumerate_fold(&cfg, Vec::new, |bad: &mut Vec<LatticePolygon>, p| {
        let hit = l
            .points_in_box(0, 6, 0, 6)
            .any(|q| p.edges().all(|(a, c)| (c - a).cross(q - a) >= 0));
        if !hit {
            bad.push(p.clone());
        }
        ControlFlow::Continue(())
    })
    .map_err(|e| e.to_string())?;
    check(stats.exhaustive, || "plain pentagon search ran out of budget".into())?;
    let bad: Vec<_> = parts.into_iter().flatten().collect();
    check(bad.is_empty(), || format!("pentagon {} avoids 2Z²", bad[0]))?;
    Ok(format!(
        "{} normalized free polygons (largest {}), {} pentagons checked directly, none avoids 2Z²",
        report.polygons_examined, report.max_vertices_found, stats.polygons
    ))
}

fn criterion_3() -> Outcome {
    let w = find_sharpness_witness(2, 2, region("0,6,0,6"), DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?
        .ok_or("no free quadrilateral found")?;
    let l = Lattice2::scaled(2);
    check(w.len() == 4 && free_by_scan(&w, &l), || format!("bad witness {w}"))?;
    let known = LatticePolygon::from_points(&[(0, 1), (1, 0), (2, 1), (1, 2)].map(Point::from)).unwrap();
    check(free_by_scan(&known, &l), || "the diamond is not free".into())?;
    Ok(format!("free quadrilateral {w}"))
}

fn criterion_4() -> Outcome {
    let r = region("-3,6,-3,6");
    let report = check_vertex_bound(3, None, None, r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(report.upheld(), || format!("free polygon with {} vertices", report.max_vertices_found))?;
    check(report.exhaustive, || format!("non-exhaustive, max found {}", report.max_vertices_found))?;
    check(report.max_vertices_found <= 8, || format!("max {}", report.max_vertices_found))?;
    let main = check_main_theorem(3, 3, r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(main.upheld() && main.exhaustive, || "a free 9-gon exists or the search was cut".into())?;
    let w = find_sharpness_witness(3, 3, r, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?
        .ok_or("no free 8-gon found")?;
    let inside = w.vertices().iter().all(|v| (-3..=6).contains(&v.x) && (-3..=6).contains(&v.y));
    check(w.len() == 8 && inside && free_by_scan(&w, &Lattice2::scaled(3)), || format!("bad witness {w}"))?;
    Ok(format!(
        "{} classes of 3Z²-free polygons, largest has {} vertices; free 8-gon {w}",
        report.polygons_examined, report.max_vertices_found
    ))
}

fn criterion_5() -> Outcome {
    let r = SearchRegion::preset("type-iii-n3").map_err(|e| e.to_string())?;
    let f = InvariantFactors::new(1, 3).unwrap();
    let report = check_vertex_bound(3, Some(Tag::III), Some(f), r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(report.exhaustive, || "search ran out of budget".into())?;
    check(report.upheld() && report.max_vertices_found <= 4, || format!("type III polygon with {} vertices", report.max_vertices_found))?;
    let cosets = check_vertex_bound_cosets(3, Some(Tag::III), f, r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(cosets.exhaustive && cosets.upheld(), || "coset variant failed".into())?;
    Ok(format!(
        "{} lattices over {r}: largest type III polygon with vertices in one has {} vertices; \
         with vertices in a translate of one, {}",
        report.lattices_checked.len(),
        report.max_vertices_found,
        cosets.max_vertices_found
    ))
}

fn slp_holds(q: &Slope, s: i64) -> bool {
    let b = q.basis().coords(q.end() - q.start());
    let n = q.edge_count() as i64;
    2 * n <= b.x.abs() + s && 2 * b.y.abs() >= s * (s + 1)
}

fn recheck_split(f: &Frame, q: &Slope, s: i64, t: i64, small_angle: bool) -> Result<(), String> {
    let mut c: Vec<Point> = q.vertices().iter().map(|&p| f.coords(p)).collect();
    if !(c[0].x < 0 && c[0].y > 0) {
        c.reverse();
    }
    let (v, w) = (c[0], *c.last().unwrap());
    let n2 = 2 * q.edge_count() as i64;
    let top = v.y + w.x;
    let gain = (-w.y + 1).div_euclid(2) - 1;
    check(0 <= s && s <= t, || format!("s = {s}, t = {t}"))?;
    check(-2 * v.x < 2 * t * s - (s * s - s) + 2 * (v.y - s) * (t + 1), || format!("C fails at ({s}, {t})"))?;
    check(n2 <= top - t + s, || format!("D fails at ({s}, {t})"))?;
    check(n2 <= top, || "2N > v2 + w1".into())?;
    if small_angle {
        check(n2 <= top - t + s - gain, || "small-angle form fails".into())?;
        check(n2 <= top - gain, || "small-angle bound fails".into())?;
    }
    if generates_proper_sublattice(q.vertices()) {
        check(n2 <= top - 1, || "sublattice bound fails".into())?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut r = rng(0);
    let bases = SignedBasis::all();
    for i in 0..10_000 {
        let q = random_slope(&mut r, bases[i % bases.len()], 8, 14);
        let s = check_slp_witness(&q, None, None).map_err(|e| format!("slope {:?}: {e}", q.vertices()))?;
        check(slp_holds(&q, s) && (s == 0 || !slp_holds(&q, s - 1)), || format!("slope {:?}: s = {s}", q.vertices()))?;
    }
    let (mut small, mut proper) = (0, 0);
    for i in 0..10_000 {
        let (f, q) = random_split_configuration(&mut r, 8, 2 + (i % 3) as i64);
        let w = check_th36_witness(&f, &q).map_err(|e| format!("{:?} in {f:?}: {e}", q.vertices()))?;
        recheck_split(&f, &q, w.s, w.t, w.small_angle).map_err(|e| format!("{:?} in {f:?}: {e}", q.vertices()))?;
        small += w.small_angle as usize;
        proper += w.proper_sublattice as usize;
    }
    Ok(format!("10000 slope witnesses, 10000 split witnesses ({small} small-angle, {proper} in proper sublattices)"))
}

/// Criteria 7 and 10 share one exhaustive run over `[0, 4]²`.
fn criteria_7_and_10() -> (Outcome, Outcome) {
    let cfg = EnumerationConfig::new(region("0,4,0,4"));
    let run = enumerate_fold(&cfg, Vec::new, |acc, p| {
        acc.push(p.clone());
        ControlFlow::Continue(())
    });
    let polys: Vec<LatticePolygon> = match run {
        Ok((parts, stats)) if stats.exhaustive => parts.into_iter().flatten().collect(),
        Ok(_) => return (Err("enumeration ran out of budget".into()), Err("no polygons".into())),
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let oracle = common::convex_position_sets(0, 4).len();
    let count_ok = check(polys.len() == oracle, || format!("enumerated {} polygons, oracle {oracle}", polys.len()));

    let boundary = count_ok.clone().and_then(|_| {
        for p in &polys {
            let m = maximal_slopes(p);
            let (quadrants, axis) = common::edge_quadrants(p);
            check([m.n1, m.n2, m.n3, m.n4] == quadrants, || format!("{p}: slope edges {:?} vs {quadrants:?}", [m.n1, m.n2, m.n3, m.n4]))?;
            check(m.flag_total() == axis, || format!("{p}: flags {} vs {axis}", m.flag_total()))?;
            check(p.len() == m.edge_total() + m.flag_total(), || format!("{p}: identity fails"))?;
        }
        Ok(format!("N = ΣN_k + ΣM_k on all {} polygons of [0,4]² (oracle count {oracle})", polys.len()))
    });
    let pick = count_ok.and_then(|_| {
        for p in &polys {
            let c = p.area2_and_pick();
            check(c.twice_area == common::twice_area(p), || format!("{p}: area"))?;
            check(c.boundary == common::boundary_points(p), || format!("{p}: boundary count"))?;
            check(c.twice_area == 2 * c.interior + c.boundary - 2, || format!("{p}: Pick identity fails"))?;
        }
        Ok(format!("2A = 2I + B - 2 on all {} polygons", polys.len()))
    });
    (boundary, pick)
}

/// Replays a trace by applying each recorded map to the vertices directly.
fn replay(tr: &ReductionTrace, input: &LatticePolygon, n: i64) -> Result<(), String> {
    let l = Lattice2::scaled(n);
    let mut pts: Vec<Point> = input.vertices().to_vec();
    for (i, s) in tr.steps.iter().enumerate() {
        let m = s.matrix.matrix();
        check(m.det().abs() == 1 && l.contains(s.shift), || format!("step {i} is not an automorphism"))?;
        pts = pts.iter().map(|&p| m.apply(p) + s.shift).collect();
        let q = LatticePolygon::from_points(&pts).map_err(|e| e.to_string())?;
        check(q == s.polygon, || format!("step {i} does not reproduce {}", s.polygon))?;
    }
    let out = LatticePolygon::from_points(&pts).map_err(|e| e.to_string())?;
    check(out == tr.output, || "output differs from replay".into())?;
    check(out.len() == input.len(), || "vertex count changed".into())?;
    check(free_by_scan(&out, &l), || "output meets nZ²".into())?;
    check(type_predicate(&out, n, tr.result.tag), || format!("output is not of type {}", tr.result.tag))?;
    Ok(())
}

fn criterion_8() -> Outcome {
    let n = 3;
    let r = region("-3,6,-3,6");
    let report = verify_reduction_corpus(n, r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(report.exhaustive, || "corpus enumeration ran out of budget".into())?;
    check(report.failures.is_empty(), || {
        let f = &report.failures[0];
        format!("{} failures, first: {} at {}: {}", report.failures.len(), f.polygon, f.stage, f.error)
    })?;
    // independent replay of every V/VI reduction on classified images
    let cfg = EnumerationConfig::new(r).avoiding(Lattice2::scaled(n)).normalized();
    let (parts, _) = enumerate_fold(&cfg, || (BTreeMap::<Tag, u64>::new(), Vec::<String>::new()), |acc, p| {
        let Ok((map, ty)) = classify(p, n, DEFAULT_SEARCH_BOUND) else {
            acc.1.push(format!("{p}: classify failed"));
            return ControlFlow::Continue(());
        };
        let q = p.transform(&map);
        let (tr, allowed): (_, &[Tag]) = match ty.tag {
            Tag::V => (reduce_type_v(&q, n), &[Tag::III, Tag::Va]),
            Tag::VI => (reduce_type_vi(&q, n), &[Tag::I, Tag::II, Tag::III, Tag::V]),
            _ => return ControlFlow::Continue(()),
        };
        match tr {
            Err(e) => acc.1.push(format!("{q}: {e}")),
            Ok(tr) => match replay(&tr, &q, n) {
                Err(e) => acc.1.push(format!("{q}: {e}")),
                Ok(()) if !allowed.contains(&tr.result.tag) => acc.1.push(format!("{q}: reached {}", tr.result.tag)),
                Ok(()) => *acc.0.entry(ty.tag).or_default() += 1,
            },
        }
        ControlFlow::Continue(())
    })
    .map_err(|e| e.to_string())?;
    let mut replayed: BTreeMap<Tag, u64> = BTreeMap::new();
    let mut errors = Vec::new();
    for (m, e) in parts {
        for (k, v) in m {
            *replayed.entry(k).or_default() += v;
        }
        errors.extend(e);
    }
    check(errors.is_empty(), || format!("{} replay failures, first: {}", errors.len(), errors[0]))?;
    let count = |m: &BTreeMap<Tag, u64>, t| m.get(&t).copied().unwrap_or(0);
    check(count(&replayed, Tag::V) > 0 && count(&replayed, Tag::VI) > 0, || "corpus has no type V or VI polygons".into())?;
    Ok(format!(
        "{} classes classified; reductions run: {} type V, {} type VI (replayed independently: {} and {})",
        report.polygons,
        count(&report.reductions, Tag::V),
        count(&report.reductions, Tag::VI),
        count(&replayed, Tag::V),
        count(&replayed, Tag::VI)
    ))
}

fn criterion_9() -> Outcome {
    let mut r = rng(0);
    let mut lifted_some = 0;
    for _ in 0..1000 {
        let n = r.gen_range(2..=6);
        let p = random_lift_instance(&mut r, n);
        let res = lift(&p, n).map_err(|e| format!("{p}: {e}"))?;
        let west = Segment::of((0, 0), (-n, 0));
        let shear = |a: i64| {
            let pts: Vec<Point> = p.vertices().iter().map(|v| Point::new(v.x, v.y - a * v.x)).collect();
            LatticePolygon::from_points(&pts).unwrap()
        };
        let a0 = res.a0;
        check(shear(a0) == res.lifted, || format!("{p}: lifted polygon is not the shear by {a0}"))?;
        check(res.lifted.splits_by_segment(&west) && !shear(a0 + 1).splits_by_segment(&west), || format!("{p}: a0 = {a0} is not maximal"))?;
        check(res.lifted.splits_by_segment(&Segment::of((0, 0), (0, n))), || format!("{p}: [0,(0,n)] stops splitting"))?;
        check(!res.lifted.splits_by_segment(&Segment::of((0, 0), (-n, -n))), || format!("{p}: [0,(-n,-n)] splits the lift"))?;
        let diag = Segment::of((0, n), (n, 2 * n));
        check(p.splits_by_segment(&diag) || !res.lifted.splits_by_segment(&diag), || format!("{p}: diagonal starts splitting"))?;
        let (s0, s1) = (p.bbox().y_min, res.lifted.bbox().y_min);
        check(s1 >= s0 && ((s1 == s0) == (a0 == 0)), || format!("{p}: south {s0} -> {s1} with a0 = {a0}"))?;
        check(res.lifted.len() == p.len() && free_by_scan(&res.lifted, &Lattice2::scaled(n)), || format!("{p}: lost vertices or freeness"))?;
        lifted_some += (a0 > 0) as usize;
    }
    Ok(format!("1000 instances, {lifted_some} with a0 > 0"))
}

fn main() {
    let limits = [1, 300, 1, 1800, 300, 60, 60, 900, 60, 60].map(Duration::from_secs);
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut timed = |k: usize, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let out = f();
        results.push((k, out, t.elapsed()));
    };
    timed(1, &criterion_1);
    timed(2, &criterion_2);
    timed(3, &criterion_3);
    timed(4, &criterion_4);
    timed(5, &criterion_5);
    timed(6, &criterion_6);
    let t = Instant::now();
    let (seven, ten) = criteria_7_and_10();
    let shared = t.elapsed();
    timed(8, &criterion_8);
    timed(9, &criterion_9);
    results.push((7, seven, shared));
    results.push((10, ten, shared));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (k, out, took) in results {
        let out = out.and_then(|msg| {
            if took <= limits[k - 1] {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {:.2?}, limit {:?}", took, limits[k - 1]))
            }
        });
        match out {
            Ok(msg) => println!("criterion {k}: PASS ({took:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k}: FAIL ({took:.2?}) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 10 criteria passed");
}
