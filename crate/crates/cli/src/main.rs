mod render;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use latgon::sample;
use latgon::slope::{check_slp_witness, check_th36_witness, SignedBasis, SlopeFailure};
use latgon::typeclass::{
    classify, lift, reduce_type_iv, reduce_type_v, reduce_type_vi, type_predicate, ReductionTrace, Tag,
    DEFAULT_SEARCH_BOUND,
};
use latgon::verify::{
    check_main_theorem, check_vertex_bound, check_vertex_bound_cosets, critical_vertex_count, enumerate_fold,
    find_sharpness_witness, verify_reduction_corpus, EnumerationConfig, SearchRegion, DEFAULT_BUDGET,
};
use latgon::{Error, InvariantFactors, Lattice2, LatticePolygon};

const USAGE: u8 = 1;
const COUNTEREXAMPLE: u8 = 2;
const BUDGET: u8 = 3;

/// Exact tools for convex lattice polygons that avoid a sublattice.
///
/// Results are printed as JSON on standard output and summarized on
/// standard error. Exit codes: 0 success, 1 usage or input error,
/// 2 counterexample found, 3 budget or search bound exceeded.
#[derive(Parser)]
#[command(name = "latgon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an automorphism of nZ² taking the polygon to one of the types.
    Classify {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        polygon: PolygonArg,
        /// Largest matrix entry explored by the automorphism search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
    },
    /// Apply the lift shear to a polygon split by [0,(-n,0)] and [0,(0,n)].
    Lift {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        polygon: PolygonArg,
    },
    /// Run the reduction of a type IV, V or VI polygon and print its trace.
    Reduce {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        polygon: PolygonArg,
        /// IV, V or VI; detected from the polygon when omitted.
        #[arg(long)]
        tag: Option<String>,
    },
    /// Search a region for a polygon exceeding a vertex bound.
    VerifyBound {
        #[arg(long)]
        n: i64,
        /// A type name (I, II, III, IV, V, VI, Va) or "any".
        #[arg(long, default_value = "any")]
        tag: String,
        /// Invariant factors `delta,n` of the lattice holding the vertices.
        #[arg(long)]
        vertex_lattice: Option<String>,
        /// Only require the vertices to lie in a translate of that lattice.
        #[arg(long, requires = "vertex_lattice")]
        cosets: bool,
        /// Check every classified polygon of the region instead, running
        /// the reductions of types IV, V and VI.
        #[arg(long, conflicts_with_all = ["vertex_lattice", "cosets"])]
        corpus: bool,
        #[command(flatten)]
        region: RegionArg,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Check that every polygon with the critical number of vertices meets
    /// every lattice with the given invariant factors.
    VerifyMain {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        region: RegionArg,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Find a polygon with one vertex fewer than the critical count that
    /// avoids the rectangular lattice with the given invariant factors.
    Witness {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        region: RegionArg,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// List convex lattice polygons of a region.
    Enumerate {
        #[command(flatten)]
        region: RegionArg,
        #[arg(long, default_value_t = 3)]
        min_vertices: usize,
        #[arg(long)]
        max_vertices: Option<usize>,
        /// Only polygons free of nZ² for this n.
        #[arg(long, conflicts_with = "avoid")]
        avoid_n: Option<i64>,
        /// Only polygons free of this lattice, given as JSON `{"basis": ...}`.
        #[arg(long)]
        avoid: Option<String>,
        /// Keep every translate instead of one per class modulo the
        /// avoided lattice.
        #[arg(long)]
        no_normalize: bool,
        /// Print the count only.
        #[arg(long)]
        count_only: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Fuzz the slope witness and split witness checks on random instances.
    SlopeCheck {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_edges: usize,
    },
    /// Draw a polygon or a reduction trace as SVG.
    Render {
        /// Polygon or trace JSON, `@file`, or `-` for standard input.
        #[arg(long)]
        input: String,
        /// Draw the points of nZ² and, with --tag, the type's segments.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        tag: Option<String>,
        /// Pixels per unit.
        #[arg(long, default_value_t = 40)]
        scale: i64,
    },
}

#[derive(Args)]
struct PolygonArg {
    /// Polygon JSON `{"vertices": [[x, y], ...]}`, `@file`, or `-` for
    /// standard input.
    #[arg(long)]
    polygon: String,
}

#[derive(Args)]
struct RegionArg {
    /// `xmin,xmax,ymin,ymax`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    region: Option<String>,
    /// Named region such as `type-iii-n3` or `square-n3`.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct BudgetArg {
    /// Node budget; defaults to LATGON_BUDGET or 10^8.
    #[arg(long)]
    budget: Option<u64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::SearchExhausted { .. } => BUDGET,
            _ => USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: message.into() }
}

type Run = Result<u8, Failure>;

fn read_source(s: &str) -> Result<String, Failure> {
    if s == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| usage(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else if let Some(path) = s.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))
    } else {
        Ok(s.to_string())
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    let text = read_source(s)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid {what} JSON: {e}")))
}

fn parse_tag(s: &str) -> Result<Tag, Failure> {
    Tag::ALL
        .into_iter()
        .find(|t| t.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| usage(format!("unknown type {s:?}")))
}

impl RegionArg {
    fn resolve(&self) -> Result<SearchRegion, Failure> {
        match (&self.region, &self.preset) {
            (Some(r), _) => Ok(r.parse()?),
            (None, Some(p)) => Ok(SearchRegion::preset(p)?),
            (None, None) => Err(usage("one of --region or --preset is required")),
        }
    }
}

impl BudgetArg {
    fn resolve(&self) -> Result<u64, Failure> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var("LATGON_BUDGET") {
            Ok(v) => v.trim().parse().map_err(|_| usage(format!("LATGON_BUDGET={v:?} is not a node count"))),
            Err(_) => Ok(DEFAULT_BUDGET),
        }
    }
}

// A closed pipe on the reading side is not an error worth a panic.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn emit<T: Serialize>(value: &T) {
    write_stdout(&(serde_json::to_string(value).expect("serializable output") + "\n"));
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Classify { n, polygon, bound } => {
            let p: LatticePolygon = parse_json("polygon", &polygon.polygon)?;
            let (map, ty) = classify(&p, n, bound)?;
            emit(&json!({ "tag": ty.tag, "n": ty.n, "map": map, "image": p.transform(&map) }));
            eprintln!("{p} is of type {ty} after {}", serde_json::to_string(&map).expect("serializable map"));
            Ok(0)
        }
        Command::Lift { n, polygon } => {
            let p: LatticePolygon = parse_json("polygon", &polygon.polygon)?;
            let r = lift(&p, n)?;
            emit(&r);
            eprintln!("lift of {p}: a0 = {}, {}", r.a0, r.lifted);
            Ok(0)
        }
        Command::Reduce { n, polygon, tag } => {
            let p: LatticePolygon = parse_json("polygon", &polygon.polygon)?;
            let tag = match tag {
                Some(t) => parse_tag(&t)?,
                None => [Tag::V, Tag::VI, Tag::IV]
                    .into_iter()
                    .find(|&t| type_predicate(&p, n, t))
                    .ok_or_else(|| usage(format!("{p} is not of type IV, V or VI for n = {n}")))?,
            };
            let trace: ReductionTrace = match tag {
                Tag::IV => reduce_type_iv(&p, n)?,
                Tag::V => reduce_type_v(&p, n)?,
                Tag::VI => reduce_type_vi(&p, n)?,
                t => return Err(usage(format!("no reduction for type {t}"))),
            };
            emit(&trace);
            eprintln!("type {tag}_{n} reduced to {} in {} steps", trace.result, trace.steps.len());
            Ok(0)
        }
        Command::VerifyBound { n, tag, vertex_lattice, cosets, corpus, region, budget } => {
            let region = region.resolve()?;
            let budget = budget.resolve()?;
            if corpus {
                let report = verify_reduction_corpus(n, region, budget)?;
                emit(&report);
                eprintln!(
                    "{} polygons classified, {} failures{}",
                    report.polygons,
                    report.failures.len(),
                    if report.exhaustive { "" } else { " (budget exhausted)" }
                );
                return Ok(if !report.failures.is_empty() {
                    COUNTEREXAMPLE
                } else if !report.exhaustive {
                    BUDGET
                } else {
                    0
                });
            }
            let tag = if tag.eq_ignore_ascii_case("any") { None } else { Some(parse_tag(&tag)?) };
            let factors = match vertex_lattice {
                None => None,
                Some(s) => {
                    let parts: Vec<i64> = s
                        .split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| usage(format!("vertex lattice {s:?} must be `delta,n`")))?;
                    match parts[..] {
                        [d, m] => Some(InvariantFactors::new(d, m)?),
                        _ => return Err(usage(format!("vertex lattice {s:?} must be `delta,n`"))),
                    }
                }
            };
            let report = match factors {
                Some(f) if cosets => check_vertex_bound_cosets(n, tag, f, region, budget)?,
                f => check_vertex_bound(n, tag, f, region, budget)?,
            };
            emit(&report);
            eprintln!(
                "{}: largest polygon found has {} vertices (bound {}), {} counterexamples, {}",
                report.bound_name,
                report.max_vertices_found,
                report.bound,
                report.counterexamples.len(),
                if report.exhaustive { "exhaustive" } else { "budget exhausted" }
            );
            Ok(report.exit_code() as u8)
        }
        Command::VerifyMain { delta, n, region, budget } => {
            let report = check_main_theorem(delta, n, region.resolve()?, budget.resolve()?)?;
            emit(&report);
            eprintln!(
                "{}: largest free polygon has {} vertices, {} counterexamples over {} lattices, {}",
                report.bound_name,
                report.max_vertices_found,
                report.counterexamples.len(),
                report.lattices_checked.len(),
                if report.exhaustive { "exhaustive" } else { "budget exhausted" }
            );
            Ok(report.exit_code() as u8)
        }
        Command::Witness { delta, n, region, budget } => {
            let region = region.resolve()?;
            let nu = critical_vertex_count(delta, n);
            match find_sharpness_witness(delta, n, region, budget.resolve()?)? {
                Some(w) => {
                    emit(&json!({ "found": true, "vertices": w.len(), "polygon": w }));
                    eprintln!("{w} has {} vertices and avoids {}", w.len(), Lattice2::rectangular(delta, n));
                }
                None => {
                    emit(&json!({ "found": false, "vertices": nu - 1 }));
                    eprintln!("no polygon with {} vertices avoids the lattice within {region}", nu - 1);
                }
            }
            Ok(0)
        }
        Command::Enumerate { region, min_vertices, max_vertices, avoid_n, avoid, no_normalize, count_only, budget } => {
            let mut cfg = EnumerationConfig::new(region.resolve()?)
                .vertices(min_vertices.max(3), max_vertices)
                .budget(budget.resolve()?);
            let lattice = match (avoid_n, avoid) {
                (Some(k), _) if k >= 1 => Some(Lattice2::scaled(k)),
                (Some(k), _) => return Err(usage(format!("--avoid-n must be positive, got {k}"))),
                (None, Some(s)) => Some(parse_json::<Lattice2>("lattice", &s)?),
                (None, None) => None,
            };
            if let Some(l) = lattice {
                cfg = cfg.avoiding(l);
                if !no_normalize {
                    cfg = cfg.normalized();
                }
            }
            let (parts, stats) = enumerate_fold(&cfg, Vec::new, |acc, p| {
                if !count_only {
                    acc.push(p.clone());
                }
                std::ops::ControlFlow::Continue(())
            })?;
            let polygons: Vec<LatticePolygon> = parts.into_iter().flatten().collect();
            let mut out = json!({
                "count": stats.polygons,
                "exhaustive": stats.exhaustive,
                "nodes_explored": stats.nodes_explored,
            });
            if !count_only {
                out["polygons"] = json!(polygons);
            }
            emit(&out);
            eprintln!("{} polygons, {} nodes", stats.polygons, stats.nodes_explored);
            Ok(if stats.exhaustive { 0 } else { BUDGET })
        }
        Command::SlopeCheck { count, seed, max_edges } => {
            let mut rng = sample::rng(seed);
            let bases = SignedBasis::all();
            let mut failures: Vec<SlopeFailure> = Vec::new();
            for i in 0..count {
                let q = sample::random_slope(&mut rng, bases[i % bases.len()], max_edges, 14);
                if let Err(e) = check_slp_witness(&q, None, None) {
                    failures.push(SlopeFailure::from_error(&q, None, &e));
                }
            }
            for i in 0..count {
                let (f, q) = sample::random_split_configuration(&mut rng, max_edges, 2 + (i % 3) as i64);
                if let Err(e) = check_th36_witness(&f, &q) {
                    failures.push(SlopeFailure::from_error(&q, Some(&f), &e));
                }
            }
            emit(&json!({ "seed": seed, "slopes": count, "split_configurations": count, "failures": failures }));
            eprintln!("{} slopes and {} split configurations, {} failures", count, count, failures.len());
            Ok(if failures.is_empty() { 0 } else { COUNTEREXAMPLE })
        }
        Command::Render { input, n, tag, scale } => {
            let text = read_source(&input)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| usage(format!("invalid render input JSON: {e}")))?;
            let tag = tag.as_deref().map(parse_tag).transpose()?;
            if scale < 1 {
                return Err(usage("--scale must be positive"));
            }
            let svg = if value.get("steps").is_some() {
                let trace: ReductionTrace =
                    serde_json::from_value(value).map_err(|e| usage(format!("invalid trace: {e}")))?;
                render::render_trace(&trace, scale)
            } else {
                let p: LatticePolygon =
                    serde_json::from_value(value).map_err(|e| usage(format!("invalid polygon: {e}")))?;
                if tag.is_some() && n.is_none() {
                    return Err(usage("--tag needs --n"));
                }
                render::render_polygon(&p, n, tag, scale)
            };
            write_stdout(&svg);
            eprintln!("wrote {} bytes of SVG", svg.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
