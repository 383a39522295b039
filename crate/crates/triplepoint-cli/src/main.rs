//! Command-line front end for the intersection-complex calculus: validate
//! and inspect labeled complexes, apply and search modification sequences,
//! compute crepant resolutions and star fans, check anticanonical cycles,
//! and export DOT diagrams.
//!
//! Exit codes: 0 success, 1 domain failure (a well-formed input that fails
//! a check or has no answer), 2 input error (unreadable or malformed).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde::Serialize;

use triplepoint::{
    blow_down_cycle, canonical_form, corner_blow_up_cycle, cycle_self_intersection,
    interior_blow_up_cycle, interior_points, is_anticanonical_cycle, parse_complex,
    parse_resolution, parse_script, replay_script, search_path, star_fan, toric_degree,
    toric_self_intersections, validate_triangulation, AnticanonicalCycle, DivisorClass,
    IntersectionComplex, JuniorSimplex, LatticeError, Move, MoveKind, PicardLattice, Point2,
    SearchOutcome, Side, SurfaceError, Triangulation2D, TriangulationReport, ValidationOptions,
    ValidationReport,
};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "triplepoint", version, about = "Exact calculus of labeled intersection complexes, crepant resolutions, and anticanonical cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex: sphere topology, trivalency, triple point formula.
    Validate {
        file: PathBuf,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
        /// Accept edges glued to a single face (true/false).
        #[arg(long, value_name = "BOOL", default_value_t = true, action = ArgAction::Set)]
        allow_self_glued: bool,
    },
    /// Print counts, degree, labels, and the canonical digest.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay a modification script against a complex.
    Modify {
        file: PathBuf,
        /// JSON list of steps: {"kind": "I"|"I_inv"|"II", "edge": id} or
        /// {"kind": "blowup", "edge": id, "side": "a"|"b", "count": n}.
        #[arg(long)]
        script: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip per-step validation (blow-up scripts pass through
        /// intermediate states that break the triple point formula).
        #[arg(long)]
        no_validate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Breadth-first search for a shortest move sequence from one complex
    /// to another, up to isomorphism.
    Search {
        src: PathBuf,
        dst: PathBuf,
        /// Comma-separated move families: I (label shifts, both
        /// directions) and/or II (flips).
        #[arg(long, value_delimiter = ',', default_value = "I,II")]
        moves: Vec<String>,
        #[arg(long, default_value_t = 10)]
        max_depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compute the junior simplex of a quotient and validate its
    /// triangulation (the file's, or the deterministic pulling one).
    Resolve {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Star fan of an interior junior point: rays, self-intersections,
    /// anticanonical degree.
    Star {
        file: PathBuf,
        /// Interior point as "x,y".
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Anticanonical-cycle arithmetic on self-intersection lists.
    Cycle {
        #[command(subcommand)]
        op: CycleOp,
    },
    /// Export the complex (faces as nodes, edges labeled with both
    /// self-intersections) as a DOT graph.
    ExportDot {
        file: PathBuf,
        /// Export the dual complex instead.
        #[arg(long)]
        dual: bool,
    },
}

#[derive(Subcommand)]
enum CycleOp {
    /// Self-intersection of the whole cycle, e.g. "[-1,-5,-5]".
    Selfint {
        cycle: String,
        #[arg(long)]
        json: bool,
    },
    /// Contract a (-1)-component.
    BlowDown {
        cycle: String,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Blow up the corner between components index and index+1.
    CornerBlowUp {
        cycle: String,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Blow up interior points of one component.
    InteriorBlowUp {
        cycle: String,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long)]
        json: bool,
    },
    /// Verify divisor classes realize the cycle in a Picard lattice.
    Check {
        cycle: String,
        /// Number of exceptional classes E1..Ek in the lattice.
        #[arg(long)]
        exceptional: usize,
        /// Semicolon-separated classes, e.g. "H-E2-E4;E4;E2-E4".
        #[arg(long)]
        classes: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Input(String),
    Domain(String),
}

type CliResult = Result<ExitCode, Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// Die quietly when a downstream pipe closes, like any other filter.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Validate { file, json, allow_self_glued } => {
            cmd_validate(&file, json, allow_self_glued)
        }
        Command::Info { file, json } => cmd_info(&file, json),
        Command::Modify { file, script, out, no_validate, json } => {
            cmd_modify(&file, &script, out.as_deref(), no_validate, json)
        }
        Command::Search { src, dst, moves, max_depth, json } => {
            cmd_search(&src, &dst, &moves, max_depth, json)
        }
        Command::Resolve { file, json } => cmd_resolve(&file, json),
        Command::Star { file, point, json } => cmd_star(&file, &point, json),
        Command::Cycle { op } => cmd_cycle(op),
        Command::ExportDot { file, dual } => cmd_export_dot(&file, dual),
    }
}

fn load_complex(path: &Path) -> Result<IntersectionComplex, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_complex(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_resolution(
    path: &Path,
) -> Result<(JuniorSimplex, Triangulation2D, bool), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    let file = parse_resolution(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    triplepoint::resolution_triangulation(&file).map_err(lattice_failure)
}

/// Malformed quotient data is an input error; false claims about a
/// well-formed quotient (wrong point set, bad triangle indices) are
/// domain failures.
fn lattice_failure(e: LatticeError) -> Failure {
    match e {
        LatticeError::Syntax { .. }
        | LatticeError::DegenerateGenerator { .. }
        | LatticeError::NotCalabiYau { .. } => input(e),
        _ => domain(e),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(input)?;
    println!("{text}");
    Ok(())
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_validate(file: &Path, json: bool, allow_self_glued: bool) -> CliResult {
    let cx = load_complex(file)?;
    let report = cx
        .validate(&ValidationOptions { allow_self_glued })
        .map_err(input)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            name: &'a str,
            report: &'a ValidationReport,
        }
        print_json(&Out { schema: SCHEMA, name: &cx.meta.name, report: &report })?;
    } else {
        println!("name: {}", cx.meta.name);
        println!(
            "faces {}, edges {}, vertices {}, euler characteristic {}",
            report.face_count, report.edge_count, report.vertex_count,
            report.euler_characteristic
        );
        println!("connected: {}", yesno(report.connected));
        println!("trivalent: {}", yesno(report.trivalent));
        for v in &report.nontrivalent_vertices {
            println!("  vertex {} has {} corners", v.vertex, v.corners);
        }
        if report.triple_point_failures == 0 {
            println!("triple point formula: pass");
        } else {
            println!(
                "triple point formula: {} failure(s)",
                report.triple_point_failures
            );
            for entry in report.triple_point.iter().filter(|e| !e.pass) {
                println!(
                    "  edge {}: expected {}, got {}",
                    entry.edge, entry.expected, entry.sum
                );
            }
        }
        for w in &report.warnings {
            println!("warning: {w}");
        }
        if let Some(d) = report.degree {
            println!("degree {d}");
        }
        println!("valid: {}", yesno(report.valid));
    }
    Ok(code(report.valid))
}

fn cmd_info(file: &Path, json: bool) -> CliResult {
    let cx = load_complex(file)?;
    let report = cx.validate(&ValidationOptions::default()).map_err(input)?;
    let digest = canonical_form(&cx).map_err(input)?.digest();
    let degree = cx.degree().ok();

    #[derive(Serialize)]
    struct EdgeOut<'a> {
        id: &'a str,
        label_a: i64,
        label_b: i64,
        nodal: bool,
        sum: i64,
    }
    let edges: Vec<EdgeOut> = cx
        .edges
        .iter()
        .map(|e| EdgeOut {
            id: &e.id,
            label_a: e.label_a,
            label_b: e.label_b,
            nodal: e.nodal,
            sum: e.label_sum(),
        })
        .collect();

    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            name: &'a str,
            face_count: usize,
            edge_count: usize,
            vertex_count: usize,
            euler_characteristic: i64,
            degree: Option<i64>,
            canonical_digest: String,
            edges: Vec<EdgeOut<'a>>,
        }
        print_json(&Out {
            schema: SCHEMA,
            name: &cx.meta.name,
            face_count: report.face_count,
            edge_count: report.edge_count,
            vertex_count: report.vertex_count,
            euler_characteristic: report.euler_characteristic,
            degree,
            canonical_digest: digest,
            edges,
        })?;
    } else {
        println!("name: {}", cx.meta.name);
        println!(
            "faces {}, edges {}, vertices {}, euler characteristic {}",
            report.face_count, report.edge_count, report.vertex_count,
            report.euler_characteristic
        );
        match degree {
            Some(d) => println!("degree {d}"),
            None => println!("degree: undefined"),
        }
        println!("canonical digest: {digest}");
        println!("edges:");
        for e in &edges {
            let nodal = if e.nodal { ", nodal" } else { "" };
            println!("  {}: {} / {} (sum {}{})", e.id, e.label_a, e.label_b, e.sum, nodal);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_modify(
    file: &Path,
    script: &Path,
    out: Option<&Path>,
    no_validate: bool,
    json: bool,
) -> CliResult {
    let cx = load_complex(file)?;
    let script_text = fs::read_to_string(script)
        .map_err(|e| input(format!("{}: {e}", script.display())))?;
    let steps = parse_script(&script_text)
        .map_err(|e| input(format!("{}: {e}", script.display())))?;
    let result = replay_script(&cx, &steps, !no_validate).map_err(domain)?;

    if let Some(out) = out {
        fs::write(out, result.to_canonical_string())
            .map_err(|e| input(format!("{}: {e}", out.display())))?;
        if json {
            #[derive(Serialize)]
            struct Out<'a> {
                schema: u32,
                steps: usize,
                wrote: &'a str,
            }
            print_json(&Out {
                schema: SCHEMA,
                steps: steps.len(),
                wrote: &out.display().to_string(),
            })?;
        } else {
            println!("applied {} step(s); wrote {}", steps.len(), out.display());
        }
    } else if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            steps: usize,
            complex: &'a IntersectionComplex,
        }
        print_json(&Out { schema: SCHEMA, steps: steps.len(), complex: &result })?;
    } else {
        print!("{}", result.to_canonical_string());
    }
    Ok(ExitCode::SUCCESS)
}

/// A Type I modification seen from the other component is its inverse, so
/// the family "I" covers both directions.
fn parse_move_family(s: &str) -> Result<&'static [MoveKind], Failure> {
    match s {
        "I" => Ok(&[MoveKind::TypeI, MoveKind::TypeIInverse]),
        "II" => Ok(&[MoveKind::TypeII]),
        other => Err(input(format!(
            "unknown move family {other:?}; expected I or II"
        ))),
    }
}

fn cmd_search(
    src: &Path,
    dst: &Path,
    moves: &[String],
    max_depth: usize,
    json: bool,
) -> CliResult {
    let src_cx = load_complex(src)?;
    let dst_cx = load_complex(dst)?;
    let mut kinds: Vec<MoveKind> = Vec::new();
    for family in moves {
        for kind in parse_move_family(family)? {
            if !kinds.contains(kind) {
                kinds.push(*kind);
            }
        }
    }
    let outcome = search_path(&src_cx, &dst_cx, max_depth, &kinds).map_err(domain)?;

    #[derive(Serialize)]
    struct Out<'a> {
        schema: u32,
        found: bool,
        length: Option<usize>,
        path: &'a [Move],
        visited: usize,
        max_depth: usize,
    }
    match outcome {
        SearchOutcome::Found(result) => {
            if json {
                print_json(&Out {
                    schema: SCHEMA,
                    found: true,
                    length: Some(result.path.len()),
                    path: &result.path,
                    visited: result.visited,
                    max_depth,
                })?;
            } else {
                println!(
                    "found a path of length {} (visited {} complexes)",
                    result.path.len(),
                    result.visited
                );
                for (i, mv) in result.path.iter().enumerate() {
                    println!("  {}. {mv}", i + 1);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        SearchOutcome::NotFound { visited } => {
            if json {
                print_json(&Out {
                    schema: SCHEMA,
                    found: false,
                    length: None,
                    path: &[],
                    visited,
                    max_depth,
                })?;
            } else {
                println!(
                    "no path within {max_depth} move(s) (visited {visited} complexes)"
                );
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_resolve(file: &Path, json: bool) -> CliResult {
    let (j, t, from_file) = load_resolution(file)?;
    let report = validate_triangulation(&t).map_err(domain)?;
    let interior = interior_points(&j);

    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            group_order: i64,
            corners: [Point2; 3],
            points: &'a [Point2],
            interior: &'a [Point2],
            triangles: &'a [[usize; 3]],
            triangles_from_file: bool,
            report: &'a TriangulationReport,
        }
        print_json(&Out {
            schema: SCHEMA,
            group_order: j.group_order,
            corners: j.corners,
            points: &t.points,
            interior: &interior,
            triangles: &t.triangles,
            triangles_from_file: from_file,
            report: &report,
        })?;
    } else {
        println!("group order {}", j.group_order);
        println!(
            "corners: {}, {}, {}",
            j.corners[0], j.corners[1], j.corners[2]
        );
        println!(
            "{} junior points, {} interior, {} triangles, unimodular: {}",
            j.points.len(),
            interior.len(),
            report.triangle_count,
            yesno(report.non_unimodular.is_empty())
        );
        println!(
            "triangulation: {}",
            if from_file { "from file" } else { "pulling (derived)" }
        );
        if !report.valid {
            if !report.non_unimodular.is_empty() {
                println!("  non-unimodular triangles: {:?}", report.non_unimodular);
            }
            if !report.disjoint {
                println!("  triangles overlap");
            }
            if !report.covers {
                println!("  triangles do not cover the simplex");
            }
            if !report.count_matches {
                println!(
                    "  triangle count {} differs from group order {}",
                    report.triangle_count, report.expected_count
                );
            }
        }
        println!("valid: {}", yesno(report.valid));
    }
    Ok(code(report.valid))
}

fn parse_point(s: &str) -> Result<Point2, Failure> {
    let err = || input(format!("point {s:?}: expected \"x,y\" with integer coordinates"));
    let (x, y) = s.split_once(',').ok_or_else(err)?;
    Ok(Point2::new(
        x.trim().parse().map_err(|_| err())?,
        y.trim().parse().map_err(|_| err())?,
    ))
}

fn cmd_star(file: &Path, point: &str, json: bool) -> CliResult {
    let p = parse_point(point)?;
    let (_, t, _) = load_resolution(file)?;
    let fan = star_fan(&t, p).map_err(domain)?;
    let selfints = toric_self_intersections(&fan).map_err(domain)?;
    let degree = toric_degree(&fan).map_err(domain)?;
    let sum: i64 = selfints.iter().sum();

    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            point: Point2,
            rays: &'a [Point2],
            self_intersections: &'a [i64],
            self_intersection_sum: i64,
            degree: i64,
        }
        print_json(&Out {
            schema: SCHEMA,
            point: p,
            rays: &fan.rays,
            self_intersections: &selfints,
            self_intersection_sum: sum,
            degree,
        })?;
    } else {
        println!("star of {p}: {} rays", fan.rays.len());
        let rays: Vec<String> = fan.rays.iter().map(|r| r.to_string()).collect();
        println!("rays: {}", rays.join(", "));
        let ints: Vec<String> = selfints.iter().map(|a| a.to_string()).collect();
        println!("self-intersections: {}", ints.join(", "));
        println!("sum of self-intersections: {sum}");
        println!("degree {degree}");
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_cycle_literal(s: &str) -> Result<Vec<i64>, Failure> {
    let selfints: Vec<i64> = serde_json::from_str(s)
        .map_err(|e| input(format!("cycle literal {s:?}: {e}")))?;
    Ok(selfints)
}

fn cycle_failure(e: SurfaceError) -> Failure {
    match e {
        SurfaceError::ClassParse { .. } | SurfaceError::ClassCountMismatch { .. } => input(e),
        _ => domain(e),
    }
}

fn print_cycle_result(
    op: &str,
    before: &AnticanonicalCycle,
    after: &AnticanonicalCycle,
    json: bool,
) -> CliResult {
    let self_intersection = cycle_self_intersection(after).map_err(domain)?;
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            schema: u32,
            op: &'a str,
            input: &'a [i64],
            result: &'a [i64],
            self_intersection: i64,
        }
        print_json(&Out {
            schema: SCHEMA,
            op,
            input: &before.selfints,
            result: &after.selfints,
            self_intersection,
        })?;
    } else {
        println!(
            "result: {}",
            serde_json::to_string(&after.selfints).map_err(input)?
        );
        println!("cycle self-intersection: {self_intersection}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cycle(op: CycleOp) -> CliResult {
    match op {
        CycleOp::Selfint { cycle, json } => {
            let c = AnticanonicalCycle { selfints: parse_cycle_literal(&cycle)?, classes: None };
            let value = cycle_self_intersection(&c).map_err(domain)?;
            if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    schema: u32,
                    cycle: &'a [i64],
                    self_intersection: i64,
                }
                print_json(&Out { schema: SCHEMA, cycle: &c.selfints, self_intersection: value })?;
            } else {
                println!("cycle self-intersection: {value}");
            }
            Ok(ExitCode::SUCCESS)
        }
        CycleOp::BlowDown { cycle, index, json } => {
            let c = AnticanonicalCycle { selfints: parse_cycle_literal(&cycle)?, classes: None };
            let result = blow_down_cycle(&c, index).map_err(cycle_failure)?;
            print_cycle_result("blow-down", &c, &result, json)
        }
        CycleOp::CornerBlowUp { cycle, index, json } => {
            let c = AnticanonicalCycle { selfints: parse_cycle_literal(&cycle)?, classes: None };
            let result = corner_blow_up_cycle(&c, index).map_err(cycle_failure)?;
            print_cycle_result("corner-blow-up", &c, &result, json)
        }
        CycleOp::InteriorBlowUp { cycle, index, count, json } => {
            let c = AnticanonicalCycle { selfints: parse_cycle_literal(&cycle)?, classes: None };
            let result = interior_blow_up_cycle(&c, index, count).map_err(cycle_failure)?;
            print_cycle_result("interior-blow-up", &c, &result, json)
        }
        CycleOp::Check { cycle, exceptional, classes, json } => {
            let selfints = parse_cycle_literal(&cycle)?;
            let parsed: Vec<DivisorClass> = classes
                .split(';')
                .map(|s| s.trim().parse::<DivisorClass>())
                .collect::<Result<_, _>>()
                .map_err(cycle_failure)?;
            let class_strings: Vec<String> = parsed.iter().map(|c| c.to_string()).collect();
            let c = AnticanonicalCycle { selfints, classes: Some(parsed) };
            let lattice = PicardLattice::new(exceptional);
            let ok = is_anticanonical_cycle(&lattice, &c).map_err(cycle_failure)?;
            if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    schema: u32,
                    cycle: &'a [i64],
                    classes: &'a [String],
                    exceptional: usize,
                    anticanonical: bool,
                }
                print_json(&Out {
                    schema: SCHEMA,
                    cycle: &c.selfints,
                    classes: &class_strings,
                    exceptional,
                    anticanonical: ok,
                })?;
            } else {
                println!("anticanonical: {}", yesno(ok));
            }
            Ok(code(ok))
        }
    }
}

fn to_dot(cx: &IntersectionComplex) -> Result<String, Failure> {
    let mut owner: HashMap<(&str, Side), &str> = HashMap::new();
    for face in &cx.faces {
        for dart in &face.boundary {
            owner.insert((dart.edge.as_str(), dart.side), face.id.as_str());
        }
    }
    let mut dot = String::from("graph complex {\n");
    for face in &cx.faces {
        let _ = writeln!(dot, "  \"{}\";", face.id);
    }
    for edge in &cx.edges {
        let a = owner
            .get(&(edge.id.as_str(), Side::A))
            .ok_or_else(|| input(format!("edge {} has no side-a face", edge.id)))?;
        let b = owner
            .get(&(edge.id.as_str(), Side::B))
            .ok_or_else(|| input(format!("edge {} has no side-b face", edge.id)))?;
        let nodal = if edge.nodal { " (nodal)" } else { "" };
        let _ = writeln!(
            dot,
            "  \"{a}\" -- \"{b}\" [label=\"{}: {} / {}{nodal}\"];",
            edge.id, edge.label_a, edge.label_b
        );
    }
    dot.push_str("}\n");
    Ok(dot)
}

fn cmd_export_dot(file: &Path, dual: bool) -> CliResult {
    let cx = load_complex(file)?;
    let target = if dual { cx.dualize().map_err(domain)? } else { cx };
    print!("{}", to_dot(&target)?);
    Ok(ExitCode::SUCCESS)
}
