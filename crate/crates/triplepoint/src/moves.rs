//! Elementary modifications of intersection complexes.
//!
//! Two kinds of moves connect the complexes of deformation-equivalent
//! surfaces:
//!
//! * **Type I** shifts weight across an edge: labels `(a, b)` become
//!   `(a - 1, b + 1)`. Pure label arithmetic, no darts are touched.
//!   `I_inv` is the exact inverse.
//! * **Type II** flips a non-nodal `(-1, -1)` edge across its dual
//!   diagonal: the edge leaves the two faces it currently separates and
//!   reappears between the two opposite faces of the dual quadrilateral.
//!   Labels stay `(-1, -1)`.
//!
//! Both preserve connectivity, the sphere topology, trivalency, the
//! triple point formula, and hence the degree. Interior blow-ups, which
//! subtract from one side's label without compensation, are provided for
//! building complexes out of naive ones; they deliberately break the
//! triple point formula.
//!
//! [`search_path`] runs breadth-first search on canonical codes to find a
//! shortest move sequence between two complexes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_form, CanonicalCode};
use crate::complex::{ComplexError, Dart, IntersectionComplex, MapView, Side, ValidationOptions};

/// The move kinds eligible for search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "I_inv")]
    TypeIInverse,
    #[serde(rename = "II")]
    TypeII,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::TypeI => "I",
            MoveKind::TypeIInverse => "I_inv",
            MoveKind::TypeII => "II",
        }
    }
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single move: a kind applied to an edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub edge: String,
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.kind, self.edge)
    }
}

/// Errors raised by move application and search.
#[derive(Debug, Error)]
pub enum MoveError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unknown edge {edge}")]
    UnknownEdge { edge: String },
    #[error("edge {edge} is nodal")]
    NodalEdge { edge: String },
    #[error("type II flip requires labels (-1, -1) on edge {edge}, found ({label_a}, {label_b})")]
    WrongLabels { edge: String, label_a: i64, label_b: i64 },
    #[error("type II flip on edge {edge} is degenerate: the four surrounding faces are not distinct")]
    DegenerateFlip { edge: String },
    #[error("blow-up count must be positive")]
    ZeroCount,
    #[error("{role} complex fails validation")]
    NotValid { role: &'static str },
    #[error("degree mismatch: source has degree {src}, target has degree {dst}")]
    DegreeMismatch { src: i64, dst: i64 },
    #[error("syntax error in move script at line {line}, column {column}: {message}")]
    ScriptSyntax { line: usize, column: usize, message: String },
    #[error("blowup step requires a side")]
    MissingSide,
    #[error("step {step}: {source}")]
    StepFailed { step: usize, source: Box<MoveError> },
    #[error("step {step}: complex fails validation after the step")]
    InvalidAfterStep { step: usize },
    #[error("search reconstructed a path that does not replay to the target")]
    ReplayMismatch,
}

/// Type I modification on `edge`: labels `(a, b)` -> `(a-1, b+1)`, or the
/// inverse when `inverse` is set. Rejected on nodal edges.
pub fn apply_type1(
    cx: &IntersectionComplex,
    edge: &str,
    inverse: bool,
) -> Result<IntersectionComplex, MoveError> {
    let mut out = cx.clone();
    let rec = out
        .edges
        .iter_mut()
        .find(|e| e.id == edge)
        .ok_or_else(|| MoveError::UnknownEdge { edge: edge.into() })?;
    if rec.nodal {
        return Err(MoveError::NodalEdge { edge: edge.into() });
    }
    let delta = if inverse { 1 } else { -1 };
    rec.label_a += delta;
    rec.label_b -= delta;
    Ok(out)
}

/// The four faces around an edge in the dual quadrilateral: the two
/// faces the edge separates and, via the corners at its endpoints, the
/// two faces it would separate after a flip. Returns the darts after
/// which the flipped edge must be inserted.
fn flip_frame(view: &MapView, ei: usize) -> (usize, usize, usize, usize, usize, usize) {
    let [da, db] = view.edge_dart[ei];
    let l = view.dart_face[da];
    let r = view.dart_face[db];
    // sigma(db) starts at the vertex where da ends; alpha lands its twin
    // in the third face around that vertex.
    let xa = view.alpha[view.sigma[db]];
    let xb = view.alpha[view.sigma[da]];
    (l, r, view.dart_face[xa], view.dart_face[xb], xa, xb)
}

fn flip_is_legal(view: &MapView, ei: usize) -> bool {
    let (l, r, a, b, _, _) = flip_frame(view, ei);
    l != r && l != a && l != b && r != a && r != b && a != b
}

/// Type II modification: flips a non-nodal `(-1, -1)` edge across the
/// dual quadrilateral. The edge keeps its id; side `a` ends up in the
/// face at the end of the original side-`a` dart, side `b` opposite.
pub fn apply_type2(cx: &IntersectionComplex, edge: &str) -> Result<IntersectionComplex, MoveError> {
    let view = MapView::build(cx)?;
    let ei = *view
        .edge_index
        .get(edge)
        .ok_or_else(|| MoveError::UnknownEdge { edge: edge.into() })?;
    let rec = &cx.edges[ei];
    if rec.nodal {
        return Err(MoveError::NodalEdge { edge: edge.into() });
    }
    if rec.label_a != -1 || rec.label_b != -1 {
        return Err(MoveError::WrongLabels {
            edge: edge.into(),
            label_a: rec.label_a,
            label_b: rec.label_b,
        });
    }
    let (l, r, a, b, xa, xb) = flip_frame(&view, ei);
    if !(l != r && l != a && l != b && r != a && r != b && a != b) {
        return Err(MoveError::DegenerateFlip { edge: edge.into() });
    }

    let [da, db] = view.edge_dart[ei];
    let mut out = cx.clone();
    out.faces[l].boundary.remove(view.dart_pos(da));
    out.faces[r].boundary.remove(view.dart_pos(db));
    // l, r, a, b are pairwise distinct faces, so the removal above does
    // not shift the insertion positions below.
    out.faces[a]
        .boundary
        .insert(view.dart_pos(xa) + 1, Dart::new(edge, Side::A));
    out.faces[b]
        .boundary
        .insert(view.dart_pos(xb) + 1, Dart::new(edge, Side::B));
    debug_assert!(MapView::build(&out).is_ok());
    Ok(out)
}

/// `count` interior blow-ups on one side of an edge: the label on that
/// side drops by `count`, the other side is untouched. Breaks the triple
/// point formula by design; the tool for turning naive complexes into
/// honest Type III ones.
pub fn blow_up_edge_side(
    cx: &IntersectionComplex,
    edge: &str,
    side: Side,
    count: u32,
) -> Result<IntersectionComplex, MoveError> {
    if count == 0 {
        return Err(MoveError::ZeroCount);
    }
    let mut out = cx.clone();
    let rec = out
        .edges
        .iter_mut()
        .find(|e| e.id == edge)
        .ok_or_else(|| MoveError::UnknownEdge { edge: edge.into() })?;
    *rec.label_mut(side) -= count as i64;
    Ok(out)
}

/// Applies one search move.
pub fn apply_move(cx: &IntersectionComplex, mv: &Move) -> Result<IntersectionComplex, MoveError> {
    match mv.kind {
        MoveKind::TypeI => apply_type1(cx, &mv.edge, false),
        MoveKind::TypeIInverse => apply_type1(cx, &mv.edge, true),
        MoveKind::TypeII => apply_type2(cx, &mv.edge),
    }
}

fn legal_moves(cx: &IntersectionComplex, view: &MapView, kinds: &[MoveKind]) -> Vec<Move> {
    let mut edge_order: Vec<usize> = (0..cx.edges.len()).collect();
    edge_order.sort_by(|&i, &j| cx.edges[i].id.cmp(&cx.edges[j].id));

    let mut moves = Vec::new();
    for kind in [MoveKind::TypeI, MoveKind::TypeIInverse, MoveKind::TypeII] {
        if !kinds.contains(&kind) {
            continue;
        }
        for &ei in &edge_order {
            let rec = &cx.edges[ei];
            if rec.nodal {
                continue;
            }
            let legal = match kind {
                MoveKind::TypeI | MoveKind::TypeIInverse => true,
                MoveKind::TypeII => {
                    rec.label_a == -1 && rec.label_b == -1 && flip_is_legal(view, ei)
                }
            };
            if legal {
                moves.push(Move { kind, edge: rec.id.clone() });
            }
        }
    }
    moves
}

/// All moves applicable to a valid complex, in deterministic order
/// (kind `I`, `I_inv`, `II`; edge id within a kind).
pub fn enumerate_moves(cx: &IntersectionComplex) -> Result<Vec<Move>, MoveError> {
    let report = cx.validate(&ValidationOptions::default())?;
    if !report.valid {
        return Err(MoveError::NotValid { role: "input" });
    }
    let view = MapView::build(cx)?;
    Ok(legal_moves(cx, &view, &[MoveKind::TypeI, MoveKind::TypeIInverse, MoveKind::TypeII]))
}

/// A successful search: the move sequence and the number of distinct
/// states inserted into the seen-set (start included).
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub path: Vec<Move>,
    pub visited: usize,
}

/// Search outcome within the depth bound.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(SearchResult),
    NotFound { visited: usize },
}

/// Breadth-first search for a shortest move sequence turning `src` into a
/// complex isomorphic to `dst`, using only `kinds`, up to `max_depth`
/// moves. States are canonical codes, so isomorphic complexes reached
/// along different branches are merged; expansion order is deterministic.
/// The found path is replayed against `src` before being returned.
pub fn search_path(
    src: &IntersectionComplex,
    dst: &IntersectionComplex,
    max_depth: usize,
    kinds: &[MoveKind],
) -> Result<SearchOutcome, MoveError> {
    if !src.validate(&ValidationOptions::default())?.valid {
        return Err(MoveError::NotValid { role: "source" });
    }
    if !dst.validate(&ValidationOptions::default())?.valid {
        return Err(MoveError::NotValid { role: "target" });
    }
    let (dsrc, ddst) = (src.degree()?, dst.degree()?);
    if dsrc != ddst {
        return Err(MoveError::DegreeMismatch { src: dsrc, dst: ddst });
    }

    let target = canonical_form(dst)?;
    let start = canonical_form(src)?;
    let mut parents: HashMap<CanonicalCode, Option<(CanonicalCode, Move)>> = HashMap::new();
    parents.insert(start.clone(), None);
    if start == target {
        return Ok(SearchOutcome::Found(SearchResult { path: Vec::new(), visited: 1 }));
    }

    let mut frontier = vec![(start, src.clone())];
    for _ in 0..max_depth {
        let mut next_frontier = Vec::new();
        for (code, cx) in &frontier {
            let view = MapView::build(cx)?;
            for mv in legal_moves(cx, &view, kinds) {
                let stepped = apply_move(cx, &mv)?;
                let stepped_code = canonical_form(&stepped)?;
                if parents.contains_key(&stepped_code) {
                    continue;
                }
                parents.insert(stepped_code.clone(), Some((code.clone(), mv)));
                if stepped_code == target {
                    let path = reconstruct(&parents, &stepped_code);
                    let replayed = path
                        .iter()
                        .try_fold(src.clone(), |cx, mv| apply_move(&cx, mv))?;
                    if canonical_form(&replayed)? != target {
                        return Err(MoveError::ReplayMismatch);
                    }
                    return Ok(SearchOutcome::Found(SearchResult { path, visited: parents.len() }));
                }
                next_frontier.push((stepped_code, stepped));
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    Ok(SearchOutcome::NotFound { visited: parents.len() })
}

fn reconstruct(
    parents: &HashMap<CanonicalCode, Option<(CanonicalCode, Move)>>,
    end: &CanonicalCode,
) -> Vec<Move> {
    let mut path = Vec::new();
    let mut cursor = end.clone();
    while let Some(Some((prev, mv))) = parents.get(&cursor) {
        path.push(mv.clone());
        cursor = prev.clone();
    }
    path.reverse();
    path
}

/// One step of a move script.
///
/// Scripts are JSON arrays of objects tagged by `kind`: `"I"`, `"I_inv"`
/// and `"II"` take an `edge`; `"blowup"` takes `edge`, `side`, and an
/// optional `count` (default 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ScriptStep {
    #[serde(rename = "I")]
    TypeI { edge: String },
    #[serde(rename = "I_inv")]
    TypeIInverse { edge: String },
    #[serde(rename = "II")]
    TypeII { edge: String },
    #[serde(rename = "blowup")]
    BlowUp {
        edge: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        side: Option<Side>,
        #[serde(default = "default_count")]
        count: u32,
    },
}

fn default_count() -> u32 {
    1
}

impl std::fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScriptStep::TypeI { edge } => write!(f, "I {edge}"),
            ScriptStep::TypeIInverse { edge } => write!(f, "I_inv {edge}"),
            ScriptStep::TypeII { edge } => write!(f, "II {edge}"),
            ScriptStep::BlowUp { edge, side, count } => match side {
                Some(s) => write!(f, "blowup {edge} side {s} x{count}"),
                None => write!(f, "blowup {edge} x{count}"),
            },
        }
    }
}

/// Parses a move script.
pub fn parse_script(text: &str) -> Result<Vec<ScriptStep>, MoveError> {
    serde_json::from_str(text).map_err(|e| MoveError::ScriptSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Applies one script step.
pub fn apply_step(cx: &IntersectionComplex, step: &ScriptStep) -> Result<IntersectionComplex, MoveError> {
    match step {
        ScriptStep::TypeI { edge } => apply_type1(cx, edge, false),
        ScriptStep::TypeIInverse { edge } => apply_type1(cx, edge, true),
        ScriptStep::TypeII { edge } => apply_type2(cx, edge),
        ScriptStep::BlowUp { edge, side, count } => {
            let side = side.ok_or(MoveError::MissingSide)?;
            blow_up_edge_side(cx, edge, side, *count)
        }
    }
}

/// Replays a script. Failures carry the 1-based step index. When
/// `validate_each` is set, the complex must pass full validation after
/// every step (blow-up scripts need it off until the complex is
/// rebalanced).
pub fn replay_script(
    cx: &IntersectionComplex,
    steps: &[ScriptStep],
    validate_each: bool,
) -> Result<IntersectionComplex, MoveError> {
    let mut current = cx.clone();
    for (i, step) in steps.iter().enumerate() {
        let step_no = i + 1;
        current = apply_step(&current, step)
            .map_err(|e| MoveError::StepFailed { step: step_no, source: Box::new(e) })?;
        if validate_each {
            let report = current
                .validate(&ValidationOptions::default())
                .map_err(|e| MoveError::StepFailed { step: step_no, source: Box::new(e.into()) })?;
            if !report.valid {
                return Err(MoveError::InvalidAfterStep { step: step_no });
            }
        }
    }
    Ok(current)
}
