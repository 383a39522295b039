//! Labeled intersection complexes on the 2-sphere.
//!
//! A complex is a polygonal cell structure: faces glued in pairs along
//! labeled edges. Each face is a cyclic list of darts, a dart being one
//! side (`a` or `b`) of one edge; every edge appears in exactly two face
//! boundaries, once per side. Each side carries an integer label (the
//! self-intersection of the double curve inside the component on that
//! side) and the edge may be flagged nodal.
//!
//! Vertices are never stored. With sigma the next-dart-in-face permutation
//! and alpha the swap-to-the-other-side involution, the orbits of
//! alpha∘sigma are exactly the vertices of the glued surface, so vertex
//! counts, valences, and the Euler characteristic all fall out of the two
//! permutations.

use std::collections::HashMap;
use std::fmt;

use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which side of an edge a dart lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "a"),
            Side::B => write!(f, "b"),
        }
    }
}

/// One side of one edge, as it occurs in a face boundary.
///
/// Serialized as a two-element array `["edge-id", "a"]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: String,
    pub side: Side,
}

impl Dart {
    pub fn new(edge: impl Into<String>, side: Side) -> Dart {
        Dart { edge: edge.into(), side }
    }
}

impl Serialize for Dart {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.edge)?;
        seq.serialize_element(&self.side)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Dart {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Dart, D::Error> {
        let (edge, side) = <(String, Side)>::deserialize(deserializer)?;
        Ok(Dart { edge, side })
    }
}

/// An edge of the complex: a double curve with one label per side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub label_a: i64,
    pub label_b: i64,
    /// Nodal double curves square to 0 instead of -2 under the triple
    /// point formula.
    #[serde(default, skip_serializing_if = "is_false")]
    pub nodal: bool,
}

fn is_false(b: &bool) -> bool {
    !b
}

impl EdgeRecord {
    pub fn label(&self, side: Side) -> i64 {
        match side {
            Side::A => self.label_a,
            Side::B => self.label_b,
        }
    }

    pub fn label_mut(&mut self, side: Side) -> &mut i64 {
        match side {
            Side::A => &mut self.label_a,
            Side::B => &mut self.label_b,
        }
    }

    pub fn label_sum(&self) -> i64 {
        self.label_a + self.label_b
    }
}

/// A face: a 2-cell with a cyclic boundary of darts, counterclockwise as
/// seen from outside the sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Face {
    pub id: String,
    pub boundary: Vec<Dart>,
}

/// Free-form metadata carried by a complex file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    /// Degree the file claims for the complex; checked against the
    /// computed degree during validation (mismatch is a warning).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_degree: Option<i64>,
    /// Carried through untouched; nothing in the combinatorics can
    /// verify it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_index: Option<i64>,
}

/// A labeled intersection complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionComplex {
    pub meta: Meta,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<Face>,
}

/// Errors raised while parsing or interrogating a complex.
#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("duplicate edge id {id}")]
    DuplicateEdgeId { id: String },
    #[error("duplicate face id {id}")]
    DuplicateFaceId { id: String },
    #[error("face {face} has an empty boundary")]
    EmptyBoundary { face: String },
    #[error("face {face} references unknown edge {edge}")]
    DanglingEdge { face: String, edge: String },
    #[error("edge {edge} referenced {count} time{}", if *count == 1 { "" } else { "s" })]
    EdgeRefCount { edge: String, count: usize },
    #[error("edge {edge} referenced twice on the same side (side a {a_count} time(s), side b {b_count} time(s))")]
    EdgeSideCounts { edge: String, a_count: usize, b_count: usize },
    #[error("complex is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("surface is not a sphere (Euler characteristic {euler})")]
    NotSphere { euler: i64 },
    #[error("vertex {vertex} has {corners} corners, expected 3")]
    NotTrivalent { vertex: String, corners: usize },
    #[error("unknown edge {edge}")]
    UnknownEdge { edge: String },
}

/// Outcome of the triple point formula on a single edge.
///
/// A smooth double curve must have its two labels sum to -2; a nodal one
/// must have them sum to 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriplePointOutcome {
    Pass,
    Fail { expected: i64, got: i64 },
}

impl TriplePointOutcome {
    pub fn passed(self) -> bool {
        matches!(self, TriplePointOutcome::Pass)
    }
}

/// Checks the triple point formula on one edge.
pub fn triple_point_check(edge: &EdgeRecord) -> TriplePointOutcome {
    let expected = if edge.nodal { 0 } else { -2 };
    let got = edge.label_sum();
    if got == expected {
        TriplePointOutcome::Pass
    } else {
        TriplePointOutcome::Fail { expected, got }
    }
}

/// Indexed permutation view of a complex.
///
/// Darts are numbered face-major in boundary order. `sigma` advances one
/// step along a face boundary, `alpha` jumps to the same edge's other
/// side, and the orbits of `alpha[sigma[_]]` are the vertices. Building
/// the view performs all structural checks: ids unique, no dangling edge
/// references, every edge used exactly once per side.
#[derive(Debug)]
pub(crate) struct MapView {
    pub ndarts: usize,
    pub dart_face: Vec<usize>,
    pub dart_edge: Vec<usize>,
    pub dart_side: Vec<Side>,
    pub face_start: Vec<usize>,
    pub sigma: Vec<usize>,
    pub sigma_inv: Vec<usize>,
    pub alpha: Vec<usize>,
    /// Per edge: the dart on side a, the dart on side b.
    pub edge_dart: Vec<[usize; 2]>,
    pub edge_index: HashMap<String, usize>,
}

impl MapView {
    pub fn build(cx: &IntersectionComplex) -> Result<MapView, ComplexError> {
        let mut edge_index = HashMap::new();
        for (i, e) in cx.edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateEdgeId { id: e.id.clone() });
            }
        }
        let mut face_ids = HashMap::new();
        for (i, f) in cx.faces.iter().enumerate() {
            if face_ids.insert(f.id.clone(), i).is_some() {
                return Err(ComplexError::DuplicateFaceId { id: f.id.clone() });
            }
        }

        let ndarts = cx.faces.iter().map(|f| f.boundary.len()).sum();
        let mut dart_face = Vec::with_capacity(ndarts);
        let mut dart_edge = Vec::with_capacity(ndarts);
        let mut dart_side = Vec::with_capacity(ndarts);
        let mut face_start = Vec::with_capacity(cx.faces.len());
        let mut sigma = Vec::with_capacity(ndarts);
        let mut occurrences: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; cx.edges.len()];

        for (fi, face) in cx.faces.iter().enumerate() {
            if face.boundary.is_empty() {
                return Err(ComplexError::EmptyBoundary { face: face.id.clone() });
            }
            let start = dart_face.len();
            face_start.push(start);
            let len = face.boundary.len();
            for (pos, dart) in face.boundary.iter().enumerate() {
                let ei = *edge_index.get(&dart.edge).ok_or_else(|| ComplexError::DanglingEdge {
                    face: face.id.clone(),
                    edge: dart.edge.clone(),
                })?;
                let d = start + pos;
                dart_face.push(fi);
                dart_edge.push(ei);
                dart_side.push(dart.side);
                occurrences[ei][dart.side.index()].push(d);
                sigma.push(start + (pos + 1) % len);
            }
        }

        let mut edge_dart = Vec::with_capacity(cx.edges.len());
        for (ei, occ) in occurrences.iter().enumerate() {
            let (na, nb) = (occ[0].len(), occ[1].len());
            if na + nb != 2 {
                return Err(ComplexError::EdgeRefCount {
                    edge: cx.edges[ei].id.clone(),
                    count: na + nb,
                });
            }
            if na != 1 {
                return Err(ComplexError::EdgeSideCounts {
                    edge: cx.edges[ei].id.clone(),
                    a_count: na,
                    b_count: nb,
                });
            }
            edge_dart.push([occ[0][0], occ[1][0]]);
        }

        let mut alpha = vec![0usize; ndarts];
        for &[da, db] in &edge_dart {
            alpha[da] = db;
            alpha[db] = da;
        }
        let mut sigma_inv = vec![0usize; ndarts];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }

        Ok(MapView {
            ndarts,
            dart_face,
            dart_edge,
            dart_side,
            face_start,
            sigma,
            sigma_inv,
            alpha,
            edge_dart,
            edge_index,
        })
    }

    pub fn dart_pos(&self, d: usize) -> usize {
        d - self.face_start[self.dart_face[d]]
    }

    /// Vertices as orbits of alpha∘sigma, each orbit listed from its
    /// smallest dart, orbits ordered by smallest dart.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.ndarts];
        let mut orbits = Vec::new();
        for d0 in 0..self.ndarts {
            if seen[d0] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                seen[d] = true;
                orbit.push(d);
                d = self.alpha[self.sigma[d]];
                if d == d0 {
                    break;
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Connected components of the dart set under sigma and alpha,
    /// each listed in discovery order from its smallest dart.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.ndarts];
        let mut comps = Vec::new();
        for d0 in 0..self.ndarts {
            if seen[d0] {
                continue;
            }
            let mut comp = vec![d0];
            seen[d0] = true;
            let mut head = 0;
            while head < comp.len() {
                let d = comp[head];
                head += 1;
                for n in [self.sigma[d], self.alpha[d]] {
                    if !seen[n] {
                        seen[n] = true;
                        comp.push(n);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }
}

/// Options controlling [`IntersectionComplex::validate`].
#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    /// Accept edges both of whose sides lie on the same face (warning
    /// instead of failure). On by default.
    pub allow_self_glued: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { allow_self_glued: true }
    }
}

/// Per-edge triple point result inside a validation report.
#[derive(Clone, Debug, Serialize)]
pub struct TriplePointEntry {
    pub edge: String,
    pub nodal: bool,
    pub sum: i64,
    pub expected: i64,
    pub pass: bool,
}

/// A vertex that breaks trivalency.
#[derive(Clone, Debug, Serialize)]
pub struct VertexInfo {
    pub vertex: String,
    pub corners: usize,
}

/// Everything `validate` finds out about a complex.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub face_count: usize,
    pub edge_count: usize,
    pub vertex_count: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub trivalent: bool,
    pub nontrivalent_vertices: Vec<VertexInfo>,
    pub triple_point: Vec<TriplePointEntry>,
    pub triple_point_failures: usize,
    pub self_glued_edges: Vec<String>,
    pub warnings: Vec<String>,
    /// Overall verdict: sphere, connected, trivalent, every edge passes
    /// the triple point formula, self-glued edges only if allowed.
    pub valid: bool,
    /// Vertex count, present when the verdict is positive.
    pub degree: Option<i64>,
}

impl IntersectionComplex {
    /// V - E + F of the glued surface.
    pub fn euler_characteristic(&self) -> Result<i64, ComplexError> {
        let view = MapView::build(self)?;
        let v = view.vertices().len() as i64;
        Ok(v - self.edges.len() as i64 + self.faces.len() as i64)
    }

    /// Full validation: structure, topology, trivalency, triple point
    /// formula on every edge. Structural breakage (bad ids, wrong edge
    /// reference counts) is an `Err`; everything else lands in the
    /// report.
    pub fn validate(&self, options: &ValidationOptions) -> Result<ValidationReport, ComplexError> {
        let view = MapView::build(self)?;
        let vertices = view.vertices();
        let vertex_count = vertices.len();
        let euler = vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64;
        let connected = view.components().len() <= 1;

        let mut nontrivalent = Vec::new();
        for (i, orbit) in vertices.iter().enumerate() {
            if orbit.len() != 3 {
                nontrivalent.push(VertexInfo { vertex: format!("v{i}"), corners: orbit.len() });
            }
        }
        let trivalent = nontrivalent.is_empty();

        let mut triple_point = Vec::new();
        let mut failures = 0;
        for e in &self.edges {
            let expected = if e.nodal { 0 } else { -2 };
            let sum = e.label_sum();
            let pass = sum == expected;
            if !pass {
                failures += 1;
            }
            triple_point.push(TriplePointEntry {
                edge: e.id.clone(),
                nodal: e.nodal,
                sum,
                expected,
                pass,
            });
        }

        let mut self_glued = Vec::new();
        for (ei, &[da, db]) in view.edge_dart.iter().enumerate() {
            if view.dart_face[da] == view.dart_face[db] {
                self_glued.push(self.edges[ei].id.clone());
            }
        }

        let mut warnings = Vec::new();
        for id in &self_glued {
            warnings.push(format!("edge {id} is glued to itself (both sides on one face)"));
        }

        let valid = connected
            && euler == 2
            && trivalent
            && failures == 0
            && (options.allow_self_glued || self_glued.is_empty());

        let degree = if valid { Some(vertex_count as i64) } else { None };
        if let (Some(claimed), Some(actual)) = (self.meta.claimed_degree, degree) {
            if claimed != actual {
                warnings.push(format!(
                    "meta claims degree {claimed} but the complex has degree {actual}"
                ));
            }
        }

        Ok(ValidationReport {
            face_count: self.faces.len(),
            edge_count: self.edges.len(),
            vertex_count,
            euler_characteristic: euler,
            connected,
            trivalent,
            nontrivalent_vertices: nontrivalent,
            triple_point,
            triple_point_failures: failures,
            self_glued_edges: self_glued,
            warnings,
            valid,
            degree,
        })
    }

    /// Number of triple points, i.e. vertices. Requires a connected
    /// trivalent sphere; labels play no role.
    pub fn degree(&self) -> Result<i64, ComplexError> {
        let view = MapView::build(self)?;
        let comps = view.components().len();
        if comps > 1 {
            return Err(ComplexError::Disconnected { components: comps });
        }
        let vertices = view.vertices();
        let euler = vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64;
        if euler != 2 {
            return Err(ComplexError::NotSphere { euler });
        }
        for (i, orbit) in vertices.iter().enumerate() {
            if orbit.len() != 3 {
                return Err(ComplexError::NotTrivalent {
                    vertex: format!("v{i}"),
                    corners: orbit.len(),
                });
            }
        }
        Ok(vertices.len() as i64)
    }

    /// The dual complex: one face per vertex of `self` (walked in
    /// rotation order), one vertex per face of `self`. Edge ids, labels,
    /// and nodal flags carry over unchanged. Dualizing a valid complex
    /// yields the triangulation of the sphere whose triangles are the
    /// triple points; dualizing twice gives back an isomorphic complex.
    pub fn dualize(&self) -> Result<IntersectionComplex, ComplexError> {
        let view = MapView::build(self)?;
        let mut faces = Vec::new();
        for (i, orbit) in view.vertices().iter().enumerate() {
            let boundary = orbit
                .iter()
                .map(|&d| Dart::new(self.edges[view.dart_edge[d]].id.clone(), view.dart_side[d]))
                .collect();
            faces.push(Face { id: format!("v{i}"), boundary });
        }
        Ok(IntersectionComplex {
            meta: Meta { name: format!("dual({})", self.meta.name), ..Meta::default() },
            edges: self.edges.clone(),
            faces,
        })
    }

    /// Serializes in the canonical file layout (two-space pretty JSON,
    /// trailing newline). Parsing and reserializing a file in this layout
    /// reproduces it byte for byte.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("complex serialization");
        s.push('\n');
        s
    }
}

/// Parses a complex from JSON and runs the structural and topological
/// checks: unique ids, every boundary dart resolvable, every edge used
/// exactly once per side, connected, Euler characteristic 2. Label
/// conditions (trivalency, triple point formula) are left to `validate`
/// so that defective complexes can still be loaded and inspected.
pub fn parse_complex(text: &str) -> Result<IntersectionComplex, ComplexError> {
    let cx: IntersectionComplex = serde_json::from_str(text).map_err(|e| ComplexError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let view = MapView::build(&cx)?;
    let comps = view.components().len();
    if comps != 1 {
        return Err(ComplexError::Disconnected { components: comps });
    }
    let euler =
        view.vertices().len() as i64 - cx.edges.len() as i64 + cx.faces.len() as i64;
    if euler != 2 {
        return Err(ComplexError::NotSphere { euler });
    }
    Ok(cx)
}
