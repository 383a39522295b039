//! Junior simplices, unimodular triangulations, and star fans.
//!
//! A finite abelian subgroup G of SL(3, C) acting diagonally is given by
//! generators 1/r (w1, w2, w3) with w1 + w2 + w3 ≡ 0 mod r. The overlattice
//! N = Z³ + Σ Z·(w/r) meets the plane x + y + z = 1 in an affine lattice
//! triangle (the junior simplex) whose lattice points biject with the
//! junior conjugacy classes of G. A crepant resolution of C³/G is a
//! unimodular triangulation of that triangle using all its lattice points;
//! the exceptional surface over an interior point is the toric surface of
//! the star fan at the point, and the self-intersection numbers read off
//! consecutive rays are the double-curve labels of that component.
//!
//! Everything here is exact `i64` arithmetic: Hermite-style lattice bases,
//! integer kernels, cross products. No floating point.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice point or vector in Z². Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: i64,
    pub y: i64,
}

impl Point2 {
    pub const fn new(x: i64, y: i64) -> Point2 {
        Point2 { x, y }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Point2, D::Error> {
        let (x, y) = <(i64, i64)>::deserialize(deserializer)?;
        Ok(Point2 { x, y })
    }
}

/// One diagonal generator 1/r (w1, w2, w3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientGenerator {
    pub order: i64,
    pub weights: [i64; 3],
}

/// A finite abelian group of diagonal SL(3) symmetries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuotientData {
    pub generators: Vec<QuotientGenerator>,
}

/// The level-one slice of the overlattice: the three corner images of the
/// standard basis vectors, every lattice point of the closed triangle
/// (lexicographically sorted), and the group order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuniorSimplex {
    pub corners: [Point2; 3],
    pub points: Vec<Point2>,
    pub group_order: i64,
}

/// A triangulation of a junior simplex: triangles are index triples into
/// `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation2D {
    pub points: Vec<Point2>,
    pub corners: [Point2; 3],
    pub group_order: i64,
    pub triangles: Vec<[usize; 3]>,
}

/// A complete fan in Z², rays in counterclockwise cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan2D {
    pub rays: Vec<Point2>,
}

/// Errors for the lattice side of the world.
#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("generator order must be positive, found {order}")]
    DegenerateGenerator { order: i64 },
    #[error("generator 1/{order} ({w0}, {w1}, {w2}) is not special linear: weights do not sum to 0 mod {order}")]
    NotCalabiYau { order: i64, w0: i64, w1: i64, w2: i64 },
    #[error("triangle {triangle} references point index {index}, but there are only {points} points")]
    TriangleIndexOutOfRange { triangle: usize, index: usize, points: usize },
    #[error("triangulation fails validation")]
    InvalidTriangulation,
    #[error("point {point} is not a point of the triangulation")]
    UnknownPoint { point: Point2 },
    #[error("point {point} is not interior to the junior simplex")]
    PointNotInterior { point: Point2 },
    #[error("points {p} and {q} are not joined by an edge of the triangulation")]
    PointsNotAdjacent { p: Point2, q: Point2 },
    #[error("fan has {count} rays, need at least 3")]
    TooFewRays { count: usize },
    #[error("ray {index} is not primitive")]
    RayNotPrimitive { index: usize },
    #[error("cone between rays {index} and {next} has determinant {det}, not ±1")]
    NonUnimodularCone { index: usize, next: usize, det: i64 },
    #[error("rays are not consistently oriented")]
    MixedOrientation,
    #[error("rays wind {turns} times around the origin, not once")]
    NotComplete { turns: usize },
    #[error("resolution file lists {given} points but the junior simplex has {computed}; first difference at {first_diff}")]
    PointSetMismatch { given: usize, computed: usize, first_diff: Point2 },
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Extended gcd: returns (g, x, y) with a·x + b·y = g, g ≥ 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn div_exact(a: i64, b: i64) -> i64 {
    assert!(b != 0 && a % b == 0, "inexact lattice division {a}/{b}");
    a / b
}

/// Twice the signed area of the triangle (o, a, b).
fn cross(o: Point2, a: Point2, b: Point2) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn det2(u: Point2, v: Point2) -> i64 {
    u.x * v.y - u.y * v.x
}

/// Triangular basis of the full-rank lattice spanned by `rows`:
/// rows (d1, 0, 0), (*, d2, 0), (*, *, d3) with positive diagonal.
fn lattice_basis_3(rows: &[[i64; 3]]) -> [[i64; 3]; 3] {
    let mut work: Vec<[i64; 3]> = rows.to_vec();
    let mut basis = [[0i64; 3]; 3];
    for coord in (0..3).rev() {
        let mut pivot: Option<[i64; 3]> = None;
        for row in work.iter_mut() {
            if row[coord] == 0 {
                continue;
            }
            match pivot {
                None => {
                    pivot = Some(*row);
                    *row = [0; 3];
                }
                Some(p) => {
                    let (g, x, y) = ext_gcd(p[coord], row[coord]);
                    let (qp, qr) = (p[coord] / g, row[coord] / g);
                    let mut newp = [0i64; 3];
                    let mut newr = [0i64; 3];
                    for k in 0..3 {
                        newp[k] = x * p[k] + y * row[k];
                        newr[k] = qp * row[k] - qr * p[k];
                    }
                    pivot = Some(newp);
                    *row = newr;
                }
            }
        }
        let mut p = pivot.expect("lattice has full rank");
        if p[coord] < 0 {
            for v in &mut p {
                *v = -*v;
            }
        }
        basis[coord] = p;
    }
    basis
}

/// Basis of the integer kernel of the linear form `l` on Z³ (rank 2 when
/// l ≠ 0). The rows are coefficient vectors.
fn kernel_of_form(l: [i64; 3]) -> [[i64; 3]; 2] {
    let mut u = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut t = l;
    for i in 1..3 {
        if t[i] == 0 {
            continue;
        }
        let (g, x, y) = ext_gcd(t[0], t[i]);
        let (q0, qi) = (t[0] / g, t[i] / g);
        let (r0, ri) = (u[0], u[i]);
        for k in 0..3 {
            u[0][k] = x * r0[k] + y * ri[k];
            u[i][k] = q0 * ri[k] - qi * r0[k];
        }
        t[0] = g;
        t[i] = 0;
    }
    assert!(t[0] != 0, "zero form has no rank-2 kernel");
    [u[1], u[2]]
}

/// Hermite basis [[a, 0], [c, d]] (a, d > 0, 0 ≤ c < a) of the rank-2
/// lattice spanned by `rows`.
fn hnf2(rows: &[[i64; 2]]) -> (i64, i64, i64) {
    let mut work: Vec<[i64; 2]> = rows.to_vec();
    // Bring the y-gcd into a single row.
    let mut pivot: Option<[i64; 2]> = None;
    for row in work.iter_mut() {
        if row[1] == 0 {
            continue;
        }
        match pivot {
            None => {
                pivot = Some(*row);
                *row = [0; 2];
            }
            Some(p) => {
                let (g, x, y) = ext_gcd(p[1], row[1]);
                let (qp, qr) = (p[1] / g, row[1] / g);
                let newp = [x * p[0] + y * row[0], g];
                let newr = [qp * row[0] - qr * p[0], 0];
                pivot = Some(newp);
                *row = newr;
            }
        }
    }
    let mut p = pivot.expect("lattice has rank 2");
    if p[1] < 0 {
        p = [-p[0], -p[1]];
    }
    let mut a = 0;
    for row in &work {
        a = gcd(a, row[0]);
    }
    assert!(a > 0, "lattice has rank 2");
    let c = p[0].rem_euclid(a);
    (a, c, p[1])
}

/// Computes the junior simplex of a quotient.
///
/// The overlattice N = Z³ + Σ Z(w/r) is scaled by D = lcm of the orders
/// so it sits inside Z³; the group order is D³ over the covolume of the
/// scaled lattice. Coordinates on the level-one plane come from a Hermite
/// basis of the sum-zero sublattice, so the same group always yields the
/// same picture. Generators must be special linear (weights summing to 0
/// mod r): without that condition the crepant-resolution bookkeeping this
/// feeds is meaningless.
pub fn junior_points(q: &QuotientData) -> Result<JuniorSimplex, LatticeError> {
    let mut reduced = Vec::new();
    let mut d: i64 = 1;
    for g in &q.generators {
        if g.order <= 0 {
            return Err(LatticeError::DegenerateGenerator { order: g.order });
        }
        let w: Vec<i64> = g.weights.iter().map(|&w| w.rem_euclid(g.order)).collect();
        if (w[0] + w[1] + w[2]) % g.order != 0 {
            return Err(LatticeError::NotCalabiYau {
                order: g.order,
                w0: g.weights[0],
                w1: g.weights[1],
                w2: g.weights[2],
            });
        }
        d = lcm(d, g.order);
        reduced.push((g.order, w));
    }

    let mut rows: Vec<[i64; 3]> = vec![[d, 0, 0], [0, d, 0], [0, 0, d]];
    for (r, w) in &reduced {
        let m = d / r;
        rows.push([m * w[0], m * w[1], m * w[2]]);
    }
    let basis = lattice_basis_3(&rows);
    let det = basis[0][0] as i128 * basis[1][1] as i128 * basis[2][2] as i128;
    let d3 = (d as i128).pow(3);
    assert!(d3 % det == 0, "covolume must divide D^3");
    let group_order = (d3 / det) as i64;

    // Sum-zero sublattice, projected to (x, y).
    let sums = [
        basis[0][0] + basis[0][1] + basis[0][2],
        basis[1][0] + basis[1][1] + basis[1][2],
        basis[2][0] + basis[2][1] + basis[2][2],
    ];
    let kernel = kernel_of_form(sums);
    let mut proj = [[0i64; 2]; 2];
    for (j, coeffs) in kernel.iter().enumerate() {
        for (i, &c) in coeffs.iter().enumerate() {
            proj[j][0] += c * basis[i][0];
            proj[j][1] += c * basis[i][1];
        }
    }
    let (a, c, dd) = hnf2(&proj);

    // phi maps a level-one overlattice point with scaled coordinates m
    // (sum m = D) to the Hermite coordinates of (m.x, m.y).
    let phi = |mx: i64, my: i64| -> Point2 {
        let t = div_exact(my, dd);
        let s = div_exact(mx - t * c, a);
        Point2::new(s, t)
    };
    let corners = [phi(d, 0), phi(0, d), Point2::new(0, 0)];
    assert_eq!(
        det2(corners[0] - corners[2], corners[1] - corners[2]).abs(),
        group_order,
        "junior triangle area must equal the group order"
    );

    let orient = cross(corners[0], corners[1], corners[2]).signum();
    let inside = |p: Point2| -> bool {
        cross(corners[0], corners[1], p) * orient >= 0
            && cross(corners[1], corners[2], p) * orient >= 0
            && cross(corners[2], corners[0], p) * orient >= 0
    };
    let xs = corners.iter().map(|p| p.x);
    let ys = corners.iter().map(|p| p.y);
    let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
    let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
    let mut points = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = Point2::new(x, y);
            if inside(p) {
                points.push(p);
            }
        }
    }
    points.sort();
    Ok(JuniorSimplex { corners, points, group_order })
}

fn strictly_inside(corners: &[Point2; 3], p: Point2) -> bool {
    let orient = cross(corners[0], corners[1], corners[2]).signum();
    cross(corners[0], corners[1], p) * orient > 0
        && cross(corners[1], corners[2], p) * orient > 0
        && cross(corners[2], corners[0], p) * orient > 0
}

/// Lattice points strictly inside the junior triangle, lexicographically
/// sorted. These index the exceptional surfaces of a crepant resolution.
pub fn interior_points(j: &JuniorSimplex) -> Vec<Point2> {
    j.points
        .iter()
        .copied()
        .filter(|&p| strictly_inside(&j.corners, p))
        .collect()
}

/// Validation report for a triangulation.
#[derive(Clone, Debug, Serialize)]
pub struct TriangulationReport {
    pub triangle_count: usize,
    pub expected_count: i64,
    /// Indices of triangles whose normalized area is not 1.
    pub non_unimodular: Vec<usize>,
    /// Pairwise open interiors disjoint.
    pub disjoint: bool,
    /// Exact cover of the junior triangle: disjoint, every triangle inside,
    /// areas summing to the whole.
    pub covers: bool,
    pub count_matches: bool,
    pub valid: bool,
}

fn ccw(points: &[Point2], tri: [usize; 3]) -> [Point2; 3] {
    let [i, j, k] = tri;
    let (p, q, r) = (points[i], points[j], points[k]);
    if cross(p, q, r) < 0 {
        [p, r, q]
    } else {
        [p, q, r]
    }
}

/// True when some edge line of `t` has all of `u` weakly on its outside.
fn edge_separates(t: &[Point2; 3], u: &[Point2; 3]) -> bool {
    (0..3).any(|i| {
        let (p, q) = (t[i], t[(i + 1) % 3]);
        u.iter().all(|&w| cross(p, q, w) <= 0)
    })
}

/// Exact test: do two ccw triangles have disjoint open interiors?
/// Convexity makes a separating line among the six edge lines sufficient.
fn interiors_disjoint(t: &[Point2; 3], u: &[Point2; 3]) -> bool {
    edge_separates(t, u) || edge_separates(u, t)
}

/// Checks that a triangulation is a crepant resolution of its junior
/// simplex: every triangle unimodular, interiors pairwise disjoint, the
/// union exactly the junior triangle, and the triangle count equal to the
/// group order. Index errors are hard errors; everything else goes into
/// the report.
pub fn validate_triangulation(t: &Triangulation2D) -> Result<TriangulationReport, LatticeError> {
    for (ti, tri) in t.triangles.iter().enumerate() {
        for &ix in tri {
            if ix >= t.points.len() {
                return Err(LatticeError::TriangleIndexOutOfRange {
                    triangle: ti,
                    index: ix,
                    points: t.points.len(),
                });
            }
        }
    }

    let mut non_unimodular = Vec::new();
    let mut oriented = Vec::with_capacity(t.triangles.len());
    let mut area_sum: i64 = 0;
    for (ti, &tri) in t.triangles.iter().enumerate() {
        let c = ccw(&t.points, tri);
        let a2 = cross(c[0], c[1], c[2]);
        if a2 != 1 {
            non_unimodular.push(ti);
        }
        area_sum += a2.abs();
        oriented.push(c);
    }

    let big = {
        let [p, q, r] = t.corners;
        if cross(p, q, r) < 0 {
            [p, r, q]
        } else {
            [p, q, r]
        }
    };
    let total = cross(big[0], big[1], big[2]);
    let all_inside = oriented.iter().all(|tri| {
        tri.iter().all(|&v| {
            (0..3).all(|i| cross(big[i], big[(i + 1) % 3], v) >= 0)
        })
    });

    let mut disjoint = true;
    'outer: for i in 0..oriented.len() {
        for j in i + 1..oriented.len() {
            if !interiors_disjoint(&oriented[i], &oriented[j]) {
                disjoint = false;
                break 'outer;
            }
        }
    }

    let covers = disjoint && all_inside && area_sum == total;
    let count_matches = t.triangles.len() as i64 == t.group_order;
    let valid = non_unimodular.is_empty() && disjoint && covers && count_matches;
    Ok(TriangulationReport {
        triangle_count: t.triangles.len(),
        expected_count: t.group_order,
        non_unimodular,
        disjoint,
        covers,
        count_matches,
        valid,
    })
}

/// Rotates a triple so its smallest index comes first, preserving cyclic
/// order.
fn normalize_triple(t: [usize; 3]) -> [usize; 3] {
    let m = *t.iter().min().unwrap();
    let mut out = t;
    while out[0] != m {
        out.rotate_left(1);
    }
    out
}

/// Deterministic unimodular triangulation using every junior point:
/// recursively split each region at its lexicographically least
/// non-corner point. Leaves are lattice-point-free, hence unimodular.
pub fn pulling_triangulation(j: &JuniorSimplex) -> Triangulation2D {
    let index: HashMap<Point2, usize> =
        j.points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut start = j.corners;
    if cross(start[0], start[1], start[2]) < 0 {
        start.swap(1, 2);
    }

    fn contained(tri: &[Point2; 3], p: Point2) -> bool {
        (0..3).all(|i| cross(tri[i], tri[(i + 1) % 3], p) >= 0)
    }

    fn split(tri: [Point2; 3], pts: &[Point2], out: &mut Vec<[Point2; 3]>) {
        let inner = pts
            .iter()
            .copied()
            .filter(|p| !tri.contains(p))
            .min();
        let Some(v) = inner else {
            out.push(tri);
            return;
        };
        let children: Vec<[Point2; 3]> = if (0..3).all(|i| cross(tri[i], tri[(i + 1) % 3], v) > 0)
        {
            vec![
                [tri[0], tri[1], v],
                [tri[1], tri[2], v],
                [tri[2], tri[0], v],
            ]
        } else {
            let side = (0..3)
                .find(|&i| cross(tri[i], tri[(i + 1) % 3], v) == 0)
                .expect("point inside or on an edge");
            let (p, q, r) = (tri[side], tri[(side + 1) % 3], tri[(side + 2) % 3]);
            vec![[p, v, r], [v, q, r]]
        };
        for child in children {
            let sub: Vec<Point2> = pts.iter().copied().filter(|&p| contained(&child, p)).collect();
            split(child, &sub, out);
        }
    }

    let mut coord_tris = Vec::new();
    split(start, &j.points, &mut coord_tris);

    let mut triangles: Vec<[usize; 3]> = coord_tris
        .into_iter()
        .map(|tri| normalize_triple([index[&tri[0]], index[&tri[1]], index[&tri[2]]]))
        .collect();
    triangles.sort();
    Triangulation2D {
        points: j.points.clone(),
        corners: j.corners,
        group_order: j.group_order,
        triangles,
    }
}

/// The star fan of an interior point: primitive rays to its neighbors in
/// counterclockwise cyclic order, starting at the lexicographically least
/// ray. The triangulation must be valid and `p` interior.
pub fn star_fan(t: &Triangulation2D, p: Point2) -> Result<Fan2D, LatticeError> {
    let report = validate_triangulation(t)?;
    if !report.valid {
        return Err(LatticeError::InvalidTriangulation);
    }
    let pi = t
        .points
        .iter()
        .position(|&q| q == p)
        .ok_or(LatticeError::UnknownPoint { point: p })?;
    if !strictly_inside(&t.corners, p) {
        return Err(LatticeError::PointNotInterior { point: p });
    }

    // Around an interior point the incident ccw triangles chain neighbor
    // to neighbor; one full loop is the star.
    let mut next: HashMap<usize, usize> = HashMap::new();
    for &tri in &t.triangles {
        if !tri.contains(&pi) {
            continue;
        }
        let c = ccw(&t.points, tri);
        let mut idx = [
            t.points.iter().position(|&q| q == c[0]).unwrap(),
            t.points.iter().position(|&q| q == c[1]).unwrap(),
            t.points.iter().position(|&q| q == c[2]).unwrap(),
        ];
        while idx[0] != pi {
            idx.rotate_left(1);
        }
        next.insert(idx[1], idx[2]);
    }
    let count = next.len();
    assert!(count >= 3, "interior point of a valid triangulation has a full star");
    let start = *next
        .keys()
        .min_by_key(|&&i| t.points[i])
        .expect("nonempty star");
    let mut seq = vec![start];
    let mut cur = next[&start];
    while cur != start {
        seq.push(cur);
        if seq.len() > count {
            return Err(LatticeError::InvalidTriangulation);
        }
        cur = next[&cur];
    }
    if seq.len() != count {
        return Err(LatticeError::InvalidTriangulation);
    }

    let mut rays: Vec<Point2> = seq.into_iter().map(|i| t.points[i] - p).collect();
    debug_assert!(rays.iter().all(|r| gcd(r.x, r.y) == 1));
    let min_at = rays
        .iter()
        .enumerate()
        .min_by_key(|&(_, r)| r)
        .map(|(i, _)| i)
        .unwrap();
    rays.rotate_left(min_at);
    Ok(Fan2D { rays })
}

/// Validates a fan (primitive rays, unimodular consecutive cones, single
/// winding) and returns the rays in counterclockwise order.
fn validate_and_orient(f: &Fan2D) -> Result<Vec<Point2>, LatticeError> {
    let n = f.rays.len();
    if n < 3 {
        return Err(LatticeError::TooFewRays { count: n });
    }
    for (i, r) in f.rays.iter().enumerate() {
        if gcd(r.x, r.y) != 1 {
            return Err(LatticeError::RayNotPrimitive { index: i });
        }
    }
    let dets: Vec<i64> = (0..n)
        .map(|i| det2(f.rays[i], f.rays[(i + 1) % n]))
        .collect();
    for (i, &d) in dets.iter().enumerate() {
        if d.abs() != 1 {
            return Err(LatticeError::NonUnimodularCone { index: i, next: (i + 1) % n, det: d });
        }
    }
    let rays: Vec<Point2> = if dets.iter().all(|&d| d == 1) {
        f.rays.clone()
    } else if dets.iter().all(|&d| d == -1) {
        f.rays.iter().rev().copied().collect()
    } else {
        return Err(LatticeError::MixedOrientation);
    };

    // Count passages of the direction (1, 0): each unimodular ccw step
    // turns by less than a half turn, so the winding number is the number
    // of sectors that reach or cross the positive x-axis.
    let east = Point2::new(1, 0);
    let turns = (0..n)
        .filter(|&i| {
            let (u, w) = (rays[i], rays[(i + 1) % n]);
            let lands_on_east = w.y == 0 && w.x > 0;
            lands_on_east || (det2(u, east) > 0 && det2(east, w) > 0)
        })
        .count();
    if turns != 1 {
        return Err(LatticeError::NotComplete { turns });
    }
    Ok(rays)
}

/// Self-intersection numbers of the toric boundary curves: for each ray
/// v_i of a smooth complete fan, the integer a_i with
/// v_{i-1} + v_{i+1} + a_i·v_i = 0, i.e. a_i = det(v_{i+1}, v_{i-1}).
/// Results align with the input ray order.
pub fn toric_self_intersections(f: &Fan2D) -> Result<Vec<i64>, LatticeError> {
    let rays = validate_and_orient(f)?;
    let n = rays.len();
    let mut a: Vec<i64> = (0..n)
        .map(|i| det2(rays[(i + 1) % n], rays[(i + n - 1) % n]))
        .collect();
    if rays[..] != f.rays[..] {
        a.reverse();
    }
    Ok(a)
}

/// Anticanonical degree of the smooth toric surface of a fan: 12 minus
/// the number of rays (equivalently K² = 12 - n, since Σ a_i = 12 - 3n
/// and the boundary cycle has n nodes).
pub fn toric_degree(f: &Fan2D) -> Result<i64, LatticeError> {
    validate_and_orient(f)?;
    Ok(12 - f.rays.len() as i64)
}

/// The two labels of the double curve between adjacent interior points
/// p and q: the self-intersection of the ray q-p in p's star and of p-q
/// in q's star.
pub fn double_curve_labels(
    t: &Triangulation2D,
    p: Point2,
    q: Point2,
) -> Result<(i64, i64), LatticeError> {
    let pi = t.points.iter().position(|&v| v == p);
    let qi = t.points.iter().position(|&v| v == q);
    let adjacent = match (pi, qi) {
        (Some(pi), Some(qi)) => t
            .triangles
            .iter()
            .any(|tri| tri.contains(&pi) && tri.contains(&qi)),
        _ => false,
    };
    if !adjacent {
        return Err(LatticeError::PointsNotAdjacent { p, q });
    }
    let label_at = |from: Point2, to: Point2| -> Result<i64, LatticeError> {
        let star = star_fan(t, from)?;
        let ints = toric_self_intersections(&star)?;
        let dir = to - from;
        let at = star
            .rays
            .iter()
            .position(|&r| r == dir)
            .expect("adjacent point appears in the star");
        Ok(ints[at])
    };
    Ok((label_at(p, q)?, label_at(q, p)?))
}

/// Canonical ray list of a fan under GL(2, Z) and relabeling: minimum,
/// over all cyclic rotations and both orientations, of the rays rewritten
/// in the basis of the first two. Equal outputs mean the fans differ by a
/// lattice automorphism only.
pub fn fan_canonical_form(f: &Fan2D) -> Result<Vec<Point2>, LatticeError> {
    let rays = validate_and_orient(f)?;
    let n = rays.len();
    let mut best: Option<Vec<Point2>> = None;
    for s in 0..n {
        for flip in [false, true] {
            let seq: Vec<Point2> = (0..n)
                .map(|j| {
                    let k = if flip { (s + n - j) % n } else { (s + j) % n };
                    rays[k]
                })
                .collect();
            let (u, w) = (seq[0], seq[1]);
            let den = det2(u, w);
            debug_assert_eq!(den.abs(), 1);
            let cand: Vec<Point2> = seq
                .iter()
                .map(|&r| Point2::new(div_exact(det2(r, w), den), div_exact(det2(u, r), den)))
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    Ok(best.unwrap())
}

/// Do two fans define isomorphic toric surfaces (same rays up to
/// GL(2, Z) and cyclic relabeling)?
pub fn fans_isomorphic(f: &Fan2D, g: &Fan2D) -> Result<bool, LatticeError> {
    Ok(fan_canonical_form(f)? == fan_canonical_form(g)?)
}

/// On-disk description of a quotient and (optionally) a resolution:
/// `{"group": [[r, [w1, w2, w3]], ...], "points": [[x, y], ...],
/// "triangles": [[i, j, k], ...]}` with `points` and `triangles` optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionFile {
    pub group: Vec<(i64, [i64; 3])>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<Vec<[usize; 3]>>,
}

impl ResolutionFile {
    pub fn quotient(&self) -> QuotientData {
        QuotientData {
            generators: self
                .group
                .iter()
                .map(|&(order, weights)| QuotientGenerator { order, weights })
                .collect(),
        }
    }
}

/// Parses a resolution file.
pub fn parse_resolution(text: &str) -> Result<ResolutionFile, LatticeError> {
    serde_json::from_str(text).map_err(|e| LatticeError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Builds the junior simplex and a triangulation from a resolution file.
/// File-supplied points must match the computed junior points as a set
/// (they become the index base); file-supplied triangles are taken as
/// given, otherwise the pulling triangulation is used. The returned flag
/// says whether the triangles came from the file.
pub fn resolution_triangulation(
    file: &ResolutionFile,
) -> Result<(JuniorSimplex, Triangulation2D, bool), LatticeError> {
    let j = junior_points(&file.quotient())?;
    let points: Vec<Point2> = match &file.points {
        Some(pts) => {
            let mut sorted = pts.clone();
            sorted.sort();
            if sorted != j.points {
                let first_diff = sorted
                    .iter()
                    .find(|p| !j.points.contains(p))
                    .or_else(|| j.points.iter().find(|p| !sorted.contains(p)))
                    .copied()
                    .unwrap_or(Point2::new(0, 0));
                return Err(LatticeError::PointSetMismatch {
                    given: pts.len(),
                    computed: j.points.len(),
                    first_diff,
                });
            }
            pts.clone()
        }
        None => j.points.clone(),
    };
    let triangulation = match &file.triangles {
        Some(tris) => Triangulation2D {
            points,
            corners: j.corners,
            group_order: j.group_order,
            triangles: tris.clone(),
        },
        None => pulling_triangulation(&j),
    };
    let from_file = file.triangles.is_some();
    Ok((j, triangulation, from_file))
}
