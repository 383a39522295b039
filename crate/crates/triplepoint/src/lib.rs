//! Exact combinatorial calculus for Type III degenerations of K3 surfaces.
//!
//! A Type III surface is a union of rational surfaces whose double curves
//! form an anticanonical cycle on every component and whose dual structure
//! triangulates the 2-sphere. Everything that matters about such a surface
//! downstairs is discrete: which faces meet along which edges, and the pair
//! of self-intersection numbers carried by each double curve. This crate
//! manipulates that discrete data with exact integer arithmetic.
//!
//! * [`complex`] - labeled polygonal complexes on the sphere: parsing,
//!   validation against the triple point formula, Euler characteristic,
//!   degree, dualization.
//! * [`canonical`] - canonical codes deciding isomorphism of labeled
//!   complexes (orientation-reversing maps included).
//! * [`moves`] - elementary modifications (Type I label shifts, Type II
//!   edge flips), interior blow-ups, move scripts, and breadth-first
//!   search for modification paths between complexes.
//! * [`lattice`] - junior simplices of finite abelian quotient
//!   singularities, unimodular triangulations, star fans, and toric
//!   self-intersection numbers.
//! * [`surfaces`] - the Picard lattice of a rational surface and
//!   numeric/class-level bookkeeping for anticanonical cycles under
//!   blow-ups and blow-downs.
//!
//! All coordinates, labels, and intersection numbers are `i64`. No
//! floating point is used anywhere.

pub mod canonical;
pub mod complex;
pub mod lattice;
pub mod moves;
pub mod surfaces;

pub use canonical::{canonical_form, is_isomorphic, CanonicalCode};
pub use complex::{
    parse_complex, triple_point_check, ComplexError, Dart, EdgeRecord, Face, IntersectionComplex,
    Meta, Side, TriplePointOutcome, ValidationOptions, ValidationReport,
};
pub use lattice::{
    double_curve_labels, fan_canonical_form, fans_isomorphic, interior_points, junior_points,
    parse_resolution, pulling_triangulation, resolution_triangulation, star_fan, toric_degree,
    toric_self_intersections, validate_triangulation, Fan2D, JuniorSimplex, LatticeError, Point2,
    QuotientData, QuotientGenerator, ResolutionFile, Triangulation2D, TriangulationReport,
};
pub use moves::{
    apply_move, enumerate_moves, parse_script, replay_script, search_path, Move, MoveError,
    MoveKind, ScriptStep, SearchOutcome, SearchResult,
};
pub use surfaces::{
    blow_down_cycle, corner_blow_up_cycle, cycle_self_intersection, interior_blow_up_cycle,
    is_anticanonical_cycle, AnticanonicalCycle, DivisorClass, PicardLattice, SurfaceError,
};
