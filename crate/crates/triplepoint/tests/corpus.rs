//! Checks every bundled data file: transcription integrity, validation
//! verdicts, and serialization round-trips.

use std::fs;
use std::path::PathBuf;

use triplepoint::{
    interior_points, parse_complex, parse_resolution, pulling_triangulation, replay_script,
    resolution_triangulation, validate_triangulation, IntersectionComplex, Point2,
    ValidationOptions,
};

fn corpus(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn load(name: &str) -> IntersectionComplex {
    parse_complex(&corpus(name)).unwrap_or_else(|e| panic!("parse {name}: {e}"))
}

#[test]
fn complexes_validate_with_expected_degrees() {
    for (name, degree) in [("fig3.json", 2), ("fig7.json", 4), ("fig9.json", 2), ("cube.json", 8)]
    {
        let cx = load(name);
        let report = cx.validate(&ValidationOptions::default()).unwrap();
        assert!(report.valid, "{name}: {report:?}");
        assert_eq!(report.euler_characteristic, 2, "{name}");
        assert_eq!(report.triple_point_failures, 0, "{name}");
        assert_eq!(report.degree, Some(degree), "{name}");
        assert_eq!(cx.degree().unwrap(), degree, "{name}");
    }
}

#[test]
fn naive_tetrahedron_fails_on_every_edge() {
    let cx = load("tetrahedron_naive.json");
    let report = cx.validate(&ValidationOptions::default()).unwrap();
    assert!(!report.valid);
    assert_eq!(report.triple_point_failures, 6);
    assert!(report.trivalent);
    for entry in &report.triple_point {
        assert_eq!(entry.sum, 2);
        assert_eq!(entry.expected, -2);
        assert!(!entry.pass);
    }
}

#[test]
fn blow_up_script_balances_the_naive_tetrahedron() {
    let cx = load("tetrahedron_naive.json");
    let steps = triplepoint::moves::parse_script(&corpus("scripts/tetrahedron_blowups.json"))
        .unwrap();
    assert_eq!(steps.len(), 12);
    let fixed = replay_script(&cx, &steps, false).unwrap();
    let report = fixed.validate(&ValidationOptions::default()).unwrap();
    assert!(report.valid, "{report:?}");
    assert_eq!(report.degree, Some(4));
    for edge in &fixed.edges {
        assert_eq!((edge.label_a, edge.label_b), (-1, -1), "{}", edge.id);
    }
}

#[test]
fn type1_script_shifts_the_top_edge() {
    let cx = load("fig3.json");
    let steps =
        triplepoint::moves::parse_script(&corpus("scripts/fig3_type1_top.json")).unwrap();
    let moved = replay_script(&cx, &steps, true).unwrap();
    let top = moved.edges.iter().find(|e| e.id == "top").unwrap();
    assert_eq!((top.label_a, top.label_b), (-5, 3));
}

#[test]
fn flip_script_preserves_cube_validity() {
    let cx = load("cube.json");
    let steps = triplepoint::moves::parse_script(&corpus("scripts/cube_flip.json")).unwrap();
    let flipped = replay_script(&cx, &steps, true).unwrap();
    assert_eq!(flipped.degree().unwrap(), 8);
    assert!(!triplepoint::is_isomorphic(&cx, &flipped).unwrap());
}

#[test]
fn serialization_is_a_fixpoint() {
    for name in [
        "fig3.json",
        "fig7.json",
        "fig9.json",
        "cube.json",
        "tetrahedron_naive.json",
    ] {
        let once = load(name).to_canonical_string();
        let twice = parse_complex(&once).unwrap().to_canonical_string();
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn duals_have_one_face_per_vertex() {
    let fig3 = load("fig3.json");
    let dual = fig3.dualize().unwrap();
    assert_eq!(dual.faces.len(), 2);
    assert!(dual.faces.iter().all(|f| f.boundary.len() == 3));

    let cube = load("cube.json");
    let dual = cube.dualize().unwrap();
    assert_eq!(dual.faces.len(), 8);
    assert_eq!(dual.edges.len(), 12);
}

#[test]
fn resolution_files_validate() {
    let fig5 = parse_resolution(&corpus("fig5.json")).unwrap();
    let (j, t, from_file) = resolution_triangulation(&fig5).unwrap();
    assert!(from_file);
    assert_eq!(j.group_order, 12);
    assert_eq!(j.points.len(), 12);
    assert_eq!(interior_points(&j), vec![Point2::new(1, 1), Point2::new(1, 2)]);
    let report = validate_triangulation(&t).unwrap();
    assert!(report.valid, "{report:?}");
    assert_eq!(report.triangle_count, 12);

    let fig8 = parse_resolution(&corpus("fig8.json")).unwrap();
    let (j, t, _) = resolution_triangulation(&fig8).unwrap();
    assert_eq!(j.group_order, 16);
    assert_eq!(j.points.len(), 15);
    assert_eq!(interior_points(&j).len(), 3);
    let report = validate_triangulation(&t).unwrap();
    assert!(report.valid, "{report:?}");
    assert_eq!(report.triangle_count, 16);

    // The files' triangulations are figures; the deterministic one from
    // pulling is equally valid.
    for file in [&fig5, &fig8] {
        let j = triplepoint::junior_points(&file.quotient()).unwrap();
        let pulled = pulling_triangulation(&j);
        assert!(validate_triangulation(&pulled).unwrap().valid);
    }
}
