//! End-to-end acceptance suite over the bundled corpus: each test checks
//! one numbered claim about the shipped data and prints a PASS line
//! (visible with --nocapture).

mod common;

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use triplepoint::{
    apply_move, blow_down_cycle, canonical_form, corner_blow_up_cycle, cycle_self_intersection,
    double_curve_labels, enumerate_moves, fans_isomorphic, interior_points, is_isomorphic,
    junior_points, parse_complex, parse_resolution, parse_script, pulling_triangulation,
    replay_script, resolution_triangulation, search_path, star_fan, toric_degree,
    toric_self_intersections, validate_triangulation, AnticanonicalCycle, Dart, DivisorClass,
    Face, Fan2D, IntersectionComplex, MoveKind, PicardLattice, Point2, QuotientData,
    QuotientGenerator, SearchOutcome, ValidationOptions,
};

fn load(name: &str) -> IntersectionComplex {
    let text = std::fs::read_to_string(common::corpus(name)).expect(name);
    parse_complex(&text).expect(name)
}

fn load_resolution(name: &str) -> (triplepoint::JuniorSimplex, triplepoint::Triangulation2D) {
    let text = std::fs::read_to_string(common::corpus(name)).expect(name);
    let file = parse_resolution(&text).expect(name);
    let (j, t, from_file) = resolution_triangulation(&file).expect(name);
    assert!(from_file, "{name} ships an explicit triangulation");
    (j, t)
}

/// Equality of integer sequences as cyclic words, up to rotation and
/// reflection.
fn cyclically_equal(a: &[i64], b: &[i64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    if n == 0 {
        return true;
    }
    let forward = (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == b[i]));
    let backward = (0..n).any(|s| (0..n).all(|i| a[(s + n - i) % n] == b[i]));
    forward || backward
}

#[test]
fn criterion_01_bigon_sphere_validates_at_degree_two() {
    let cx = load("fig3.json");
    let report = cx.validate(&ValidationOptions::default()).unwrap();
    assert!(report.valid);
    assert_eq!(report.euler_characteristic, 2);
    assert_eq!(report.triple_point_failures, 0);
    assert!(report.triple_point.iter().all(|e| e.pass));
    assert_eq!(report.degree, Some(2));

    let dual = cx.dualize().unwrap();
    assert_eq!(dual.faces.len(), 2);
    assert!(dual.faces.iter().all(|f| f.boundary.len() == 3));
    println!("ACCEPTANCE 1 PASS - three-bigon complex: valid, chi 2, every edge passes the triple point formula, degree 2, dual is two triangles");
}

#[test]
fn criterion_02_tetrahedron_with_published_labels_validates() {
    let cx = load("fig7.json");
    let report = cx.validate(&ValidationOptions::default()).unwrap();
    assert!(report.valid);
    assert_eq!(report.degree, Some(4));

    let mut labels: Vec<(i64, i64)> = cx.edges.iter().map(|e| (e.label_a, e.label_b)).collect();
    labels.sort();
    assert_eq!(
        labels,
        vec![(-3, 1), (-3, 1), (-1, -1), (-1, -1), (-1, -1), (1, -3)]
    );
    println!("ACCEPTANCE 2 PASS - labeled tetrahedron: valid, degree 4, label multiset matches");
}

#[test]
fn criterion_03_label_shift_search_connects_the_two_bigon_spheres() {
    let src = load("fig9.json");
    let dst = load("fig3.json");
    assert!(src.edges.iter().all(|e| e.label_sum() == -2));
    assert!(src.validate(&ValidationOptions::default()).unwrap().valid);

    let outcome = search_path(&src, &dst, 12, &[MoveKind::TypeI, MoveKind::TypeIInverse]).unwrap();
    let result = match outcome {
        SearchOutcome::Found(r) => r,
        SearchOutcome::NotFound { visited } => {
            panic!("no path found after visiting {visited} complexes")
        }
    };
    assert_eq!(result.path.len(), 9);

    let mut replayed = src;
    for mv in &result.path {
        replayed = apply_move(&replayed, mv).unwrap();
    }
    assert!(is_isomorphic(&replayed, &dst).unwrap());
    println!("ACCEPTANCE 3 PASS - label-shift-only search finds a 9 move path between the bigon spheres and it replays to an isomorphic complex");
}

#[test]
fn criterion_04_four_blow_ups_per_edge_balance_the_naive_tetrahedron() {
    let cx = load("tetrahedron_naive.json");
    let report = cx.validate(&ValidationOptions::default()).unwrap();
    assert!(!report.valid);
    assert_eq!(report.triple_point_failures, 6);

    let script_text =
        std::fs::read_to_string(common::corpus("scripts/tetrahedron_blowups.json")).unwrap();
    let steps = parse_script(&script_text).unwrap();
    let mut per_edge: BTreeMap<String, u32> = BTreeMap::new();
    for step in &steps {
        match step {
            triplepoint::ScriptStep::BlowUp { edge, count, .. } => {
                *per_edge.entry(edge.clone()).or_insert(0) += count;
            }
            other => panic!("unexpected step {other:?}"),
        }
    }
    assert_eq!(per_edge.len(), 6);
    assert!(per_edge.values().all(|&c| c == 4));
    assert_eq!(per_edge.values().sum::<u32>(), 24);

    let balanced = replay_script(&cx, &steps, false).unwrap();
    let report = balanced.validate(&ValidationOptions::default()).unwrap();
    assert!(report.valid);
    assert_eq!(report.degree, Some(4));
    assert!(balanced
        .edges
        .iter()
        .all(|e| (e.label_a, e.label_b) == (-1, -1)));
    println!("ACCEPTANCE 4 PASS - all-(1,1) tetrahedron fails with exactly 6 triple point violations; 4 blow-ups per edge (24 total) yield a valid degree-4 complex");
}

#[test]
fn criterion_05_order_twelve_quotient_has_the_published_resolution() {
    let (j, t) = load_resolution("fig5.json");
    assert_eq!(j.group_order, 12);
    assert_eq!(j.points.len(), 12);

    let mut columns: BTreeMap<i64, usize> = BTreeMap::new();
    for p in &j.points {
        *columns.entry(p.x).or_insert(0) += 1;
    }
    assert_eq!(columns, BTreeMap::from([(0, 7), (1, 4), (2, 1)]));

    assert_eq!(
        interior_points(&j),
        vec![Point2::new(1, 1), Point2::new(1, 2)]
    );

    let report = validate_triangulation(&t).unwrap();
    assert!(report.valid);
    assert_eq!(report.triangle_count, 12);
    assert!(report.non_unimodular.is_empty());
    assert_eq!(report.triangle_count as i64, j.group_order);
    println!("ACCEPTANCE 5 PASS - order-12 quotient: 12 junior points in columns (7,4,1), interior points (1,1) and (1,2), 12 unimodular triangles = group order");
}

#[test]
fn criterion_06_interior_star_is_a_degree_five_toric_surface() {
    let (_, t) = load_resolution("fig5.json");
    let fan = star_fan(&t, Point2::new(1, 1)).unwrap();
    assert_eq!(fan.rays.len(), 7);
    assert_eq!(toric_degree(&fan).unwrap(), 5);

    let selfints = toric_self_intersections(&fan).unwrap();
    assert_eq!(selfints.iter().sum::<i64>(), 12 - 3 * 7);

    // Independent oracle: the published divisor classes of the same
    // surface, squared in the Picard lattice of a 4-fold blow-up.
    let lattice = PicardLattice::new(4);
    let classes: Vec<DivisorClass> = [
        "H-E2-E4",
        "E4",
        "E2-E4",
        "H-E1-E2-E3",
        "E3",
        "E1-E3",
        "H-E1",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let squares: Vec<i64> = classes
        .iter()
        .map(|c| lattice.pairing(c, c).unwrap())
        .collect();
    assert!(
        cyclically_equal(&selfints, &squares),
        "star {selfints:?} vs class squares {squares:?}"
    );

    // The classes really form an anticanonical cycle of the same length.
    let cycle = AnticanonicalCycle {
        selfints: squares.clone(),
        classes: Some(classes),
    };
    assert!(triplepoint::is_anticanonical_cycle(&lattice, &cycle).unwrap());
    assert_eq!(cycle_self_intersection(&cycle).unwrap(), 5);
    println!("ACCEPTANCE 6 PASS - star of (1,1): 7 rays, degree 5, self-intersections match the divisor-class squares, sum -9 = 12 - 21");
}

#[test]
fn criterion_07_interior_edge_of_the_order_twelve_quotient_is_minus_one_minus_one() {
    let (_, t) = load_resolution("fig5.json");
    let labels = double_curve_labels(&t, Point2::new(1, 1), Point2::new(1, 2)).unwrap();
    assert_eq!(labels, (-1, -1));
    println!("ACCEPTANCE 7 PASS - double curve between the two interior components carries labels (-1,-1)");
}

#[test]
fn criterion_08_order_sixteen_quotient_resolution_and_stars() {
    let (j, t) = load_resolution("fig8.json");
    assert_eq!(j.group_order, 16);
    assert_eq!(j.points.len(), 15);

    let interior = interior_points(&j);
    assert_eq!(
        interior,
        vec![Point2::new(1, 1), Point2::new(1, 2), Point2::new(2, 1)]
    );

    let report = validate_triangulation(&t).unwrap();
    assert!(report.valid);
    assert_eq!(report.triangle_count, 16);
    assert!(report.non_unimodular.is_empty());

    // Every interior star is the same 7-ray degree-5 surface.
    let reference = Fan2D {
        rays: vec![
            Point2::new(1, 0),
            Point2::new(0, 1),
            Point2::new(-1, 1),
            Point2::new(-1, 0),
            Point2::new(-1, -1),
            Point2::new(0, -1),
            Point2::new(1, -1),
        ],
    };
    assert_eq!(toric_degree(&reference).unwrap(), 5);
    for &p in &interior {
        let fan = star_fan(&t, p).unwrap();
        assert_eq!(fan.rays.len(), 7, "star of {p}");
        assert_eq!(toric_degree(&fan).unwrap(), 5, "star of {p}");
        assert!(fans_isomorphic(&fan, &reference).unwrap(), "star of {p}");
    }

    // All three interior components are pairwise adjacent, and each
    // shared double curve carries labels (-1,-1).
    let mut adjacent_pairs = 0;
    for (i, &p) in interior.iter().enumerate() {
        for &q in &interior[i + 1..] {
            if let Ok(labels) = double_curve_labels(&t, p, q) {
                assert_eq!(labels, (-1, -1), "edge {p}-{q}");
                adjacent_pairs += 1;
            }
        }
    }
    assert_eq!(adjacent_pairs, 3);
    println!("ACCEPTANCE 8 PASS - order-16 quotient: 15 junior points, 3 interior, 16 unimodular triangles; all interior stars have 7 rays and degree 5; interior double curves are (-1,-1)");
}

#[test]
fn criterion_09_blow_down_arithmetic_on_the_three_cycle() {
    let cycle = AnticanonicalCycle {
        selfints: vec![-1, -5, -5],
        classes: None,
    };
    let before = cycle_self_intersection(&cycle).unwrap();

    let contracted = blow_down_cycle(&cycle, 0).unwrap();
    assert_eq!(contracted.selfints, vec![-4, -4]);
    let after = cycle_self_intersection(&contracted).unwrap();
    assert_eq!(after - before, 1);

    let restored = corner_blow_up_cycle(&contracted, 1).unwrap();
    assert!(
        cyclically_equal(&restored.selfints, &cycle.selfints),
        "{:?}",
        restored.selfints
    );
    assert_eq!(cycle_self_intersection(&restored).unwrap(), before);
    println!("ACCEPTANCE 9 PASS - blow-down (-1,-5,-5) -> (-4,-4), self-intersection rises by 1, corner blow-up restores the cycle");
}

fn random_relabel(cx: &IntersectionComplex, rng: &mut StdRng) -> IntersectionComplex {
    let mut edge_indices: Vec<usize> = (0..cx.edges.len()).collect();
    edge_indices.shuffle(rng);
    let mut new_edge_name: BTreeMap<&str, String> = BTreeMap::new();
    for (fresh, &original) in edge_indices.iter().enumerate() {
        new_edge_name.insert(cx.edges[original].id.as_str(), format!("r{fresh}"));
    }
    let swap_sides: BTreeMap<&str, bool> = cx
        .edges
        .iter()
        .map(|e| (e.id.as_str(), rng.gen_bool(0.5)))
        .collect();

    let mut edges: Vec<triplepoint::EdgeRecord> = cx
        .edges
        .iter()
        .map(|e| {
            let (a, b) = if swap_sides[e.id.as_str()] {
                (e.label_b, e.label_a)
            } else {
                (e.label_a, e.label_b)
            };
            triplepoint::EdgeRecord {
                id: new_edge_name[e.id.as_str()].clone(),
                label_a: a,
                label_b: b,
                nodal: e.nodal,
            }
        })
        .collect();
    edges.shuffle(rng);

    let mut faces: Vec<Face> = cx
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut boundary: Vec<Dart> = f
                .boundary
                .iter()
                .map(|d| {
                    let side = if swap_sides[d.edge.as_str()] {
                        d.side.other()
                    } else {
                        d.side
                    };
                    Dart::new(new_edge_name[d.edge.as_str()].clone(), side)
                })
                .collect();
            let cut = rng.gen_range(0..boundary.len());
            boundary.rotate_left(cut);
            Face {
                id: format!("f{i}"),
                boundary,
            }
        })
        .collect();
    faces.shuffle(rng);

    IntersectionComplex {
        meta: cx.meta.clone(),
        edges,
        faces,
    }
}

fn random_quotient(rng: &mut StdRng) -> QuotientData {
    loop {
        let order = rng.gen_range(2..=30);
        let w0 = rng.gen_range(0..order);
        let w1 = rng.gen_range(0..order);
        let w2 = ((2 * order) - w0 - w1) % order;
        if w0 == 0 && w1 == 0 && w2 == 0 {
            continue;
        }
        return QuotientData {
            generators: vec![QuotientGenerator {
                order,
                weights: [w0, w1, w2],
            }],
        };
    }
}

#[test]
fn criterion_10_randomized_property_suites() {
    let mut rng = StdRng::seed_from_u64(0xA11CE);

    // Random legal move sequences preserve the validation report's
    // shape: chi, trivalency, degree, and each edge's label sum.
    for name in ["cube.json", "fig3.json"] {
        let start = load(name);
        let degree = start.degree().unwrap();
        let sums: BTreeMap<String, i64> = start
            .edges
            .iter()
            .map(|e| (e.id.clone(), e.label_sum()))
            .collect();
        let mut current = start;
        for step in 0..1000 {
            let moves = enumerate_moves(&current).unwrap();
            assert!(!moves.is_empty(), "{name} step {step}");
            let mv = &moves[rng.gen_range(0..moves.len())];
            current = apply_move(&current, mv).unwrap();
            let report = current.validate(&ValidationOptions::default()).unwrap();
            assert!(report.valid, "{name} step {step} move {mv}");
            assert_eq!(report.euler_characteristic, 2);
            assert!(report.trivalent);
            assert_eq!(report.degree, Some(degree));
            for e in &current.edges {
                assert_eq!(e.label_sum(), sums[&e.id], "{name} step {step} edge {}", e.id);
            }
        }
    }

    // Canonical form is invariant under renaming, reordering, side
    // swaps, and boundary rotation.
    for name in [
        "fig3.json",
        "fig7.json",
        "fig9.json",
        "cube.json",
        "tetrahedron_naive.json",
    ] {
        let cx = load(name);
        let reference = canonical_form(&cx).unwrap();
        for trial in 0..100 {
            let shuffled = random_relabel(&cx, &mut rng);
            let code = canonical_form(&shuffled).unwrap();
            assert_eq!(code, reference, "{name} trial {trial}");
        }
    }

    // Anticanonical degree bookkeeping: sum of self-intersections is
    // 12 - 3n for an n-ray smooth complete fan, across every star fan
    // the corpus and random quotients produce.
    let mut fans_checked = 0;
    let mut quotients_checked = 0;
    let mut fan_sum_rule = |fan: &Fan2D| {
        let selfints = toric_self_intersections(fan).unwrap();
        let n = fan.rays.len() as i64;
        assert_eq!(selfints.iter().sum::<i64>(), 12 - 3 * n);
        fans_checked += 1;
    };
    for name in ["fig5.json", "fig8.json"] {
        let (j, t) = load_resolution(name);
        for p in interior_points(&j) {
            fan_sum_rule(&star_fan(&t, p).unwrap());
        }
    }

    // Random small cyclic quotients: the pulling triangulation is a
    // valid unimodular triangulation with group-order many triangles.
    while quotients_checked < 20 {
        let q = random_quotient(&mut rng);
        let j = junior_points(&q).unwrap();
        let t = pulling_triangulation(&j);
        let report = validate_triangulation(&t).unwrap();
        assert!(report.valid, "{q:?}");
        assert_eq!(report.triangle_count as i64, j.group_order, "{q:?}");
        quotients_checked += 1;
        for p in interior_points(&j) {
            fan_sum_rule(&star_fan(&t, p).unwrap());
        }
    }
    assert!(fans_checked >= 5);
    println!("ACCEPTANCE 10 PASS - 2000 random moves kept every invariant, 500 relabelings kept the canonical form, {fans_checked} star fans obeyed the 12-3n rule, {quotients_checked} random quotients triangulated unimodularly");
}
