//! Geometry property suite: symmetry/idempotence/monotonicity invariants,
//! the fixed metric examples and Monte-Carlo/sampling oracles on random
//! polygons.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rastergraph_core::geom::{
    area, buffer, convex_hull, distance, envelope, geom_intersection, geom_set_op, parse_wkt,
    sf_predicate, Geometry, LineString, Point, Polygon, SetOp, SfPredicate,
};
use rastergraph_core::vocab;
use rastergraph_testkit::geomoracle as oracle;

fn meter() -> String {
    format!("{}meter", vocab::UOM_NS)
}

fn ring_to_polygon(ring: &[(f64, f64)]) -> Geometry<f64> {
    let mut pts: Vec<Point<f64>> = ring.iter().map(|(x, y)| Point::new(*x, *y)).collect();
    pts.push(pts[0]);
    Geometry::Polygon(Polygon::new(pts).unwrap())
}

#[test]
fn unit_square_area_is_one() {
    let square: Geometry<f64> = parse_wkt("POLYGON((0 0,1 0,1 1,0 1,0 0))").unwrap();
    assert_eq!(area(&square), 1.0);
}

#[test]
fn distance_three_four_five() {
    let p: Geometry<f64> = parse_wkt("POINT(0 0)").unwrap();
    let q: Geometry<f64> = parse_wkt("POINT(3 4)").unwrap();
    assert_eq!(distance(&p, &q), 5.0);
}

#[test]
fn shoelace_matches_monte_carlo_on_random_convex_polygons() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let ring = oracle::random_convex_ring(&mut rng, (0.0, 0.0), 10.0);
        let poly = ring_to_polygon(&ring);
        let exact = area(&poly);
        let sampled = oracle::polygon_area_monte_carlo(&ring, 200_000, &mut rng);
        let rel = (exact - sampled).abs() / exact;
        assert!(rel < 1e-2, "trial {trial}: exact {exact}, sampled {sampled}");
    }
}

#[test]
fn intersects_matches_zero_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let ca = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let cb = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let a = ring_to_polygon(&oracle::random_convex_ring(&mut rng, ca, 3.0));
        let b = ring_to_polygon(&oracle::random_convex_ring(&mut rng, cb, 3.0));
        let touching = sf_predicate(SfPredicate::Intersects, &a, &b);
        let d = distance(&a, &b);
        assert_eq!(touching, d <= 1e-9, "intersects vs distance {d}");
        // Symmetry of both.
        assert_eq!(touching, sf_predicate(SfPredicate::Intersects, &b, &a));
        assert!((d - distance(&b, &a)).abs() <= 1e-9);
    }
}

#[test]
fn intersection_idempotence_and_area_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let ca = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let cb = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let a = ring_to_polygon(&oracle::random_convex_ring(&mut rng, ca, 4.0));
        let b = ring_to_polygon(&oracle::random_convex_ring(&mut rng, cb, 4.0));
        let self_inter = geom_intersection(&a, &a);
        assert!(sf_predicate(SfPredicate::Equals, &self_inter, &a));
        let self_union = geom_set_op(SetOp::Union, &a, &a);
        assert!(sf_predicate(SfPredicate::Equals, &self_union, &a));

        let inter = geom_intersection(&a, &b);
        assert!(area(&inter) <= area(&a).min(area(&b)) + 1e-9);
    }
}

#[test]
fn set_operation_membership_matches_sampled_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let boundary_margin = 1e-6;
    for trial in 0..40 {
        let ring_a = oracle::random_convex_ring(&mut rng, (0.0, 0.0), 5.0);
        let cb = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let ring_b = oracle::random_convex_ring(&mut rng, cb, 5.0);
        let a = ring_to_polygon(&ring_a);
        let b = ring_to_polygon(&ring_b);
        let inter = geom_intersection(&a, &b).to_region();
        let union = geom_set_op(SetOp::Union, &a, &b).to_region();
        let diff = geom_set_op(SetOp::Difference, &a, &b).to_region();
        let sym = geom_set_op(SetOp::SymDifference, &a, &b).to_region();
        for _ in 0..250 {
            let p = (rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0));
            // Skip samples too close to either input boundary; membership
            // there is legitimately ambiguous under tolerance.
            if oracle::point_ring_distance(p, &ring_a) < boundary_margin
                || oracle::point_ring_distance(p, &ring_b) < boundary_margin
            {
                continue;
            }
            let in_a = oracle::point_in_polygon(p, &ring_a);
            let in_b = oracle::point_in_polygon(p, &ring_b);
            let pt = Point::new(p.0, p.1);
            assert_eq!(
                inter.contains_point(&pt),
                in_a && in_b,
                "trial {trial}: intersection membership at {p:?}"
            );
            assert_eq!(
                union.contains_point(&pt),
                in_a || in_b,
                "trial {trial}: union membership at {p:?}"
            );
            assert_eq!(
                diff.contains_point(&pt),
                in_a && !in_b,
                "trial {trial}: difference membership at {p:?}"
            );
            assert_eq!(
                sym.contains_point(&pt),
                in_a != in_b,
                "trial {trial}: symmetric difference membership at {p:?}"
            );
        }
    }
}

#[test]
fn segment_distance_matches_ternary_search_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..300 {
        let pts: Vec<(f64, f64)> = (0..4)
            .map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)))
            .collect();
        let a = Geometry::LineString(
            LineString::new(vec![
                Point::new(pts[0].0, pts[0].1),
                Point::new(pts[1].0, pts[1].1),
            ])
            .unwrap(),
        );
        let b = Geometry::LineString(
            LineString::new(vec![
                Point::new(pts[2].0, pts[2].1),
                Point::new(pts[3].0, pts[3].1),
            ])
            .unwrap(),
        );
        let got = distance(&a, &b);
        let expected = oracle::segment_distance_ternary(pts[0], pts[1], pts[2], pts[3]);
        assert!(
            (got - expected).abs() <= 1e-6,
            "distance {got} vs oracle {expected}"
        );
    }
}

#[test]
fn convex_hull_contains_every_input_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let members: Vec<Geometry<f64>> = (0..20)
            .map(|_| {
                Geometry::point(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0))
            })
            .collect();
        let collection = Geometry::Collection(members.clone());
        let hull = convex_hull(&collection);
        for m in &members {
            assert!(
                sf_predicate(SfPredicate::Covers, &hull, m),
                "hull must cover {m:?}"
            );
        }
    }
}

#[test]
fn all_predicates_on_fixture_pairs() {
    // Six fixture pairs; expected values derived from the point-set
    // definitions (checked against sampled membership where decidable).
    use SfPredicate::*;
    let cases: Vec<(&str, &str, Vec<(SfPredicate, bool)>)> = vec![
        (
            // Identical squares.
            "POLYGON((0 0,2 0,2 2,0 2,0 0))",
            "POLYGON((0 0,2 0,2 2,0 2,0 0))",
            vec![
                (Equals, true),
                (Intersects, true),
                (Disjoint, false),
                (Contains, true),
                (Within, true),
                (Covers, true),
                (Overlaps, false),
                (Touches, false),
                (Crosses, false),
            ],
        ),
        (
            // Proper overlap.
            "POLYGON((0 0,2 0,2 2,0 2,0 0))",
            "POLYGON((1 1,3 1,3 3,1 3,1 1))",
            vec![
                (Equals, false),
                (Intersects, true),
                (Disjoint, false),
                (Contains, false),
                (Within, false),
                (Covers, false),
                (Overlaps, true),
                (Touches, false),
                (Crosses, false),
            ],
        ),
        (
            // Edge-touching squares.
            "POLYGON((0 0,1 0,1 1,0 1,0 0))",
            "POLYGON((1 0,2 0,2 1,1 1,1 0))",
            vec![
                (Equals, false),
                (Intersects, true),
                (Disjoint, false),
                (Contains, false),
                (Within, false),
                (Covers, false),
                (Overlaps, true),
                (Touches, true),
                (Crosses, false),
            ],
        ),
        (
            // Disjoint squares.
            "POLYGON((0 0,1 0,1 1,0 1,0 0))",
            "POLYGON((5 5,6 5,6 6,5 6,5 5))",
            vec![
                (Equals, false),
                (Intersects, false),
                (Disjoint, true),
                (Contains, false),
                (Within, false),
                (Covers, false),
                (Overlaps, false),
                (Touches, false),
                (Crosses, false),
            ],
        ),
        (
            // Line crossing a square.
            "POLYGON((0 0,2 0,2 2,0 2,0 0))",
            "LINESTRING(-1 1,3 1)",
            vec![
                (Equals, false),
                (Intersects, true),
                (Disjoint, false),
                (Contains, false),
                (Within, false),
                (Covers, false),
                (Overlaps, true),
                (Touches, false),
                (Crosses, true),
            ],
        ),
        (
            // Small square inside a big one.
            "POLYGON((0 0,4 0,4 4,0 4,0 0))",
            "POLYGON((1 1,2 1,2 2,1 2,1 1))",
            vec![
                (Equals, false),
                (Intersects, true),
                (Disjoint, false),
                (Contains, true),
                (Within, false),
                (Covers, true),
                (Overlaps, false),
                (Touches, false),
                (Crosses, false),
            ],
        ),
    ];
    for (wkt_a, wkt_b, expectations) in cases {
        let a: Geometry<f64> = parse_wkt(wkt_a).unwrap();
        let b: Geometry<f64> = parse_wkt(wkt_b).unwrap();
        for (pred, expected) in expectations {
            assert_eq!(
                sf_predicate(pred, &a, &b),
                expected,
                "{pred:?}({wkt_a}, {wkt_b})"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn buffer_monotonicity(
        x in -100.0f64..100.0,
        y in -100.0f64..100.0,
        r1 in 0.0f64..50.0,
        extra in 0.0f64..50.0,
    ) {
        let g = Geometry::point(x, y);
        let small = buffer(&g, r1, &meter()).unwrap();
        let large = buffer(&g, r1 + extra, &meter()).unwrap();
        prop_assert!(large.contains_rect(&small));
    }

    #[test]
    fn envelope_contains_every_vertex(
        coords in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..12)
    ) {
        let points: Vec<Point<f64>> =
            coords.iter().map(|(x, y)| Point::new(*x, *y)).collect();
        prop_assume!(points.windows(2).any(|w| w[0].distance_to(&w[1]) > 1e-9));
        let g = Geometry::LineString(LineString::new(points.clone()).unwrap());
        let e = envelope(&g);
        for p in &points {
            prop_assert!(e.contains_point(p));
        }
    }

    #[test]
    fn intersects_symmetry_random_rects(
        ax in -10.0f64..10.0, ay in -10.0f64..10.0, aw in 0.1f64..5.0, ah in 0.1f64..5.0,
        bx in -10.0f64..10.0, by in -10.0f64..10.0, bw in 0.1f64..5.0, bh in 0.1f64..5.0,
    ) {
        let a = Geometry::rectangle(ax, ay, ax + aw, ay + ah).unwrap();
        let b = Geometry::rectangle(bx, by, bx + bw, by + bh).unwrap();
        prop_assert_eq!(
            sf_predicate(SfPredicate::Intersects, &a, &b),
            sf_predicate(SfPredicate::Intersects, &b, &a)
        );
    }
}
