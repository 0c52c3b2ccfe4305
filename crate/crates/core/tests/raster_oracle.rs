//! Raster-algebra oracle suite: every registered raster function is checked
//! cell-for-cell against an independent per-cell brute-force oracle on
//! randomized fixtures (misaligned grids and NODATA included).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rastergraph_core::geom::Geometry;
use rastergraph_core::raster::algebra::{
    aggregate, cellwise_binary, cellwise_binary_const, cellwise_unary, raster_intersection,
    raster_union, rescale, AggregateOp, BinaryOp, ConstOp, RasterOrGeom, UnaryOp,
};
use rastergraph_core::Raster;
use rastergraph_testkit::rasteroracle as oracle;
use rastergraph_testkit::rasteroracle::{GridView, OracleConstOp, OracleOp};

const TRIALS: usize = 1000;

fn cells_match(label: &str, trial: usize, got: &Raster, expected: &[f64]) {
    let nd = got.nodata();
    for (i, (g, e)) in got.values().iter().zip(expected.iter()).enumerate() {
        let ok = if *e == nd || e.is_nan() {
            *g == nd || g.is_nan()
        } else {
            g == e
        };
        assert!(
            ok,
            "{label} trial {trial} cell {i}: engine {g}, oracle {e}\nraster: {got:?}"
        );
    }
}

fn binary_pairs() -> Vec<(BinaryOp, OracleOp, &'static str)> {
    vec![
        (BinaryOp::Plus, OracleOp::Plus, "rasterPlus"),
        (BinaryOp::Subtract, OracleOp::Subtract, "rasterSubtract"),
        (BinaryOp::Mult, OracleOp::Mult, "rasterMult"),
        (BinaryOp::Div, OracleOp::Div, "rasterDiv"),
        (BinaryOp::And, OracleOp::And, "rasterAnd"),
        (BinaryOp::Or, OracleOp::Or, "rasterOr"),
        (BinaryOp::Xor, OracleOp::Xor, "rasterXor"),
        (BinaryOp::Equals, OracleOp::Equals, "rasterEquals"),
    ]
}

fn const_pairs() -> Vec<(ConstOp, OracleConstOp, &'static str)> {
    vec![
        (ConstOp::Plus, OracleConstOp::Plus, "rasterPlusConst"),
        (
            ConstOp::Subtract,
            OracleConstOp::Subtract,
            "rasterSubtractConst",
        ),
        (ConstOp::Mult, OracleConstOp::Mult, "rasterMultConst"),
        (ConstOp::Div, OracleConstOp::Div, "rasterDivConst"),
        (ConstOp::And, OracleConstOp::And, "rasterAndConst"),
        (ConstOp::Or, OracleConstOp::Or, "rasterOrConst"),
        (ConstOp::Xor, OracleConstOp::Xor, "rasterXorConst"),
        (ConstOp::Equals, OracleConstOp::Equals, "rasterEqualsConst"),
        (ConstOp::Exp, OracleConstOp::Exp, "rasterExp"),
        (
            ConstOp::GreaterKeep,
            OracleConstOp::GreaterKeep,
            "rasterGreater",
        ),
        (
            ConstOp::SmallerKeep,
            OracleConstOp::SmallerKeep,
            "rasterSmaller",
        ),
    ]
}

#[test]
fn binary_operators_match_per_cell_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for (op, oracle_op, label) in binary_pairs() {
        for trial in 0..TRIALS {
            let r1 = oracle::random_raster(&mut rng);
            let r2 = oracle::random_partner(&mut rng, &r1);
            let got = cellwise_binary(op, &r1, &r2);
            let expected = oracle::oracle_binary(oracle_op, &GridView::of(&r1), &GridView::of(&r2));
            cells_match(label, trial, &got, &expected);
            // Domain preservation.
            assert_eq!(got.domain_rect(), r1.domain_rect());
        }
        println!("oracle agreement: {label} over {TRIALS} fixtures");
    }
}

#[test]
fn const_operators_match_per_cell_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for (op, oracle_op, label) in const_pairs() {
        for trial in 0..TRIALS {
            let r = oracle::random_raster(&mut rng);
            let c = match op {
                ConstOp::Exp => rng.gen_range(0..4) as f64,
                _ => (rng.gen_range(-20..=20) as f64) * 0.25,
            };
            let got = cellwise_binary_const(op, &r, c);
            let expected = oracle::oracle_const(oracle_op, &GridView::of(&r), c);
            cells_match(label, trial, &got, &expected);
            assert_eq!(got.domain_rect(), r.domain_rect());
        }
        println!("oracle agreement: {label} over {TRIALS} fixtures");
    }
}

#[test]
fn unary_operators_match_per_cell_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for trial in 0..TRIALS {
        let r = oracle::random_raster(&mut rng);
        cells_match(
            "rasterNot",
            trial,
            &cellwise_unary(UnaryOp::Not, &r),
            &oracle::oracle_not(&GridView::of(&r)),
        );
        cells_match(
            "rasterInvert",
            trial,
            &cellwise_unary(UnaryOp::Invert, &r),
            &oracle::oracle_invert(&GridView::of(&r)),
        );
    }
    println!("oracle agreement: rasterNot, rasterInvert over {TRIALS} fixtures");
}

#[test]
fn intersection_and_union_match_per_cell_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for trial in 0..TRIALS {
        let r = oracle::random_raster(&mut rng);
        let domain = r.domain_rect();
        // A random rectangle around (and sometimes past) the domain.
        let w = domain.width();
        let h = domain.height();
        let min_x = domain.min_x + w * rng.gen_range(-0.5..0.8);
        let min_y = domain.min_y + h * rng.gen_range(-0.5..0.8);
        let rect = Geometry::rectangle(
            min_x,
            min_y,
            min_x + w * rng.gen_range(0.2..1.2),
            min_y + h * rng.gen_range(0.2..1.2),
        )
        .unwrap();
        let rect_tuple = match &rect {
            Geometry::Rectangle(rc) => (rc.min_x, rc.min_y, rc.max_x, rc.max_y),
            _ => unreachable!(),
        };
        let inter =
            raster_intersection(RasterOrGeom::Raster(&r), RasterOrGeom::Geom(&rect)).unwrap();
        let expected = oracle::oracle_intersection_with_rect(&GridView::of(&r), rect_tuple);
        cells_match("rasterIntersection", trial, &inter, &expected);

        let union =
            raster_union(RasterOrGeom::Raster(&r), RasterOrGeom::Geom(&rect)).unwrap();
        let expected = oracle::oracle_union_with_rect(&GridView::of(&r), rect_tuple);
        cells_match("rasterUnion", trial, &union, &expected);

        // The two partitions cover the valid cells exactly once.
        assert_eq!(
            inter.valid_cell_count() + union.valid_cell_count(),
            r.valid_cell_count()
        );
    }
    println!("oracle agreement: rasterIntersection, rasterUnion over {TRIALS} fixtures");
}

#[test]
fn aggregates_bracket_cell_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..TRIALS {
        let r = oracle::random_raster(&mut rng);
        let values = r.cellval2();
        if values.is_empty() {
            assert!(aggregate(AggregateOp::Max, &r).is_err());
            continue;
        }
        let min = aggregate(AggregateOp::Min, &r).unwrap();
        let max = aggregate(AggregateOp::Max, &r).unwrap();
        let mean = aggregate(AggregateOp::Mean, &r).unwrap();
        let oracle_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let oracle_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let oracle_mean = values.iter().sum::<f64>() / values.len() as f64;
        assert_eq!(min, oracle_min);
        assert_eq!(max, oracle_max);
        assert!((mean - oracle_mean).abs() < 1e-12);
        for v in &values {
            assert!(*v >= min && *v <= max);
        }
        assert_eq!(values.len(), r.valid_cell_count());
    }
}

#[test]
fn rescale_values_come_from_the_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..200 {
        let r = oracle::random_raster(&mut rng);
        let cols = rng.gen_range(1..=6);
        let rows = rng.gen_range(1..=6);
        let scaled = rescale(&r, cols, rows).unwrap();
        assert_eq!(scaled.domain_rect(), r.domain_rect());
        for v in scaled.values() {
            assert!(
                r.values().contains(v) || scaled.is_nodata(*v),
                "rescaled value {v} must come from the source"
            );
        }
        // Doubling and halving reproduces the original exactly.
        let doubled = rescale(&r, r.n_cols() * 2, r.n_rows() * 2).unwrap();
        let back = rescale(&doubled, r.n_cols(), r.n_rows()).unwrap();
        assert!(back.val_eq(&r));
    }
}

#[test]
fn cellval_matches_containing_cell_for_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(149);
    for _ in 0..20 {
        let r = oracle::random_raster(&mut rng);
        let d = r.domain_rect();
        for _ in 0..1000 {
            let x = rng.gen_range(d.min_x..=d.max_x);
            let y = rng.gen_range(d.min_y..=d.max_y);
            let got = r.cellval(x, y).unwrap();
            // Containing cells under closed rectangles; the half-open rule
            // picks the one with the largest indexes.
            let mut containing = Vec::new();
            for (col, row, v) in r.cells() {
                let rect = r.cell_rect(col, row);
                if x >= rect.min_x && x <= rect.max_x && y >= rect.min_y && y <= rect.max_y
                {
                    containing.push(((col, row), v));
                }
            }
            assert!(!containing.is_empty());
            let expected = containing.iter().max_by_key(|(idx, _)| *idx).unwrap().1;
            assert_eq!(got.to_bits(), expected.to_bits(), "at ({x}, {y})");
        }
    }
}

#[test]
fn keep_thresholds_at_infinity_are_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(131);
    for _ in 0..100 {
        let r = oracle::random_raster(&mut rng);
        let smaller = cellwise_binary_const(ConstOp::SmallerKeep, &r, f64::INFINITY);
        let greater = cellwise_binary_const(ConstOp::GreaterKeep, &r, f64::NEG_INFINITY);
        assert!(smaller.val_eq(&r));
        assert!(greater.val_eq(&r));
    }
}

#[test]
fn plus_and_mult_commute_on_aligned_nodata_free_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(137);
    for _ in 0..200 {
        let cols = rng.gen_range(2..=4);
        let rows = rng.gen_range(2..=4);
        let mk = |rng: &mut ChaCha8Rng| {
            let values: Vec<f64> = (0..cols * rows)
                .map(|_| (rng.gen_range(-20..=20) as f64) * 0.25)
                .collect();
            Raster::new(
                0.0,
                0.0,
                1.0,
                1.0,
                cols,
                rows,
                values,
                rastergraph_core::raster::Scale::default(),
            )
            .unwrap()
        };
        let r1 = mk(&mut rng);
        let r2 = mk(&mut rng);
        for op in [BinaryOp::Plus, BinaryOp::Mult] {
            let ab = cellwise_binary(op, &r1, &r2);
            let ba = cellwise_binary(op, &r2, &r1);
            assert_eq!(ab.values(), ba.values());
        }
    }
}
