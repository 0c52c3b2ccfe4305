//! Format suite: CoverageJSON and hex-WKB round trips on random rasters
//! (bit-exact values, domain to 1e-12), ASC chains, and rejection of the
//! published inconsistent grid document.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rastergraph_core::raster::{Raster, Scale};
use rastergraph_core::rasterio::{
    parse_asc_grid, parse_coverage_json, parse_raster_hex_wkb, write_asc_grid,
    write_coverage_json, write_raster_hex_wkb, FormatError,
};

fn random_raster(rng: &mut ChaCha8Rng) -> Raster<f64> {
    let cols = rng.gen_range(2..=7);
    let rows = rng.gen_range(2..=7);
    let nodata = -9999.0;
    let values: Vec<f64> = (0..cols * rows)
        .map(|_| {
            if rng.gen_bool(0.1) {
                nodata
            } else {
                // Arbitrary doubles; the round trip must be bit-exact.
                rng.gen_range(-1.0e6..1.0e6) * rng.gen_range(1e-6..1.0)
            }
        })
        .collect();
    Raster::new(
        rng.gen_range(-1000.0..1000.0),
        rng.gen_range(-1000.0..1000.0),
        rng.gen_range(0.001..50.0),
        rng.gen_range(0.001..50.0),
        cols,
        rows,
        values,
        Scale::ratio("unit", nodata),
    )
    .unwrap()
}

#[test]
fn coverage_json_round_trip_100_random_rasters() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let r = random_raster(&mut rng);
        let text = write_coverage_json(&r);
        let again = parse_coverage_json(&text).unwrap();
        // Bit-exact cell values.
        for (a, b) in r.values().iter().zip(again.values().iter()) {
            if r.is_nodata(*a) {
                assert!(again.is_nodata(*b), "trial {trial}");
            } else {
                assert_eq!(a.to_bits(), b.to_bits(), "trial {trial}");
            }
        }
        // Domain rectangle to 1e-12 (relative to the coordinate scale).
        let d1 = r.domain_rect();
        let d2 = again.domain_rect();
        let scale = d1.width().abs().max(d1.height().abs()).max(1.0);
        for (a, b) in [
            (d1.min_x, d2.min_x),
            (d1.min_y, d2.min_y),
            (d1.max_x, d2.max_x),
            (d1.max_y, d2.max_y),
        ] {
            assert!((a - b).abs() <= 1e-12 * scale, "trial {trial}: {a} vs {b}");
        }
        assert_eq!(r.scale().unit_label, again.scale().unit_label);
    }
}

#[test]
fn hex_wkb_round_trip_100_random_rasters() {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    for trial in 0..100 {
        let r = random_raster(&mut rng);
        let hex = write_raster_hex_wkb(&r);
        let again = parse_raster_hex_wkb(&hex).unwrap();
        for (a, b) in r.values().iter().zip(again.values().iter()) {
            assert_eq!(a.to_bits(), b.to_bits(), "trial {trial}");
        }
        assert_eq!(r.domain_rect(), again.domain_rect(), "trial {trial}");
        // Writing the reparsed raster reproduces the hex exactly.
        assert_eq!(write_raster_hex_wkb(&again), hex, "trial {trial}");
    }
}

#[test]
fn published_grid_document_is_rejected_with_shape_mismatch() {
    // The example document pairs a 3-value x axis with shape [2,2].
    let doc = r#"{
        "type" : "Coverage","domain" : { "type" : "Domain", "domainType" : "Grid",
        "axes": { "x" : { "values": [-10,-5,0] },"y" : { "values": [40,50] } },
        "referencing": [{"coordinates": ["y","x"],"system": {
        "type": "GeographicCRS","id": "http://www.opengis.net/def/crs/EPSG/0/4979"}}]},
        "observedProperty" : { "label": {"en": "FloodAT"} },
        "ranges" : { "FloodAT" : { "type" : "NdArray", "dataType": "float",
        "axisNames": ["y","x"], "shape": [2, 2], "values" : [ 0.5, 0.6, 0.4, 0.6 ]}}
    }"#;
    match parse_coverage_json(doc) {
        Err(FormatError::ShapeMismatch(msg)) => {
            assert!(msg.contains("x axis has 3 values"), "diagnostic: {msg}");
            assert!(msg.contains("[2, 2]"), "diagnostic: {msg}");
        }
        other => panic!("expected a shape-mismatch rejection, got {other:?}"),
    }
}

#[test]
fn asc_to_coverage_json_chain_equals_direct_parse() {
    let asc = "ncols 3\nnrows 2\nxllcorner 10\nyllcorner 20\ncellsize 2.5\nNODATA_value -1\n\
               1 2 3\n-1 5 6\n";
    let direct = parse_asc_grid(asc).unwrap();
    let chained = parse_coverage_json(&write_coverage_json(&direct)).unwrap();
    assert!(direct.val_eq(&chained));
    assert_eq!(direct.domain_rect(), chained.domain_rect());

    // And back out through the ASC writer.
    let asc_again = write_asc_grid(&chained).unwrap();
    let reparsed = parse_asc_grid(&asc_again).unwrap();
    assert!(direct.val_eq(&reparsed));
}

