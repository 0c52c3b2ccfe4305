//! Synthetic hazard corpus: a grid of roads (LineStrings), buildings and
//! elements-at-risk (Polygons), plus aligned flood and fire rasters with
//! NODATA holes, and the four regression queries wired to the generated
//! coordinates. Everything is seeded and deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use chrono::{DateTime, Duration, FixedOffset};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The instant the capacity-planning query asks about.
pub const QUERY_INSTANT: &str = "2019-05-23T10:20:13+05:30";

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub roads: usize,
    pub buildings: usize,
    pub ears: usize,
    pub seed: u64,
    /// Raster grid size (cells per side).
    pub grid: usize,
    /// Fraction of raster cells left as NODATA.
    pub nodata_frac: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            roads: 200,
            buildings: 60,
            ears: 30,
            seed: 42,
            grid: 50,
            nodata_frac: 0.12,
        }
    }
}

/// Cell edge length in meters.
pub const CELL_SIZE: f64 = 500.0;

#[derive(Debug, Clone)]
pub struct Corpus {
    pub roads_geojson: String,
    pub buildings_geojson: String,
    pub ears_geojson: String,
    pub flood_asc: String,
    pub fire_asc: String,
    pub queries: [(String, String); 4],
}

impl Corpus {
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating corpus directory {}", dir.display()))?;
        fs::write(dir.join("roads.geojson"), &self.roads_geojson)?;
        fs::write(dir.join("buildings.geojson"), &self.buildings_geojson)?;
        fs::write(dir.join("ears.geojson"), &self.ears_geojson)?;
        fs::write(dir.join("flood.asc"), &self.flood_asc)?;
        fs::write(dir.join("fire.asc"), &self.fire_asc)?;
        for (name, text) in &self.queries {
            fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

pub fn generate(spec: &CorpusSpec) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let side = spec.grid as f64 * CELL_SIZE;

    // A few witness pairs guarantee the capacity-planning query has
    // answers: roads strictly below the raster domain with an open
    // element-at-risk right next to them.
    let witnesses = spec.roads.clamp(2, 8).min(spec.ears.max(1));
    let mut witness_roads: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut witness_ears: Vec<(Vec<(f64, f64)>, i64, i64)> = Vec::new();
    for _ in 0..witnesses {
        let y = rng.gen_range(-0.12 * side..-0.03 * side);
        let x = rng.gen_range(0.1 * side..0.8 * side);
        let len = rng.gen_range(400.0..1200.0);
        witness_roads.push(vec![(x, y), (x + len, y)]);
        let hw = rng.gen_range(40.0..120.0);
        // Keep the box below the domain too, touching the road.
        let cy = y - hw;
        witness_ears.push((
            vec![
                (x + len / 2.0 - hw, cy - hw),
                (x + len / 2.0 + hw, cy - hw),
                (x + len / 2.0 + hw, cy + hw),
                (x + len / 2.0 - hw, cy + hw),
            ],
            -rng.gen_range(30..180),
            rng.gen_range(60..300),
        ));
    }

    let roads_geojson = feature_collection(
        (0..spec.roads.saturating_sub(witnesses))
            .map(|_| {
                let line = random_road(&mut rng, side);
                geojson_linestring(&line, &[])
            })
            .chain(
                witness_roads
                    .iter()
                    .map(|line| geojson_linestring(line, &[])),
            )
            .collect(),
    );
    let buildings_geojson = feature_collection(
        (0..spec.buildings)
            .map(|_| {
                let ring = random_box(&mut rng, side, 50.0..250.0);
                geojson_polygon(&ring, &[])
            })
            .collect(),
    );

    let instant: DateTime<FixedOffset> =
        DateTime::parse_from_rfc3339(QUERY_INSTANT).expect("query instant parses");
    let ears_geojson = feature_collection(
        (0..spec.ears.saturating_sub(witnesses))
            .map(|_| {
                let ring = random_box(&mut rng, side, 40.0..150.0);
                let open_before = rng.gen_bool(0.55);
                let open = if open_before {
                    instant - Duration::minutes(rng.gen_range(10..360))
                } else {
                    instant + Duration::minutes(rng.gen_range(10..360))
                };
                let close = open + Duration::minutes(rng.gen_range(120..600));
                let props = [
                    ("openTime".to_string(), json_string(&open.to_rfc3339())),
                    ("closeTime".to_string(), json_string(&close.to_rfc3339())),
                ];
                geojson_polygon(&ring, &props)
            })
            .chain(witness_ears.iter().map(|(ring, open_min, close_min)| {
                let open = instant + Duration::minutes(*open_min);
                let close = instant + Duration::minutes(*close_min);
                let props = [
                    ("openTime".to_string(), json_string(&open.to_rfc3339())),
                    ("closeTime".to_string(), json_string(&close.to_rfc3339())),
                ];
                geojson_polygon(ring, &props)
            }))
            .collect(),
    );

    let flood_asc = random_asc(&mut rng, spec.grid, spec.nodata_frac, 0.0..40.0);
    let fire_asc = random_asc(&mut rng, spec.grid, spec.nodata_frac, 0.0..60.0);

    let center = side / 2.0;
    let queries = [
        ("u1.rq".to_string(), u1_query()),
        ("u2.rq".to_string(), u2_query()),
        ("u3.rq".to_string(), u3_query()),
        ("u4.rq".to_string(), u4_query(center, center)),
    ];

    Corpus {
        roads_geojson,
        buildings_geojson,
        ears_geojson,
        flood_asc,
        fire_asc,
        queries,
    }
}

fn random_road(rng: &mut ChaCha8Rng, side: f64) -> Vec<(f64, f64)> {
    // Start anywhere in a margin around the raster domain so a share of the
    // roads misses it entirely.
    let mut x = rng.gen_range(-0.15 * side..1.15 * side);
    let mut y = rng.gen_range(-0.15 * side..1.15 * side);
    let mut points = vec![(x, y)];
    for _ in 0..rng.gen_range(1..=3) {
        x += rng.gen_range(-1500.0..1500.0);
        y += rng.gen_range(-1500.0..1500.0);
        if points.last() != Some(&(x, y)) {
            points.push((x, y));
        }
    }
    if points.len() < 2 {
        points.push((x + 400.0, y + 300.0));
    }
    points
}

/// Open counterclockwise ring of an axis-aligned box.
fn random_box(
    rng: &mut ChaCha8Rng,
    side: f64,
    half_extent: std::ops::Range<f64>,
) -> Vec<(f64, f64)> {
    let cx = rng.gen_range(-0.05 * side..1.05 * side);
    let cy = rng.gen_range(-0.05 * side..1.05 * side);
    let hw = rng.gen_range(half_extent.clone());
    let hh = rng.gen_range(half_extent);
    vec![
        (cx - hw, cy - hh),
        (cx + hw, cy - hh),
        (cx + hw, cy + hh),
        (cx - hw, cy + hh),
    ]
}

fn random_asc(
    rng: &mut ChaCha8Rng,
    grid: usize,
    nodata_frac: f64,
    values: std::ops::Range<f64>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ncols {grid}");
    let _ = writeln!(out, "nrows {grid}");
    let _ = writeln!(out, "xllcorner 0");
    let _ = writeln!(out, "yllcorner 0");
    let _ = writeln!(out, "cellsize {CELL_SIZE}");
    let _ = writeln!(out, "NODATA_value -9999");
    for _ in 0..grid {
        let row: Vec<String> = (0..grid)
            .map(|_| {
                if rng.gen_bool(nodata_frac) {
                    "-9999".to_string()
                } else {
                    // One decimal keeps the files compact and comparisons exact.
                    format!("{:.1}", rng.gen_range(values.clone()))
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn feature_collection(features: Vec<String>) -> String {
    format!(
        "{{\"type\":\"FeatureCollection\",\"features\":[{}]}}\n",
        features.join(",")
    )
}

fn geojson_linestring(points: &[(f64, f64)], props: &[(String, String)]) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("[{x},{y}]")).collect();
    format!(
        "{{\"type\":\"Feature\",\"properties\":{{{}}},\"geometry\":{{\"type\":\"LineString\",\"coordinates\":[{}]}}}}",
        props_json(props),
        coords.join(",")
    )
}

fn geojson_polygon(open_ring: &[(f64, f64)], props: &[(String, String)]) -> String {
    let mut coords: Vec<String> = open_ring
        .iter()
        .map(|(x, y)| format!("[{x},{y}]"))
        .collect();
    coords.push(coords[0].clone());
    format!(
        "{{\"type\":\"Feature\",\"properties\":{{{}}},\"geometry\":{{\"type\":\"Polygon\",\"coordinates\":[[{}]]}}}}",
        props_json(props),
        coords.join(",")
    )
}

fn props_json(props: &[(String, String)]) -> String {
    props
        .iter()
        .map(|(k, v)| format!("\"{k}\":{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

/// Flood passability: roads not flooded by more than 10 cm.
pub fn u1_query() -> String {
    "SELECT ?road WHERE {\n\
     ?road a ex:Road ; geo:hasGeometry ?roadseg . ?roadseg geo:asWKT ?roadseg_wkt .\n\
     ?floodarea a ex:FloodRiskArea ; geo2:asCoverage ?floodarea_cov .\n\
     ?floodarea_cov geo2:asCoverageJSON ?floodarea_covjson .\n\
     BIND(geo2:rasterSmaller(?floodarea_covjson,10) AS ?relfloodarea)\n\
     FILTER(geo2:intersects(?roadseg_wkt,?relfloodarea))}\n"
        .to_string()
}

/// Combined fire and flood risk per building, maximum per building.
pub fn u2_query() -> String {
    "SELECT ?building (MAX(?riskvalue) AS ?riskmax) WHERE {\n\
     ?building a ex:Building ; geo:hasGeometry ?building_geom .\n\
     ?building_geom geo:asWKT ?building_wkt .\n\
     ?floodarea a ex:FloodRiskArea ; geo2:hasCoverage ?floodcov.\n\
     ?floodcov geo2:asCoverageJSON ?floodcov_covjson .\n\
     ?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov.\n\
     ?firecov geo2:asCoverageJSON ?firecov_covjson .\n\
     BIND (geo2:rasterPlus(?firecov_covjson,?floodcov_covjson) AS ?riskarea)\n\
     BIND (geo2:cellval2(geo2:rasterIntersection(?building_wkt,?riskarea)) AS ?riskvalue)\n\
     FILTER(geo2:intersects(?building_wkt,?riskarea))}\n"
        .to_string()
}

/// Roads near open elements at risk and outside the combined hazard.
/// The buffer filter intersects the EAR geometry (?ear_wkt), not the
/// feature node.
pub fn u3_query() -> String {
    format!(
        "SELECT ?road WHERE{{\n\
         ?road a ex:Road ; geo:hasGeometry ?roadgeom . ?roadgeom geo:asWKT ?road_wkt .\n\
         ?ear a ear:ElementAtRisk ; geo:hasGeometry ?eargeom ; ex:openTime ?earopen ; ex:closeTime ?earclose .\n\
         ?eargeom geo:asWKT ?ear_wkt .\n\
         ?floodarea a ex:FloodRiskArea ; geo2:hasCoverage ?floodcov. ?floodcov geo2:asCoverageJSON ?floodcov_covjson .\n\
         ?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov. ?firecov geo2:asCoverageJSON ?firecov_covjson .\n\
         BIND (geo2:rasterPlus(?firecov_covjson,?floodcov_covjson) AS ?riskarea)\n\
         BIND(\"{QUERY_INSTANT}\"^^xsd:dateTime AS ?givendate)\n\
         FILTER(?givendate>?earopen AND ?givendate<?earclose)\n\
         FILTER(geo:intersects(geo:buffer(?road_wkt,2,uom:meter),?ear_wkt))\n\
         FILTER(!geo:intersects(?road_wkt,?riskarea))}}\n"
    )
}

/// Served fraction of the hazard area within 10 km of a station location.
/// The location BIND precedes its use and the denominator takes the area of
/// the raster geometry.
pub fn u4_query(x: f64, y: f64) -> String {
    format!(
        "SELECT ?hazardcoveragepercentage WHERE {{\n\
         ?floodarea a ex:FloodRiskArea; geo2:hasCoverage ?floodcov.\n\
         ?floodcov geo2:asCoverageJSON ?floodcov_covjson .\n\
         ?firearea rdf:type ex:FireRiskArea ; geo2:hasCoverage ?firecov.\n\
         ?firecov geo2:asCoverageJSON ?firecov_covjson .\n\
         BIND(\"POINT({x},{y})\"^^geo:wktLiteral AS ?locationtocheck)\n\
         BIND(geo2:rasterUnion(?firecov_covjson,?floodcov_covjson) AS ?hazardriskarea)\n\
         BIND(geo2:geometryIntersection(?hazardriskarea,geo:buffer(?locationtocheck,10,uom:km)) AS ?intersectarea)\n\
         BIND(geo:area(?intersectarea)/geo:area(geo2:raster2geom(?hazardriskarea)) AS ?hazardcoveragepercentage)}}\n"
    )
}
