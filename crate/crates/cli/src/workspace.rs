//! Workspace ingestion: maps GeoJSON feature collections and ESRI ASCII
//! rasters onto the graph vocabulary (feature, geometry node, WKT literal;
//! feature, coverage, CoverageJSON literal, scale node) with deterministic
//! IRIs minted from feature indexes.

use anyhow::{anyhow, bail, Context, Result};

use rastergraph_core::geom::{to_wkt, Geometry, LineString, Point, Polygon};
use rastergraph_core::rasterio::{parse_asc_grid, write_coverage_json};
use rastergraph_core::rdf::{Graph, Term};
use rastergraph_core::vocab;
use rastergraph_core::Raster;

/// Default IRI minting base; override with `RASTERGRAPH_BASE_IRI`.
pub const DEFAULT_BASE_IRI: &str = "http://example.org";

pub fn base_iri_from_env(flag: Option<&str>) -> String {
    let base = flag
        .map(str::to_string)
        .or_else(|| std::env::var("RASTERGRAPH_BASE_IRI").ok())
        .unwrap_or_else(|| DEFAULT_BASE_IRI.to_string());
    base.trim_end_matches('/').to_string()
}

pub fn feature_iri(base: &str, index: usize) -> String {
    format!("{base}/feature/{index}")
}

pub fn geom_iri(base: &str, index: usize) -> String {
    format!("{base}/geom/{index}")
}

/// Next unused feature index in the graph, so repeated loads never collide.
pub fn next_feature_index(graph: &Graph, base: &str) -> usize {
    let prefix = format!("{base}/feature/");
    graph
        .triples()
        .filter_map(|t| match t.subject.as_ref() {
            Term::Iri(iri) => iri
                .strip_prefix(&prefix)
                .and_then(|rest| rest.parse::<usize>().ok()),
            _ => None,
        })
        .max()
        .map(|max| max + 1)
        .unwrap_or(0)
}

/// Expands a class argument: full IRI (optionally in angle brackets) or a
/// canonical prefixed name.
pub fn expand_class_iri(arg: &str) -> Result<String> {
    let trimmed = arg.trim();
    if let Some(inner) = trimmed.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        return Ok(inner.to_string());
    }
    if trimmed.contains("://") {
        return Ok(trimmed.to_string());
    }
    vocab::expand_canonical(trimmed)
        .ok_or_else(|| anyhow!("unknown prefix in class IRI `{arg}`"))
}

/// One ingested feature: minted IRI plus its geometry.
#[derive(Debug, Clone)]
pub struct IngestedFeature {
    pub iri: String,
    pub geometry: Geometry<f64>,
}

/// Ingests a GeoJSON FeatureCollection: per feature a typed feature node, a
/// geometry node typed geo:Geometry, a WKT literal and one typed literal
/// per scalar property. Returns the minted features.
pub fn ingest_geojson(
    graph: &mut Graph,
    text: &str,
    class_iri: &str,
    base: &str,
) -> Result<Vec<IngestedFeature>> {
    let doc: serde_json::Value =
        serde_json::from_str(text).context("GeoJSON is not valid JSON")?;
    if doc["type"] != "FeatureCollection" {
        bail!("expected a GeoJSON FeatureCollection");
    }
    let features = doc["features"]
        .as_array()
        .ok_or_else(|| anyhow!("FeatureCollection has no `features` array"))?;

    let mut out = Vec::with_capacity(features.len());
    let start = next_feature_index(graph, base);
    for (offset, feature) in features.iter().enumerate() {
        let index = start + offset;
        let geometry = geojson_geometry(&feature["geometry"])?;
        let f_iri = feature_iri(base, index);
        let g_iri = geom_iri(base, index);

        graph.insert_terms(
            Term::iri(f_iri.clone()),
            Term::iri(vocab::RDF_TYPE),
            Term::iri(class_iri),
        )?;
        graph.insert_terms(
            Term::iri(f_iri.clone()),
            Term::iri(vocab::GEO_HAS_GEOMETRY),
            Term::iri(g_iri.clone()),
        )?;
        graph.insert_terms(
            Term::iri(g_iri.clone()),
            Term::iri(vocab::RDF_TYPE),
            Term::iri(vocab::GEO_GEOMETRY_CLASS),
        )?;
        graph.insert_terms(
            Term::iri(g_iri),
            Term::iri(vocab::GEO_AS_WKT),
            Term::typed_literal(to_wkt(&geometry), vocab::WKT_LITERAL),
        )?;
        if let Some(props) = feature["properties"].as_object() {
            for (key, value) in props {
                let Some(literal) = property_literal(value) else {
                    continue;
                };
                graph.insert_terms(
                    Term::iri(f_iri.clone()),
                    Term::iri(format!("{}{key}", vocab::EX_NS)),
                    literal,
                )?;
            }
        }
        out.push(IngestedFeature {
            iri: f_iri,
            geometry,
        });
    }
    Ok(out)
}

fn geojson_geometry(value: &serde_json::Value) -> Result<Geometry<f64>> {
    let kind = value["type"]
        .as_str()
        .ok_or_else(|| anyhow!("feature geometry has no `type`"))?;
    let coords = &value["coordinates"];
    let pair = |v: &serde_json::Value| -> Result<Point<f64>> {
        let xy = v
            .as_array()
            .filter(|a| a.len() >= 2)
            .ok_or_else(|| anyhow!("coordinate must be an [x, y] array"))?;
        Ok(Point::new(
            xy[0].as_f64().ok_or_else(|| anyhow!("non-numeric coordinate"))?,
            xy[1].as_f64().ok_or_else(|| anyhow!("non-numeric coordinate"))?,
        ))
    };
    match kind {
        "Point" => Ok(Geometry::Point(pair(coords)?)),
        "LineString" => {
            let pts = coords
                .as_array()
                .ok_or_else(|| anyhow!("LineString coordinates must be an array"))?
                .iter()
                .map(pair)
                .collect::<Result<Vec<_>>>()?;
            Ok(Geometry::LineString(
                LineString::new(pts).map_err(|e| anyhow!("{e}"))?,
            ))
        }
        "Polygon" => {
            let rings = coords
                .as_array()
                .ok_or_else(|| anyhow!("Polygon coordinates must be an array"))?;
            let outer = rings
                .first()
                .ok_or_else(|| anyhow!("Polygon has no rings"))?
                .as_array()
                .ok_or_else(|| anyhow!("Polygon ring must be an array"))?;
            if rings.len() > 1 {
                bail!("polygon holes are not supported");
            }
            let pts = outer.iter().map(pair).collect::<Result<Vec<_>>>()?;
            Ok(Geometry::Polygon(
                Polygon::new(pts).map_err(|e| anyhow!("{e}"))?,
            ))
        }
        other => bail!("unsupported GeoJSON geometry type `{other}`"),
    }
}

/// Scalar GeoJSON property to a typed literal; ISO timestamps become
/// xsd:dateTime.
fn property_literal(value: &serde_json::Value) -> Option<Term> {
    match value {
        serde_json::Value::String(s) => {
            if chrono::DateTime::parse_from_rfc3339(s).is_ok() {
                Some(Term::typed_literal(s, vocab::XSD_DATETIME))
            } else {
                Some(Term::string_literal(s))
            }
        }
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(Term::typed_literal(i.to_string(), vocab::XSD_INTEGER))
            } else {
                n.as_f64()
                    .map(|f| Term::typed_literal(format!("{f}"), vocab::XSD_DOUBLE))
            }
        }
        serde_json::Value::Bool(b) => Some(Term::boolean_literal(*b)),
        _ => None,
    }
}

/// Ingests an ESRI ASCII raster as a feature with the coverage shape:
/// feature (typed, hasCoverage and its asCoverage alias), coverage node
/// (typed geo2:Raster, CoverageJSON literal, scale link), scale node (typed
/// om:Scale with unit label and NODATA value). Returns the feature IRI and
/// the parsed raster.
pub fn ingest_asc_raster(
    graph: &mut Graph,
    text: &str,
    class_iri: &str,
    unit_label: &str,
    base: &str,
) -> Result<(String, Raster)> {
    let raster = parse_asc_grid(text).map_err(|e| anyhow!("{e}"))?;
    let raster = relabel(raster, unit_label);
    let index = next_feature_index(graph, base);
    let f_iri = feature_iri(base, index);
    let cov_iri = format!("{base}/coverage/{index}");
    let scale_iri = format!("{base}/scale/{index}");

    graph.insert_terms(
        Term::iri(f_iri.clone()),
        Term::iri(vocab::RDF_TYPE),
        Term::iri(class_iri),
    )?;
    for property in [vocab::GEO2_HAS_COVERAGE, vocab::GEO2_AS_COVERAGE] {
        graph.insert_terms(
            Term::iri(f_iri.clone()),
            Term::iri(property),
            Term::iri(cov_iri.clone()),
        )?;
    }
    graph.insert_terms(
        Term::iri(cov_iri.clone()),
        Term::iri(vocab::RDF_TYPE),
        Term::iri(vocab::GEO2_RASTER_CLASS),
    )?;
    graph.insert_terms(
        Term::iri(cov_iri.clone()),
        Term::iri(vocab::GEO2_AS_COVERAGE_JSON),
        Term::typed_literal(write_coverage_json(&raster), vocab::COVJSON_LITERAL),
    )?;
    graph.insert_terms(
        Term::iri(cov_iri),
        Term::iri(vocab::GEO2_HAS_SCALE),
        Term::iri(scale_iri.clone()),
    )?;
    graph.insert_terms(
        Term::iri(scale_iri.clone()),
        Term::iri(vocab::RDF_TYPE),
        Term::iri(vocab::OM_SCALE_CLASS),
    )?;
    graph.insert_terms(
        Term::iri(scale_iri.clone()),
        Term::iri(vocab::OM_UNIT),
        Term::string_literal(unit_label),
    )?;
    graph.insert_terms(
        Term::iri(scale_iri),
        Term::iri(vocab::GEO2_NODATA_VALUE),
        Term::typed_literal(format!("{}", raster.nodata()), vocab::XSD_DOUBLE),
    )?;
    Ok((f_iri, raster))
}

fn relabel(raster: Raster, unit_label: &str) -> Raster {
    let mut scale = raster.scale().clone();
    scale.unit_label = unit_label.to_string();
    Raster::new(
        raster.origin_x(),
        raster.origin_y(),
        raster.cell_width(),
        raster.cell_height(),
        raster.n_cols(),
        raster.n_rows(),
        raster.values().to_vec(),
        scale,
    )
    .expect("relabeled raster keeps its shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROADS: &str = r#"{
        "type": "FeatureCollection",
        "features": [
            { "type": "Feature", "properties": {},
              "geometry": { "type": "LineString", "coordinates": [[0,0],[10,0]] } },
            { "type": "Feature", "properties": {},
              "geometry": { "type": "LineString", "coordinates": [[0,5],[10,5]] } },
            { "type": "Feature", "properties": {},
              "geometry": { "type": "LineString", "coordinates": [[0,9],[10,9]] } }
        ]
    }"#;

    #[test]
    fn three_roads_make_twelve_triples() {
        let mut graph = Graph::new();
        let features = ingest_geojson(
            &mut graph,
            ROADS,
            "http://example.org/Road",
            DEFAULT_BASE_IRI,
        )
        .unwrap();
        assert_eq!(features.len(), 3);
        // Per feature: type, hasGeometry, geometry type, asWKT.
        assert_eq!(graph.len(), 3 * 4);
    }

    #[test]
    fn empty_collection_adds_nothing() {
        let mut graph = Graph::new();
        let features = ingest_geojson(
            &mut graph,
            r#"{"type":"FeatureCollection","features":[]}"#,
            "http://example.org/Road",
            DEFAULT_BASE_IRI,
        )
        .unwrap();
        assert!(features.is_empty());
        assert!(graph.is_empty());
    }

    #[test]
    fn scalar_properties_become_typed_literals() {
        let doc = r#"{
            "type": "FeatureCollection",
            "features": [
                { "type": "Feature",
                  "properties": { "openTime": "2019-05-23T08:00:00+05:30",
                                  "closeTime": "2019-05-23T20:00:00+05:30" },
                  "geometry": { "type": "Point", "coordinates": [1, 2] } }
            ]
        }"#;
        let mut graph = Graph::new();
        ingest_geojson(&mut graph, doc, "http://example.org/EAR", DEFAULT_BASE_IRI)
            .unwrap();
        assert_eq!(graph.len(), 4 + 2);
        let has_datetime = graph.triples().any(|t| {
            matches!(t.object.as_ref(), Term::Literal { datatype, .. }
                if datatype == vocab::XSD_DATETIME)
        });
        assert!(has_datetime);
    }

    #[test]
    fn unsupported_geometry_type_errors() {
        let doc = r#"{
            "type": "FeatureCollection",
            "features": [
                { "type": "Feature", "properties": {},
                  "geometry": { "type": "MultiPoint", "coordinates": [[1,2]] } }
            ]
        }"#;
        let mut graph = Graph::new();
        assert!(ingest_geojson(
            &mut graph,
            doc,
            "http://example.org/X",
            DEFAULT_BASE_IRI
        )
        .is_err());
    }

    #[test]
    fn asc_ingestion_builds_the_coverage_shape() {
        let asc = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n\
                   NODATA_value -9999\n3 4\n1 -9999\n";
        let mut graph = Graph::new();
        let (iri, raster) = ingest_asc_raster(
            &mut graph,
            asc,
            "http://example.org/FloodRiskArea",
            "cm",
            DEFAULT_BASE_IRI,
        )
        .unwrap();
        assert_eq!(iri, "http://example.org/feature/0");
        // feature: type + hasCoverage + asCoverage; coverage: type + literal
        // + scale link; scale: type + unit + nodata.
        assert_eq!(graph.len(), 9);
        assert_eq!(raster.valid_cell_count(), 3);

        // The emitted literal re-parses to the directly parsed raster.
        let literal = graph
            .triples()
            .find_map(|t| match (t.predicate.as_ref(), t.object.as_ref()) {
                (Term::Iri(p), Term::Literal { lexical, .. })
                    if p == vocab::GEO2_AS_COVERAGE_JSON =>
                {
                    Some(lexical.clone())
                }
                _ => None,
            })
            .unwrap();
        let reparsed =
            rastergraph_core::rasterio::parse_coverage_json(&literal).unwrap();
        assert!(reparsed.val_eq(&raster));
    }

    #[test]
    fn feature_indexes_continue_across_loads() {
        let mut graph = Graph::new();
        ingest_geojson(&mut graph, ROADS, "http://example.org/Road", DEFAULT_BASE_IRI)
            .unwrap();
        let second = ingest_geojson(
            &mut graph,
            ROADS,
            "http://example.org/Road",
            DEFAULT_BASE_IRI,
        )
        .unwrap();
        assert_eq!(second[0].iri, "http://example.org/feature/3");
    }
}
