//! Namespace and term IRIs used by the engine, plus the canonical prefix
//! table shipped with the query parser.

/// GeoSPARQL ontology namespace.
pub const GEO_NS: &str = "http://www.opengis.net/ont/geosparql#";
/// GeoSPARQL filter function namespace.
pub const GEOF_NS: &str = "http://www.opengis.net/def/function/geosparql/";
/// Raster extension namespace.
pub const GEO2_NS: &str = "http://example.org/geo2#";
/// Example-data namespace.
pub const EX_NS: &str = "http://example.org/";
/// Elements-at-risk namespace.
pub const EAR_NS: &str = "http://example.org/ear#";
/// RDF namespace.
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
/// XML Schema datatypes namespace.
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
/// OGC units of measure namespace.
pub const UOM_NS: &str = "http://www.opengis.net/def/uom/OGC/1.0/";
/// Units-of-measurement ontology namespace (scale descriptions).
pub const OM_NS: &str = "http://www.ontology-of-units-of-measure.org/resource/om-2/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_DATETIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

/// Datatype IRI for WKT geometry literals.
pub const WKT_LITERAL: &str = "http://www.opengis.net/ont/geosparql#wktLiteral";
/// Datatype IRI for CoverageJSON raster literals.
pub const COVJSON_LITERAL: &str = "http://example.org/geo2#covJSONLiteral";

pub const GEO_HAS_GEOMETRY: &str = "http://www.opengis.net/ont/geosparql#hasGeometry";
pub const GEO_AS_WKT: &str = "http://www.opengis.net/ont/geosparql#asWKT";
pub const GEO_GEOMETRY_CLASS: &str = "http://www.opengis.net/ont/geosparql#Geometry";

pub const GEO2_RASTER_CLASS: &str = "http://example.org/geo2#Raster";
pub const GEO2_HAS_COVERAGE: &str = "http://example.org/geo2#hasCoverage";
/// Alias of [`GEO2_HAS_COVERAGE`] found in some queries; ingestion emits both.
pub const GEO2_AS_COVERAGE: &str = "http://example.org/geo2#asCoverage";
pub const GEO2_AS_COVERAGE_JSON: &str = "http://example.org/geo2#asCoverageJSON";
pub const GEO2_HAS_SCALE: &str = "http://example.org/geo2#hasScale";
pub const GEO2_NODATA_VALUE: &str = "http://example.org/geo2#nodataValue";

pub const OM_SCALE_CLASS: &str =
    "http://www.ontology-of-units-of-measure.org/resource/om-2/Scale";
pub const OM_UNIT: &str = "http://www.ontology-of-units-of-measure.org/resource/om-2/unit";

/// Placeholder CRS IRI returned by `geof:getsrid`; CRS handling is out of scope.
pub const DEFAULT_CRS: &str = "http://www.opengis.net/def/crs/OGC/1.3/CRS84";

/// Prefixes predeclared for every parsed query and RDF document.
pub const CANONICAL_PREFIXES: &[(&str, &str)] = &[
    ("geo", GEO_NS),
    ("geof", GEOF_NS),
    ("geo2", GEO2_NS),
    ("ex", EX_NS),
    ("ear", EAR_NS),
    ("rdf", RDF_NS),
    ("xsd", XSD_NS),
    ("uom", UOM_NS),
    ("om", OM_NS),
];

/// Expands `prefix:local` against the canonical table. Returns `None` for
/// unknown prefixes.
pub fn expand_canonical(prefixed: &str) -> Option<String> {
    let (prefix, local) = prefixed.split_once(':')?;
    CANONICAL_PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .map(|(_, ns)| format!("{ns}{local}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion() {
        assert_eq!(
            expand_canonical("ex:Road").as_deref(),
            Some("http://example.org/Road")
        );
        assert_eq!(expand_canonical("nope:Road"), None);
    }
}
