//! Raster literal formats: CoverageJSON (the raster literal serialization),
//! ESRI ASCII grids for ingestion and a versioned hex WKB export. All
//! formats operate on `f64` rasters.

mod asc;
mod covjson;
mod hexwkb;

pub use asc::{parse_asc_grid, write_asc_grid};
pub use covjson::{parse_coverage_json, write_coverage_json};
pub use hexwkb::{parse_raster_hex_wkb, write_raster_hex_wkb};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("axis `{axis}` values are not uniformly spaced")]
    NonUniformAxis { axis: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("hex raster literal: {0}")]
    Hex(String),
}

/// A raster literal: a lexical form paired with its datatype IRI, keeping
/// raster literals disjoint from geometry literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterLiteral {
    pub lexical_form: String,
    pub datatype_iri: String,
}

impl RasterLiteral {
    pub fn coverage_json(lexical_form: String) -> RasterLiteral {
        RasterLiteral {
            lexical_form,
            datatype_iri: crate::vocab::COVJSON_LITERAL.to_string(),
        }
    }
}
