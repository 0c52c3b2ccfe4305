//! Embedded RDF store and query engine for GeoSPARQL+: SPARQL basic graph
//! patterns extended with vector geometry literals, raster literals, map
//! algebra operators and raster-aware filter functions.
//!
//! The geometry and raster layers are generic over the scalar type (any
//! [`Scalar`], i.e. `f32` or `f64`); the RDF, query and evaluation layers
//! work on the `f64` aliases exported from the crate root.

pub mod eval;
pub mod geom;
pub mod query;
pub mod raster;
pub mod rasterio;
pub mod rdf;
pub mod scalar;
pub mod vocab;

pub use scalar::Scalar;

/// Default geometry type used by the query engine.
pub type Geometry = geom::Geometry<f64>;
/// Default point type.
pub type Point = geom::Point<f64>;
/// Default axis-aligned rectangle.
pub type Rect = geom::Rect<f64>;
/// Default point-set region representation.
pub type PointSetRegion = geom::PointSetRegion<f64>;
/// Default raster type used by the query engine.
pub type Raster = raster::Raster<f64>;
/// Default raster scale descriptor.
pub type Scale = raster::Scale<f64>;
