//! Library side of the command line front end: workspace ingestion
//! (GeoJSON features, ASCII rasters, RDF documents) and the synthetic
//! hazard corpus generator used for the regression queries.

pub mod corpus;
pub mod workspace;
