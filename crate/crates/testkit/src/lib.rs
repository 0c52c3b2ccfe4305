//! Test-only oracles and random fixture generators. Everything here is an
//! independent reimplementation of the contracts under test: brute-force
//! scans, per-cell rules and sampling, kept deliberately separate from the
//! engine's own code paths.

pub mod geomoracle;
pub mod rasteroracle;
pub mod sparqloracle;
