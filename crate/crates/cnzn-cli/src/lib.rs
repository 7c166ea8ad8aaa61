//! Command-line layer: configuration, exact JSON encodings, the report cache and
//! report rendering.

pub mod cache;
pub mod codec;
pub mod commands;
pub mod report;
