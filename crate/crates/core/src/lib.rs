//! Detection, classification and reporting of GUI changes between two
//! versions of a mobile app, from screenshots and UI hierarchy dumps.

pub mod assignment;
pub mod component_match;
pub mod detect;
pub mod error;
pub mod imaging;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod screen_match;
pub mod summary;
pub mod synth;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
