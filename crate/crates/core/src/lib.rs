//! Citation indicators (HCP count, h-index and simple baselines), ranking
//! consistency checks under uniform citation improvements and time
//! aggregation, and an exhaustive search for small counterexamples.

pub mod axioms;
pub mod cli;
pub mod document;
pub mod error;
pub mod model;
pub mod repro;
pub mod search;
pub mod transforms;

pub use error::{Error, Result};
pub use model::{CitationRecord, Fraction, IndicatorKind, IndicatorSpec, Threshold};
pub use transforms::{Improvement, RoundingMode, TimePartitionedRecord};
