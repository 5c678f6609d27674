//! JSON record documents: the input format of the command-line tool and the
//! export format of the built-in fixtures.
//!
//! ```json
//! {
//!   "threshold": 10,
//!   "scientists": [
//!     { "name": "V", "papers": [10, 0] },
//!     { "name": "W", "papers": [5, 5] }
//!   ]
//! }
//! ```
//!
//! `papers` is either a flat list of citation counts or a list of per-period
//! lists (one inner list per period, all of the same length).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CitationRecord, Threshold};
use crate::transforms::TimePartitionedRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u64>,
    pub scientists: Vec<ScientistEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScientistEntry {
    pub name: String,
    pub papers: Papers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Papers {
    Flat(Vec<u64>),
    Periods(Vec<Vec<u64>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum ScientistData {
    Flat(CitationRecord),
    Periods(TimePartitionedRecord),
}

impl ScientistData {
    pub fn to_papers(&self) -> Papers {
        match self {
            Self::Flat(r) => Papers::Flat(r.counts().to_vec()),
            Self::Periods(tp) => {
                Papers::Periods(tp.periods().iter().map(|p| p.counts().to_vec()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scientist {
    pub name: String,
    pub data: ScientistData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentShape {
    /// No scientists, so neither shape is implied.
    Empty,
    Flat,
    /// Per-period records, all with this many periods.
    Periods(usize),
}

/// A validated record document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub threshold: Option<Threshold>,
    pub scientists: Vec<Scientist>,
    pub shape: DocumentShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl RecordDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn validate(&self) -> Result<Document, DocumentError> {
        let threshold = self
            .threshold
            .map(|t| Threshold::new(t).map_err(|e| field_error("threshold", e.to_string())))
            .transpose()?;

        let mut names = HashSet::new();
        let mut shape = DocumentShape::Empty;
        let mut scientists = Vec::with_capacity(self.scientists.len());
        for (i, entry) in self.scientists.iter().enumerate() {
            if !names.insert(entry.name.as_str()) {
                return Err(field_error(
                    format!("scientists[{i}].name"),
                    format!("duplicate scientist name {:?}", entry.name),
                ));
            }
            let field = format!("scientists[{i}].papers");
            let (data, this_shape) = match &entry.papers {
                Papers::Flat(counts) => (
                    ScientistData::Flat(CitationRecord::new(counts.clone())),
                    DocumentShape::Flat,
                ),
                Papers::Periods(periods) => {
                    let tp = TimePartitionedRecord::new(
                        periods.iter().cloned().map(CitationRecord::new).collect(),
                    )
                    .map_err(|e| field_error(&field, e.to_string()))?;
                    let n = tp.period_count();
                    (ScientistData::Periods(tp), DocumentShape::Periods(n))
                }
            };
            match (shape, this_shape) {
                (DocumentShape::Empty, s) => shape = s,
                (a, b) if a == b => {}
                (DocumentShape::Periods(n), DocumentShape::Periods(m)) => {
                    return Err(field_error(
                        field,
                        format!("{m} periods, but earlier scientists have {n}"),
                    ))
                }
                _ => {
                    return Err(field_error(
                        field,
                        "mixes flat and per-period citation lists in one document",
                    ))
                }
            }
            scientists.push(Scientist {
                name: entry.name.clone(),
                data,
            });
        }
        Ok(Document {
            threshold,
            scientists,
            shape,
        })
    }
}

/// Parses and validates a document in one step.
pub fn load_document(text: &str) -> Result<Document, DocumentError> {
    RecordDocument::parse(text)?.validate()
}
