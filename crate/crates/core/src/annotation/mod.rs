//! Annotation documents, analysis reports and SVG overlays.
//!
//! All three are UTF-8 text. Documents and reports are JSON written in a
//! canonical form (sorted keys, numbers rounded to nine significant digits)
//! so equal values always serialize to identical bytes.

pub mod canonical;
mod document;
mod overlay;
mod report;

use serde::de::DeserializeOwned;
use thiserror::Error;

pub use document::{
    parse_annotations, write_annotations, AnnotationDocument, ImageSize, LineGroup, SCHEMA_VERSION,
};
pub use overlay::render_overlay;
pub use report::{
    parse_report, write_report, AnalysisReport, CheckSummary, GroupVanishingPoint,
    PointOnLineCheck, ReflectionReport, ShadowReport, SharedVanishingPointEntry,
    VanishingLineEntry,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
}

impl AnnotationError {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Deserializes JSON, separating syntax errors (with position) from schema
/// errors (with the offending field path).
pub(crate) fn deserialize<T: DeserializeOwned>(text: &str) -> Result<T, AnnotationError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        classify(inner, path)
    })?;
    de.end().map_err(|e| classify(e, ".".to_string()))?;
    Ok(value)
}

fn classify(e: serde_json::Error, path: String) -> AnnotationError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => {
            let message = e.to_string();
            // drop serde_json's trailing position, the path says where
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            AnnotationError::Schema {
                field: path,
                message,
            }
        }
        Category::Syntax | Category::Eof | Category::Io => AnnotationError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}
