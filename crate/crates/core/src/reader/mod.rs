//! Ontology readers: the JSON interchange format and an RDF/XML frontend
//! restricted to the constructs the transformation engine consumes.

mod json;
mod rdfxml;

use std::collections::BTreeMap;
use std::path::Path;

pub use json::{read_json, write_json};
pub use rdfxml::read_rdfxml;

use crate::diagnostic::Diagnostic;
use crate::ontology::Ontology;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReaderConfig {
    /// Abort on constructs outside the supported vocabulary instead of
    /// skipping them with a warning.
    pub strict: bool,
    pub base_iri: Option<String>,
}

impl ReaderConfig {
    pub fn strict() -> Self {
        ReaderConfig { strict: true, base_iri: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadReport {
    pub ontology: Ontology,
    pub warnings: Vec<Diagnostic>,
    /// Skipped constructs, by qualified name.
    pub skipped_constructs: BTreeMap<String, usize>,
}

impl ReadReport {
    fn clean(ontology: Ontology) -> Self {
        ReadReport { ontology, warnings: Vec::new(), skipped_constructs: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadError {
    #[error("malformed input at {position}: {detail}")]
    MalformedInput { position: String, detail: String },
    #[error("unsupported construct '{0}'")]
    UnsupportedConstruct(String),
    #[error("unresolved reference '{0}'")]
    UnresolvedReference(String),
    #[error("schema violation at {path}: {detail}")]
    SchemaViolation { path: String, detail: String },
    #[error("ontology violates {} invariant(s); first: {}", .0.len(), .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
    InvalidOntology(Vec<Diagnostic>),
    #[error("cannot read '{path}': {detail}")]
    Io { path: String, detail: String },
}

/// Read an ontology file, choosing the format from its extension
/// (`.json` is the interchange format, anything else is RDF/XML).
pub fn read_path(path: &Path, config: &ReaderConfig) -> Result<ReadReport, ReadError> {
    let bytes = std::fs::read(path)
        .map_err(|e| ReadError::Io { path: path.display().to_string(), detail: e.to_string() })?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        read_json(&bytes)
    } else {
        read_rdfxml(&bytes, config)
    }
}

/// Complete one-sided `inverse_of` declarations; the inverse relation is symmetric.
fn complete_inverses(ontology: &mut Ontology) {
    let pairs: Vec<(String, String)> = ontology
        .properties
        .values()
        .filter_map(|p| p.inverse_of.clone().map(|q| (p.name.clone(), q)))
        .collect();
    for (p, q) in pairs {
        if let Some(inv) = ontology.properties.get_mut(&q) {
            if inv.inverse_of.is_none() {
                inv.inverse_of = Some(p);
            }
        }
    }
}

fn finish(mut ontology: Ontology) -> Result<Ontology, ReadError> {
    complete_inverses(&mut ontology);
    let diagnostics = ontology.validate();
    if diagnostics.is_empty() {
        Ok(ontology)
    } else {
        Err(ReadError::InvalidOntology(diagnostics))
    }
}
