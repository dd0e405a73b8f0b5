//! Conceptual data models from OWL domain ontologies.
//!
//! The pipeline reads an ontology ([`reader`]), maps it onto a conceptual
//! model with the seven transformation rules ([`transform`]), checks the
//! result against the OntoClean/BWW modelling rules ([`ontoclean`]), and
//! measures it ([`metrics`]). [`emit`] renders models as PlantUML or JSON.

pub mod bounds;
pub mod cli;
pub mod cdm;
pub mod diagnostic;
pub mod emit;
pub mod graph;
pub mod json;
pub mod metrics;
pub mod ontoclean;
pub mod ontology;
pub mod reader;
pub mod transform;

pub use bounds::Bounds;
pub use cdm::{Attribute, ConceptualModel, EntityType, ModelCounts, Relationship};
pub use diagnostic::{Code, Diagnostic, Repair, Severity};
pub use ontology::{OntoClass, OntoProperty, Ontology};
pub use transform::{transform, TransformOptions, TransformTrace};
pub use ontoclean::{classify_category, Category, MetaAnnotation, Rigidity};
