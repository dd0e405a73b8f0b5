use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{finish, ReadError, ReadReport};
use crate::ontology::{ClassKind, OntoClass, OntoProperty, Ontology, PropertyKind, RestrictionSpec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OntologyDoc {
    iri: String,
    #[serde(default)]
    classes: Vec<ClassDoc>,
    #[serde(default)]
    properties: Vec<PropertyDoc>,
    #[serde(default)]
    subsumptions: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    kind: ClassKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    operands: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    restriction: Option<RestrictionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    annotations: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct PropertyDoc {
    name: String,
    kind: PropertyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    range: String,
    #[serde(default)]
    functional: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse_of: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    annotations: BTreeMap<String, String>,
}

/// Parse the JSON interchange format.
pub fn read_json(source: &[u8]) -> Result<ReadReport, ReadError> {
    let mut de = serde_json::Deserializer::from_slice(source);
    let doc: OntologyDoc = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        ReadError::SchemaViolation { path, detail: e.into_inner().to_string() }
    })?;
    de.end().map_err(|e| ReadError::SchemaViolation { path: ".".into(), detail: e.to_string() })?;

    let mut ontology = Ontology::new(doc.iri);
    for (i, c) in doc.classes.into_iter().enumerate() {
        if ontology.classes.contains_key(&c.name) {
            return Err(ReadError::SchemaViolation {
                path: format!("classes[{i}].name"),
                detail: format!("duplicate class name '{}'", c.name),
            });
        }
        ontology.add_class(OntoClass {
            name: c.name,
            kind: c.kind,
            operands: c.operands,
            restriction: c.restriction,
            annotations: c.annotations,
        });
    }
    for (i, p) in doc.properties.into_iter().enumerate() {
        if ontology.properties.contains_key(&p.name) {
            return Err(ReadError::SchemaViolation {
                path: format!("properties[{i}].name"),
                detail: format!("duplicate property name '{}'", p.name),
            });
        }
        ontology.add_property(OntoProperty {
            name: p.name,
            kind: p.kind,
            domain: p.domain,
            range: p.range,
            functional: p.functional,
            inverse_of: p.inverse_of,
            annotations: p.annotations,
        });
    }
    ontology.subsumptions = doc.subsumptions.into_iter().collect::<BTreeSet<_>>();
    Ok(ReadReport::clean(finish(ontology)?))
}

/// Canonical JSON: sorted keys, classes and properties ordered by name.
pub fn write_json(ontology: &Ontology) -> String {
    let doc = OntologyDoc {
        iri: ontology.iri.clone(),
        classes: ontology
            .classes
            .values()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                kind: c.kind,
                operands: c.operands.clone(),
                restriction: c.restriction.clone(),
                annotations: c.annotations.clone(),
            })
            .collect(),
        properties: ontology
            .properties
            .values()
            .map(|p| PropertyDoc {
                name: p.name.clone(),
                kind: p.kind,
                domain: p.domain.clone(),
                range: p.range.clone(),
                functional: p.functional,
                inverse_of: p.inverse_of.clone(),
                annotations: p.annotations.clone(),
            })
            .collect(),
        subsumptions: ontology.subsumptions.iter().cloned().collect(),
    };
    crate::json::to_canonical_string(&doc)
}
