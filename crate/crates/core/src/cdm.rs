//! The generated conceptual data model: entity types, attributes,
//! relationships and generalization edges, plus per-element provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::diagnostic::{Code, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Attribute {
    pub name: String,
    pub datatype: String,
    #[serde(default)]
    pub multiplicity: Bounds,
}

impl Attribute {
    pub fn new(name: impl Into<String>, datatype: impl Into<String>, multiplicity: Bounds) -> Self {
        Attribute { name: name.into(), datatype: datatype.into(), multiplicity }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EntityType {
    pub name: String,
    #[serde(default)]
    pub attributes: Vec<Attribute>,
    /// Aggregate of two or more component types.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub composite: bool,
}

impl EntityType {
    pub fn new(name: impl Into<String>) -> Self {
        EntityType { name: name.into(), attributes: Vec::new(), composite: false }
    }

    pub fn with_attribute(mut self, attribute: Attribute) -> Self {
        self.attributes.push(attribute);
        self
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Relationship {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub source_card: Bounds,
    #[serde(default)]
    pub target_card: Bounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_name: Option<String>,
    /// The target is a component (part) of the source.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub part_of: bool,
}

impl Relationship {
    pub fn new(name: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Relationship {
            name: name.into(),
            source: source.into(),
            target: target.into(),
            source_card: Bounds::ANY,
            target_card: Bounds::ANY,
            inverse_name: None,
            part_of: false,
        }
    }

    pub fn with_target_card(mut self, card: Bounds) -> Self {
        self.target_card = card;
        self
    }

    /// `(name, source, target)`: the identity used for duplicate detection.
    pub fn key(&self) -> (&str, &str, &str) {
        (&self.name, &self.source, &self.target)
    }
}

/// Identifies one element of a model, e.g. for provenance and traces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRef {
    Entity(String),
    Attribute { entity: String, name: String },
    Relationship { name: String, source: String, target: String },
    Generalization { sub: String, sup: String },
}

impl ElementRef {
    pub fn relationship(r: &Relationship) -> Self {
        ElementRef::Relationship {
            name: r.name.clone(),
            source: r.source.clone(),
            target: r.target.clone(),
        }
    }

    pub fn attribute(entity: &str, name: &str) -> Self {
        ElementRef::Attribute { entity: entity.to_string(), name: name.to_string() }
    }

    pub fn generalization(sub: &str, sup: &str) -> Self {
        ElementRef::Generalization { sub: sub.to_string(), sup: sup.to_string() }
    }
}

impl fmt::Display for ElementRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRef::Entity(n) => write!(f, "entity:{n}"),
            ElementRef::Attribute { entity, name } => write!(f, "attribute:{entity}.{name}"),
            ElementRef::Relationship { name, source, target } => {
                write!(f, "relationship:{name}({source},{target})")
            }
            ElementRef::Generalization { sub, sup } => write!(f, "generalization:{sub}<{sup}"),
        }
    }
}

/// Which mapping rule produced an element, from which ontology construct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub rule: u8,
    pub construct: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConceptualModel {
    #[serde(default)]
    pub entity_types: Vec<EntityType>,
    #[serde(default)]
    pub relationships: Vec<Relationship>,
    /// `(sub, super)` pairs.
    #[serde(default)]
    pub generalizations: BTreeSet<(String, String)>,
    /// Keyed by the `Display` form of [`ElementRef`].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, Provenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelCounts {
    pub entity_types: usize,
    pub relationships: usize,
    pub attributes: usize,
    pub generalizations: usize,
}

impl fmt::Display for ModelCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entity types: {}, relationships: {}, attributes: {}, generalizations: {}",
            self.entity_types, self.relationships, self.attributes, self.generalizations
        )
    }
}

impl ConceptualModel {
    pub fn entity(&self, name: &str) -> Option<&EntityType> {
        self.entity_types.iter().find(|e| e.name == name)
    }

    pub fn entity_mut(&mut self, name: &str) -> Option<&mut EntityType> {
        self.entity_types.iter_mut().find(|e| e.name == name)
    }

    pub fn has_entity(&self, name: &str) -> bool {
        self.entity(name).is_some()
    }

    pub fn add_entity(&mut self, entity: EntityType) -> &mut Self {
        self.entity_types.push(entity);
        self
    }

    pub fn add_relationship(&mut self, rel: Relationship) -> &mut Self {
        self.relationships.push(rel);
        self
    }

    pub fn add_generalization(&mut self, sub: impl Into<String>, sup: impl Into<String>) -> &mut Self {
        self.generalizations.insert((sub.into(), sup.into()));
        self
    }

    pub fn outgoing<'a>(&'a self, entity: &'a str) -> impl Iterator<Item = &'a Relationship> + 'a {
        self.relationships.iter().filter(move |r| r.source == entity)
    }

    pub fn incoming<'a>(&'a self, entity: &'a str) -> impl Iterator<Item = &'a Relationship> + 'a {
        self.relationships.iter().filter(move |r| r.target == entity)
    }

    pub fn supers_of<'a>(&'a self, entity: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.generalizations.iter().filter(move |(s, _)| s == entity).map(|(_, p)| p.as_str())
    }

    pub fn subs_of<'a>(&'a self, entity: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.generalizations.iter().filter(move |(_, p)| p == entity).map(|(s, _)| s.as_str())
    }

    /// Every element currently in the model.
    pub fn element_refs(&self) -> BTreeSet<ElementRef> {
        let mut out = BTreeSet::new();
        for e in &self.entity_types {
            out.insert(ElementRef::Entity(e.name.clone()));
            for a in &e.attributes {
                out.insert(ElementRef::attribute(&e.name, &a.name));
            }
        }
        out.extend(self.relationships.iter().map(ElementRef::relationship));
        out.extend(self.generalizations.iter().map(|(s, p)| ElementRef::generalization(s, p)));
        out
    }

    pub fn set_provenance(&mut self, element: &ElementRef, rule: u8, construct: impl Into<String>) {
        self.provenance
            .entry(element.to_string())
            .or_insert_with(|| Provenance { rule, construct: construct.into() });
    }

    /// Sort entity types, attributes and relationships into canonical order
    /// and drop provenance for elements no longer present.
    pub fn canonicalize(&mut self) {
        self.entity_types.sort_by(|a, b| a.name.cmp(&b.name));
        for e in &mut self.entity_types {
            e.attributes.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.datatype.cmp(&b.datatype)));
        }
        self.relationships.sort_by(|a, b| {
            (&a.source, &a.target, &a.name)
                .cmp(&(&b.source, &b.target, &b.name))
                .then_with(|| a.inverse_name.cmp(&b.inverse_name))
        });
        let live: BTreeSet<String> = self.element_refs().iter().map(ToString::to_string).collect();
        self.provenance.retain(|k, _| live.contains(k));
    }

    pub fn counts(&self) -> ModelCounts {
        model_counts(self)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_model(self)
    }
}

pub fn model_counts(model: &ConceptualModel) -> ModelCounts {
    ModelCounts {
        entity_types: model.entity_types.len(),
        relationships: model.relationships.len(),
        attributes: model.entity_types.iter().map(|e| e.attributes.len()).sum(),
        generalizations: model.generalizations.len(),
    }
}

/// Structural checks: references resolve, names are unique, bounds are
/// non-empty, generalization is acyclic.
pub fn validate_model(model: &ConceptualModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for e in &model.entity_types {
        if !names.insert(e.name.as_str()) {
            out.push(Diagnostic::new(
                Code::DuplicateEntity,
                [e.name.as_str()],
                format!("entity type '{}' declared more than once", e.name),
            ));
        }
        let mut attrs = BTreeSet::new();
        for a in &e.attributes {
            if !attrs.insert(a.name.as_str()) {
                out.push(Diagnostic::new(
                    Code::DuplicateAttribute,
                    [e.name.as_str(), a.name.as_str()],
                    format!("attribute '{}' declared more than once on '{}'", a.name, e.name),
                ));
            }
            if a.multiplicity.is_empty() {
                out.push(Diagnostic::new(
                    Code::InvalidMultiplicity,
                    [e.name.as_str(), a.name.as_str()],
                    format!("attribute '{}.{}' has empty multiplicity", e.name, a.name),
                ));
            }
        }
    }

    let mut rels = BTreeSet::new();
    for r in &model.relationships {
        for end in [&r.source, &r.target] {
            if !names.contains(end.as_str()) {
                out.push(Diagnostic::new(
                    Code::DanglingReference,
                    [r.name.as_str(), end.as_str()],
                    format!("relationship '{}' refers to undeclared entity type '{end}'", r.name),
                ));
            }
        }
        if !rels.insert(r.key()) {
            out.push(Diagnostic::new(
                Code::DuplicateRelationship,
                [r.name.as_str(), r.source.as_str(), r.target.as_str()],
                format!("relationship '{}' from '{}' to '{}' declared more than once", r.name, r.source, r.target),
            ));
        }
        if r.source_card.is_empty() || r.target_card.is_empty() {
            out.push(Diagnostic::new(
                Code::InvalidMultiplicity,
                [r.name.as_str()],
                format!("relationship '{}' has an empty cardinality", r.name),
            ));
        }
    }

    for (sub, sup) in &model.generalizations {
        for end in [sub, sup] {
            if !names.contains(end.as_str()) {
                out.push(Diagnostic::new(
                    Code::DanglingReference,
                    [sub.as_str(), sup.as_str()],
                    format!("generalization '{sub}' --|> '{sup}' refers to undeclared entity type '{end}'"),
                ));
            }
        }
    }
    let edges = model.generalizations.iter().map(|(a, b)| (a.as_str(), b.as_str()));
    for members in crate::graph::cycles(edges) {
        out.push(Diagnostic::new(
            Code::GeneralizationCycle,
            members.iter().copied(),
            format!("generalization cycle through {}", members.join(", ")),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_counts_zero() {
        assert_eq!(model_counts(&ConceptualModel::default()), ModelCounts::default());
    }

    #[test]
    fn counts_sum_attributes() {
        let mut m = ConceptualModel::default();
        m.add_entity(
            EntityType::new("protein")
                .with_attribute(Attribute::new("name", "string", Bounds::OPTIONAL))
                .with_attribute(Attribute::new("weight", "float", Bounds::OPTIONAL)),
        );
        assert_eq!(
            m.counts(),
            ModelCounts { entity_types: 1, relationships: 0, attributes: 2, generalizations: 0 }
        );
    }

    #[test]
    fn dangling_relationship() {
        let mut m = ConceptualModel::default();
        m.add_entity(EntityType::new("enzyme"));
        m.add_relationship(Relationship::new("catalysed-by", "enzyme", "reaction"));
        let d = validate_model(&m);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::DanglingReference);
    }

    #[test]
    fn generalization_two_cycle() {
        let mut m = ConceptualModel::default();
        m.add_entity(EntityType::new("A")).add_entity(EntityType::new("B"));
        m.add_generalization("A", "B").add_generalization("B", "A");
        let d = validate_model(&m);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::GeneralizationCycle);
    }

    #[test]
    fn duplicates_and_empty_bounds() {
        let mut m = ConceptualModel::default();
        m.add_entity(
            EntityType::new("A")
                .with_attribute(Attribute::new("x", "string", Bounds::ANY))
                .with_attribute(Attribute::new("x", "string", Bounds::new(2, Some(1)))),
        );
        m.add_entity(EntityType::new("A"));
        m.add_relationship(Relationship::new("r", "A", "A"));
        m.add_relationship(Relationship::new("r", "A", "A"));
        let codes: Vec<Code> = validate_model(&m).into_iter().map(|d| d.code).collect();
        assert_eq!(
            codes,
            vec![
                Code::DuplicateAttribute,
                Code::InvalidMultiplicity,
                Code::DuplicateEntity,
                Code::DuplicateRelationship
            ]
        );
    }

    #[test]
    fn element_ref_display() {
        assert_eq!(ElementRef::Entity("a".into()).to_string(), "entity:a");
        assert_eq!(ElementRef::attribute("a", "b").to_string(), "attribute:a.b");
        assert_eq!(ElementRef::generalization("a", "b").to_string(), "generalization:a<b");
        let r = Relationship::new("r", "a", "b");
        assert_eq!(ElementRef::relationship(&r).to_string(), "relationship:r(a,b)");
    }
}
