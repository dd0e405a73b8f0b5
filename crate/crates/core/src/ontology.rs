//! In-memory form of the OWL subset consumed by the transformation engine.
//!
//! Classes and properties live in separate namespaces keyed by name.
//! `owl:Thing` and `owl:Nothing` are never stored; [`Ontology::resolve`]
//! answers them with [`Builtin`] sentinels. Anonymous classes produced by
//! the readers carry names starting with [`ANON_PREFIX`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::diagnostic::{Code, Diagnostic};

pub const OWL_THING: &str = "owl:Thing";
pub const OWL_NOTHING: &str = "owl:Nothing";
pub const ANON_PREFIX: &str = "_anon:";

/// XML Schema datatypes accepted as attribute types, without prefix.
const XSD_DATATYPES: &[&str] = &[
    "anyURI",
    "base64Binary",
    "boolean",
    "byte",
    "date",
    "dateTime",
    "decimal",
    "double",
    "duration",
    "float",
    "gDay",
    "gMonth",
    "gYear",
    "hexBinary",
    "int",
    "integer",
    "language",
    "long",
    "negativeInteger",
    "nonNegativeInteger",
    "nonPositiveInteger",
    "normalizedString",
    "positiveInteger",
    "short",
    "string",
    "time",
    "token",
    "unsignedByte",
    "unsignedInt",
    "unsignedLong",
    "unsignedShort",
];

/// Whether `name` denotes a datatype (`xsd:string`, `string`, `rdfs:Literal`, ...).
pub fn is_datatype(name: &str) -> bool {
    if name == "rdfs:Literal" || name == "Literal" {
        return true;
    }
    let local = name.strip_prefix("xsd:").unwrap_or(name);
    XSD_DATATYPES.contains(&local)
}

pub fn is_anonymous(name: &str) -> bool {
    name.starts_with(ANON_PREFIX)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Thing,
    Nothing,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Builtin> {
        match name {
            OWL_THING => Some(Builtin::Thing),
            OWL_NOTHING => Some(Builtin::Nothing),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Thing => OWL_THING,
            Builtin::Nothing => OWL_NOTHING,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Named,
    Intersection,
    Union,
    Restriction,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filler {
    Class(String),
    Datatype(String),
}

impl Filler {
    pub fn name(&self) -> &str {
        match self {
            Filler::Class(n) | Filler::Datatype(n) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Constraint {
    SomeValuesFrom,
    AllValuesFrom,
    Cardinality(Bounds),
}

impl Constraint {
    /// Occurrence bounds the constraint imposes on the filler end.
    pub fn bounds(self) -> Bounds {
        match self {
            Constraint::SomeValuesFrom => Bounds::AT_LEAST_ONE,
            Constraint::AllValuesFrom => Bounds::ANY,
            Constraint::Cardinality(b) => b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RestrictionSpec {
    pub on_property: String,
    pub filler: Filler,
    pub constraint: Constraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntoClass {
    pub name: String,
    pub kind: ClassKind,
    pub operands: Vec<String>,
    pub restriction: Option<RestrictionSpec>,
    pub annotations: BTreeMap<String, String>,
}

impl OntoClass {
    pub fn named(name: impl Into<String>) -> Self {
        OntoClass {
            name: name.into(),
            kind: ClassKind::Named,
            operands: Vec::new(),
            restriction: None,
            annotations: BTreeMap::new(),
        }
    }

    pub fn intersection(name: impl Into<String>, operands: Vec<String>) -> Self {
        OntoClass { kind: ClassKind::Intersection, operands, ..OntoClass::named(name) }
    }

    pub fn union(name: impl Into<String>, operands: Vec<String>) -> Self {
        OntoClass { kind: ClassKind::Union, operands, ..OntoClass::named(name) }
    }

    pub fn restriction(name: impl Into<String>, spec: RestrictionSpec) -> Self {
        OntoClass {
            kind: ClassKind::Restriction,
            restriction: Some(spec),
            ..OntoClass::named(name)
        }
    }

    pub fn is_anonymous(&self) -> bool {
        is_anonymous(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    /// Relates two classes (object property).
    Mutual,
    /// Relates a class to a datatype (datatype property).
    Intrinsic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntoProperty {
    pub name: String,
    pub kind: PropertyKind,
    pub domain: Option<String>,
    pub range: String,
    pub functional: bool,
    pub inverse_of: Option<String>,
    pub annotations: BTreeMap<String, String>,
}

impl OntoProperty {
    pub fn mutual(name: impl Into<String>, domain: Option<&str>, range: impl Into<String>) -> Self {
        OntoProperty {
            name: name.into(),
            kind: PropertyKind::Mutual,
            domain: domain.map(str::to_string),
            range: range.into(),
            functional: false,
            inverse_of: None,
            annotations: BTreeMap::new(),
        }
    }

    pub fn intrinsic(name: impl Into<String>, domain: Option<&str>, range: impl Into<String>) -> Self {
        OntoProperty { kind: PropertyKind::Intrinsic, ..OntoProperty::mutual(name, domain, range) }
    }

    pub fn functional(mut self) -> Self {
        self.functional = true;
        self
    }

    pub fn inverse_of(mut self, other: impl Into<String>) -> Self {
        self.inverse_of = Some(other.into());
        self
    }

    /// Marked as a part-of (aggregation) property via the `partOf=true` annotation.
    pub fn is_part_of(&self) -> bool {
        self.annotations.get("partOf").map(String::as_str) == Some("true")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ontology {
    pub iri: String,
    pub classes: BTreeMap<String, OntoClass>,
    pub properties: BTreeMap<String, OntoProperty>,
    /// `(sub, super)` pairs.
    pub subsumptions: BTreeSet<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved<'a> {
    Class(&'a OntoClass),
    Property(&'a OntoProperty),
    Builtin(Builtin),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("unknown name '{0}'")]
    UnknownName(String),
}

impl Ontology {
    pub fn new(iri: impl Into<String>) -> Self {
        Ontology { iri: iri.into(), ..Default::default() }
    }

    pub fn add_class(&mut self, class: OntoClass) -> &mut Self {
        self.classes.insert(class.name.clone(), class);
        self
    }

    pub fn add_property(&mut self, property: OntoProperty) -> &mut Self {
        self.properties.insert(property.name.clone(), property);
        self
    }

    pub fn add_subsumption(&mut self, sub: impl Into<String>, sup: impl Into<String>) -> &mut Self {
        self.subsumptions.insert((sub.into(), sup.into()));
        self
    }

    /// Look a name up, classes first, then properties, then built-ins.
    pub fn resolve(&self, name: &str) -> Result<Resolved<'_>, OntologyError> {
        if let Some(c) = self.classes.get(name) {
            return Ok(Resolved::Class(c));
        }
        if let Some(p) = self.properties.get(name) {
            return Ok(Resolved::Property(p));
        }
        Builtin::from_name(name)
            .map(Resolved::Builtin)
            .ok_or_else(|| OntologyError::UnknownName(name.to_string()))
    }

    /// Declared class or built-in.
    pub fn is_class_name(&self, name: &str) -> bool {
        self.classes.contains_key(name) || Builtin::from_name(name).is_some()
    }

    pub fn named_class_count(&self) -> usize {
        self.classes.values().filter(|c| !c.is_anonymous()).count()
    }

    pub fn direct_supers<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.subsumptions.iter().filter(move |(s, _)| s == name).map(|(_, sup)| sup.as_str())
    }

    pub fn direct_subs<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.subsumptions.iter().filter(move |(_, sup)| sup == name).map(|(s, _)| s.as_str())
    }

    /// Every class name mentioned by an edge, operand, restriction, domain or range.
    pub fn referenced_class_names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for (sub, sup) in &self.subsumptions {
            out.insert(sub.as_str());
            out.insert(sup.as_str());
        }
        for c in self.classes.values() {
            out.extend(c.operands.iter().map(String::as_str));
            if let Some(Filler::Class(f)) = c.restriction.as_ref().map(|r| &r.filler) {
                out.insert(f.as_str());
            }
        }
        for p in self.properties.values() {
            out.extend(p.domain.as_deref());
            if p.kind == PropertyKind::Mutual {
                out.insert(p.range.as_str());
            }
        }
        out
    }

    /// Check every structural invariant; empty result means well-formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_ontology(self)
    }
}

pub fn validate_ontology(ontology: &Ontology) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let unknown = |what: &str, owner: &str, name: &str| {
        Diagnostic::new(
            Code::UnknownReference,
            [owner, name],
            format!("{what} of '{owner}' references undeclared class '{name}'"),
        )
    };

    for (key, c) in &ontology.classes {
        if key != &c.name {
            out.push(Diagnostic::new(
                Code::NameMismatch,
                [key.as_str(), c.name.as_str()],
                format!("class stored under '{key}' is named '{}'", c.name),
            ));
        }
        if Builtin::from_name(&c.name).is_some() {
            out.push(Diagnostic::new(
                Code::BuiltinDeclared,
                [c.name.as_str()],
                format!("built-in '{}' must not be declared as a class", c.name),
            ));
        }
        let arity_ok = match c.kind {
            ClassKind::Named => c.operands.is_empty() && c.restriction.is_none(),
            ClassKind::Intersection | ClassKind::Union => {
                c.operands.len() >= 2 && c.restriction.is_none()
            }
            ClassKind::Restriction => c.operands.is_empty() && c.restriction.is_some(),
        };
        if !arity_ok {
            out.push(Diagnostic::new(
                Code::OperandArity,
                [c.name.as_str()],
                format!(
                    "{:?} class '{}' has {} operand(s) and {} restriction",
                    c.kind,
                    c.name,
                    c.operands.len(),
                    if c.restriction.is_some() { "a" } else { "no" }
                ),
            ));
        }
        for op in &c.operands {
            if !ontology.is_class_name(op) {
                out.push(unknown("operand", &c.name, op));
            }
        }
        if let Some(r) = &c.restriction {
            out.extend(check_restriction(ontology, &c.name, r));
        }
    }

    for (key, p) in &ontology.properties {
        if key != &p.name {
            out.push(Diagnostic::new(
                Code::NameMismatch,
                [key.as_str(), p.name.as_str()],
                format!("property stored under '{key}' is named '{}'", p.name),
            ));
        }
        if let Some(d) = &p.domain {
            if !ontology.is_class_name(d) {
                out.push(unknown("domain", &p.name, d));
            }
        }
        match p.kind {
            PropertyKind::Mutual if !ontology.is_class_name(&p.range) => {
                out.push(Diagnostic::new(
                    Code::PropertyRangeKind,
                    [p.name.as_str(), p.range.as_str()],
                    format!("mutual property '{}' has range '{}' which is not a class", p.name, p.range),
                ));
            }
            PropertyKind::Intrinsic if !is_datatype(&p.range) => {
                out.push(Diagnostic::new(
                    Code::PropertyRangeKind,
                    [p.name.as_str(), p.range.as_str()],
                    format!(
                        "intrinsic property '{}' has range '{}' which is not a datatype",
                        p.name, p.range
                    ),
                ));
            }
            _ => {}
        }
        if let Some(inv) = &p.inverse_of {
            if p.kind == PropertyKind::Intrinsic {
                out.push(Diagnostic::new(
                    Code::InverseOnIntrinsic,
                    [p.name.as_str()],
                    format!("intrinsic property '{}' declares an inverse", p.name),
                ));
            }
            match ontology.properties.get(inv) {
                None => out.push(Diagnostic::new(
                    Code::UnknownReference,
                    [p.name.as_str(), inv.as_str()],
                    format!("inverse of '{}' references undeclared property '{inv}'", p.name),
                )),
                Some(q) if q.inverse_of.as_deref() != Some(p.name.as_str()) => {
                    out.push(Diagnostic::new(
                        Code::InverseAsymmetry,
                        [p.name.as_str(), inv.as_str()],
                        format!("'{}' is the inverse of '{inv}' but not vice versa", p.name),
                    ))
                }
                Some(q) if q.kind == PropertyKind::Intrinsic && p.kind == PropertyKind::Mutual => {
                    out.push(Diagnostic::new(
                        Code::InverseOnIntrinsic,
                        [p.name.as_str(), inv.as_str()],
                        format!("'{}' names intrinsic property '{inv}' as its inverse", p.name),
                    ))
                }
                Some(_) => {}
            }
        }
    }

    for (sub, sup) in &ontology.subsumptions {
        for name in [sub, sup] {
            if !ontology.is_class_name(name) {
                out.push(unknown("subsumption", sub, name));
            }
        }
    }
    out.extend(subsumption_cycles(ontology));
    out
}

fn check_restriction(ontology: &Ontology, host: &str, r: &RestrictionSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let Some(p) = ontology.properties.get(&r.on_property) else {
        out.push(Diagnostic::new(
            Code::UnknownReference,
            [host, r.on_property.as_str()],
            format!("restriction '{host}' is on undeclared property '{}'", r.on_property),
        ));
        return out;
    };
    match (&r.filler, p.kind) {
        (Filler::Class(c), PropertyKind::Mutual) => {
            if !ontology.is_class_name(c) {
                out.push(Diagnostic::new(
                    Code::UnknownReference,
                    [host, c.as_str()],
                    format!("restriction '{host}' has undeclared filler class '{c}'"),
                ));
            }
        }
        (Filler::Datatype(d), PropertyKind::Intrinsic) => {
            if !is_datatype(d) {
                out.push(Diagnostic::new(
                    Code::RestrictionFillerKind,
                    [host, d.as_str()],
                    format!("restriction '{host}' has unknown datatype filler '{d}'"),
                ));
            }
        }
        (filler, kind) => out.push(Diagnostic::new(
            Code::RestrictionFillerKind,
            [host, r.on_property.as_str()],
            format!(
                "restriction '{host}' pairs filler '{}' with {kind:?} property '{}'",
                filler.name(),
                r.on_property
            ),
        )),
    }
    if let Constraint::Cardinality(b) = r.constraint {
        if b.is_empty() {
            out.push(Diagnostic::new(
                Code::InvalidCardinality,
                [host],
                format!("restriction '{host}' has empty cardinality {}..{:?}", b.min, b.max),
            ));
        }
    }
    out
}

fn subsumption_cycles(ontology: &Ontology) -> Vec<Diagnostic> {
    let edges = ontology.subsumptions.iter().map(|(a, b)| (a.as_str(), b.as_str()));
    crate::graph::cycles(edges)
        .into_iter()
        .map(|members| {
            Diagnostic::new(
                Code::SubsumptionCycle,
                members.iter().copied(),
                format!("subsumption cycle through {}", members.join(", ")),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_declared_builtin_and_unknown() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("protein"));
        assert_eq!(o.resolve("protein").unwrap(), Resolved::Class(&OntoClass::named("protein")));
        assert_eq!(o.resolve("owl:Thing").unwrap(), Resolved::Builtin(Builtin::Thing));
        assert_eq!(
            Ontology::default().resolve("x"),
            Err(OntologyError::UnknownName("x".into()))
        );
    }

    #[test]
    fn two_cycle_reported_once_with_both_members() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A")).add_class(OntoClass::named("B"));
        o.add_subsumption("A", "B").add_subsumption("B", "A");
        let d = validate_ontology(&o);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::SubsumptionCycle);
        assert_eq!(d[0].subjects, vec!["A", "B"]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A")).add_subsumption("A", "A");
        let d = validate_ontology(&o);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::SubsumptionCycle);
    }

    #[test]
    fn inverse_asymmetry() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A")).add_class(OntoClass::named("B"));
        o.add_property(OntoProperty::mutual("p", Some("A"), "B").inverse_of("q"));
        o.add_property(OntoProperty::mutual("q", Some("B"), "A"));
        let d = validate_ontology(&o);
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!(d[0].code, Code::InverseAsymmetry);
    }

    #[test]
    fn arity_and_kind_violations() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A"));
        o.add_class(OntoClass::union("U", vec!["A".into()]));
        o.add_property(OntoProperty::intrinsic("age", Some("A"), "A"));
        o.add_property(OntoProperty::mutual("m", Some("A"), "xsd:string"));
        let codes: Vec<Code> = validate_ontology(&o).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![Code::OperandArity, Code::PropertyRangeKind, Code::PropertyRangeKind]);
    }

    #[test]
    fn restriction_filler_must_match_property_kind() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A"));
        o.add_property(OntoProperty::intrinsic("age", Some("A"), "xsd:int"));
        o.add_class(OntoClass::restriction(
            "_anon:0",
            RestrictionSpec {
                on_property: "age".into(),
                filler: Filler::Class("A".into()),
                constraint: Constraint::SomeValuesFrom,
            },
        ));
        let d = validate_ontology(&o);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::RestrictionFillerKind);
    }

    #[test]
    fn unknown_references() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A"));
        o.add_subsumption("A", "Missing");
        o.add_property(OntoProperty::mutual("p", Some("Nowhere"), "owl:Thing"));
        let d = validate_ontology(&o);
        assert!(d.iter().all(|d| d.code == Code::UnknownReference), "{d:?}");
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn datatype_names() {
        assert!(is_datatype("xsd:string"));
        assert!(is_datatype("integer"));
        assert!(is_datatype("rdfs:Literal"));
        assert!(!is_datatype("protein"));
    }

    #[test]
    fn validation_is_idempotent() {
        let mut o = Ontology::new("urn:test");
        o.add_class(OntoClass::named("A")).add_subsumption("A", "B").add_subsumption("B", "A");
        assert_eq!(validate_ontology(&o), validate_ontology(&o));
    }
}
