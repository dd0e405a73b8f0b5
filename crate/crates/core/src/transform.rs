//! The transformation engine: maps an [`Ontology`] onto a
//! [`ConceptualModel`].
//!
//! Rules run in a fixed order: 1 (classes to entity types), 5
//! (subsumption to generalization), 6 (boolean expressions to
//! generalization), 2 (properties to relationships/attributes), 3 and 4
//! (restrictions to relationships/attributes), then 7 (refinement). Every
//! mapped or skipped construct leaves a [`TraceEntry`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::cdm::{Attribute, ConceptualModel, ElementRef, EntityType, Relationship};
use crate::diagnostic::Diagnostic;
use crate::ontology::{
    is_anonymous, Builtin, ClassKind, Filler, OntoClass, OntoProperty, Ontology, PropertyKind, RestrictionSpec,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOptions {
    /// Transform only what is reachable from these classes; `None` means
    /// the whole ontology.
    pub roots: Option<BTreeSet<String>>,
    pub drop_builtins: bool,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions { roots: None, drop_builtins: true }
    }
}

impl TransformOptions {
    pub fn with_roots<I, S>(roots: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TransformOptions { roots: Some(roots.into_iter().map(Into::into).collect()), ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceAction {
    Produced,
    Merged,
    Removed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceEntry {
    pub rule: u8,
    pub action: TraceAction,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformTrace {
    pub entries: Vec<TraceEntry>,
}

impl TransformTrace {
    fn push(&mut self, rule: u8, action: TraceAction, input: impl Into<String>, output: Option<&ElementRef>) {
        self.entries.push(TraceEntry {
            rule,
            action,
            input: input.into(),
            output: output.map(ToString::to_string),
            reason: None,
        });
    }

    fn push_reason(
        &mut self,
        rule: u8,
        action: TraceAction,
        input: impl Into<String>,
        output: Option<&ElementRef>,
        reason: impl Into<String>,
    ) {
        self.entries.push(TraceEntry {
            rule,
            action,
            input: input.into(),
            output: output.map(ToString::to_string),
            reason: Some(reason.into()),
        });
    }

    fn skip(&mut self, rule: u8, input: impl Into<String>, reason: impl Into<String>) {
        self.push_reason(rule, TraceAction::Skipped, input, None, reason);
    }

    /// Elements left after replaying produced/removed entries in order.
    pub fn replay(&self) -> BTreeSet<String> {
        let mut live = BTreeSet::new();
        for e in &self.entries {
            let Some(out) = &e.output else { continue };
            match e.action {
                TraceAction::Produced => {
                    live.insert(out.clone());
                }
                TraceAction::Removed => {
                    live.remove(out);
                }
                TraceAction::Merged | TraceAction::Skipped => {}
            }
        }
        live
    }

    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("root '{0}' is not a class of the ontology")]
    UnresolvedRoot(String),
    #[error("ontology is not well-formed ({} finding(s))", .0.len())]
    InvalidOntology(Vec<Diagnostic>),
    #[error(transparent)]
    Refine(#[from] RefineError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefineError {
    #[error("merged cardinalities of {element} are inconsistent: {left} and {right} do not overlap")]
    InconsistentCardinalities { element: String, left: Bounds, right: Bounds },
    #[error("attribute {element} is typed both '{left}' and '{right}'")]
    ConflictingDatatypes { element: String, left: String, right: String },
    #[error("generalization cycle through {}", .0.join(", "))]
    GeneralizationCycle(Vec<String>),
}

/// A restriction or property could not be attached because an end lies
/// outside the transformed scope. Recorded as a skip, never a failure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("'{property}' skipped: {detail}")]
pub struct DanglingDomainOrRange {
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mapped {
    Relationship(Relationship),
    Attribute { host: String, attribute: Attribute },
}

impl Mapped {
    pub fn element(&self) -> ElementRef {
        match self {
            Mapped::Relationship(r) => ElementRef::relationship(r),
            Mapped::Attribute { host, attribute } => ElementRef::attribute(host, &attribute.name),
        }
    }
}

/// Rule 1: a class becomes an entity type of the same name.
pub fn map_class(class: &OntoClass) -> EntityType {
    EntityType::new(class.name.clone())
}

/// Rule 2: a mutual property becomes a relationship from its domain to its
/// range; an intrinsic property becomes an attribute of its domain.
///
/// `inverse` is the property named by `p.inverse_of`, when declared; a
/// functional inverse bounds the source end to at most one.
pub fn map_property(
    p: &OntoProperty,
    inverse: Option<&OntoProperty>,
    model: &ConceptualModel,
) -> Result<Mapped, DanglingDomainOrRange> {
    let dangling = |detail: String| DanglingDomainOrRange { property: p.name.clone(), detail };
    let domain = p.domain.as_deref().ok_or_else(|| dangling("no domain declared".into()))?;
    if !model.has_entity(domain) {
        return Err(dangling(format!("domain '{domain}' is not an entity type in scope")));
    }
    match p.kind {
        PropertyKind::Mutual => {
            if !model.has_entity(&p.range) {
                return Err(dangling(format!("range '{}' is not an entity type in scope", p.range)));
            }
            let mut rel = Relationship::new(p.name.clone(), domain, p.range.clone());
            if p.functional {
                rel.target_card = rel.target_card.with_max_one();
            }
            if inverse.is_some_and(|q| q.functional) {
                rel.source_card = rel.source_card.with_max_one();
            }
            rel.inverse_name = p.inverse_of.clone();
            rel.part_of = p.is_part_of();
            Ok(Mapped::Relationship(rel))
        }
        PropertyKind::Intrinsic => {
            let multiplicity = if p.functional { Bounds::OPTIONAL } else { Bounds::ANY };
            Ok(Mapped::Attribute {
                host: domain.to_string(),
                attribute: Attribute::new(p.name.clone(), p.range.clone(), multiplicity),
            })
        }
    }
}

/// Rules 3 and 4: a restriction on `host` becomes a relationship to a
/// class filler, or an attribute typed by a datatype filler.
pub fn map_restriction(
    host: &str,
    r: &RestrictionSpec,
    property: &OntoProperty,
    model: &ConceptualModel,
) -> Result<Mapped, DanglingDomainOrRange> {
    let dangling = |detail: String| DanglingDomainOrRange { property: r.on_property.clone(), detail };
    if !model.has_entity(host) {
        return Err(dangling(format!("host '{host}' is not an entity type in scope")));
    }
    let bounds = r.constraint.bounds();
    match &r.filler {
        Filler::Class(target) => {
            if !model.has_entity(target) {
                return Err(dangling(format!("filler '{target}' is not an entity type in scope")));
            }
            let mut rel = Relationship::new(r.on_property.clone(), host, target.clone()).with_target_card(bounds);
            rel.inverse_name = property.inverse_of.clone();
            rel.part_of = property.is_part_of();
            Ok(Mapped::Relationship(rel))
        }
        Filler::Datatype(dt) => Ok(Mapped::Attribute {
            host: host.to_string(),
            attribute: Attribute::new(r.on_property.clone(), dt.clone(), bounds),
        }),
    }
}

/// Rule 6: `c = A ⊓ B` makes `c` a sub-entity of each operand;
/// `c = A ⊔ B` makes each operand a sub-entity of `c`. Only named operands
/// yield edges.
pub fn map_expression(c: &OntoClass) -> Vec<(String, String)> {
    let named = c.operands.iter().filter(|op| !is_anonymous(op));
    match c.kind {
        ClassKind::Intersection => named.map(|op| (c.name.clone(), op.clone())).collect(),
        ClassKind::Union => named.map(|op| (op.clone(), c.name.clone())).collect(),
        ClassKind::Named | ClassKind::Restriction => Vec::new(),
    }
}

/// Classes (anonymous ones included) reachable from `roots`: up and down
/// subsumption and boolean expressions, from a restriction to its filler,
/// and from a property's domain to its range. Built-ins are included when
/// reached but never expanded.
pub fn scope(ontology: &Ontology, roots: &BTreeSet<String>) -> Result<BTreeSet<String>, TransformError> {
    for r in roots {
        if !ontology.classes.contains_key(r) && Builtin::from_name(r).is_none() {
            return Err(TransformError::UnresolvedRoot(r.clone()));
        }
    }
    let mut neighbours: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (sub, sup) in &ontology.subsumptions {
        neighbours.entry(sub).or_default().push(sup);
        neighbours.entry(sup).or_default().push(sub);
    }
    for c in ontology.classes.values() {
        for op in &c.operands {
            neighbours.entry(&c.name).or_default().push(op);
            neighbours.entry(op).or_default().push(&c.name);
        }
        if let Some(Filler::Class(f)) = c.restriction.as_ref().map(|r| &r.filler) {
            neighbours.entry(&c.name).or_default().push(f);
        }
    }
    for p in ontology.properties.values() {
        if let (Some(d), PropertyKind::Mutual) = (&p.domain, p.kind) {
            neighbours.entry(d).or_default().push(&p.range);
        }
    }

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut queue: VecDeque<&str> = roots.iter().map(String::as_str).collect();
    while let Some(c) = queue.pop_front() {
        if !seen.insert(c.to_string()) || Builtin::from_name(c).is_some() {
            continue;
        }
        if let Some(next) = neighbours.get(c) {
            queue.extend(next.iter().copied().filter(|n| !seen.contains(*n)));
        }
    }
    Ok(seen)
}

/// Everything in the ontology: every class plus referenced built-ins.
fn full_scope(ontology: &Ontology) -> BTreeSet<String> {
    let mut all: BTreeSet<String> = ontology.classes.keys().cloned().collect();
    all.extend(
        ontology
            .referenced_class_names()
            .into_iter()
            .filter(|n| Builtin::from_name(n).is_some())
            .map(str::to_string),
    );
    all
}

struct Engine<'o> {
    ontology: &'o Ontology,
    options: &'o TransformOptions,
    scope: BTreeSet<String>,
    model: ConceptualModel,
    trace: TransformTrace,
    /// `(host, restriction class)` pairs collected by rules 5 and 6.
    attachments: Vec<(String, String)>,
    restriction_hosts: BTreeSet<String>,
}

impl<'o> Engine<'o> {
    fn in_scope(&self, name: &str) -> bool {
        self.scope.contains(name)
    }

    /// A class name that is (or will become) an entity type.
    fn is_entity_name(&self, name: &str) -> bool {
        match Builtin::from_name(name) {
            Some(_) => !self.options.drop_builtins,
            None => !is_anonymous(name),
        }
    }

    fn produce_entity(&mut self, rule: u8, input: String, entity: EntityType) {
        let element = ElementRef::Entity(entity.name.clone());
        self.model.set_provenance(&element, rule, input.clone());
        self.model.entity_types.push(entity);
        self.trace.push(rule, TraceAction::Produced, input, Some(&element));
    }

    fn produce_generalization(&mut self, rule: u8, input: String, sub: &str, sup: &str) {
        let element = ElementRef::generalization(sub, sup);
        self.model.set_provenance(&element, rule, input.clone());
        self.model.generalizations.insert((sub.to_string(), sup.to_string()));
        self.trace.push(rule, TraceAction::Produced, input, Some(&element));
    }

    fn produce(&mut self, rule: u8, input: String, mapped: Mapped) {
        let element = mapped.element();
        self.model.set_provenance(&element, rule, input.clone());
        match mapped {
            Mapped::Relationship(r) => self.model.relationships.push(r),
            Mapped::Attribute { host, attribute } => {
                if let Some(e) = self.model.entity_mut(&host) {
                    e.attributes.push(attribute);
                }
            }
        }
        self.trace.push(rule, TraceAction::Produced, input, Some(&element));
    }

    fn rule1_classes(&mut self) {
        let ontology = self.ontology;
        for name in self.scope.clone() {
            if let Some(b) = Builtin::from_name(&name) {
                let input = format!("class {}", b.name());
                if self.options.drop_builtins {
                    self.trace.skip(1, input, "builtin");
                } else {
                    self.produce_entity(1, input, EntityType::new(b.name()));
                }
                continue;
            }
            let class = &ontology.classes[&name];
            if !class.is_anonymous() {
                self.produce_entity(1, format!("class {name}"), map_class(class));
            }
        }
    }

    fn rule5_subsumptions(&mut self) {
        let ontology = self.ontology;
        for (sub, sup) in &ontology.subsumptions {
            if !self.in_scope(sub) {
                continue;
            }
            let input = format!("subClassOf({sub}, {sup})");
            if is_anonymous(sub) {
                self.trace.skip(5, input, "anonymous subclass");
            } else if is_anonymous(sup) {
                // the meaning of an anonymous superclass is carried by rules 3, 4 and 6
                self.attach_anonymous_super(sub, sup, &input);
            } else if !self.is_entity_name(sub) || !self.is_entity_name(sup) {
                self.trace.skip(5, input, "builtin");
            } else {
                self.produce_generalization(5, input, sub, sup);
            }
        }
    }

    /// `host ⊑ anon`: restrictions attach to the host, intersections
    /// distribute over their operands, unions give no definite edge.
    fn attach_anonymous_super(&mut self, host: &str, anon: &str, input: &str) {
        let Some(class) = self.ontology.classes.get(anon) else { return };
        match class.kind {
            ClassKind::Restriction => self.attachments.push((host.to_string(), anon.to_string())),
            ClassKind::Intersection => {
                for op in &class.operands {
                    let op_input = format!("{input} via intersectionOf {anon}");
                    if is_anonymous(op) {
                        self.attach_anonymous_super(host, op, &op_input);
                    } else if self.is_entity_name(op) {
                        self.produce_generalization(6, op_input, host, op);
                    } else {
                        self.trace.skip(6, op_input, "builtin");
                    }
                }
            }
            ClassKind::Union => self.trace.skip(6, input.to_string(), "disjunctive superclass gives no definite generalization"),
            ClassKind::Named => self.trace.skip(6, input.to_string(), "anonymous named class"),
        }
    }

    fn rule6_expressions(&mut self) {
        let ontology = self.ontology;
        for name in self.scope.clone() {
            let Some(class) = ontology.classes.get(&name) else { continue };
            if class.is_anonymous() {
                continue;
            }
            match class.kind {
                ClassKind::Intersection => {
                    let input = format!("intersectionOf {name}");
                    for (sub, sup) in map_expression(class) {
                        if self.is_entity_name(&sup) {
                            self.produce_generalization(6, input.clone(), &sub, &sup);
                        } else {
                            self.trace.skip(6, format!("{input} operand {sup}"), "builtin");
                        }
                    }
                    for op in class.operands.iter().filter(|op| is_anonymous(op)) {
                        self.attach_anonymous_super(&name, op, &input);
                    }
                }
                ClassKind::Union => {
                    let input = format!("unionOf {name}");
                    for (sub, sup) in map_expression(class) {
                        if self.is_entity_name(&sub) {
                            self.produce_generalization(6, input.clone(), &sub, &sup);
                        } else {
                            self.trace.skip(6, format!("{input} operand {sub}"), "builtin");
                        }
                    }
                    for op in class.operands.iter().filter(|op| is_anonymous(op)) {
                        self.trace.skip(6, format!("{input} operand {op}"), "anonymous union member");
                    }
                }
                ClassKind::Restriction => self.attachments.push((name.clone(), name.clone())),
                ClassKind::Named => {}
            }
        }
    }

    fn rule2_properties(&mut self) {
        let ontology = self.ontology;
        for p in ontology.properties.values() {
            let input = format!("property {}", p.name);
            let Some(domain) = p.domain.as_deref() else {
                if self.options.roots.is_none() || self.in_scope(&p.range) {
                    self.trace.skip(2, input, "no domain declared");
                }
                continue;
            };
            if !self.in_scope(domain) {
                continue;
            }
            let inverse = p.inverse_of.as_deref().and_then(|q| ontology.properties.get(q));
            match map_property(p, inverse, &self.model) {
                Ok(mapped) => self.produce(2, input, mapped),
                Err(e) => self.trace.skip(2, input, e.detail),
            }
        }
    }

    fn rules34_restrictions(&mut self) {
        let ontology = self.ontology;
        let attachments = std::mem::take(&mut self.attachments);
        self.restriction_hosts = attachments.iter().map(|(host, _)| host.clone()).collect();
        let (to_class, to_datatype): (Vec<_>, Vec<_>) = attachments.into_iter().partition(|(_, anon)| {
            matches!(
                ontology.classes[anon].restriction.as_ref().map(|r| &r.filler),
                Some(Filler::Class(_))
            )
        });
        for (rule, batch) in [(3u8, to_class), (4u8, to_datatype)] {
            for (host, anon) in batch {
                let r = ontology.classes[&anon].restriction.as_ref().expect("restriction class");
                let input = format!("restriction {anon} on {host}");
                let property = &ontology.properties[&r.on_property];
                if let Filler::Class(f) = &r.filler {
                    if is_anonymous(f) {
                        self.trace.skip(rule, input, format!("anonymous filler '{f}'"));
                        continue;
                    }
                }
                match map_restriction(&host, r, property, &self.model) {
                    Ok(mapped) => self.produce(rule, input, mapped),
                    Err(e) => self.trace.skip(rule, input, e.detail),
                }
            }
        }
    }

    /// Rule 7 refinement of the property mapping: a relationship whose
    /// target class is a bare value holder (a `datatype` annotation, no
    /// properties, no restrictions, no subclasses) is demoted to an
    /// attribute of its source.
    fn demote_value_relationships(&mut self) {
        let ontology = self.ontology;
        let hosts: BTreeSet<&str> = ontology
            .properties
            .values()
            .filter_map(|p| p.domain.as_deref())
            .chain(self.restriction_hosts.iter().map(String::as_str))
            .collect();
        let mut demoted = Vec::new();
        for (i, r) in self.model.relationships.iter().enumerate() {
            let Some(target) = ontology.classes.get(&r.target) else { continue };
            let Some(datatype) = target.annotations.get("datatype") else { continue };
            let has_subs = self.model.subs_of(&r.target).next().is_some();
            if hosts.contains(r.target.as_str()) || has_subs {
                continue;
            }
            demoted.push((i, datatype.clone()));
        }
        for (i, datatype) in demoted.into_iter().rev() {
            let r = self.model.relationships.remove(i);
            let removed = ElementRef::relationship(&r);
            let attribute = Attribute::new(r.name.clone(), datatype, r.target_card);
            let element = ElementRef::attribute(&r.source, &attribute.name);
            let input = format!("property {}", r.name);
            self.model.set_provenance(&element, 7, input.clone());
            if let Some(e) = self.model.entity_mut(&r.source) {
                e.attributes.push(attribute);
            }
            let reason = format!("target '{}' only holds a value", r.target);
            self.trace.push_reason(7, TraceAction::Removed, input.clone(), Some(&removed), reason.clone());
            self.trace.push_reason(7, TraceAction::Produced, input, Some(&element), reason);
        }
    }
}

fn mark_composites(model: &mut ConceptualModel) {
    let mut parts: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in model.relationships.iter().filter(|r| r.part_of) {
        parts.entry(r.source.clone()).or_default().insert(r.name.clone());
    }
    for e in &mut model.entity_types {
        e.composite = parts.get(&e.name).is_some_and(|p| p.len() >= 2);
    }
}

/// Run rules 1–7 over `ontology`.
pub fn transform(
    ontology: &Ontology,
    options: &TransformOptions,
) -> Result<(ConceptualModel, TransformTrace), TransformError> {
    let diagnostics = ontology.validate();
    if !diagnostics.is_empty() {
        return Err(TransformError::InvalidOntology(diagnostics));
    }
    let scope = match &options.roots {
        Some(roots) => scope(ontology, roots)?,
        None => full_scope(ontology),
    };
    let mut engine = Engine {
        ontology,
        options,
        scope,
        model: ConceptualModel::default(),
        trace: TransformTrace::default(),
        attachments: Vec::new(),
        restriction_hosts: BTreeSet::new(),
    };
    engine.rule1_classes();
    engine.rule5_subsumptions();
    engine.rule6_expressions();
    engine.rule2_properties();
    engine.rules34_restrictions();
    engine.demote_value_relationships();

    let Engine { model, mut trace, .. } = engine;
    let (mut model, refine_trace) = refine(model)?;
    mark_composites(&mut model);
    trace.entries.extend(refine_trace.entries);
    Ok((model, trace))
}

/// Rule 7: merge duplicate entity types, attributes and relationships
/// (cardinalities intersect), and drop generalization edges implied by
/// transitivity. Idempotent.
pub fn refine(mut model: ConceptualModel) -> Result<(ConceptualModel, TransformTrace), RefineError> {
    let mut trace = TransformTrace::default();

    let mut entities: Vec<EntityType> = Vec::with_capacity(model.entity_types.len());
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for e in std::mem::take(&mut model.entity_types) {
        match index.get(&e.name) {
            Some(&i) => {
                let kept = &mut entities[i];
                kept.attributes.extend(e.attributes);
                kept.composite |= e.composite;
                let element = ElementRef::Entity(e.name.clone());
                trace.push_reason(7, TraceAction::Merged, format!("entity {}", e.name), Some(&element), "duplicate entity type");
            }
            None => {
                index.insert(e.name.clone(), entities.len());
                entities.push(e);
            }
        }
    }
    for e in &mut entities {
        e.attributes = merge_attributes(&e.name, std::mem::take(&mut e.attributes), &mut trace)?;
    }
    model.entity_types = entities;

    let mut rels: Vec<Relationship> = Vec::with_capacity(model.relationships.len());
    let mut rel_index: BTreeMap<(String, String, String), usize> = BTreeMap::new();
    for r in std::mem::take(&mut model.relationships) {
        let key = (r.name.clone(), r.source.clone(), r.target.clone());
        match rel_index.get(&key) {
            Some(&i) => {
                let element = ElementRef::relationship(&r);
                rels[i] = merge_relationship(&rels[i], &r)?;
                trace.push_reason(
                    7,
                    TraceAction::Merged,
                    format!("relationship {}", r.name),
                    Some(&element),
                    "duplicate relationship; cardinalities intersected",
                );
            }
            None => {
                rel_index.insert(key, rels.len());
                rels.push(r);
            }
        }
    }
    model.relationships = rels;

    let cycles = crate::graph::cycles(model.generalizations.iter().map(|(a, b)| (a.as_str(), b.as_str())));
    if let Some(members) = cycles.first() {
        return Err(RefineError::GeneralizationCycle(members.iter().map(|s| s.to_string()).collect()));
    }
    for (sub, sup) in crate::graph::transitively_implied(&model.generalizations) {
        model.generalizations.remove(&(sub.clone(), sup.clone()));
        let element = ElementRef::generalization(&sub, &sup);
        trace.push_reason(
            7,
            TraceAction::Removed,
            format!("generalization {sub} --|> {sup}"),
            Some(&element),
            "implied by transitivity",
        );
    }

    model.canonicalize();
    Ok((model, trace))
}

fn merge_attributes(
    entity: &str,
    attributes: Vec<Attribute>,
    trace: &mut TransformTrace,
) -> Result<Vec<Attribute>, RefineError> {
    let mut out: Vec<Attribute> = Vec::with_capacity(attributes.len());
    for a in attributes {
        match out.iter_mut().find(|k| k.name == a.name) {
            Some(kept) => {
                let element = ElementRef::attribute(entity, &a.name);
                if kept.datatype != a.datatype {
                    return Err(RefineError::ConflictingDatatypes {
                        element: element.to_string(),
                        left: kept.datatype.clone(),
                        right: a.datatype,
                    });
                }
                let merged = kept.multiplicity.intersect(a.multiplicity);
                if merged.is_empty() {
                    return Err(RefineError::InconsistentCardinalities {
                        element: element.to_string(),
                        left: kept.multiplicity,
                        right: a.multiplicity,
                    });
                }
                kept.multiplicity = merged;
                trace.push_reason(
                    7,
                    TraceAction::Merged,
                    format!("attribute {entity}.{}", a.name),
                    Some(&element),
                    "duplicate attribute; multiplicities intersected",
                );
            }
            None => out.push(a),
        }
    }
    Ok(out)
}

/// Merge two copies of the same relationship: bounds intersect on both
/// ends. Commutative and associative.
pub fn merge_relationship(a: &Relationship, b: &Relationship) -> Result<Relationship, RefineError> {
    let element = ElementRef::relationship(a).to_string();
    let source_card = a.source_card.intersect(b.source_card);
    if source_card.is_empty() {
        return Err(RefineError::InconsistentCardinalities { element, left: a.source_card, right: b.source_card });
    }
    let target_card = a.target_card.intersect(b.target_card);
    if target_card.is_empty() {
        return Err(RefineError::InconsistentCardinalities { element, left: a.target_card, right: b.target_card });
    }
    let inverse_name = match (&a.inverse_name, &b.inverse_name) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (x, y) => x.clone().or_else(|| y.clone()),
    };
    Ok(Relationship {
        name: a.name.clone(),
        source: a.source.clone(),
        target: a.target.clone(),
        source_card,
        target_card,
        inverse_name,
        part_of: a.part_of || b.part_of,
    })
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} {:?} {}", self.rule, self.action, self.input)?;
        if let Some(o) = &self.output {
            write!(f, " -> {o}")?;
        }
        if let Some(r) = &self.reason {
            write!(f, " ({r})")?;
        }
        Ok(())
    }
}
