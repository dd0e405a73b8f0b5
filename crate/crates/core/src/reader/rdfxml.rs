//! RDF/XML frontend.
//!
//! Supported vocabulary: class declarations, `rdfs:subClassOf`, object and
//! datatype properties with `rdfs:domain`, `rdfs:range`, `owl:inverseOf` and
//! the functional characteristic, `owl:Restriction` with `someValuesFrom`,
//! `allValuesFrom` and the three cardinality forms, `owl:intersectionOf`,
//! `owl:unionOf`, and `rdfs:label`/`rdfs:comment`. Anything else is skipped
//! (lenient) or rejected (strict).

use std::collections::{BTreeMap, BTreeSet};

use roxmltree::{Document, Node, ParsingOptions};

use super::{finish, ReadError, ReadReport, ReaderConfig};
use crate::bounds::Bounds;
use crate::diagnostic::{Code, Diagnostic};
use crate::ontology::{
    is_datatype, Builtin, ClassKind, Constraint, Filler, OntoClass, OntoProperty, Ontology, PropertyKind,
    RestrictionSpec, ANON_PREFIX,
};

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL: &str = "http://www.w3.org/2002/07/owl#";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
const XML: &str = "http://www.w3.org/XML/1998/namespace";

const PREFIXES: &[(&str, &str)] = &[("rdf", RDF), ("rdfs", RDFS), ("owl", OWL), ("xsd", XSD)];

/// Short name for an IRI: `prefix:local` for the fixed vocabularies,
/// otherwise the fragment or last path segment.
fn short_name(iri: &str) -> String {
    for (prefix, ns) in PREFIXES {
        if let Some(local) = iri.strip_prefix(ns) {
            return format!("{prefix}:{local}");
        }
    }
    if let Some((_, frag)) = iri.rsplit_once('#') {
        return frag.to_string();
    }
    iri.rsplit('/').next().unwrap_or(iri).to_string()
}

fn qname(node: Node) -> String {
    let tag = node.tag_name();
    let prefix = tag
        .namespace()
        .and_then(|ns| PREFIXES.iter().find(|(_, iri)| *iri == ns).map(|(p, _)| *p));
    match prefix {
        Some(p) => format!("{p}:{}", tag.name()),
        None => tag.name().to_string(),
    }
}

fn is(node: Node, ns: &str, local: &str) -> bool {
    node.is_element() && node.tag_name().namespace() == Some(ns) && node.tag_name().name() == local
}

fn rdf_attr<'a>(node: Node<'a, '_>, local: &str) -> Option<&'a str> {
    node.attribute((RDF, local))
}

#[derive(Default)]
struct PropertyDraft {
    declared: Option<PropertyKind>,
    domain: Option<String>,
    range: Option<String>,
    functional: bool,
    inverse_of: Option<String>,
    annotations: BTreeMap<String, String>,
}

struct RestrictionDraft {
    class: String,
    on_property: String,
    filler: Option<Filler>,
    constraint: Constraint,
}

struct Parser<'d> {
    doc: &'d Document<'d>,
    config: &'d ReaderConfig,
    classes: BTreeMap<String, OntoClass>,
    properties: BTreeMap<String, PropertyDraft>,
    restrictions: Vec<RestrictionDraft>,
    subsumptions: BTreeSet<(String, String)>,
    class_refs: BTreeSet<String>,
    property_refs: BTreeSet<String>,
    warnings: Vec<Diagnostic>,
    skipped: BTreeMap<String, usize>,
    next_anon: usize,
}

type Step<T> = Result<T, ReadError>;

impl<'d> Parser<'d> {
    fn position(&self, node: Node) -> String {
        let pos = self.doc.text_pos_at(node.range().start);
        format!("{}:{}", pos.row, pos.col)
    }

    fn malformed(&self, node: Node, detail: impl Into<String>) -> ReadError {
        ReadError::MalformedInput { position: self.position(node), detail: detail.into() }
    }

    fn skip(&mut self, node: Node, construct: impl Into<String>) -> Step<()> {
        let construct = construct.into();
        if self.config.strict {
            return Err(ReadError::UnsupportedConstruct(construct));
        }
        self.warnings.push(Diagnostic::new(
            Code::UnsupportedConstruct,
            [construct.as_str()],
            format!("skipped unsupported construct '{construct}' at {}", self.position(node)),
        ));
        *self.skipped.entry(construct).or_default() += 1;
        Ok(())
    }

    /// Subject name of a node from `rdf:about` / `rdf:ID`.
    fn subject(&self, node: Node) -> Option<String> {
        rdf_attr(node, "about")
            .map(short_name)
            .or_else(|| rdf_attr(node, "ID").map(str::to_string))
    }

    fn resource(&self, node: Node) -> Option<String> {
        rdf_attr(node, "resource").map(short_name)
    }

    fn fresh_anon(&mut self) -> String {
        let name = format!("{ANON_PREFIX}{}", self.next_anon);
        self.next_anon += 1;
        name
    }

    fn declare_class(&mut self, name: &str) -> &mut OntoClass {
        self.classes.entry(name.to_string()).or_insert_with(|| OntoClass::named(name))
    }

    fn annotate(annotations: &mut BTreeMap<String, String>, node: Node) {
        let mut key = node.tag_name().name().to_string();
        if let Some(lang) = node.attribute((XML, "lang")) {
            key = format!("{key}@{lang}");
        }
        let text = node.text().unwrap_or("").trim().to_string();
        annotations.entry(key).or_insert(text);
    }

    fn top_level(&mut self, node: Node) -> Step<()> {
        if is(node, OWL, "Ontology") {
            for child in node.children().filter(Node::is_element) {
                if !(is(child, RDFS, "label") || is(child, RDFS, "comment")) {
                    self.skip(child, qname(child))?;
                }
            }
            return Ok(());
        }
        if is(node, OWL, "Class") || is(node, RDFS, "Class") {
            let Some(name) = self.subject(node) else {
                return Err(self.malformed(node, "top-level class without rdf:about or rdf:ID"));
            };
            return self.class_body(node, &name);
        }
        if let Some(kind) = property_element_kind(node) {
            return self.property_node(node, kind, None);
        }
        if is(node, RDF, "Description") {
            return self.description(node);
        }
        self.skip(node, qname(node))
    }

    /// `rdf:Description` typed through `rdf:type` children.
    fn description(&mut self, node: Node) -> Step<()> {
        let types: Vec<String> = node
            .children()
            .filter(|c| is(*c, RDF, "type"))
            .filter_map(|c| self.resource(c))
            .collect();
        let Some(name) = self.subject(node) else {
            return self.skip(node, "rdf:Description");
        };
        if types.iter().any(|t| t == "owl:Class" || t == "rdfs:Class") {
            return self.class_body(node, &name);
        }
        if let Some(t) = types.iter().find_map(|t| property_type_kind(t)) {
            return self.property_node(node, t, Some(&name));
        }
        self.skip(node, "rdf:Description")
    }

    fn class_body(&mut self, node: Node, name: &str) -> Step<()> {
        if Builtin::from_name(name).is_some() {
            return Ok(());
        }
        self.declare_class(name);
        for child in node.children().filter(Node::is_element) {
            if is(child, RDFS, "subClassOf") {
                if let Some(sup) = self.class_ref_or_expr(child)? {
                    self.subsumptions.insert((name.to_string(), sup));
                }
            } else if is(child, OWL, "intersectionOf") || is(child, OWL, "unionOf") {
                let kind = if is(child, OWL, "intersectionOf") { ClassKind::Intersection } else { ClassKind::Union };
                let Some(operands) = self.collection(child)? else { continue };
                let class = self.declare_class(name);
                if class.kind != ClassKind::Named {
                    return Err(self.malformed(child, format!("class '{name}' has more than one boolean definition")));
                }
                class.kind = kind;
                class.operands = operands;
            } else if is(child, RDFS, "label") || is(child, RDFS, "comment") {
                Self::annotate(&mut self.declare_class(name).annotations, child);
            } else if is(child, RDF, "type") {
                match self.resource(child).as_deref() {
                    Some("owl:Class") | Some("rdfs:Class") => {}
                    _ => self.skip(child, "rdf:type")?,
                }
            } else {
                self.skip(child, qname(child))?;
            }
        }
        Ok(())
    }

    /// Operands of an `rdf:parseType="Collection"` element. `None` when any
    /// member is unsupported (the whole expression is then dropped).
    fn collection(&mut self, node: Node) -> Step<Option<Vec<String>>> {
        if rdf_attr(node, "parseType") != Some("Collection") {
            return Err(self.malformed(node, format!("{} must use rdf:parseType=\"Collection\"", qname(node))));
        }
        let mut operands = Vec::new();
        let mut complete = true;
        for member in node.children().filter(Node::is_element) {
            match self.class_expr(member)? {
                Some(op) => operands.push(op),
                None => complete = false,
            }
        }
        Ok(complete.then_some(operands))
    }

    /// A class given either as `rdf:resource` or as one nested expression.
    fn class_ref_or_expr(&mut self, node: Node) -> Step<Option<String>> {
        if let Some(r) = self.resource(node) {
            self.class_refs.insert(r.clone());
            return Ok(Some(r));
        }
        let mut children = node.children().filter(Node::is_element);
        match (children.next(), children.next()) {
            (Some(expr), None) => self.class_expr(expr),
            _ => Err(self.malformed(node, format!("{} needs rdf:resource or exactly one class expression", qname(node)))),
        }
    }

    /// Lift a (possibly nested) class expression to a class name.
    fn class_expr(&mut self, node: Node) -> Step<Option<String>> {
        if is(node, OWL, "Restriction") {
            return self.restriction(node);
        }
        let is_class = is(node, OWL, "Class") || is(node, RDFS, "Class");
        if is_class || is(node, RDF, "Description") {
            if let Some(name) = self.subject(node) {
                if is_class && node.has_children() {
                    self.class_body(node, &name)?;
                } else if is_class && Builtin::from_name(&name).is_none() {
                    self.declare_class(&name);
                }
                self.class_refs.insert(name.clone());
                return Ok(Some(name));
            }
            if is_class {
                return self.anonymous_class(node);
            }
        }
        self.skip(node, qname(node))?;
        Ok(None)
    }

    fn anonymous_class(&mut self, node: Node) -> Step<Option<String>> {
        let name = self.fresh_anon();
        let mut defined = None;
        for child in node.children().filter(Node::is_element) {
            if defined.is_none() && (is(child, OWL, "intersectionOf") || is(child, OWL, "unionOf")) {
                let kind = if is(child, OWL, "intersectionOf") { ClassKind::Intersection } else { ClassKind::Union };
                let Some(operands) = self.collection(child)? else { return Ok(None) };
                defined = Some(OntoClass { kind, operands, ..OntoClass::named(name.clone()) });
            } else {
                self.skip(child, qname(child))?;
                return Ok(None);
            }
        }
        match defined {
            Some(class) => {
                self.classes.insert(name.clone(), class);
                Ok(Some(name))
            }
            None => Err(self.malformed(node, "anonymous class without a boolean definition")),
        }
    }

    fn restriction(&mut self, node: Node) -> Step<Option<String>> {
        let name = self.fresh_anon();
        let mut on_property = None;
        let mut filler = None;
        let mut constraint = None;
        let mut card = Bounds::ANY;
        let mut has_card = false;
        for child in node.children().filter(Node::is_element) {
            if is(child, OWL, "onProperty") {
                let Some(p) = self.resource(child) else {
                    return Err(self.malformed(child, "owl:onProperty needs rdf:resource"));
                };
                self.property_refs.insert(p.clone());
                on_property = Some(p);
            } else if is(child, OWL, "someValuesFrom") || is(child, OWL, "allValuesFrom") {
                let c = if is(child, OWL, "someValuesFrom") { Constraint::SomeValuesFrom } else { Constraint::AllValuesFrom };
                if constraint.is_some() || has_card {
                    return Err(self.malformed(child, "restriction with more than one constraint"));
                }
                constraint = Some(c);
                match self.resource(child) {
                    Some(r) if is_datatype(&r) => filler = Some(Filler::Datatype(r)),
                    Some(r) => {
                        self.class_refs.insert(r.clone());
                        filler = Some(Filler::Class(r));
                    }
                    None => match self.class_ref_or_expr(child)? {
                        Some(c) => filler = Some(Filler::Class(c)),
                        None => return Ok(None),
                    },
                }
            } else if is(child, OWL, "cardinality") || is(child, OWL, "minCardinality") || is(child, OWL, "maxCardinality") {
                if constraint.is_some() {
                    return Err(self.malformed(child, "restriction with more than one constraint"));
                }
                let text = child.text().unwrap_or("").trim();
                let n: u32 = text
                    .parse()
                    .map_err(|_| self.malformed(child, format!("cardinality '{text}' is not a non-negative integer")))?;
                let b = match child.tag_name().name() {
                    "cardinality" => Bounds::new(n, Some(n)),
                    "minCardinality" => Bounds::new(n, None),
                    _ => Bounds::new(0, Some(n)),
                };
                card = card.intersect(b);
                has_card = true;
            } else {
                self.skip(child, qname(child))?;
                return Ok(None);
            }
        }
        let Some(on_property) = on_property else {
            return Err(self.malformed(node, "owl:Restriction without owl:onProperty"));
        };
        let constraint = match (constraint, has_card) {
            (Some(c), _) => c,
            (None, true) => Constraint::Cardinality(card),
            (None, false) => return Err(self.malformed(node, "owl:Restriction without a constraint")),
        };
        self.restrictions.push(RestrictionDraft { class: name.clone(), on_property, filler, constraint });
        Ok(Some(name))
    }

    fn property_node(&mut self, node: Node, kind: ElementKind, name: Option<&str>) -> Step<()> {
        let name = match name.map(str::to_string).or_else(|| self.subject(node)) {
            Some(n) => n,
            None => return Err(self.malformed(node, "property without rdf:about or rdf:ID")),
        };
        let mut draft = self.properties.remove(&name).unwrap_or_default();
        let result = self.property_body(node, kind, &mut draft);
        self.properties.insert(name, draft);
        result
    }

    fn property_body(&mut self, node: Node, kind: ElementKind, draft: &mut PropertyDraft) -> Step<()> {
        match kind {
            ElementKind::Object => draft.declared = Some(PropertyKind::Mutual),
            ElementKind::Datatype => draft.declared = Some(PropertyKind::Intrinsic),
            ElementKind::Functional | ElementKind::Plain => {}
            ElementKind::Characteristic(c) => {
                draft.declared.get_or_insert(PropertyKind::Mutual);
                self.skip(node, c)?;
            }
        }
        if kind == ElementKind::Functional {
            draft.functional = true;
        }
        for child in node.children().filter(Node::is_element) {
            if is(child, RDFS, "domain") {
                match self.resource(child) {
                    Some(d) => {
                        self.class_refs.insert(d.clone());
                        draft.domain = Some(d);
                    }
                    None => self.skip(child, "rdfs:domain")?,
                }
            } else if is(child, RDFS, "range") {
                match self.resource(child) {
                    Some(r) => draft.range = Some(r),
                    None => self.skip(child, "rdfs:range")?,
                }
            } else if is(child, OWL, "inverseOf") {
                match self.resource(child) {
                    Some(q) => {
                        self.property_refs.insert(q.clone());
                        draft.inverse_of = Some(q);
                    }
                    None => self.skip(child, "owl:inverseOf")?,
                }
            } else if is(child, RDF, "type") {
                match self.resource(child).as_deref().and_then(property_type_kind) {
                    Some(ElementKind::Functional) => draft.functional = true,
                    Some(ElementKind::Object) => draft.declared = Some(PropertyKind::Mutual),
                    Some(ElementKind::Datatype) => draft.declared = Some(PropertyKind::Intrinsic),
                    Some(ElementKind::Characteristic(c)) => self.skip(child, c)?,
                    Some(ElementKind::Plain) => {}
                    None => self.skip(child, "rdf:type")?,
                }
            } else if is(child, RDFS, "label") || is(child, RDFS, "comment") {
                Self::annotate(&mut draft.annotations, child);
            } else {
                self.skip(child, qname(child))?;
            }
        }
        Ok(())
    }

    fn into_ontology(self, iri: String) -> Step<ReadReport> {
        let mut ontology = Ontology::new(iri);
        for (name, d) in self.properties {
            let (kind, range) = match d.range {
                Some(r) if is_datatype(&r) => (PropertyKind::Intrinsic, r),
                Some(r) => {
                    self_check_class_ref(&self.classes, &r)?;
                    (PropertyKind::Mutual, r)
                }
                None => match d.declared.unwrap_or(PropertyKind::Mutual) {
                    PropertyKind::Mutual => (PropertyKind::Mutual, Builtin::Thing.name().to_string()),
                    PropertyKind::Intrinsic => (PropertyKind::Intrinsic, "rdfs:Literal".to_string()),
                },
            };
            ontology.add_property(OntoProperty {
                name,
                kind,
                domain: d.domain,
                range,
                functional: d.functional,
                inverse_of: d.inverse_of,
                annotations: d.annotations,
            });
        }
        for name in &self.property_refs {
            if !ontology.properties.contains_key(name) {
                return Err(ReadError::UnresolvedReference(name.clone()));
            }
        }
        for name in &self.class_refs {
            self_check_class_ref(&self.classes, name)?;
        }
        ontology.classes = self.classes;
        for r in self.restrictions {
            let property = &ontology.properties[&r.on_property];
            let filler = r.filler.unwrap_or_else(|| match property.kind {
                PropertyKind::Mutual => Filler::Class(property.range.clone()),
                PropertyKind::Intrinsic => Filler::Datatype(property.range.clone()),
            });
            ontology.add_class(OntoClass::restriction(
                r.class,
                RestrictionSpec { on_property: r.on_property, filler, constraint: r.constraint },
            ));
        }
        ontology.subsumptions = self.subsumptions;
        Ok(ReadReport { ontology: finish(ontology)?, warnings: self.warnings, skipped_constructs: self.skipped })
    }
}

fn self_check_class_ref(classes: &BTreeMap<String, OntoClass>, name: &str) -> Step<()> {
    if classes.contains_key(name) || Builtin::from_name(name).is_some() {
        Ok(())
    } else {
        Err(ReadError::UnresolvedReference(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ElementKind {
    Object,
    Datatype,
    Functional,
    Plain,
    Characteristic(&'static str),
}

fn property_type_kind(short: &str) -> Option<ElementKind> {
    Some(match short {
        "owl:ObjectProperty" => ElementKind::Object,
        "owl:DatatypeProperty" => ElementKind::Datatype,
        "owl:FunctionalProperty" => ElementKind::Functional,
        "rdf:Property" => ElementKind::Plain,
        "owl:TransitiveProperty" => ElementKind::Characteristic("owl:TransitiveProperty"),
        "owl:SymmetricProperty" => ElementKind::Characteristic("owl:SymmetricProperty"),
        "owl:InverseFunctionalProperty" => ElementKind::Characteristic("owl:InverseFunctionalProperty"),
        _ => return None,
    })
}

fn property_element_kind(node: Node) -> Option<ElementKind> {
    if !node.is_element() {
        return None;
    }
    property_type_kind(&qname(node))
}

/// Parse an RDF/XML ontology document.
pub fn read_rdfxml(source: &[u8], config: &ReaderConfig) -> Result<ReadReport, ReadError> {
    let text = std::str::from_utf8(source).map_err(|e| ReadError::MalformedInput {
        position: format!("byte {}", e.valid_up_to()),
        detail: "input is not valid UTF-8".into(),
    })?;
    let opts = ParsingOptions { allow_dtd: true, ..ParsingOptions::default() };
    let doc = Document::parse_with_options(text, opts).map_err(|e| {
        let pos = e.pos();
        ReadError::MalformedInput { position: format!("{}:{}", pos.row, pos.col), detail: e.to_string() }
    })?;
    let root = doc.root_element();
    let mut parser = Parser {
        doc: &doc,
        config,
        classes: BTreeMap::new(),
        properties: BTreeMap::new(),
        restrictions: Vec::new(),
        subsumptions: BTreeSet::new(),
        class_refs: BTreeSet::new(),
        property_refs: BTreeSet::new(),
        warnings: Vec::new(),
        skipped: BTreeMap::new(),
        next_anon: 0,
    };
    if !is(root, RDF, "RDF") {
        return Err(parser.malformed(root, format!("root element is {}, expected rdf:RDF", qname(root))));
    }
    let mut iri = config
        .base_iri
        .clone()
        .or_else(|| root.attribute((XML, "base")).map(str::to_string));
    for node in root.children().filter(Node::is_element) {
        if is(node, OWL, "Ontology") && iri.is_none() {
            iri = rdf_attr(node, "about").map(str::to_string);
        }
        parser.top_level(node)?;
    }
    parser.into_ontology(iri.unwrap_or_default())
}
