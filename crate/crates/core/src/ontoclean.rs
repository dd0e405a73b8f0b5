//! OntoClean meta-properties, category classification, the taxonomy
//! axioms, and the modelling rules checked against a conceptual model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::cdm::{Attribute, ConceptualModel};
use crate::diagnostic::{Code, Diagnostic, Repair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rigidity {
    #[serde(rename = "+R")]
    Rigid,
    #[serde(rename = "-R")]
    NonRigid,
    #[serde(rename = "~R")]
    AntiRigid,
}

impl Rigidity {
    pub const ALL: [Rigidity; 3] = [Rigidity::Rigid, Rigidity::NonRigid, Rigidity::AntiRigid];

    pub fn symbol(self) -> &'static str {
        match self {
            Rigidity::Rigid => "+R",
            Rigidity::NonRigid => "-R",
            Rigidity::AntiRigid => "~R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unity {
    #[serde(rename = "+U")]
    Unity,
    #[serde(rename = "-U")]
    NonUnity,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetaAnnotation {
    pub concept: String,
    pub rigidity: Rigidity,
    /// Carries an identity criterion (+I).
    pub identity: bool,
    /// Supplies the identity criterion to every subclass; implies `identity`.
    pub supplies_identity: bool,
    pub unity: Option<Unity>,
    /// Dependent (+D).
    pub dependence: bool,
}

impl MetaAnnotation {
    pub fn new(concept: impl Into<String>, rigidity: Rigidity, identity: bool, dependence: bool) -> Self {
        MetaAnnotation {
            concept: concept.into(),
            rigidity,
            identity,
            supplies_identity: false,
            unity: None,
            dependence,
        }
    }

    pub fn supplying(mut self) -> Self {
        self.identity = true;
        self.supplies_identity = true;
        self
    }

    pub fn category(&self) -> Category {
        classify_category(self)
    }
}

impl fmt::Display for MetaAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.rigidity.symbol(),
            if self.identity { "+I" } else { "-I" },
            if self.dependence { "+D" } else { "-D" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Type,
    PhasedSortal,
    Role,
    Attribution,
    Unclassifiable,
}

impl Category {
    /// Type, PhasedSortal and Role describe substantial things.
    pub fn is_substantial(self) -> bool {
        matches!(self, Category::Type | Category::PhasedSortal | Category::Role)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn classify_category(a: &MetaAnnotation) -> Category {
    match (a.rigidity, a.identity, a.dependence) {
        (Rigidity::Rigid, true, _) => Category::Type,
        (Rigidity::AntiRigid, true, false) => Category::PhasedSortal,
        (Rigidity::AntiRigid, false, true) => Category::Role,
        (Rigidity::NonRigid, false, _) => Category::Attribution,
        _ => Category::Unclassifiable,
    }
}

pub type Annotations = BTreeMap<String, MetaAnnotation>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationDoc {
    concept: String,
    rigidity: Rigidity,
    identity: IdentityFlag,
    #[serde(default)]
    supplies: bool,
    #[serde(default)]
    unity: Option<Unity>,
    dependence: DependenceFlag,
}

#[derive(Serialize, Deserialize, PartialEq)]
enum IdentityFlag {
    #[serde(rename = "+I")]
    Plus,
    #[serde(rename = "-I")]
    Minus,
}

#[derive(Serialize, Deserialize, PartialEq)]
enum DependenceFlag {
    #[serde(rename = "+D")]
    Plus,
    #[serde(rename = "-D")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnnotationError {
    #[error("annotation schema violation at {path}: {detail}")]
    Schema { path: String, detail: String },
    #[error("concept '{0}' is annotated more than once")]
    Duplicate(String),
    #[error("concept '{0}' supplies identity but is annotated -I")]
    SuppliesWithoutIdentity(String),
}

/// Parse the annotation sidecar. An empty or whitespace-only document is
/// an empty annotation set.
pub fn read_annotations(source: &[u8]) -> Result<Annotations, AnnotationError> {
    if source.iter().all(u8::is_ascii_whitespace) {
        return Ok(Annotations::new());
    }
    let mut de = serde_json::Deserializer::from_slice(source);
    let docs: Vec<AnnotationDoc> = serde_path_to_error::deserialize(&mut de).map_err(|e| AnnotationError::Schema {
        path: e.path().to_string(),
        detail: e.into_inner().to_string(),
    })?;
    let mut out = Annotations::new();
    for d in docs {
        let identity = d.identity == IdentityFlag::Plus;
        if d.supplies && !identity {
            return Err(AnnotationError::SuppliesWithoutIdentity(d.concept));
        }
        let a = MetaAnnotation {
            concept: d.concept.clone(),
            rigidity: d.rigidity,
            identity,
            supplies_identity: d.supplies,
            unity: d.unity,
            dependence: d.dependence == DependenceFlag::Plus,
        };
        if out.insert(d.concept.clone(), a).is_some() {
            return Err(AnnotationError::Duplicate(d.concept));
        }
    }
    Ok(out)
}

pub fn write_annotations(annotations: &Annotations) -> String {
    let docs: Vec<AnnotationDoc> = annotations
        .values()
        .map(|a| AnnotationDoc {
            concept: a.concept.clone(),
            rigidity: a.rigidity,
            identity: if a.identity { IdentityFlag::Plus } else { IdentityFlag::Minus },
            supplies: a.supplies_identity,
            unity: a.unity,
            dependence: if a.dependence { DependenceFlag::Plus } else { DependenceFlag::Minus },
        })
        .collect();
    crate::json::to_canonical_string(&docs)
}

/// Concepts that carry an identity criterion once inheritance from
/// supplying ancestors is applied.
pub fn effective_identity(taxonomy: &BTreeSet<(String, String)>, annotations: &Annotations) -> BTreeSet<String> {
    let mut carriers: BTreeSet<String> =
        annotations.values().filter(|a| a.identity).map(|a| a.concept.clone()).collect();
    let adjacency = crate::graph::adjacency(taxonomy.iter().map(|(sub, sup)| (sup.as_str(), sub.as_str())));
    for supplier in annotations.values().filter(|a| a.supplies_identity) {
        if adjacency.contains_key(supplier.concept.as_str()) {
            carriers.extend(crate::graph::descendants(&adjacency, &supplier.concept).into_iter().map(str::to_string));
        }
    }
    carriers
}

fn missing_annotations<'a>(nodes: impl IntoIterator<Item = &'a str>, annotations: &Annotations) -> Vec<Diagnostic> {
    nodes
        .into_iter()
        .filter(|n| !annotations.contains_key(*n))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|n| {
            Diagnostic::new(Code::MissingAnnotation, [n], format!("'{n}' has no meta-property annotation; not checked"))
        })
        .collect()
}

fn axiom_findings(taxonomy: &BTreeSet<(String, String)>, annotations: &Annotations) -> Vec<Diagnostic> {
    let carriers = effective_identity(taxonomy, annotations);
    let mut out = Vec::new();
    for (sub, sup) in taxonomy {
        let (Some(a), Some(b)) = (annotations.get(sub), annotations.get(sup)) else { continue };
        let edge = [sub.as_str(), sup.as_str()];
        let repair = Repair::RemoveGeneralization { sub: sub.clone(), sup: sup.clone() };
        if a.rigidity == Rigidity::Rigid && b.rigidity == Rigidity::AntiRigid {
            out.push(
                Diagnostic::new(Code::Axiom1, edge, format!("anti-rigid '{sup}' subsumes rigid '{sub}'"))
                    .with_repair(repair.clone()),
            );
        }
        if carriers.contains(sup) && !carriers.contains(sub) {
            out.push(
                Diagnostic::new(
                    Code::Axiom2,
                    edge,
                    format!("'{sup}' carries an identity criterion that '{sub}' does not hold"),
                )
                .with_repair(repair.clone()),
            );
        }
        if b.dependence && !a.dependence {
            out.push(
                Diagnostic::new(Code::Axiom3, edge, format!("dependent '{sup}' subsumes independent '{sub}'"))
                    .with_repair(repair),
            );
        }
    }
    out
}

/// The three taxonomy axioms over `(sub, super)` edges. Unannotated nodes
/// are reported once and left out of the checks.
pub fn check_axioms(taxonomy: &BTreeSet<(String, String)>, annotations: &Annotations) -> Vec<Diagnostic> {
    let nodes = taxonomy.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]);
    let mut out = missing_annotations(nodes, annotations);
    out.extend(axiom_findings(taxonomy, annotations));
    out
}

fn transitive_supers<'a>(model: &'a ConceptualModel, entity: &'a str) -> BTreeSet<&'a str> {
    let adjacency = crate::graph::adjacency(model.generalizations.iter().map(|(a, b)| (a.as_str(), b.as_str())));
    let mut out = crate::graph::descendants(&adjacency, entity);
    out.remove(entity);
    out
}

fn declared_names<'a>(model: &'a ConceptualModel, entity: &'a str) -> BTreeSet<&'a str> {
    let mut names: BTreeSet<&str> = model.outgoing(entity).map(|r| r.name.as_str()).collect();
    if let Some(e) = model.entity(entity) {
        names.extend(e.attributes.iter().map(|a| a.name.as_str()));
    }
    names
}

/// Check `model` against the five modelling rules and the taxonomy axioms.
///
/// Order: missing annotations, RULE1..RULE5 (RULE5 includes the axioms),
/// then unused annotations.
pub fn validate_model(model: &ConceptualModel, annotations: &Annotations) -> Vec<Diagnostic> {
    let mut out = missing_annotations(model.entity_types.iter().map(|e| e.name.as_str()), annotations);
    let category = |name: &str| annotations.get(name).map(classify_category);
    let non_substantial = |name: &str| category(name).is_some_and(|c| !c.is_substantial());

    // RULE1
    let offenders: BTreeSet<&str> =
        model.entity_types.iter().map(|e| e.name.as_str()).filter(|n| non_substantial(n)).collect();
    let mut demoted: BTreeSet<&str> = BTreeSet::new();
    for &name in &offenders {
        let cat = category(name).expect("annotated");
        let a = &annotations[name];
        let base = format!("'{name}' ({a}) classifies as {cat}, not a substantial thing");
        if cat != Category::Attribution {
            out.push(Diagnostic::new(Code::Rule1, [name], base));
            continue;
        }
        let hosts: BTreeSet<&str> =
            model.incoming(name).map(|r| r.source.as_str()).filter(|s| *s != name).collect();
        let usable: Vec<&str> = hosts.iter().copied().filter(|h| !offenders.contains(h)).collect();
        if hosts.len() == 1 && usable.len() == 1 {
            let host = usable[0];
            demoted.insert(name);
            out.push(
                Diagnostic::new(Code::Rule1, [name], format!("{base}; it is better an attribute of '{host}'"))
                    .with_repair(Repair::DemoteToAttribute { entity: name.to_string(), host: host.to_string() }),
            );
        } else {
            let candidates = if hosts.is_empty() {
                "no relationship points at it".to_string()
            } else {
                format!("host candidates: {}", hosts.iter().copied().collect::<Vec<_>>().join(", "))
            };
            out.push(Diagnostic::new(Code::Rule1, [name], format!("{base}; {candidates}")));
        }
    }

    // RULE2
    for e in &model.entity_types {
        for attr in &e.attributes {
            let qualified = format!("{}.{}", e.name, attr.name);
            let Some(a) = annotations.get(&qualified).or_else(|| annotations.get(&attr.name)) else { continue };
            if a.rigidity != Rigidity::NonRigid || a.identity {
                out.push(Diagnostic::new(
                    Code::Rule2,
                    [e.name.as_str(), attr.name.as_str()],
                    format!("attribute '{qualified}' is annotated {a}; an intrinsic property should be -R-I"),
                ));
            }
        }
    }

    // RULE3
    for r in &model.relationships {
        let bad: Vec<&str> =
            [r.source.as_str(), r.target.as_str()].into_iter().filter(|n| non_substantial(n)).collect();
        if !bad.is_empty() {
            out.push(Diagnostic::new(
                Code::Rule3,
                [r.name.as_str(), r.source.as_str(), r.target.as_str()],
                format!(
                    "relationship '{}' connects '{}' and '{}', but {} not substantial",
                    r.name,
                    r.source,
                    r.target,
                    bad.iter().map(|b| format!("'{b}'")).collect::<Vec<_>>().join(" and ")
                        + if bad.len() == 1 { " is" } else { " are" }
                ),
            ));
        }
    }

    // RULE4
    let carriers = effective_identity(&model.generalizations, annotations);
    for e in model.entity_types.iter().filter(|e| e.composite) {
        let parts: BTreeSet<&str> =
            model.outgoing(&e.name).filter(|r| r.part_of).map(|r| r.target.as_str()).collect();
        let mut problems = Vec::new();
        if annotations.contains_key(&e.name) && !carriers.contains(&e.name) {
            problems.push("it has no identity criterion (+I)".to_string());
        }
        if parts.len() < 2 {
            problems.push(format!("it has {} component type(s)", parts.len()));
        }
        let component_names: BTreeSet<&str> = parts.iter().flat_map(|p| declared_names(model, p)).collect();
        let emergent = declared_names(model, &e.name)
            .into_iter()
            .filter(|n| !component_names.contains(n))
            .filter(|n| !model.outgoing(&e.name).any(|r| r.part_of && r.name == *n))
            .count();
        if emergent == 0 {
            problems.push("it has no emergent attribute or relationship".to_string());
        }
        if !problems.is_empty() {
            out.push(Diagnostic::new(
                Code::Rule4,
                [e.name.as_str()],
                format!("composite '{}': {}", e.name, problems.join("; ")),
            ));
        }
    }

    // RULE5
    let mut subs: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (sub, sup) in &model.generalizations {
        subs.entry(sub).or_default().push(sup);
    }
    for (&sub, sups) in &subs {
        let inherited: BTreeSet<&str> =
            transitive_supers(model, sub).into_iter().flat_map(|s| declared_names(model, s)).collect();
        if declared_names(model, sub).iter().all(|n| inherited.contains(n)) {
            out.push(Diagnostic::new(
                Code::Rule5,
                std::iter::once(sub).chain(sups.iter().copied()),
                format!("'{sub}' declares no attribute or relationship beyond its supertypes"),
            ));
        }
    }
    let edge_repair = |sub: &str, sup: &str| {
        (!demoted.contains(sub) && !demoted.contains(sup))
            .then(|| Repair::RemoveGeneralization { sub: sub.to_string(), sup: sup.to_string() })
    };
    for (sub, sup) in &model.generalizations {
        for end in [sub, sup] {
            if non_substantial(end) {
                let mut d = Diagnostic::new(
                    Code::Rule5,
                    [sub.as_str(), sup.as_str()],
                    format!("generalization '{sub}' --|> '{sup}' involves non-substantial '{end}'"),
                );
                d.repair = edge_repair(sub, sup);
                out.push(d);
            }
        }
    }
    for mut d in axiom_findings(&model.generalizations, annotations) {
        d.repair = edge_repair(&d.subjects[0], &d.subjects[1]);
        out.push(d);
    }

    let used: BTreeSet<String> = model
        .entity_types
        .iter()
        .flat_map(|e| {
            std::iter::once(e.name.clone())
                .chain(e.attributes.iter().flat_map(|a| [a.name.clone(), format!("{}.{}", e.name, a.name)]))
        })
        .collect();
    for name in annotations.keys().filter(|k| !used.contains(*k)) {
        out.push(Diagnostic::new(
            Code::AnnotationUnused,
            [name.as_str()],
            format!("annotation for '{name}' matches no entity type or attribute"),
        ));
    }
    out
}

/// Repairs carried by `diagnostics`, deduplicated, in order.
pub fn suggested_repairs(diagnostics: &[Diagnostic]) -> Vec<Repair> {
    let mut seen = BTreeSet::new();
    diagnostics.iter().filter_map(|d| d.repair.clone()).filter(|r| seen.insert(r.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error("repair refers to '{0}', which is not in the model")]
    UnknownSubject(String),
    #[error("repairs conflict: {first} / {second}")]
    RepairConflict { first: Repair, second: Repair },
    #[error("'{host}' already has an attribute named '{attribute}'")]
    AttributeExists { host: String, attribute: String },
}

/// Apply `repairs` to a copy of `model`.
///
/// Demoting an entity type removes it with every relationship touching it,
/// adds a `string` attribute of the same name to the host (multiplicity
/// taken from the host's relationship to it), and re-attaches its subtypes
/// to the host.
pub fn apply_repairs(model: &ConceptualModel, repairs: &[Repair]) -> Result<ConceptualModel, RepairError> {
    let repairs: Vec<&Repair> = {
        let mut seen = BTreeSet::new();
        repairs.iter().filter(|r| seen.insert(*r)).collect()
    };

    let mut demotions: BTreeMap<&str, (&str, &Repair)> = BTreeMap::new();
    let mut removals: Vec<(&str, &str, &Repair)> = Vec::new();
    for r in &repairs {
        match r {
            Repair::DemoteToAttribute { entity, host } => {
                for n in [entity, host] {
                    if !model.has_entity(n) {
                        return Err(RepairError::UnknownSubject(n.clone()));
                    }
                }
                if entity == host {
                    return Err(RepairError::RepairConflict { first: (*r).clone(), second: (*r).clone() });
                }
                if let Some((_, other)) = demotions.get(entity.as_str()) {
                    return Err(RepairError::RepairConflict { first: (*other).clone(), second: (*r).clone() });
                }
                demotions.insert(entity, (host, r));
            }
            Repair::RemoveGeneralization { sub, sup } => {
                if !model.generalizations.contains(&(sub.clone(), sup.clone())) {
                    return Err(RepairError::UnknownSubject(format!("{sub} --|> {sup}")));
                }
                removals.push((sub, sup, r));
            }
        }
    }
    for (host, r) in demotions.values() {
        if let Some((_, other)) = demotions.get(host) {
            return Err(RepairError::RepairConflict { first: (*other).clone(), second: (*r).clone() });
        }
    }
    for (sub, sup, r) in &removals {
        for end in [sub, sup] {
            if let Some((_, other)) = demotions.get(end) {
                return Err(RepairError::RepairConflict { first: (*other).clone(), second: (*r).clone() });
            }
        }
    }

    let mut out = model.clone();
    for (sub, sup, _) in &removals {
        out.generalizations.remove(&(sub.to_string(), sup.to_string()));
    }
    for (&entity, &(host, _)) in &demotions {
        if out.entity(host).is_some_and(|h| h.attribute(entity).is_some()) {
            return Err(RepairError::AttributeExists { host: host.to_string(), attribute: entity.to_string() });
        }
        let multiplicity = out
            .relationships
            .iter()
            .filter(|r| r.source == host && r.target == entity)
            .min_by(|a, b| a.name.cmp(&b.name))
            .map_or(Bounds::ANY, |r| r.target_card);
        out.relationships.retain(|r| r.source != entity && r.target != entity);
        let children: Vec<String> = out.subs_of(entity).map(str::to_string).collect();
        out.generalizations.retain(|(a, b)| a != entity && b != entity);
        let host_supers = transitive_supers(&out, host).into_iter().map(str::to_string).collect::<BTreeSet<_>>();
        for child in children {
            if child != host && !host_supers.contains(&child) {
                out.generalizations.insert((child, host.to_string()));
            }
        }
        out.entity_types.retain(|e| e.name != entity);
        if let Some(h) = out.entity_mut(host) {
            h.attributes.push(Attribute::new(entity, "string", multiplicity));
        }
    }
    out.canonicalize();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdm::{EntityType, Relationship};

    fn ann(concept: &str, r: Rigidity, i: bool, d: bool) -> MetaAnnotation {
        MetaAnnotation::new(concept, r, i, d)
    }

    fn annotations(list: impl IntoIterator<Item = MetaAnnotation>) -> Annotations {
        list.into_iter().map(|a| (a.concept.clone(), a)).collect()
    }

    #[test]
    fn cited_categories() {
        assert_eq!(ann("x", Rigidity::Rigid, true, false).category(), Category::Type);
        assert_eq!(ann("x", Rigidity::NonRigid, false, true).category(), Category::Attribution);
        assert_eq!(ann("x", Rigidity::AntiRigid, false, true).category(), Category::Role);
        assert_eq!(ann("x", Rigidity::AntiRigid, true, false).category(), Category::PhasedSortal);
        assert_eq!(ann("x", Rigidity::Rigid, false, false).category(), Category::Unclassifiable);
    }

    #[test]
    fn person_student_violates_axiom_one() {
        let taxonomy: BTreeSet<_> = [("person".to_string(), "student".to_string())].into();
        let a = annotations([
            ann("person", Rigidity::Rigid, true, false),
            ann("student", Rigidity::AntiRigid, true, false),
        ]);
        let d = check_axioms(&taxonomy, &a);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, Code::Axiom1);
    }

    #[test]
    fn enzyme_under_supplying_protein_is_fine() {
        let taxonomy: BTreeSet<_> = [("enzyme".to_string(), "protein".to_string())].into();
        let a = annotations([
            ann("enzyme", Rigidity::AntiRigid, false, true),
            ann("protein", Rigidity::Rigid, true, false).supplying(),
        ]);
        assert!(check_axioms(&taxonomy, &a).is_empty());
    }

    #[test]
    fn empty_taxonomy() {
        assert!(check_axioms(&BTreeSet::new(), &Annotations::new()).is_empty());
        assert!(validate_model(&ConceptualModel::default(), &Annotations::new()).is_empty());
    }

    #[test]
    fn identity_flows_from_supplier_to_all_descendants() {
        let taxonomy: BTreeSet<(String, String)> =
            [("b", "a"), ("c", "b"), ("d", "c"), ("e", "a"), ("x", "y")]
                .iter()
                .map(|(s, p)| (s.to_string(), p.to_string()))
                .collect();
        let a = annotations([ann("a", Rigidity::Rigid, true, false).supplying()]);
        let carriers = effective_identity(&taxonomy, &a);
        let expected: BTreeSet<String> = ["a", "b", "c", "d", "e"].iter().map(|s| s.to_string()).collect();
        assert_eq!(carriers, expected);
    }

    #[test]
    fn sidecar_round_trip_and_empty() {
        let src = br#"[{"concept": "protein", "rigidity": "+R", "identity": "+I", "supplies": true, "unity": "+U", "dependence": "-D"},
                      {"concept": "protein-name", "rigidity": "-R", "identity": "-I", "unity": null, "dependence": "+D"}]"#;
        let a = read_annotations(src).unwrap();
        assert!(a["protein"].supplies_identity);
        assert_eq!(a["protein"].unity, Some(Unity::Unity));
        assert_eq!(read_annotations(write_annotations(&a).as_bytes()).unwrap(), a);
        assert!(read_annotations(b"  \n").unwrap().is_empty());
    }

    #[test]
    fn sidecar_rejects_supplies_without_identity() {
        let src = br#"[{"concept": "x", "rigidity": "+R", "identity": "-I", "supplies": true, "dependence": "-D"}]"#;
        assert_eq!(read_annotations(src), Err(AnnotationError::SuppliesWithoutIdentity("x".into())));
    }

    fn protein_model() -> ConceptualModel {
        let mut m = ConceptualModel::default();
        m.add_entity(EntityType::new("protein").with_attribute(Attribute::new("weight", "float", Bounds::OPTIONAL)));
        m.add_entity(EntityType::new("accession-number"));
        m.add_relationship(Relationship::new("has-accession-number", "protein", "accession-number").with_target_card(Bounds::OPTIONAL));
        m
    }

    #[test]
    fn attribution_entity_gets_demotion() {
        let m = protein_model();
        let a = annotations([
            ann("protein", Rigidity::Rigid, true, false).supplying(),
            ann("accession-number", Rigidity::NonRigid, false, true),
        ]);
        let d = validate_model(&m, &a);
        let codes: Vec<Code> = d.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![Code::Rule1, Code::Rule3]);
        assert_eq!(
            d[0].repair,
            Some(Repair::DemoteToAttribute { entity: "accession-number".into(), host: "protein".into() })
        );
        let fixed = apply_repairs(&m, &suggested_repairs(&d)).unwrap();
        assert!(!fixed.has_entity("accession-number"));
        assert!(fixed.relationships.is_empty());
        let attr = fixed.entity("protein").unwrap().attribute("accession-number").unwrap();
        assert_eq!((attr.datatype.as_str(), attr.multiplicity), ("string", Bounds::OPTIONAL));
        assert!(validate_model(&fixed, &a).iter().all(|d| !d.is_error()));
    }

    #[test]
    fn ambiguous_host_omits_repair() {
        let mut m = protein_model();
        m.add_entity(EntityType::new("gene"));
        m.add_relationship(Relationship::new("has-accession-number", "gene", "accession-number"));
        let a = annotations([ann("accession-number", Rigidity::NonRigid, false, true)]);
        let d: Vec<_> = validate_model(&m, &a).into_iter().filter(|d| d.code == Code::Rule1).collect();
        assert_eq!(d.len(), 1);
        assert!(d[0].repair.is_none());
        assert!(d[0].message.contains("gene, protein"));
    }

    #[test]
    fn rule5_requires_a_declared_delta() {
        let mut m = ConceptualModel::default();
        m.add_entity(EntityType::new("a").with_attribute(Attribute::new("x", "string", Bounds::ANY)));
        m.add_entity(EntityType::new("b").with_attribute(Attribute::new("x", "string", Bounds::ANY)));
        m.add_generalization("b", "a");
        let codes: Vec<Code> = validate_model(&m, &Annotations::new()).into_iter().map(|d| d.code).collect();
        assert!(codes.contains(&Code::Rule5));
        m.entity_mut("b").unwrap().attributes.push(Attribute::new("y", "string", Bounds::ANY));
        let codes: Vec<Code> = validate_model(&m, &Annotations::new()).into_iter().map(|d| d.code).collect();
        assert!(!codes.contains(&Code::Rule5));
    }

    #[test]
    fn rule2_flags_identity_bearing_attribute() {
        let m = protein_model();
        let a = annotations([ann("weight", Rigidity::Rigid, true, false)]);
        let d: Vec<_> = validate_model(&m, &a).into_iter().filter(|d| d.code == Code::Rule2).collect();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, crate::diagnostic::Severity::Warning);
    }

    #[test]
    fn rule4_composite_needs_emergence() {
        let mut m = ConceptualModel::default();
        let mut car = EntityType::new("car");
        car.composite = true;
        m.add_entity(car).add_entity(EntityType::new("wheel")).add_entity(EntityType::new("engine"));
        for (n, t) in [("has-wheel", "wheel"), ("has-engine", "engine")] {
            let mut r = Relationship::new(n, "car", t);
            r.part_of = true;
            m.add_relationship(r);
        }
        let codes = |m: &ConceptualModel| validate_model(m, &Annotations::new()).into_iter().map(|d| d.code).collect::<Vec<_>>();
        assert_eq!(codes(&m), vec![Code::MissingAnnotation; 3].into_iter().chain([Code::Rule4]).collect::<Vec<_>>());
        m.entity_mut("car").unwrap().attributes.push(Attribute::new("top-speed", "float", Bounds::OPTIONAL));
        assert!(!codes(&m).contains(&Code::Rule4));
    }

    #[test]
    fn conflicting_and_unknown_repairs() {
        let mut m = protein_model();
        m.add_entity(EntityType::new("gene"));
        let d1 = Repair::DemoteToAttribute { entity: "accession-number".into(), host: "protein".into() };
        let d2 = Repair::DemoteToAttribute { entity: "accession-number".into(), host: "gene".into() };
        assert!(matches!(apply_repairs(&m, &[d1.clone(), d2]), Err(RepairError::RepairConflict { .. })));
        let chained = Repair::DemoteToAttribute { entity: "protein".into(), host: "gene".into() };
        assert!(matches!(apply_repairs(&m, &[d1.clone(), chained]), Err(RepairError::RepairConflict { .. })));
        let ghost = Repair::DemoteToAttribute { entity: "ghost".into(), host: "protein".into() };
        assert_eq!(apply_repairs(&m, &[ghost]), Err(RepairError::UnknownSubject("ghost".into())));
        assert_eq!(apply_repairs(&m, &[d1.clone(), d1]).unwrap().counts().entity_types, 2);
    }

    #[test]
    fn empty_repairs_leave_model_unchanged() {
        let mut m = protein_model();
        m.canonicalize();
        assert_eq!(apply_repairs(&m, &[]).unwrap(), m);
    }

    #[test]
    fn demotion_reattaches_subtypes() {
        let mut m = protein_model();
        m.add_entity(EntityType::new("structure"));
        m.add_entity(EntityType::new("primary").with_attribute(Attribute::new("seq", "string", Bounds::ANY)));
        m.add_relationship(Relationship::new("has-structure", "protein", "structure"));
        m.add_generalization("primary", "structure");
        let r = Repair::DemoteToAttribute { entity: "structure".into(), host: "protein".into() };
        let out = apply_repairs(&m, &[r]).unwrap();
        assert!(out.generalizations.contains(&("primary".into(), "protein".into())));
        assert!(out.validate().is_empty());
    }
}
