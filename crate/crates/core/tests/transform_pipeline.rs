use std::collections::BTreeSet;
use std::path::PathBuf;

use ontocdm::cdm::ConceptualModel;
use ontocdm::reader::{read_path, ReaderConfig};
use ontocdm::transform::{transform, TraceAction, TransformOptions};
use ontocdm::ModelCounts;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mini_tambis() -> ontocdm::Ontology {
    read_path(&fixture("mini_tambis.json"), &ReaderConfig::default()).unwrap().ontology
}

fn golden(name: &str) -> ConceptualModel {
    serde_json::from_slice(&std::fs::read(fixture(name)).unwrap()).unwrap()
}

#[test]
fn mini_tambis_matches_hand_derived_model() {
    let (mut model, _) = transform(&mini_tambis(), &TransformOptions::with_roots(["protein"])).unwrap();
    model.provenance.clear();
    let expected = golden("mini_tambis.gcdm.json");
    assert_eq!(model, expected);
    assert_eq!(
        model.counts(),
        ModelCounts { entity_types: 19, relationships: 7, attributes: 17, generalizations: 12 }
    );
}

#[test]
fn out_of_scope_classes_are_left_alone() {
    let (model, trace) = transform(&mini_tambis(), &TransformOptions::with_roots(["protein"])).unwrap();
    assert!(!model.has_entity("pathway"));
    assert!(!trace.entries.iter().any(|e| e.input.contains("pathway")));
    let (whole, _) = transform(&mini_tambis(), &TransformOptions::default()).unwrap();
    assert!(whole.has_entity("pathway"));
    assert!(whole.has_entity("biological-process"));
}

#[test]
fn trace_replays_to_model() {
    let (model, trace) = transform(&mini_tambis(), &TransformOptions::with_roots(["protein"])).unwrap();
    let live: BTreeSet<String> = model.element_refs().iter().map(ToString::to_string).collect();
    assert_eq!(trace.replay(), live);
    let builtin_skip = trace
        .entries
        .iter()
        .find(|e| e.input == "subClassOf(species, owl:Thing)")
        .expect("builtin edge traced");
    assert_eq!(builtin_skip.action, TraceAction::Skipped);
}

#[test]
fn provenance_records_first_rule() {
    let (model, _) = transform(&mini_tambis(), &TransformOptions::with_roots(["protein"])).unwrap();
    let p = |k: &str| model.provenance[k].rule;
    assert_eq!(p("entity:protein"), 1);
    assert_eq!(p("generalization:protein<amino-acid-compound"), 5);
    assert_eq!(p("generalization:dna<nucleic-acid-compound"), 5);
    assert_eq!(p("generalization:amino-acid-compound<macro-molecular-compound"), 6);
    assert_eq!(p("relationship:has-structure(protein,protein-structure)"), 2);
    assert_eq!(p("attribute:protein.sequence-length"), 2);
    assert!(!model.provenance.contains_key("generalization:protein<macro-molecular-compound"));
    assert_eq!(model.provenance.len(), model.element_refs().len());
}

#[test]
fn rdfxml_and_json_forms_agree() {
    let from_xml = read_path(&fixture("mini_tambis.owl"), &ReaderConfig::strict()).unwrap();
    assert!(from_xml.warnings.is_empty());
    let opts = TransformOptions::with_roots(["protein"]);
    let (mut a, _) = transform(&from_xml.ontology, &opts).unwrap();
    let (mut b, _) = transform(&mini_tambis(), &opts).unwrap();
    for m in [&mut a, &mut b] {
        m.provenance.clear();
        for e in &mut m.entity_types {
            for attr in &mut e.attributes {
                attr.datatype = attr.datatype.trim_start_matches("xsd:").to_string();
            }
        }
    }
    assert_eq!(a, b);
}
