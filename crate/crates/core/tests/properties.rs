mod common;

use std::collections::BTreeSet;

use ontocdm::cdm::{Attribute, ConceptualModel, EntityType, Relationship};
use ontocdm::emit::emit_json;
use ontocdm::metrics::{compare_models, fit_regression, normalize_name, tokenize_name};
use ontocdm::transform::{scope, transform, TransformOptions};
use ontocdm::Bounds;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ontology_from(seed: u64, n: usize) -> ontocdm::Ontology {
    common::random_ontology(&mut ChaCha8Rng::seed_from_u64(seed), n, 10)
}

fn small_model() -> impl Strategy<Value = ConceptualModel> {
    let names = prop::collection::btree_set("[a-e]", 0..5);
    names
        .prop_flat_map(|names| {
            let names: Vec<String> = names.into_iter().collect();
            let k = names.len();
            let pick = if k == 0 { (0..1usize).boxed() } else { (0..k).boxed() };
            (
                Just(names),
                prop::collection::vec((pick.clone(), pick.clone()), 0..6),
                prop::collection::vec(("[rs]", pick.clone(), pick.clone(), 0u32..3, prop::option::of(3u32..5)), 0..6),
                prop::collection::vec((pick, "[xy]", prop::sample::select(vec!["string", "integer"])), 0..6),
            )
        })
        .prop_map(|(names, gens, rels, attrs)| {
            let mut m = ConceptualModel::default();
            if names.is_empty() {
                return m;
            }
            for n in &names {
                m.add_entity(EntityType::new(n.as_str()));
            }
            for (a, b) in gens {
                if a > b {
                    m.add_generalization(names[a].as_str(), names[b].as_str());
                }
            }
            for (name, s, t, min, max) in rels {
                let mut r = Relationship::new(name, names[s].as_str(), names[t].as_str());
                r.target_card = Bounds::new(min, max);
                if !m.relationships.iter().any(|x| x.key() == r.key()) {
                    m.add_relationship(r);
                }
            }
            for (host, a, dt) in attrs {
                let e = m.entity_mut(&names[host]).unwrap();
                if e.attribute(&a).is_none() {
                    e.attributes.push(Attribute::new(a, dt, Bounds::OPTIONAL));
                }
            }
            m.canonicalize();
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalizing_is_idempotent(name in "[A-Za-z0-9_ -]{0,24}") {
        let once = normalize_name(&name);
        prop_assert_eq!(normalize_name(&once), once.clone());
        prop_assert_eq!(tokenize_name(&once), tokenize_name(&name));
    }

    #[test]
    fn tokens_are_lowercased_and_nonempty(name in "\\PC{0,24}") {
        for t in tokenize_name(&name) {
            prop_assert!(!t.is_empty());
            prop_assert_eq!(t.to_lowercase(), t);
        }
    }

    #[test]
    fn r_squared_survives_affine_maps(
        points in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..30),
        a in 0.1f64..10.0, b in -50.0f64..50.0, c in 0.1f64..10.0, d in -50.0f64..50.0,
    ) {
        prop_assume!(points.iter().any(|p| (p.0 - points[0].0).abs() > 1e-3));
        prop_assume!(points.iter().any(|p| (p.1 - points[0].1).abs() > 1e-3));
        let base = fit_regression(&points).unwrap();
        let mapped: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (a * x + b, c * y + d)).collect();
        let moved = fit_regression(&mapped).unwrap();
        prop_assert!((base.r_squared - moved.r_squared).abs() < 1e-8, "{} vs {}", base.r_squared, moved.r_squared);
    }

    #[test]
    fn swapping_models_swaps_recall_and_precision(a in small_model(), b in small_model()) {
        let ab = compare_models(&a, &b);
        let ba = compare_models(&b, &a);
        for (x, y) in [
            (&ab.entity_types, &ba.entity_types),
            (&ab.generalizations, &ba.generalizations),
            (&ab.relationships, &ba.relationships),
            (&ab.attributes, &ba.attributes),
        ] {
            prop_assert_eq!(x.recall, y.precision);
            prop_assert_eq!(x.precision, y.recall);
            prop_assert_eq!(&x.matched, &y.matched);
            prop_assert_eq!(&x.missing, &y.extra);
        }
    }

    #[test]
    fn json_round_trips_and_is_injective(a in small_model(), b in small_model()) {
        let ja = emit_json(&a);
        let back: ConceptualModel = serde_json::from_str(&ja).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(ja == emit_json(&b), a == b);
    }

    #[test]
    fn trace_replays_to_the_model(seed in any::<u64>(), n in 0usize..15) {
        let o = ontology_from(seed, n);
        let (model, trace) = transform(&o, &TransformOptions::default()).unwrap();
        let live: BTreeSet<String> = model.element_refs().iter().map(ToString::to_string).collect();
        prop_assert_eq!(trace.replay(), live.clone());
        let with_provenance: BTreeSet<String> = model.provenance.keys().cloned().collect();
        prop_assert_eq!(with_provenance, live);
    }

    #[test]
    fn scope_grows_with_roots(seed in any::<u64>(), n in 1usize..15, picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let o = ontology_from(seed, n);
        let names: Vec<String> = o.classes.keys().filter(|k| !k.starts_with("_anon:")).cloned().collect();
        let roots: BTreeSet<String> = picks.iter().map(|i| i.get(&names).clone()).collect();
        let mut fewer = roots.clone();
        let dropped = fewer.pop_first().unwrap();
        let big = scope(&o, &roots).unwrap();
        prop_assert!(big.contains(&dropped));
        prop_assert!(scope(&o, &fewer).unwrap().is_subset(&big));
        let (model, _) = transform(&o, &TransformOptions::with_roots(roots.iter().cloned())).unwrap();
        prop_assert!(model.entity_types.iter().all(|e| big.contains(&e.name)));
    }
}
