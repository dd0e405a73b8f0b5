//! Seeded generators shared by the acceptance and property suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ontocdm::ontology::{Constraint, Filler, OntoClass, OntoProperty, Ontology, RestrictionSpec};
use ontocdm::Bounds;
use rand::seq::SliceRandom;
use rand::Rng;

const DATATYPES: [&str; 4] = ["string", "integer", "float", "boolean"];

/// A valid ontology with `n` named classes (some defined as unions or
/// intersections of others), up to `max_props` properties, restrictions
/// and acyclic subsumption. Every edge runs from a higher to a lower class
/// index, and no subsumption duplicates an expression edge.
pub fn random_ontology<R: Rng>(rng: &mut R, n: usize, max_props: usize) -> Ontology {
    let name = |i: usize| format!("k{i}");
    let mut o = Ontology::new(format!("urn:random:{n}"));
    let mut expression_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        let roll: f64 = rng.gen();
        if roll < 0.15 && i >= 2 {
            let mut pool: Vec<usize> = (0..i).collect();
            pool.shuffle(rng);
            let k = rng.gen_range(2..=3.min(i));
            let ops: Vec<usize> = pool[..k].to_vec();
            expression_edges.extend(ops.iter().map(|&op| (i, op)));
            o.add_class(OntoClass::intersection(name(i), ops.into_iter().map(name).collect()));
        } else if roll < 0.3 && i + 2 < n {
            let mut pool: Vec<usize> = (i + 1..n).collect();
            pool.shuffle(rng);
            let k = rng.gen_range(2..=3.min(pool.len()));
            let ops: Vec<usize> = pool[..k].to_vec();
            expression_edges.extend(ops.iter().map(|&op| (op, i)));
            o.add_class(OntoClass::union(name(i), ops.into_iter().map(name).collect()));
        } else {
            o.add_class(OntoClass::named(name(i)));
        }
    }
    for i in 1..n {
        for _ in 0..rng.gen_range(0..=2) {
            let j = rng.gen_range(0..i);
            if !expression_edges.contains(&(i, j)) {
                o.add_subsumption(name(i), name(j));
            }
        }
        if rng.gen_bool(0.1) {
            o.add_subsumption(name(i), "owl:Thing");
        }
    }
    if n == 0 {
        return o;
    }
    let props = rng.gen_range(0..=max_props);
    for p in 0..props {
        let pname = format!("p{p}");
        let domain = name(rng.gen_range(0..n));
        let mut prop = if rng.gen_bool(0.5) {
            OntoProperty::mutual(pname.clone(), Some(&domain), name(rng.gen_range(0..n)))
        } else {
            OntoProperty::intrinsic(pname.clone(), Some(&domain), *DATATYPES.choose(rng).unwrap())
        };
        if rng.gen_bool(0.3) {
            prop = prop.functional();
        }
        let range = prop.range.clone();
        let mutual = prop.kind == ontocdm::ontology::PropertyKind::Mutual;
        o.add_property(prop);
        if rng.gen_bool(0.4) {
            let host = if rng.gen_bool(0.5) { domain } else { name(rng.gen_range(0..n)) };
            let filler = if mutual { Filler::Class(range) } else { Filler::Datatype(range) };
            let constraint = match rng.gen_range(0..3) {
                0 => Constraint::SomeValuesFrom,
                1 => Constraint::AllValuesFrom,
                _ => {
                    let min = rng.gen_range(0..=1);
                    let max = [None, Some(1), Some(2)][rng.gen_range(0..3)];
                    Constraint::Cardinality(Bounds::new(min, max))
                }
            };
            let anon = format!("_anon:{p}");
            o.add_class(OntoClass::restriction(
                anon.clone(),
                RestrictionSpec { on_property: pname, filler, constraint },
            ));
            o.add_subsumption(host, anon);
        }
    }
    o
}

/// Edges among named classes implied directly by the ontology:
/// named subsumptions, `c ⊑ op` for intersections, `op ⊑ c` for unions.
pub fn direct_edges(o: &Ontology) -> BTreeSet<(String, String)> {
    let named = |n: &str| !n.starts_with("_anon:") && !n.starts_with("owl:");
    let mut edges: BTreeSet<(String, String)> =
        o.subsumptions.iter().filter(|(a, b)| named(a) && named(b)).cloned().collect();
    for c in o.classes.values() {
        match c.kind {
            ontocdm::ontology::ClassKind::Intersection => {
                edges.extend(c.operands.iter().map(|op| (c.name.clone(), op.clone())))
            }
            ontocdm::ontology::ClassKind::Union => {
                edges.extend(c.operands.iter().map(|op| (op.clone(), c.name.clone())))
            }
            _ => {}
        }
    }
    edges
}

/// Brute force: drop every edge whose head is reachable from its tail by
/// a path of two or more edges.
pub fn reduce_by_search(edges: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in edges {
        succ.entry(a).or_default().push(b);
    }
    let reachable = |from: &str, to: &str| {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if seen.insert(x) {
                stack.extend(succ.get(x).into_iter().flatten().copied());
            }
        }
        false
    };
    edges
        .iter()
        .filter(|(a, b)| {
            !succ[a.as_str()].iter().any(|c| *c != b.as_str() && reachable(c, b))
        })
        .cloned()
        .collect()
}

/// An ontology shaped like a curated taxonomy: every class below the root
/// has one primary parent, about a fifth get a second parent, a few hang
/// off `owl:Thing`, and a few are defined as intersections. Properties and
/// restrictions scale with the class count.
pub fn taxonomy_ontology<R: Rng>(rng: &mut R, n: usize) -> Ontology {
    let name = |i: usize| format!("t{i}");
    let mut o = Ontology::new(format!("urn:taxonomy:{n}"));
    let mut intersections = BTreeSet::new();
    for i in 0..n {
        if i >= 4 && rng.gen_bool(0.05) {
            let a = rng.gen_range(0..i);
            let b = (a + 1 + rng.gen_range(0..i - 1)) % i;
            intersections.insert(i);
            o.add_class(OntoClass::intersection(name(i), vec![name(a), name(b)]));
        } else {
            o.add_class(OntoClass::named(name(i)));
        }
    }
    for i in 1..n {
        if intersections.contains(&i) {
            continue;
        }
        let primary = rng.gen_range(0..i);
        o.add_subsumption(name(i), name(primary));
        if i >= 2 && rng.gen_bool(0.2) {
            let second = rng.gen_range(0..i);
            if second != primary {
                o.add_subsumption(name(i), name(second));
            }
        }
    }
    if n > 0 {
        o.add_subsumption(name(0), "owl:Thing");
    }
    for p in 0..n / 2 {
        let pname = format!("q{p}");
        let domain = name(rng.gen_range(0..n));
        let prop = if rng.gen_bool(0.5) {
            OntoProperty::mutual(pname.clone(), Some(&domain), name(rng.gen_range(0..n)))
        } else {
            OntoProperty::intrinsic(pname.clone(), Some(&domain), *DATATYPES.choose(rng).unwrap())
        };
        let (range, mutual) = (prop.range.clone(), prop.kind == ontocdm::ontology::PropertyKind::Mutual);
        o.add_property(prop);
        if rng.gen_bool(0.3) {
            let filler = if mutual { Filler::Class(range) } else { Filler::Datatype(range) };
            let anon = format!("_anon:{p}");
            o.add_class(OntoClass::restriction(
                anon.clone(),
                RestrictionSpec { on_property: pname, filler, constraint: Constraint::SomeValuesFrom },
            ));
            o.add_subsumption(domain, anon);
        }
    }
    o
}
