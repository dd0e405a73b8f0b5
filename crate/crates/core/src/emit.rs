//! Rendering models as PlantUML class diagrams and canonical JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cdm::{ConceptualModel, ElementRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    PlantUml,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plantuml" => Ok(Format::PlantUml),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected plantuml or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmitOptions {
    pub format: Format,
    /// Precede each element with a `'` comment naming the rule and
    /// construct it came from.
    pub include_provenance_comments: bool,
}

pub fn emit(model: &ConceptualModel, opts: EmitOptions) -> String {
    match opts.format {
        Format::PlantUml => emit_plantuml(model, opts),
        Format::Json => emit_json(model),
    }
}

/// Canonical model JSON; parses back to an equal (canonicalized) model.
pub fn emit_json(model: &ConceptualModel) -> String {
    let mut m = model.clone();
    m.canonicalize();
    crate::json::to_canonical_string(&m)
}

fn quoted(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "'"))
}

pub fn emit_plantuml(model: &ConceptualModel, opts: EmitOptions) -> String {
    let mut m = model.clone();
    m.canonicalize();
    let mut out = String::from("@startuml\n");
    let provenance = |out: &mut String, element: ElementRef, indent: &str| {
        if !opts.include_provenance_comments {
            return;
        }
        if let Some(p) = m.provenance.get(&element.to_string()) {
            let _ = writeln!(out, "{indent}' rule {}: {}", p.rule, p.construct);
        }
    };
    for e in &m.entity_types {
        provenance(&mut out, ElementRef::Entity(e.name.clone()), "");
        let stereotype = if e.composite { " <<composite>>" } else { "" };
        let _ = writeln!(out, "class {}{stereotype} {{", quoted(&e.name));
        for a in &e.attributes {
            provenance(&mut out, ElementRef::attribute(&e.name, &a.name), "  ");
            let _ = writeln!(out, "  {}: {}", a.name, a.datatype);
        }
        out.push_str("}\n");
    }
    for (sub, sup) in &m.generalizations {
        provenance(&mut out, ElementRef::generalization(sub, sup), "");
        let _ = writeln!(out, "{} --|> {}", quoted(sub), quoted(sup));
    }
    for r in &m.relationships {
        provenance(&mut out, ElementRef::relationship(r), "");
        let arrow = if r.part_of { "*-->" } else { "-->" };
        let _ = writeln!(
            out,
            "{} \"{}\" {arrow} \"{}\" {} : {}",
            quoted(&r.source),
            r.source_card,
            r.target_card,
            quoted(&r.target),
            r.name
        );
    }
    out.push_str("@enduml\n");
    out
}
