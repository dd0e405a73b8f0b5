//! Findings reported by the validators and the reader.
//!
//! A [`Diagnostic`] is data, not a failure: validators return lists of them
//! and the caller decides what to do. The severity of every diagnostic is a
//! fixed function of its [`Code`].

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Stable, machine-consumable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Code {
    // taxonomy axioms
    #[serde(rename = "AXIOM1")]
    Axiom1,
    #[serde(rename = "AXIOM2")]
    Axiom2,
    #[serde(rename = "AXIOM3")]
    Axiom3,
    // conceptual modelling rules
    #[serde(rename = "RULE1")]
    Rule1,
    #[serde(rename = "RULE2")]
    Rule2,
    #[serde(rename = "RULE3")]
    Rule3,
    #[serde(rename = "RULE4")]
    Rule4,
    #[serde(rename = "RULE5")]
    Rule5,
    MissingAnnotation,
    AnnotationUnused,
    // ontology structure
    UnknownReference,
    SubsumptionCycle,
    OperandArity,
    NameMismatch,
    RestrictionFillerKind,
    PropertyRangeKind,
    InverseAsymmetry,
    InverseOnIntrinsic,
    BuiltinDeclared,
    InvalidCardinality,
    // model structure
    DanglingReference,
    GeneralizationCycle,
    DuplicateEntity,
    DuplicateAttribute,
    DuplicateRelationship,
    InvalidMultiplicity,
    // reader
    UnsupportedConstruct,
}

impl Code {
    pub fn severity(self) -> Severity {
        use Code::*;
        match self {
            Rule2 | Rule4 | MissingAnnotation | UnsupportedConstruct => Severity::Warning,
            AnnotationUnused => Severity::Info,
            _ => Severity::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        use Code::*;
        match self {
            Axiom1 => "AXIOM1",
            Axiom2 => "AXIOM2",
            Axiom3 => "AXIOM3",
            Rule1 => "RULE1",
            Rule2 => "RULE2",
            Rule3 => "RULE3",
            Rule4 => "RULE4",
            Rule5 => "RULE5",
            MissingAnnotation => "MISSING_ANNOTATION",
            AnnotationUnused => "ANNOTATION_UNUSED",
            UnknownReference => "UNKNOWN_REFERENCE",
            SubsumptionCycle => "SUBSUMPTION_CYCLE",
            OperandArity => "OPERAND_ARITY",
            NameMismatch => "NAME_MISMATCH",
            RestrictionFillerKind => "RESTRICTION_FILLER_KIND",
            PropertyRangeKind => "PROPERTY_RANGE_KIND",
            InverseAsymmetry => "INVERSE_ASYMMETRY",
            InverseOnIntrinsic => "INVERSE_ON_INTRINSIC",
            BuiltinDeclared => "BUILTIN_DECLARED",
            InvalidCardinality => "INVALID_CARDINALITY",
            DanglingReference => "DANGLING_REFERENCE",
            GeneralizationCycle => "GENERALIZATION_CYCLE",
            DuplicateEntity => "DUPLICATE_ENTITY",
            DuplicateAttribute => "DUPLICATE_ATTRIBUTE",
            DuplicateRelationship => "DUPLICATE_RELATIONSHIP",
            InvalidMultiplicity => "INVALID_MULTIPLICITY",
            UnsupportedConstruct => "UNSUPPORTED_CONSTRUCT",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A model edit that resolves a finding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Repair {
    /// Replace an entity type by an attribute of `host`.
    DemoteToAttribute { entity: String, host: String },
    /// Delete the generalization edge `sub --|> super`.
    RemoveGeneralization {
        sub: String,
        #[serde(rename = "super")]
        sup: String,
    },
}

impl fmt::Display for Repair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repair::DemoteToAttribute { entity, host } => {
                write!(f, "demote '{entity}' to an attribute of '{host}'")
            }
            Repair::RemoveGeneralization { sub, sup } => {
                write!(f, "remove generalization '{sub}' --|> '{sup}'")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub subjects: Vec<String>,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repair: Option<Repair>,
}

impl Diagnostic {
    pub fn new<S: Into<String>>(
        code: Code,
        subjects: impl IntoIterator<Item = S>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            subjects: subjects.into_iter().map(Into::into).collect(),
            message: message.into(),
            repair: None,
        }
    }

    pub fn with_repair(mut self, repair: Repair) -> Self {
        self.repair = Some(repair);
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.severity, self.code, self.message)?;
        if let Some(repair) = &self.repair {
            write!(f, " (suggested: {repair})")?;
        }
        Ok(())
    }
}

/// Worst severity in `diagnostics`, if any.
pub fn worst(diagnostics: &[Diagnostic]) -> Option<Severity> {
    diagnostics.iter().map(|d| d.severity).max()
}

/// Serialize a diagnostic list as the canonical JSON array.
pub fn to_json(diagnostics: &[Diagnostic]) -> String {
    crate::json::to_canonical_string(&diagnostics)
}
