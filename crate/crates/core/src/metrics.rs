//! Evaluation measures: construct-count regression between ontologies and
//! their models, accuracy against a gold model, and lexical correctness
//! of element names.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cdm::ConceptualModel;
use crate::ontology::{is_anonymous, Ontology, PropertyKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("lexicon unavailable: {0}")]
    LexiconUnavailable(String),
    #[error("cannot load pair manifest '{path}': {detail}")]
    Manifest { path: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructCounts {
    pub classes: usize,
    pub subsumptions: usize,
    pub mutual_properties: usize,
    pub intrinsic_properties: usize,
    pub entity_types: usize,
    pub generalizations: usize,
    pub relationships: usize,
    pub attributes: usize,
}

/// Ontology-side counts cover named classes and subsumptions between
/// named classes; anonymous expressions are not counted.
pub fn count_constructs(ontology: &Ontology, model: &ConceptualModel) -> ConstructCounts {
    let m = model.counts();
    let mutual = ontology.properties.values().filter(|p| p.kind == PropertyKind::Mutual).count();
    ConstructCounts {
        classes: ontology.named_class_count(),
        subsumptions: ontology
            .subsumptions
            .iter()
            .filter(|(a, b)| !is_anonymous(a) && !is_anonymous(b))
            .count(),
        mutual_properties: mutual,
        intrinsic_properties: ontology.properties.len() - mutual,
        entity_types: m.entity_types,
        generalizations: m.generalizations,
        relationships: m.relationships,
        attributes: m.attributes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Ordinary least squares fit of `y` on `x`.
pub fn fit_regression(points: &[(f64, f64)]) -> Result<RegressionResult, MetricsError> {
    let n = points.len();
    if n < 2 {
        return Err(MetricsError::DegenerateInput(format!("{n} point(s); at least 2 are needed")));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(MetricsError::DegenerateInput("non-finite coordinate".into()));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(MetricsError::DegenerateInput("all x values are identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        if ss_res <= f64::EPSILON * nf { 1.0 } else { 0.0 }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(RegressionResult { slope, intercept, r_squared, n })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegressionTable {
    pub classes_entity_types: RegressionResult,
    pub subsumptions_generalizations: RegressionResult,
    pub mutual_relationships: RegressionResult,
    pub intrinsic_attributes: RegressionResult,
}

/// One regression per construct pairing across a corpus of pairs.
pub fn regression_table(counts: &[ConstructCounts]) -> Result<RegressionTable, MetricsError> {
    let fit = |f: fn(&ConstructCounts) -> (usize, usize), what: &str| {
        let points: Vec<(f64, f64)> = counts.iter().map(f).map(|(x, y)| (x as f64, y as f64)).collect();
        fit_regression(&points).map_err(|e| match e {
            MetricsError::DegenerateInput(d) => MetricsError::DegenerateInput(format!("{what}: {d}")),
            other => other,
        })
    };
    Ok(RegressionTable {
        classes_entity_types: fit(|c| (c.classes, c.entity_types), "classes vs entity types")?,
        subsumptions_generalizations: fit(|c| (c.subsumptions, c.generalizations), "subsumptions vs generalizations")?,
        mutual_relationships: fit(|c| (c.mutual_properties, c.relationships), "mutual properties vs relationships")?,
        intrinsic_attributes: fit(|c| (c.intrinsic_properties, c.attributes), "intrinsic properties vs attributes")?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPaths {
    pub ontology_path: PathBuf,
    pub model_path: PathBuf,
}

/// Read a pair manifest; relative paths resolve against the manifest's
/// directory.
pub fn read_manifest(path: &Path) -> Result<Vec<PairPaths>, MetricsError> {
    let err = |detail: String| MetricsError::Manifest { path: path.display().to_string(), detail };
    let bytes = std::fs::read(path).map_err(|e| err(e.to_string()))?;
    let pairs: Vec<PairPaths> = serde_json::from_slice(&bytes).map_err(|e| err(e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(pairs
        .into_iter()
        .map(|p| PairPaths { ontology_path: base.join(p.ontology_path), model_path: base.join(p.model_path) })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindAccuracy {
    pub matched: BTreeSet<String>,
    pub missing: BTreeSet<String>,
    pub extra: BTreeSet<String>,
    pub recall: f64,
    pub precision: f64,
}

impl KindAccuracy {
    fn of(generated: &BTreeSet<String>, gold: &BTreeSet<String>) -> Self {
        let matched: BTreeSet<String> = generated.intersection(gold).cloned().collect();
        let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        KindAccuracy {
            recall: ratio(matched.len(), gold.len()),
            precision: ratio(matched.len(), generated.len()),
            missing: gold.difference(generated).cloned().collect(),
            extra: generated.difference(gold).cloned().collect(),
            matched,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameMismatch {
    pub endpoints: String,
    pub generated: BTreeSet<String>,
    pub gold: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AccuracyReport {
    pub entity_types: KindAccuracy,
    pub generalizations: KindAccuracy,
    pub relationships: KindAccuracy,
    pub attributes: KindAccuracy,
    /// Relationships matched on endpoints whose names differ.
    pub relationship_name_mismatches: Vec<NameMismatch>,
}

pub fn normalize_name(name: &str) -> String {
    tokenize_name(name).join("-")
}

struct Elements {
    entities: BTreeSet<String>,
    generalizations: BTreeSet<String>,
    relationships: BTreeMap<String, BTreeSet<String>>,
    attributes: BTreeSet<String>,
}

fn elements(model: &ConceptualModel) -> Elements {
    let mut relationships: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for r in &model.relationships {
        relationships
            .entry(format!("{} -> {}", normalize_name(&r.source), normalize_name(&r.target)))
            .or_default()
            .insert(normalize_name(&r.name));
    }
    Elements {
        entities: model.entity_types.iter().map(|e| normalize_name(&e.name)).collect(),
        generalizations: model
            .generalizations
            .iter()
            .map(|(s, p)| format!("{} --|> {}", normalize_name(s), normalize_name(p)))
            .collect(),
        relationships,
        attributes: model
            .entity_types
            .iter()
            .flat_map(|e| e.attributes.iter().map(move |a| format!("{}.{}", normalize_name(&e.name), normalize_name(&a.name))))
            .collect(),
    }
}

/// Compare a generated model against a gold model. Recall is the headline
/// accuracy; relationships match on their (source, target) endpoints.
pub fn compare_models(generated: &ConceptualModel, gold: &ConceptualModel) -> AccuracyReport {
    let g = elements(generated);
    let h = elements(gold);
    let g_rel: BTreeSet<String> = g.relationships.keys().cloned().collect();
    let h_rel: BTreeSet<String> = h.relationships.keys().cloned().collect();
    let relationship_name_mismatches = g_rel
        .intersection(&h_rel)
        .filter(|k| g.relationships[*k].is_disjoint(&h.relationships[*k]))
        .map(|k| NameMismatch {
            endpoints: k.clone(),
            generated: g.relationships[k].clone(),
            gold: h.relationships[k].clone(),
        })
        .collect();
    AccuracyReport {
        entity_types: KindAccuracy::of(&g.entities, &h.entities),
        generalizations: KindAccuracy::of(&g.generalizations, &h.generalizations),
        relationships: KindAccuracy::of(&g_rel, &h_rel),
        attributes: KindAccuracy::of(&g.attributes, &h.attributes),
        relationship_name_mismatches,
    }
}

#[derive(Clone, Copy, PartialEq)]
enum CharClass {
    Lower,
    Upper,
    Digit,
    Other,
}

fn class_of(c: char) -> CharClass {
    if c.is_lowercase() {
        CharClass::Lower
    } else if c.is_uppercase() {
        CharClass::Upper
    } else if c.is_numeric() {
        CharClass::Digit
    } else if c.is_alphabetic() {
        CharClass::Lower
    } else {
        CharClass::Other
    }
}

/// Split an identifier into lowercase words: at camel-case and acronym
/// boundaries (`HTTPServer` → `http`, `server`), between letters and
/// digits, and at any non-alphanumeric character.
pub fn tokenize_name(name: &str) -> Vec<String> {
    use CharClass::*;
    let chars: Vec<char> = name.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let class = class_of(c);
        if class == Other {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).and_then(|j| chars.get(j)) {
            let prev_class = class_of(prev);
            let next_lower = chars.get(i + 1).is_some_and(|&n| class_of(n) == Lower);
            let boundary = match (prev_class, class) {
                (Lower, Upper) => true,
                (Upper, Upper) => next_lower,
                (Digit, Lower | Upper) | (Lower | Upper, Digit) => true,
                _ => false,
            };
            if boundary && !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    words: HashSet<String>,
}

impl Lexicon {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Lexicon { words: words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).filter(|w| !w.is_empty()).collect() }
    }

    /// One word per line; blank lines ignored.
    pub fn load(path: &Path) -> Result<Self, MetricsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MetricsError::LexiconUnavailable(format!("{}: {e}", path.display())))?;
        Ok(Lexicon::from_words(text.lines()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LexicalReport {
    pub name: String,
    pub tokens: Vec<String>,
    pub all_known: bool,
    pub unknown_tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LexicalSummary {
    pub names: Vec<LexicalReport>,
    pub correct: usize,
    /// `None` when there are no names.
    pub fraction_correct: Option<f64>,
}

pub fn lexical_check<S: AsRef<str>>(names: &[S], lexicon: &Lexicon) -> LexicalSummary {
    let reports: Vec<LexicalReport> = names
        .iter()
        .map(|n| {
            let tokens = tokenize_name(n.as_ref());
            let unknown_tokens: Vec<String> = tokens.iter().filter(|t| !lexicon.contains(t)).cloned().collect();
            LexicalReport {
                name: n.as_ref().to_string(),
                all_known: unknown_tokens.is_empty() && !tokens.is_empty(),
                tokens,
                unknown_tokens,
            }
        })
        .collect();
    let correct = reports.iter().filter(|r| r.all_known).count();
    let fraction_correct = (!reports.is_empty()).then(|| correct as f64 / reports.len() as f64);
    LexicalSummary { names: reports, correct, fraction_correct }
}

/// Element names of a model: entity types, attributes and relationships.
pub fn model_names(model: &ConceptualModel) -> Vec<String> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    for e in &model.entity_types {
        names.insert(e.name.clone());
        names.extend(e.attributes.iter().map(|a| a.name.clone()));
    }
    names.extend(model.relationships.iter().map(|r| r.name.clone()));
    names.into_iter().collect()
}

/// Element names of an ontology: named classes and properties.
pub fn ontology_names(ontology: &Ontology) -> Vec<String> {
    ontology
        .classes
        .values()
        .filter(|c| !c.is_anonymous())
        .map(|c| c.name.clone())
        .chain(ontology.properties.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
