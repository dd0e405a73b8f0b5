//! The `ontocdm` command line: `transform`, `validate`, `metrics`, `emit`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cdm::ConceptualModel;
use crate::diagnostic::{self, Diagnostic, Severity};
use crate::emit::{self, EmitOptions, Format};
use crate::metrics::{self, Lexicon};
use crate::ontoclean;
use crate::reader::{read_path, ReaderConfig};
use crate::transform::{transform, TransformOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Findings = 1,
    Failure = 2,
}

impl From<ExitStatus> for std::process::ExitCode {
    fn from(s: ExitStatus) -> Self {
        std::process::ExitCode::from(s as u8)
    }
}

#[derive(Debug, Parser)]
#[command(name = "ontocdm", version, about = "Generate and check conceptual data models from OWL ontologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Plantuml,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plantuml => Format::PlantUml,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepairMode {
    Apply,
    Suggest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map an ontology (RDF/XML or JSON) to a conceptual model.
    Transform {
        input: PathBuf,
        /// Restrict the transformation to classes reachable from these.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        roots: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Fail on constructs outside the supported vocabulary.
        #[arg(long)]
        strict: bool,
        /// Write the rule trace (JSON) here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a model against the modelling rules and taxonomy axioms.
    Validate {
        model: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long, value_enum)]
        repairs: Option<RepairMode>,
        /// Where the repaired model goes with `--repairs apply`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regression, accuracy and lexical measures.
    Metrics {
        /// JSON array of {ontology_path, model_path}.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, requires = "generated")]
        gold: Option<PathBuf>,
        #[arg(long)]
        generated: Option<PathBuf>,
        /// Newline-delimited word list.
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Render a model as PlantUML or canonical JSON.
    Emit {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "plantuml")]
        format: FormatArg,
        /// Annotate elements with the rule that produced them.
        #[arg(long)]
        provenance: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure that maps to exit status 2.
#[derive(Debug)]
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

pub fn main_with_args<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::Failure } else { ExitStatus::Success };
        }
    };
    match run(cli.command) {
        Ok(status) => status,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitStatus::Failure
        }
    }
}

fn run(command: Command) -> Result<ExitStatus, Fatal> {
    match command {
        Command::Transform { input, roots, format, strict, trace, out } => {
            cmd_transform(&input, roots, format.into(), strict, trace.as_deref(), out.as_deref())
        }
        Command::Validate { model, annotations, repairs, out } => {
            cmd_validate(&model, &annotations, repairs, out.as_deref())
        }
        Command::Metrics { pairs, gold, generated, lexicon } => {
            cmd_metrics(pairs.as_deref(), gold.as_deref(), generated.as_deref(), lexicon.as_deref())
        }
        Command::Emit { model, format, provenance, out } => {
            let model = load_model(&model)?;
            let text = emit::emit(&model, EmitOptions { format: format.into(), include_provenance_comments: provenance });
            write_output(out.as_deref(), &text)?;
            Ok(ExitStatus::Success)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Fatal> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Fatal(format!("cannot write '{}': {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Fatal> {
    std::fs::read(path).map_err(|e| Fatal(format!("cannot read '{}': {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<ConceptualModel, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read '{}': {e}", path.display()))?;
    let mut de = serde_json::Deserializer::from_slice(&bytes);
    serde_path_to_error::deserialize(&mut de)
        .map_err(|e| format!("'{}' is not a model document at {}: {}", path.display(), e.path(), e.inner()))
}

fn cmd_transform(
    input: &Path,
    roots: Vec<String>,
    format: Format,
    strict: bool,
    trace_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<ExitStatus, Fatal> {
    let config = ReaderConfig { strict, base_iri: None };
    let report = read_path(input, &config)?;
    for w in &report.warnings {
        eprintln!("{w}");
    }
    let options = TransformOptions {
        roots: (!roots.is_empty()).then(|| roots.into_iter().collect()),
        ..TransformOptions::default()
    };
    let (model, trace) = transform(&report.ontology, &options)?;
    write_output(out, &emit::emit(&model, EmitOptions { format, include_provenance_comments: false }))?;
    if let Some(p) = trace_path {
        write_output(Some(p), &trace.to_json())?;
    }
    eprintln!("{}", model.counts());
    Ok(ExitStatus::Success)
}

fn status_of(diagnostics: &[Diagnostic]) -> ExitStatus {
    match diagnostic::worst(diagnostics) {
        Some(Severity::Error) => ExitStatus::Findings,
        _ => ExitStatus::Success,
    }
}

fn cmd_validate(
    model_path: &Path,
    annotations_path: &Path,
    repairs: Option<RepairMode>,
    out: Option<&Path>,
) -> Result<ExitStatus, Fatal> {
    let model = load_model(model_path)?;
    let annotations = ontoclean::read_annotations(&read_file(annotations_path)?)
        .map_err(|e| Fatal(format!("{}: {e}", annotations_path.display())))?;
    if repairs == Some(RepairMode::Apply) && out.is_none() {
        return Err(Fatal("--repairs apply needs --out for the repaired model".into()));
    }

    let mut diagnostics = model.validate();
    if diagnostics.is_empty() {
        diagnostics = ontoclean::validate_model(&model, &annotations);
    }
    for d in &diagnostics {
        eprintln!("{d}");
    }
    write_output(None, &diagnostic::to_json(&diagnostics))?;

    if repairs == Some(RepairMode::Apply) {
        let fixes = ontoclean::suggested_repairs(&diagnostics);
        let repaired = ontoclean::apply_repairs(&model, &fixes)?;
        write_output(out, &emit::emit_json(&repaired))?;
        eprintln!("applied {} repair(s): {}", fixes.len(), repaired.counts());
    }
    Ok(status_of(&diagnostics))
}

fn cmd_metrics(
    pairs: Option<&Path>,
    gold: Option<&Path>,
    generated: Option<&Path>,
    lexicon: Option<&Path>,
) -> Result<ExitStatus, Fatal> {
    if pairs.is_none() && generated.is_none() {
        return Err(Fatal("nothing to measure: give --pairs and/or --generated".into()));
    }
    let lexicon = lexicon.map(Lexicon::load).transpose()?;
    let mut report = serde_json::Map::new();
    let mut lexical: BTreeMap<String, Value> = BTreeMap::new();

    if let Some(manifest) = pairs {
        let mut counts = Vec::new();
        for pair in metrics::read_manifest(manifest)? {
            let ontology = read_path(&pair.ontology_path, &ReaderConfig::default())?.ontology;
            let model = load_model(&pair.model_path)?;
            if let Some(lex) = &lexicon {
                lexical.insert(
                    pair.ontology_path.display().to_string(),
                    serde_json::to_value(metrics::lexical_check(&metrics::ontology_names(&ontology), lex))?,
                );
                lexical.insert(
                    pair.model_path.display().to_string(),
                    serde_json::to_value(metrics::lexical_check(&metrics::model_names(&model), lex))?,
                );
            }
            counts.push(metrics::count_constructs(&ontology, &model));
        }
        let table = metrics::regression_table(&counts)?;
        report.insert("regression".into(), json!({ "counts": counts, "table": table }));
    }

    if let Some(generated_path) = generated {
        let generated_model = load_model(generated_path)?;
        if let Some(gold_path) = gold {
            let gold_model = load_model(gold_path)?;
            report.insert(
                "accuracy".into(),
                serde_json::to_value(metrics::compare_models(&generated_model, &gold_model))?,
            );
        }
        if let Some(lex) = &lexicon {
            lexical.insert(
                generated_path.display().to_string(),
                serde_json::to_value(metrics::lexical_check(&metrics::model_names(&generated_model), lex))?,
            );
        }
    }
    if lexicon.is_some() {
        report.insert("lexical".into(), serde_json::to_value(lexical)?);
    }
    write_output(None, &crate::json::to_canonical_string(&Value::Object(report)))?;
    Ok(ExitStatus::Success)
}
