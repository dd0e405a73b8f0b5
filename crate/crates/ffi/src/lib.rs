//! C ABI over `ontocdm`.
//!
//! Every function returns an [`OcStatus`]. On failure the message is kept
//! per thread and can be read with [`oc_last_error_message`]. Handles are
//! opaque; free them with the matching `*_free`. Strings handed out by the
//! library are NUL-terminated UTF-8 and must be released with
//! [`oc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ontocdm::cdm::ConceptualModel;
use ontocdm::emit::{emit_json, emit_plantuml, EmitOptions, Format};
use ontocdm::metrics::{fit_regression, MetricsError};
use ontocdm::ontoclean::{self, Category, MetaAnnotation, Rigidity};
use ontocdm::reader::{read_json, read_rdfxml, ReaderConfig};
use ontocdm::transform::{transform, TransformError, TransformOptions};
use ontocdm::{Ontology, Severity};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    TransformError = 5,
    DegenerateInput = 6,
    RepairConflict = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcRigidity {
    Rigid = 0,
    NonRigid = 1,
    AntiRigid = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OcCategory {
    Type = 0,
    PhasedSortal = 1,
    Role = 2,
    Attribution = 3,
    Unclassifiable = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OcCounts {
    pub entity_types: usize,
    pub relationships: usize,
    pub attributes: usize,
    pub generalizations: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OcRegression {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// A parsed ontology.
pub struct OcOntology {
    inner: Ontology,
}

/// A conceptual data model.
pub struct OcModel {
    inner: ConceptualModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OcStatus, String);

impl Failure {
    fn new(status: OcStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OcStatus::Panic
        }
    }
}

unsafe fn bytes<'a>(data: *const u8, len: usize, what: &str) -> Result<&'a [u8], Failure> {
    if data.is_null() {
        if len == 0 {
            return Ok(&[]);
        }
        return Err(Failure::new(OcStatus::NullArgument, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::new(OcStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure::new(OcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(OcStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(OcStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(OcStatus::NullArgument, "out is null"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn into_ontology(result: Result<ontocdm::reader::ReadReport, ontocdm::reader::ReadError>) -> Result<OcOntology, Failure> {
    let report = result.map_err(|e| Failure::new(OcStatus::ParseError, e))?;
    Ok(OcOntology { inner: report.ontology })
}

/// Parse an ontology in the JSON interchange format.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_ontology_read_json(data: *const u8, len: usize, out: *mut *mut OcOntology) -> OcStatus {
    guard(|| {
        let src = bytes(data, len, "data")?;
        put_handle(out, into_ontology(read_json(src))?)
    })
}

/// Parse an RDF/XML ontology. With `strict`, constructs outside the
/// supported vocabulary are an error instead of being skipped.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_ontology_read_rdfxml(
    data: *const u8,
    len: usize,
    strict: bool,
    out: *mut *mut OcOntology,
) -> OcStatus {
    guard(|| {
        let src = bytes(data, len, "data")?;
        let config = ReaderConfig { strict, base_iri: None };
        put_handle(out, into_ontology(read_rdfxml(src, &config))?)
    })
}

/// # Safety
/// `ontology` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_ontology_free(ontology: *mut OcOntology) {
    if !ontology.is_null() {
        drop(Box::from_raw(ontology));
    }
}

/// Transform an ontology into a model. `roots` may be null when
/// `n_roots` is 0, which selects every class. When `trace_json` is not
/// null it receives the rule trace.
///
/// # Safety
/// `roots` must hold `n_roots` NUL-terminated strings; out pointers must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_transform(
    ontology: *const OcOntology,
    roots: *const *const c_char,
    n_roots: usize,
    out: *mut *mut OcModel,
    trace_json: *mut *mut c_char,
) -> OcStatus {
    guard(|| {
        let o = deref(ontology, "ontology")?;
        let options = if n_roots == 0 {
            TransformOptions::default()
        } else {
            if roots.is_null() {
                return Err(Failure::new(OcStatus::NullArgument, "roots is null"));
            }
            let names = std::slice::from_raw_parts(roots, n_roots)
                .iter()
                .map(|&r| text(r, "root").map(str::to_owned))
                .collect::<Result<Vec<_>, _>>()?;
            TransformOptions::with_roots(names)
        };
        if out.is_null() {
            return Err(Failure::new(OcStatus::NullArgument, "out is null"));
        }
        let (model, trace) = transform(&o.inner, &options).map_err(|e| {
            let status = match e {
                TransformError::InvalidOntology(_) | TransformError::UnresolvedRoot(_) => OcStatus::InvalidInput,
                _ => OcStatus::TransformError,
            };
            Failure::new(status, e)
        })?;
        if !trace_json.is_null() {
            trace_json.write(c_string(trace.to_json()));
        }
        put_handle(out, OcModel { inner: model })
    })
}

/// Parse a model document.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_model_read_json(data: *const u8, len: usize, out: *mut *mut OcModel) -> OcStatus {
    guard(|| {
        let src = bytes(data, len, "data")?;
        let mut de = serde_json::Deserializer::from_slice(src);
        let model: ConceptualModel = serde_path_to_error::deserialize(&mut de)
            .map_err(|e| Failure::new(OcStatus::ParseError, format!("at {}: {}", e.path(), e.inner())))?;
        put_handle(out, OcModel { inner: model })
    })
}

/// Canonical JSON for a model.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_model_to_json(model: *const OcModel, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::new(OcStatus::NullArgument, "out is null"));
        }
        out.write(c_string(emit_json(&m.inner)));
        Ok(())
    })
}

/// PlantUML class diagram for a model.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_model_to_plantuml(model: *const OcModel, provenance: bool, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::new(OcStatus::NullArgument, "out is null"));
        }
        let opts = EmitOptions { format: Format::PlantUml, include_provenance_comments: provenance };
        out.write(c_string(emit_plantuml(&m.inner, opts)));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_model_counts(model: *const OcModel, out: *mut OcCounts) -> OcStatus {
    guard(|| {
        let c = deref(model, "model")?.inner.counts();
        let counts = OcCounts {
            entity_types: c.entity_types,
            relationships: c.relationships,
            attributes: c.attributes,
            generalizations: c.generalizations,
        };
        put(out, counts, "out")
    })
}

/// # Safety
/// `model` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_model_free(model: *mut OcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

fn diagnostics_for(model: &ConceptualModel, annotations: &ontoclean::Annotations) -> Vec<ontocdm::Diagnostic> {
    let structural = model.validate();
    if structural.is_empty() {
        ontoclean::validate_model(model, annotations)
    } else {
        structural
    }
}

unsafe fn annotations(data: *const u8, len: usize) -> Result<ontoclean::Annotations, Failure> {
    ontoclean::read_annotations(bytes(data, len, "annotations")?).map_err(|e| Failure::new(OcStatus::ParseError, e))
}

/// Check a model against the modelling rules and taxonomy axioms, given
/// a meta-property annotation document. `diagnostics_json` receives the
/// findings; `error_count` the number with error severity.
///
/// # Safety
/// `model` must be a live handle; `annotations_json` must point to `len`
/// readable bytes; out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_validate(
    model: *const OcModel,
    annotations_json: *const u8,
    len: usize,
    diagnostics_json: *mut *mut c_char,
    error_count: *mut usize,
) -> OcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let a = annotations(annotations_json, len)?;
        if diagnostics_json.is_null() || error_count.is_null() {
            return Err(Failure::new(OcStatus::NullArgument, "output pointer is null"));
        }
        let found = diagnostics_for(&m.inner, &a);
        error_count.write(found.iter().filter(|d| d.severity == Severity::Error).count());
        diagnostics_json.write(c_string(ontocdm::diagnostic::to_json(&found)));
        Ok(())
    })
}

/// Validate and apply every suggested repair, producing a new model.
///
/// # Safety
/// As for [`oc_validate`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_repair(
    model: *const OcModel,
    annotations_json: *const u8,
    len: usize,
    out: *mut *mut OcModel,
) -> OcStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let a = annotations(annotations_json, len)?;
        let fixes = ontoclean::suggested_repairs(&diagnostics_for(&m.inner, &a));
        let repaired = ontoclean::apply_repairs(&m.inner, &fixes).map_err(|e| Failure::new(OcStatus::RepairConflict, e))?;
        put_handle(out, OcModel { inner: repaired })
    })
}

/// Ordinary least-squares fit of `ys` on `xs`.
///
/// # Safety
/// `xs` and `ys` must each hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_fit_regression(xs: *const f64, ys: *const f64, n: usize, out: *mut OcRegression) -> OcStatus {
    guard(|| {
        if n > 0 && (xs.is_null() || ys.is_null()) {
            return Err(Failure::new(OcStatus::NullArgument, "xs or ys is null"));
        }
        let points: Vec<(f64, f64)> = if n == 0 {
            Vec::new()
        } else {
            let (x, y) = (std::slice::from_raw_parts(xs, n), std::slice::from_raw_parts(ys, n));
            x.iter().copied().zip(y.iter().copied()).collect()
        };
        let r = fit_regression(&points).map_err(|e| match e {
            MetricsError::DegenerateInput(_) => Failure::new(OcStatus::DegenerateInput, e),
            other => Failure::new(OcStatus::InvalidInput, other),
        })?;
        put(out, OcRegression { slope: r.slope, intercept: r.intercept, r_squared: r.r_squared, n: r.n }, "out")
    })
}

/// Category of a concept from its rigidity, identity and dependence.
/// `rigidity` is an [`OcRigidity`] value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn oc_classify_category(
    rigidity: i32,
    identity: bool,
    dependence: bool,
    out: *mut OcCategory,
) -> OcStatus {
    guard(|| {
        let r = match rigidity {
            0 => Rigidity::Rigid,
            1 => Rigidity::NonRigid,
            2 => Rigidity::AntiRigid,
            other => return Err(Failure::new(OcStatus::InvalidInput, format!("unknown rigidity {other}"))),
        };
        let category = match ontocdm::classify_category(&MetaAnnotation::new("", r, identity, dependence)) {
            Category::Type => OcCategory::Type,
            Category::PhasedSortal => OcCategory::PhasedSortal,
            Category::Role => OcCategory::Role,
            Category::Attribution => OcCategory::Attribution,
            Category::Unclassifiable => OcCategory::Unclassifiable,
        };
        put(out, category, "out")
    })
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread; do not free.
#[no_mangle]
pub extern "C" fn oc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn oc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
