//! Python bindings: `import jawi`.
//!
//! Failures raise `jawi.JawiError`, a `ValueError` whose `code` attribute is
//! the engine's stable error code.

use std::fs::File;
use std::sync::Arc;

use jawi_core::{
    default_corpus, enumerate_all_readings, jawi_to_latin, latin_to_jawi_mode, letter_inventory,
    load_corpus, resolve_positions as resolve, shape_jawi, verify_corpus, ComposerEvent,
    ComposerState, Error, LetterKey, PositionalForm, ReadingCandidate, RuleTable as CoreTable,
    SpellingMode,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(
    jawi,
    JawiError,
    PyValueError,
    "An error raised by the engine."
);

fn engine_err(err: Error) -> PyErr {
    let code = err.code().as_str();
    let py_err = JawiError::new_err(err.to_string());
    Python::attach(|py| {
        // Exception instances carry a __dict__, so this cannot fail.
        let _ = py_err.value(py).setattr("code", code);
    });
    py_err
}

fn invalid(message: String) -> PyErr {
    engine_err(Error::Validation {
        rule: "argument".into(),
        reason: message,
    })
}

/// Converts through JSON so Python receives plain dicts and lists.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_mode(mode: &str) -> PyResult<SpellingMode> {
    SpellingMode::parse(mode).ok_or_else(|| invalid(format!("unknown spelling mode `{mode}`")))
}

fn parse_form(name: &str) -> PyResult<PositionalForm> {
    PositionalForm::parse(name).ok_or_else(|| invalid(format!("unknown positional form `{name}`")))
}

/// A loaded, validated rule table. The default constructor gives the
/// built-in table.
#[pyclass(frozen, skip_from_py_object, module = "jawi")]
#[derive(Clone)]
pub struct RuleTable {
    inner: Arc<CoreTable>,
}

impl RuleTable {
    fn wrap(table: CoreTable) -> Self {
        RuleTable {
            inner: Arc::new(table),
        }
    }
}

fn table_or_default(table: Option<&RuleTable>) -> RuleTable {
    table
        .cloned()
        .unwrap_or_else(|| RuleTable::wrap(CoreTable::default_table().clone()))
}

#[pymethods]
impl RuleTable {
    #[new]
    fn new() -> Self {
        table_or_default(None)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreTable::from_json_str(text)
            .map(Self::wrap)
            .map_err(engine_err)
    }

    #[staticmethod]
    fn from_path(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))?;
        CoreTable::load(file).map(Self::wrap).map_err(engine_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// A copy of the table with a different default spelling mode.
    fn with_mode(&self, mode: &str) -> PyResult<Self> {
        Ok(Self::wrap(self.inner.with_mode(parse_mode(mode)?)))
    }

    #[getter]
    fn version(&self) -> String {
        self.inner.version.clone()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.spelling_mode.as_str()
    }

    /// The letter inventory as a list of dicts, in table order.
    fn letters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &letter_inventory(&self.inner, &default_corpus()))
    }

    /// Looks a letter up by id, Jawi character or `U+XXXX`.
    fn letter<'py>(&self, py: Python<'py>, key: &str) -> PyResult<Bound<'py, PyAny>> {
        let letter = self
            .inner
            .lookup_letter(LetterKey::parse(key))
            .map_err(engine_err)?;
        let info = letter_inventory(&self.inner, &default_corpus())
            .into_iter()
            .find(|i| i.id == letter.id)
            .expect("inventory covers every letter");
        to_python(py, &info)
    }

    #[pyo3(signature = (word, mode=None))]
    fn to_jawi(&self, word: &str, mode: Option<&str>) -> PyResult<ShapedText> {
        let mode = match mode {
            Some(m) => parse_mode(m)?,
            None => self.inner.spelling_mode,
        };
        latin_to_jawi_mode(&word.to_lowercase(), &self.inner, mode)
            .map(ShapedText::from)
            .map_err(engine_err)
    }

    #[pyo3(signature = (jawi, limit=5))]
    fn to_latin(&self, jawi: &str, limit: usize) -> PyResult<Vec<Candidate>> {
        jawi_to_latin(jawi, &self.inner, limit)
            .map(|c| c.into_iter().map(Candidate::from).collect())
            .map_err(engine_err)
    }

    /// Every reading, unranked, by exhaustive enumeration (at most 8 letters).
    fn all_readings(&self, jawi: &str) -> PyResult<Vec<String>> {
        enumerate_all_readings(jawi, &self.inner)
            .map(|set| set.into_iter().collect())
            .map_err(engine_err)
    }

    fn shape(&self, jawi: &str) -> PyResult<ShapedText> {
        shape_jawi(jawi, &self.inner)
            .map(ShapedText::from)
            .map_err(engine_err)
    }

    fn resolve_positions(&self, letters: Vec<String>) -> PyResult<Vec<&'static str>> {
        resolve(&self.inner, &letters)
            .map(|forms| forms.into_iter().map(PositionalForm::as_str).collect())
            .map_err(engine_err)
    }

    /// Verifies a corpus file, or the built-in corpus when `path` is None.
    #[pyo3(signature = (path=None))]
    fn verify_corpus<'py>(
        &self,
        py: Python<'py>,
        path: Option<&str>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let entries = match path {
            Some(p) => {
                let file = File::open(p).map_err(|e| PyOSError::new_err(format!("{p}: {e}")))?;
                load_corpus(file).map_err(engine_err)?
            }
            None => default_corpus(),
        };
        let report = verify_corpus(&entries, &self.inner);
        let summary = serde_json::json!({
            "ok": report.ok(),
            "normative": report.normative().count(),
            "failures": report.failures().count(),
            "entries": report.entries,
        });
        to_python(py, &summary)
    }

    fn __repr__(&self) -> String {
        format!(
            "RuleTable(version={:?}, mode={:?}, letters={})",
            self.inner.version,
            self.inner.spelling_mode.as_str(),
            self.inner.letters.len()
        )
    }
}

/// Jawi text in logical order with each letter's positional form.
#[pyclass(frozen, module = "jawi")]
pub struct ShapedText {
    #[pyo3(get)]
    jawi: String,
    #[pyo3(get)]
    letters: Vec<String>,
    #[pyo3(get)]
    forms: Vec<&'static str>,
}

impl From<jawi_core::ShapedText> for ShapedText {
    fn from(s: jawi_core::ShapedText) -> Self {
        ShapedText {
            jawi: s.render_logical().to_string(),
            letters: s.letters().to_vec(),
            forms: s.forms().iter().map(|f| f.as_str()).collect(),
        }
    }
}

#[pymethods]
impl ShapedText {
    fn __str__(&self) -> String {
        self.jawi.clone()
    }

    fn __len__(&self) -> usize {
        self.letters.len()
    }

    fn __repr__(&self) -> String {
        format!("ShapedText({:?}, forms={:?})", self.jawi, self.forms)
    }
}

/// One ranked Latin reading with the rule trace that produced it.
#[pyclass(frozen, module = "jawi")]
pub struct Candidate {
    #[pyo3(get)]
    latin: String,
    #[pyo3(get)]
    score: f64,
    #[pyo3(get)]
    penalty: u32,
    #[pyo3(get)]
    trace: Vec<String>,
}

impl From<ReadingCandidate> for Candidate {
    fn from(c: ReadingCandidate) -> Self {
        Candidate {
            score: c.score.value(),
            penalty: c.score.penalty(),
            trace: c.trace.iter().map(ToString::to_string).collect(),
            latin: c.latin,
        }
    }
}

#[pymethods]
impl Candidate {
    fn __repr__(&self) -> String {
        format!("Candidate({:?}, score={:.3})", self.latin, self.score)
    }
}

/// The letter-by-letter lesson composer. Each method applies one event; a
/// rejected event raises and leaves the state unchanged.
#[pyclass(module = "jawi")]
pub struct Composer {
    table: RuleTable,
    state: ComposerState,
}

impl Composer {
    fn step(&mut self, event: ComposerEvent) -> PyResult<()> {
        self.state = self
            .state
            .apply(&event, &self.table.inner)
            .map_err(engine_err)?;
        Ok(())
    }
}

#[pymethods]
impl Composer {
    #[new]
    #[pyo3(signature = (table=None))]
    fn new(table: Option<&RuleTable>) -> Self {
        Composer {
            table: table_or_default(table),
            state: ComposerState::new(),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (text, table=None))]
    fn from_json(text: &str, table: Option<&RuleTable>) -> PyResult<Self> {
        let table = table_or_default(table);
        let state = ComposerState::from_json(text, &table.inner).map_err(engine_err)?;
        Ok(Composer { table, state })
    }

    fn to_json(&self) -> String {
        self.state.to_json()
    }

    /// Applies an event given as JSON, e.g. `{"type": "PickLetter", "letter": "ba"}`.
    fn apply(&mut self, event: &str) -> PyResult<()> {
        let event: ComposerEvent = serde_json::from_str(event).map_err(|e| {
            engine_err(Error::Parse {
                location: "event".into(),
                message: e.to_string(),
            })
        })?;
        self.step(event)
    }

    fn set_filter(&mut self, form: &str) -> PyResult<()> {
        let filter = parse_form(form)?;
        self.step(ComposerEvent::SetFilter { filter })
    }

    /// Picks a letter by id, Jawi character or `U+XXXX`.
    fn pick_letter(&mut self, key: &str) -> PyResult<()> {
        let letter = self
            .table
            .inner
            .lookup_letter(LetterKey::parse(key))
            .map_err(engine_err)?
            .id
            .clone();
        self.step(ComposerEvent::PickLetter { letter })
    }

    fn pick_reading(&mut self, index: usize) -> PyResult<()> {
        self.step(ComposerEvent::PickReading { index })
    }

    fn process(&mut self) -> PyResult<()> {
        self.step(ComposerEvent::Process)
    }

    fn new_word(&mut self) -> PyResult<()> {
        self.step(ComposerEvent::NewWord)
    }

    fn undo(&mut self) -> PyResult<()> {
        self.step(ComposerEvent::Undo)
    }

    #[getter]
    fn filter(&self) -> &'static str {
        self.state.active_filter.as_str()
    }

    /// Readings offered for the pending letter, or None.
    #[getter]
    fn offered(&self) -> Option<Vec<String>> {
        self.state.pending.as_ref().map(|p| p.offered.clone())
    }

    #[getter]
    fn committed(&self) -> Vec<(String, String)> {
        self.state
            .committed
            .iter()
            .map(|c| (c.letter.clone(), c.reading.clone()))
            .collect()
    }

    /// `(jawi, latin, forms)` for the committed letters.
    fn render(&self) -> PyResult<(String, String, Vec<&'static str>)> {
        let r = self.state.render(&self.table.inner).map_err(engine_err)?;
        let forms = r.forms.iter().map(|f| f.as_str()).collect();
        Ok((r.jawi, r.latin, forms))
    }

    /// `(index, chosen, actual)` for every letter whose picked filter differs
    /// from its shaped form.
    fn consistency(&self) -> PyResult<Vec<(usize, &'static str, &'static str)>> {
        let mismatches = self
            .state
            .check_filter_consistency(&self.table.inner)
            .map_err(engine_err)?;
        Ok(mismatches
            .into_iter()
            .map(|m| (m.index, m.chosen.as_str(), m.actual.as_str()))
            .collect())
    }

    fn __repr__(&self) -> String {
        match self.state.render(&self.table.inner) {
            Ok(r) => format!("Composer({:?} / {:?})", r.jawi, r.latin),
            Err(_) => "Composer(<invalid>)".to_string(),
        }
    }
}

fn default_table() -> RuleTable {
    table_or_default(None)
}

/// Encodes a Latin word with the built-in table.
#[pyfunction]
#[pyo3(signature = (word, mode=None))]
fn latin_to_jawi(word: &str, mode: Option<&str>) -> PyResult<String> {
    Ok(default_table().to_jawi(word, mode)?.jawi)
}

/// Ranked readings of a Jawi word with the built-in table.
#[pyfunction]
#[pyo3(name = "jawi_to_latin", signature = (jawi, limit=5))]
fn py_jawi_to_latin(jawi: &str, limit: usize) -> PyResult<Vec<Candidate>> {
    default_table().to_latin(jawi, limit)
}

#[pyfunction]
#[pyo3(name = "resolve_positions")]
fn py_resolve_positions(letters: Vec<String>) -> PyResult<Vec<&'static str>> {
    default_table().resolve_positions(letters)
}

#[pyfunction]
fn letters(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    default_table().letters(py)
}

#[pyfunction]
#[pyo3(name = "verify_corpus", signature = (path=None))]
fn py_verify_corpus<'py>(py: Python<'py>, path: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    default_table().verify_corpus(py, path)
}

#[pymodule]
pub fn jawi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("JawiError", m.py().get_type::<JawiError>())?;
    m.add_class::<RuleTable>()?;
    m.add_class::<ShapedText>()?;
    m.add_class::<Candidate>()?;
    m.add_class::<Composer>()?;
    m.add_function(wrap_pyfunction!(latin_to_jawi, m)?)?;
    m.add_function(wrap_pyfunction!(py_jawi_to_latin, m)?)?;
    m.add_function(wrap_pyfunction!(py_resolve_positions, m)?)?;
    m.add_function(wrap_pyfunction!(letters, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify_corpus, m)?)?;
    Ok(())
}
