//! Curated example words with provenance, and the harness that checks the
//! engine against them.

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ruleset::{parse_json, RuleTable, SpellingMode};
use crate::transliterate::{jawi_to_latin_all, latin_to_jawi_mode};

const DEFAULT_CORPUS: &str = include_str!("../data/corpus.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Normative,
    Suspect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub latin: String,
    pub jawi: String,
    pub source: String,
    pub status: EntryStatus,
    pub mode: SpellingMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn load_corpus<R: Read>(mut source: R) -> Result<Vec<CorpusEntry>> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf).map_err(|e| Error::Parse {
        location: "input".into(),
        message: e.to_string(),
    })?;
    parse_corpus(&buf)
}

pub fn parse_corpus(bytes: &[u8]) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<CorpusEntry> = parse_json(bytes)?;
    let mut seen = HashSet::new();
    for (i, e) in entries.iter().enumerate() {
        let rule = format!("entry {i} ({})", e.latin);
        if e.latin.is_empty() || e.jawi.is_empty() {
            return Err(Error::validation(rule, "latin and jawi must be nonempty"));
        }
        if e.status == EntryStatus::Suspect && e.note.as_deref().is_none_or(str::is_empty) {
            return Err(Error::validation(rule, "suspect entries need a note"));
        }
        if !seen.insert((e.latin.as_str(), e.jawi.as_str())) {
            return Err(Error::validation(rule, "duplicate entry"));
        }
    }
    Ok(entries)
}

/// The corpus shipped with the crate.
pub fn default_corpus() -> Vec<CorpusEntry> {
    parse_corpus(DEFAULT_CORPUS.as_bytes()).expect("shipped corpus is valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub latin: String,
    pub jawi: String,
    pub status: EntryStatus,
    pub mode: SpellingMode,
    /// What the encoder produced, if it succeeded.
    pub encoded: Option<String>,
    /// The encoder's error message otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub encode_ok: bool,
    pub decode_ok: bool,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.encode_ok && self.decode_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
}

impl CorpusReport {
    pub fn normative(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries
            .iter()
            .filter(|e| e.status == EntryStatus::Normative)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryReport> {
        self.normative().filter(|e| !e.passed())
    }

    /// True when every normative entry passes both checks. Suspect entries
    /// never fail the run.
    pub fn ok(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Checks every entry: the encoder must reproduce the Jawi spelling in the
/// entry's mode, and the Latin word must be among the untruncated readings of
/// the Jawi spelling.
pub fn verify_corpus(entries: &[CorpusEntry], table: &RuleTable) -> CorpusReport {
    let entries = entries
        .iter()
        .map(|e| {
            let encoded = latin_to_jawi_mode(&e.latin, table, e.mode)
                .map(|s| s.render_logical().to_string())
                .map_err(|err| err.to_string());
            let encode_ok = encoded.as_deref() == Ok(e.jawi.as_str());
            let (encoded, error) = match encoded {
                Ok(jawi) => (Some(jawi), None),
                Err(message) => (None, Some(message)),
            };
            let decode_ok = jawi_to_latin_all(&e.jawi, table)
                .map(|c| c.iter().any(|c| c.latin == e.latin))
                .unwrap_or(false);
            EntryReport {
                latin: e.latin.clone(),
                jawi: e.jawi.clone(),
                status: e.status,
                mode: e.mode,
                encoded,
                error,
                encode_ok,
                decode_ok,
            }
        })
        .collect();
    CorpusReport { entries }
}
