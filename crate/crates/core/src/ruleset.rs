//! Versioned rule data: the letter inventory, vowel digraph rules and the
//! decoding/encoding configuration, loaded from a JSON rule file.
//!
//! The rule file format is documented in `docs/rule-file.md`. Unknown keys are
//! rejected so that typos in curated data fail loudly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::script::{Category, JoiningClass, Letter};

const DEFAULT_RULES: &str = include_str!("../data/rules.json");

pub const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

pub fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpellingMode {
    /// Every vowel is written.
    #[default]
    Plene,
    /// Non-initial `a` is left unwritten.
    Traditional,
}

impl SpellingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SpellingMode::Plene => "plene",
            SpellingMode::Traditional => "traditional",
        }
    }

    pub fn parse(s: &str) -> Option<SpellingMode> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plene" => Some(SpellingMode::Plene),
            "traditional" => Some(SpellingMode::Traditional),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionConstraint {
    WordInitial,
    Anywhere,
}

/// Two letters read together as one vowel sound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphRule {
    pub id: String,
    #[serde(rename = "pair")]
    pub jawi_pair: (String, String),
    #[serde(rename = "position")]
    pub position_constraint: PositionConstraint,
    #[serde(rename = "values")]
    pub latin_values: Vec<String>,
}

impl DigraphRule {
    pub fn applies_at(&self, index: usize) -> bool {
        match self.position_constraint {
            PositionConstraint::WordInitial => index == 0,
            PositionConstraint::Anywhere => true,
        }
    }
}

/// Key for [`RuleTable::lookup_letter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterKey<'a> {
    Id(&'a str),
    Codepoint(char),
}

impl<'a> LetterKey<'a> {
    /// `U+XXXX` and single non-ASCII characters are code points; anything
    /// else is treated as a letter id.
    pub fn parse(s: &'a str) -> LetterKey<'a> {
        if let Some(c) = parse_codepoint(s) {
            return LetterKey::Codepoint(c);
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if !c.is_ascii() => LetterKey::Codepoint(c),
            _ => LetterKey::Id(s),
        }
    }
}

impl<'a> From<&'a str> for LetterKey<'a> {
    fn from(id: &'a str) -> Self {
        LetterKey::Id(id)
    }
}

impl From<char> for LetterKey<'_> {
    fn from(c: char) -> Self {
        LetterKey::Codepoint(c)
    }
}

/// The complete, validated rule set. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTable {
    pub version: String,
    pub letters: Vec<Letter>,
    pub digraphs: Vec<DigraphRule>,
    pub medial_vowel_map: BTreeMap<char, String>,
    pub epenthesis_vowels: Vec<String>,
    pub spelling_mode: SpellingMode,
    pub provenance_notes: Vec<String>,
    by_id: HashMap<String, usize>,
    by_char: HashMap<char, usize>,
}

impl RuleTable {
    /// The rule table shipped with the crate.
    pub fn default_table() -> &'static RuleTable {
        static TABLE: OnceLock<RuleTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            RuleTable::from_json_str(DEFAULT_RULES).expect("shipped rule table is valid")
        })
    }

    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut buf = Vec::new();
        source.read_to_end(&mut buf).map_err(|e| Error::Parse {
            location: "input".into(),
            message: e.to_string(),
        })?;
        Self::from_json_slice(&buf)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_slice(s.as_bytes())
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<Self> {
        let file: RuleFile = parse_json(bytes)?;
        file.into_table()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&RuleFile::from_table(self))
            .expect("rule file serializes");
        out.push('\n');
        out
    }

    pub fn letter(&self, id: &str) -> Result<&Letter> {
        self.by_id
            .get(id)
            .map(|&i| &self.letters[i])
            .ok_or_else(|| Error::UnknownLetter(id.to_string()))
    }

    /// Finds a letter by its code point or one of its aliases.
    pub fn letter_by_char(&self, c: char) -> Option<&Letter> {
        self.by_char.get(&c).map(|&i| &self.letters[i])
    }

    pub fn lookup_letter<'a>(&self, key: impl Into<LetterKey<'a>>) -> Result<&Letter> {
        match key.into() {
            LetterKey::Id(id) => self.letter(id),
            LetterKey::Codepoint(c) => self
                .letter_by_char(c)
                .ok_or_else(|| Error::UnknownLetter(format!("U+{:04X}", c as u32))),
        }
    }

    pub fn position_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn digraph(&self, id: &str) -> Option<&DigraphRule> {
        self.digraphs.iter().find(|d| d.id == id)
    }

    /// Digraph rule covering `first` followed by `second` at `index`.
    pub fn digraph_for(&self, first: &str, second: &str, index: usize) -> Option<&DigraphRule> {
        self.digraphs
            .iter()
            .find(|d| d.jawi_pair.0 == first && d.jawi_pair.1 == second && d.applies_at(index))
    }

    pub fn medial_letter(&self, vowel: char) -> Option<&Letter> {
        self.medial_vowel_map
            .get(&vowel)
            .and_then(|id| self.letter(id).ok())
    }

    pub fn with_mode(&self, mode: SpellingMode) -> RuleTable {
        RuleTable {
            spelling_mode: mode,
            ..self.clone()
        }
    }
}

pub(crate) fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            location: format!("line {} column {} ({})", inner.line(), inner.column(), path),
            message: inner.to_string(),
        }
    })
}

pub fn parse_codepoint(s: &str) -> Option<char> {
    let hex = s.strip_prefix("U+").or_else(|| s.strip_prefix("u+"))?;
    if hex.is_empty() || hex.len() > 6 {
        return None;
    }
    u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
}

pub fn format_codepoint(c: char) -> String {
    format!("U+{:04X}", c as u32)
}

fn is_reading(s: &str) -> bool {
    (1..=4).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_lowercase())
}

fn is_semver(s: &str) -> bool {
    let parts: Vec<_> = s.split('.').collect();
    parts.len() == 3
        && parts
            .iter()
            .all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    version: String,
    letters: Vec<LetterRecord>,
    digraphs: Vec<DigraphRule>,
    medial_vowels: BTreeMap<String, String>,
    epenthesis: Vec<String>,
    mode: SpellingMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LetterRecord {
    id: String,
    codepoint: String,
    name: String,
    joining: JoiningClass,
    category: Category,
    #[serde(default)]
    readings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    initial_readings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aliases: Vec<String>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    encode: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl RuleFile {
    fn from_table(t: &RuleTable) -> Self {
        RuleFile {
            version: t.version.clone(),
            letters: t
                .letters
                .iter()
                .map(|l| LetterRecord {
                    id: l.id.clone(),
                    codepoint: format_codepoint(l.codepoint),
                    name: l.display_name.clone(),
                    joining: l.joining_class,
                    category: l.category,
                    readings: l.latin_readings.clone(),
                    initial_readings: l.initial_readings.clone(),
                    aliases: l.aliases.iter().map(|&c| format_codepoint(c)).collect(),
                    encode: l.encodable,
                    note: l.note.clone(),
                })
                .collect(),
            digraphs: t.digraphs.clone(),
            medial_vowels: t
                .medial_vowel_map
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            epenthesis: t.epenthesis_vowels.clone(),
            mode: t.spelling_mode,
            notes: t.provenance_notes.clone(),
        }
    }

    fn into_table(self) -> Result<RuleTable> {
        if !is_semver(&self.version) {
            return Err(Error::validation(
                "version",
                format!("`{}` is not a semantic version", self.version),
            ));
        }
        if self.letters.is_empty() {
            return Err(Error::validation("letters", "no letters defined"));
        }

        let mut letters = Vec::with_capacity(self.letters.len());
        let mut by_id = HashMap::new();
        let mut by_char = HashMap::new();
        for (index, rec) in self.letters.into_iter().enumerate() {
            let id = rec.id;
            if id.is_empty()
                || !id
                    .bytes()
                    .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
            {
                return Err(Error::validation(&id, "id must be lowercase ASCII"));
            }
            if by_id.insert(id.clone(), index).is_some() {
                return Err(Error::validation(&id, "duplicate letter id"));
            }
            let codepoint = parse_codepoint(&rec.codepoint).ok_or_else(|| {
                Error::validation(&id, format!("bad code point `{}`", rec.codepoint))
            })?;
            let mut aliases = Vec::new();
            for a in &rec.aliases {
                aliases.push(
                    parse_codepoint(a)
                        .ok_or_else(|| Error::validation(&id, format!("bad alias `{a}`")))?,
                );
            }
            for &c in std::iter::once(&codepoint).chain(&aliases) {
                if c.is_ascii() || c.is_whitespace() {
                    return Err(Error::validation(
                        &id,
                        format!("{} is not a letter code point", format_codepoint(c)),
                    ));
                }
                if by_char.insert(c, index).is_some() {
                    return Err(Error::validation(
                        &id,
                        format!("duplicate code point {}", format_codepoint(c)),
                    ));
                }
            }
            if rec.readings.is_empty() {
                return Err(Error::validation(&id, "latin readings are empty"));
            }
            if let Some(bad) = rec
                .readings
                .iter()
                .chain(&rec.initial_readings)
                .find(|r| !is_reading(r))
            {
                return Err(Error::validation(
                    &id,
                    format!("reading `{bad}` must be 1-4 lowercase ASCII letters"),
                ));
            }
            letters.push(Letter {
                id,
                codepoint,
                display_name: rec.name,
                joining_class: rec.joining,
                category: rec.category,
                latin_readings: rec.readings,
                initial_readings: rec.initial_readings,
                aliases,
                encodable: rec.encode,
                note: rec.note,
            });
        }

        let carriers = letters
            .iter()
            .filter(|l| l.category == Category::VowelCarrier)
            .count();
        if carriers != 3 {
            return Err(Error::validation(
                "letters",
                format!("expected 3 vowel carriers, found {carriers}"),
            ));
        }

        let mut digraph_ids = HashSet::new();
        for d in &self.digraphs {
            if !digraph_ids.insert(d.id.as_str()) {
                return Err(Error::validation(&d.id, "duplicate digraph id"));
            }
            for part in [&d.jawi_pair.0, &d.jawi_pair.1] {
                if !by_id.contains_key(part) {
                    return Err(Error::validation(&d.id, format!("unknown letter `{part}`")));
                }
            }
            if d.latin_values.is_empty() {
                return Err(Error::validation(&d.id, "digraph values are empty"));
            }
            if let Some(bad) = d.latin_values.iter().find(|v| !is_reading(v)) {
                return Err(Error::validation(&d.id, format!("bad value `{bad}`")));
            }
        }

        let mut medial_vowel_map = BTreeMap::new();
        for (vowel, id) in self.medial_vowels {
            let mut chars = vowel.chars();
            let v = match (chars.next(), chars.next()) {
                (Some(v), None) if is_vowel(v) => v,
                _ => {
                    return Err(Error::validation(
                        "medial_vowels",
                        format!("`{vowel}` is not a single vowel"),
                    ))
                }
            };
            if !by_id.contains_key(&id) {
                return Err(Error::validation(
                    "medial_vowels",
                    format!("unknown letter `{id}`"),
                ));
            }
            medial_vowel_map.insert(v, id);
        }
        for v in VOWELS {
            if !medial_vowel_map.contains_key(&v) {
                return Err(Error::validation(
                    "medial_vowels",
                    format!("no letter for vowel `{v}`"),
                ));
            }
        }

        if let Some(bad) = self
            .epenthesis
            .iter()
            .find(|v| v.is_empty() || !v.chars().all(is_vowel))
        {
            return Err(Error::validation(
                "epenthesis",
                format!("`{bad}` is not a vowel"),
            ));
        }

        Ok(RuleTable {
            version: self.version,
            letters,
            digraphs: self.digraphs,
            medial_vowel_map,
            epenthesis_vowels: self.epenthesis,
            spelling_mode: self.mode,
            provenance_notes: self.notes,
            by_id,
            by_char,
        })
    }
}
