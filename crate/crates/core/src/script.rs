//! Letter inventory types and contextual form resolution.
//!
//! Text is always held in logical (reading) order. The positional forms
//! computed here describe how each letter joins its neighbours; they are
//! never turned into presentation-form code points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ruleset::RuleTable;

/// Whether a letter connects to the letter that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoiningClass {
    /// Joins on both sides.
    #[serde(rename = "dual")]
    DualJoining,
    /// Joins only to the preceding letter (alif, dal, dzal, ra, zai, waw, hamzah).
    #[serde(rename = "right")]
    RightJoiningOnly,
}

impl JoiningClass {
    pub fn joins_following(self) -> bool {
        matches!(self, JoiningClass::DualJoining)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    VowelCarrier,
    Consonant,
    #[serde(rename = "extended")]
    ExtendedJawi,
}

/// The four contextual shapes of a cursive letter.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum PositionalForm {
    #[default]
    Isolated,
    Initial,
    Medial,
    Final,
}

impl PositionalForm {
    pub const ALL: [PositionalForm; 4] = [
        PositionalForm::Isolated,
        PositionalForm::Initial,
        PositionalForm::Medial,
        PositionalForm::Final,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PositionalForm::Isolated => "isolated",
            PositionalForm::Initial => "initial",
            PositionalForm::Medial => "medial",
            PositionalForm::Final => "final",
        }
    }

    /// Accepts the English names and the Malay lesson names
    /// (`sendiri`, `awal`, `tengah`, `akhir`).
    pub fn parse(s: &str) -> Option<PositionalForm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "isolated" | "sendiri" => Some(PositionalForm::Isolated),
            "initial" | "awal" => Some(PositionalForm::Initial),
            "medial" | "tengah" => Some(PositionalForm::Medial),
            "final" | "akhir" => Some(PositionalForm::Final),
            _ => None,
        }
    }

    /// True when a letter of `class` can ever take this form.
    pub fn available_for(self, class: JoiningClass) -> bool {
        class.joins_following() || matches!(self, PositionalForm::Isolated | PositionalForm::Final)
    }
}

impl fmt::Display for PositionalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One letter of the inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub id: String,
    pub codepoint: char,
    pub display_name: String,
    pub joining_class: JoiningClass,
    pub category: Category,
    /// Latin readings, primary first.
    pub latin_readings: Vec<String>,
    /// Extra readings that apply only at the start of a word.
    pub initial_readings: Vec<String>,
    /// Alternative code points folded onto this letter on input.
    pub aliases: Vec<char>,
    /// Whether the Latin encoder may produce this letter.
    pub encodable: bool,
    pub note: Option<String>,
}

impl Letter {
    pub fn primary_reading(&self) -> &str {
        &self.latin_readings[0]
    }

    pub fn joins_following(&self) -> bool {
        self.joining_class.joins_following()
    }
}

/// Computes positional forms from joining classes alone.
///
/// A letter joins the next one when it is dual-joining and not last; it is
/// joined from the previous one when that letter joins forward.
pub fn resolve_forms(classes: &[JoiningClass]) -> Vec<PositionalForm> {
    let n = classes.len();
    let joins_left = |i: usize| classes[i].joins_following() && i + 1 < n;
    (0..n)
        .map(|i| {
            let left = joins_left(i);
            let right = i > 0 && joins_left(i - 1);
            match (right, left) {
                (false, false) => PositionalForm::Isolated,
                (false, true) => PositionalForm::Initial,
                (true, false) => PositionalForm::Final,
                (true, true) => PositionalForm::Medial,
            }
        })
        .collect()
}

/// Resolves the positional form of every letter id in `letters`.
pub fn resolve_positions<S: AsRef<str>>(
    table: &RuleTable,
    letters: &[S],
) -> Result<Vec<PositionalForm>> {
    let classes = letters
        .iter()
        .map(|id| table.letter(id.as_ref()).map(|l| l.joining_class))
        .collect::<Result<Vec<_>>>()?;
    Ok(resolve_forms(&classes))
}

/// A letter sequence in logical order together with its resolved forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapedText {
    letters: Vec<String>,
    forms: Vec<PositionalForm>,
    #[serde(skip)]
    text: String,
}

impl ShapedText {
    pub fn new<S: AsRef<str>>(table: &RuleTable, letters: &[S]) -> Result<Self> {
        let resolved = letters
            .iter()
            .map(|id| table.letter(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_letters(&resolved))
    }

    pub(crate) fn from_letters(letters: &[&Letter]) -> Self {
        let classes: Vec<_> = letters.iter().map(|l| l.joining_class).collect();
        ShapedText {
            letters: letters.iter().map(|l| l.id.clone()).collect(),
            forms: resolve_forms(&classes),
            text: letters.iter().map(|l| l.codepoint).collect(),
        }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn forms(&self) -> &[PositionalForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The logical-order Unicode string: one base code point per letter,
    /// no presentation forms and no joiner controls.
    pub fn render_logical(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for ShapedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
