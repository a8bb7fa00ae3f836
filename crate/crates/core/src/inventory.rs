//! Reference view of the letter inventory: what each letter looks like in
//! every position, how it joins, how it reads, and an example word.

use serde::Serialize;

use crate::corpus::{CorpusEntry, EntryStatus};
use crate::ruleset::{format_codepoint, RuleTable};
use crate::script::{Category, JoiningClass, PositionalForm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormAvailability {
    pub isolated: bool,
    pub initial: bool,
    pub medial: bool,
    #[serde(rename = "final")]
    pub final_: bool,
}

impl FormAvailability {
    pub fn for_class(class: JoiningClass) -> Self {
        FormAvailability {
            isolated: PositionalForm::Isolated.available_for(class),
            initial: PositionalForm::Initial.available_for(class),
            medial: PositionalForm::Medial.available_for(class),
            final_: PositionalForm::Final.available_for(class),
        }
    }

    pub fn get(&self, form: PositionalForm) -> bool {
        match form {
            PositionalForm::Isolated => self.isolated,
            PositionalForm::Initial => self.initial,
            PositionalForm::Medial => self.medial,
            PositionalForm::Final => self.final_,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example {
    pub latin: String,
    pub jawi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LetterInfo {
    pub id: String,
    pub letter: String,
    pub codepoint: String,
    pub name: String,
    pub joining: JoiningClass,
    pub joins_left: bool,
    pub category: Category,
    pub readings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub initial_readings: Vec<String>,
    pub forms: FormAvailability,
    pub example: Option<Example>,
}

/// One entry per letter, in table order. The example is the first normative
/// corpus word containing the letter, falling back to any entry.
pub fn letter_inventory(table: &RuleTable, corpus: &[CorpusEntry]) -> Vec<LetterInfo> {
    table
        .letters
        .iter()
        .map(|l| {
            let has = |e: &&CorpusEntry| e.jawi.contains(l.codepoint);
            let example = corpus
                .iter()
                .filter(has)
                .find(|e| e.status == EntryStatus::Normative)
                .or_else(|| corpus.iter().find(has))
                .map(|e| Example {
                    latin: e.latin.clone(),
                    jawi: e.jawi.clone(),
                });
            LetterInfo {
                id: l.id.clone(),
                letter: l.codepoint.to_string(),
                codepoint: format_codepoint(l.codepoint),
                name: l.display_name.clone(),
                joining: l.joining_class,
                joins_left: l.joins_following(),
                category: l.category,
                readings: l.latin_readings.clone(),
                initial_readings: l.initial_readings.clone(),
                forms: FormAvailability::for_class(l.joining_class),
                example,
            }
        })
        .collect()
}
