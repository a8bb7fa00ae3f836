//! The interactive lesson: pick a positional filter, pick a letter, pick one
//! of its Latin readings, then process it into the two text buffers.
//!
//! [`ComposerState`] is an immutable value; [`ComposerState::apply`] returns the
//! next state. The JSON form (`committed`, `pending`, `filter`,
//! `history_depth`) is what the HTTP service and web UI exchange.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ruleset::RuleTable;
use crate::script::{resolve_forms, PositionalForm};

/// A letter that has been processed into the buffers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Committed {
    pub letter: String,
    pub reading: String,
    /// The positional filter that was active when the letter was picked.
    pub filter: PositionalForm,
    /// The reading is a digraph value shared with the preceding alif.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub digraph: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pending {
    pub letter: String,
    pub form: PositionalForm,
    pub offered: Vec<String>,
    #[serde(default)]
    pub chosen: Option<usize>,
    /// Digraph rule whose values lead the offered list, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digraph: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ComposerEvent {
    SetFilter { filter: PositionalForm },
    PickLetter { letter: String },
    PickReading { index: usize },
    Process,
    NewWord,
    Undo,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct ComposerState {
    pub committed: Vec<Committed>,
    pub pending: Option<Pending>,
    pub active_filter: PositionalForm,
    /// Snapshots of `committed` taken before each process, oldest first.
    pub history: Vec<Vec<Committed>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rendered {
    pub jawi: String,
    pub latin: String,
    pub forms: Vec<PositionalForm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FilterMismatch {
    pub index: usize,
    pub chosen: PositionalForm,
    pub actual: PositionalForm,
}

/// Readings offered for `letter` when it would become letter number
/// `committed.len()`. Digraph values come first when the letter completes a
/// digraph with the last committed letter.
pub fn offered_readings(
    table: &RuleTable,
    committed: &[Committed],
    letter: &str,
) -> Result<(Vec<String>, Option<String>)> {
    let l = table.letter(letter)?;
    let at = committed.len();
    let mut offered: Vec<String> = Vec::new();
    let mut digraph = None;
    if let Some(prev) = at.checked_sub(1).map(|i| &committed[i]) {
        if !prev.digraph {
            if let Some(d) = table.digraph_for(&prev.letter, &l.id, at - 1) {
                offered.extend(d.latin_values.iter().cloned());
                digraph = Some(d.id.clone());
            }
        }
    }
    let initial: &[String] = if at == 0 { &l.initial_readings } else { &[] };
    for r in l.latin_readings.iter().chain(initial) {
        if !offered.contains(r) {
            offered.push(r.clone());
        }
    }
    Ok((offered, digraph))
}

impl ComposerState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn history_depth(&self) -> usize {
        self.history.len()
    }

    /// Applies one event and returns the resulting state.
    pub fn apply(&self, event: &ComposerEvent, table: &RuleTable) -> Result<ComposerState> {
        let mut next = self.clone();
        match event {
            ComposerEvent::SetFilter { filter } => {
                next.active_filter = *filter;
                next.pending = None;
            }
            ComposerEvent::PickLetter { letter } => {
                let (offered, digraph) = offered_readings(table, &self.committed, letter)?;
                next.pending = Some(Pending {
                    letter: letter.clone(),
                    form: self.active_filter,
                    offered,
                    chosen: None,
                    digraph,
                });
            }
            ComposerEvent::PickReading { index } => {
                let pending = next.pending.as_mut().ok_or(Error::NoPendingSelection)?;
                if *index >= pending.offered.len() {
                    return Err(Error::ReadingIndexOutOfRange {
                        index: *index,
                        available: pending.offered.len(),
                    });
                }
                pending.chosen = Some(*index);
            }
            ComposerEvent::Process => {
                let pending = next.pending.take().ok_or(Error::NoPendingSelection)?;
                let chosen = pending.chosen.ok_or(Error::NoReadingChosen)?;
                let digraph = match &pending.digraph {
                    Some(rule) => {
                        let d = table.digraph(rule).ok_or_else(|| {
                            Error::InvalidState(format!("unknown digraph `{rule}`"))
                        })?;
                        chosen < d.latin_values.len()
                    }
                    None => false,
                };
                next.history.push(self.committed.clone());
                next.committed.push(Committed {
                    letter: pending.letter,
                    reading: pending.offered[chosen].clone(),
                    filter: pending.form,
                    digraph,
                });
            }
            ComposerEvent::NewWord => return Ok(ComposerState::default()),
            ComposerEvent::Undo => {
                if let Some(prev) = next.history.pop() {
                    next.committed = prev;
                    next.pending = None;
                }
            }
        }
        Ok(next)
    }

    /// Replays `events` from this state, stopping at the first error.
    pub fn replay<'e>(
        &self,
        events: impl IntoIterator<Item = &'e ComposerEvent>,
        table: &RuleTable,
    ) -> Result<ComposerState> {
        events
            .into_iter()
            .try_fold(self.clone(), |s, e| s.apply(e, table))
    }

    /// The dual display: Jawi in logical order with recomputed forms, and the
    /// Latin reading. An alif followed by a digraph reading contributes no
    /// Latin of its own.
    pub fn render(&self, table: &RuleTable) -> Result<Rendered> {
        let mut jawi = String::new();
        let mut latin = String::new();
        let mut classes = Vec::with_capacity(self.committed.len());
        for (i, c) in self.committed.iter().enumerate() {
            let l = table.letter(&c.letter)?;
            jawi.push(l.codepoint);
            classes.push(l.joining_class);
            let absorbed = self.committed.get(i + 1).is_some_and(|n| n.digraph);
            if !absorbed {
                latin.push_str(&c.reading);
            }
        }
        Ok(Rendered {
            jawi,
            latin,
            forms: resolve_forms(&classes),
        })
    }

    /// Committed letters whose picked filter differs from the form shaping
    /// actually gives them.
    pub fn check_filter_consistency(&self, table: &RuleTable) -> Result<Vec<FilterMismatch>> {
        let forms = self.render(table)?.forms;
        Ok(self
            .committed
            .iter()
            .zip(forms)
            .enumerate()
            .filter(|(_, (c, actual))| c.filter != *actual)
            .map(|(index, (c, actual))| FilterMismatch {
                index,
                chosen: c.filter,
                actual,
            })
            .collect())
    }

    /// Checks the state against the table: known letters, readings that the
    /// letter could have offered, and a pending selection that matches what
    /// picking its letter would produce.
    pub fn validate(&self, table: &RuleTable) -> Result<()> {
        for (i, c) in self.committed.iter().enumerate() {
            let (offered, digraph) = offered_readings(table, &self.committed[..i], &c.letter)?;
            let position = offered
                .iter()
                .position(|r| *r == c.reading)
                .ok_or_else(|| {
                    Error::InvalidState(format!(
                        "`{}` is not a reading of `{}` at {i}",
                        c.reading, c.letter
                    ))
                })?;
            let is_digraph = digraph
                .and_then(|id| table.digraph(&id))
                .is_some_and(|d| position < d.latin_values.len());
            if is_digraph != c.digraph {
                return Err(Error::InvalidState(format!("digraph flag mismatch at {i}")));
            }
        }
        if let Some(p) = &self.pending {
            let (offered, digraph) = offered_readings(table, &self.committed, &p.letter)?;
            if offered != p.offered || digraph != p.digraph {
                return Err(Error::InvalidState(format!(
                    "offered readings for `{}` do not match the rule table",
                    p.letter
                )));
            }
            if let Some(idx) = p.chosen {
                if idx >= offered.len() {
                    return Err(Error::ReadingIndexOutOfRange {
                        index: idx,
                        available: offered.len(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("composer state serializes")
    }

    /// Parses and validates a serialized state. An empty object is a fresh
    /// state.
    pub fn from_json(s: &str, table: &RuleTable) -> Result<ComposerState> {
        let state: ComposerState =
            serde_json::from_str(s).map_err(|e| Error::InvalidState(e.to_string()))?;
        state.validate(table)?;
        Ok(state)
    }
}

/// Free-function form of [`ComposerState::apply`].
pub fn apply_event(
    state: &ComposerState,
    event: &ComposerEvent,
    table: &RuleTable,
) -> Result<ComposerState> {
    state.apply(event, table)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StateRepr {
    committed: Vec<Committed>,
    pending: Option<Pending>,
    filter: PositionalForm,
    history_depth: usize,
}

impl TryFrom<StateRepr> for ComposerState {
    type Error = String;

    fn try_from(r: StateRepr) -> std::result::Result<Self, String> {
        let len = r.committed.len();
        if r.history_depth > len {
            return Err(format!(
                "history_depth {} exceeds {} committed letters",
                r.history_depth, len
            ));
        }
        let history = (len - r.history_depth..len)
            .map(|k| r.committed[..k].to_vec())
            .collect();
        Ok(ComposerState {
            committed: r.committed,
            pending: r.pending,
            active_filter: r.filter,
            history,
        })
    }
}

impl From<ComposerState> for StateRepr {
    fn from(s: ComposerState) -> Self {
        StateRepr {
            history_depth: s.history.len(),
            committed: s.committed,
            pending: s.pending,
            filter: s.active_filter,
        }
    }
}
