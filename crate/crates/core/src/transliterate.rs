//! Latin → Jawi encoding and Jawi → Latin candidate decoding.
//!
//! Jawi leaves most vowels unwritten, so decoding yields a ranked list of
//! readings rather than a single answer. Every candidate carries the trace of
//! rule applications that produced it; [`replay_trace`] re-derives the Latin
//! string from that trace.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ruleset::{is_vowel, PositionConstraint, RuleTable, SpellingMode};
use crate::script::{Letter, ShapedText};

/// Longest input [`enumerate_all_readings`] accepts.
pub const MAX_ENUMERATION_LETTERS: usize = 8;

fn is_consonantal(reading: &str) -> bool {
    !reading.chars().any(is_vowel)
}

/// Encodes a lowercase Latin word using the table's own spelling mode.
pub fn latin_to_jawi(word: &str, table: &RuleTable) -> Result<ShapedText> {
    latin_to_jawi_mode(word, table, table.spelling_mode)
}

/// Encodes a lowercase Latin word with a left-to-right greedy scan.
///
/// A word-initial vowel is written with alif, extended by the word-initial
/// digraph rules (alif+waw for o/u, alif+ya for e/i). Later vowels use the
/// medial vowel map, except that [`SpellingMode::Traditional`] leaves `a`
/// unwritten. Consonants take the longest matching reading of any encodable
/// letter; ties go to the primary reading, then to table order.
pub fn latin_to_jawi_mode(word: &str, table: &RuleTable, mode: SpellingMode) -> Result<ShapedText> {
    if word.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(pos) = word.chars().position(|c| !c.is_ascii_lowercase()) {
        return Err(Error::UnencodableInput(pos));
    }
    let bytes = word.as_bytes();
    let mut out: Vec<&Letter> = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if is_vowel(c) {
            if pos == 0 {
                out.extend(initial_vowel(table, c).ok_or(Error::UnencodableInput(pos))?);
            } else if !(mode == SpellingMode::Traditional && c == 'a') {
                out.push(table.medial_letter(c).ok_or(Error::UnencodableInput(pos))?);
            }
            pos += 1;
        } else {
            let (letter, len) =
                match_consonant(table, &word[pos..]).ok_or(Error::UnencodableInput(pos))?;
            out.push(letter);
            pos += len;
        }
    }
    Ok(ShapedText::from_letters(&out))
}

fn initial_vowel(table: &RuleTable, vowel: char) -> Option<Vec<&Letter>> {
    let mut buf = [0u8; 4];
    let v: &str = vowel.encode_utf8(&mut buf);
    let digraph = table.digraphs.iter().find(|d| {
        d.position_constraint == PositionConstraint::WordInitial
            && d.latin_values.iter().any(|x| x == v)
    });
    match digraph {
        Some(d) => Some(vec![
            table.letter(&d.jawi_pair.0).ok()?,
            table.letter(&d.jawi_pair.1).ok()?,
        ]),
        None => table.medial_letter(vowel).map(|l| vec![l]),
    }
}

fn match_consonant<'t>(table: &'t RuleTable, rest: &str) -> Option<(&'t Letter, usize)> {
    let mut best: Option<(&Letter, usize, usize)> = None;
    for letter in table.letters.iter().filter(|l| l.encodable) {
        for (idx, reading) in letter.latin_readings.iter().enumerate() {
            if !is_consonantal(reading) || !rest.starts_with(reading.as_str()) {
                continue;
            }
            let better = match best {
                None => true,
                Some((_, len, best_idx)) => {
                    reading.len() > len || (reading.len() == len && idx < best_idx)
                }
            };
            if better {
                best = Some((letter, reading.len(), idx));
            }
        }
    }
    best.map(|(l, len, _)| (l, len))
}

/// One step in the derivation of a decoded reading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TraceStep {
    /// A single letter read with the option at `index` (its readings, followed
    /// by its initial-only readings when word-initial).
    Reading { letter: String, index: usize },
    /// Two letters read together through a digraph rule.
    Digraph { rule: String, index: usize },
    /// An unwritten vowel inserted after the preceding consonant.
    Epenthesis { vowel: String },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::Reading { letter, index } => write!(f, "letter:{letter}#{index}"),
            TraceStep::Digraph { rule, index } => write!(f, "digraph:{rule}#{index}"),
            TraceStep::Epenthesis { vowel } => write!(f, "epenthesis:{vowel}"),
        }
    }
}

impl FromStr for TraceStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::validation("trace", format!("malformed step `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "epenthesis" {
            return Ok(TraceStep::Epenthesis {
                vowel: rest.to_string(),
            });
        }
        let (name, index) = rest.rsplit_once('#').ok_or_else(bad)?;
        let index = index.parse().map_err(|_| bad())?;
        match kind {
            "letter" => Ok(TraceStep::Reading {
                letter: name.to_string(),
                index,
            }),
            "digraph" => Ok(TraceStep::Digraph {
                rule: name.to_string(),
                index,
            }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for TraceStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TraceStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Structural score: `1 / (1 + fallbacks + insertions)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Score {
    pub fallbacks: u32,
    pub insertions: u32,
}

impl Score {
    pub fn penalty(self) -> u32 {
        self.fallbacks + self.insertions
    }

    pub fn numerator(self) -> u32 {
        1
    }

    pub fn denominator(self) -> u32 {
        1 + self.penalty()
    }

    pub fn value(self) -> f64 {
        1.0 / f64::from(self.denominator())
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

/// One decoding hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadingCandidate {
    pub latin: String,
    pub score: Score,
    pub trace: Vec<TraceStep>,
}

/// Maps a logical-order Jawi string onto table letters.
pub fn parse_jawi<'t>(jawi: &str, table: &'t RuleTable) -> Result<Vec<&'t Letter>> {
    jawi.chars()
        .enumerate()
        .map(|(position, c)| {
            table.letter_by_char(c).ok_or(Error::UnknownCodepoint {
                position,
                codepoint: c as u32,
            })
        })
        .collect()
}

/// Shapes a logical-order Jawi string, normalizing alias code points.
pub fn shape_jawi(jawi: &str, table: &RuleTable) -> Result<ShapedText> {
    if jawi.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(ShapedText::from_letters(&parse_jawi(jawi, table)?))
}

struct Opt<'t> {
    value: &'t str,
    step: TraceStep,
}

struct Unit<'t> {
    options: Vec<Opt<'t>>,
}

fn letter_unit<'t>(letter: &'t Letter, word_initial: bool) -> Unit<'t> {
    let extra: &[String] = if word_initial {
        &letter.initial_readings
    } else {
        &[]
    };
    Unit {
        options: letter
            .latin_readings
            .iter()
            .chain(extra)
            .enumerate()
            .map(|(index, r)| Opt {
                value: r,
                step: TraceStep::Reading {
                    letter: letter.id.clone(),
                    index,
                },
            })
            .collect(),
    }
}

/// All ways to split the letters into single-letter and digraph units,
/// digraph splits first.
fn segmentations<'t>(letters: &[&'t Letter], table: &'t RuleTable) -> Vec<Vec<Unit<'t>>> {
    fn go<'t>(
        letters: &[&'t Letter],
        table: &'t RuleTable,
        at: usize,
        prefix: &mut Vec<(usize, Option<usize>)>,
        out: &mut Vec<Vec<(usize, Option<usize>)>>,
    ) {
        if at == letters.len() {
            out.push(prefix.clone());
            return;
        }
        if at + 1 < letters.len() {
            let rule = table.digraphs.iter().position(|d| {
                d.jawi_pair.0 == letters[at].id
                    && d.jawi_pair.1 == letters[at + 1].id
                    && d.applies_at(at)
            });
            if let Some(rule) = rule {
                prefix.push((at, Some(rule)));
                go(letters, table, at + 2, prefix, out);
                prefix.pop();
            }
        }
        prefix.push((at, None));
        go(letters, table, at + 1, prefix, out);
        prefix.pop();
    }

    let mut plans = Vec::new();
    go(letters, table, 0, &mut Vec::new(), &mut plans);
    plans
        .into_iter()
        .map(|plan| {
            plan.into_iter()
                .map(|(at, rule)| match rule {
                    Some(r) => {
                        let d = &table.digraphs[r];
                        Unit {
                            options: d
                                .latin_values
                                .iter()
                                .enumerate()
                                .map(|(index, v)| Opt {
                                    value: v,
                                    step: TraceStep::Digraph {
                                        rule: d.id.clone(),
                                        index,
                                    },
                                })
                                .collect(),
                        }
                    }
                    None => letter_unit(letters[at], at == 0),
                })
                .collect()
        })
        .collect()
}

fn build_trace(units: &[Unit<'_>], path: &Path, epenthesis: &[String]) -> Vec<TraceStep> {
    let mut trace = Vec::with_capacity(units.len() + path.inserts.len());
    for (k, unit) in units.iter().enumerate() {
        trace.push(unit.options[path.choice[k]].step.clone());
        if let Some(i) = path.slots.iter().position(|&s| s == k) {
            if path.inserts[i] > 0 {
                trace.push(TraceStep::Epenthesis {
                    vowel: epenthesis[path.inserts[i] - 1].clone(),
                });
            }
        }
    }
    trace
}

/// Ranking key of one derivation. `position` is the derivation's place in
/// the canonical enumeration order (segmentation, then reading choices, then
/// insertions, each compared lexicographically), which breaks remaining ties.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RankKey {
    penalty: u32,
    index_sum: usize,
    position: (usize, Vec<usize>, Vec<usize>),
}

/// The derivation being built: an option per unit and, for every open
/// epenthesis slot, 0 (nothing) or 1 + the inserted vowel's index.
#[derive(Default)]
struct Path {
    choice: Vec<usize>,
    slots: Vec<usize>,
    inserts: Vec<usize>,
}

type Best = HashMap<String, (RankKey, Score, Vec<TraceStep>)>;

struct Search<'a, 't> {
    units: &'a [Unit<'t>],
    segmentation: usize,
    epenthesis: &'a [String],
    /// When set, only derivations with exactly this penalty are recorded.
    penalty: Option<u32>,
    best: &'a mut Best,
}

impl Search<'_, '_> {
    fn value(&self, path: &Path, k: usize) -> &str {
        self.units[k].options[path.choice[k]].value
    }

    fn cost(path: &Path) -> u32 {
        let fallbacks = path.choice.iter().filter(|&&c| c > 0).count();
        let insertions = path.inserts.iter().filter(|&&i| i > 0).count();
        (fallbacks + insertions) as u32
    }

    /// Chooses an option for unit `k`, after deciding the slot that follows
    /// unit `k - 1`. A slot after a consonantal unit is open when the next
    /// unit is consonantal too or the word ends there.
    fn unit(&mut self, path: &mut Path, k: usize) {
        if self.penalty.is_some_and(|p| Self::cost(path) > p) {
            return;
        }
        if k == self.units.len() {
            if is_consonantal(self.value(path, k - 1)) {
                self.slot(path, k - 1, |s, p| s.leaf(p));
            } else {
                self.leaf(path);
            }
            return;
        }
        for option in 0..self.units[k].options.len() {
            path.choice.push(option);
            let open = k > 0
                && is_consonantal(self.value(path, k - 1))
                && is_consonantal(self.value(path, k));
            if open {
                self.slot(path, k - 1, |s, p| s.unit(p, k + 1));
            } else {
                self.unit(path, k + 1);
            }
            path.choice.pop();
        }
    }

    fn slot(&mut self, path: &mut Path, after: usize, next: impl Fn(&mut Self, &mut Path)) {
        path.slots.push(after);
        for insert in 0..=self.epenthesis.len() {
            path.inserts.push(insert);
            next(self, path);
            path.inserts.pop();
        }
        path.slots.pop();
    }

    fn leaf(&mut self, path: &mut Path) {
        let penalty = Self::cost(path);
        if self.penalty.is_some_and(|p| p != penalty) {
            return;
        }
        let mut latin = String::new();
        let mut slot_iter = path.slots.iter().zip(&path.inserts).peekable();
        let mut insert_sum = 0;
        for k in 0..self.units.len() {
            latin.push_str(self.value(path, k));
            if let Some((_, &ins)) = slot_iter.next_if(|(slot, _)| **slot == k) {
                if ins > 0 {
                    latin.push_str(&self.epenthesis[ins - 1]);
                    insert_sum += ins - 1;
                }
            }
        }
        let score = Score {
            fallbacks: path.choice.iter().filter(|&&c| c > 0).count() as u32,
            insertions: path.inserts.iter().filter(|&&i| i > 0).count() as u32,
        };
        let key = RankKey {
            penalty,
            index_sum: path.choice.iter().sum::<usize>() + insert_sum,
            position: (self.segmentation, path.choice.clone(), path.inserts.clone()),
        };
        let improves = self.best.get(&latin).is_none_or(|(k, _, _)| key < *k);
        if improves {
            let trace = build_trace(self.units, path, self.epenthesis);
            self.best.insert(latin, (key, score, trace));
        }
    }
}

/// Searches derivations in passes of increasing penalty. A reading first
/// found in pass `p` cannot be improved by later passes, so once at least
/// `limit` readings are known the best `limit` of them are final.
fn decode(jawi: &str, table: &RuleTable, limit: usize) -> Result<Vec<ReadingCandidate>> {
    if jawi.is_empty() {
        return Err(Error::EmptyInput);
    }
    let letters = parse_jawi(jawi, table)?;
    let plans = segmentations(&letters, table);
    // Every unit can add at most one fallback and one insertion.
    let max_penalty = 2 * letters.len() as u32;

    let mut best = Best::new();
    let run = |penalty: Option<u32>, best: &mut Best| {
        for (segmentation, units) in plans.iter().enumerate() {
            Search {
                units,
                segmentation,
                epenthesis: &table.epenthesis_vowels,
                penalty,
                best,
            }
            .unit(&mut Path::default(), 0);
        }
    };
    if limit == usize::MAX {
        run(None, &mut best);
    } else {
        for penalty in 0..=max_penalty {
            run(Some(penalty), &mut best);
            if best.len() >= limit {
                break;
            }
        }
    }

    let mut ranked: Vec<_> = best.into_iter().collect();
    ranked.sort_by(|a, b| a.1 .0.cmp(&b.1 .0));
    ranked.truncate(limit);
    Ok(ranked
        .into_iter()
        .map(|(latin, (_, score, trace))| ReadingCandidate {
            latin,
            score,
            trace,
        })
        .collect())
}

/// Ranked Latin readings of a Jawi word, best first, at most `limit` of them.
///
/// Candidates are deduplicated by Latin string (keeping the best-ranked
/// derivation) and ordered by penalty (non-primary options plus inserted
/// vowels), then by how far down the reading lists the derivation went, then
/// by enumeration order.
pub fn jawi_to_latin(jawi: &str, table: &RuleTable, limit: usize) -> Result<Vec<ReadingCandidate>> {
    if limit == 0 {
        return Err(Error::validation("limit", "limit must be at least 1"));
    }
    decode(jawi, table, limit)
}

/// Every candidate, without truncation.
pub fn jawi_to_latin_all(jawi: &str, table: &RuleTable) -> Result<Vec<ReadingCandidate>> {
    decode(jawi, table, usize::MAX)
}

/// Exhaustive, unranked set of readings by direct recursion over the decoding
/// rules. Independent of the ranked decoder; used to cross-check it.
pub fn enumerate_all_readings(jawi: &str, table: &RuleTable) -> Result<BTreeSet<String>> {
    if jawi.is_empty() {
        return Err(Error::EmptyInput);
    }
    let letters = parse_jawi(jawi, table)?;
    if letters.len() > MAX_ENUMERATION_LETTERS {
        return Err(Error::InputTooLong {
            len: letters.len(),
            max: MAX_ENUMERATION_LETTERS,
        });
    }

    fn choices<'t>(
        letters: &[&'t Letter],
        table: &'t RuleTable,
        i: usize,
    ) -> Vec<(&'t str, usize)> {
        let mut out = Vec::new();
        if i + 1 < letters.len() {
            if let Some(d) = table.digraph_for(&letters[i].id, &letters[i + 1].id, i) {
                out.extend(d.latin_values.iter().map(|v| (v.as_str(), 2)));
            }
        }
        out.extend(letters[i].latin_readings.iter().map(|r| (r.as_str(), 1)));
        if i == 0 {
            out.extend(letters[i].initial_readings.iter().map(|r| (r.as_str(), 1)));
        }
        out
    }

    fn walk(
        letters: &[&Letter],
        table: &RuleTable,
        i: usize,
        last: Option<&str>,
        acc: &str,
        out: &mut BTreeSet<String>,
    ) {
        let last_consonantal = last.is_some_and(is_consonantal);
        if i == letters.len() {
            out.insert(acc.to_string());
            if last_consonantal {
                for v in &table.epenthesis_vowels {
                    out.insert(format!("{acc}{v}"));
                }
            }
            return;
        }
        for (value, width) in choices(letters, table, i) {
            let mut prefixes = vec![acc.to_string()];
            if last_consonantal && is_consonantal(value) {
                prefixes.extend(table.epenthesis_vowels.iter().map(|v| format!("{acc}{v}")));
            }
            for p in prefixes {
                walk(
                    letters,
                    table,
                    i + width,
                    Some(value),
                    &format!("{p}{value}"),
                    out,
                );
            }
        }
    }

    let mut out = BTreeSet::new();
    walk(&letters, table, 0, None, "", &mut out);
    Ok(out)
}

/// Re-applies a candidate's trace to the Jawi source and returns the Latin it
/// spells. Fails when the trace does not fit the source.
pub fn replay_trace(jawi: &str, trace: &[TraceStep], table: &RuleTable) -> Result<String> {
    let letters = parse_jawi(jawi, table)?;
    let bad = |msg: String| Error::validation("trace", msg);
    let mut at = 0;
    let mut latin = String::new();
    let mut last: Option<&str> = None;
    for (n, step) in trace.iter().enumerate() {
        match step {
            TraceStep::Reading { letter, index } => {
                let l = letters
                    .get(at)
                    .ok_or_else(|| bad(format!("step {n} runs past the input")))?;
                if &l.id != letter {
                    return Err(bad(format!(
                        "step {n} expects `{letter}`, found `{}`",
                        l.id
                    )));
                }
                let unit = letter_unit(l, at == 0);
                let opt = unit
                    .options
                    .get(*index)
                    .ok_or_else(|| bad(format!("step {n} has no option {index}")))?;
                latin.push_str(opt.value);
                last = Some(opt.value);
                at += 1;
            }
            TraceStep::Digraph { rule, index } => {
                let d = table
                    .digraph(rule)
                    .ok_or_else(|| bad(format!("unknown digraph `{rule}`")))?;
                let fits = at + 1 < letters.len()
                    && letters[at].id == d.jawi_pair.0
                    && letters[at + 1].id == d.jawi_pair.1
                    && d.applies_at(at);
                if !fits {
                    return Err(bad(format!("digraph `{rule}` does not apply at {at}")));
                }
                let v = d
                    .latin_values
                    .get(*index)
                    .ok_or_else(|| bad(format!("step {n} has no value {index}")))?;
                latin.push_str(v);
                last = Some(v);
                at += 2;
            }
            TraceStep::Epenthesis { vowel } => {
                if !table.epenthesis_vowels.contains(vowel) {
                    return Err(bad(format!("`{vowel}` is not an epenthesis vowel")));
                }
                if !last.is_some_and(is_consonantal) {
                    return Err(bad(format!("step {n} inserts after a vowel")));
                }
                latin.push_str(vowel);
                last = Some(vowel);
            }
        }
    }
    if at != letters.len() {
        return Err(bad(format!(
            "trace covers {at} of {} letters",
            letters.len()
        )));
    }
    Ok(latin)
}
