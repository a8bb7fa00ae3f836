use std::collections::BTreeSet;

use jawi_core::corpus::EntryStatus;
use jawi_core::{
    default_corpus, enumerate_all_readings, jawi_to_latin, jawi_to_latin_all, latin_to_jawi,
    latin_to_jawi_mode, replay_trace, resolve_positions, ComposerEvent, ComposerState,
    JoiningClass, PositionalForm, RuleTable, SpellingMode, TraceStep,
};
use proptest::prelude::*;

fn table() -> &'static RuleTable {
    RuleTable::default_table()
}

fn letter_ids() -> Vec<&'static str> {
    table().letters.iter().map(|l| l.id.as_str()).collect()
}

fn any_word(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(letter_ids()), 0..max)
}

fn jawi_of(ids: &[&str]) -> String {
    ids.iter()
        .map(|id| table().letter(id).unwrap().codepoint)
        .collect()
}

proptest! {
    #[test]
    fn shaping_is_total_and_positional(word in any_word(12)) {
        let forms = resolve_positions(table(), &word).unwrap();
        prop_assert_eq!(forms.len(), word.len());
        for (i, (id, form)) in word.iter().zip(&forms).enumerate() {
            let class = table().letter(id).unwrap().joining_class;
            if class == JoiningClass::RightJoiningOnly {
                prop_assert!(matches!(form, PositionalForm::Isolated | PositionalForm::Final));
            }
            if i == 0 {
                prop_assert!(matches!(form, PositionalForm::Isolated | PositionalForm::Initial));
            }
            if i + 1 == word.len() {
                prop_assert!(matches!(form, PositionalForm::Isolated | PositionalForm::Final));
            }
        }
    }

    #[test]
    fn encoder_output_decodes_back(word in "[a-z]{1,6}") {
        let shaped = latin_to_jawi(&word, table()).unwrap();
        prop_assert_eq!(shaped.forms(), resolve_positions(table(), shaped.letters()).unwrap());
        prop_assert!(!shaped.letters().iter().any(|l| l == "hamzah"));
    }

    #[test]
    fn candidates_replay_and_rank(word in any_word(5).prop_filter("nonempty", |w| !w.is_empty())) {
        let jawi = jawi_of(&word);
        let all = jawi_to_latin_all(&jawi, table()).unwrap();
        prop_assert!(!all.is_empty());
        let mut seen = BTreeSet::new();
        for c in &all {
            prop_assert!(!c.latin.is_empty());
            prop_assert!(seen.insert(c.latin.clone()));
            prop_assert_eq!(&replay_trace(&jawi, &c.trace, table()).unwrap(), &c.latin);
            let s = c.score.value();
            prop_assert!(s > 0.0 && s <= 1.0);
        }
        // A clean reading (primary options, no insertions) outranks anything
        // with an inserted vowel.
        if let Some(last_clean) = all.iter().rposition(|c| c.score.penalty() == 0) {
            let first_inserted = all.iter().position(|c| c.score.insertions > 0);
            if let Some(fi) = first_inserted {
                prop_assert!(last_clean < fi);
            }
        }
        prop_assert!(all.windows(2).all(|w| w[0].score.penalty() <= w[1].score.penalty()));
        let limited = jawi_to_latin(&jawi, table(), 3).unwrap();
        prop_assert_eq!(&limited[..], &all[..all.len().min(3)]);
    }

    #[test]
    fn oracle_agrees_on_full_inventory(word in any_word(4).prop_filter("nonempty", |w| !w.is_empty())) {
        let jawi = jawi_of(&word);
        let ranked: BTreeSet<_> = jawi_to_latin_all(&jawi, table()).unwrap().into_iter().map(|c| c.latin).collect();
        prop_assert_eq!(ranked, enumerate_all_readings(&jawi, table()).unwrap());
    }

    #[test]
    fn composer_replay_is_deterministic_and_undo_sound(
        script in prop::collection::vec((prop::sample::select(letter_ids()), 0usize..3, 0usize..4), 0..8)
    ) {
        let t = table();
        let mut events = Vec::new();
        for (letter, reading, filter) in script {
            events.push(ComposerEvent::SetFilter { filter: PositionalForm::ALL[filter] });
            events.push(ComposerEvent::PickLetter { letter: letter.to_string() });
            events.push(ComposerEvent::PickReading { index: reading });
            events.push(ComposerEvent::Process);
        }
        let run = |events: &[ComposerEvent]| {
            let mut s = ComposerState::new();
            for e in events {
                let before = s.clone();
                // Rejected events leave the state untouched.
                if let Ok(next) = s.apply(e, t) {
                    if *e == ComposerEvent::Process {
                        let undone = next.apply(&ComposerEvent::Undo, t).unwrap();
                        assert_eq!(undone.committed, before.committed);
                    }
                    s = next;
                }
            }
            s
        };
        let a = run(&events);
        let b = run(&events);
        prop_assert_eq!(&a, &b);
        let r = a.render(t).unwrap();
        let ids: Vec<_> = a.committed.iter().map(|c| c.letter.as_str()).collect();
        prop_assert_eq!(r.forms, resolve_positions(t, &ids).unwrap());
        prop_assert_eq!(r.jawi, jawi_of(&ids));
        a.validate(t).unwrap();
        let reloaded = ComposerState::from_json(&a.to_json(), t).unwrap();
        prop_assert_eq!(reloaded, a);
    }
}

#[test]
fn every_latin_letter_is_encodable() {
    for c in 'a'..='z' {
        let word = c.to_string();
        assert!(latin_to_jawi(&word, table()).is_ok(), "{c}");
    }
}

#[test]
fn corpus_round_trips_in_both_modes() {
    for entry in default_corpus() {
        for mode in [SpellingMode::Plene, SpellingMode::Traditional] {
            let jawi = latin_to_jawi_mode(&entry.latin, table(), mode).unwrap();
            let readings = jawi_to_latin_all(jawi.render_logical(), table()).unwrap();
            assert!(
                readings.iter().any(|c| c.latin == entry.latin),
                "{} ({mode:?}) -> {}",
                entry.latin,
                jawi.render_logical()
            );
        }
    }
}

#[test]
fn corpus_covers_inventory() {
    let covered: BTreeSet<char> = default_corpus()
        .iter()
        .flat_map(|e| e.jawi.chars())
        .collect();
    let missing: Vec<_> = table()
        .letters
        .iter()
        .filter(|l| !covered.contains(&l.codepoint))
        .map(|l| l.id.as_str())
        .collect();
    assert_eq!(missing, ["hamzah"]);

    let letter_table: BTreeSet<char> = default_corpus()
        .iter()
        .filter(|e| e.source.starts_with("letter-table:"))
        .flat_map(|e| e.jawi.chars())
        .collect();
    assert!(table()
        .letters
        .iter()
        .filter(|l| l.id != "hamzah")
        .all(|l| letter_table.contains(&l.codepoint)));
}

#[test]
fn normative_entries_compose_letter_by_letter() {
    // Entries whose best derivation inserts no vowels can be composed in the
    // lesson by picking each letter with the reading its trace used.
    let t = table();
    let mut composed = 0;
    for entry in default_corpus()
        .iter()
        .filter(|e| e.status == EntryStatus::Normative)
    {
        let cands = jawi_to_latin_all(&entry.jawi, t).unwrap();
        let cand = cands.iter().find(|c| c.latin == entry.latin).unwrap();
        if cand
            .trace
            .iter()
            .any(|s| matches!(s, TraceStep::Epenthesis { .. }))
        {
            continue;
        }
        let mut state = ComposerState::new();
        for ch in entry.jawi.chars() {
            let id = t.letter_by_char(ch).unwrap().id.clone();
            state = state
                .apply(&ComposerEvent::PickLetter { letter: id }, t)
                .unwrap();
            let at = state.committed.len();
            let p = state.pending.clone().unwrap();
            let reading = latin_piece(cand, at, t);
            let index = p
                .offered
                .iter()
                .position(|r| *r == reading)
                .unwrap_or_else(|| {
                    panic!(
                        "{}: `{reading}` not offered for {} ({:?})",
                        entry.latin, p.letter, p.offered
                    )
                });
            state = state
                .replay(
                    &[ComposerEvent::PickReading { index }, ComposerEvent::Process],
                    t,
                )
                .unwrap();
        }
        assert_eq!(state.render(t).unwrap().latin, entry.latin);
        assert_eq!(state.render(t).unwrap().jawi, entry.jawi);
        composed += 1;
    }
    assert!(composed >= 10, "only {composed} entries composed");
}

/// Latin contributed by letter `at` in the candidate's derivation. For a
/// digraph the value belongs to the second letter; the alif is offered its
/// primary reading and then absorbed.
fn latin_piece(cand: &jawi_core::ReadingCandidate, at: usize, t: &RuleTable) -> String {
    let mut letter_index = 0;
    for step in &cand.trace {
        match step {
            TraceStep::Reading { letter, index } => {
                if letter_index == at {
                    let l = t.letter(letter).unwrap();
                    let initial: &[String] = if at == 0 { &l.initial_readings } else { &[] };
                    return l
                        .latin_readings
                        .iter()
                        .chain(initial)
                        .nth(*index)
                        .unwrap()
                        .clone();
                }
                letter_index += 1;
            }
            TraceStep::Digraph { rule, index } => {
                let d = t.digraph(rule).unwrap();
                if letter_index == at {
                    return t.letter(&d.jawi_pair.0).unwrap().latin_readings[0].clone();
                }
                if letter_index + 1 == at {
                    return d.latin_values[*index].clone();
                }
                letter_index += 2;
            }
            TraceStep::Epenthesis { .. } => {}
        }
    }
    unreachable!("trace shorter than word")
}
