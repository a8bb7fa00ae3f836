//! Terminal lesson: the composer driven by one command per line.
//!
//! Commands:
//!
//! * `isolated`, `initial`, `medial`, `final` (or `sendiri`, `awal`,
//!   `tengah`, `akhir`), optionally after `f`/`filter`: set the position filter
//! * a letter id (`ba`) or the Jawi letter itself (`ب`): pick a letter
//! * a number: pick that reading from the numbered list (starting at 1)
//! * `p` process, `n` new word, `u` undo, `l` list letters for the filter,
//!   `h` help, `q` quit
//!
//! Lines starting with `#` are ignored. Prompts and inline errors go to
//! stderr; on quit the final text and any filter mismatches go to stdout.

use std::io::{self, BufRead, Write};

use jawi_core::{ComposerEvent, ComposerState, LetterKey, PositionalForm, RuleTable};
use serde_json::json;

use crate::output::Format;

const HELP: &str = "commands: <filter> | <letter> | <number> | p | n | u | l | h | q";

enum Command {
    Event(ComposerEvent),
    List,
    Help,
    Quit,
}

fn parse(line: &str, table: &RuleTable) -> Result<Command, String> {
    let mut parts = line.split_whitespace();
    let head = parts.next().unwrap_or_default();
    let arg = parts.next();
    if parts.next().is_some() {
        return Err(format!("too many arguments: {line}"));
    }
    let filter = |name: &str| {
        PositionalForm::parse(name)
            .map(|filter| Command::Event(ComposerEvent::SetFilter { filter }))
            .ok_or_else(|| format!("unknown filter `{name}`"))
    };
    match (head, arg) {
        ("f" | "filter", Some(name)) => filter(name),
        ("q" | "quit", None) => Ok(Command::Quit),
        ("p", None) => Ok(Command::Event(ComposerEvent::Process)),
        ("n", None) => Ok(Command::Event(ComposerEvent::NewWord)),
        ("u", None) => Ok(Command::Event(ComposerEvent::Undo)),
        ("l", None) => Ok(Command::List),
        ("h" | "?", None) => Ok(Command::Help),
        (word, None) if PositionalForm::parse(word).is_some() => filter(word),
        (word, None) if word.chars().all(|c| c.is_ascii_digit()) => {
            let n: usize = word.parse().map_err(|_| format!("bad number `{word}`"))?;
            if n == 0 {
                return Err("readings are numbered from 1".to_string());
            }
            Ok(Command::Event(ComposerEvent::PickReading { index: n - 1 }))
        }
        (word, None) => {
            let letter = table
                .lookup_letter(LetterKey::parse(word))
                .map_err(|e| e.to_string())?;
            Ok(Command::Event(ComposerEvent::PickLetter {
                letter: letter.id.clone(),
            }))
        }
        _ => Err(format!("unknown command `{line}`")),
    }
}

fn status(state: &ComposerState, table: &RuleTable, err: &mut impl Write) -> io::Result<()> {
    let rendered = state.render(table).map_err(io::Error::other)?;
    writeln!(
        err,
        "[{}] {} / {}",
        state.active_filter, rendered.jawi, rendered.latin
    )?;
    if let Some(p) = &state.pending {
        let readings: Vec<String> = p
            .offered
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mark = if p.chosen == Some(i) { "*" } else { "" };
                format!("{}:{r}{mark}", i + 1)
            })
            .collect();
        writeln!(
            err,
            "  pending {} ({}): {}",
            p.letter,
            p.form,
            readings.join(" ")
        )?;
    }
    Ok(())
}

fn list(state: &ComposerState, table: &RuleTable, err: &mut impl Write) -> io::Result<()> {
    let letters: Vec<String> = table
        .letters
        .iter()
        .filter(|l| state.active_filter.available_for(l.joining_class))
        .map(|l| format!("{} {}", l.codepoint, l.id))
        .collect();
    writeln!(err, "  {}", letters.join("  "))
}

/// Runs commands from `input` until `q` or end of input.
pub fn run(
    table: &RuleTable,
    format: Format,
    input: impl BufRead,
    out: &mut impl Write,
    interactive: bool,
) -> io::Result<()> {
    let stderr = io::stderr();
    let mut err = stderr.lock();
    let mut state = ComposerState::new();
    if interactive {
        writeln!(err, "{HELP}")?;
        write!(err, "> ")?;
        err.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            if interactive {
                write!(err, "> ")?;
                err.flush()?;
            }
            continue;
        }
        match parse(line, table) {
            Ok(Command::Quit) => break,
            Ok(Command::Help) => writeln!(err, "{HELP}")?,
            Ok(Command::List) => list(&state, table, &mut err)?,
            Ok(Command::Event(event)) => match state.apply(&event, table) {
                Ok(next) => {
                    state = next;
                    status(&state, table, &mut err)?;
                }
                Err(e) => writeln!(err, "error: {e}")?,
            },
            Err(e) => writeln!(err, "error: {e}")?,
        }
        if interactive {
            write!(err, "> ")?;
            err.flush()?;
        }
    }
    if interactive {
        writeln!(err)?;
    }
    finish(&state, table, format, out)
}

fn finish(
    state: &ComposerState,
    table: &RuleTable,
    format: Format,
    out: &mut impl Write,
) -> io::Result<()> {
    if state.committed.is_empty() {
        return Ok(());
    }
    let rendered = state.render(table).map_err(io::Error::other)?;
    let mismatches = state
        .check_filter_consistency(table)
        .map_err(io::Error::other)?;
    if format == Format::Json {
        let value = json!({
            "jawi": rendered.jawi,
            "latin": rendered.latin,
            "forms": rendered.forms,
            "consistency": mismatches,
        });
        serde_json::to_writer_pretty(&mut *out, &value)?;
        return writeln!(out);
    }
    writeln!(out, "{} / {}", rendered.jawi, rendered.latin)?;
    for m in mismatches {
        let letter = &state.committed[m.index].letter;
        writeln!(
            out,
            "filter mismatch at {} ({letter}): chose {}, shaping gives {}",
            m.index + 1,
            m.chosen,
            m.actual
        )?;
    }
    Ok(())
}
