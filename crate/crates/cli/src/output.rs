use std::io::{self, Write};

use jawi_core::{CorpusReport, EntryStatus, Error, LetterInfo, ReadingCandidate, ShapedText};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
}

/// One result row in both renderings. Errors have no plain rendering on
/// stdout; they are reported on stderr as they happen.
pub struct Emit {
    plain: Option<String>,
    json: Value,
}

impl Emit {
    pub fn jawi(word: &str, shaped: &ShapedText, with_forms: bool) -> Emit {
        let mut plain = shaped.render_logical().to_string();
        if with_forms {
            let forms: Vec<String> = shaped
                .letters()
                .iter()
                .zip(shaped.forms())
                .map(|(l, f)| format!("{l}:{f}"))
                .collect();
            plain.push('\t');
            plain.push_str(&forms.join(" "));
        }
        Emit {
            plain: Some(plain),
            json: json!({
                "word": word,
                "jawi": shaped.render_logical(),
                "letters": shaped.letters(),
                "forms": shaped.forms(),
            }),
        }
    }

    pub fn candidates(word: &str, candidates: &[ReadingCandidate]) -> Emit {
        let mut plain = word.to_string();
        for (rank, c) in candidates.iter().enumerate() {
            plain.push_str(&format!(
                "\n  {}. {}  {:.3}",
                rank + 1,
                c.latin,
                c.score.value()
            ));
        }
        Emit {
            plain: Some(plain),
            json: json!({ "word": word, "candidates": candidates }),
        }
    }

    pub fn error(word: &str, err: &Error) -> Emit {
        Emit {
            plain: None,
            json: json!({
                "word": word,
                "error": { "code": err.code().as_str(), "message": err.to_string() },
            }),
        }
    }
}

fn write_json<T: Serialize + ?Sized>(out: &mut impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

pub fn write_rows(out: &mut impl Write, format: Format, rows: &[Emit]) -> io::Result<()> {
    match format {
        Format::Plain => {
            for plain in rows.iter().filter_map(|r| r.plain.as_ref()) {
                writeln!(out, "{plain}")?;
            }
            Ok(())
        }
        Format::Json => {
            let values: Vec<&Value> = rows.iter().map(|r| &r.json).collect();
            write_json(out, &values)
        }
    }
}

fn mark(available: bool) -> char {
    if available {
        '+'
    } else {
        '-'
    }
}

pub fn write_letters(out: &mut impl Write, format: Format, rows: &[LetterInfo]) -> io::Result<()> {
    if format == Format::Json {
        return write_json(out, rows);
    }
    writeln!(
        out,
        "{:<7} {:<3} {:<7} {:<17} {:<14} {:<8} {:<16} example",
        "id", "", "code", "joining", "category", "I i m f", "readings"
    )?;
    for r in rows {
        let mut readings = r.readings.join(",");
        if !r.initial_readings.is_empty() {
            readings.push_str(&format!(" ({}-)", r.initial_readings.join(",")));
        }
        let forms = format!(
            "{} {} {} {}",
            mark(r.forms.isolated),
            mark(r.forms.initial),
            mark(r.forms.medial),
            mark(r.forms.final_)
        );
        let example = r
            .example
            .as_ref()
            .map(|e| format!("{} {}", e.jawi, e.latin))
            .unwrap_or_default();
        writeln!(
            out,
            "{:<7} {:<3} {:<7} {:<17} {:<14} {:<8} {:<16} {}",
            r.id,
            r.letter,
            r.codepoint,
            format!("{:?}", r.joining),
            format!("{:?}", r.category),
            forms,
            readings,
            example
        )?;
    }
    Ok(())
}

pub fn write_report(out: &mut impl Write, format: Format, report: &CorpusReport) -> io::Result<()> {
    if format == Format::Json {
        let summary = json!({
            "ok": report.ok(),
            "normative": report.normative().count(),
            "failures": report.failures().count(),
            "entries": report.entries,
        });
        return write_json(out, &summary);
    }
    for e in &report.entries {
        let verdict = match (e.passed(), e.status) {
            (true, _) => "ok",
            (false, EntryStatus::Normative) => "FAIL",
            (false, EntryStatus::Suspect) => "suspect",
        };
        let mut line = format!(
            "{verdict:<8} {:<10} {:<10} {:<12}",
            e.latin,
            e.jawi,
            e.mode.as_str()
        );
        if !e.encode_ok {
            match (&e.encoded, &e.error) {
                (Some(got), _) => line.push_str(&format!(" encodes as {got}")),
                (None, Some(err)) => line.push_str(&format!(" does not encode: {err}")),
                (None, None) => {}
            }
        }
        if !e.decode_ok {
            line.push_str(" not among decoded readings");
        }
        writeln!(out, "{}", line.trim_end())?;
    }
    let normative = report.normative().count();
    let failures = report.failures().count();
    writeln!(
        out,
        "{}/{} normative entries pass; {} suspect entries",
        normative - failures,
        normative,
        report.entries.len() - normative
    )
}
