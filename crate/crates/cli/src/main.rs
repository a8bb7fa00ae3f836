mod lesson;
mod output;

use std::fs::File;
use std::io::{self, IsTerminal, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use jawi_core::{
    default_corpus, jawi_to_latin, latin_to_jawi_mode, letter_inventory, load_corpus, shape_jawi,
    verify_corpus, Error, RuleTable, SpellingMode,
};
use jawi_service::ServiceConfig;

use crate::output::{Emit, Format};

/// Exit status: 0 success, 1 usage/config/IO failure, 2 a word or corpus
/// entry failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Usage = 1,
    Failed = 2,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Plene,
    Traditional,
}

impl From<ModeArg> for SpellingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Plene => SpellingMode::Plene,
            ModeArg::Traditional => SpellingMode::Traditional,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "jawi",
    version,
    about = "Latin ↔ Jawi transliteration and lessons"
)]
struct Cli {
    /// Rule table to load instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    table: Option<PathBuf>,
    /// Spelling mode, overriding the table's default.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of candidate readings.
    #[arg(long, global = true, default_value_t = 5,
          value_parser = clap::value_parser!(u32).range(1..))]
    limit: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode Latin words as Jawi.
    ToJawi {
        /// Also print each letter's positional form.
        #[arg(long)]
        forms: bool,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Rank Latin readings of Jawi words.
    ToLatin {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Show the positional form of every letter in Jawi words.
    Shape {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// List the letter inventory.
    Letters,
    /// Compose words letter by letter.
    Lesson {
        /// Read commands from a file instead of the terminal.
        #[arg(long, value_name = "FILE")]
        script: Option<PathBuf>,
    },
    /// Corpus tools.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = jawi_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of static files to serve outside /api.
        #[arg(long = "static", value_name = "DIR")]
        static_dir: Option<PathBuf>,
        /// Allowed CORS origin; repeat for several. Any origin when omitted.
        #[arg(long = "cors-origin", value_name = "ORIGIN")]
        cors_origins: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum CorpusAction {
    /// Verify a corpus file (the built-in corpus when omitted).
    Check { path: Option<PathBuf> },
}

struct Ctx {
    table: RuleTable,
    format: Format,
    limit: usize,
}

fn fail(message: impl std::fmt::Display) -> Status {
    eprintln!("error: {message}");
    Status::Usage
}

/// A reader that closed the pipe early (`jawi letters | head`) is not an
/// error.
fn io_failure(e: io::Error) -> Status {
    if e.kind() == io::ErrorKind::BrokenPipe {
        Status::Ok
    } else {
        fail(e)
    }
}

fn load_table(path: Option<&Path>, mode: Option<ModeArg>) -> Result<RuleTable, String> {
    let table = match path {
        Some(p) => {
            let file = File::open(p).map_err(|e| format!("{}: {e}", p.display()))?;
            RuleTable::load(file).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => RuleTable::default_table().clone(),
    };
    Ok(match mode {
        Some(m) => table.with_mode(m.into()),
        None => table,
    })
}

/// Splits arguments on whitespace; an argument with no word in it is a usage
/// error.
fn split_words(args: &[String]) -> Result<Vec<String>, String> {
    let mut words = Vec::new();
    for arg in args {
        let before = words.len();
        words.extend(arg.split_whitespace().map(str::to_string));
        if words.len() == before {
            return Err("empty word".to_string());
        }
    }
    Ok(words)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Usage
            } else {
                Status::Ok
            }
            .into();
        }
    };
    run(cli).into()
}

fn run(cli: Cli) -> Status {
    let table = match load_table(cli.table.as_deref(), cli.mode) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let ctx = Ctx {
        table,
        format: if cli.json {
            Format::Json
        } else {
            Format::Plain
        },
        limit: cli.limit as usize,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match cli.command {
        Command::ToJawi { forms, words } => to_jawi(&ctx, &words, forms, &mut out),
        Command::ToLatin { words } => to_latin(&ctx, &words, &mut out),
        Command::Shape { words } => shape(&ctx, &words, &mut out),
        Command::Letters => letters(&ctx, &mut out),
        Command::Lesson { script } => lesson_cmd(&ctx, script.as_deref(), &mut out),
        Command::Corpus {
            action: CorpusAction::Check { path },
        } => corpus_check(&ctx, path.as_deref(), &mut out),
        Command::Serve {
            port,
            host,
            static_dir,
            cors_origins,
        } => serve(
            ctx.table,
            SocketAddr::new(host, port),
            static_dir,
            cors_origins,
        ),
    };
    match out.flush() {
        Ok(()) => status,
        Err(e) => io_failure(e),
    }
}

fn per_word<T>(
    ctx: &Ctx,
    args: &[String],
    out: &mut impl Write,
    f: impl Fn(&str) -> Result<T, Error>,
    emit: impl Fn(&Ctx, &str, &T) -> Emit,
) -> Status {
    let words = match split_words(args) {
        Ok(w) => w,
        Err(e) => return fail(e),
    };
    let mut status = Status::Ok;
    let mut rows = Vec::new();
    for word in &words {
        let row = match f(word) {
            Ok(value) => emit(ctx, word, &value),
            Err(err) => {
                eprintln!("error: {word}: {err}");
                status = Status::Failed;
                Emit::error(word, &err)
            }
        };
        rows.push(row);
    }
    match output::write_rows(out, ctx.format, &rows) {
        Ok(()) => status,
        Err(e) => io_failure(e),
    }
}

fn to_jawi(ctx: &Ctx, args: &[String], forms: bool, out: &mut impl Write) -> Status {
    per_word(
        ctx,
        args,
        out,
        |w| latin_to_jawi_mode(&w.to_lowercase(), &ctx.table, ctx.table.spelling_mode),
        |_, word, shaped| Emit::jawi(word, shaped, forms),
    )
}

fn to_latin(ctx: &Ctx, args: &[String], out: &mut impl Write) -> Status {
    per_word(
        ctx,
        args,
        out,
        |w| jawi_to_latin(w, &ctx.table, ctx.limit),
        |_, word, candidates| Emit::candidates(word, candidates),
    )
}

fn shape(ctx: &Ctx, args: &[String], out: &mut impl Write) -> Status {
    per_word(
        ctx,
        args,
        out,
        |w| shape_jawi(w, &ctx.table),
        |_, word, shaped| Emit::jawi(word, shaped, true),
    )
}

fn letters(ctx: &Ctx, out: &mut impl Write) -> Status {
    let rows = letter_inventory(&ctx.table, &default_corpus());
    match output::write_letters(out, ctx.format, &rows) {
        Ok(()) => Status::Ok,
        Err(e) => io_failure(e),
    }
}

fn lesson_cmd(ctx: &Ctx, script: Option<&Path>, out: &mut impl Write) -> Status {
    let result = match script {
        Some(path) => match File::open(path) {
            Ok(f) => lesson::run(&ctx.table, ctx.format, io::BufReader::new(f), out, false),
            Err(e) => return fail(format!("{}: {e}", path.display())),
        },
        None => {
            let stdin = io::stdin();
            if !stdin.is_terminal() {
                return fail("lesson needs an interactive terminal; use --script FILE");
            }
            lesson::run(&ctx.table, ctx.format, stdin.lock(), out, true)
        }
    };
    match result {
        Ok(()) => Status::Ok,
        Err(e) => io_failure(e),
    }
}

fn corpus_check(ctx: &Ctx, path: Option<&Path>, out: &mut impl Write) -> Status {
    let entries = match path {
        Some(p) => match File::open(p)
            .map_err(|e| e.to_string())
            .and_then(|f| load_corpus(f).map_err(|e| e.to_string()))
        {
            Ok(entries) => entries,
            Err(e) => return fail(format!("{}: {e}", p.display())),
        },
        None => default_corpus(),
    };
    let report = verify_corpus(&entries, &ctx.table);
    if let Err(e) = output::write_report(out, ctx.format, &report) {
        return io_failure(e);
    }
    if report.ok() {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn serve(
    table: RuleTable,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
    cors_origins: Vec<String>,
) -> Status {
    let config = ServiceConfig {
        cors_origins,
        static_dir,
    };
    let router = jawi_service::router(Arc::new(table), &config);
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return fail(e),
    };
    eprintln!("listening on http://{addr}");
    match runtime.block_on(jawi_service::serve(addr, router)) {
        Ok(()) => Status::Ok,
        Err(e) => fail(format!("{addr}: {e}")),
    }
}
