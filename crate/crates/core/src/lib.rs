//! Rule-driven transliteration for the Jawi (Arab-Melayu) script.
//!
//! * [`script`]: the letter model and contextual form resolution.
//! * [`ruleset`]: the versioned rule table loaded from JSON.
//! * [`transliterate`]: Latin → Jawi encoding and ranked Jawi → Latin decoding.
//! * [`composer`]: the letter-by-letter lesson state machine.
//! * [`corpus`]: curated example words and the verification harness.
//! * [`inventory`]: the per-letter reference view.
//!
//! ```
//! use jawi_core::{latin_to_jawi, jawi_to_latin, RuleTable};
//!
//! let table = RuleTable::default_table();
//! assert_eq!(latin_to_jawi("batu", table).unwrap().render_logical(), "باتو");
//! assert_eq!(jawi_to_latin("باتو", table, 5).unwrap()[0].latin, "batu");
//! ```

pub mod composer;
pub mod corpus;
mod error;
pub mod inventory;
pub mod ruleset;
pub mod script;
pub mod transliterate;

pub use composer::{apply_event, ComposerEvent, ComposerState, FilterMismatch, Rendered};
pub use corpus::{
    default_corpus, load_corpus, verify_corpus, CorpusEntry, CorpusReport, EntryStatus,
};
pub use error::{Error, ErrorCode, Result};
pub use inventory::{letter_inventory, LetterInfo};
pub use ruleset::{DigraphRule, LetterKey, PositionConstraint, RuleTable, SpellingMode};
pub use script::{
    resolve_forms, resolve_positions, Category, JoiningClass, Letter, PositionalForm, ShapedText,
};
pub use transliterate::{
    enumerate_all_readings, jawi_to_latin, jawi_to_latin_all, latin_to_jawi, latin_to_jawi_mode,
    replay_trace, shape_jawi, ReadingCandidate, Score, TraceStep,
};
