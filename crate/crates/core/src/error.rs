use std::fmt;

/// Errors produced by the engine.
///
/// Every variant has a stable [`ErrorCode`] so front ends (CLI, HTTP, Python)
/// can report failures without matching on message text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown code point U+{codepoint:04X} at position {position}")]
    UnknownCodepoint { position: usize, codepoint: u32 },
    #[error("cannot encode input at position {0}")]
    UnencodableInput(usize),
    #[error("input is empty")]
    EmptyInput,
    #[error("input has {len} letters; at most {max} are allowed")]
    InputTooLong { len: usize, max: usize },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid rule `{rule}`: {reason}")]
    Validation { rule: String, reason: String },
    #[error("no letter is pending")]
    NoPendingSelection,
    #[error("no reading has been chosen for the pending letter")]
    NoReadingChosen,
    #[error("reading index {index} is out of range ({available} offered)")]
    ReadingIndexOutOfRange { index: usize, available: usize },
    #[error("invalid composer state: {0}")]
    InvalidState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stable, machine-readable names for [`Error`] variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorCode {
    UnknownLetter,
    UnknownCodepoint,
    UnencodableInput,
    EmptyInput,
    InputTooLong,
    ParseError,
    ValidationError,
    NoPendingSelection,
    NoReadingChosen,
    ReadingIndexOutOfRange,
    InvalidState,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 11] = [
        ErrorCode::UnknownLetter,
        ErrorCode::UnknownCodepoint,
        ErrorCode::UnencodableInput,
        ErrorCode::EmptyInput,
        ErrorCode::InputTooLong,
        ErrorCode::ParseError,
        ErrorCode::ValidationError,
        ErrorCode::NoPendingSelection,
        ErrorCode::NoReadingChosen,
        ErrorCode::ReadingIndexOutOfRange,
        ErrorCode::InvalidState,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::UnknownLetter => "UnknownLetter",
            ErrorCode::UnknownCodepoint => "UnknownCodepoint",
            ErrorCode::UnencodableInput => "UnencodableInput",
            ErrorCode::EmptyInput => "EmptyInput",
            ErrorCode::InputTooLong => "InputTooLong",
            ErrorCode::ParseError => "ParseError",
            ErrorCode::ValidationError => "ValidationError",
            ErrorCode::NoPendingSelection => "NoPendingSelection",
            ErrorCode::NoReadingChosen => "NoReadingChosen",
            ErrorCode::ReadingIndexOutOfRange => "ReadingIndexOutOfRange",
            ErrorCode::InvalidState => "InvalidState",
        }
    }

    pub fn parse(s: &str) -> Option<ErrorCode> {
        ErrorCode::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::UnknownLetter(_) => ErrorCode::UnknownLetter,
            Error::UnknownCodepoint { .. } => ErrorCode::UnknownCodepoint,
            Error::UnencodableInput(_) => ErrorCode::UnencodableInput,
            Error::EmptyInput => ErrorCode::EmptyInput,
            Error::InputTooLong { .. } => ErrorCode::InputTooLong,
            Error::Parse { .. } => ErrorCode::ParseError,
            Error::Validation { .. } => ErrorCode::ValidationError,
            Error::NoPendingSelection => ErrorCode::NoPendingSelection,
            Error::NoReadingChosen => ErrorCode::NoReadingChosen,
            Error::ReadingIndexOutOfRange { .. } => ErrorCode::ReadingIndexOutOfRange,
            Error::InvalidState(_) => ErrorCode::InvalidState,
        }
    }

    pub(crate) fn validation(rule: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            rule: rule.into(),
            reason: reason.into(),
        }
    }
}
