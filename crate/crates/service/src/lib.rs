//! Stateless HTTP/JSON API over the transliteration engine.
//!
//! Every response depends only on the request body and the loaded rule table.
//! Composer state travels with each request, so the server keeps no sessions.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use jawi_core::{
    default_corpus, jawi_to_latin, latin_to_jawi_mode, letter_inventory, ComposerEvent,
    ComposerState, Error, ErrorCode, FilterMismatch, LetterInfo, PositionalForm, ReadingCandidate,
    Rendered, RuleTable, SpellingMode,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8808;
pub const DEFAULT_LIMIT: usize = 5;
/// Longest word, in characters, a request may carry.
pub const MAX_WORD_LETTERS: usize = 64;
/// Largest candidate limit a request may ask for.
pub const MAX_LIMIT: usize = 100;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Allowed CORS origins. Empty means any origin.
    pub cors_origins: Vec<String>,
    /// Directory served for every path outside `/api`.
    pub static_dir: Option<PathBuf>,
}

struct AppState {
    table: Arc<RuleTable>,
    letters: Vec<LetterInfo>,
}

/// Error body returned with status 400. `code` is always one of
/// [`ErrorCode::ALL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let detail = match &err {
            Error::UnknownLetter(letter) => Some(json!({ "letter": letter })),
            Error::UnknownCodepoint {
                position,
                codepoint,
            } => Some(json!({ "position": position, "codepoint": format!("U+{codepoint:04X}") })),
            Error::UnencodableInput(position) => Some(json!({ "position": position })),
            Error::InputTooLong { len, max } => Some(json!({ "len": len, "max": max })),
            Error::Parse { location, .. } => Some(json!({ "location": location })),
            Error::Validation { rule, .. } => Some(json!({ "rule": rule })),
            Error::ReadingIndexOutOfRange { index, available } => {
                Some(json!({ "index": index, "available": available }))
            }
            Error::EmptyInput
            | Error::NoPendingSelection
            | Error::NoReadingChosen
            | Error::InvalidState(_) => None,
        };
        ApiError {
            code: err.code().as_str().to_string(),
            message: err.to_string(),
            detail,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (StatusCode::BAD_REQUEST, Json(self)).into_response()
    }
}

impl ApiError {
    pub fn error_code(&self) -> Option<ErrorCode> {
        ErrorCode::parse(&self.code)
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let location = e.path().to_string();
        ApiError::from(Error::Parse {
            location,
            message: e.into_inner().to_string(),
        })
    })
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ToJawi,
    ToLatin,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransliterateRequest {
    direction: Direction,
    word: String,
    #[serde(default)]
    mode: Option<SpellingMode>,
    #[serde(default)]
    limit: Option<usize>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum TransliterateResponse {
    Jawi {
        jawi: String,
        letters: Vec<String>,
        forms: Vec<PositionalForm>,
    },
    Latin {
        candidates: Vec<ReadingCandidate>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRequest {
    #[serde(default)]
    state: Option<Value>,
    event: ComposerEvent,
}

#[derive(Debug, Serialize)]
struct StepResponse {
    state: Value,
    render: Rendered,
    consistency: Vec<FilterMismatch>,
}

async fn health() -> Json<Value> {
    Json(json!({ "ok": true }))
}

async fn letters(State(app): State<Arc<AppState>>) -> Json<Vec<LetterInfo>> {
    Json(app.letters.clone())
}

async fn transliterate(
    State(app): State<Arc<AppState>>,
    body: Bytes,
) -> ApiResult<TransliterateResponse> {
    let req: TransliterateRequest = parse_body(&body)?;
    let word = req.word.trim();
    let len = word.chars().count();
    if len > MAX_WORD_LETTERS {
        return Err(Error::InputTooLong {
            len,
            max: MAX_WORD_LETTERS,
        }
        .into());
    }
    let limit = req.limit.unwrap_or(DEFAULT_LIMIT);
    if limit > MAX_LIMIT {
        return Err(ApiError {
            code: ErrorCode::ValidationError.as_str().to_string(),
            message: format!("limit must be at most {MAX_LIMIT}"),
            detail: Some(json!({ "rule": "limit" })),
        });
    }
    let response = match req.direction {
        Direction::ToJawi => {
            let mode = req.mode.unwrap_or(app.table.spelling_mode);
            let shaped = latin_to_jawi_mode(&word.to_lowercase(), &app.table, mode)?;
            TransliterateResponse::Jawi {
                jawi: shaped.render_logical().to_string(),
                letters: shaped.letters().to_vec(),
                forms: shaped.forms().to_vec(),
            }
        }
        Direction::ToLatin => TransliterateResponse::Latin {
            candidates: jawi_to_latin(word, &app.table, limit)?,
        },
    };
    Ok(Json(response))
}

async fn composer_step(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<StepResponse> {
    let req: StepRequest = parse_body(&body)?;
    let state = match req.state {
        None => ComposerState::new(),
        Some(value) => ComposerState::from_json(&value.to_string(), &app.table)?,
    };
    let next = state.apply(&req.event, &app.table)?;
    let render = next.render(&app.table)?;
    let consistency = next.check_filter_consistency(&app.table)?;
    let state = serde_json::to_value(&next).expect("composer state serializes");
    Ok(Json(StepResponse {
        state,
        render,
        consistency,
    }))
}

fn cors_layer(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    if origins.is_empty() {
        layer.allow_origin(Any)
    } else {
        let list: Vec<HeaderValue> = origins
            .iter()
            .filter_map(|o| HeaderValue::from_str(o).ok())
            .collect();
        layer.allow_origin(AllowOrigin::list(list))
    }
}

/// Builds the application router around a shared, read-only rule table.
pub fn router(table: Arc<RuleTable>, config: &ServiceConfig) -> Router {
    let inventory = letter_inventory(&table, &default_corpus());
    let app = Arc::new(AppState {
        table,
        letters: inventory,
    });
    let mut router = Router::new()
        .route("/api/health", get(health))
        .route("/api/letters", get(letters))
        .route("/api/transliterate", post(transliterate))
        .route("/api/composer/step", post(composer_step))
        .with_state(app);
    if let Some(dir) = &config.static_dir {
        router = router.fallback_service(ServeDir::new(dir));
    }
    router.layer(cors_layer(&config.cors_origins))
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, router: Router) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router).await
}
