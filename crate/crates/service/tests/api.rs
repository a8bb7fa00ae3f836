use std::collections::BTreeSet;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use jawi_core::{Error, ErrorCode, RuleTable};
use jawi_service::{router, ApiError, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(
        Arc::new(RuleTable::default_table().clone()),
        &ServiceConfig::default(),
    )
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, bytes.to_vec())
}

async fn get(path: &str) -> (StatusCode, Value) {
    let req = Request::get(path).body(Body::empty()).unwrap();
    let (status, bytes) = send(app(), req).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn post_req(path: &str, body: &str) -> Request<Body> {
    Request::post(path)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.to_string()))
        .unwrap()
}

async fn post(path: &str, body: Value) -> (StatusCode, Value) {
    let (status, bytes) = send(app(), post_req(path, &body.to_string())).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::test]
async fn health() {
    let (status, body) = get("/api/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({ "ok": true }));
}

#[tokio::test]
async fn letters_inventory() {
    let (status, body) = get("/api/letters").await;
    assert_eq!(status, StatusCode::OK);
    let rows = body.as_array().unwrap();
    assert_eq!(rows.len(), RuleTable::default_table().letters.len());
    assert_eq!(rows.len(), 33);
    let ra = rows.iter().find(|r| r["id"] == "ra").unwrap();
    assert_eq!(ra["joins_left"], false);
    assert_eq!(ra["letter"], "ر");
    assert_eq!(
        ra["forms"],
        json!({"isolated": true, "initial": false, "medial": false, "final": true})
    );
    let ba = rows.iter().find(|r| r["id"] == "ba").unwrap();
    assert_eq!(ba["joins_left"], true);
    assert_eq!(ba["forms"]["medial"], true);
    let vowels = rows
        .iter()
        .filter(|r| r["category"] == "vowel_carrier")
        .count();
    assert_eq!(vowels, 3);

    let (_, again) = get("/api/letters").await;
    assert_eq!(body, again);
}

#[tokio::test]
async fn transliterate_to_jawi() {
    let (status, body) = post(
        "/api/transliterate",
        json!({"direction": "to-jawi", "word": "satu"}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["jawi"], "ساتو");
    assert_eq!(
        body["forms"],
        json!(["initial", "final", "initial", "final"])
    );

    let (_, trad) = post(
        "/api/transliterate",
        json!({"direction": "to-jawi", "word": "makan", "mode": "traditional"}),
    )
    .await;
    assert_eq!(trad["jawi"], "مکن");
}

#[tokio::test]
async fn transliterate_to_latin() {
    let (status, body) = post(
        "/api/transliterate",
        json!({"direction": "to-latin", "word": "ساتو", "limit": 3}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let candidates = body["candidates"].as_array().unwrap();
    assert!(candidates.len() <= 3);
    assert!(candidates.iter().any(|c| c["latin"] == "satu"));
    assert_eq!(candidates[0]["latin"], "satu");
    assert_eq!(candidates[0]["score"], 1.0);
    assert!(candidates[0]["trace"].as_array().unwrap().len() >= 4);
}

async fn expect_error(path: &str, body: &str) -> ApiError {
    let (status, bytes) = send(app(), post_req(path, body)).await;
    assert_eq!(
        status,
        StatusCode::BAD_REQUEST,
        "{}",
        String::from_utf8_lossy(&bytes)
    );
    serde_json::from_slice(&bytes).unwrap()
}

#[tokio::test]
async fn transliterate_errors() {
    let empty = expect_error("/api/transliterate", r#"{"direction":"to-jawi","word":""}"#).await;
    assert_eq!(empty.code, "EmptyInput");
    let bad = expect_error(
        "/api/transliterate",
        r#"{"direction":"to-jawi","word":"ba1"}"#,
    )
    .await;
    assert_eq!(bad.code, "UnencodableInput");
    assert_eq!(bad.detail, Some(json!({"position": 2})));
    let cp = expect_error(
        "/api/transliterate",
        r#"{"direction":"to-latin","word":"باxو"}"#,
    )
    .await;
    assert_eq!(cp.code, "UnknownCodepoint");
    let malformed = expect_error(
        "/api/transliterate",
        r#"{"direction":"sideways","word":"a"}"#,
    )
    .await;
    assert_eq!(malformed.code, "ParseError");
    let not_json = expect_error("/api/transliterate", "batu").await;
    assert_eq!(not_json.code, "ParseError");
}

fn batu_script() -> Vec<Value> {
    let mut events = Vec::new();
    for (letter, reading, filter) in [
        ("ba", 0, "initial"),
        ("alif", 0, "final"),
        ("ta", 0, "initial"),
        ("waw", 0, "final"),
    ] {
        events.push(json!({"type": "SetFilter", "filter": filter}));
        events.push(json!({"type": "PickLetter", "letter": letter}));
        events.push(json!({"type": "PickReading", "index": reading}));
        events.push(json!({"type": "Process"}));
    }
    events
}

async fn step(state: Value, event: Value) -> (StatusCode, Value) {
    post(
        "/api/composer/step",
        json!({"state": state, "event": event}),
    )
    .await
}

#[tokio::test]
async fn composer_fresh_new_word() {
    let (status, body) = step(json!({}), json!({"type": "NewWord"})).await;
    assert_eq!(status, StatusCode::OK);
    let (_, fresh) = step(json!({}), json!({"type": "Undo"})).await;
    assert_eq!(body["state"], fresh["state"]);
    assert_eq!(body["state"]["committed"], json!([]));
    assert_eq!(body["render"]["jawi"], "");
}

#[tokio::test]
async fn composer_batu_script() {
    let mut state = json!({});
    let mut last = Value::Null;
    for event in batu_script() {
        let (status, body) = step(state, event).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        state = body["state"].clone();
        last = body;
    }
    assert_eq!(last["render"]["jawi"], "باتو");
    assert_eq!(last["render"]["latin"], "batu");
    assert_eq!(last["consistency"], json!([]));

    let (_, undone) = step(state.clone(), json!({"type": "Undo"})).await;
    assert_eq!(undone["render"]["jawi"], "بات");
    assert_eq!(undone["render"]["latin"], "bat");
}

#[tokio::test]
async fn composer_reports_filter_mismatch() {
    let mut state = json!({});
    for event in [
        json!({"type": "SetFilter", "filter": "final"}),
        json!({"type": "PickLetter", "letter": "ba"}),
        json!({"type": "PickReading", "index": 0}),
        json!({"type": "Process"}),
    ] {
        state = step(state, event).await.1["state"].clone();
    }
    let (_, body) = step(state, json!({"type": "SetFilter", "filter": "initial"})).await;
    assert_eq!(
        body["consistency"],
        json!([{"index": 0, "chosen": "final", "actual": "isolated"}])
    );
}

#[tokio::test]
async fn composer_errors() {
    let no_pending = expect_error(
        "/api/composer/step",
        r#"{"state":{},"event":{"type":"Process"}}"#,
    )
    .await;
    assert_eq!(no_pending.code, "NoPendingSelection");

    let bad_state = expect_error(
        "/api/composer/step",
        r#"{"state":{"committed":[{"letter":"ba","reading":"zz","filter":"initial"}]},"event":{"type":"Undo"}}"#,
    )
    .await;
    assert_eq!(bad_state.code, "InvalidState");

    let bad_event = expect_error(
        "/api/composer/step",
        r#"{"state":{},"event":{"type":"Explode"}}"#,
    )
    .await;
    assert_eq!(bad_event.code, "ParseError");
}

#[tokio::test]
async fn responses_are_pure_functions_of_the_request() {
    let bodies = [
        (
            "/api/transliterate",
            r#"{"direction":"to-latin","word":"باتو"}"#,
        ),
        (
            "/api/transliterate",
            r#"{"direction":"to-jawi","word":"wayang"}"#,
        ),
        ("/api/transliterate", r#"{"direction":"to-jawi","word":""}"#),
        (
            "/api/composer/step",
            r#"{"state":{},"event":{"type":"PickLetter","letter":"alif"}}"#,
        ),
    ];
    for (path, body) in bodies {
        let a = send(app(), post_req(path, body)).await;
        let shared = app();
        let b = send(shared.clone(), post_req(path, body)).await;
        let c = send(shared, post_req(path, body)).await;
        assert_eq!(a, b);
        assert_eq!(b, c);
    }
}

/// Provokes one engine error per variant through the service boundary and
/// checks that the codes are distinct and cover the documented set.
#[tokio::test]
async fn error_codes_biject_with_engine_errors() {
    let cases: Vec<(&str, String, Error)> = vec![
        (
            "/api/composer/step",
            json!({"state": {}, "event": {"type": "PickLetter", "letter": "nope"}}).to_string(),
            Error::UnknownLetter("nope".into()),
        ),
        (
            "/api/transliterate",
            json!({"direction": "to-latin", "word": "A"}).to_string(),
            Error::UnknownCodepoint { position: 0, codepoint: 'A' as u32 },
        ),
        (
            "/api/transliterate",
            json!({"direction": "to-jawi", "word": "b-"}).to_string(),
            Error::UnencodableInput(1),
        ),
        (
            "/api/transliterate",
            json!({"direction": "to-jawi", "word": "  "}).to_string(),
            Error::EmptyInput,
        ),
        (
            "/api/transliterate",
            json!({"direction": "to-latin", "word": "ب".repeat(65)}).to_string(),
            Error::InputTooLong { len: 65, max: 64 },
        ),
        (
            "/api/transliterate",
            "{".to_string(),
            Error::Parse { location: String::new(), message: String::new() },
        ),
        (
            "/api/transliterate",
            json!({"direction": "to-latin", "word": "با", "limit": 0}).to_string(),
            Error::Validation { rule: String::new(), reason: String::new() },
        ),
        (
            "/api/composer/step",
            json!({"state": {}, "event": {"type": "PickReading", "index": 0}}).to_string(),
            Error::NoPendingSelection,
        ),
        (
            "/api/composer/step",
            json!({"state": {"pending": {"letter": "ba", "form": "isolated", "offered": ["b"]}}, "event": {"type": "Process"}}).to_string(),
            Error::NoReadingChosen,
        ),
        (
            "/api/composer/step",
            json!({"state": {"pending": {"letter": "ba", "form": "isolated", "offered": ["b"]}}, "event": {"type": "PickReading", "index": 3}}).to_string(),
            Error::ReadingIndexOutOfRange { index: 3, available: 1 },
        ),
        (
            "/api/composer/step",
            json!({"state": {"history_depth": 1}, "event": {"type": "Undo"}}).to_string(),
            Error::InvalidState(String::new()),
        ),
    ];
    let mut seen = BTreeSet::new();
    for (path, body, expected) in cases {
        let err = expect_error(path, &body).await;
        assert_eq!(
            err.error_code(),
            Some(expected.code()),
            "{path} {body}: {err:?}"
        );
        assert!(seen.insert(err.code.clone()), "duplicate code {}", err.code);
    }
    let all: BTreeSet<String> = ErrorCode::ALL
        .iter()
        .map(|c| c.as_str().to_string())
        .collect();
    assert_eq!(seen, all);
}

#[tokio::test]
async fn cors_open_by_default() {
    let req = Request::get("/api/health")
        .header(header::ORIGIN, "http://example.test")
        .body(Body::empty())
        .unwrap();
    let resp = app().oneshot(req).await.unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

#[tokio::test]
async fn cors_allowlist() {
    let config = ServiceConfig {
        cors_origins: vec!["http://allowed.test".into()],
        static_dir: None,
    };
    let app = router(Arc::new(RuleTable::default_table().clone()), &config);
    let preflight = |origin: &str| {
        Request::builder()
            .method(Method::OPTIONS)
            .uri("/api/transliterate")
            .header(header::ORIGIN, origin)
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let ok = app
        .clone()
        .oneshot(preflight("http://allowed.test"))
        .await
        .unwrap();
    assert_eq!(
        ok.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://allowed.test"
    );
    let denied = app.oneshot(preflight("http://other.test")).await.unwrap();
    assert!(denied
        .headers()
        .get(header::ACCESS_CONTROL_ALLOW_ORIGIN)
        .is_none());
}

#[tokio::test]
async fn static_files() {
    let dir = std::env::temp_dir().join(format!("jawi-static-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<h1>jawi</h1>").unwrap();
    let config = ServiceConfig {
        cors_origins: Vec::new(),
        static_dir: Some(dir.clone()),
    };
    let app = router(Arc::new(RuleTable::default_table().clone()), &config);
    let (status, body) = send(
        app.clone(),
        Request::get("/index.html").body(Body::empty()).unwrap(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<h1>jawi</h1>");
    let (root, _) = send(app.clone(), Request::get("/").body(Body::empty()).unwrap()).await;
    assert_eq!(root, StatusCode::OK);
    let (api, _) = send(
        app,
        Request::get("/api/health").body(Body::empty()).unwrap(),
    )
    .await;
    assert_eq!(api, StatusCode::OK);
    std::fs::remove_dir_all(dir).unwrap();
}

#[tokio::test]
async fn long_words_and_limits() {
    let (status, body) = post(
        "/api/transliterate",
        json!({"direction": "to-latin", "word": "ق".repeat(64), "limit": 100}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["candidates"].as_array().unwrap().len(), 100);
    let too_many = expect_error(
        "/api/transliterate",
        r#"{"direction":"to-latin","word":"با","limit":101}"#,
    )
    .await;
    assert_eq!(too_many.code, "ValidationError");
    let long = expect_error(
        "/api/transliterate",
        &json!({"direction": "to-jawi", "word": "a".repeat(65)}).to_string(),
    )
    .await;
    assert_eq!(long.code, "InputTooLong");
    assert_eq!(long.detail, Some(json!({"len": 65, "max": 64})));
}

#[tokio::test]
async fn unknown_route_is_404() {
    let req = Request::get("/api/nothing").body(Body::empty()).unwrap();
    let (status, _) = send(app(), req).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
