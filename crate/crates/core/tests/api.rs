use std::sync::{Arc, Mutex};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use swapsim::api::{self, ApiError};
use swapsim::query::{BlotterRow, EventStreamRow, NextDeadlineView};
use swapsim::scenario::SwapTerms;
use swapsim::{ErrorCode, Simulator};

fn app() -> Router {
    api::app(Arc::new(Mutex::new(Simulator::new())), None).unwrap()
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    use tower::ServiceExt;
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(serde_json::to_vec(&v).unwrap())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

async fn json_call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, bytes) = call(app, method, uri, body).await;
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

fn error_code(v: &Value) -> ErrorCode {
    serde_json::from_value::<ApiError>(v.clone()).unwrap().code
}

async fn setup(app: &Router) -> Value {
    json_call(app, Method::POST, "/clock", Some(json!({ "initialTime": "2024-01-10T09:00:00" }))).await;
    let (_, a) =
        json_call(app, Method::POST, "/parties", Some(json!({ "name": "Bank A", "legalEntityId": "LEI-A" }))).await;
    let (_, b) =
        json_call(app, Method::POST, "/parties", Some(json!({ "name": "Dealer B", "legalEntityId": "LEI-B" }))).await;
    let trade = SwapTerms::standard().to_trade(
        "T1",
        &serde_json::from_value(a["partyId"].clone()).unwrap(),
        &serde_json::from_value(b["partyId"].clone()).unwrap(),
    );
    serde_json::to_value(trade).unwrap()
}

#[tokio::test]
async fn full_lifecycle_over_http() {
    let app = app();
    let trade = setup(&app).await;
    let (status, row) = json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(row["status"], "EXECUTED");
    assert_eq!(row["openActions"], json!(["CONFIRM_EXECUTION"]));
    assert_eq!(row["counterpartyNames"], json!(["Bank A", "Dealer B"]));

    let (status, row) =
        json_call(&app, Method::POST, "/trades/T1/consent", Some(json!({ "decision": "CONFIRM" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(row["status"], "CONFIRMED");
    assert_eq!(row["openActions"], json!([]));

    let (_, next) = json_call(&app, Method::GET, "/deadlines/next", None).await;
    assert_eq!(next["deadline"]["name"], "Reset period 0 (Floating)");
    assert_eq!(next["deadline"]["dueTime"], "2024-01-15T00:00:00");

    let (status, report) = json_call(&app, Method::POST, "/clock/forward", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["breachedDeadlines"].as_array().unwrap().len(), 1);
    let (_, clock) = json_call(&app, Method::GET, "/clock", None).await;
    assert_eq!(clock["currentTime"], "2024-01-15T00:00:00");

    let (status, report) = json_call(&app, Method::POST, "/clock/play", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["breachedDeadlines"].as_array().unwrap().len(), 11);

    let (_, rows) = json_call(&app, Method::GET, "/trades", None).await;
    assert_eq!(rows[0]["status"], "MATURED");
    assert_eq!(rows[0]["cashflows"].as_array().unwrap().len(), 8);
    assert_eq!(rows[0]["cashflows"][0]["amount"], "50555.56");

    let (_, events) = json_call(&app, Method::GET, "/events?cdmOnly=true&limit=100", None).await;
    let events = events.as_array().unwrap();
    assert_eq!(events.len(), 14);
    assert!(events.iter().all(|e| e.get("cdmEventType").is_some()));
    let (_, events) = json_call(&app, Method::GET, "/events", None).await;
    assert_eq!(events.as_array().unwrap().len(), 25);

    let (status, err) = json_call(&app, Method::POST, "/clock/forward", None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(error_code(&err), ErrorCode::NothingScheduled);
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, err) = json_call(&app, Method::GET, "/clock", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::NoClock));

    let trade = setup(&app).await;
    let (status, err) = json_call(&app, Method::POST, "/trades", Some(json!({ "trade": { "tradeId": "T9" } }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidTrade));

    let mut bad = trade.clone();
    bad["tradableProduct"]["product"]["payouts"][0]["notional"] = json!("-5");
    let (status, err) = json_call(&app, Method::POST, "/trades", Some(json!({ "trade": bad }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidTrade));
    assert!(err["details"]["violations"].as_array().unwrap().iter().any(|v| v == "notional must be positive"));

    json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    let (status, err) = json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::CONFLICT, ErrorCode::DuplicateTrade));

    let (status, err) = json_call(&app, Method::GET, "/trades/unknown", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::NOT_FOUND, ErrorCode::NotFound));

    let (status, err) = json_call(&app, Method::POST, "/trades/T1/consent", Some(json!({ "decision": "MAYBE" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidRequest));
    json_call(&app, Method::POST, "/trades/T1/consent", Some(json!({ "decision": "REJECT" }))).await;
    let (status, err) =
        json_call(&app, Method::POST, "/trades/T1/consent", Some(json!({ "decision": "CONFIRM" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidTransition));

    let (status, err) =
        json_call(&app, Method::POST, "/clock/advance", Some(json!({ "time": "2020-01-01T00:00:00" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::ClockRegression));
    let (status, err) =
        json_call(&app, Method::POST, "/clock", Some(json!({ "initialTime": "2024-01-10T09:00:00" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::CONFLICT, ErrorCode::AlreadyExists));

    let (status, err) = json_call(&app, Method::GET, "/events?limit=0", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidRequest));
    let (status, err) = json_call(&app, Method::GET, "/events?limit=abc", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidRequest));

    let (status, err) = json_call(&app, Method::GET, "/nowhere", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::NOT_FOUND, ErrorCode::NotFound));
}

#[tokio::test]
async fn party_crud() {
    let app = app();
    let (status, a) =
        json_call(&app, Method::POST, "/parties", Some(json!({ "name": "Bank A", "legalEntityId": "L1" }))).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = a["partyId"].as_str().unwrap().to_owned();
    let (status, err) =
        json_call(&app, Method::POST, "/parties", Some(json!({ "name": "Other", "legalEntityId": "L1" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::CONFLICT, ErrorCode::DuplicateLei));
    let (status, err) = json_call(&app, Method::POST, "/parties", Some(json!({ "name": "" }))).await;
    assert_eq!((status, error_code(&err)), (StatusCode::BAD_REQUEST, ErrorCode::InvalidRequest));

    let uri = format!("/parties/{id}");
    let (status, updated) =
        json_call(&app, Method::PUT, &uri, Some(json!({ "name": "Bank A plc", "legalEntityId": "L1" }))).await;
    assert_eq!(status, StatusCode::OK);
    let (_, fetched) = json_call(&app, Method::GET, &uri, None).await;
    assert_eq!(fetched, updated);
    assert_eq!(fetched["name"], "Bank A plc");
    let (_, list) = json_call(&app, Method::GET, "/parties", None).await;
    assert_eq!(list, json!([fetched]));

    let (status, _) = call(&app, Method::DELETE, &uri, None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = json_call(&app, Method::GET, &uri, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn in_use_party_delete_conflicts() {
    let app = app();
    let trade = setup(&app).await;
    json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    let (status, err) = json_call(&app, Method::DELETE, "/parties/party-1", None).await;
    assert_eq!((status, error_code(&err)), (StatusCode::CONFLICT, ErrorCode::PartyInUse));
}

#[tokio::test]
async fn reset_keeps_parties() {
    let app = app();
    let trade = setup(&app).await;
    json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    let (status, body) = json_call(&app, Method::POST, "/simulation/reset", Some(json!({ "seed": 9 }))).await;
    assert_eq!((status, body), (StatusCode::OK, json!({ "seed": 9 })));
    let (_, rows) = json_call(&app, Method::GET, "/trades", None).await;
    assert_eq!(rows, json!([]));
    let (_, parties) = json_call(&app, Method::GET, "/parties", None).await;
    assert_eq!(parties.as_array().unwrap().len(), 2);
    let (status, body) = json_call(&app, Method::POST, "/simulation/reset", None).await;
    assert_eq!((status, body), (StatusCode::OK, json!({ "seed": 42 })));
    let (_, next) = json_call(&app, Method::GET, "/deadlines/next", None).await;
    assert_eq!(next, json!({}));
}

fn canonical<T: serde::de::DeserializeOwned + serde::Serialize>(bytes: &[u8]) {
    let parsed: T = serde_json::from_slice(bytes).unwrap();
    assert_eq!(serde_json::to_vec(&parsed).unwrap(), bytes, "{}", String::from_utf8_lossy(bytes));
}

#[tokio::test]
async fn responses_round_trip() {
    let app = app();
    let trade = setup(&app).await;
    json_call(&app, Method::POST, "/trades", Some(json!({ "trade": trade }))).await;
    json_call(&app, Method::POST, "/trades/T1/consent", Some(json!({ "decision": "CONFIRM" }))).await;
    json_call(&app, Method::POST, "/clock/forward", None).await;
    json_call(&app, Method::POST, "/clock/forward", None).await;

    let (_, bytes) = call(&app, Method::GET, "/trades", None).await;
    canonical::<Vec<BlotterRow>>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/trades/T1", None).await;
    canonical::<BlotterRow>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/events?limit=100", None).await;
    canonical::<Vec<EventStreamRow>>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/deadlines/next", None).await;
    canonical::<NextDeadlineView>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/clock", None).await;
    canonical::<swapsim::harness::SimulationClock>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/parties", None).await;
    canonical::<Vec<swapsim::model::Party>>(&bytes);
    let (_, bytes) = call(&app, Method::POST, "/clock/forward", None).await;
    canonical::<swapsim::harness::TriggerReport>(&bytes);
    let (_, bytes) = call(&app, Method::GET, "/trades/zzz", None).await;
    canonical::<ApiError>(&bytes);
}

#[tokio::test]
async fn cors_preflight() {
    let app = app();
    use tower::ServiceExt;
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/trades")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");

    let strict = api::app(Arc::new(Mutex::new(Simulator::new())), Some("http://ui.local")).unwrap();
    let req = Request::builder().uri("/trades").header("origin", "http://ui.local").body(Body::empty()).unwrap();
    let resp = strict.oneshot(req).await.unwrap();
    assert_eq!(resp.headers()["access-control-allow-origin"], "http://ui.local");
}

#[tokio::test]
async fn openapi_lists_every_route() {
    let app = app();
    let (status, doc) = json_call(&app, Method::GET, "/openapi.json", None).await;
    assert_eq!(status, StatusCode::OK);
    let paths = doc["paths"].as_object().unwrap();
    for p in [
        "/simulation/reset",
        "/clock",
        "/clock/advance",
        "/clock/forward",
        "/clock/play",
        "/parties",
        "/parties/{id}",
        "/trades",
        "/trades/{id}",
        "/trades/{id}/consent",
        "/events",
        "/deadlines/next",
    ] {
        assert!(paths.contains_key(p), "{p}");
    }
}

#[test]
fn openapi_doc_is_current() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/openapi.json");
    let on_disk = std::fs::read_to_string(&path).expect("docs/openapi.json exists; regenerate with `swapsim openapi`");
    let current = serde_json::to_string_pretty(&api::openapi()).unwrap() + "\n";
    assert_eq!(on_disk, current, "docs/openapi.json is stale; regenerate with `swapsim openapi`");
}
