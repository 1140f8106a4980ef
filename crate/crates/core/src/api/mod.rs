//! HTTP/JSON gateway. Handlers only translate between requests and
//! simulator calls.

mod openapi;

use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDateTime;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

pub use openapi::openapi;

use crate::error::{ErrorCode, SimError};
use crate::fmi::ConsentDecision;
use crate::model::{PartyId, Trade, TradeId};
use crate::query::DEFAULT_STREAM_LIMIT;
use crate::sim::Simulator;

pub type SharedSimulator = Arc<Mutex<Simulator>>;

/// Error body returned with every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl From<SimError> for ApiError {
    fn from(e: SimError) -> Self {
        Self { code: e.code(), message: e.to_string(), details: e.details() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.code.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn lock(sim: &SharedSimulator) -> MutexGuard<'_, Simulator> {
    // a panic inside a handler must not take the whole gateway down
    sim.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn parse<T: DeserializeOwned>(body: &Bytes, code: ErrorCode) -> ApiResult<T> {
    let bytes: &[u8] = if body.is_empty() { b"{}" } else { body };
    serde_json::from_slice(bytes).map_err(|e| ApiError {
        code,
        message: format!("malformed request body: {e}"),
        details: None,
    })
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ResetBody {
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResetResponse {
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CreateClockBody {
    initial_time: NaiveDateTime,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct AdvanceBody {
    time: NaiveDateTime,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PartyBody {
    name: String,
    #[serde(default)]
    legal_entity_id: String,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SubmitBody {
    trade: Trade,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ConsentBody {
    decision: ConsentDecision,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct EventsQuery {
    limit: Option<usize>,
    #[serde(default)]
    cdm_only: bool,
}

async fn reset(State(sim): State<SharedSimulator>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let body: ResetBody = parse(&body, ErrorCode::InvalidRequest)?;
    let mut sim = lock(&sim);
    sim.reset(body.seed)?;
    Ok(Json(ResetResponse { seed: sim.seed() }))
}

async fn create_clock(State(sim): State<SharedSimulator>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let body: CreateClockBody = parse(&body, ErrorCode::InvalidRequest)?;
    let clock = lock(&sim).create_clock(body.initial_time)?;
    Ok((StatusCode::CREATED, Json(clock)))
}

async fn get_clock(State(sim): State<SharedSimulator>) -> ApiResult<impl IntoResponse> {
    Ok(Json(lock(&sim).clock()?))
}

async fn advance(State(sim): State<SharedSimulator>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let body: AdvanceBody = parse(&body, ErrorCode::InvalidRequest)?;
    Ok(Json(lock(&sim).advance_to(body.time)?))
}

async fn forward(State(sim): State<SharedSimulator>) -> ApiResult<impl IntoResponse> {
    Ok(Json(lock(&sim).advance_to_next_deadline()?))
}

async fn play(State(sim): State<SharedSimulator>) -> ApiResult<impl IntoResponse> {
    Ok(Json(lock(&sim).play()?))
}

async fn list_parties(State(sim): State<SharedSimulator>) -> impl IntoResponse {
    Json(lock(&sim).parties())
}

async fn create_party(State(sim): State<SharedSimulator>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let body: PartyBody = parse(&body, ErrorCode::InvalidRequest)?;
    let party = lock(&sim).create_party(&body.name, &body.legal_entity_id)?;
    Ok((StatusCode::CREATED, Json(party)))
}

async fn get_party(State(sim): State<SharedSimulator>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(lock(&sim).party(&PartyId(id))?))
}

async fn update_party(
    State(sim): State<SharedSimulator>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let body: PartyBody = parse(&body, ErrorCode::InvalidRequest)?;
    Ok(Json(lock(&sim).update_party(&PartyId(id), &body.name, &body.legal_entity_id)?))
}

async fn delete_party(State(sim): State<SharedSimulator>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    lock(&sim).delete_party(&PartyId(id))?;
    Ok(StatusCode::NO_CONTENT)
}

async fn submit_trade(State(sim): State<SharedSimulator>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let body: SubmitBody = parse(&body, ErrorCode::InvalidTrade)?;
    let trade_id = body.trade.trade_id.clone();
    let mut sim = lock(&sim);
    sim.submit_trade(body.trade)?;
    Ok((StatusCode::CREATED, Json(sim.trade(&trade_id)?)))
}

async fn list_trades(State(sim): State<SharedSimulator>) -> impl IntoResponse {
    Json(lock(&sim).blotter())
}

async fn get_trade(State(sim): State<SharedSimulator>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(lock(&sim).trade(&TradeId(id))?))
}

async fn consent(
    State(sim): State<SharedSimulator>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let body: ConsentBody = parse(&body, ErrorCode::InvalidRequest)?;
    let trade_id = TradeId(id);
    let mut sim = lock(&sim);
    sim.consent(&trade_id, body.decision)?;
    Ok(Json(sim.trade(&trade_id)?))
}

async fn events(
    State(sim): State<SharedSimulator>,
    query: Result<Query<EventsQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<impl IntoResponse> {
    let Query(q) =
        query.map_err(|e| ApiError { code: ErrorCode::InvalidRequest, message: e.body_text(), details: None })?;
    let limit = q.limit.unwrap_or(DEFAULT_STREAM_LIMIT);
    if limit == 0 {
        return Err(SimError::InvalidRequest("limit must be at least 1".into()).into());
    }
    Ok(Json(lock(&sim).event_stream(limit, q.cdm_only)))
}

async fn next_deadline(State(sim): State<SharedSimulator>) -> impl IntoResponse {
    Json(lock(&sim).next_deadline())
}

async fn openapi_doc() -> impl IntoResponse {
    Json(openapi())
}

async fn fallback() -> ApiError {
    SimError::NotFound("route".into()).into()
}

/// The gateway's routes over a shared simulator, without CORS.
pub fn router(sim: SharedSimulator) -> Router {
    Router::new()
        .route("/simulation/reset", post(reset))
        .route("/clock", post(create_clock).get(get_clock))
        .route("/clock/advance", post(advance))
        .route("/clock/forward", post(forward))
        .route("/clock/play", post(play))
        .route("/parties", get(list_parties).post(create_party))
        .route("/parties/{id}", get(get_party).put(update_party).delete(delete_party))
        .route("/trades", get(list_trades).post(submit_trade))
        .route("/trades/{id}", get(get_trade))
        .route("/trades/{id}/consent", post(consent))
        .route("/events", get(events))
        .route("/deadlines/next", get(next_deadline))
        .route("/openapi.json", get(openapi_doc))
        .fallback(fallback)
        .with_state(sim)
}

/// The router with CORS for the UI. With no origin given any origin is allowed.
pub fn app(sim: SharedSimulator, cors_origin: Option<&str>) -> Result<Router, SimError> {
    let origin = match cors_origin {
        Some(o) => AllowOrigin::exact(
            HeaderValue::from_str(o).map_err(|e| SimError::InvalidRequest(format!("bad CORS origin: {e}")))?,
        ),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new().allow_origin(origin).allow_methods(Any).allow_headers(Any);
    Ok(router(sim).layer(cors))
}
