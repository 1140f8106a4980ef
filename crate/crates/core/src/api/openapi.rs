use serde_json::{json, Map, Value};

use crate::error::ErrorCode;

fn op(summary: &str, body: Option<&str>, ok: u16, response: &str, errors: &[ErrorCode]) -> Value {
    let mut responses = Map::new();
    let ok_body = if response.is_empty() {
        json!({ "description": "success" })
    } else {
        json!({
            "description": "success",
            "content": { "application/json": { "schema": { "$ref": format!("#/components/schemas/{response}") } } }
        })
    };
    responses.insert(ok.to_string(), ok_body);
    for code in errors {
        let status = code.http_status().to_string();
        let entry = responses.entry(status).or_insert_with(|| {
            json!({
                "description": "",
                "content": { "application/json": { "schema": { "$ref": "#/components/schemas/ApiError" } } }
            })
        });
        let desc = entry["description"].as_str().unwrap_or_default().to_owned();
        entry["description"] = Value::String(if desc.is_empty() {
            code.as_str().to_owned()
        } else {
            format!("{desc}, {}", code.as_str())
        });
    }
    let mut out = json!({ "summary": summary, "responses": responses });
    if let Some(body) = body {
        out["requestBody"] = json!({
            "required": true,
            "content": { "application/json": { "schema": { "$ref": format!("#/components/schemas/{body}") } } }
        });
    }
    out
}

fn id_param(name: &str) -> Value {
    json!([{ "name": name, "in": "path", "required": true, "schema": { "type": "string" } }])
}

/// Endpoint reference for the HTTP gateway.
pub fn openapi() -> Value {
    use ErrorCode::*;
    let mut paths = Map::new();
    paths.insert(
        "/simulation/reset".into(),
        json!({ "post": op("Start a new run, erasing all events. Parties are kept.", Some("ResetRequest"), 200, "ResetResponse", &[InvalidRequest]) }),
    );
    paths.insert(
        "/clock".into(),
        json!({
            "post": op("Create the simulation clock", Some("CreateClockRequest"), 201, "SimulationClock", &[InvalidRequest, AlreadyExists]),
            "get": op("Current simulation time", None, 200, "SimulationClock", &[NoClock]),
        }),
    );
    paths.insert(
        "/clock/advance".into(),
        json!({ "post": op("Advance the clock, firing every deadline due on the way", Some("AdvanceRequest"), 200, "TriggerReport", &[InvalidRequest, NoClock, ClockRegression]) }),
    );
    paths.insert(
        "/clock/forward".into(),
        json!({ "post": op("Advance to the next open deadline", None, 200, "TriggerReport", &[NoClock, NothingScheduled]) }),
    );
    paths.insert(
        "/clock/play".into(),
        json!({ "post": op("Advance until no open deadlines remain", None, 200, "TriggerReport", &[NoClock]) }),
    );
    paths.insert(
        "/parties".into(),
        json!({
            "get": op("List registered parties", None, 200, "PartyList", &[]),
            "post": op("Register a party", Some("PartyRequest"), 201, "Party", &[InvalidRequest, DuplicateLei]),
        }),
    );
    paths.insert(
        "/parties/{id}".into(),
        json!({
            "parameters": id_param("id"),
            "get": op("Fetch one party", None, 200, "Party", &[NotFound]),
            "put": op("Update a party", Some("PartyRequest"), 200, "Party", &[InvalidRequest, NotFound, DuplicateLei]),
            "delete": op("Remove a party not used by a live trade", None, 204, "", &[NotFound, PartyInUse]),
        }),
    );
    paths.insert(
        "/trades".into(),
        json!({
            "get": op("Blotter", None, 200, "Blotter", &[]),
            "post": op("Submit an executed trade", Some("SubmitTradeRequest"), 201, "BlotterRow", &[InvalidTrade, UnknownParty, NoClock, DuplicateTrade]),
        }),
    );
    paths.insert(
        "/trades/{id}".into(),
        json!({ "parameters": id_param("id"), "get": op("One blotter row", None, 200, "BlotterRow", &[NotFound]) }),
    );
    paths.insert(
        "/trades/{id}/consent".into(),
        json!({
            "parameters": id_param("id"),
            "post": op("Confirm or reject an executed trade", Some("ConsentRequest"), 200, "BlotterRow", &[InvalidRequest, InvalidTransition, NoClock, NotFound, ConcurrencyConflict]),
        }),
    );
    paths.insert(
        "/events".into(),
        json!({
            "parameters": [
                { "name": "limit", "in": "query", "required": false, "schema": { "type": "integer", "minimum": 1, "default": 25 } },
                { "name": "cdmOnly", "in": "query", "required": false, "schema": { "type": "boolean", "default": false } }
            ],
            "get": op("Most recent events, newest first", None, 200, "EventStream", &[InvalidRequest]),
        }),
    );
    paths.insert(
        "/deadlines/next".into(),
        json!({ "get": op("Earliest open deadline", None, 200, "NextDeadlineView", &[]) }),
    );

    let date_time = json!({ "type": "string", "format": "date-time", "example": "2024-01-10T09:00:00" });
    let date = json!({ "type": "string", "format": "date", "example": "2024-01-15" });
    let decimal = json!({ "type": "string", "pattern": "^-?[0-9]+(\\.[0-9]+)?$" });
    let leg = json!({ "type": "string", "enum": ["FIXED", "FLOATING"] });
    let schemas = json!({
        "ApiError": {
            "type": "object", "required": ["code", "message"],
            "properties": {
                "code": { "type": "string", "enum": ErrorCode::ALL.iter().map(|c| c.as_str()).collect::<Vec<_>>() },
                "message": { "type": "string" },
                "details": { "type": "object" }
            }
        },
        "ResetRequest": { "type": "object", "properties": { "seed": { "type": "integer", "minimum": 0 } } },
        "ResetResponse": { "type": "object", "required": ["seed"], "properties": { "seed": { "type": "integer" } } },
        "CreateClockRequest": { "type": "object", "required": ["initialTime"], "properties": { "initialTime": date_time } },
        "AdvanceRequest": { "type": "object", "required": ["time"], "properties": { "time": date_time } },
        "SimulationClock": {
            "type": "object", "required": ["clockId", "currentTime"],
            "properties": { "clockId": { "type": "string" }, "currentTime": date_time }
        },
        "Deadline": {
            "type": "object", "required": ["deadlineId", "tradeId", "dueTime", "kind", "periodIndex", "status"],
            "properties": {
                "deadlineId": { "type": "string" }, "tradeId": { "type": "string" }, "dueTime": date_time,
                "kind": { "type": "string", "enum": ["RESET", "FIXED_PAYMENT", "FLOATING_PAYMENT"] },
                "periodIndex": { "type": "integer" },
                "status": { "type": "string", "enum": ["OPEN", "TRIGGERED"] }
            }
        },
        "TriggerReport": {
            "type": "object", "required": ["breachedDeadlines"],
            "properties": { "breachedDeadlines": { "type": "array", "items": { "$ref": "#/components/schemas/Deadline" } } }
        },
        "PartyRequest": {
            "type": "object", "required": ["name"],
            "properties": { "name": { "type": "string", "minLength": 1 }, "legalEntityId": { "type": "string" } }
        },
        "Party": {
            "type": "object", "required": ["partyId", "name", "legalEntityId"],
            "properties": { "partyId": { "type": "string" }, "name": { "type": "string" }, "legalEntityId": { "type": "string" } }
        },
        "PartyList": { "type": "array", "items": { "$ref": "#/components/schemas/Party" } },
        "SubmitTradeRequest": {
            "type": "object", "required": ["trade"],
            "properties": { "trade": { "type": "object", "description": "Trade in the model serialization; see docs/schema.md" } }
        },
        "ConsentRequest": {
            "type": "object", "required": ["decision"],
            "properties": { "decision": { "type": "string", "enum": ["CONFIRM", "REJECT"] } }
        },
        "Cashflow": {
            "type": "object",
            "required": ["date", "legKind", "periodIndex", "amount", "currency", "payer", "receiver", "direction", "settled"],
            "properties": {
                "date": date, "legKind": leg, "periodIndex": { "type": "integer" }, "amount": decimal,
                "currency": { "type": "string" }, "payer": { "type": "string" }, "receiver": { "type": "string" },
                "direction": { "type": "string", "enum": ["PARTY1_TO_PARTY2", "PARTY2_TO_PARTY1"] },
                "settled": { "type": "boolean" }
            }
        },
        "ProjectedCashflow": {
            "type": "object", "required": ["date", "legKind", "periodIndex", "settled"],
            "properties": {
                "date": date, "legKind": leg, "periodIndex": { "type": "integer" },
                "amount": decimal, "settled": { "type": "boolean" }
            }
        },
        "BlotterRow": {
            "type": "object",
            "required": ["tradeId", "counterpartyNames", "productType", "notional", "currency", "effectiveDate",
                         "terminationDate", "status", "openActions", "cashflows", "projectedCashflows"],
            "properties": {
                "tradeId": { "type": "string" },
                "counterpartyNames": { "type": "array", "items": { "type": "string" }, "minItems": 2, "maxItems": 2 },
                "productType": { "type": "string", "enum": ["INTEREST_RATE_SWAP_FIXED_FLOAT", "INTEREST_RATE_BASIS_SWAP", "EQUITY_SWAP", "UNQUALIFIED"] },
                "notional": decimal, "currency": { "type": "string" },
                "fixedRate": decimal, "floatingIndex": { "type": "string" },
                "floatingTenorMonths": { "type": "integer" }, "floatingSpread": decimal,
                "effectiveDate": date, "terminationDate": date,
                "status": { "type": "string", "enum": ["EXECUTED", "CONFIRMED", "REJECTED", "MATURED"] },
                "openActions": { "type": "array", "items": { "type": "string", "enum": ["CONFIRM_EXECUTION"] } },
                "cashflows": { "type": "array", "items": { "$ref": "#/components/schemas/Cashflow" } },
                "projectedCashflows": { "type": "array", "items": { "$ref": "#/components/schemas/ProjectedCashflow" } }
            }
        },
        "Blotter": { "type": "array", "items": { "$ref": "#/components/schemas/BlotterRow" } },
        "EventStreamRow": {
            "type": "object", "required": ["globalSequence", "simulatorEventName", "simulationTime"],
            "properties": {
                "globalSequence": { "type": "integer", "minimum": 1 },
                "simulatorEventName": { "type": "string" },
                "cdmEventType": { "type": "string", "enum": ["EXECUTION", "CONTRACT_FORMATION", "RESET", "CASH_TRANSFER", "UNQUALIFIED"] },
                "simulationTime": date_time
            }
        },
        "EventStream": { "type": "array", "items": { "$ref": "#/components/schemas/EventStreamRow" } },
        "NextDeadlineView": {
            "type": "object",
            "properties": {
                "deadline": {
                    "type": "object", "required": ["deadlineId", "tradeId", "name", "dueTime", "kind", "periodIndex"],
                    "properties": {
                        "deadlineId": { "type": "string" }, "tradeId": { "type": "string" },
                        "name": { "type": "string", "example": "Payment period 2 (Floating)" },
                        "dueTime": date_time,
                        "kind": { "type": "string", "enum": ["RESET", "FIXED_PAYMENT", "FLOATING_PAYMENT"] },
                        "periodIndex": { "type": "integer" }
                    }
                }
            }
        }
    });
    json!({
        "openapi": "3.0.3",
        "info": { "title": "swapsim", "version": env!("CARGO_PKG_VERSION") },
        "paths": paths,
        "components": { "schemas": schemas }
    })
}
