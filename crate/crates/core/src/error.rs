use std::fmt;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::lifecycle::{LegKind, LifecycleError};
use crate::model::{PartyId, TradeId};
use crate::store::{StoreError, Unroutable};

/// Machine-readable error code shared by the HTTP gateway and the C ABI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
#[repr(i32)]
pub enum ErrorCode {
    InvalidRequest = 1,
    InvalidTrade = 2,
    InvalidTransition = 3,
    InvalidSchedule = 4,
    InvalidInterval = 5,
    UnknownParty = 6,
    UnroutableCommand = 7,
    ResetMissing = 8,
    ClockRegression = 9,
    NoClock = 10,
    NotFound = 11,
    DuplicateTrade = 12,
    DuplicateLei = 13,
    PartyInUse = 14,
    ConcurrencyConflict = 15,
    AlreadyReset = 16,
    AlreadyPaid = 17,
    AlreadyExists = 18,
    NothingScheduled = 19,
    Storage = 20,
    Internal = 21,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 21] = [
        Self::InvalidRequest,
        Self::InvalidTrade,
        Self::InvalidTransition,
        Self::InvalidSchedule,
        Self::InvalidInterval,
        Self::UnknownParty,
        Self::UnroutableCommand,
        Self::ResetMissing,
        Self::ClockRegression,
        Self::NoClock,
        Self::NotFound,
        Self::DuplicateTrade,
        Self::DuplicateLei,
        Self::PartyInUse,
        Self::ConcurrencyConflict,
        Self::AlreadyReset,
        Self::AlreadyPaid,
        Self::AlreadyExists,
        Self::NothingScheduled,
        Self::Storage,
        Self::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::InvalidRequest => "INVALID_REQUEST",
            Self::InvalidTrade => "INVALID_TRADE",
            Self::InvalidTransition => "INVALID_TRANSITION",
            Self::InvalidSchedule => "INVALID_SCHEDULE",
            Self::InvalidInterval => "INVALID_INTERVAL",
            Self::UnknownParty => "UNKNOWN_PARTY",
            Self::UnroutableCommand => "UNROUTABLE_COMMAND",
            Self::ResetMissing => "RESET_MISSING",
            Self::ClockRegression => "CLOCK_REGRESSION",
            Self::NoClock => "NO_CLOCK",
            Self::NotFound => "NOT_FOUND",
            Self::DuplicateTrade => "DUPLICATE_TRADE",
            Self::DuplicateLei => "DUPLICATE_LEI",
            Self::PartyInUse => "PARTY_IN_USE",
            Self::ConcurrencyConflict => "CONCURRENCY_CONFLICT",
            Self::AlreadyReset => "ALREADY_RESET",
            Self::AlreadyPaid => "ALREADY_PAID",
            Self::AlreadyExists => "ALREADY_EXISTS",
            Self::NothingScheduled => "NOTHING_SCHEDULED",
            Self::Storage => "STORAGE",
            Self::Internal => "INTERNAL",
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            Self::InvalidRequest
            | Self::InvalidTrade
            | Self::InvalidTransition
            | Self::InvalidSchedule
            | Self::InvalidInterval
            | Self::UnknownParty
            | Self::UnroutableCommand
            | Self::ResetMissing
            | Self::ClockRegression
            | Self::NoClock => 400,
            Self::NotFound => 404,
            Self::DuplicateTrade
            | Self::DuplicateLei
            | Self::PartyInUse
            | Self::ConcurrencyConflict
            | Self::AlreadyReset
            | Self::AlreadyPaid
            | Self::AlreadyExists
            | Self::NothingScheduled => 409,
            Self::Storage | Self::Internal => 500,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid trade: {}", .0.join("; "))]
    InvalidTrade(Vec<String>),
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("invalid schedule")]
    InvalidSchedule,
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("party {0} is not registered")]
    UnknownParty(PartyId),
    #[error("no handler for command type {0}")]
    UnroutableCommand(String),
    #[error("trade {trade_id} has no reset for period {period_index}")]
    ResetMissing { trade_id: TradeId, period_index: u32 },
    #[error("clock cannot move back from {current} to {requested}")]
    ClockRegression { current: NaiveDateTime, requested: NaiveDateTime },
    #[error("no clock has been created for this simulation")]
    NoClock,
    #[error("{0} not found")]
    NotFound(String),
    #[error("trade {0} already exists")]
    DuplicateTrade(TradeId),
    #[error("legal entity id {0} is already registered")]
    DuplicateLei(String),
    #[error("party {0} is referenced by a live trade")]
    PartyInUse(PartyId),
    #[error("concurrency conflict on {aggregate_id}: expected version {expected}, found {actual}")]
    ConcurrencyConflict { aggregate_id: String, expected: u64, actual: u64 },
    #[error("trade {trade_id} period {period_index} has already been reset")]
    AlreadyReset { trade_id: TradeId, period_index: u32 },
    #[error("trade {trade_id} {leg} period {period_index} has already been paid")]
    AlreadyPaid { trade_id: TradeId, leg: LegKind, period_index: u32 },
    #[error("{0} already exists")]
    AlreadyExists(String),
    #[error("no open deadlines are scheduled")]
    NothingScheduled,
    #[error("storage: {0}")]
    Storage(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl SimError {
    pub fn code(&self) -> ErrorCode {
        match self {
            Self::InvalidRequest(_) => ErrorCode::InvalidRequest,
            Self::InvalidTrade(_) => ErrorCode::InvalidTrade,
            Self::InvalidTransition(_) => ErrorCode::InvalidTransition,
            Self::InvalidSchedule => ErrorCode::InvalidSchedule,
            Self::InvalidInterval(_) => ErrorCode::InvalidInterval,
            Self::UnknownParty(_) => ErrorCode::UnknownParty,
            Self::UnroutableCommand(_) => ErrorCode::UnroutableCommand,
            Self::ResetMissing { .. } => ErrorCode::ResetMissing,
            Self::ClockRegression { .. } => ErrorCode::ClockRegression,
            Self::NoClock => ErrorCode::NoClock,
            Self::NotFound(_) => ErrorCode::NotFound,
            Self::DuplicateTrade(_) => ErrorCode::DuplicateTrade,
            Self::DuplicateLei(_) => ErrorCode::DuplicateLei,
            Self::PartyInUse(_) => ErrorCode::PartyInUse,
            Self::ConcurrencyConflict { .. } => ErrorCode::ConcurrencyConflict,
            Self::AlreadyReset { .. } => ErrorCode::AlreadyReset,
            Self::AlreadyPaid { .. } => ErrorCode::AlreadyPaid,
            Self::AlreadyExists(_) => ErrorCode::AlreadyExists,
            Self::NothingScheduled => ErrorCode::NothingScheduled,
            Self::Storage(_) => ErrorCode::Storage,
            Self::Internal(_) => ErrorCode::Internal,
        }
    }

    /// Structured context for clients, when there is any.
    pub fn details(&self) -> Option<serde_json::Value> {
        match self {
            Self::InvalidTrade(violations) => Some(serde_json::json!({ "violations": violations })),
            Self::ConcurrencyConflict { aggregate_id, expected, actual } => Some(serde_json::json!({
                "aggregateId": aggregate_id, "expected": expected, "actual": actual,
            })),
            _ => None,
        }
    }
}

impl From<LifecycleError> for SimError {
    fn from(e: LifecycleError) -> Self {
        match e {
            LifecycleError::InvalidSchedule => Self::InvalidSchedule,
            LifecycleError::InvalidInterval { .. } => Self::InvalidInterval(e.to_string()),
            LifecycleError::InvalidTrade(report) => Self::InvalidTrade(report.messages()),
            LifecycleError::InvalidTransition(msg) => Self::InvalidTransition(msg),
        }
    }
}

impl From<StoreError> for SimError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::ConcurrencyConflict { aggregate_id, expected, actual } => {
                Self::ConcurrencyConflict { aggregate_id, expected, actual }
            }
            other => Self::Storage(other.to_string()),
        }
    }
}

impl From<Unroutable> for SimError {
    fn from(e: Unroutable) -> Self {
        Self::UnroutableCommand(e.0)
    }
}

impl From<serde_json::Error> for SimError {
    fn from(e: serde_json::Error) -> Self {
        Self::InvalidRequest(e.to_string())
    }
}
