use std::collections::BTreeSet;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

/// A persisted event with its position in the global and per-aggregate order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventEnvelope {
    pub global_sequence: u64,
    pub aggregate_id: String,
    pub aggregate_version: u64,
    pub event_type: String,
    pub simulation_time: NaiveDateTime,
    pub payload: serde_json::Value,
    pub is_cdm_event: bool,
}

/// An event waiting to be appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewEvent {
    pub event_type: String,
    pub payload: serde_json::Value,
    pub is_cdm_event: bool,
}

impl NewEvent {
    pub fn new(event_type: impl Into<String>, payload: serde_json::Value, is_cdm_event: bool) -> Self {
        Self { event_type: event_type.into(), payload, is_cdm_event }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommandEnvelope {
    pub command_id: String,
    pub target_aggregate_id: String,
    pub command_type: String,
    pub payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_version: Option<u64>,
}

/// Which envelopes a reader or subscriber wants. The default matches everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubscriptionFilter {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_types: Option<BTreeSet<String>>,
    #[serde(default)]
    pub cdm_only: bool,
}

impl SubscriptionFilter {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn cdm_only() -> Self {
        Self { event_types: None, cdm_only: true }
    }

    pub fn event_types<I, S>(types: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { event_types: Some(types.into_iter().map(Into::into).collect()), cdm_only: false }
    }

    pub fn matches(&self, envelope: &EventEnvelope) -> bool {
        if self.cdm_only && !envelope.is_cdm_event {
            return false;
        }
        match &self.event_types {
            Some(types) if !types.is_empty() => types.contains(&envelope.event_type),
            _ => true,
        }
    }
}
