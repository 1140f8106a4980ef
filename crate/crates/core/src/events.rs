//! Every event the simulator appends to the store, with its wire encoding:
//! the envelope's `eventType` is the variant name and the payload is the
//! variant's fields.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::ErrorCode;
use crate::lifecycle::{Deadline, DeadlineId, DeadlineKind, LegKind};
use crate::model::{BusinessEvent, BusinessEventType, Party, TradeId, Transfer, TransferId};
use crate::store::{EventEnvelope, NewEvent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all_fields = "camelCase")]
pub enum SimEvent {
    ClockCreated {
        clock_id: String,
        initial_time: NaiveDateTime,
    },
    ClockAdvanced {
        clock_id: String,
        from: NaiveDateTime,
        to: NaiveDateTime,
    },
    ExecutionOccurred {
        trade_id: TradeId,
        business_event: BusinessEvent,
        parties: Vec<Party>,
    },
    TradeConfirmed {
        trade_id: TradeId,
        business_event: BusinessEvent,
    },
    TradeRejected {
        trade_id: TradeId,
    },
    DeadlineScheduled {
        deadline: Deadline,
    },
    DeadlineBreached {
        deadline: Deadline,
    },
    DeadlineCancelled {
        deadline_id: DeadlineId,
        trade_id: TradeId,
    },
    RateReset {
        trade_id: TradeId,
        period_index: u32,
        business_event: BusinessEvent,
    },
    PaymentInstructed {
        trade_id: TradeId,
        leg_kind: LegKind,
        period_index: u32,
        transfer: Transfer,
    },
    PaymentSettled {
        transfer_id: TransferId,
    },
    CashTransferred {
        trade_id: TradeId,
        leg_kind: LegKind,
        period_index: u32,
        business_event: BusinessEvent,
    },
    TradeMatured {
        trade_id: TradeId,
    },
    FailedLifecycleAction {
        deadline_id: DeadlineId,
        trade_id: TradeId,
        kind: DeadlineKind,
        period_index: u32,
        code: ErrorCode,
        reason: String,
    },
}

impl SimEvent {
    pub fn event_type(&self) -> &'static str {
        match self {
            Self::ClockCreated { .. } => "ClockCreated",
            Self::ClockAdvanced { .. } => "ClockAdvanced",
            Self::ExecutionOccurred { .. } => "ExecutionOccurred",
            Self::TradeConfirmed { .. } => "TradeConfirmed",
            Self::TradeRejected { .. } => "TradeRejected",
            Self::DeadlineScheduled { .. } => "DeadlineScheduled",
            Self::DeadlineBreached { .. } => "DeadlineBreached",
            Self::DeadlineCancelled { .. } => "DeadlineCancelled",
            Self::RateReset { .. } => "RateReset",
            Self::PaymentInstructed { .. } => "PaymentInstructed",
            Self::PaymentSettled { .. } => "PaymentSettled",
            Self::CashTransferred { .. } => "CashTransferred",
            Self::TradeMatured { .. } => "TradeMatured",
            Self::FailedLifecycleAction { .. } => "FailedLifecycleAction",
        }
    }

    /// The wrapped business event, for the four events that carry one.
    pub fn business_event(&self) -> Option<&BusinessEvent> {
        match self {
            Self::ExecutionOccurred { business_event, .. }
            | Self::TradeConfirmed { business_event, .. }
            | Self::RateReset { business_event, .. }
            | Self::CashTransferred { business_event, .. } => Some(business_event),
            _ => None,
        }
    }

    pub fn is_cdm(&self) -> bool {
        self.business_event().is_some()
    }

    pub fn cdm_event_type(&self) -> Option<BusinessEventType> {
        self.business_event().map(|be| be.qualified_type)
    }

    pub fn to_new_event(&self) -> NewEvent {
        let encoded = serde_json::to_value(self).expect("simulator events always serialize");
        let payload = match encoded {
            serde_json::Value::Object(mut map) => map.remove(self.event_type()).unwrap_or_default(),
            other => other,
        };
        NewEvent::new(self.event_type(), payload, self.is_cdm())
    }

    /// Decode an envelope; `None` for event types this build does not know.
    pub fn decode(envelope: &EventEnvelope) -> Option<Self> {
        let mut map = serde_json::Map::new();
        map.insert(envelope.event_type.clone(), envelope.payload.clone());
        serde_json::from_value(serde_json::Value::Object(map)).ok()
    }
}
