use std::fmt;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use super::trade::{TradeState, TradeStatus};
use super::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub String);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimitiveKind {
    Execution,
    ContractFormation,
    Reset,
    Transfer,
}

/// An atomic transition of a trade's state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimitiveEvent {
    pub primitive: PrimitiveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before: Option<TradeState>,
    pub after: TradeState,
}

impl PrimitiveEvent {
    /// Check that `after` differs from `before` only in what this kind of
    /// primitive is allowed to change.
    pub fn verify_transition(&self) -> Result<(), String> {
        match (self.primitive, &self.before) {
            (PrimitiveKind::Execution, None) => {
                let fresh = TradeState::executed(self.after.trade.clone());
                if fresh == self.after {
                    Ok(())
                } else {
                    Err("execution must produce a fresh executed state".into())
                }
            }
            (PrimitiveKind::Execution, Some(_)) => Err("execution must not have a before state".into()),
            (_, None) => Err(format!("{:?} requires a before state", self.primitive)),
            (PrimitiveKind::ContractFormation, Some(before)) => {
                if before.status != TradeStatus::Executed {
                    return Err(format!("cannot confirm a trade in status {:?}", before.status));
                }
                let mut expected = before.clone();
                expected.status = TradeStatus::Confirmed;
                (expected == self.after).then_some(()).ok_or_else(|| "contract formation may only change status".into())
            }
            (PrimitiveKind::Reset, Some(before)) => {
                let after = &self.after;
                let appended = after.reset_history.len() == before.reset_history.len() + 1
                    && after.reset_history.starts_with(&before.reset_history);
                let mut expected = before.clone();
                expected.reset_history = after.reset_history.clone();
                (appended && expected == *after)
                    .then_some(())
                    .ok_or_else(|| "reset may only append one reset record".into())
            }
            (PrimitiveKind::Transfer, Some(before)) => {
                let after = &self.after;
                let appended = after.transfer_history.len() == before.transfer_history.len() + 1
                    && after.transfer_history.starts_with(&before.transfer_history);
                let mut expected = before.clone();
                expected.transfer_history = after.transfer_history.clone();
                (appended && expected == *after)
                    .then_some(())
                    .ok_or_else(|| "transfer may only append one transfer".into())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BusinessEventType {
    Execution,
    ContractFormation,
    Reset,
    CashTransfer,
    Unqualified,
}

/// Infer the business event type from the primitives it is composed of.
///
/// `intent` is accepted for completeness; none of the supported event types
/// depend on it.
pub fn qualify_business_event(
    primitives: &[PrimitiveEvent],
    _intent: Option<&str>,
) -> Result<BusinessEventType, ModelError> {
    match primitives {
        [] => Err(ModelError::EmptyPrimitives),
        [single] => Ok(match single.primitive {
            PrimitiveKind::Execution => BusinessEventType::Execution,
            PrimitiveKind::ContractFormation => BusinessEventType::ContractFormation,
            PrimitiveKind::Reset => BusinessEventType::Reset,
            PrimitiveKind::Transfer => BusinessEventType::CashTransfer,
        }),
        _ => Ok(BusinessEventType::Unqualified),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BusinessEvent {
    pub event_id: EventId,
    pub event_date: NaiveDateTime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intent: Option<String>,
    pub primitives: Vec<PrimitiveEvent>,
    pub qualified_type: BusinessEventType,
}

impl BusinessEvent {
    /// Build an event, qualifying it from its primitives.
    pub fn new(
        event_id: EventId,
        event_date: NaiveDateTime,
        intent: Option<String>,
        primitives: Vec<PrimitiveEvent>,
    ) -> Result<Self, ModelError> {
        let qualified_type = qualify_business_event(&primitives, intent.as_deref())?;
        Ok(Self { event_id, event_date, intent, primitives, qualified_type })
    }

    /// The state of the trade once every primitive has been applied.
    pub fn final_state(&self) -> &TradeState {
        // primitives is never empty for events built through `new`
        &self.primitives.last().expect("business event without primitives").after
    }

    pub fn requalifies(&self) -> bool {
        qualify_business_event(&self.primitives, self.intent.as_deref()).ok() == Some(self.qualified_type)
    }
}
