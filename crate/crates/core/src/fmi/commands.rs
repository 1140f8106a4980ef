use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::lifecycle::LegKind;
use crate::model::{Trade, TradeId, TransferId};
use crate::store::CommandEnvelope;

use super::{irs_stream, payment_stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConsentDecision {
    Confirm,
    Reject,
}

/// The FMI's command set. Each command targets exactly one aggregate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all_fields = "camelCase")]
pub enum FmiCommand {
    SubmitExecution { trade: Trade },
    Consent { trade_id: TradeId, decision: ConsentDecision },
    TriggerReset { trade_id: TradeId, period_index: u32 },
    TriggerPayment { trade_id: TradeId, leg_kind: LegKind, period_index: u32 },
    SettlePayment { transfer_id: TransferId },
}

impl FmiCommand {
    pub const TYPES: [&'static str; 5] =
        ["SubmitExecution", "Consent", "TriggerReset", "TriggerPayment", "SettlePayment"];

    pub fn command_type(&self) -> &'static str {
        match self {
            Self::SubmitExecution { .. } => "SubmitExecution",
            Self::Consent { .. } => "Consent",
            Self::TriggerReset { .. } => "TriggerReset",
            Self::TriggerPayment { .. } => "TriggerPayment",
            Self::SettlePayment { .. } => "SettlePayment",
        }
    }

    pub fn target_aggregate_id(&self) -> String {
        match self {
            Self::SubmitExecution { trade } => irs_stream(&trade.trade_id),
            Self::Consent { trade_id, .. }
            | Self::TriggerReset { trade_id, .. }
            | Self::TriggerPayment { trade_id, .. } => irs_stream(trade_id),
            Self::SettlePayment { transfer_id } => payment_stream(transfer_id),
        }
    }

    pub fn to_envelope(&self, command_id: impl Into<String>, expected_version: Option<u64>) -> CommandEnvelope {
        let encoded = serde_json::to_value(self).expect("commands always serialize");
        let payload = match encoded {
            serde_json::Value::Object(mut map) => map.remove(self.command_type()).unwrap_or_default(),
            other => other,
        };
        CommandEnvelope {
            command_id: command_id.into(),
            target_aggregate_id: self.target_aggregate_id(),
            command_type: self.command_type().to_owned(),
            payload,
            expected_version,
        }
    }

    /// Decode a command envelope and check that it targets the aggregate its
    /// payload names.
    pub fn decode(cmd: &CommandEnvelope) -> Result<Self, SimError> {
        let mut map = serde_json::Map::new();
        map.insert(cmd.command_type.clone(), cmd.payload.clone());
        let decoded: Self = serde_json::from_value(serde_json::Value::Object(map))?;
        let target = decoded.target_aggregate_id();
        if target != cmd.target_aggregate_id {
            return Err(SimError::InvalidRequest(format!(
                "command targets {} but its payload addresses {target}",
                cmd.target_aggregate_id
            )));
        }
        Ok(decoded)
    }
}
