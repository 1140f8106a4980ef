use std::fmt;

use chrono::NaiveDate;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::party::PartyId;
use super::product::TradableProduct;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TradeId(pub String);

impl TradeId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TradeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for TradeId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

impl From<&str> for TradeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransferId(pub String);

impl fmt::Display for TransferId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Trade {
    pub trade_id: TradeId,
    pub trade_date: NaiveDate,
    pub tradable_product: TradableProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TradeStatus {
    Executed,
    Confirmed,
    Rejected,
    Matured,
}

impl TradeStatus {
    pub fn can_transition_to(self, next: TradeStatus) -> bool {
        use TradeStatus::*;
        matches!((self, next), (Executed, Confirmed) | (Executed, Rejected) | (Confirmed, Matured))
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, Self::Rejected | Self::Matured)
    }
}

/// One observed fixing of the floating rate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResetRecord {
    pub date: NaiveDate,
    pub index: String,
    pub tenor_months: u32,
    pub observed_rate: Decimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TransferStatus {
    Instructed,
    Settled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Transfer {
    pub transfer_id: TransferId,
    pub payer_party_ref: PartyId,
    pub receiver_party_ref: PartyId,
    pub amount: Decimal,
    pub currency: String,
    pub settlement_date: NaiveDate,
    pub status: TransferStatus,
}

/// The state of one trade at a point in its lifecycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TradeState {
    pub trade: Trade,
    pub status: TradeStatus,
    pub reset_history: Vec<ResetRecord>,
    pub transfer_history: Vec<Transfer>,
}

impl TradeState {
    pub fn executed(trade: Trade) -> Self {
        Self { trade, status: TradeStatus::Executed, reset_history: Vec::new(), transfer_history: Vec::new() }
    }

    pub fn trade_id(&self) -> &TradeId {
        &self.trade.trade_id
    }
}
