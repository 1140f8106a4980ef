use std::fmt;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Serialize};

use super::schedule::generate_schedule;
use super::LifecycleError;
use crate::model::{TradeId, TradeState, TradeStatus};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeadlineId(pub String);

impl fmt::Display for DeadlineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LegKind {
    Fixed,
    Floating,
}

impl fmt::Display for LegKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fixed => "Fixed",
            Self::Floating => "Floating",
        })
    }
}

/// Declaration order is the tie-break order for deadlines due at the same time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DeadlineKind {
    Reset,
    FixedPayment,
    FloatingPayment,
}

impl DeadlineKind {
    pub fn leg(self) -> LegKind {
        match self {
            Self::FixedPayment => LegKind::Fixed,
            Self::Reset | Self::FloatingPayment => LegKind::Floating,
        }
    }

    pub fn payment(leg: LegKind) -> Self {
        match leg {
            LegKind::Fixed => Self::FixedPayment,
            LegKind::Floating => Self::FloatingPayment,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::Reset => "RESET",
            Self::FixedPayment => "FIXED_PAYMENT",
            Self::FloatingPayment => "FLOATING_PAYMENT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DeadlineStatus {
    Open,
    Triggered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Deadline {
    pub deadline_id: DeadlineId,
    pub trade_id: TradeId,
    pub due_time: NaiveDateTime,
    pub kind: DeadlineKind,
    pub period_index: u32,
    pub status: DeadlineStatus,
}

/// Total order used for firing deadlines.
pub type DeadlineKey = (NaiveDateTime, DeadlineKind, u32, TradeId, DeadlineId);

impl Deadline {
    pub fn id_for(trade_id: &TradeId, kind: DeadlineKind, period_index: u32) -> DeadlineId {
        DeadlineId(format!("{trade_id}:{}:{period_index}", kind.label()))
    }

    pub fn new(trade_id: TradeId, due_time: NaiveDateTime, kind: DeadlineKind, period_index: u32) -> Self {
        Self {
            deadline_id: Self::id_for(&trade_id, kind, period_index),
            trade_id,
            due_time,
            kind,
            period_index,
            status: DeadlineStatus::Open,
        }
    }

    pub fn key(&self) -> DeadlineKey {
        (self.due_time, self.kind, self.period_index, self.trade_id.clone(), self.deadline_id.clone())
    }

    /// Display name, e.g. `Payment period 2 (Floating)`.
    pub fn name(&self) -> String {
        let kind = match self.kind {
            DeadlineKind::Reset => "Reset",
            DeadlineKind::FixedPayment | DeadlineKind::FloatingPayment => "Payment",
        };
        format!("{kind} period {} ({})", self.period_index, self.kind.leg())
    }
}

/// Deadlines fire at the start of their calendar date.
pub fn due_at(date: NaiveDate) -> NaiveDateTime {
    date.and_time(NaiveTime::MIN)
}

/// All future lifecycle actions of a confirmed trade, in firing order.
pub fn project_deadlines(state: &TradeState) -> Result<Vec<Deadline>, LifecycleError> {
    if state.status != TradeStatus::Confirmed {
        return Err(LifecycleError::InvalidTransition(format!(
            "deadlines are only projected for confirmed trades, {} is {:?}",
            state.trade_id(),
            state.status
        )));
    }
    let trade_id = state.trade_id();
    let mut out = Vec::new();
    for payout in state.trade.tradable_product.product.interest_rate_payouts() {
        let schedule = generate_schedule(&payout.periods)?;
        for period in &schedule {
            let i = period.period_index;
            if payout.rate.is_floating() {
                out.push(Deadline::new(trade_id.clone(), due_at(period.adjusted_start), DeadlineKind::Reset, i));
                out.push(Deadline::new(
                    trade_id.clone(),
                    due_at(period.payment_date),
                    DeadlineKind::FloatingPayment,
                    i,
                ));
            } else {
                out.push(Deadline::new(trade_id.clone(), due_at(period.payment_date), DeadlineKind::FixedPayment, i));
            }
        }
    }
    out.sort_by_key(Deadline::key);
    Ok(out)
}
