use serde::Serialize;

use crate::events::SimEvent;
use crate::lifecycle::LegKind;
use crate::model::{TradeId, Transfer, TransferId, TransferStatus};
use crate::store::EventEnvelope;

/// One payment instruction and its settlement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PaymentAggregate {
    pub transfer_id: TransferId,
    pub trade_id: TradeId,
    pub leg_kind: LegKind,
    pub period_index: u32,
    pub transfer: Transfer,
    pub version: u64,
}

impl PaymentAggregate {
    pub fn is_settled(&self) -> bool {
        self.transfer.status == TransferStatus::Settled
    }

    pub fn apply(state: Option<Self>, envelope: &EventEnvelope) -> Option<Self> {
        let event = SimEvent::decode(envelope);
        let mut next = match (state, event) {
            (None, Some(SimEvent::PaymentInstructed { trade_id, leg_kind, period_index, transfer })) => Self {
                transfer_id: transfer.transfer_id.clone(),
                trade_id,
                leg_kind,
                period_index,
                transfer,
                version: 0,
            },
            (Some(mut p), Some(SimEvent::PaymentSettled { .. })) => {
                p.transfer.status = TransferStatus::Settled;
                p
            }
            (Some(p), _) => p,
            (None, _) => return None,
        };
        next.version = envelope.aggregate_version;
        Some(next)
    }
}

/// Where instructed payments are discharged.
pub trait SettlementRail: Send {
    fn settle(&mut self, transfer: &Transfer) -> Result<(), String>;
}

/// Settles every transfer instantly.
#[derive(Debug, Default, Clone, Copy)]
pub struct SimulatedSettlement;

impl SettlementRail for SimulatedSettlement {
    fn settle(&mut self, _transfer: &Transfer) -> Result<(), String> {
        Ok(())
    }
}
