use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDateTime;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::commands::ConsentDecision;
use crate::error::SimError;
use crate::events::SimEvent;
use crate::lifecycle::{
    create_cash_transfer_event, create_contract_formation_event, create_reset_event, day_count_fraction, fixed_amount,
    floating_amount, generate_schedule, project_deadlines, resolve_observation, CalculationPeriod, Deadline,
    DeadlineId, DeadlineKind, LegKind,
};
use crate::model::{
    InterestRatePayout, RateSpecification, TradeId, TradeState, TradeStatus, Transfer, TransferId, TransferStatus,
};
use crate::store::EventEnvelope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OpenAction {
    ConfirmExecution,
}

/// One interest rate swap. State changes only by applying events from its own stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IrsAggregate {
    pub trade_id: TradeId,
    pub current_state: TradeState,
    pub version: u64,
    pub pending_deadline_ids: BTreeSet<DeadlineId>,
    pub open_actions: BTreeSet<OpenAction>,
    /// Observed rate per reset period.
    pub resets: BTreeMap<u32, Decimal>,
    pub payments: BTreeSet<(LegKind, u32)>,
}

pub fn transfer_id_for(trade_id: &TradeId, leg: LegKind, period_index: u32) -> TransferId {
    let leg = match leg {
        LegKind::Fixed => "FIXED",
        LegKind::Floating => "FLOATING",
    };
    TransferId(format!("{trade_id}:{leg}:{period_index}"))
}

impl IrsAggregate {
    pub fn status(&self) -> TradeStatus {
        self.current_state.status
    }

    pub fn apply(state: Option<Self>, envelope: &EventEnvelope) -> Option<Self> {
        let event = SimEvent::decode(envelope);
        let mut agg = match (state, event) {
            (None, Some(SimEvent::ExecutionOccurred { trade_id, business_event, .. })) => Self {
                trade_id,
                current_state: business_event.final_state().clone(),
                version: 0,
                pending_deadline_ids: BTreeSet::new(),
                open_actions: BTreeSet::from([OpenAction::ConfirmExecution]),
                resets: BTreeMap::new(),
                payments: BTreeSet::new(),
            },
            (None, _) => return None,
            (Some(mut agg), Some(event)) => {
                match event {
                    SimEvent::TradeConfirmed { business_event, .. } => {
                        agg.current_state = business_event.final_state().clone();
                        agg.open_actions.clear();
                    }
                    SimEvent::TradeRejected { .. } => {
                        agg.current_state.status = TradeStatus::Rejected;
                        agg.open_actions.clear();
                    }
                    SimEvent::DeadlineScheduled { deadline } => {
                        agg.pending_deadline_ids.insert(deadline.deadline_id);
                    }
                    SimEvent::DeadlineCancelled { deadline_id, .. } => {
                        agg.pending_deadline_ids.remove(&deadline_id);
                    }
                    SimEvent::RateReset { trade_id, period_index, business_event } => {
                        agg.current_state = business_event.final_state().clone();
                        if let Some(r) = agg.current_state.reset_history.last() {
                            agg.resets.insert(period_index, r.observed_rate);
                        }
                        agg.pending_deadline_ids.remove(&Deadline::id_for(
                            &trade_id,
                            DeadlineKind::Reset,
                            period_index,
                        ));
                    }
                    SimEvent::CashTransferred { trade_id, leg_kind, period_index, business_event } => {
                        agg.current_state = business_event.final_state().clone();
                        agg.payments.insert((leg_kind, period_index));
                        agg.pending_deadline_ids.remove(&Deadline::id_for(
                            &trade_id,
                            DeadlineKind::payment(leg_kind),
                            period_index,
                        ));
                    }
                    SimEvent::TradeMatured { .. } => {
                        agg.current_state.status = TradeStatus::Matured;
                    }
                    _ => {}
                }
                agg
            }
            (Some(agg), None) => agg,
        };
        agg.version = envelope.aggregate_version;
        Some(agg)
    }

    fn require(&self, wanted: TradeStatus, action: &str) -> Result<(), SimError> {
        if self.status() == wanted {
            Ok(())
        } else {
            Err(SimError::InvalidTransition(format!(
                "cannot {action} trade {} in status {:?}",
                self.trade_id,
                self.status()
            )))
        }
    }

    fn leg(&self, leg: LegKind) -> Result<&InterestRatePayout, SimError> {
        let product = &self.current_state.trade.tradable_product.product;
        match leg {
            LegKind::Fixed => product.fixed_leg(),
            LegKind::Floating => product.floating_leg(),
        }
        .ok_or_else(|| SimError::InvalidTransition(format!("trade {} has no {leg} leg", self.trade_id)))
    }

    fn period(&self, leg: LegKind, period_index: u32) -> Result<(&InterestRatePayout, CalculationPeriod), SimError> {
        let payout = self.leg(leg)?;
        let period = generate_schedule(&payout.periods)?.into_iter().nth(period_index as usize).ok_or_else(|| {
            SimError::InvalidTransition(format!("trade {} {leg} leg has no period {period_index}", self.trade_id))
        })?;
        Ok((payout, period))
    }

    /// Total number of payments over both legs.
    pub fn payment_count(&self) -> usize {
        self.current_state
            .trade
            .tradable_product
            .product
            .interest_rate_payouts()
            .filter_map(|p| p.periods.period_count())
            .map(|n| n as usize)
            .sum()
    }

    pub fn consent(&self, decision: ConsentDecision, now: NaiveDateTime) -> Result<Vec<SimEvent>, SimError> {
        match decision {
            ConsentDecision::Confirm => {
                let business_event = create_contract_formation_event(&self.current_state, now)?;
                let deadlines = project_deadlines(business_event.final_state())?;
                let mut out = vec![SimEvent::TradeConfirmed { trade_id: self.trade_id.clone(), business_event }];
                out.extend(deadlines.into_iter().map(|deadline| SimEvent::DeadlineScheduled { deadline }));
                Ok(out)
            }
            ConsentDecision::Reject => {
                self.require(TradeStatus::Executed, "reject")?;
                Ok(vec![SimEvent::TradeRejected { trade_id: self.trade_id.clone() }])
            }
        }
    }

    pub fn reset(&self, period_index: u32, seed: u64, now: NaiveDateTime) -> Result<Vec<SimEvent>, SimError> {
        self.require(TradeStatus::Confirmed, "reset")?;
        let (payout, period) = self.period(LegKind::Floating, period_index)?;
        if self.resets.contains_key(&period_index) {
            return Err(SimError::AlreadyReset { trade_id: self.trade_id.clone(), period_index });
        }
        let RateSpecification::Floating { index, tenor_months, .. } = &payout.rate else {
            unreachable!("floating leg has a floating rate")
        };
        let observation = resolve_observation(index, *tenor_months, period.adjusted_start, seed);
        let business_event = create_reset_event(&self.current_state, &observation, now)?;
        Ok(vec![SimEvent::RateReset { trade_id: self.trade_id.clone(), period_index, business_event }])
    }

    /// The transfer owed for one leg period, computed from the stored terms and reset.
    pub fn instruct_payment(&self, leg: LegKind, period_index: u32) -> Result<Transfer, SimError> {
        self.require(TradeStatus::Confirmed, "pay")?;
        let (payout, period) = self.period(leg, period_index)?;
        if self.payments.contains(&(leg, period_index)) {
            return Err(SimError::AlreadyPaid { trade_id: self.trade_id.clone(), leg, period_index });
        }
        let dcf = day_count_fraction(period.adjusted_start, period.adjusted_end, payout.day_count)?;
        let amount = match &payout.rate {
            RateSpecification::Fixed { rate } => fixed_amount(payout.notional, *rate, dcf),
            RateSpecification::Floating { spread, .. } => {
                let observed = self
                    .resets
                    .get(&period_index)
                    .ok_or_else(|| SimError::ResetMissing { trade_id: self.trade_id.clone(), period_index })?;
                floating_amount(payout.notional, *observed, *spread, dcf)
            }
        };
        // a negative net rate reverses the direction of the payment
        let (payer, receiver, amount) = if amount.is_sign_negative() && !amount.is_zero() {
            (&payout.receiver_party_ref, &payout.payer_party_ref, -amount)
        } else {
            (&payout.payer_party_ref, &payout.receiver_party_ref, amount)
        };
        Ok(Transfer {
            transfer_id: transfer_id_for(&self.trade_id, leg, period_index),
            payer_party_ref: payer.clone(),
            receiver_party_ref: receiver.clone(),
            amount,
            currency: payout.currency.clone(),
            settlement_date: period.payment_date,
            status: TransferStatus::Instructed,
        })
    }

    /// Record a settled transfer, maturing the trade after its last payment.
    pub fn record_transfer(
        &self,
        leg: LegKind,
        period_index: u32,
        transfer: &Transfer,
        now: NaiveDateTime,
    ) -> Result<Vec<SimEvent>, SimError> {
        if self.payments.contains(&(leg, period_index)) {
            return Err(SimError::AlreadyPaid { trade_id: self.trade_id.clone(), leg, period_index });
        }
        let business_event = create_cash_transfer_event(&self.current_state, transfer, now)?;
        let mut out = vec![SimEvent::CashTransferred {
            trade_id: self.trade_id.clone(),
            leg_kind: leg,
            period_index,
            business_event,
        }];
        if self.payments.len() + 1 == self.payment_count() {
            out.push(SimEvent::TradeMatured { trade_id: self.trade_id.clone() });
        }
        Ok(out)
    }
}
