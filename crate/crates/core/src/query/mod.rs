//! Read side: materialised views folded from the event stream. Nothing here
//! writes to the store.

use std::collections::BTreeMap;

use chrono::{NaiveDate, NaiveDateTime};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::events::SimEvent;
use crate::fmi::OpenAction;
use crate::harness::DeadlineBook;
use crate::lifecycle::{
    day_count_fraction, fixed_amount, floating_amount, generate_schedule, Deadline, DeadlineId, DeadlineKind, LegKind,
};
use crate::model::{
    BusinessEventType, CounterpartyRole, Party, PartyId, ProductQualification, RateSpecification, Trade, TradeId,
    TradeStatus,
};
use crate::store::EventEnvelope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CashflowDirection {
    Party1ToParty2,
    Party2ToParty1,
}

/// A cash transfer that has settled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cashflow {
    pub date: NaiveDate,
    pub leg_kind: LegKind,
    pub period_index: u32,
    pub amount: Decimal,
    pub currency: String,
    pub payer: PartyId,
    pub receiver: PartyId,
    pub direction: CashflowDirection,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectedCashflow {
    pub date: NaiveDate,
    pub leg_kind: LegKind,
    pub period_index: u32,
    /// Unknown for floating periods whose rate has not been reset yet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amount: Option<Decimal>,
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlotterRow {
    pub trade_id: TradeId,
    pub counterparty_names: [String; 2],
    pub product_type: ProductQualification,
    pub notional: Decimal,
    pub currency: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_rate: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floating_index: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floating_tenor_months: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floating_spread: Option<Decimal>,
    pub effective_date: NaiveDate,
    pub termination_date: NaiveDate,
    pub status: TradeStatus,
    pub open_actions: Vec<OpenAction>,
    pub cashflows: Vec<Cashflow>,
    pub projected_cashflows: Vec<ProjectedCashflow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventStreamRow {
    pub global_sequence: u64,
    pub simulator_event_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cdm_event_type: Option<BusinessEventType>,
    pub simulation_time: NaiveDateTime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NextDeadline {
    pub deadline_id: DeadlineId,
    pub trade_id: TradeId,
    pub name: String,
    pub due_time: NaiveDateTime,
    pub kind: DeadlineKind,
    pub period_index: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NextDeadlineView {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<NextDeadline>,
}

pub const DEFAULT_STREAM_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
struct TradeView {
    first_sequence: u64,
    trade: Trade,
    row: BlotterRow,
}

/// All query-side views.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Projections {
    trades: BTreeMap<TradeId, TradeView>,
    stream: Vec<EventStreamRow>,
    deadlines: DeadlineBook,
    last_sequence: u64,
}

fn party_name(parties: &[Party], id: &PartyId) -> String {
    parties.iter().find(|p| &p.party_id == id).map_or_else(|| id.to_string(), |p| p.name.clone())
}

fn new_row(trade: &Trade, parties: &[Party], status: TradeStatus) -> BlotterRow {
    let tp = &trade.tradable_product;
    let name_for = |role| {
        tp.counterparties.iter().find(|c| c.role == role).map(|c| party_name(parties, &c.party_ref)).unwrap_or_default()
    };
    let fixed = tp.product.fixed_leg();
    let floating = tp.product.floating_leg();
    let any_leg = fixed.or(floating).expect("executed swaps have an interest rate leg");
    let (floating_index, floating_tenor_months, floating_spread) = match floating.map(|p| &p.rate) {
        Some(RateSpecification::Floating { index, tenor_months, spread }) => {
            (Some(index.clone()), Some(*tenor_months), Some(*spread))
        }
        _ => (None, None, None),
    };
    let mut projected = Vec::new();
    for payout in tp.product.interest_rate_payouts() {
        let Ok(schedule) = generate_schedule(&payout.periods) else { continue };
        for period in schedule {
            let amount = match &payout.rate {
                RateSpecification::Fixed { rate } => {
                    day_count_fraction(period.adjusted_start, period.adjusted_end, payout.day_count)
                        .ok()
                        .map(|dcf| fixed_amount(payout.notional, *rate, dcf))
                }
                RateSpecification::Floating { .. } => None,
            };
            projected.push(ProjectedCashflow {
                date: period.payment_date,
                leg_kind: if payout.rate.is_fixed() { LegKind::Fixed } else { LegKind::Floating },
                period_index: period.period_index,
                amount,
                settled: false,
            });
        }
    }
    projected.sort_by_key(|c| (c.date, c.leg_kind, c.period_index));
    BlotterRow {
        trade_id: trade.trade_id.clone(),
        counterparty_names: [name_for(CounterpartyRole::Party1), name_for(CounterpartyRole::Party2)],
        product_type: tp.qualify(),
        notional: any_leg.notional,
        currency: any_leg.currency.clone(),
        fixed_rate: fixed.and_then(|p| match p.rate {
            RateSpecification::Fixed { rate } => Some(rate),
            _ => None,
        }),
        floating_index,
        floating_tenor_months,
        floating_spread,
        effective_date: any_leg.periods.effective_date,
        termination_date: any_leg.periods.termination_date,
        status,
        open_actions: if status == TradeStatus::Executed { vec![OpenAction::ConfirmExecution] } else { Vec::new() },
        cashflows: Vec::new(),
        projected_cashflows: projected,
    }
}

fn floating_projection(trade: &Trade, period_index: u32, observed: Decimal) -> Option<Decimal> {
    let payout = trade.tradable_product.product.floating_leg()?;
    let RateSpecification::Floating { spread, .. } = payout.rate else { return None };
    let period = generate_schedule(&payout.periods).ok()?.into_iter().nth(period_index as usize)?;
    let dcf = day_count_fraction(period.adjusted_start, period.adjusted_end, payout.day_count).ok()?;
    Some(floating_amount(payout.notional, observed, spread, dcf))
}

impl Projections {
    pub fn rebuild<'a>(envelopes: impl IntoIterator<Item = &'a EventEnvelope>) -> Self {
        let mut p = Self::default();
        for envelope in envelopes {
            p.project(envelope);
        }
        p
    }

    pub fn last_sequence(&self) -> u64 {
        self.last_sequence
    }

    /// Fold one envelope into every view. Envelopes at or below the last
    /// projected sequence number are ignored.
    pub fn project(&mut self, envelope: &EventEnvelope) {
        if envelope.global_sequence <= self.last_sequence {
            return;
        }
        self.last_sequence = envelope.global_sequence;
        let event = SimEvent::decode(envelope);
        self.stream.push(EventStreamRow {
            global_sequence: envelope.global_sequence,
            simulator_event_name: envelope.event_type.clone(),
            cdm_event_type: event.as_ref().and_then(SimEvent::cdm_event_type),
            simulation_time: envelope.simulation_time,
        });
        let Some(event) = event else { return };
        match event {
            SimEvent::ExecutionOccurred { trade_id, business_event, parties } => {
                let state = business_event.final_state();
                let row = new_row(&state.trade, &parties, state.status);
                self.trades.insert(
                    trade_id,
                    TradeView { first_sequence: envelope.global_sequence, trade: state.trade.clone(), row },
                );
            }
            SimEvent::TradeConfirmed { trade_id, business_event } => {
                if let Some(v) = self.trades.get_mut(&trade_id) {
                    v.row.status = business_event.final_state().status;
                    v.row.open_actions.clear();
                }
            }
            SimEvent::TradeRejected { trade_id } => {
                if let Some(v) = self.trades.get_mut(&trade_id) {
                    v.row.status = TradeStatus::Rejected;
                    v.row.open_actions.clear();
                }
            }
            SimEvent::TradeMatured { trade_id } => {
                if let Some(v) = self.trades.get_mut(&trade_id) {
                    v.row.status = TradeStatus::Matured;
                }
            }
            SimEvent::RateReset { trade_id, period_index, business_event } => {
                let Some(v) = self.trades.get_mut(&trade_id) else { return };
                let Some(reset) = business_event.final_state().reset_history.last() else { return };
                let amount = floating_projection(&v.trade, period_index, reset.observed_rate);
                if let Some(c) = v
                    .row
                    .projected_cashflows
                    .iter_mut()
                    .find(|c| c.leg_kind == LegKind::Floating && c.period_index == period_index)
                {
                    c.amount = amount;
                }
            }
            SimEvent::CashTransferred { trade_id, leg_kind, period_index, business_event } => {
                let Some(v) = self.trades.get_mut(&trade_id) else { return };
                let Some(transfer) = business_event.final_state().transfer_history.last() else { return };
                let party1 = v
                    .trade
                    .tradable_product
                    .counterparties
                    .iter()
                    .find(|c| c.role == CounterpartyRole::Party1)
                    .map(|c| c.party_ref.clone());
                let direction = if party1.as_ref() == Some(&transfer.payer_party_ref) {
                    CashflowDirection::Party1ToParty2
                } else {
                    CashflowDirection::Party2ToParty1
                };
                v.row.cashflows.push(Cashflow {
                    date: transfer.settlement_date,
                    leg_kind,
                    period_index,
                    amount: transfer.amount,
                    currency: transfer.currency.clone(),
                    payer: transfer.payer_party_ref.clone(),
                    receiver: transfer.receiver_party_ref.clone(),
                    direction,
                    settled: true,
                });
                if let Some(c) = v
                    .row
                    .projected_cashflows
                    .iter_mut()
                    .find(|c| c.leg_kind == leg_kind && c.period_index == period_index)
                {
                    c.amount = Some(transfer.amount);
                    c.settled = true;
                }
            }
            SimEvent::DeadlineScheduled { deadline } => {
                self.deadlines.schedule(deadline);
            }
            SimEvent::DeadlineBreached { deadline } => {
                self.deadlines.trigger(&deadline.deadline_id);
            }
            SimEvent::DeadlineCancelled { deadline_id, .. } => {
                self.deadlines.cancel(&deadline_id);
            }
            _ => {}
        }
    }

    pub fn blotter(&self) -> Vec<BlotterRow> {
        let mut views: Vec<&TradeView> = self.trades.values().collect();
        views.sort_by_key(|v| v.first_sequence);
        views.into_iter().map(|v| v.row.clone()).collect()
    }

    pub fn trade(&self, trade_id: &TradeId) -> Result<BlotterRow, SimError> {
        self.trades.get(trade_id).map(|v| v.row.clone()).ok_or_else(|| SimError::NotFound(format!("trade {trade_id}")))
    }

    /// The most recent rows, newest first.
    pub fn event_stream(&self, limit: usize, cdm_only: bool) -> Vec<EventStreamRow> {
        self.stream.iter().rev().filter(|r| !cdm_only || r.cdm_event_type.is_some()).take(limit).cloned().collect()
    }

    pub fn deadlines(&self) -> &DeadlineBook {
        &self.deadlines
    }

    pub fn next_deadline(&self) -> NextDeadlineView {
        NextDeadlineView { deadline: self.deadlines.next_open().map(next_deadline) }
    }
}

fn next_deadline(d: &Deadline) -> NextDeadline {
    NextDeadline {
        deadline_id: d.deadline_id.clone(),
        trade_id: d.trade_id.clone(),
        name: d.name(),
        due_time: d.due_time,
        kind: d.kind,
        period_index: d.period_index,
    }
}
