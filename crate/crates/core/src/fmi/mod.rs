//! The FMI command side: submission and consent services, the swap and
//! payment aggregates, and the lifecycle event initiator.

mod commands;
mod irs;
mod payment;

use std::collections::BTreeMap;

use chrono::NaiveDateTime;

pub use commands::{ConsentDecision, FmiCommand};
pub use irs::{transfer_id_for, IrsAggregate, OpenAction};
pub use payment::{PaymentAggregate, SettlementRail, SimulatedSettlement};

use crate::error::SimError;
use crate::events::SimEvent;
use crate::lifecycle::{create_execution_event, Deadline, DeadlineKind};
use crate::model::{ProductQualification, Trade, TradeId, TransferId};
use crate::registry::PartyRegistry;
use crate::store::{CommandBus, CommandEnvelope, EventEnvelope, EventStore};

pub const INITIATOR_STREAM: &str = "lifecycle-initiator";

pub fn irs_stream(trade_id: &TradeId) -> String {
    format!("irs:{trade_id}")
}

pub fn payment_stream(transfer_id: &TransferId) -> String {
    format!("payment:{transfer_id}")
}

pub type FmiBus = CommandBus<Fmi, SimError>;

/// Everything command handlers need: the store, the registry and the live aggregates.
pub struct Fmi {
    store: EventStore,
    registry: PartyRegistry,
    trades: BTreeMap<TradeId, IrsAggregate>,
    payments: BTreeMap<TransferId, PaymentAggregate>,
    rail: Box<dyn SettlementRail>,
    seed: u64,
    now: Option<NaiveDateTime>,
}

impl Fmi {
    /// Wrap a store, rebuilding the aggregates from whatever it already holds.
    pub fn new(store: EventStore, registry: PartyRegistry, seed: u64) -> Self {
        let mut fmi = Self {
            store,
            registry,
            trades: BTreeMap::new(),
            payments: BTreeMap::new(),
            rail: Box::new(SimulatedSettlement),
            seed,
            now: None,
        };
        let existing: Vec<EventEnvelope> = fmi.store.iter().cloned().collect();
        for envelope in &existing {
            fmi.absorb(envelope);
        }
        fmi
    }

    pub fn with_rail(mut self, rail: Box<dyn SettlementRail>) -> Self {
        self.rail = rail;
        self
    }

    pub fn store(&self) -> &EventStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut EventStore {
        &mut self.store
    }

    pub fn registry(&self) -> &PartyRegistry {
        &self.registry
    }

    pub fn registry_mut(&mut self) -> &mut PartyRegistry {
        &mut self.registry
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    pub fn now(&self) -> Option<NaiveDateTime> {
        self.now
    }

    pub fn set_now(&mut self, now: Option<NaiveDateTime>) {
        self.now = now;
    }

    pub fn trade(&self, trade_id: &TradeId) -> Option<&IrsAggregate> {
        self.trades.get(trade_id)
    }

    pub fn trades(&self) -> impl Iterator<Item = &IrsAggregate> {
        self.trades.values()
    }

    pub fn payment(&self, transfer_id: &TransferId) -> Option<&PaymentAggregate> {
        self.payments.get(transfer_id)
    }

    pub fn payments(&self) -> impl Iterator<Item = &PaymentAggregate> {
        self.payments.values()
    }

    /// Drop the live aggregates, e.g. after the store was reset.
    pub fn clear_aggregates(&mut self) {
        self.trades.clear();
        self.payments.clear();
    }

    /// Replay one swap from its stream alone.
    pub fn replay_trade(&self, trade_id: &TradeId) -> Option<IrsAggregate> {
        self.store.replay_aggregate(&irs_stream(trade_id), None, IrsAggregate::apply)
    }

    pub fn replay_payment(&self, transfer_id: &TransferId) -> Option<PaymentAggregate> {
        self.store.replay_aggregate(&payment_stream(transfer_id), None, PaymentAggregate::apply)
    }

    fn absorb(&mut self, envelope: &EventEnvelope) {
        if let Some(id) = envelope.aggregate_id.strip_prefix("irs:") {
            let id = TradeId::new(id);
            let current = self.trades.remove(&id);
            if let Some(next) = IrsAggregate::apply(current, envelope) {
                self.trades.insert(id, next);
            }
        } else if let Some(id) = envelope.aggregate_id.strip_prefix("payment:") {
            let id = TransferId(id.to_owned());
            let current = self.payments.remove(&id);
            if let Some(next) = PaymentAggregate::apply(current, envelope) {
                self.payments.insert(id, next);
            }
        }
    }

    fn clock(&self) -> Result<NaiveDateTime, SimError> {
        self.now.ok_or(SimError::NoClock)
    }

    /// Append `events` to one stream and fold them into the live aggregates.
    pub fn commit(
        &mut self,
        aggregate_id: &str,
        expected_version: Option<u64>,
        events: &[SimEvent],
    ) -> Result<Vec<EventEnvelope>, SimError> {
        let time = self.clock()?;
        self.commit_at(aggregate_id, expected_version, events, time)
    }

    /// As [`Fmi::commit`], stamped with an explicit simulation time.
    pub fn commit_at(
        &mut self,
        aggregate_id: &str,
        expected_version: Option<u64>,
        events: &[SimEvent],
        time: NaiveDateTime,
    ) -> Result<Vec<EventEnvelope>, SimError> {
        let batch = events.iter().map(SimEvent::to_new_event).collect();
        let envelopes = self.store.append(aggregate_id, expected_version, batch, time)?;
        for envelope in &envelopes {
            self.absorb(envelope);
        }
        Ok(envelopes)
    }

    fn existing_trade(&self, trade_id: &TradeId) -> Result<&IrsAggregate, SimError> {
        self.trades.get(trade_id).ok_or_else(|| SimError::NotFound(format!("trade {trade_id}")))
    }

    fn expected(&self, cmd: &CommandEnvelope, trade_id: &TradeId) -> Option<u64> {
        cmd.expected_version.or_else(|| Some(self.store.version(&irs_stream(trade_id))))
    }
}

/// A bus with the handler for every FMI command registered.
pub fn command_bus() -> FmiBus {
    let mut bus = FmiBus::new();
    for command_type in FmiCommand::TYPES {
        bus.register(command_type, Box::new(handle)).expect("each command type is registered once");
    }
    bus
}

fn handle(fmi: &mut Fmi, cmd: &CommandEnvelope, bus: &FmiBus) -> Result<Vec<EventEnvelope>, SimError> {
    let decoded = FmiCommand::decode(cmd)?;
    if decoded.command_type() != cmd.command_type {
        return Err(SimError::UnroutableCommand(cmd.command_type.clone()));
    }
    match decoded {
        FmiCommand::SubmitExecution { trade } => submit_execution(fmi, cmd, trade),
        FmiCommand::Consent { trade_id, decision } => {
            let now = fmi.clock()?;
            let events = fmi.existing_trade(&trade_id)?.consent(decision, now)?;
            let expected = fmi.expected(cmd, &trade_id);
            fmi.commit(&irs_stream(&trade_id), expected, &events)
        }
        FmiCommand::TriggerReset { trade_id, period_index } => {
            let now = fmi.clock()?;
            let events = fmi.existing_trade(&trade_id)?.reset(period_index, fmi.seed, now)?;
            let expected = fmi.expected(cmd, &trade_id);
            fmi.commit(&irs_stream(&trade_id), expected, &events)
        }
        FmiCommand::TriggerPayment { trade_id, leg_kind, period_index } => {
            let now = fmi.clock()?;
            let transfer = fmi.existing_trade(&trade_id)?.instruct_payment(leg_kind, period_index)?;
            let transfer_id = transfer.transfer_id.clone();
            let mut out = Vec::new();
            let settled = match fmi.payments.get(&transfer_id) {
                Some(p) if p.is_settled() => true,
                Some(_) => false,
                None => {
                    let instructed =
                        SimEvent::PaymentInstructed { trade_id: trade_id.clone(), leg_kind, period_index, transfer };
                    out.extend(fmi.commit(&payment_stream(&transfer_id), Some(0), &[instructed])?);
                    false
                }
            };
            if !settled {
                let settle = FmiCommand::SettlePayment { transfer_id: transfer_id.clone() };
                out.extend(bus.dispatch(fmi, &settle.to_envelope(format!("{}/settle", cmd.command_id), None))?);
            }
            let transfer = fmi.payments[&transfer_id].transfer.clone();
            let events = fmi.existing_trade(&trade_id)?.record_transfer(leg_kind, period_index, &transfer, now)?;
            let expected = fmi.expected(cmd, &trade_id);
            out.extend(fmi.commit(&irs_stream(&trade_id), expected, &events)?);
            Ok(out)
        }
        FmiCommand::SettlePayment { transfer_id } => {
            let payment =
                fmi.payments.get(&transfer_id).ok_or_else(|| SimError::NotFound(format!("payment {transfer_id}")))?;
            if payment.is_settled() {
                return Err(SimError::InvalidTransition(format!("payment {transfer_id} is already settled")));
            }
            let transfer = payment.transfer.clone();
            let version = payment.version;
            fmi.rail
                .settle(&transfer)
                .map_err(|e| SimError::Internal(format!("settlement of {transfer_id} failed: {e}")))?;
            let expected = cmd.expected_version.or(Some(version));
            fmi.commit(&payment_stream(&transfer_id), expected, &[SimEvent::PaymentSettled { transfer_id }])
        }
    }
}

fn submit_execution(fmi: &mut Fmi, cmd: &CommandEnvelope, trade: Trade) -> Result<Vec<EventEnvelope>, SimError> {
    let now = fmi.clock()?;
    let stream = irs_stream(&trade.trade_id);
    if fmi.trades.contains_key(&trade.trade_id) || fmi.store.version(&stream) > 0 {
        return Err(SimError::DuplicateTrade(trade.trade_id));
    }
    let business_event = create_execution_event(&trade, now)?;
    let qualification = trade.tradable_product.qualify();
    if qualification != ProductQualification::InterestRateSwapFixedFloat {
        return Err(SimError::InvalidTrade(vec![format!(
            "product qualifies as {qualification:?}; only fixed-float interest rate swaps are accepted"
        )]));
    }
    let parties = trade
        .tradable_product
        .counterparties
        .iter()
        .map(|c| fmi.registry.get(&c.party_ref).map_err(|_| SimError::UnknownParty(c.party_ref.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let event = SimEvent::ExecutionOccurred { trade_id: trade.trade_id.clone(), business_event, parties };
    fmi.commit(&stream, cmd.expected_version.or(Some(0)), &[event])
}

/// The command the lifecycle initiator issues for a breached deadline.
pub fn command_for(deadline: &Deadline) -> FmiCommand {
    let trade_id = deadline.trade_id.clone();
    let period_index = deadline.period_index;
    match deadline.kind {
        DeadlineKind::Reset => FmiCommand::TriggerReset { trade_id, period_index },
        kind => FmiCommand::TriggerPayment { trade_id, leg_kind: kind.leg(), period_index },
    }
}

/// React to a breached deadline. A failed action is recorded as a
/// `FailedLifecycleAction` event on the initiator's own stream.
pub fn on_deadline_breached(fmi: &mut Fmi, bus: &FmiBus, deadline: &Deadline) -> Result<Vec<EventEnvelope>, SimError> {
    let cmd = command_for(deadline).to_envelope(format!("initiator/{}", deadline.deadline_id), None);
    match bus.dispatch(fmi, &cmd) {
        Ok(envelopes) => Ok(envelopes),
        Err(e @ SimError::Storage(_)) => Err(e),
        Err(e) => {
            let failed = SimEvent::FailedLifecycleAction {
                deadline_id: deadline.deadline_id.clone(),
                trade_id: deadline.trade_id.clone(),
                kind: deadline.kind,
                period_index: deadline.period_index,
                code: e.code(),
                reason: e.to_string(),
            };
            fmi.commit(INITIATOR_STREAM, None, &[failed])
        }
    }
}
