//! Creation functions for the four business events of a swap's life.

use chrono::NaiveDateTime;

use super::observation::Observation;
use super::LifecycleError;
use crate::model::{
    validate_trade, BusinessEvent, EventId, PrimitiveEvent, PrimitiveKind, RateSpecification, ResetRecord, Trade,
    TradeState, TradeStatus, Transfer, TransferStatus,
};

fn event_id(state: &TradeState, label: &str, seq: Option<usize>) -> EventId {
    match seq {
        Some(n) => EventId(format!("{}:{label}:{n}", state.trade_id())),
        None => EventId(format!("{}:{label}", state.trade_id())),
    }
}

fn single(id: EventId, at: NaiveDateTime, primitive: PrimitiveEvent) -> BusinessEvent {
    BusinessEvent::new(id, at, None, vec![primitive]).expect("one primitive always qualifies")
}

fn require_status(state: &TradeState, wanted: TradeStatus, action: &str) -> Result<(), LifecycleError> {
    if state.status == wanted {
        Ok(())
    } else {
        Err(LifecycleError::InvalidTransition(format!(
            "cannot {action} trade {} in status {:?}",
            state.trade_id(),
            state.status
        )))
    }
}

pub fn create_execution_event(trade: &Trade, event_time: NaiveDateTime) -> Result<BusinessEvent, LifecycleError> {
    let report = validate_trade(trade);
    if !report.is_valid() {
        return Err(LifecycleError::InvalidTrade(report));
    }
    let after = TradeState::executed(trade.clone());
    let id = event_id(&after, "EXECUTION", None);
    Ok(single(id, event_time, PrimitiveEvent { primitive: PrimitiveKind::Execution, before: None, after }))
}

pub fn create_contract_formation_event(
    current: &TradeState,
    event_time: NaiveDateTime,
) -> Result<BusinessEvent, LifecycleError> {
    require_status(current, TradeStatus::Executed, "confirm")?;
    let mut after = current.clone();
    after.status = TradeStatus::Confirmed;
    Ok(single(
        event_id(current, "CONTRACT_FORMATION", None),
        event_time,
        PrimitiveEvent { primitive: PrimitiveKind::ContractFormation, before: Some(current.clone()), after },
    ))
}

pub fn create_reset_event(
    current: &TradeState,
    observation: &Observation,
    event_time: NaiveDateTime,
) -> Result<BusinessEvent, LifecycleError> {
    require_status(current, TradeStatus::Confirmed, "reset")?;
    let matches = current.trade.tradable_product.product.interest_rate_payouts().any(|p| {
        matches!(&p.rate, RateSpecification::Floating { index, tenor_months, .. }
            if *index == observation.index && *tenor_months == observation.tenor_months)
    });
    if !matches {
        return Err(LifecycleError::InvalidTransition(format!(
            "trade {} has no floating payout on {} {}M",
            current.trade_id(),
            observation.index,
            observation.tenor_months
        )));
    }
    if let Some(last) = current.reset_history.last() {
        if last.date > observation.observation_date {
            return Err(LifecycleError::InvalidTransition(format!(
                "reset on {} precedes the last reset on {}",
                observation.observation_date, last.date
            )));
        }
    }
    let mut after = current.clone();
    after.reset_history.push(ResetRecord {
        date: observation.observation_date,
        index: observation.index.clone(),
        tenor_months: observation.tenor_months,
        observed_rate: observation.rate,
    });
    Ok(single(
        event_id(current, "RESET", Some(current.reset_history.len())),
        event_time,
        PrimitiveEvent { primitive: PrimitiveKind::Reset, before: Some(current.clone()), after },
    ))
}

pub fn create_cash_transfer_event(
    current: &TradeState,
    transfer: &Transfer,
    event_time: NaiveDateTime,
) -> Result<BusinessEvent, LifecycleError> {
    require_status(current, TradeStatus::Confirmed, "transfer cash on")?;
    let tp = &current.trade.tradable_product;
    if !tp.has_party(&transfer.payer_party_ref)
        || !tp.has_party(&transfer.receiver_party_ref)
        || transfer.payer_party_ref == transfer.receiver_party_ref
    {
        return Err(LifecycleError::InvalidTransition(format!(
            "transfer {} must move cash between the trade's two counterparties",
            transfer.transfer_id
        )));
    }
    if transfer.amount.is_sign_negative() && !transfer.amount.is_zero() {
        return Err(LifecycleError::InvalidTransition("transfer amount must not be negative".into()));
    }
    if let Some(last) = current.transfer_history.last() {
        if last.settlement_date > transfer.settlement_date {
            return Err(LifecycleError::InvalidTransition(format!(
                "transfer settling {} precedes the last transfer on {}",
                transfer.settlement_date, last.settlement_date
            )));
        }
    }
    let mut after = current.clone();
    after.transfer_history.push(Transfer { status: TransferStatus::Settled, ..transfer.clone() });
    Ok(single(
        event_id(current, "TRANSFER", Some(current.transfer_history.len())),
        event_time,
        PrimitiveEvent { primitive: PrimitiveKind::Transfer, before: Some(current.clone()), after },
    ))
}
