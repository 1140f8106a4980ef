use std::fmt;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::party::{CounterpartyRole, PartyId};
use super::product::{Payout, RateSpecification, TradableProduct};
use super::trade::Trade;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "SCREAMING_SNAKE_CASE", rename_all_fields = "camelCase")]
pub enum Violation {
    NoPayouts,
    CounterpartyRoles,
    SameCounterparty,
    UnresolvedPartyReference { party_ref: PartyId },
    NonPositiveNotional { payout_index: usize },
    SamePayerAndReceiver { payout_index: usize },
    EffectiveNotBeforeTermination { payout_index: usize },
    PeriodMultiple { payout_index: usize },
    NonPositiveTenor { payout_index: usize },
    TradeDateAfterEffective { payout_index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoPayouts => f.write_str("product must have at least one payout"),
            Self::CounterpartyRoles => f.write_str("counterparties must be exactly one PARTY1 and one PARTY2"),
            Self::SameCounterparty => f.write_str("counterparties must be distinct parties"),
            Self::UnresolvedPartyReference { party_ref } => {
                write!(f, "unresolved party reference: {party_ref}")
            }
            Self::NonPositiveNotional { .. } => f.write_str("notional must be positive"),
            Self::SamePayerAndReceiver { .. } => f.write_str("payer and receiver must differ"),
            Self::EffectiveNotBeforeTermination { .. } => f.write_str("effective date must precede termination date"),
            Self::PeriodMultiple { .. } => {
                f.write_str("schedule span must be a whole multiple of the payment frequency")
            }
            Self::NonPositiveTenor { .. } => f.write_str("floating tenor must be positive"),
            Self::TradeDateAfterEffective { .. } => f.write_str("trade date must not be after the effective date"),
        }
    }
}

/// Violations found on a product; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }

    pub fn messages(&self) -> Vec<String> {
        self.0.iter().map(ToString::to_string).collect()
    }
}

pub fn validate_tradable_product(tp: &TradableProduct) -> ValidationReport {
    let mut out = Vec::new();
    let [a, b] = &tp.counterparties;
    let roles_ok = matches!(
        (a.role, b.role),
        (CounterpartyRole::Party1, CounterpartyRole::Party2) | (CounterpartyRole::Party2, CounterpartyRole::Party1)
    );
    if !roles_ok {
        out.push(Violation::CounterpartyRoles);
    }
    if a.party_ref == b.party_ref {
        out.push(Violation::SameCounterparty);
    }
    if tp.product.payouts.is_empty() {
        out.push(Violation::NoPayouts);
    }

    let mut unresolved: Vec<&PartyId> = Vec::new();
    for (i, payout) in tp.product.payouts.iter().enumerate() {
        for party in [payout.payer(), payout.receiver()] {
            if !tp.has_party(party) && !unresolved.contains(&party) {
                unresolved.push(party);
            }
        }
        if payout.payer() == payout.receiver() {
            out.push(Violation::SamePayerAndReceiver { payout_index: i });
        }
        let Payout::InterestRate(irp) = payout else { continue };
        if irp.notional <= Decimal::ZERO {
            out.push(Violation::NonPositiveNotional { payout_index: i });
        }
        if let RateSpecification::Floating { tenor_months: 0, .. } = irp.rate {
            out.push(Violation::NonPositiveTenor { payout_index: i });
        }
        if irp.periods.effective_date >= irp.periods.termination_date {
            out.push(Violation::EffectiveNotBeforeTermination { payout_index: i });
        } else if irp.periods.period_count().is_none() {
            out.push(Violation::PeriodMultiple { payout_index: i });
        }
    }
    out.extend(unresolved.into_iter().map(|p| Violation::UnresolvedPartyReference { party_ref: p.clone() }));
    ValidationReport(out)
}

/// Product checks plus the trade-level rule that the trade date precedes
/// every accrual start.
pub fn validate_trade(trade: &Trade) -> ValidationReport {
    let mut report = validate_tradable_product(&trade.tradable_product);
    for (i, payout) in trade.tradable_product.product.payouts.iter().enumerate() {
        if let Some(irp) = payout.as_interest_rate() {
            if trade.trade_date > irp.periods.effective_date {
                report.0.push(Violation::TradeDateAfterEffective { payout_index: i });
            }
        }
    }
    report
}
