//! Product model: payouts, their economic terms, and qualification of a
//! product by inspecting which payouts it is built from.

use chrono::{Datelike, Months, NaiveDate};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::party::{Counterparty, PartyId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DayCountConvention {
    #[serde(rename = "ACT_360")]
    Act360,
    #[serde(rename = "ACT_365F")]
    Act365F,
    #[serde(rename = "THIRTY_360_US")]
    Thirty360Us,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PaymentFrequency {
    Monthly,
    Quarterly,
    SemiAnnual,
    Annual,
}

impl PaymentFrequency {
    pub const fn months(self) -> u32 {
        match self {
            Self::Monthly => 1,
            Self::Quarterly => 3,
            Self::SemiAnnual => 6,
            Self::Annual => 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BusinessDayConvention {
    None,
    Following,
    ModifiedFollowing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HolidayCalendar {
    NoHolidays,
    WeekendsOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE", rename_all_fields = "camelCase")]
pub enum RateSpecification {
    Fixed { rate: Decimal },
    Floating { index: String, tenor_months: u32, spread: Decimal },
}

impl RateSpecification {
    pub fn is_fixed(&self) -> bool {
        matches!(self, Self::Fixed { .. })
    }

    pub fn is_floating(&self) -> bool {
        matches!(self, Self::Floating { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CalculationPeriodDates {
    pub effective_date: NaiveDate,
    pub termination_date: NaiveDate,
    pub frequency: PaymentFrequency,
    pub business_day_convention: BusinessDayConvention,
    pub calendar: HolidayCalendar,
}

impl CalculationPeriodDates {
    /// Number of regular periods between effective and termination date, or
    /// `None` when the span is empty, reversed, or not a whole multiple of the
    /// frequency.
    pub fn period_count(&self) -> Option<u32> {
        if self.effective_date >= self.termination_date {
            return None;
        }
        let (e, t) = (self.effective_date, self.termination_date);
        let total = (t.year() - e.year()) * 12 + t.month() as i32 - e.month() as i32;
        let step = self.frequency.months() as i32;
        if total <= 0 || total % step != 0 {
            return None;
        }
        let rolled = e.checked_add_months(Months::new(total as u32))?;
        (rolled == t).then_some((total / step) as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterestRatePayout {
    pub payer_party_ref: PartyId,
    pub receiver_party_ref: PartyId,
    pub notional: Decimal,
    pub currency: String,
    pub rate: RateSpecification,
    pub day_count: DayCountConvention,
    pub periods: CalculationPeriodDates,
}

/// Present only so that equity swaps can be recognised; it carries no cashflows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquityPayout {
    pub payer_party_ref: PartyId,
    pub receiver_party_ref: PartyId,
    pub underlier: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "payoutType", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Payout {
    InterestRate(InterestRatePayout),
    Equity(EquityPayout),
}

impl Payout {
    pub fn payer(&self) -> &PartyId {
        match self {
            Self::InterestRate(p) => &p.payer_party_ref,
            Self::Equity(p) => &p.payer_party_ref,
        }
    }

    pub fn receiver(&self) -> &PartyId {
        match self {
            Self::InterestRate(p) => &p.receiver_party_ref,
            Self::Equity(p) => &p.receiver_party_ref,
        }
    }

    pub fn as_interest_rate(&self) -> Option<&InterestRatePayout> {
        match self {
            Self::InterestRate(p) => Some(p),
            Self::Equity(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Product {
    pub payouts: Vec<Payout>,
}

impl Product {
    pub fn interest_rate_payouts(&self) -> impl Iterator<Item = &InterestRatePayout> {
        self.payouts.iter().filter_map(Payout::as_interest_rate)
    }

    pub fn fixed_leg(&self) -> Option<&InterestRatePayout> {
        self.interest_rate_payouts().find(|p| p.rate.is_fixed())
    }

    pub fn floating_leg(&self) -> Option<&InterestRatePayout> {
        self.interest_rate_payouts().find(|p| p.rate.is_floating())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProductQualification {
    InterestRateSwapFixedFloat,
    InterestRateBasisSwap,
    EquitySwap,
    Unqualified,
}

/// Infer what kind of product this is from the payouts it contains.
///
/// The result depends only on the multiset of payout kinds, never on their
/// order or on any label carried by the product.
pub fn qualify_product(product: &Product) -> ProductQualification {
    let mut fixed = 0usize;
    let mut floating = 0usize;
    let mut equity = 0usize;
    for payout in &product.payouts {
        match payout {
            Payout::InterestRate(p) if p.rate.is_fixed() => fixed += 1,
            Payout::InterestRate(_) => floating += 1,
            Payout::Equity(_) => equity += 1,
        }
    }
    match (fixed, floating, equity) {
        (1, 1, 0) => ProductQualification::InterestRateSwapFixedFloat,
        (0, 2, 0) => ProductQualification::InterestRateBasisSwap,
        (1, 0, 1) | (0, 1, 1) => ProductQualification::EquitySwap,
        _ => ProductQualification::Unqualified,
    }
}

/// Notional and rate terms per leg, for display.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PriceQuantity {
    pub notional: Decimal,
    pub currency: String,
    pub rate: RateSpecification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TradableProduct {
    pub product: Product,
    pub counterparties: [Counterparty; 2],
}

impl TradableProduct {
    pub fn price_quantity_summary(&self) -> Vec<PriceQuantity> {
        self.product
            .interest_rate_payouts()
            .map(|p| PriceQuantity { notional: p.notional, currency: p.currency.clone(), rate: p.rate.clone() })
            .collect()
    }

    pub fn qualify(&self) -> ProductQualification {
        qualify_product(&self.product)
    }

    pub fn has_party(&self, party: &PartyId) -> bool {
        self.counterparties.iter().any(|c| &c.party_ref == party)
    }
}
