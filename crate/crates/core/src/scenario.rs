//! Ready-made swap terms and the reference end-to-end run used by the CLI,
//! the FFI smoke tests and the acceptance suite.

use chrono::{NaiveDate, NaiveDateTime};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::model::{
    BusinessDayConvention, CalculationPeriodDates, Counterparty, CounterpartyRole, DayCountConvention, HolidayCalendar,
    InterestRatePayout, PartyId, PaymentFrequency, Payout, Product, RateSpecification, TradableProduct, Trade, TradeId,
};

/// Economic terms of a fixed-vs-floating swap. Party 1 pays fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SwapTerms {
    pub notional: Decimal,
    pub currency: String,
    pub trade_date: NaiveDate,
    pub effective_date: NaiveDate,
    pub termination_date: NaiveDate,
    pub fixed_rate: Decimal,
    pub fixed_frequency: PaymentFrequency,
    pub fixed_day_count: DayCountConvention,
    pub floating_index: String,
    pub floating_tenor_months: u32,
    pub floating_spread: Decimal,
    pub floating_frequency: PaymentFrequency,
    pub floating_day_count: DayCountConvention,
    pub business_day_convention: BusinessDayConvention,
    pub calendar: HolidayCalendar,
}

impl SwapTerms {
    /// 10,000,000 USD, one year quarterly, 2% fixed against SIM-IBOR 3M, ACT/360.
    pub fn standard() -> Self {
        let d = |y, m, day| NaiveDate::from_ymd_opt(y, m, day).expect("valid date");
        Self {
            notional: Decimal::from(10_000_000),
            currency: "USD".into(),
            trade_date: d(2024, 1, 10),
            effective_date: d(2024, 1, 15),
            termination_date: d(2025, 1, 15),
            fixed_rate: Decimal::new(2, 2),
            fixed_frequency: PaymentFrequency::Quarterly,
            fixed_day_count: DayCountConvention::Act360,
            floating_index: "SIM-IBOR".into(),
            floating_tenor_months: 3,
            floating_spread: Decimal::ZERO,
            floating_frequency: PaymentFrequency::Quarterly,
            floating_day_count: DayCountConvention::Act360,
            business_day_convention: BusinessDayConvention::ModifiedFollowing,
            calendar: HolidayCalendar::WeekendsOnly,
        }
    }

    fn periods(&self, frequency: PaymentFrequency) -> CalculationPeriodDates {
        CalculationPeriodDates {
            effective_date: self.effective_date,
            termination_date: self.termination_date,
            frequency,
            business_day_convention: self.business_day_convention,
            calendar: self.calendar,
        }
    }

    pub fn to_trade(&self, trade_id: impl Into<TradeId>, party1: &PartyId, party2: &PartyId) -> Trade {
        let fixed = InterestRatePayout {
            payer_party_ref: party1.clone(),
            receiver_party_ref: party2.clone(),
            notional: self.notional,
            currency: self.currency.clone(),
            rate: RateSpecification::Fixed { rate: self.fixed_rate },
            day_count: self.fixed_day_count,
            periods: self.periods(self.fixed_frequency),
        };
        let floating = InterestRatePayout {
            payer_party_ref: party2.clone(),
            receiver_party_ref: party1.clone(),
            notional: self.notional,
            currency: self.currency.clone(),
            rate: RateSpecification::Floating {
                index: self.floating_index.clone(),
                tenor_months: self.floating_tenor_months,
                spread: self.floating_spread,
            },
            day_count: self.floating_day_count,
            periods: self.periods(self.floating_frequency),
        };
        Trade {
            trade_id: trade_id.into(),
            trade_date: self.trade_date,
            tradable_product: TradableProduct {
                product: Product { payouts: vec![Payout::InterestRate(fixed), Payout::InterestRate(floating)] },
                counterparties: [
                    Counterparty::new(party1.clone(), CounterpartyRole::Party1),
                    Counterparty::new(party2.clone(), CounterpartyRole::Party2),
                ],
            },
        }
    }
}

/// Clock start of the reference run.
pub fn standard_clock_start() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2024, 1, 10).and_then(|d| d.and_hms_opt(9, 0, 0)).expect("valid timestamp")
}
