//! Trade, product and event types shared by every other module, together
//! with the pure functions that qualify and validate them.

mod event;
mod lineage;
mod party;
mod product;
mod trade;
mod validate;

pub use event::{qualify_business_event, BusinessEvent, BusinessEventType, EventId, PrimitiveEvent, PrimitiveKind};
pub use lineage::{check_lineage, LineageBreak, LineageReport};
pub use party::{Counterparty, CounterpartyRole, Party, PartyId};
pub use product::{
    qualify_product, BusinessDayConvention, CalculationPeriodDates, DayCountConvention, EquityPayout, HolidayCalendar,
    InterestRatePayout, PaymentFrequency, Payout, PriceQuantity, Product, ProductQualification, RateSpecification,
    TradableProduct,
};
pub use trade::{ResetRecord, Trade, TradeId, TradeState, TradeStatus, Transfer, TransferId, TransferStatus};
pub use validate::{validate_tradable_product, validate_trade, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("a business event needs at least one primitive event")]
    EmptyPrimitives,
}

#[cfg(test)]
mod tests;
